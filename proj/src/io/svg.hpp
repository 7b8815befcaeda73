#pragma once

#include <string>

#include "gadgets/witness.hpp"

namespace bqw::io {

constexpr int kCanvas = 800;

// Deterministic drawing of a planar witness: points coloured by the depth of
// the first derivation node naming them, unit edges solid, claim pairs
// dashed. PreconditionError unless dim == 2.
std::string render_svg(const WitnessSet& w);

}  // namespace bqw::io
