#pragma once

#include <string>

#include "gadgets/witness.hpp"

namespace bqw::gadgets {

// Each constructor forces the relation between the given pair and returns
// the realized witness. Preconditions are checked exactly; violations throw
// PreconditionError. Distances d, a, b, c must be positive and constructible.

WitnessSet unit_pair(const Point& x, const Point& y);
// |xy| = sqrt(2 + 2/n) d
WitnessSet scale_up(const Point& x, const Point& y, const Number& d);
// |xy| = (2/n) d, forced as an upper bound
WitnessSet bound_gadget(const Point& x, const Point& y, const Number& d);
// |xy| = 2d
WitnessSet double_gadget(const Point& x, const Point& y, const Number& d);
// |xy| = k d
WitnessSet multiple(const Point& x, const Point& y, const Number& d, int k);
// |xy| = d / k
WitnessSet divide(const Point& x, const Point& y, const Number& d, int k);
// |f(x)f(y)| within eps of |xy|
WitnessSet approx_gadget(const Point& x, const Point& y, const Number& eps);
// |xy| = sqrt(a^2 - b^2), a > b
WitnessSet pyth_diff(const Point& x, const Point& y, const Number& a, const Number& b);

enum class Mode { Diff, Sum };
// |xy| = a - b (a > b) or a + b
WitnessSet diff_sum(const Point& x, const Point& y, const Number& a, const Number& b, Mode mode);
// |AB| = a b / c
WitnessSet ratio(const Point& A, const Point& B, const Number& a, const Number& b, const Number& c);
// |xy| = sqrt(a)
WitnessSet sqrt_gadget(const Point& x, const Point& y, const Number& a);

// Parses a distance expression and forces |anchor, anchor + v direction| = v.
// `direction` must have exact unit length.
WitnessSet compile(const std::string& expr, int n, const Point& anchor, const Point& direction);
WitnessSet compile(const std::string& expr, int n);

}  // namespace bqw::gadgets
