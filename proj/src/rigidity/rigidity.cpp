#include "rigidity/rigidity.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"
#include "gadgets/assembly.hpp"

namespace bqw::rigidity {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Rigid: return "rigid";
    case Verdict::Flexible: return "flexible";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::vector<Number> phi_map(const std::vector<Point>& p, const Point& y) {
  const std::size_t n = y.size();
  if (p.size() != n + 1) throw PreconditionError("phi needs n+1 simplex vertices");
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (geom::dist_sq(p[i], p[j]) != Number(1)) {
        throw PreconditionError("phi anchors are not a unit simplex");
      }
    }
  }
  std::vector<Number> out;
  for (const auto& q : p) out.push_back(geom::dist_sq(q, y).sqrt());
  return out;
}

namespace {

Eigen::VectorXd vertex(const Framework& f, int i) {
  const auto& v = f.vertices[static_cast<std::size_t>(i)];
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_framework(const Framework& f) {
  if (f.dim < 1) throw PreconditionError("framework dimension must be positive");
  for (const auto& v : f.vertices) {
    if (static_cast<int>(v.size()) != f.dim) throw PreconditionError("vertex dimension mismatch");
  }
  const int nv = static_cast<int>(f.vertices.size());
  for (const auto& [a, b] : f.edges) {
    if (a < 0 || b < 0 || a >= nv || b >= nv || a == b) throw PreconditionError("bad edge index");
  }
}

// Dimension of the affine hull of the vertices.
int affine_dim(const Framework& f, double tol) {
  const Eigen::Index nv = static_cast<Eigen::Index>(f.vertices.size());
  if (nv < 2) return 0;
  Eigen::MatrixXd m(nv - 1, f.dim);
  const Eigen::VectorXd v0 = vertex(f, 0);
  for (Eigen::Index i = 1; i < nv; ++i) m.row(i - 1) = (vertex(f, static_cast<int>(i)) - v0).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) r += svd.singularValues()(i) > tol;
  return r;
}

}  // namespace

Eigen::MatrixXd rigidity_matrix(const Framework& f) {
  check_framework(f);
  const int n = f.dim;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f.edges.size()),
                                            static_cast<Eigen::Index>(n * f.vertices.size()));
  for (std::size_t e = 0; e < f.edges.size(); ++e) {
    const auto [u, v] = f.edges[e];
    const Eigen::VectorXd d = vertex(f, u) - vertex(f, v);
    const auto row = static_cast<Eigen::Index>(e);
    m.block(row, static_cast<Eigen::Index>(u) * n, 1, n) = d.transpose();
    m.block(row, static_cast<Eigen::Index>(v) * n, 1, n) = -d.transpose();
  }
  return m;
}

void check_edges(const Framework& f, double tol) {
  check_framework(f);
  for (const auto& [a, b] : f.edges) {
    const double len = (vertex(f, a) - vertex(f, b)).norm();
    if (std::fabs(len - 1) > tol) {
      throw PreconditionError("edge " + std::to_string(a) + "-" + std::to_string(b) +
                              " has length " + std::to_string(len));
    }
  }
}

RigidityReport is_rigid(const Framework& f, double tol) {
  check_framework(f);
  RigidityReport r;
  const int n = f.dim;
  const int nv = static_cast<int>(f.vertices.size());
  for (int i = 0; i < nv; ++i) {
    for (int j = i + 1; j < nv; ++j) {
      if ((vertex(f, i) - vertex(f, j)).norm() <= tol) {
        r.note = "coincident vertices " + std::to_string(i) + " and " + std::to_string(j);
        return r;
      }
    }
  }
  // Trivial motions of a configuration whose affine hull has dimension k.
  const int k = affine_dim(f, tol);
  const int trivial = n * (n + 1) / 2 - (n - k) * (n - k - 1) / 2;
  r.expected_rank = std::max(0, n * nv - trivial);
  if (!f.edges.empty()) {
    const Eigen::MatrixXd m = rigidity_matrix(f);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      r.singular_values.push_back(s(i));
      r.rank += s(i) > tol;
    }
  }
  if (r.expected_rank > 0 && r.expected_rank <= static_cast<int>(r.singular_values.size())) {
    r.margin = r.singular_values[static_cast<std::size_t>(r.expected_rank - 1)];
  }
  if (r.rank == r.expected_rank) {
    r.verdict = Verdict::Rigid;
  } else if (r.rank > r.expected_rank) {
    r.note = "rank exceeds the rigid-motion bound";
  } else if (r.margin > tol * 1e-2) {
    r.note = "singular value within two decades of the tolerance";
  } else {
    r.verdict = Verdict::Flexible;
  }
  return r;
}

WitnessSet assemble_from_rigid(const Framework& f, int alpha, int beta, const Number& eps) {
  check_edges(f);
  const int nv = static_cast<int>(f.vertices.size());
  if (alpha < 0 || beta < 0 || alpha >= nv || beta >= nv || alpha == beta) {
    throw PreconditionError("alpha and beta must be two distinct vertices");
  }
  if (eps.sign() <= 0) throw PreconditionError("eps must be positive");
  const RigidityReport rep = is_rigid(f);
  if (rep.verdict != Verdict::Rigid) {
    throw PreconditionError(std::string("framework is not rigid (") + verdict_name(rep.verdict) + ")");
  }
  const int n = f.dim;
  if (n < 2) throw PreconditionError("dimension must be at least 2");
  gadgets::Assembly as(n);
  geom::Frame axes;
  for (int k = 0; k < n; ++k) axes.push_back(geom::axis(n, k));
  std::vector<int> anchors;
  for (const auto& p : geom::regular_simplex(n + 1, Number(1), geom::origin(n), axes)) {
    anchors.push_back(as.add(p));
  }
  // Dyadic rounding: error per coordinate at most 2^-43.
  const mpz_class den = mpz_class(1) << 42;
  std::vector<int> ids;
  for (const auto& v : f.vertices) {
    Point p;
    for (double c : v) {
      mpz_class num;
      mpz_set_d(num.get_mpz_t(), std::nearbyint(std::ldexp(c, 42)));
      p.push_back(Number::rational(num, den));
    }
    ids.push_back(as.add(p));
  }
  GadgetNode root = gadgets::make_node("assemble", {ids[static_cast<std::size_t>(alpha)],
                                                    ids[static_cast<std::size_t>(beta)]});
  gadgets::add_param(root, "eps", eps);
  for (int x : ids) {
    for (int p : anchors) {
      if (x != p) as.approx(p, x, eps, root);
    }
  }
  Claim c;
  c.kind = ClaimKind::ExactDistance;
  c.points = root.pair;
  c.value = geom::dist_sq(as.at(c.points[0]), as.at(c.points[1])).sqrt();
  return as.finish({c}, std::move(root), true);
}

void edge_residuals(const std::vector<std::pair<int, int>>& edges, int dim, const Eigen::VectorXd& x,
                    Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
  r.resize(static_cast<Eigen::Index>(edges.size()));
  if (jac) *jac = Eigen::MatrixXd::Zero(r.size(), x.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    const Eigen::VectorXd d = x.segment(u * dim, dim) - x.segment(v * dim, dim);
    const double len = d.norm();
    r(static_cast<Eigen::Index>(e)) = len - 1;
    if (jac && len > 0) {
      jac->block(static_cast<Eigen::Index>(e), u * dim, 1, dim) = d.transpose() / len;
      jac->block(static_cast<Eigen::Index>(e), v * dim, 1, dim) = -d.transpose() / len;
    }
  }
}

namespace {

using Points = std::vector<Eigen::VectorXd>;

double dist(const Points& g, int a, int b) {
  return (g[static_cast<std::size_t>(a)] - g[static_cast<std::size_t>(b)]).norm();
}

// Smallest singular value of the centred point set (0 if fewer than n+1 points).
double flatness(const Claim& c, const Points& g) {
  const Eigen::Index n = g.front().size();
  const Eigen::Index m = static_cast<Eigen::Index>(c.points.size());
  if (m < n + 1) return 0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  for (int i : c.points) mean += g[static_cast<std::size_t>(i)];
  mean /= static_cast<double>(m);
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index k = 0; k < m; ++k) {
    a.row(k) = (g[static_cast<std::size_t>(c.points[static_cast<std::size_t>(k)])] - mean).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(n - 1);
}

Points unpack(const Eigen::VectorXd& x, int dim) {
  Points g;
  for (Eigen::Index i = 0; i < x.size(); i += dim) g.push_back(x.segment(i, dim));
  return g;
}

// Claim quantity and the value that would violate it.
struct Push {
  double (*quantity)(const Claim&, const Points&);
  double target;
};

double q_pair(const Claim& c, const Points& g) { return dist(g, c.points[0], c.points[1]); }
double q_diff(const Claim& c, const Points& g) {
  return dist(g, c.points[0], c.points[1]) - dist(g, c.points[2], c.points[3]);
}

Push push_for(const Claim& c, double margin, int side) {
  const double s = side > 0 ? 1.0 : -1.0;
  switch (c.kind) {
    case ClaimKind::ExactDistance: return {q_pair, c.value.to_double() + s * margin};
    case ClaimKind::UpperBound: return {q_pair, c.value.to_double() + margin};
    case ClaimKind::Approx:
      return {q_pair, c.value.to_double() + s * (margin + c.epsilon.to_double())};
    case ClaimKind::Distinct: return {q_pair, 0};
    case ClaimKind::EqualDistance: return {q_diff, s * margin};
    case ClaimKind::LessThan: return {q_diff, margin};
    case ClaimKind::Hyperplane: return {flatness, margin};
  }
  return {q_pair, 0};
}

struct Problem {
  const std::vector<std::pair<int, int>>* edges;
  int dim;
  const Claim* claim = nullptr;  // penalised claim, if any
  Push push{};
};

// Residuals and sparse Jacobian; the optional penalty row is differentiated
// numerically over the claim's coordinates.
void evaluate(const Problem& pb, const Eigen::VectorXd& x, Eigen::VectorXd& r,
              Eigen::SparseMatrix<double>* jac) {
  const auto& edges = *pb.edges;
  const Eigen::Index ne = static_cast<Eigen::Index>(edges.size());
  r.resize(ne + (pb.claim ? 1 : 0));
  std::vector<Eigen::Triplet<double>> trip;
  const int d = pb.dim;
  for (Eigen::Index e = 0; e < ne; ++e) {
    const auto [u, v] = edges[static_cast<std::size_t>(e)];
    const Eigen::VectorXd diff = x.segment(u * d, d) - x.segment(v * d, d);
    const double len = diff.norm();
    r(e) = len - 1;
    if (jac && len > 0) {
      for (int k = 0; k < d; ++k) {
        trip.emplace_back(e, u * d + k, diff(k) / len);
        trip.emplace_back(e, v * d + k, -diff(k) / len);
      }
    }
  }
  if (pb.claim) {
    r(ne) = pb.push.quantity(*pb.claim, unpack(x, d)) - pb.push.target;
    if (jac) {
      std::vector<int> pts = pb.claim->points;
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      Eigen::VectorXd y = x;
      const double h = 1e-7;
      for (int p : pts) {
        for (int k = 0; k < d; ++k) {
          const Eigen::Index idx = p * d + k;
          y(idx) = x(idx) + h;
          const double fp = pb.push.quantity(*pb.claim, unpack(y, d));
          y(idx) = x(idx) - h;
          const double fm = pb.push.quantity(*pb.claim, unpack(y, d));
          y(idx) = x(idx);
          trip.emplace_back(ne, idx, (fp - fm) / (2 * h));
        }
      }
    }
  }
  if (jac) {
    jac->resize(r.size(), x.size());
    jac->setFromTriplets(trip.begin(), trip.end());
  }
}

// Levenberg-Marquardt with identity damping.
void minimize(const Problem& pb, Eigen::VectorXd& x, int max_iterations) {
  Eigen::VectorXd r, r_new;
  Eigen::SparseMatrix<double> J;
  evaluate(pb, x, r, &J);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  Eigen::SparseMatrix<double> I(x.size(), x.size());
  I.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  for (int it = 0; it < max_iterations && cost > 1e-30; ++it) {
    const Eigen::SparseMatrix<double> H = Eigen::SparseMatrix<double>(J.transpose() * J);
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < 1e-300) break;
    bool improved = false;
    while (lambda < 1e12) {
      const Eigen::SparseMatrix<double> A = H + lambda * I;
      solver.compute(A);
      if (solver.info() != Eigen::Success) {
        lambda *= 10;
        continue;
      }
      const Eigen::VectorXd step = solver.solve(-g);
      const Eigen::VectorXd x_new = x + step;
      evaluate(pb, x_new, r_new, nullptr);
      const double c_new = r_new.squaredNorm();
      if (c_new < cost) {
        x = x_new;
        cost = c_new;
        lambda = std::max(lambda / 10, 1e-15);
        improved = true;
        break;
      }
      lambda *= 10;
    }
    if (!improved) break;
    evaluate(pb, x, r, &J);
  }
}

}  // namespace

double claim_deviation(const Claim& c, const std::vector<Eigen::VectorXd>& g) {
  switch (c.kind) {
    case ClaimKind::ExactDistance: return std::fabs(q_pair(c, g) - c.value.to_double());
    case ClaimKind::UpperBound: return std::max(0.0, q_pair(c, g) - c.value.to_double());
    case ClaimKind::Approx:
      return std::max(0.0, std::fabs(q_pair(c, g) - c.value.to_double()) - c.epsilon.to_double());
    case ClaimKind::Distinct: return q_pair(c, g) < 1e-9 ? 1.0 : 0.0;
    case ClaimKind::EqualDistance: return std::fabs(q_diff(c, g));
    case ClaimKind::LessThan: return std::max(0.0, q_diff(c, g));
    case ClaimKind::Hyperplane: return flatness(c, g);
  }
  return 0;
}

SearchReport falsify_search(const WitnessSet& w, const SearchOptions& opt) {
  if (w.claims.empty()) throw PreconditionError("witness has no claim");
  if (w.points.empty()) throw PreconditionError("witness has no points");
  const int d = w.dim;
  const Eigen::Index nvar = static_cast<Eigen::Index>(w.points.size()) * d;
  Eigen::VectorXd base(nvar);
  for (std::size_t i = 0; i < w.points.size(); ++i) {
    const auto a = approx_point(w.points[i]);
    for (int k = 0; k < d; ++k) base(static_cast<Eigen::Index>(i) * d + k) = a[static_cast<std::size_t>(k)];
  }
  const double lo = base.minCoeff(), hi = base.maxCoeff();
  const double span = std::max(1.0, hi - lo);

  SearchReport rep;
  rep.best_residual = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(lo - 0.5, lo + span + 0.5);
  const double noise[] = {0.01, 0.1, 0.5};
  std::vector<NearFeasible> found;
  for (int t = 0; t < opt.restarts; ++t) {
    const int mode = t % 4;
    Eigen::VectorXd x(nvar);
    for (Eigen::Index i = 0; i < nvar; ++i) {
      x(i) = mode < 3 ? base(i) + noise[mode] * normal(rng) : uniform(rng);
    }
    Problem pb{&w.unit_edges, d};
    pb.claim = &w.claims.front();
    pb.push = push_for(*pb.claim, opt.margin, (t / 4) % 2 == 0 ? 1 : -1);
    minimize(pb, x, opt.max_iterations);
    pb.claim = nullptr;
    minimize(pb, x, opt.max_iterations);

    Eigen::VectorXd r;
    edge_residuals(w.unit_edges, d, x, r, nullptr);
    const double residual = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
    rep.best_residual = std::min(rep.best_residual, residual);
    ++rep.trials;
    if (residual >= opt.unit_tol) continue;
    const Points g = unpack(x, d);
    double dev = 0;
    for (const auto& c : w.claims) dev = std::max(dev, claim_deviation(c, g));
    ++rep.near_feasible;
    if (dev > opt.violation) ++rep.violations;
    rep.worst_deviation = std::max(rep.worst_deviation, dev);
    found.push_back({t, residual, dev});
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const NearFeasible& a, const NearFeasible& b) { return a.deviation > b.deviation; });
  if (static_cast<int>(found.size()) > opt.keep) found.resize(static_cast<std::size_t>(opt.keep));
  rep.maps = std::move(found);
  return rep;
}

}  // namespace bqw::rigidity
