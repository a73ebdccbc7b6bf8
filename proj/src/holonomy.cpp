#include "surfrep/holonomy.hpp"

#include <algorithm>
#include <cmath>

#include "surfrep/errors.hpp"

namespace surfrep {

namespace {

constexpr int kMaxSubsteps = 1 << 14;

struct Segment {
  double t0, t1;
};

/// [t0, t1] cut at the grid nodes it crosses.
std::vector<Segment> segments(const PathConnection& conn, double t0, double t1) {
  std::vector<Segment> out;
  double start = t0;
  for (double node : conn.nodes()) {
    if (node <= t0 || node >= t1) continue;
    out.push_back({start, node});
    start = node;
  }
  if (t1 > start) out.push_back({start, t1});
  return out;
}

/// RK4 integration of a' = -A a over [t0, t1], reprojecting to the group after every step.
/// If trace is non-null it receives (t, a(t)) at every step boundary, starting with (t0, start).
GroupElement integrate(const PathConnection& conn, double t0, double t1, int substeps, const GroupElement& start,
                       std::vector<std::pair<double, GroupElement>>* trace) {
  const LieGroupModel& g = conn.group();
  GroupElement a = start;
  if (trace) trace->emplace_back(t0, a);
  for (const Segment& seg : segments(conn, t0, t1)) {
    const double h = (seg.t1 - seg.t0) / substeps;
    for (int k = 0; k < substeps; ++k) {
      const double t = seg.t0 + k * h;
      const ComplexMatrix m0 = -g.to_matrix(conn.at(t));
      const ComplexMatrix mh = -g.to_matrix(conn.at(t + 0.5 * h));
      const ComplexMatrix m1 = -g.to_matrix(conn.at(t + h));
      const ComplexMatrix k1 = m0 * a;
      const ComplexMatrix k2 = mh * (a + 0.5 * h * k1);
      const ComplexMatrix k3 = mh * (a + 0.5 * h * k2);
      const ComplexMatrix k4 = m1 * (a + h * k3);
      a = g.project_to_group(a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
      if (trace) trace->emplace_back(t + h, a);
    }
  }
  return a;
}

void check_range(const PathConnection& conn, double t) {
  if (!(t >= 0.0 && t <= conn.length())) throw InputError("transport time outside [0, b]");
}

AlgebraVector derivative_at_resolution(const PathConnection& conn, const Variation& var, int substeps) {
  const LieGroupModel& g = conn.group();
  std::vector<std::pair<double, GroupElement>> trace;
  integrate(conn, 0.0, conn.length(), substeps, g.identity(), &trace);
  AlgebraVector integral = AlgebraVector::Zero(g.algebra_dim());
  // Composite Simpson over each run of `substeps` steps (one grid cell).
  const std::size_t cells = (trace.size() - 1) / static_cast<std::size_t>(substeps);
  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t base = c * static_cast<std::size_t>(substeps);
    const double h = trace[base + 1].first - trace[base].first;
    for (int k = 0; k <= substeps; ++k) {
      const auto& [t, a] = trace[base + static_cast<std::size_t>(k)];
      const double w = (k == 0 || k == substeps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      integral += (w * h / 3.0) * (g.Ad(a.adjoint()) * var.at(t));
    }
  }
  return -integral;
}

}  // namespace

PathConnection::PathConnection(LieGroupModel group, std::vector<double> nodes, RealMatrix values)
    : group_(std::move(group)), nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2) throw InputError("path grid needs at least two nodes");
  if (nodes_.front() != 0.0) throw InputError("path grid must start at t = 0");
  for (std::size_t k = 1; k < nodes_.size(); ++k)
    if (!(nodes_[k] > nodes_[k - 1])) throw InputError("path grid must be strictly increasing");
  if (values_.rows() != static_cast<Eigen::Index>(nodes_.size()) || values_.cols() != group_.algebra_dim())
    throw InputError("connection samples must have one row per node and dim g columns");
  if (!values_.allFinite()) throw InputError("connection samples must be finite");
}

AlgebraVector PathConnection::at(double t) const {
  if (t <= nodes_.front()) return values_.row(0).transpose();
  if (t >= nodes_.back()) return values_.row(values_.rows() - 1).transpose();
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  const auto k = static_cast<Eigen::Index>(it - nodes_.begin());
  const double t0 = nodes_[static_cast<std::size_t>(k - 1)], t1 = nodes_[static_cast<std::size_t>(k)];
  const double w = (t - t0) / (t1 - t0);
  return ((1.0 - w) * values_.row(k - 1) + w * values_.row(k)).transpose();
}

PathConnection PathConnection::transformed(const RealMatrix& op) const {
  return PathConnection(group_, nodes_, values_ * op.transpose());
}

PathConnection PathConnection::plus(double s, const PathConnection& variation) const {
  if (variation.nodes_ != nodes_) throw InputError("variation must live on the connection's grid");
  return PathConnection(group_, nodes_, values_ + s * variation.values_);
}

PathConnection PathConnection::reversed() const {
  const double b = length();
  std::vector<double> nodes(nodes_.size());
  RealMatrix values(values_.rows(), values_.cols());
  const std::size_t last = nodes_.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    nodes[k] = k == 0 ? 0.0 : (k == last ? b : b - nodes_[last - k]);
    values.row(static_cast<Eigen::Index>(k)) = -values_.row(static_cast<Eigen::Index>(last - k));
  }
  return PathConnection(group_, std::move(nodes), std::move(values));
}

GroupElement transport_between(const PathConnection& conn, double t0, double t1, const TransportOptions& opts) {
  check_range(conn, t0);
  check_range(conn, t1);
  if (t1 < t0) return transport_between(conn, t1, t0, opts).adjoint();
  const GroupElement id = conn.group().identity();
  if (opts.substeps_per_cell > 0) return integrate(conn, t0, t1, opts.substeps_per_cell, id, nullptr);
  GroupElement prev = integrate(conn, t0, t1, 1, id, nullptr);
  for (int n = 2; n <= kMaxSubsteps; n *= 2) {
    GroupElement next = integrate(conn, t0, t1, n, id, nullptr);
    if ((next - prev).norm() < opts.tol) return next;
    prev = std::move(next);
  }
  throw ConvergenceError("transport did not reach the requested tolerance");
}

GroupElement horizontal_transport(const PathConnection& conn, double t, const TransportOptions& opts) {
  return transport_between(conn, 0.0, t, opts);
}

GroupElement holonomy(const PathConnection& conn, const TransportOptions& opts) {
  return horizontal_transport(conn, conn.length(), opts);
}

AlgebraVector holonomy_derivative(const PathConnection& conn, const Variation& var, const TransportOptions& opts) {
  if (var.nodes() != conn.nodes()) throw InputError("variation must live on the connection's grid");
  if (opts.substeps_per_cell > 0) {
    const int n = opts.substeps_per_cell + (opts.substeps_per_cell % 2);
    return derivative_at_resolution(conn, var, n);
  }
  AlgebraVector prev = derivative_at_resolution(conn, var, 2);
  for (int n = 4; n <= kMaxSubsteps; n *= 2) {
    AlgebraVector next = derivative_at_resolution(conn, var, n);
    if ((next - prev).norm() < opts.tol) return next;
    prev = std::move(next);
  }
  throw ConvergenceError("holonomy derivative did not reach the requested tolerance");
}

AlgebraVector finite_difference_holonomy_derivative(const PathConnection& conn, const Variation& var, double s,
                                                    const TransportOptions& opts) {
  const LieGroupModel& g = conn.group();
  const GroupElement base_inv = holonomy(conn, opts).adjoint();
  const GroupElement plus = holonomy(conn.plus(s, var), opts);
  const GroupElement minus = holonomy(conn.plus(-s, var), opts);
  return (g.log(base_inv * plus) - g.log(base_inv * minus)) / (2.0 * s);
}

double conjugation_invariance_check(const PathConnection& conn, const GroupElement& x, const TransportOptions& opts) {
  const LieGroupModel& g = conn.group();
  const GroupElement gauged = holonomy(conn.transformed(g.Ad(x)), opts);
  return frobenius_distance(gauged, x * holonomy(conn, opts) * x.adjoint());
}

}  // namespace surfrep
