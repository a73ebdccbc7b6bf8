#pragma once

// Parallel transport along a path for a connection given in a trivialization.
//
// The connection enters as the algebra-valued function t -> A(t) (connection form
// on the path velocity), sampled on grid nodes and linearly interpolated.  The
// horizontal lift solves a'(t) = -A(t) a(t), a(0) = e, and the holonomy is a(b).
// Varying A by s theta changes the holonomy by
//   Hol^-1 d/ds Hol(A + s theta) = -int_0^b Ad(a(t)^-1) theta(t) dt.

#include <vector>

#include "surfrep/lie_model.hpp"

namespace surfrep {

/// Piecewise-linear algebra-valued function on [0, b].
class PathConnection {
 public:
  /// nodes strictly increasing from 0; values has one row per node and dim g columns.
  /// Throws InputError on fewer than 2 nodes, shape mismatch or non-finite input.
  PathConnection(LieGroupModel group, std::vector<double> nodes, RealMatrix values);
  /// Uniform grid of `cells` cells on [0, b] sampling f.
  template <typename F>
  static PathConnection sample(LieGroupModel group, double b, int cells, F&& f) {
    std::vector<double> nodes;
    RealMatrix values(cells + 1, group.algebra_dim());
    for (int k = 0; k <= cells; ++k) {
      const double t = b * k / cells;
      nodes.push_back(t);
      values.row(k) = f(t).transpose();
    }
    return PathConnection(std::move(group), std::move(nodes), std::move(values));
  }

  const LieGroupModel& group() const { return group_; }
  double length() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const RealMatrix& values() const { return values_; }
  AlgebraVector at(double t) const;

  /// Same grid, values mapped by a linear operator on g (used for gauge transformations).
  PathConnection transformed(const RealMatrix& op) const;
  PathConnection plus(double s, const PathConnection& variation) const;
  /// Path traversed backwards: t -> -A(b - t).
  PathConnection reversed() const;

 private:
  LieGroupModel group_;
  std::vector<double> nodes_;
  RealMatrix values_;
};

/// A variation theta lives on the same grid as its connection.
using Variation = PathConnection;

struct TransportOptions {
  /// RK4 steps per grid cell; 0 selects adaptive doubling until two successive
  /// results differ by less than tol.
  int substeps_per_cell = 0;
  double tol = 1e-10;
};

/// Transport from t0 to t1 starting at the identity, i.e. a(t1) a(t0)^-1.
GroupElement transport_between(const PathConnection& conn, double t0, double t1, const TransportOptions& opts = {});
GroupElement horizontal_transport(const PathConnection& conn, double t, const TransportOptions& opts = {});
GroupElement holonomy(const PathConnection& conn, const TransportOptions& opts = {});

/// Left-translated derivative of the holonomy in the direction var, by composite
/// Simpson quadrature of Ad(a(t)^-1) theta(t) along the RK4 transport.
/// Adaptive mode doubles substeps (even, >= 2) until the change is below tol.
AlgebraVector holonomy_derivative(const PathConnection& conn, const Variation& var, const TransportOptions& opts = {});

/// Central difference of log(Hol(A)^-1 Hol(A + s var)) at s = 0.
AlgebraVector finite_difference_holonomy_derivative(const PathConnection& conn, const Variation& var, double s,
                                                    const TransportOptions& opts = {});

/// |Hol(Ad(x) A) - x Hol(A) x^-1| for the constant gauge transformation x.
double conjugation_invariance_check(const PathConnection& conn, const GroupElement& x, const TransportOptions& opts = {});

}  // namespace surfrep
