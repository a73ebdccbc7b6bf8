#pragma once

// Twisted cohomology of a finitely presented group at a representation into a
// compact matrix group, evaluated from Fox derivatives.
//
// Conventions (fixed by the finite-difference checks in the tests):
//  * a tangent vector at (y_1..y_n) is u in g^n, meaning the curve y_j exp(t u_j);
//  * the word map is differentiated after left translation, Phi^-1 dPhi;
//  * a word w acts on g through rho(w) = Ad(chi(w)^-1), extended linearly to Z[F].
// Then D0 = [rho(1 - x_j)]_j and D1 = [rho(dr_i/dx_j)]_ij, and D1 D0 = rho(1 - r) vanishes
// whenever every relator evaluates to a central element.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "surfrep/free_words.hpp"
#include "surfrep/lie_model.hpp"
#include "surfrep/linalg.hpp"

namespace surfrep {

/// Point of Hom(F, G) = G^n.
class RepPoint {
 public:
  /// Throws InputError on size mismatch or if a value is off the group by more than 1e-10.
  RepPoint(LieGroupModel group, std::vector<GroupElement> values);

  const LieGroupModel& group() const { return group_; }
  const std::vector<GroupElement>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

  /// x y_j x^-1 for every j.
  RepPoint conjugated(const GroupElement& x) const;

 private:
  LieGroupModel group_;
  std::vector<GroupElement> values_;
};

/// Prescribed central value c = exp(X_xi) of the relators.
struct BundleClass {
  GroupElement central;

  /// Throws InputError unless Ad(c) = Id to 1e-10.
  static BundleClass make(const LieGroupModel& group, GroupElement c);
  static BundleClass trivial(const LieGroupModel& group) { return {group.identity()}; }
};

GroupElement evaluate_word(const Word& w, const RepPoint& rep);

/// sum_w coef(w) Ad(chi(w)^-1).
RealMatrix evaluate_group_ring(const GroupRingElement& e, const RepPoint& rep);

/// Default rank decision for evaluated cochain operators.
inline constexpr RankTolerance kCochainRankTolerance{1e-8, 1.0};

/// The evaluated complex g --D0--> g^n --D1--> g^m with ranks and orthonormal bases.
struct CochainData {
  RealMatrix d0;  // (n dim g) x dim g
  RealMatrix d1;  // (m dim g) x (n dim g)
  int rank0 = 0;
  int rank1 = 0;
  std::array<int, 3> h_dims{};
  RealMatrix basis_h0;  // ker D0
  RealMatrix basis_z1;  // ker D1
  RealMatrix basis_b1;  // im D0
  RealMatrix basis_h1;  // ker D1 intersected with (im D0)^perp
  RealMatrix basis_h2;  // (im D1)^perp
  RankTolerance tolerance;

  /// Operator norm of D1 D0 (Frobenius); small on the variety.
  double cochain_defect() const { return (d1 * d0).norm(); }
  int euler_characteristic() const { return h_dims[0] - h_dims[1] + h_dims[2]; }
};

CochainData build_complex(const Presentation& pres, const RepPoint& rep,
                          RankTolerance tol = kCochainRankTolerance);

/// Max over relators of the Frobenius distance between r_i(y) and c.
double relator_defect(const Presentation& pres, const RepPoint& rep, const BundleClass& c);

/// Points with relator_defect below this are treated as lying on the variety.
inline constexpr double kOnVarietyTolerance = 1e-9;

/// Max-norm gap between the central-difference derivative of the left-translated
/// word map along y_j exp(t u_j) and D1 u.
double finite_diff_check_d1(const Presentation& pres, const RepPoint& rep, const RealVector& u, double h);

/// Same for the conjugation orbit map s -> exp(-sX) y exp(sX) against D0 X.
double finite_diff_check_d0(const Presentation& pres, const RepPoint& rep, const AlgebraVector& x, double h);

/// Quadratic part of the relator map on a 1-cocycle, projected to H^2.
///
/// Each letter is replaced by its degree-2 jet y_j (I + t U + t^2 U^2 / 2), the
/// relator jets are multiplied out, left-translated, and the t^2 coefficient of
/// the logarithm is projected onto basis_h2.  q(s u) = s^2 q(u).
class ObstructionModel {
 public:
  ObstructionModel(Presentation pres, RepPoint rep, RankTolerance tol = kCochainRankTolerance);

  const RepPoint& rep() const { return rep_; }
  const CochainData& complex() const { return complex_; }

  /// Coordinates in basis_h2.  Throws InputError if |D1 u| > 1e-9 max(1, |u|).
  RealVector operator()(const RealVector& u) const;
  /// t^2 coefficient of the left-translated log before projection, in g^m.
  RealVector second_order_term(const RealVector& u) const;

  /// Cocycles with q = 0 collected by sample_cone_directions.
  std::vector<RealVector> sampled_cone;

 private:
  Presentation pres_;
  RepPoint rep_;
  CochainData complex_;
};

RealVector obstruction_quadratic(const Presentation& pres, const RepPoint& rep, const RealVector& u);

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
  RankTolerance rank{1e-10, 0.0};
};

struct NewtonResult {
  RepPoint point;
  int iterations = 0;
  double defect = 0.0;
};

/// Gauss-Newton on log(c^-1 r_i(y)) with the D1 Jacobian, steps restricted to
/// (im D0)^perp and halved while the residual grows.  Updates are y_j <- y_j exp(delta_j).
/// Throws ConvergenceError after max_iter, DomainError if a residual leaves the log domain.
NewtonResult newton_project_to_variety(const Presentation& pres, const RepPoint& start, const BundleClass& c,
                                       const NewtonOptions& opts = {});

struct ConeSampleResult {
  std::vector<RealVector> seeds;       // cocycles u with q(u) = 0, unit norm
  std::vector<RealVector> directions;  // normalized log-displacements of the projected points
  int span_dim_z1 = 0;
  int span_dim_h1 = 0;
  int attempts = 0;
  int failures = 0;
  double max_seed_obstruction = 0.0;    // max |q(seed)|
  double max_direction_deviation = 0.0; // max |direction - seed|
  double max_direction_obstruction = 0.0;  // max |q(P_Z1 direction)|, O(step) by construction

  double success_rate() const { return attempts == 0 ? 0.0 : 1.0 - static_cast<double>(failures) / attempts; }
};

/// Harvests tangent directions of the variety at rep.  For each sample a random
/// cocycle is pushed onto the cone q = 0 inside Z^1, the point y exp(eps u) is
/// Newton-projected back to the variety, and the normalized displacement is kept.
ConeSampleResult sample_cone_directions(const Presentation& pres, const RepPoint& rep, const BundleClass& c,
                                        int count, std::uint64_t seed, double step = 1e-3);

/// Dimension of the subspace of H^1 fixed by the given stabilizer elements
/// (acting by Ad componentwise).  Throws InputError if an element does not commute
/// with every y_i to 1e-9, DomainError if the action fails to preserve Z^1 or B^1.
int stabilizer_fixed_subspace(const Presentation& pres, const RepPoint& rep,
                              std::span<const GroupElement> stabilizer);

/// Elements generating (a dense subgroup of) the stabilizer: the center plus two
/// generic elements of the identity component.
std::vector<GroupElement> stabilizer_generators(const RepPoint& rep, std::uint64_t seed = 1);

struct OrbitType {
  int stabilizer_dim = 0;
  std::string label;  // "Z", "(T)", "G" for SU2, otherwise "dim=<k>"
};

OrbitType classify_orbit_type(const RepPoint& rep);

/// Compares the complexes at rep and x rep x^-1: equal dimensions and
/// D_k(x rep x^-1) = Ad(x) D_k(rep) Ad(x)^-1 blockwise, to 1e-8.
bool conjugation_isomorphism_check(const Presentation& pres, const RepPoint& rep, const GroupElement& x);

/// All tuples of central elements whose relators evaluate to c.  Throws InputError if
/// the group has no finite center list.
std::vector<RepPoint> enumerate_central_reps(const Presentation& pres, const LieGroupModel& group,
                                             const BundleClass& c);

// Named constructors -------------------------------------------------------

/// Signs "+" / "-" per generator, mapped to +I / -I.
RepPoint central_rep(const LieGroupModel& group, const std::vector<std::string>& signs);

/// y_j = exp(theta_j T) with T the standard torus generator per factor, normalized
/// so that SU2 gives diag(e^{i theta}, e^{-i theta}) and SO3 a rotation by theta about e3.
RepPoint torus_rep(const LieGroupModel& group, const std::vector<double>& angles);

/// Haar-random start projected onto the variety; retries with fresh draws on failure.
/// Throws ConvergenceError when all attempts fail.
RepPoint random_solution(const Presentation& pres, const LieGroupModel& group, const BundleClass& c,
                         std::uint64_t seed, int attempts = 20);

}  // namespace surfrep
