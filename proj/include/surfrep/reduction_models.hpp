#pragma once

// Linear momentum-map models and the semialgebraic picture of their reduced spaces:
//   SO(2) acting diagonally on W = R^2 x R^2 with mu(q, p) = |q p|,
//   SO(3) acting diagonally on W = (R^3)^4 with mu = q1 x p1 + q2 x p2.
// Points of W are stored as (q, p) resp. (q1, p1, q2, p2).

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surfrep/lie_model.hpp"
#include "surfrep/linalg.hpp"

namespace surfrep {

enum class ReductionModelKind { SO2, SO3 };

class LinearMomentumModel {
 public:
  static LinearMomentumModel so2();
  static LinearMomentumModel so3();
  /// "so2" or "so3"; throws InputError otherwise.
  static LinearMomentumModel parse(const std::string& name);

  ReductionModelKind kind() const { return kind_; }
  std::string name() const { return kind_ == ReductionModelKind::SO2 ? "so2" : "so3"; }
  /// Acting group; SO(2) is realized as U(1) acting by rotation on each plane.
  const LieGroupModel& group() const { return group_; }
  int w_dim() const { return kind_ == ReductionModelKind::SO2 ? 4 : 12; }
  int momentum_dim() const { return kind_ == ReductionModelKind::SO2 ? 1 : 3; }
  /// Number of generators of the invariants on the zero locus (3 resp. 10).
  int invariant_count() const { return kind_ == ReductionModelKind::SO2 ? 3 : 10; }

  /// Orthogonal w_dim x w_dim matrix of g.
  RealMatrix action(const GroupElement& g) const;
  /// Coadjoint action on momentum values (identity for SO(2)).
  RealMatrix coadjoint(const GroupElement& g) const;
  RealVector momentum(const RealVector& w) const;

 private:
  explicit LinearMomentumModel(ReductionModelKind kind);
  ReductionModelKind kind_;
  LieGroupModel group_;
};

double momentum_so2(const Eigen::Vector2d& q, const Eigen::Vector2d& p);
Eigen::Vector3d momentum_so3(const Eigen::Vector3d& q1, const Eigen::Vector3d& p1, const Eigen::Vector3d& q2,
                             const Eigen::Vector3d& p2);

struct ZeroLocusPoint {
  RealVector w;
  double residual = 0.0;  // |mu(w)|
};

enum class ZeroLocusSampler {
  Constructive,  // parametrize the zero locus directly
  Projected,     // Gaussian point of W, Gauss-Newton onto mu = 0
};

/// First point is always w = 0.  Deterministic in seed.
std::vector<ZeroLocusPoint> sample_zero_locus(const LinearMomentumModel& model, int count, std::uint64_t seed,
                                              ZeroLocusSampler sampler = ZeroLocusSampler::Constructive);

/// Gauss-Newton projection of w onto mu = 0 (minimum-norm steps).  Throws ConvergenceError.
ZeroLocusPoint project_to_zero_locus(const LinearMomentumModel& model, const RealVector& w);

/// Image under the Hilbert map.
///  SO2: coords = (u, v, r) = (qq - pp, 2qp, qq + pp).
///  SO3: gram = Gram matrix of (q1, q2, p1, p2) in that row order; coords = its 10 upper entries.
struct HilbertImage {
  RealVector coords;
  RealMatrix gram;  // empty for SO2
};

HilbertImage hilbert_map(const LinearMomentumModel& model, const RealVector& w);

/// psi on symmetric 4x4 matrices (rows q1, q2, p1, p2): the quadratic function with psi(lambda(w)) = |mu(w)|^2.
double psi(const RealMatrix& gram);
/// The six O(3)-invariants (a ^ b) . mu as quadratic functions of the Gram matrix,
/// for (a, b) = (q1,q2), (q1,p1), (q1,p2), (q2,p1), (q2,p2), (p1,p2).
std::array<double, 6> wedge_momentum_invariants(const RealMatrix& gram);
/// All sixteen 3x3 minors, rows-major over (row triple, column triple).
std::array<double, 16> three_by_three_minors(const RealMatrix& gram);

struct RelationReport {
  // SO2
  double cone_relation = 0.0;  // |u^2 + v^2 - r^2|
  double r_negativity = 0.0;   // max(0, -r)
  // SO3
  double determinant = 0.0;
  double psi_value = 0.0;
  std::array<double, 6> wedge_invariants{};
  double max_minor = 0.0;
  double min_eigenvalue = 0.0;
  double third_singular_ratio = 0.0;  // sigma_3 / sigma_1 (0 for the zero matrix)

  /// Largest residual that must vanish; PSD/rank conditions enter as max(0, -min_eigenvalue) and the ratio.
  double max_residual() const;
  bool passes(double tol = 1e-9) const { return max_residual() < tol; }
};

RelationReport check_relations(const LinearMomentumModel& model, const ZeroLocusPoint& point);

/// Rank of the span of Hilbert images (relative tolerance).  Throws InputError for
/// fewer than 2 * invariant_count samples.
int zariski_dim_at_origin(const LinearMomentumModel& model, const std::vector<ZeroLocusPoint>& samples,
                          double rank_tol = 1e-8);

/// The ten configurations v placed in one or two of the four slots, with v = e1
/// unless given.  Slots are read in the Gram order (q1, q2, p1, p2); returned as points of W.
std::vector<RealVector> spanning_vectors_8_5(const Eigen::Vector3d& v = Eigen::Vector3d::UnitX());

/// j in {0, 1, 2} for PSD matrices of numerical rank j (tolerance 1e-9 sigma_1); nullopt otherwise.
std::optional<int> psd_rank_stratum(const RealMatrix& gram, double tol = 1e-9);

struct ConeModelReport {
  int cone_dim = 0;
  int smooth_factor_dim = 0;
  int total_dim = 0;
  double max_relation_residual = 0.0;
};

/// Local picture at the middle stratum: R^k times the SO(2) cone.
ConeModelReport so2_cone_model_report(int smooth_factor_dim = 4, int samples = 200, std::uint64_t seed = 1);

/// Aggregate statistics used by the CLI.
struct ReductionSummary {
  std::string model;
  int samples = 0;
  int zariski_dim = 0;
  double relation_residual_max = 0.0;
  double momentum_residual_max = 0.0;
  std::map<std::string, int> stratum_histogram;
};

ReductionSummary summarize_reduction(const LinearMomentumModel& model, int samples, std::uint64_t seed,
                                     ZeroLocusSampler sampler = ZeroLocusSampler::Constructive);

}  // namespace surfrep
