#pragma once

// Compact matrix groups U(1), SU(2), SO(3) and their finite direct products.
//
// Group elements are complex block-diagonal matrices; algebra vectors are real
// coordinates in a basis that is orthonormal for the Ad-invariant form
//   <X, Y> = -c * Re tr(X Y),   c = 2 (SU2), 1/2 (SO3), 1 (U1), summed over blocks.
// With these choices the SU2 basis is E_k = i sigma_k / 2 and |X| is the
// rotation angle of the SO(3) image of exp(X).

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surfrep/linalg.hpp"

namespace surfrep {

using GroupElement = ComplexMatrix;
using AlgebraVector = RealVector;
using Rng = std::mt19937_64;

enum class FactorKind { U1, SU2, SO3 };

std::string_view factor_name(FactorKind kind);

class LieGroupModel {
 public:
  /// Parses "SU2", "SO3", "U1" or products joined by 'x', e.g. "SU2xU1".
  static LieGroupModel parse(std::string_view text);
  explicit LieGroupModel(std::vector<FactorKind> factors);

  const std::string& name() const { return name_; }
  const std::vector<FactorKind>& factors() const { return factors_; }
  int matrix_dim() const { return matrix_dim_; }
  int algebra_dim() const { return algebra_dim_; }
  const std::vector<ComplexMatrix>& algebra_basis() const { return basis_; }

  /// Finite list of central elements, or nullopt when the center is infinite (a U1 factor).
  const std::optional<std::vector<GroupElement>>& center_elements() const { return center_; }
  /// Replaces the center list by a configured finite central subgroup (e.g. roots of unity in U1).
  /// Throws InputError if some element is not central.
  LieGroupModel with_center(std::vector<GroupElement> elements) const;
  /// "+I" or "-I"; throws InputError if the element is not in the group.
  GroupElement central_element(std::string_view name) const;

  GroupElement identity() const;
  ComplexMatrix to_matrix(const AlgebraVector& x) const;
  /// Orthogonal projection of an arbitrary matrix onto the algebra, in basis coordinates.
  AlgebraVector coordinates(const ComplexMatrix& m) const;
  double inner(const AlgebraVector& x, const AlgebraVector& y) const { return x.dot(y); }

  GroupElement exp(const AlgebraVector& x) const;
  /// Principal logarithm.  Throws DomainError within 1e-6 of the cut locus
  /// (SU2: |X| = 2 pi, SO3 and U1: angle pi).
  AlgebraVector log(const GroupElement& g) const;

  RealMatrix Ad(const GroupElement& g) const;
  RealMatrix ad(const AlgebraVector& x) const;
  AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) const;

  /// Orthonormal basis (columns) of {X : Ad(y) X = X for all y}.
  RealMatrix centralizer_algebra(std::span<const GroupElement> elements,
                                 RankTolerance tol = {1e-8, 1.0}) const;

  /// Haar-distributed element, deterministic in the generator state.
  GroupElement random_element(Rng& rng) const;
  GroupElement random_element(std::uint64_t seed) const;
  /// Standard Gaussian coordinates.
  AlgebraVector random_algebra_vector(Rng& rng) const;
  AlgebraVector random_algebra_vector(std::uint64_t seed) const;

  /// Nearest group element blockwise (polar factor, determinant fixed).
  GroupElement project_to_group(const ComplexMatrix& m) const;
  /// Deviation from the group: unitarity, determinant and reality defects.
  double group_residual(const ComplexMatrix& m) const;
  bool is_central(const GroupElement& g, double tol = 1e-10) const;

  GroupElement inverse(const GroupElement& g) const { return g.adjoint(); }

 private:
  struct Block {
    FactorKind kind;
    int matrix_offset;
    int matrix_size;
    int algebra_offset;
    int algebra_size;
  };

  std::vector<FactorKind> factors_;
  std::vector<Block> blocks_;
  std::string name_;
  int matrix_dim_ = 0;
  int algebra_dim_ = 0;
  std::vector<ComplexMatrix> basis_;
  std::optional<std::vector<GroupElement>> center_;
};

/// Frobenius norm of a - b.
inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

}  // namespace surfrep
