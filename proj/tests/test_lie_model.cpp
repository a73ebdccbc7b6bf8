#include <cmath>
#include <numbers>

#include "doctest.h"
#include "surfrep/errors.hpp"
#include "surfrep/lie_model.hpp"

using namespace surfrep;
using cd = std::complex<double>;

namespace {

RealMatrix series_exp(const RealMatrix& a) {
  RealMatrix term = RealMatrix::Identity(a.rows(), a.cols());
  RealMatrix sum = term;
  for (int k = 1; k < 60; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

Eigen::Vector3d cross(const RealVector& a, const RealVector& b) {
  return Eigen::Vector3d(a(0), a(1), a(2)).cross(Eigen::Vector3d(b(0), b(1), b(2)));
}

}  // namespace

TEST_CASE("basis is orthonormal for the invariant form") {
  for (const char* name : {"SU2", "SO3", "U1", "SU2xU1", "SO3xSU2"}) {
    const LieGroupModel g = LieGroupModel::parse(name);
    for (int k = 0; k < g.algebra_dim(); ++k) {
      const AlgebraVector c = g.coordinates(g.algebra_basis()[static_cast<std::size_t>(k)]);
      CHECK((c - RealVector::Unit(g.algebra_dim(), k)).norm() < 1e-12);
    }
  }
  CHECK(LieGroupModel::parse("SU2xU1").algebra_dim() == 4);
  CHECK(LieGroupModel::parse("SU2xU1").matrix_dim() == 3);
  CHECK_THROWS_AS(LieGroupModel::parse("SU3"), InputError);
  CHECK_THROWS_AS(LieGroupModel::parse(""), InputError);
}

TEST_CASE("SU2 exponential closed form") {
  const LieGroupModel g = LieGroupModel::parse("SU2");
  CHECK((g.exp(RealVector::Zero(3)) - g.identity()).norm() < 1e-15);
  const GroupElement e = g.exp(Eigen::Vector3d(0, 0, std::numbers::pi / 2));
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = std::exp(cd(0, std::numbers::pi / 4));
  expected(1, 1) = std::exp(cd(0, -std::numbers::pi / 4));
  CHECK((e - expected).norm() < 1e-14);
  // exp(pi E_3) = diag(i, -i), exp(2 pi E_3) = -I.
  CHECK((g.exp(Eigen::Vector3d(0, 0, 2 * std::numbers::pi)) + g.identity()).norm() < 1e-14);
}

TEST_CASE("log inverts exp on the principal domain") {
  Rng rng(5);
  for (const char* name : {"SU2", "SO3", "U1", "SU2xU1"}) {
    const LieGroupModel g = LieGroupModel::parse(name);
    for (int trial = 0; trial < 100; ++trial) {
      AlgebraVector x = g.random_algebra_vector(rng);
      x *= 0.99 / std::max(1.0, x.norm());
      CHECK((g.log(g.exp(x)) - x).norm() < 1e-10);
      const GroupElement y = g.random_element(rng);
      // SU2 log is defined everywhere except near -I.
      if (std::string(name) == "SU2") CHECK((g.exp(g.log(y)) - y).norm() < 1e-10);
    }
  }
  const LieGroupModel su2 = LieGroupModel::parse("SU2");
  CHECK_THROWS_AS(su2.log(-su2.identity()), DomainError);
  const LieGroupModel so3 = LieGroupModel::parse("SO3");
  CHECK_THROWS_AS(so3.log(so3.exp(Eigen::Vector3d(std::numbers::pi, 0, 0))), DomainError);
}

TEST_CASE("Ad, ad and bracket") {
  Rng rng(17);
  for (const char* name : {"SU2", "SO3", "SU2xU1"}) {
    const LieGroupModel g = LieGroupModel::parse(name);
    const int d = g.algebra_dim();
    CHECK((g.Ad(g.identity()) - RealMatrix::Identity(d, d)).norm() < 1e-14);
    for (int trial = 0; trial < 100; ++trial) {
      const GroupElement y = g.random_element(rng);
      const AlgebraVector a = g.random_algebra_vector(rng), b = g.random_algebra_vector(rng),
                          c = g.random_algebra_vector(rng);
      const RealMatrix ad_y = g.Ad(y);
      // Ad-invariance of the inner product.
      CHECK(std::abs(g.inner(ad_y * a, ad_y * b) - g.inner(a, b)) < 1e-10);
      // Ad(g) X = coords(g X g^-1).
      CHECK((ad_y * a - g.coordinates(y * g.to_matrix(a) * y.adjoint())).norm() < 1e-12);
      // Jacobi.
      const AlgebraVector jac = g.bracket(a, g.bracket(b, c)) + g.bracket(b, g.bracket(c, a)) + g.bracket(c, g.bracket(a, b));
      CHECK(jac.norm() < 1e-12);
      CHECK((g.bracket(a, b) + g.bracket(b, a)).norm() < 1e-14);
      CHECK((g.ad(a) * b - g.bracket(a, b)).norm() < 1e-13);
      // Ad(exp X) = e^{ad X}.
      const AlgebraVector small = 0.7 * a / std::max(1.0, a.norm());
      CHECK((g.Ad(g.exp(small)) - series_exp(g.ad(small))).norm() < 1e-10);
    }
  }
}

TEST_CASE("brackets are cross products up to a fixed sign") {
  Rng rng(3);
  const LieGroupModel su2 = LieGroupModel::parse("SU2");
  const LieGroupModel so3 = LieGroupModel::parse("SO3");
  for (int trial = 0; trial < 20; ++trial) {
    const AlgebraVector a = su2.random_algebra_vector(rng), b = su2.random_algebra_vector(rng);
    // [E_a, E_b] = -eps_abc E_c for E = i sigma / 2; [L_a, L_b] = eps_abc L_c.
    CHECK((su2.bracket(a, b) + cross(a, b)).norm() < 1e-13);
    CHECK((so3.bracket(a, b) - cross(a, b)).norm() < 1e-13);
  }
}

TEST_CASE("centralizers") {
  const LieGroupModel g = LieGroupModel::parse("SU2");
  const std::vector<GroupElement> id{g.identity()};
  CHECK(g.centralizer_algebra(id).cols() == 3);
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = cd(0, 1);
  diag(1, 1) = cd(0, -1);
  const std::vector<GroupElement> torus{diag};
  const RealMatrix z = g.centralizer_algebra(torus);
  REQUIRE(z.cols() == 1);
  CHECK(std::abs(std::abs(z(2, 0)) - 1.0) < 1e-12);
  const std::vector<GroupElement> generic{g.random_element(1), g.random_element(2)};
  CHECK(g.centralizer_algebra(generic).cols() == 0);
}

TEST_CASE("random sampling") {
  const LieGroupModel g = LieGroupModel::parse("SU2");
  CHECK((g.random_element(99) - g.random_element(99)).norm() == 0.0);
  CHECK((g.random_algebra_vector(99) - g.random_algebra_vector(99)).norm() == 0.0);
  Rng rng(123);
  RealMatrix mean = RealMatrix::Zero(3, 3);
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const GroupElement y = g.random_element(rng);
    CHECK(std::abs(y.determinant() - 1.0) < 1e-12);
    CHECK(g.group_residual(y) < 1e-12);
    mean += g.Ad(y);
  }
  mean /= samples;
  // Haar average of the adjoint representation projects onto invariants: zero for SU2.
  CHECK(mean.cwiseAbs().maxCoeff() < 5e-2);

  const LieGroupModel so3 = LieGroupModel::parse("SO3");
  CHECK(so3.group_residual(so3.random_element(7)) < 1e-12);
}

TEST_CASE("center and projection") {
  const LieGroupModel g = LieGroupModel::parse("SU2");
  REQUIRE(g.center_elements().has_value());
  CHECK(g.center_elements()->size() == 2);
  CHECK(g.is_central(g.central_element("-I")));
  CHECK_THROWS_AS(LieGroupModel::parse("SO3").central_element("-I"), InputError);
  CHECK_FALSE(LieGroupModel::parse("U1").center_elements().has_value());
  CHECK(LieGroupModel::parse("SU2xSU2").center_elements()->size() == 4);

  const LieGroupModel u1 = LieGroupModel::parse("U1");
  const LieGroupModel u1_z2 = u1.with_center({u1.identity(), -u1.identity()});
  CHECK(u1_z2.center_elements()->size() == 2);

  const GroupElement y = g.random_element(4);
  const ComplexMatrix noisy = 1.001 * y;
  CHECK(g.group_residual(noisy) > 1e-4);
  CHECK((g.project_to_group(noisy) - y).norm() < 1e-12);
  const LieGroupModel so3 = LieGroupModel::parse("SO3");
  const GroupElement r = so3.random_element(4);
  CHECK((so3.project_to_group(1.01 * r) - r).norm() < 1e-12);
}
