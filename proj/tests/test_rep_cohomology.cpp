#include <cmath>

#include "doctest.h"
#include "surfrep/errors.hpp"
#include "surfrep/rep_cohomology.hpp"

using namespace surfrep;

namespace {

const LieGroupModel& su2() {
  static const LieGroupModel g = LieGroupModel::parse("SU2");
  return g;
}

RepPoint random_rep(const LieGroupModel& g, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GroupElement> values;
  for (int j = 0; j < n; ++j) values.push_back(g.random_element(rng));
  return RepPoint(g, std::move(values));
}

RealVector random_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  RealVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = normal(rng);
  return v;
}

Eigen::Vector3d cross(const RealVector& a, const RealVector& b) {
  return Eigen::Vector3d(a(0), a(1), a(2)).cross(Eigen::Vector3d(b(0), b(1), b(2)));
}

}  // namespace

TEST_CASE("group ring evaluation") {
  const RepPoint rep = random_rep(su2(), 2, 1);
  CHECK((evaluate_group_ring(GroupRingElement::one(), rep) - RealMatrix::Identity(3, 3)).norm() < 1e-14);
  const RepPoint central = central_rep(su2(), {"-", "+"});
  const GroupRingElement one_minus_x = GroupRingElement::one() - GroupRingElement(Word::generator(1));
  CHECK(evaluate_group_ring(one_minus_x, central).norm() < 1e-15);
  // Anti-multiplicative: rho(uv) = rho(v) rho(u).
  const Word u = parse_word("x1*x2^-1"), v = parse_word("x2*x2*x1");
  const RealMatrix ruv = evaluate_group_ring(GroupRingElement(u * v), rep);
  CHECK((ruv - evaluate_group_ring(GroupRingElement(v), rep) * evaluate_group_ring(GroupRingElement(u), rep)).norm() < 1e-12);
}

TEST_CASE("D1 and D0 match finite differences of the word and orbit maps") {
  Rng rng(77);
  for (int genus = 1; genus <= 3; ++genus) {
    const Presentation pres = surface_presentation(genus);
    for (int trial = 0; trial < 5; ++trial) {
      const RepPoint rep = random_rep(su2(), pres.generator_count(), rng());
      const RealVector u = random_vector(3 * pres.generator_count(), rng);
      const AlgebraVector x = random_vector(3, rng);
      CHECK(finite_diff_check_d1(pres, rep, RealVector::Zero(u.size()), 1e-4) == 0.0);
      CHECK(finite_diff_check_d0(pres, rep, RealVector::Zero(3), 1e-4) == 0.0);
      const double e1 = finite_diff_check_d1(pres, rep, u, 1e-4);
      const double e0 = finite_diff_check_d0(pres, rep, x, 1e-4);
      CHECK(e1 < 1e-6);
      CHECK(e0 < 1e-6);
      // Central differences: doubling h quadruples the error.
      const double ratio1 = finite_diff_check_d1(pres, rep, u, 2e-3) / finite_diff_check_d1(pres, rep, u, 1e-3);
      CHECK(ratio1 > 4.0 / 1.5);
      CHECK(ratio1 < 4.0 * 1.5);
    }
  }
}

TEST_CASE("left-multiplicative perturbation does not match D1") {
  // The rejected convention: perturb by exp(t u_j) y_j.  Its derivative differs from D1 u.
  const Presentation pres = surface_presentation(2);
  const RepPoint rep = random_rep(su2(), 4, 8);
  Rng rng(9);
  const RealVector u = random_vector(12, rng);
  const CochainData cx = build_complex(pres, rep);
  std::vector<GroupElement> plus, minus;
  for (int j = 0; j < 4; ++j) {
    const RealVector uj = u.segment(3 * j, 3);
    plus.push_back(su2().exp(1e-5 * uj) * rep.values()[static_cast<std::size_t>(j)]);
    minus.push_back(su2().exp(-1e-5 * uj) * rep.values()[static_cast<std::size_t>(j)]);
  }
  const GroupElement r0 = evaluate_word(pres.relators()[0], rep);
  const RealVector fd = (su2().log(r0.adjoint() * evaluate_word(pres.relators()[0], RepPoint(su2(), plus))) -
                         su2().log(r0.adjoint() * evaluate_word(pres.relators()[0], RepPoint(su2(), minus)))) / 2e-5;
  CHECK((fd - cx.d1 * u).norm() > 1e-2);
}

TEST_CASE("relator defect") {
  const Presentation pres = surface_presentation(2);
  const BundleClass c = BundleClass::trivial(su2());
  CHECK(relator_defect(pres, central_rep(su2(), {"+", "-", "-", "+"}), c) < 1e-15);
  CHECK(relator_defect(pres, torus_rep(su2(), {0.7, 1.1, 2.3, 0.4}), c) < 1e-14);
  CHECK(relator_defect(pres, random_rep(su2(), 4, 3), c) > 1e-3);
  CHECK_THROWS_AS(BundleClass::make(su2(), su2().random_element(1)), InputError);
  CHECK_THROWS_AS(relator_defect(pres, random_rep(su2(), 3, 3), c), InputError);
}

TEST_CASE("genus-2 SU2 complexes at the three strata") {
  const Presentation pres = surface_presentation(2);
  const BundleClass c = BundleClass::trivial(su2());

  const CochainData central = build_complex(pres, central_rep(su2(), {"+", "-", "+", "-"}));
  CHECK(central.h_dims == std::array<int, 3>{3, 12, 3});
  CHECK(central.d1.norm() == 0.0);

  const CochainData torus = build_complex(pres, torus_rep(su2(), {0.7, 1.1, 2.3, 0.4}));
  CHECK(torus.h_dims == std::array<int, 3>{1, 8, 1});
  CHECK(torus.cochain_defect() < 1e-9);

  const RepPoint irr = random_solution(pres, su2(), c, 42);
  CHECK(relator_defect(pres, irr, c) < 1e-12);
  const CochainData irreducible = build_complex(pres, irr);
  CHECK(irreducible.h_dims == std::array<int, 3>{0, 6, 0});
  CHECK(irreducible.cochain_defect() < 1e-9);

  for (const CochainData* cx : {&central, &torus, &irreducible}) {
    CHECK(cx->euler_characteristic() == (1 - 4 + 1) * 3);
    CHECK(cx->h_dims[0] == cx->h_dims[2]);
    CHECK(cx->h_dims[1] == 2 * cx->h_dims[0] + 2 * 3);
    CHECK(cx->basis_h1.cols() == cx->h_dims[1]);
    CHECK((cx->d1 * cx->basis_h1).norm() < 1e-9);
    CHECK((cx->basis_b1.transpose() * cx->basis_h1).norm() < 1e-9);
  }
}

TEST_CASE("Euler count holds off the variety too") {
  const Presentation pres = surface_presentation(2);
  const CochainData cx = build_complex(pres, random_rep(su2(), 4, 10));
  CHECK(cx.euler_characteristic() == -6);
}

TEST_CASE("trivial adjoint action kills the complex") {
  const LieGroupModel u1 = LieGroupModel::parse("U1");
  const Presentation pres = surface_presentation(2);
  const CochainData cx = build_complex(pres, random_rep(u1, 4, 5));
  CHECK(cx.d1.norm() == doctest::Approx(0.0));
  CHECK(cx.d0.norm() == doctest::Approx(0.0));
  CHECK(cx.h_dims == std::array<int, 3>{1, 4, 1});
}

TEST_CASE("Newton projection") {
  const Presentation pres = surface_presentation(2);
  const BundleClass c = BundleClass::trivial(su2());
  const RepPoint irr = random_solution(pres, su2(), c, 42);

  const NewtonResult same = newton_project_to_variety(pres, irr, c);
  CHECK(same.iterations == 0);

  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    RealVector delta = random_vector(12, rng);
    delta *= 1e-2 / delta.norm();
    std::vector<GroupElement> values;
    for (int j = 0; j < 4; ++j) values.push_back(irr.values()[static_cast<std::size_t>(j)] * su2().exp(delta.segment(3 * j, 3)));
    const NewtonResult r = newton_project_to_variety(pres, RepPoint(su2(), values), c);
    CHECK(r.iterations <= 10);
    CHECK(r.defect < 1e-12);
  }

  NewtonOptions tight;
  tight.max_iter = 1;
  tight.tol = 1e-300;
  CHECK_THROWS_AS(newton_project_to_variety(pres, random_rep(su2(), 4, 12), c, tight), ConvergenceError);

  int converged = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    try {
      const RepPoint p = random_solution(pres, su2(), c, seed, 1);
      CHECK(relator_defect(pres, p, c) < 1e-12);
      ++converged;
    } catch (const ConvergenceError&) {
    }
  }
  MESSAGE("single-attempt random-start success: " << converged << "/20");
  CHECK(converged >= 10);
}

TEST_CASE("obstruction map") {
  const Presentation pres = surface_presentation(2);
  const BundleClass c = BundleClass::trivial(su2());
  Rng rng(31);

  SUBCASE("central representation: bracket of the two handles") {
    const ObstructionModel q(pres, central_rep(su2(), {"+", "-", "-", "+"}));
    REQUIRE(q.complex().basis_h2.cols() == 3);
    double constant = 0.0;
    bool first = true;
    for (int trial = 0; trial < 100; ++trial) {
      const RealVector u = random_vector(12, rng);
      const RealVector value = q.complex().basis_h2 * q(u);  // back in g coordinates
      const Eigen::Vector3d expected = cross(u.segment(0, 3), u.segment(3, 3)) + cross(u.segment(6, 3), u.segment(9, 3));
      if (first) {
        constant = value.dot(expected) / expected.squaredNorm();
        first = false;
      }
      CHECK((value - constant * expected).norm() < 1e-8 * expected.norm());
      CHECK((q(2.0 * u) - 4.0 * q(u)).norm() < 1e-9 * std::max(1.0, q(u).norm()));
    }
    MESSAGE("measured proportionality constant: " << constant);
    CHECK(constant == doctest::Approx(-1.0));
  }

  SUBCASE("irreducible representation: H2 = 0") {
    const ObstructionModel q(pres, random_solution(pres, su2(), c, 42));
    const RealVector u = q.complex().basis_z1 * random_vector(q.complex().basis_z1.cols(), rng);
    CHECK(q(u).size() == 0);
  }

  SUBCASE("rejects non-cocycles") {
    const RepPoint torus = torus_rep(su2(), {0.7, 1.1, 2.3, 0.4});
    const ObstructionModel q(pres, torus);
    RealVector u = RealVector::Zero(12);
    u(0) = 1.0;  // x-direction on the first generator is not a cocycle at a torus point
    CHECK_THROWS_AS(q(u), InputError);
  }
}

TEST_CASE("cone sampling at the three strata") {
  const Presentation pres = surface_presentation(2);
  const BundleClass c = BundleClass::trivial(su2());
  struct Case {
    RepPoint rep;
    int h1;
  };
  const std::vector<Case> cases{{random_solution(pres, su2(), c, 42), 6},
                                {torus_rep(su2(), {0.7, 1.1, 2.3, 0.4}), 8},
                                {central_rep(su2(), {"+", "+", "-", "+"}), 12}};
  for (const Case& k : cases) {
    const CochainData cx = build_complex(pres, k.rep);
    const ConeSampleResult r = sample_cone_directions(pres, k.rep, c, 60, 5);
    CHECK(r.span_dim_h1 == k.h1);
    CHECK(r.span_dim_z1 == cx.basis_z1.cols());
    CHECK(r.success_rate() >= 0.95);
    CHECK(r.max_seed_obstruction < 1e-8);
    CHECK(r.max_direction_deviation < 0.05);
  }
}

TEST_CASE("stabilizer fixed subspaces and orbit types") {
  const Presentation pres = surface_presentation(2);
  const BundleClass c = BundleClass::trivial(su2());
  const RepPoint irr = random_solution(pres, su2(), c, 42);
  const RepPoint torus = torus_rep(su2(), {0.7, 1.1, 2.3, 0.4});
  const RepPoint central = central_rep(su2(), {"+", "+", "+", "+"});

  CHECK(stabilizer_fixed_subspace(pres, irr, stabilizer_generators(irr)) == 6);
  CHECK(stabilizer_fixed_subspace(pres, torus, stabilizer_generators(torus)) == 4);
  CHECK(stabilizer_fixed_subspace(pres, central, stabilizer_generators(central)) == 0);

  const std::vector<GroupElement> bad{su2().random_element(3)};
  CHECK_THROWS_AS(stabilizer_fixed_subspace(pres, torus, bad), InputError);

  CHECK(classify_orbit_type(central).label == "G");
  CHECK(classify_orbit_type(central).stabilizer_dim == 3);
  CHECK(classify_orbit_type(torus).label == "(T)");
  CHECK(classify_orbit_type(irr).label == "Z");
  const GroupElement x = su2().random_element(8);
  CHECK(classify_orbit_type(torus.conjugated(x)).label == "(T)");
  CHECK(classify_orbit_type(irr.conjugated(x)).label == "Z");
}

TEST_CASE("conjugation isomorphism") {
  const Presentation pres = surface_presentation(2);
  const RepPoint irr = random_solution(pres, su2(), BundleClass::trivial(su2()), 42);
  CHECK(conjugation_isomorphism_check(pres, irr, su2().identity()));
  CHECK(conjugation_isomorphism_check(pres, irr, su2().random_element(5)));
  const CochainData a = build_complex(pres, irr);
  const CochainData b = build_complex(pres, irr.conjugated(su2().central_element("-I")));
  CHECK((a.d1 - b.d1).norm() == 0.0);
}

TEST_CASE("central representations") {
  const BundleClass c = BundleClass::trivial(su2());
  CHECK(enumerate_central_reps(surface_presentation(2), su2(), c).size() == 16);
  CHECK(enumerate_central_reps(surface_presentation(1), su2(), c).size() == 4);
  // Commutators of central elements are trivial, so -I is never reached.
  CHECK(enumerate_central_reps(surface_presentation(1), su2(), {su2().central_element("-I")}).empty());
  const LieGroupModel u1 = LieGroupModel::parse("U1");
  CHECK_THROWS_AS(enumerate_central_reps(surface_presentation(1), u1, BundleClass::trivial(u1)), InputError);
  const LieGroupModel u1z4 = u1.with_center({u1.exp(RealVector::Constant(1, 0.0)), u1.exp(RealVector::Constant(1, M_PI / 2)),
                                             u1.exp(RealVector::Constant(1, M_PI)), u1.exp(RealVector::Constant(1, -M_PI / 2))});
  CHECK(enumerate_central_reps(surface_presentation(2), u1z4, BundleClass::trivial(u1z4)).size() == 256);
}

TEST_CASE("cocycles leave the relator stationary to second order") {
  const Presentation pres = surface_presentation(2);
  const BundleClass c = BundleClass::trivial(su2());
  const RepPoint rep = torus_rep(su2(), {0.7, 1.1, 2.3, 0.4});
  const CochainData cx = build_complex(pres, rep);
  Rng rng(5);
  auto moved_defect = [&](const RealVector& u, double t) {
    std::vector<GroupElement> values;
    for (int j = 0; j < rep.size(); ++j)
      values.push_back(rep.values()[static_cast<std::size_t>(j)] * su2().exp(t * u.segment(3 * j, 3)));
    return relator_defect(pres, RepPoint(su2(), std::move(values)), c);
  };
  const RealVector cocycle = cx.basis_z1 * random_vector(cx.basis_z1.cols(), rng);
  const double q1 = moved_defect(cocycle, 1e-3), q2 = moved_defect(cocycle, 2e-3);
  CHECK(q2 / q1 == doctest::Approx(4.0).epsilon(0.01));
  const RealVector generic = random_vector(12, rng);
  const double g1 = moved_defect(generic, 1e-3), g2 = moved_defect(generic, 2e-3);
  CHECK(g2 / g1 == doctest::Approx(2.0).epsilon(0.01));
}
