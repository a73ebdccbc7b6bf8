#include "surfrep/rep_cohomology.hpp"

#include <algorithm>
#include <cmath>

#include "surfrep/errors.hpp"

namespace surfrep {

namespace {

RealMatrix block_diagonal(const RealMatrix& block, int copies) {
  const Eigen::Index d = block.rows();
  RealMatrix out = RealMatrix::Zero(d * copies, d * copies);
  for (int k = 0; k < copies; ++k) out.block(k * d, k * d, d, d) = block;
  return out;
}

/// Degree-2 truncated power series in t with matrix coefficients.
struct Jet {
  ComplexMatrix c0, c1, c2;

  friend Jet operator*(const Jet& a, const Jet& b) {
    return {a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0, a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0};
  }
};

/// Jet of the letter x_j^{+-1} evaluated at y_j exp(t U_j).
Jet letter_jet(const Letter& l, const RepPoint& rep, const std::vector<ComplexMatrix>& tangent) {
  const GroupElement& y = rep.values()[static_cast<std::size_t>(l.gen - 1)];
  const ComplexMatrix& u = tangent[static_cast<std::size_t>(l.gen - 1)];
  const ComplexMatrix u2 = 0.5 * u * u;
  if (l.exponent > 0) return {y, y * u, y * u2};
  const ComplexMatrix yi = y.adjoint();
  return {yi, -u * yi, u2 * yi};
}

/// Word map evaluated at y_j exp(t u_j).
std::vector<GroupElement> relator_values_along(const Presentation& pres, const RepPoint& rep,
                                               const RealVector& u, double t) {
  const LieGroupModel& g = rep.group();
  const int d = g.algebra_dim();
  std::vector<GroupElement> moved;
  moved.reserve(rep.values().size());
  for (int j = 0; j < rep.size(); ++j)
    moved.push_back(rep.values()[static_cast<std::size_t>(j)] * g.exp(t * u.segment(j * d, d)));
  RepPoint shifted(g, std::move(moved));
  std::vector<GroupElement> out;
  for (const Word& r : pres.relators()) out.push_back(evaluate_word(r, shifted));
  return out;
}

void check_sizes(const Presentation& pres, const RepPoint& rep) {
  if (rep.size() != pres.generator_count())
    throw InputError("representation has " + std::to_string(rep.size()) + " values but the presentation has " +
                     std::to_string(pres.generator_count()) + " generators");
}

/// Relator residuals log(c^-1 r_i(y)) stacked in g^m.
RealVector relator_residual(const Presentation& pres, const RepPoint& rep, const BundleClass& c) {
  const LieGroupModel& g = rep.group();
  const int d = g.algebra_dim();
  RealVector res(pres.relator_count() * d);
  const ComplexMatrix cinv = c.central.adjoint();
  for (int i = 0; i < pres.relator_count(); ++i)
    res.segment(i * d, d) = g.log(cinv * evaluate_word(pres.relators()[static_cast<std::size_t>(i)], rep));
  return res;
}

RepPoint right_translate(const RepPoint& rep, const RealVector& delta) {
  const LieGroupModel& g = rep.group();
  const int d = g.algebra_dim();
  std::vector<GroupElement> values;
  values.reserve(rep.values().size());
  for (int j = 0; j < rep.size(); ++j)
    values.push_back(g.project_to_group(rep.values()[static_cast<std::size_t>(j)] * g.exp(delta.segment(j * d, d))));
  return RepPoint(g, std::move(values));
}

/// Minimum-norm least-squares solution of a x = b, dropping singular values at or below the tolerance.
RealVector pseudo_solve(const RealMatrix& a, const RealVector& b, RankTolerance tol) {
  const RankedSvd s = ranked_svd(a, tol);
  RealVector x = RealVector::Zero(a.cols());
  for (int k = 0; k < s.rank; ++k) x += s.v.col(k) * (s.u.col(k).dot(b) / s.singular(k));
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------

RepPoint::RepPoint(LieGroupModel group, std::vector<GroupElement> values)
    : group_(std::move(group)), values_(std::move(values)) {
  for (const GroupElement& y : values_) {
    if (y.rows() != group_.matrix_dim() || y.cols() != group_.matrix_dim())
      throw InputError("representation value has wrong matrix size for " + group_.name());
    if (!y.allFinite()) throw InputError("representation value has non-finite entries");
    if (group_.group_residual(y) > 1e-10) throw InputError("representation value is not an element of " + group_.name());
  }
}

RepPoint RepPoint::conjugated(const GroupElement& x) const {
  std::vector<GroupElement> values;
  values.reserve(values_.size());
  for (const GroupElement& y : values_) values.push_back(x * y * x.adjoint());
  return RepPoint(group_, std::move(values));
}

BundleClass BundleClass::make(const LieGroupModel& group, GroupElement c) {
  if (group.group_residual(c) > 1e-10 || !group.is_central(c)) throw InputError("bundle class element is not central");
  return {std::move(c)};
}

GroupElement evaluate_word(const Word& w, const RepPoint& rep) {
  GroupElement out = rep.group().identity();
  for (const Letter& l : w.letters()) {
    if (l.gen > rep.size()) throw InputError("word uses a generator beyond the representation size");
    const GroupElement& y = rep.values()[static_cast<std::size_t>(l.gen - 1)];
    out = l.exponent > 0 ? GroupElement(out * y) : GroupElement(out * y.adjoint());
  }
  return out;
}

RealMatrix evaluate_group_ring(const GroupRingElement& e, const RepPoint& rep) {
  const LieGroupModel& g = rep.group();
  RealMatrix out = RealMatrix::Zero(g.algebra_dim(), g.algebra_dim());
  for (const auto& [w, coef] : e.terms()) out += static_cast<double>(coef) * g.Ad(evaluate_word(w, rep).adjoint());
  return out;
}

CochainData build_complex(const Presentation& pres, const RepPoint& rep, RankTolerance tol) {
  check_sizes(pres, rep);
  const int d = rep.group().algebra_dim();
  const int n = pres.generator_count();
  const int m = pres.relator_count();

  CochainData c;
  c.tolerance = tol;
  c.d0 = RealMatrix::Zero(n * d, d);
  c.d1 = RealMatrix::Zero(m * d, n * d);
  for (int j = 1; j <= n; ++j)
    c.d0.block((j - 1) * d, 0, d, d) =
        evaluate_group_ring(GroupRingElement::one() - GroupRingElement(Word::generator(j)), rep);
  for (int i = 0; i < m; ++i)
    for (int j = 1; j <= n; ++j)
      c.d1.block(i * d, (j - 1) * d, d, d) =
          evaluate_group_ring(fox_derivative(pres.relators()[static_cast<std::size_t>(i)], j), rep);

  const RankedSvd s0 = ranked_svd(c.d0, tol);
  const RankedSvd s1 = ranked_svd(c.d1, tol);
  c.rank0 = s0.rank;
  c.rank1 = s1.rank;
  c.basis_h0 = s0.v.rightCols(d - s0.rank);
  c.basis_b1 = s0.u.leftCols(s0.rank);
  c.basis_z1 = s1.v.rightCols(n * d - s1.rank);
  c.basis_h2 = s1.u.rightCols(m * d - s1.rank);

  const int z1 = n * d - c.rank1;
  const int h1 = std::max(0, z1 - c.rank0);
  c.h_dims = {d - c.rank0, z1 - c.rank0, m * d - c.rank1};
  // Harmonic representatives: the part of Z^1 orthogonal to B^1.
  const RealMatrix projected =
      (RealMatrix::Identity(n * d, n * d) - c.basis_b1 * c.basis_b1.transpose()) * c.basis_z1;
  if (h1 > 0 && projected.cols() > 0) {
    Eigen::JacobiSVD<RealMatrix> svd(projected, Eigen::ComputeThinU);
    c.basis_h1 = svd.matrixU().leftCols(h1);
  } else {
    c.basis_h1 = RealMatrix::Zero(n * d, 0);
  }
  return c;
}

double relator_defect(const Presentation& pres, const RepPoint& rep, const BundleClass& c) {
  check_sizes(pres, rep);
  double defect = 0.0;
  for (const Word& r : pres.relators()) defect = std::max(defect, frobenius_distance(evaluate_word(r, rep), c.central));
  return defect;
}

double finite_diff_check_d1(const Presentation& pres, const RepPoint& rep, const RealVector& u, double h) {
  check_sizes(pres, rep);
  const LieGroupModel& g = rep.group();
  const int d = g.algebra_dim();
  const CochainData c = build_complex(pres, rep);
  const auto base = relator_values_along(pres, rep, u, 0.0);
  const auto plus = relator_values_along(pres, rep, u, h);
  const auto minus = relator_values_along(pres, rep, u, -h);
  RealVector fd(pres.relator_count() * d);
  for (int i = 0; i < pres.relator_count(); ++i) {
    const ComplexMatrix inv = base[static_cast<std::size_t>(i)].adjoint();
    fd.segment(i * d, d) = (g.log(inv * plus[static_cast<std::size_t>(i)]) -
                            g.log(inv * minus[static_cast<std::size_t>(i)])) / (2.0 * h);
  }
  return (fd - c.d1 * u).lpNorm<Eigen::Infinity>();
}

double finite_diff_check_d0(const Presentation& pres, const RepPoint& rep, const AlgebraVector& x, double h) {
  check_sizes(pres, rep);
  const LieGroupModel& g = rep.group();
  const int d = g.algebra_dim();
  const CochainData c = build_complex(pres, rep);
  RealVector fd(rep.size() * d);
  const GroupElement ep = g.exp(h * x), em = g.exp(-h * x);
  for (int j = 0; j < rep.size(); ++j) {
    const GroupElement& y = rep.values()[static_cast<std::size_t>(j)];
    // Orbit map s -> exp(-sX) y exp(sX), left-translated by y^-1.
    const GroupElement plus = em * y * ep;
    const GroupElement minus = ep * y * em;
    fd.segment(j * d, d) = (g.log(y.adjoint() * plus) - g.log(y.adjoint() * minus)) / (2.0 * h);
  }
  return (fd - c.d0 * x).lpNorm<Eigen::Infinity>();
}

// ---------------------------------------------------------------------------

ObstructionModel::ObstructionModel(Presentation pres, RepPoint rep, RankTolerance tol)
    : pres_(std::move(pres)), rep_(std::move(rep)), complex_(build_complex(pres_, rep_, tol)) {}

RealVector ObstructionModel::second_order_term(const RealVector& u) const {
  const LieGroupModel& g = rep_.group();
  const int d = g.algebra_dim();
  if (u.size() != rep_.size() * d) throw InputError("cochain has wrong dimension");
  std::vector<ComplexMatrix> tangent;
  for (int j = 0; j < rep_.size(); ++j) tangent.push_back(g.to_matrix(u.segment(j * d, d)));

  RealVector out(pres_.relator_count() * d);
  for (int i = 0; i < pres_.relator_count(); ++i) {
    const int md = g.matrix_dim();
    Jet acc{ComplexMatrix::Identity(md, md), ComplexMatrix::Zero(md, md), ComplexMatrix::Zero(md, md)};
    for (const Letter& l : pres_.relators()[static_cast<std::size_t>(i)].letters()) acc = acc * letter_jet(l, rep_, tangent);
    const ComplexMatrix inv = acc.c0.adjoint();
    const ComplexMatrix first = inv * acc.c1;
    const ComplexMatrix second = inv * acc.c2;
    // log(I + tA + t^2 B) = tA + t^2 (B - A^2/2) + O(t^3)
    out.segment(i * d, d) = g.coordinates(second - 0.5 * first * first);
  }
  return out;
}

RealVector ObstructionModel::operator()(const RealVector& u) const {
  const double cocycle_defect = (complex_.d1 * u).norm();
  if (cocycle_defect > 1e-9 * std::max(1.0, u.norm()))
    throw InputError("obstruction map needs a 1-cocycle; |D1 u| = " + std::to_string(cocycle_defect));
  return complex_.basis_h2.transpose() * second_order_term(u);
}

RealVector obstruction_quadratic(const Presentation& pres, const RepPoint& rep, const RealVector& u) {
  return ObstructionModel(pres, rep)(u);
}

// ---------------------------------------------------------------------------

NewtonResult newton_project_to_variety(const Presentation& pres, const RepPoint& start, const BundleClass& c,
                                       const NewtonOptions& opts) {
  check_sizes(pres, start);
  const int nd = start.size() * start.group().algebra_dim();
  NewtonResult result{start, 0, relator_defect(pres, start, c)};
  while (result.defect >= opts.tol) {
    if (result.iterations >= opts.max_iter)
      throw ConvergenceError("Newton projection did not converge in " + std::to_string(opts.max_iter) +
                             " iterations (defect " + std::to_string(result.defect) + ")");
    ++result.iterations;
    const RealVector residual = relator_residual(pres, result.point, c);
    const CochainData cx = build_complex(pres, result.point);
    const RealMatrix slice = RealMatrix::Identity(nd, nd) - cx.basis_b1 * cx.basis_b1.transpose();
    const RealVector step = slice * pseudo_solve(cx.d1 * slice, -residual, opts.rank);

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40 && !accepted; ++halving, scale *= 0.5) {
      try {
        RepPoint trial = right_translate(result.point, scale * step);
        const double defect = relator_defect(pres, trial, c);
        if (defect < result.defect) {
          result.point = std::move(trial);
          result.defect = defect;
          accepted = true;
        }
      } catch (const DomainError&) {
        // treated as a residual increase
      }
    }
    if (!accepted) throw ConvergenceError("Newton projection stalled at defect " + std::to_string(result.defect));
  }
  return result;
}

// ---------------------------------------------------------------------------

ConeSampleResult sample_cone_directions(const Presentation& pres, const RepPoint& rep, const BundleClass& c,
                                        int count, std::uint64_t seed, double step) {
  if (relator_defect(pres, rep, c) >= kOnVarietyTolerance)
    throw InputError("cone sampling needs a point on the representation variety");
  const ObstructionModel q(pres, rep);
  const CochainData& cx = q.complex();
  const LieGroupModel& g = rep.group();
  const int d = g.algebra_dim();
  const int z1 = static_cast<int>(cx.basis_z1.cols());
  const int h2 = cx.h_dims[2];

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ConeSampleResult out;
  for (int sample = 0; sample < count; ++sample) {
    ++out.attempts;
    RealVector coords(z1);
    for (int k = 0; k < z1; ++k) coords(k) = normal(rng);
    if (z1 == 0) {
      ++out.failures;
      continue;
    }
    coords.normalize();

    // Push the cocycle onto the cone q = 0, staying on the unit sphere of Z^1.
    bool on_cone = h2 == 0;
    for (int it = 0; it < 40 && !on_cone; ++it) {
      const RealVector u = cx.basis_z1 * coords;
      const RealVector qu = q(u);
      if (qu.norm() < 1e-14) {
        on_cone = true;
        break;
      }
      RealMatrix jac(h2, z1);
      for (int k = 0; k < z1; ++k) {
        const RealVector zk = cx.basis_z1.col(k);
        jac.col(k) = q(u + zk) - qu - q(zk);
      }
      coords -= pseudo_solve(jac, qu, {1e-10, 0.0});
      coords.normalize();
    }
    if (!on_cone) {
      ++out.failures;
      continue;
    }
    const RealVector seed_u = cx.basis_z1 * coords;

    try {
      const RepPoint moved = right_translate(rep, step * seed_u);
      const NewtonResult projected = newton_project_to_variety(pres, moved, c);
      RealVector disp(rep.size() * d);
      for (int j = 0; j < rep.size(); ++j)
        disp.segment(j * d, d) = g.log(rep.values()[static_cast<std::size_t>(j)].adjoint() *
                                       projected.point.values()[static_cast<std::size_t>(j)]);
      const double len = disp.norm();
      if (!(len > 0.5 * step && len < 2.0 * step)) {
        ++out.failures;
        continue;
      }
      const RealVector dir = disp / len;
      out.max_direction_deviation = std::max(out.max_direction_deviation, (dir - seed_u).norm());
      out.max_seed_obstruction = std::max(out.max_seed_obstruction, h2 == 0 ? 0.0 : q(seed_u).norm());
      if (h2 > 0) {
        const RealVector in_z1 = cx.basis_z1 * (cx.basis_z1.transpose() * dir);
        out.max_direction_obstruction = std::max(out.max_direction_obstruction, q(in_z1).norm());
      }
      out.seeds.push_back(seed_u);
      out.directions.push_back(dir);
    } catch (const ConvergenceError&) {
      ++out.failures;
    } catch (const DomainError&) {
      ++out.failures;
    }
  }

  if (!out.directions.empty()) {
    RealMatrix dirs(rep.size() * d, static_cast<Eigen::Index>(out.directions.size()));
    for (std::size_t k = 0; k < out.directions.size(); ++k) dirs.col(static_cast<Eigen::Index>(k)) = out.directions[k];
    out.span_dim_z1 = numerical_rank(cx.basis_z1.transpose() * dirs, {1e-8, 0.0});
    out.span_dim_h1 = numerical_rank(cx.basis_h1.transpose() * dirs, {1e-8, 0.0});
  }
  return out;
}

// ---------------------------------------------------------------------------

int stabilizer_fixed_subspace(const Presentation& pres, const RepPoint& rep, std::span<const GroupElement> stabilizer) {
  const LieGroupModel& g = rep.group();
  for (const GroupElement& s : stabilizer)
    for (const GroupElement& y : rep.values())
      if (frobenius_distance(s * y, y * s) > 1e-9)
        throw InputError("stabilizer element does not commute with the representation");

  const CochainData cx = build_complex(pres, rep);
  const int n = rep.size();
  const int h1 = static_cast<int>(cx.basis_h1.cols());
  if (h1 == 0) return 0;
  RealMatrix stacked(static_cast<Eigen::Index>(stabilizer.size()) * h1, h1);
  for (std::size_t k = 0; k < stabilizer.size(); ++k) {
    const RealMatrix action = block_diagonal(g.Ad(stabilizer[k]), n);
    if ((cx.d1 * action * cx.basis_z1).norm() > 1e-8)
      throw DomainError("stabilizer action does not preserve the cocycles");
    const RealMatrix moved_b1 = action * cx.basis_b1;
    if ((moved_b1 - cx.basis_b1 * (cx.basis_b1.transpose() * moved_b1)).norm() > 1e-8)
      throw DomainError("stabilizer action does not preserve the coboundaries");
    stacked.middleRows(static_cast<Eigen::Index>(k) * h1, h1) =
        cx.basis_h1.transpose() * action * cx.basis_h1 - RealMatrix::Identity(h1, h1);
  }
  if (stabilizer.empty()) return h1;
  return static_cast<int>(null_space(stacked, kCochainRankTolerance).cols());
}

std::vector<GroupElement> stabilizer_generators(const RepPoint& rep, std::uint64_t seed) {
  const LieGroupModel& g = rep.group();
  std::vector<GroupElement> out;
  if (g.center_elements()) out = *g.center_elements();
  const RealMatrix algebra = g.centralizer_algebra(rep.values());
  if (algebra.cols() > 0) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < 2; ++k) {
      RealVector coeffs(algebra.cols());
      for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) = normal(rng);
      out.push_back(g.exp(algebra * coeffs));
    }
  }
  return out;
}

OrbitType classify_orbit_type(const RepPoint& rep) {
  const LieGroupModel& g = rep.group();
  OrbitType t;
  t.stabilizer_dim = static_cast<int>(g.centralizer_algebra(rep.values()).cols());
  if (g.name() == "SU2") {
    switch (t.stabilizer_dim) {
      case 0: t.label = "Z"; break;
      case 1: t.label = "(T)"; break;
      case 3: t.label = "G"; break;
      default: t.label = "dim=" + std::to_string(t.stabilizer_dim);
    }
  } else {
    t.label = "dim=" + std::to_string(t.stabilizer_dim);
  }
  return t;
}

bool conjugation_isomorphism_check(const Presentation& pres, const RepPoint& rep, const GroupElement& x) {
  const LieGroupModel& g = rep.group();
  const CochainData a = build_complex(pres, rep);
  const CochainData b = build_complex(pres, rep.conjugated(x));
  if (a.h_dims != b.h_dims) return false;
  const RealMatrix ad = g.Ad(x);
  const RealMatrix on_cochains = block_diagonal(ad, rep.size());
  const RealMatrix on_relators = block_diagonal(ad, pres.relator_count());
  const double e0 = (b.d0 - on_cochains * a.d0 * ad.transpose()).norm();
  const double e1 = (b.d1 - on_relators * a.d1 * on_cochains.transpose()).norm();
  return e0 < 1e-8 && e1 < 1e-8;
}

std::vector<RepPoint> enumerate_central_reps(const Presentation& pres, const LieGroupModel& group,
                                             const BundleClass& c) {
  if (!group.center_elements()) throw InputError("group " + group.name() + " has no finite center list");
  const auto& center = *group.center_elements();
  const int n = pres.generator_count();
  std::vector<RepPoint> out;
  if (center.empty()) return out;
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<GroupElement> values;
    for (std::size_t k : digits) values.push_back(center[k]);
    RepPoint rep(group, std::move(values));
    if (relator_defect(pres, rep, c) < kOnVarietyTolerance) out.push_back(std::move(rep));
    std::size_t pos = 0;
    while (pos < digits.size() && ++digits[pos] == center.size()) digits[pos++] = 0;
    if (pos == digits.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

RepPoint central_rep(const LieGroupModel& group, const std::vector<std::string>& signs) {
  std::vector<GroupElement> values;
  for (const std::string& s : signs) values.push_back(group.central_element(s));
  return RepPoint(group, std::move(values));
}

RepPoint torus_rep(const LieGroupModel& group, const std::vector<double>& angles) {
  RealVector generator = RealVector::Zero(group.algebra_dim());
  int offset = 0;
  for (FactorKind kind : group.factors()) {
    switch (kind) {
      case FactorKind::SU2: generator(offset + 2) = 2.0; offset += 3; break;
      case FactorKind::SO3: generator(offset + 2) = 1.0; offset += 3; break;
      case FactorKind::U1: generator(offset) = 1.0; offset += 1; break;
    }
  }
  std::vector<GroupElement> values;
  for (double theta : angles) values.push_back(group.exp(theta * generator));
  return RepPoint(group, std::move(values));
}

RepPoint random_solution(const Presentation& pres, const LieGroupModel& group, const BundleClass& c,
                         std::uint64_t seed, int attempts) {
  Rng rng(seed);
  NewtonOptions opts;
  opts.max_iter = 100;
  for (int a = 0; a < attempts; ++a) {
    std::vector<GroupElement> values;
    for (int j = 0; j < pres.generator_count(); ++j) values.push_back(group.random_element(rng));
    try {
      return newton_project_to_variety(pres, RepPoint(group, std::move(values)), c, opts).point;
    } catch (const ConvergenceError&) {
    } catch (const DomainError&) {
    }
  }
  throw ConvergenceError("no random start converged to the representation variety after " +
                         std::to_string(attempts) + " attempts");
}

}  // namespace surfrep
