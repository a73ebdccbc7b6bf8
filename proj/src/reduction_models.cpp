#include "surfrep/reduction_models.hpp"

#include <algorithm>
#include <cmath>

#include "surfrep/errors.hpp"

namespace surfrep {

namespace {

// Offsets of q1, p1, q2, p2 inside a point of (R^3)^4.
constexpr int kQ1 = 0, kP1 = 3, kQ2 = 6, kP2 = 9;
// Gram row order (q1, q2, p1, p2) mapped to W offsets.
constexpr std::array<int, 4> kGramSlots{kQ1, kQ2, kP1, kP2};

Eigen::Vector3d slot(const RealVector& w, int offset) { return w.segment<3>(offset); }

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

double det2(double a, double b, double c, double d) { return a * d - b * c; }

RealMatrix momentum_jacobian(const LinearMomentumModel& model, const RealVector& w) {
  if (model.kind() == ReductionModelKind::SO2) {
    RealMatrix j(1, 4);
    j << w(3), -w(2), -w(1), w(0);
    return j;
  }
  RealMatrix j(3, 12);
  j.block<3, 3>(0, kQ1) = -skew(slot(w, kP1));
  j.block<3, 3>(0, kP1) = skew(slot(w, kQ1));
  j.block<3, 3>(0, kQ2) = -skew(slot(w, kP2));
  j.block<3, 3>(0, kP2) = skew(slot(w, kQ2));
  return j;
}

}  // namespace

LinearMomentumModel::LinearMomentumModel(ReductionModelKind kind)
    : kind_(kind), group_(LieGroupModel::parse(kind == ReductionModelKind::SO2 ? "U1" : "SO3")) {}

LinearMomentumModel LinearMomentumModel::so2() { return LinearMomentumModel(ReductionModelKind::SO2); }
LinearMomentumModel LinearMomentumModel::so3() { return LinearMomentumModel(ReductionModelKind::SO3); }

LinearMomentumModel LinearMomentumModel::parse(const std::string& name) {
  if (name == "so2" || name == "SO2") return so2();
  if (name == "so3" || name == "SO3") return so3();
  throw InputError("unknown reduction model '" + name + "' (expected so2 or so3)");
}

RealMatrix LinearMomentumModel::action(const GroupElement& g) const {
  RealMatrix out = RealMatrix::Zero(w_dim(), w_dim());
  if (kind_ == ReductionModelKind::SO2) {
    const double c = g(0, 0).real(), s = g(0, 0).imag();
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    out.block<2, 2>(0, 0) = r;
    out.block<2, 2>(2, 2) = r;
  } else {
    const Eigen::Matrix3d r = g.real();
    for (int k = 0; k < 4; ++k) out.block<3, 3>(3 * k, 3 * k) = r;
  }
  return out;
}

RealMatrix LinearMomentumModel::coadjoint(const GroupElement& g) const {
  if (kind_ == ReductionModelKind::SO2) return RealMatrix::Identity(1, 1);
  return g.real();
}

RealVector LinearMomentumModel::momentum(const RealVector& w) const {
  if (w.size() != w_dim()) throw InputError("point has wrong dimension for model " + name());
  if (kind_ == ReductionModelKind::SO2) {
    RealVector m(1);
    m(0) = momentum_so2(w.segment<2>(0), w.segment<2>(2));
    return m;
  }
  return momentum_so3(slot(w, kQ1), slot(w, kP1), slot(w, kQ2), slot(w, kP2));
}

double momentum_so2(const Eigen::Vector2d& q, const Eigen::Vector2d& p) { return q(0) * p(1) - q(1) * p(0); }

Eigen::Vector3d momentum_so3(const Eigen::Vector3d& q1, const Eigen::Vector3d& p1, const Eigen::Vector3d& q2,
                             const Eigen::Vector3d& p2) {
  return q1.cross(p1) + q2.cross(p2);
}

// ---------------------------------------------------------------------------

ZeroLocusPoint project_to_zero_locus(const LinearMomentumModel& model, const RealVector& w0) {
  RealVector w = w0;
  const double scale = std::max(1.0, w0.squaredNorm());
  for (int it = 0; it < 60; ++it) {
    const RealVector mu = model.momentum(w);
    if (mu.norm() < 1e-14 * scale) return {w, mu.norm()};
    const RealMatrix jac = momentum_jacobian(model, w);
    w -= jac.completeOrthogonalDecomposition().solve(mu);
  }
  throw ConvergenceError("projection onto the zero locus did not converge");
}

std::vector<ZeroLocusPoint> sample_zero_locus(const LinearMomentumModel& model, int count, std::uint64_t seed,
                                              ZeroLocusSampler sampler) {
  if (count < 1) throw InputError("sample count must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto gaussian = [&](int n) {
    RealVector v(n);
    for (int k = 0; k < n; ++k) v(k) = normal(rng);
    return v;
  };

  std::vector<ZeroLocusPoint> out;
  out.push_back({RealVector::Zero(model.w_dim()), 0.0});
  while (static_cast<int>(out.size()) < count) {
    RealVector w(model.w_dim());
    if (sampler == ZeroLocusSampler::Projected) {
      out.push_back(project_to_zero_locus(model, gaussian(model.w_dim())));
      continue;
    }
    if (model.kind() == ReductionModelKind::SO2) {
      const RealVector q = gaussian(2);
      w << q, normal(rng) * q;
    } else if (out.size() % 10 == 9) {
      // Collinear configuration: lands in the rank-one stratum.
      const Eigen::Vector3d axis = gaussian(3);
      const RealVector c = gaussian(4);
      for (int k = 0; k < 4; ++k) w.segment<3>(3 * k) = c(k) * axis;
    } else {
      // Four vectors in a random plane with the two signed areas cancelling.
      Eigen::Vector3d e1 = gaussian(3), e2 = gaussian(3);
      e1.normalize();
      e2 -= e2.dot(e1) * e1;
      e2.normalize();
      const RealVector a = gaussian(8);
      const double area1 = det2(a(0), a(2), a(1), a(3));
      const double area2 = det2(a(4), a(6), a(5), a(7));
      if (std::abs(area2) < 1e-3) continue;
      const double s = -area1 / area2;
      if (std::abs(s) > 10.0 || std::abs(s) < 0.1) continue;
      const auto embed = [&](double x, double y) -> Eigen::Vector3d { return x * e1 + y * e2; };
      w.segment<3>(kQ1) = embed(a(0), a(1));
      w.segment<3>(kP1) = embed(a(2), a(3));
      w.segment<3>(kQ2) = embed(a(4), a(5));
      w.segment<3>(kP2) = s * embed(a(6), a(7));
    }
    out.push_back({w, model.momentum(w).norm()});
  }
  return out;
}

// ---------------------------------------------------------------------------

HilbertImage hilbert_map(const LinearMomentumModel& model, const RealVector& w) {
  if (w.size() != model.w_dim()) throw InputError("point has wrong dimension for model " + model.name());
  HilbertImage img;
  if (model.kind() == ReductionModelKind::SO2) {
    const Eigen::Vector2d q = w.segment<2>(0), p = w.segment<2>(2);
    img.coords = Eigen::Vector3d(q.dot(q) - p.dot(p), 2.0 * q.dot(p), q.dot(q) + p.dot(p));
    return img;
  }
  img.gram.resize(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) img.gram(i, j) = slot(w, kGramSlots[static_cast<std::size_t>(i)]).dot(slot(w, kGramSlots[static_cast<std::size_t>(j)]));
  img.coords.resize(10);
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) img.coords(k++) = img.gram(i, j);
  return img;
}

double psi(const RealMatrix& l) {
  // Gram indices: 0 = q1, 1 = q2, 2 = p1, 3 = p2.
  return det2(l(0, 0), l(0, 2), l(2, 0), l(2, 2)) + 2.0 * det2(l(0, 1), l(0, 3), l(2, 1), l(2, 3)) +
         det2(l(1, 1), l(1, 3), l(3, 1), l(3, 3));
}

std::array<double, 6> wedge_momentum_invariants(const RealMatrix& l) {
  constexpr int q1 = 0, q2 = 1, p1 = 2, p2 = 3;
  constexpr std::array<std::array<int, 2>, 6> couples{{{q1, q2}, {q1, p1}, {q1, p2}, {q2, p1}, {q2, p2}, {p1, p2}}};
  std::array<double, 6> out{};
  for (std::size_t k = 0; k < couples.size(); ++k) {
    const int a = couples[k][0], b = couples[k][1];
    out[k] = det2(l(a, q1), l(a, p1), l(b, q1), l(b, p1)) + det2(l(a, q2), l(a, p2), l(b, q2), l(b, p2));
  }
  return out;
}

std::array<double, 16> three_by_three_minors(const RealMatrix& l) {
  std::array<double, 16> out{};
  std::size_t k = 0;
  for (int drop_row = 0; drop_row < 4; ++drop_row)
    for (int drop_col = 0; drop_col < 4; ++drop_col) {
      Eigen::Matrix3d m;
      for (int i = 0, ii = 0; i < 4; ++i) {
        if (i == drop_row) continue;
        for (int j = 0, jj = 0; j < 4; ++j) {
          if (j == drop_col) continue;
          m(ii, jj++) = l(i, j);
        }
        ++ii;
      }
      out[k++] = m.determinant();
    }
  return out;
}

double RelationReport::max_residual() const {
  double r = std::max({cone_relation, r_negativity, std::abs(determinant), std::abs(psi_value), max_minor,
                       std::max(0.0, -min_eigenvalue), third_singular_ratio});
  for (double v : wedge_invariants) r = std::max(r, std::abs(v));
  return r;
}

RelationReport check_relations(const LinearMomentumModel& model, const ZeroLocusPoint& point) {
  const HilbertImage img = hilbert_map(model, point.w);
  RelationReport rep;
  if (model.kind() == ReductionModelKind::SO2) {
    const double u = img.coords(0), v = img.coords(1), r = img.coords(2);
    rep.cone_relation = std::abs(u * u + v * v - r * r);
    rep.r_negativity = std::max(0.0, -r);
    return rep;
  }
  const RealMatrix& l = img.gram;
  rep.determinant = l.determinant();
  rep.psi_value = psi(l);
  rep.wedge_invariants = wedge_momentum_invariants(l);
  for (double m : three_by_three_minors(l)) rep.max_minor = std::max(rep.max_minor, std::abs(m));
  const Eigen::SelfAdjointEigenSolver<RealMatrix> eig(l, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = eig.eigenvalues()(0);
  RealVector sv = eig.eigenvalues().cwiseAbs();
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<>());
  rep.third_singular_ratio = sv(0) == 0.0 ? 0.0 : sv(2) / sv(0);
  return rep;
}

int zariski_dim_at_origin(const LinearMomentumModel& model, const std::vector<ZeroLocusPoint>& samples,
                          double rank_tol) {
  if (static_cast<int>(samples.size()) < 2 * model.invariant_count())
    throw InputError("need at least " + std::to_string(2 * model.invariant_count()) + " samples, got " +
                     std::to_string(samples.size()));
  RealMatrix images(static_cast<Eigen::Index>(samples.size()), model.invariant_count());
  for (std::size_t k = 0; k < samples.size(); ++k)
    images.row(static_cast<Eigen::Index>(k)) = hilbert_map(model, samples[k].w).coords.transpose();
  return numerical_rank(images, {rank_tol, 0.0});
}

std::vector<RealVector> spanning_vectors_8_5(const Eigen::Vector3d& v) {
  const std::vector<std::vector<int>> occupied{{0}, {1}, {2}, {3}, {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::vector<RealVector> out;
  for (const auto& slots : occupied) {
    RealVector w = RealVector::Zero(12);
    for (int s : slots) w.segment<3>(kGramSlots[static_cast<std::size_t>(s)]) = v;
    out.push_back(std::move(w));
  }
  return out;
}

std::optional<int> psd_rank_stratum(const RealMatrix& gram, double tol) {
  const Eigen::SelfAdjointEigenSolver<RealMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const RealVector& e = eig.eigenvalues();
  const double sigma1 = e.cwiseAbs().maxCoeff();
  if (sigma1 == 0.0) return 0;
  if (e(0) < -tol * sigma1) return std::nullopt;
  int rank = 0;
  for (Eigen::Index k = 0; k < e.size(); ++k)
    if (e(k) > tol * sigma1) ++rank;
  if (rank > 2) return std::nullopt;
  return rank;
}

ConeModelReport so2_cone_model_report(int smooth_factor_dim, int samples, std::uint64_t seed) {
  const LinearMomentumModel model = LinearMomentumModel::so2();
  const auto points = sample_zero_locus(model, samples, seed);
  ConeModelReport rep;
  rep.cone_dim = zariski_dim_at_origin(model, points);
  rep.smooth_factor_dim = smooth_factor_dim;
  rep.total_dim = smooth_factor_dim + rep.cone_dim;
  for (const auto& p : points) rep.max_relation_residual = std::max(rep.max_relation_residual, check_relations(model, p).max_residual());
  return rep;
}

ReductionSummary summarize_reduction(const LinearMomentumModel& model, int samples, std::uint64_t seed,
                                     ZeroLocusSampler sampler) {
  const auto points = sample_zero_locus(model, samples, seed, sampler);
  ReductionSummary s;
  s.model = model.name();
  s.samples = samples;
  s.zariski_dim = zariski_dim_at_origin(model, points);
  for (const auto& p : points) {
    s.relation_residual_max = std::max(s.relation_residual_max, check_relations(model, p).max_residual());
    s.momentum_residual_max = std::max(s.momentum_residual_max, p.residual);
    std::string key;
    if (model.kind() == ReductionModelKind::SO2) {
      key = p.w.norm() == 0.0 ? "apex" : "cone";
    } else {
      const auto j = psd_rank_stratum(hilbert_map(model, p.w).gram);
      key = j ? "n" + std::to_string(*j) : "outside";
    }
    ++s.stratum_histogram[key];
  }
  return s;
}

}  // namespace surfrep
