#include "surfrep/lie_model.hpp"

#include <cmath>
#include <numbers>

#include "surfrep/errors.hpp"

namespace surfrep {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kCutMargin = 1e-6;

double form_scale(FactorKind kind) {
  switch (kind) {
    case FactorKind::SU2: return 2.0;
    case FactorKind::SO3: return 0.5;
    case FactorKind::U1: return 1.0;
  }
  return 1.0;
}

int factor_matrix_size(FactorKind kind) {
  switch (kind) {
    case FactorKind::SU2: return 2;
    case FactorKind::SO3: return 3;
    case FactorKind::U1: return 1;
  }
  return 0;
}

int factor_algebra_size(FactorKind kind) { return kind == FactorKind::U1 ? 1 : 3; }

std::vector<ComplexMatrix> make_factor_basis(FactorKind kind) {
  std::vector<ComplexMatrix> out;
  switch (kind) {
    case FactorKind::SU2: {
      ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
      sx << 0, 1, 1, 0;
      sy << 0, -kI, kI, 0;
      sz << 1, 0, 0, -1;
      for (const auto* s : {&sx, &sy, &sz}) out.push_back(0.5 * kI * (*s));
      break;
    }
    case FactorKind::SO3: {
      for (int k = 0; k < 3; ++k) {
        ComplexMatrix l = ComplexMatrix::Zero(3, 3);
        const int a = (k + 1) % 3, b = (k + 2) % 3;
        l(a, b) = -1.0;
        l(b, a) = 1.0;
        out.push_back(l);
      }
      break;
    }
    case FactorKind::U1: {
      ComplexMatrix l(1, 1);
      l(0, 0) = kI;
      out.push_back(l);
      break;
    }
  }
  return out;
}

const std::vector<ComplexMatrix>& factor_basis(FactorKind kind) {
  static const std::vector<ComplexMatrix> su2 = make_factor_basis(FactorKind::SU2);
  static const std::vector<ComplexMatrix> so3 = make_factor_basis(FactorKind::SO3);
  static const std::vector<ComplexMatrix> u1 = make_factor_basis(FactorKind::U1);
  switch (kind) {
    case FactorKind::SU2: return su2;
    case FactorKind::SO3: return so3;
    case FactorKind::U1: break;
  }
  return u1;
}

std::vector<ComplexMatrix> factor_center(FactorKind kind) {
  switch (kind) {
    case FactorKind::SU2: return {ComplexMatrix::Identity(2, 2), -ComplexMatrix::Identity(2, 2)};
    case FactorKind::SO3: return {ComplexMatrix::Identity(3, 3)};
    case FactorKind::U1: return {};
  }
  return {};
}

// Rotation matrix of a unit quaternion (w, x, y, z).
Eigen::Matrix3d quaternion_rotation(double w, double x, double y, double z) {
  Eigen::Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

}  // namespace

std::string_view factor_name(FactorKind kind) {
  switch (kind) {
    case FactorKind::SU2: return "SU2";
    case FactorKind::SO3: return "SO3";
    case FactorKind::U1: return "U1";
  }
  return "?";
}

LieGroupModel LieGroupModel::parse(std::string_view text) {
  std::vector<FactorKind> factors;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find('x', pos);
    const std::string_view token = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (token == "SU2") factors.push_back(FactorKind::SU2);
    else if (token == "SO3") factors.push_back(FactorKind::SO3);
    else if (token == "U1") factors.push_back(FactorKind::U1);
    else throw InputError("unknown group factor '" + std::string(token) + "' in '" + std::string(text) + "'");
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return LieGroupModel(std::move(factors));
}

LieGroupModel::LieGroupModel(std::vector<FactorKind> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InputError("group must have at least one factor");
  for (FactorKind kind : factors_) {
    blocks_.push_back({kind, matrix_dim_, factor_matrix_size(kind), algebra_dim_, factor_algebra_size(kind)});
    matrix_dim_ += factor_matrix_size(kind);
    algebra_dim_ += factor_algebra_size(kind);
    if (!name_.empty()) name_ += 'x';
    name_ += factor_name(kind);
  }
  for (const Block& b : blocks_) {
    for (const ComplexMatrix& e : factor_basis(b.kind)) {
      ComplexMatrix full = ComplexMatrix::Zero(matrix_dim_, matrix_dim_);
      full.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size) = e;
      basis_.push_back(std::move(full));
    }
  }
  // Center of a product is the product of centers; infinite as soon as a U1 factor appears.
  std::vector<GroupElement> center{ComplexMatrix::Identity(matrix_dim_, matrix_dim_)};
  bool finite = true;
  for (const Block& b : blocks_) {
    const auto local = factor_center(b.kind);
    if (local.empty()) {
      finite = false;
      break;
    }
    std::vector<GroupElement> next;
    for (const auto& c : center)
      for (const auto& z : local) {
        GroupElement g = c;
        g.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size) = z;
        next.push_back(std::move(g));
      }
    center = std::move(next);
  }
  if (finite) center_ = std::move(center);
}

LieGroupModel LieGroupModel::with_center(std::vector<GroupElement> elements) const {
  for (const auto& g : elements) {
    if (g.rows() != matrix_dim_ || g.cols() != matrix_dim_ || group_residual(g) > 1e-10 || !is_central(g))
      throw InputError("configured center element is not a central group element");
  }
  LieGroupModel copy = *this;
  copy.center_ = std::move(elements);
  return copy;
}

GroupElement LieGroupModel::central_element(std::string_view name) const {
  if (name == "+I" || name == "+" || name == "I") return identity();
  if (name == "-I" || name == "-") {
    GroupElement g = -identity();
    if (group_residual(g) > 1e-12) throw InputError("-I is not an element of " + name_);
    return g;
  }
  throw InputError("unknown central element name '" + std::string(name) + "'");
}

GroupElement LieGroupModel::identity() const { return ComplexMatrix::Identity(matrix_dim_, matrix_dim_); }

ComplexMatrix LieGroupModel::to_matrix(const AlgebraVector& x) const {
  ComplexMatrix m = ComplexMatrix::Zero(matrix_dim_, matrix_dim_);
  for (int k = 0; k < algebra_dim_; ++k) m += x(k) * basis_[static_cast<std::size_t>(k)];
  return m;
}

AlgebraVector LieGroupModel::coordinates(const ComplexMatrix& m) const {
  AlgebraVector x(algebra_dim_);
  for (const Block& b : blocks_) {
    const double c = form_scale(b.kind);
    const auto mb = m.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size);
    for (int k = 0; k < b.algebra_size; ++k) {
      const int idx = b.algebra_offset + k;
      const auto eb = basis_[static_cast<std::size_t>(idx)].block(b.matrix_offset, b.matrix_offset,
                                                                   b.matrix_size, b.matrix_size);
      x(idx) = -c * (eb * mb).trace().real();
    }
  }
  return x;
}

GroupElement LieGroupModel::exp(const AlgebraVector& x) const {
  GroupElement g = ComplexMatrix::Zero(matrix_dim_, matrix_dim_);
  for (const Block& b : blocks_) {
    const RealVector xb = x.segment(b.algebra_offset, b.algebra_size);
    auto gb = g.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size);
    const double theta = xb.norm();
    switch (b.kind) {
      case FactorKind::SU2: {
        const double half = 0.5 * theta;
        const double sinc = half < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
        ComplexMatrix xm = ComplexMatrix::Zero(2, 2);
        for (int k = 0; k < 3; ++k) xm += xb(k) * factor_basis(FactorKind::SU2)[static_cast<std::size_t>(k)];
        gb = std::cos(half) * ComplexMatrix::Identity(2, 2) + sinc * xm;
        break;
      }
      case FactorKind::SO3: {
        Eigen::Matrix3d k;
        k << 0, -xb(2), xb(1), xb(2), 0, -xb(0), -xb(1), xb(0), 0;
        const double a = theta < 1e-8 ? 1.0 - theta * theta / 6.0 : std::sin(theta) / theta;
        const double c = theta < 1e-6 ? 0.5 - theta * theta / 24.0 : (1.0 - std::cos(theta)) / (theta * theta);
        const Eigen::Matrix3d r = Eigen::Matrix3d::Identity() + a * k + c * k * k;
        gb = r.cast<std::complex<double>>();
        break;
      }
      case FactorKind::U1:
        gb(0, 0) = std::exp(kI * xb(0));
        break;
    }
  }
  return g;
}

AlgebraVector LieGroupModel::log(const GroupElement& g) const {
  AlgebraVector x(algebra_dim_);
  for (const Block& b : blocks_) {
    const ComplexMatrix gb = g.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size);
    switch (b.kind) {
      case FactorKind::SU2: {
        const double c = std::clamp(0.5 * gb.trace().real(), -1.0, 1.0);
        const double theta = 2.0 * std::acos(c);
        if (theta > 2.0 * std::numbers::pi - kCutMargin)
          throw DomainError("SU2 log: element at the cut locus (-I)");
        const ComplexMatrix skew = 0.5 * (gb - gb.adjoint());
        const double s = std::sin(0.5 * theta);  // |skew part| in coordinates is 2 sin(theta/2)
        const double factor = theta < 1e-8 ? 1.0 : theta / (2.0 * s);
        for (int k = 0; k < 3; ++k) {
          const auto& e = factor_basis(FactorKind::SU2)[static_cast<std::size_t>(k)];
          x(b.algebra_offset + k) = factor * (-2.0 * (e * skew).trace().real());
        }
        break;
      }
      case FactorKind::SO3: {
        const Eigen::Matrix3d r = gb.real();
        const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
        const double theta = std::acos(c);
        if (theta > std::numbers::pi - kCutMargin) throw DomainError("SO3 log: rotation angle at pi");
        const Eigen::Matrix3d skew = 0.5 * (r - r.transpose());
        const double factor = theta < 1e-8 ? 1.0 + theta * theta / 6.0 : theta / std::sin(theta);
        x(b.algebra_offset + 0) = factor * skew(2, 1);
        x(b.algebra_offset + 1) = factor * skew(0, 2);
        x(b.algebra_offset + 2) = factor * skew(1, 0);
        break;
      }
      case FactorKind::U1: {
        const double theta = std::arg(gb(0, 0));
        if (std::abs(theta) > std::numbers::pi - kCutMargin) throw DomainError("U1 log: angle at pi");
        x(b.algebra_offset) = theta;
        break;
      }
    }
  }
  return x;
}

RealMatrix LieGroupModel::Ad(const GroupElement& g) const {
  RealMatrix a(algebra_dim_, algebra_dim_);
  const ComplexMatrix ginv = g.adjoint();
  for (int l = 0; l < algebra_dim_; ++l) a.col(l) = coordinates(g * basis_[static_cast<std::size_t>(l)] * ginv);
  return a;
}

RealMatrix LieGroupModel::ad(const AlgebraVector& x) const {
  RealMatrix a(algebra_dim_, algebra_dim_);
  const ComplexMatrix xm = to_matrix(x);
  for (int l = 0; l < algebra_dim_; ++l) {
    const auto& e = basis_[static_cast<std::size_t>(l)];
    a.col(l) = coordinates(xm * e - e * xm);
  }
  return a;
}

AlgebraVector LieGroupModel::bracket(const AlgebraVector& x, const AlgebraVector& y) const {
  const ComplexMatrix xm = to_matrix(x), ym = to_matrix(y);
  return coordinates(xm * ym - ym * xm);
}

RealMatrix LieGroupModel::centralizer_algebra(std::span<const GroupElement> elements, RankTolerance tol) const {
  RealMatrix stacked(static_cast<Eigen::Index>(elements.size()) * algebra_dim_, algebra_dim_);
  for (std::size_t i = 0; i < elements.size(); ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * algebra_dim_, algebra_dim_) =
        Ad(elements[i]) - RealMatrix::Identity(algebra_dim_, algebra_dim_);
  return null_space(stacked, tol);
}

GroupElement LieGroupModel::random_element(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
  GroupElement g = ComplexMatrix::Zero(matrix_dim_, matrix_dim_);
  for (const Block& b : blocks_) {
    auto gb = g.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size);
    if (b.kind == FactorKind::U1) {
      gb(0, 0) = std::exp(kI * uniform(rng));
      continue;
    }
    // Normalized Gaussian 4-vector is a Haar-distributed unit quaternion.
    Eigen::Vector4d q;
    for (int k = 0; k < 4; ++k) q(k) = normal(rng);
    q.normalize();
    if (b.kind == FactorKind::SU2) {
      const cd alpha{q(0), q(1)}, beta{q(2), q(3)};
      gb(0, 0) = alpha;
      gb(0, 1) = -std::conj(beta);
      gb(1, 0) = beta;
      gb(1, 1) = std::conj(alpha);
    } else {
      gb = quaternion_rotation(q(0), q(1), q(2), q(3)).cast<std::complex<double>>();
    }
  }
  return g;
}

GroupElement LieGroupModel::random_element(std::uint64_t seed) const {
  Rng rng(seed);
  return random_element(rng);
}

AlgebraVector LieGroupModel::random_algebra_vector(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  AlgebraVector x(algebra_dim_);
  for (int k = 0; k < algebra_dim_; ++k) x(k) = normal(rng);
  return x;
}

AlgebraVector LieGroupModel::random_algebra_vector(std::uint64_t seed) const {
  Rng rng(seed);
  return random_algebra_vector(rng);
}

GroupElement LieGroupModel::project_to_group(const ComplexMatrix& m) const {
  GroupElement g = ComplexMatrix::Zero(matrix_dim_, matrix_dim_);
  for (const Block& b : blocks_) {
    const ComplexMatrix mb = m.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size);
    auto gb = g.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size);
    switch (b.kind) {
      case FactorKind::SU2: {
        cd alpha = 0.5 * (mb(0, 0) + std::conj(mb(1, 1)));
        cd beta = 0.5 * (mb(1, 0) - std::conj(mb(0, 1)));
        const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
        if (norm == 0.0) throw DomainError("cannot project the zero matrix to SU2");
        alpha /= norm;
        beta /= norm;
        gb(0, 0) = alpha;
        gb(0, 1) = -std::conj(beta);
        gb(1, 0) = beta;
        gb(1, 1) = std::conj(alpha);
        break;
      }
      case FactorKind::SO3: {
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(mb.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::Matrix3d u = svd.matrixU();
        const Eigen::Matrix3d v = svd.matrixV();
        if ((u * v.transpose()).determinant() < 0) u.col(2) *= -1.0;
        gb = (u * v.transpose()).cast<std::complex<double>>();
        break;
      }
      case FactorKind::U1: {
        const double r = std::abs(mb(0, 0));
        if (r == 0.0) throw DomainError("cannot project 0 to U1");
        gb(0, 0) = mb(0, 0) / r;
        break;
      }
    }
  }
  return g;
}

double LieGroupModel::group_residual(const ComplexMatrix& m) const {
  if (m.rows() != matrix_dim_ || m.cols() != matrix_dim_) return std::numeric_limits<double>::infinity();
  double r = (m.adjoint() * m - identity()).norm();
  for (const Block& b : blocks_) {
    const ComplexMatrix mb = m.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size);
    if (b.kind != FactorKind::U1) r += std::abs(mb.determinant() - 1.0);
    if (b.kind == FactorKind::SO3) r += mb.imag().norm();
  }
  // Off-block entries must vanish.
  ComplexMatrix off = m;
  for (const Block& b : blocks_)
    off.block(b.matrix_offset, b.matrix_offset, b.matrix_size, b.matrix_size).setZero();
  return r + off.norm();
}

bool LieGroupModel::is_central(const GroupElement& g, double tol) const {
  return (Ad(g) - RealMatrix::Identity(algebra_dim_, algebra_dim_)).norm() <= tol;
}

}  // namespace surfrep
