#include "heatlab/group.hpp"

#include <array>
#include <cmath>
#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>

namespace heatlab {

namespace {

std::array<Eigen::Matrix2cd, 3> make_su2_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  std::array<Eigen::Matrix2cd, 3> X;
  X[0] << 0.0, Complex(0, s), Complex(0, s), 0.0;    // i sigma_1 / sqrt2
  X[1] << 0.0, Complex(s, 0), Complex(-s, 0), 0.0;   // i sigma_2 / sqrt2
  X[2] << Complex(0, s), 0.0, 0.0, Complex(0, -s);   // i sigma_3 / sqrt2
  return X;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

}  // namespace

const Eigen::Matrix2cd& su2_basis(int k) {
  static const std::array<Eigen::Matrix2cd, 3> basis = make_su2_basis();
  return basis.at(static_cast<std::size_t>(k));
}

Eigen::Matrix2cd su2_algebra_element(std::span<const double> Y) {
  Eigen::Matrix2cd A = Eigen::Matrix2cd::Zero();
  for (int k = 0; k < 3; ++k) A += Y[k] * su2_basis(k);
  return A;
}

std::vector<double> su2_coordinates(const Eigen::Matrix2cd& X) {
  std::vector<double> y(3);
  for (int k = 0; k < 3; ++k) y[k] = (su2_basis(k).adjoint() * X).trace().real();
  return y;
}

Eigen::Matrix2cd expm_traceless(const Eigen::Matrix2cd& A) {
  const Complex s2 = -A.determinant();
  const Complex s = std::sqrt(s2);
  Complex c, sh;
  if (std::abs(s) < 1e-4) {
    c = 1.0 + s2 / 2.0 + s2 * s2 / 24.0 + s2 * s2 * s2 / 720.0;
    sh = 1.0 + s2 / 6.0 + s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0;
  } else {
    c = std::cosh(s);
    sh = std::sinh(s) / s;
  }
  return c * Eigen::Matrix2cd::Identity() + sh * A;
}

double wrap_angle(double theta) {
  double r = std::fmod(theta, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

double centered_angle(double theta) {
  double r = wrap_angle(theta);
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

// ---- CompactGroup ---------------------------------------------------------

CompactGroup CompactGroup::torus(int d) {
  if (d < 1) throw DomainError("torus dimension must be >= 1");
  CompactGroup G;
  G.factors_.push_back({FactorKind::torus, d, 0, 0});
  G.finish();
  return G;
}

CompactGroup CompactGroup::su2() {
  CompactGroup G;
  G.factors_.push_back({FactorKind::su2, 3, 0, 0});
  G.finish();
  return G;
}

CompactGroup CompactGroup::product(std::span<const CompactGroup> parts) {
  if (parts.empty()) throw DomainError("product of zero groups");
  CompactGroup G;
  for (const auto& p : parts) {
    for (const auto& f : p.factors()) G.factors_.push_back({f.kind, f.dim, 0, 0});
  }
  G.finish();
  return G;
}

void CompactGroup::finish() {
  dim_ = 0;
  angle_count_ = 0;
  su2_count_ = 0;
  labels_.clear();
  basis_factor_.clear();
  std::string name;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    auto& f = factors_[i];
    f.offset = dim_;
    if (f.kind == FactorKind::torus) {
      f.slot = angle_count_;
      angle_count_ += f.dim;
      if (!name.empty()) name += ",";
      name += "torus:" + std::to_string(f.dim);
    } else {
      f.slot = su2_count_++;
      if (!name.empty()) name += ",";
      name += "su2";
    }
    for (int k = 0; k < f.dim; ++k) {
      labels_.push_back("X" + std::to_string(dim_ + k + 1));
      basis_factor_.push_back(static_cast<int>(i));
    }
    dim_ += f.dim;
  }
  name_ = factors_.size() == 1 ? name : "product(" + name + ")";

  c_.assign(static_cast<std::size_t>(dim_) * dim_ * dim_, 0.0);
  for (const auto& f : factors_) {
    if (f.kind != FactorKind::su2) continue;
    for (int l = 0; l < 3; ++l)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const Eigen::Matrix2cd br =
              su2_basis(j) * su2_basis(k) - su2_basis(k) * su2_basis(j);
          const double v = (su2_basis(l).adjoint() * br).trace().real();
          c_[(static_cast<std::size_t>(f.offset + l) * dim_ + f.offset + j) * dim_ + f.offset +
             k] = v;
        }
  }
}

std::vector<double> CompactGroup::bracket(std::span<const double> X,
                                          std::span<const double> Y) const {
  std::vector<double> Z(dim_, 0.0);
  for (int l = 0; l < dim_; ++l)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) Z[l] += structure_constant(l, j, k) * X[j] * Y[k];
  return Z;
}

CompactGroup CompactGroup::with_structure_constants(std::vector<double> c) const {
  if (c.size() != c_.size())
    throw DomainError("structure constant override has " + std::to_string(c.size()) +
                      " entries, expected " + std::to_string(c_.size()));
  CompactGroup G = *this;
  G.c_ = std::move(c);
  return G;
}

void CompactGroup::validate(double tol) const {
  const int d = dim_;
  for (int l = 0; l < d; ++l)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double v = structure_constant(l, j, k);
        require(v == -structure_constant(l, k, j),
                name_ + ": structure constants not antisymmetric at (" + std::to_string(l) +
                    "," + std::to_string(j) + "," + std::to_string(k) + ")");
        require(std::abs(v + structure_constant(j, l, k)) <= tol,
                name_ + ": structure constants not totally antisymmetric (Ad-invariance fails)");
        if (basis_factor_[l] != basis_factor_[j] || basis_factor_[j] != basis_factor_[k])
          require(v == 0.0, name_ + ": structure constants couple different factors");
      }
  // Jacobi: [X_a,[X_b,X_c]] + cyclic = 0.
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int m = 0; m < d; ++m) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) {
            s += structure_constant(m, a, l) * structure_constant(l, b, c);
            s += structure_constant(m, b, l) * structure_constant(l, c, a);
            s += structure_constant(m, c, l) * structure_constant(l, a, b);
          }
          require(std::abs(s) <= tol, name_ + ": Jacobi identity fails");
        }
  // The su2 blocks must match the matrix basis every representation is built from.
  for (const auto& f : factors_) {
    if (f.kind != FactorKind::su2) continue;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const Eigen::Matrix2cd b = su2_basis(j) * su2_basis(k) - su2_basis(k) * su2_basis(j);
        Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
        for (int l = 0; l < 3; ++l) s += structure_constant(f.offset + l, f.offset + j, f.offset + k) * su2_basis(l);
        require((b - s).norm() <= tol, name_ + ": su2 structure constants do not match [X_j, X_k]");
      }
  }
}

CompactGroup make_group(std::string_view descriptor) {
  const std::string s(descriptor);
  if (s == "su2" || s == "SU2" || s == "SU(2)") return CompactGroup::su2();
  if (s.rfind("torus", 0) == 0) {
    if (s == "torus") return CompactGroup::torus(1);
    if (s.size() > 6 && (s[5] == ':' || s[5] == '(')) {
      std::string num = s.substr(6);
      if (!num.empty() && num.back() == ')') num.pop_back();
      std::size_t used = 0;
      int d = 0;
      try {
        d = std::stoi(num, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == num.size() && d >= 1) return CompactGroup::torus(d);
    }
  }
  throw UnsupportedError("unsupported group descriptor '" + s +
                         "' (expected torus:d, su2 or a product)");
}

CompactGroup make_group(const nlohmann::json& spec) {
  if (spec.is_string()) return make_group(std::string_view(spec.get_ref<const std::string&>()));
  if (spec.is_object()) {
    if (spec.contains("group")) return make_group(spec.at("group"));
    if (spec.contains("product")) {
      const auto& list = spec.at("product");
      if (!list.is_array() || list.empty())
        throw UnsupportedError("product descriptor needs a non-empty list");
      std::vector<CompactGroup> parts;
      for (const auto& p : list) parts.push_back(make_group(p));
      return CompactGroup::product(parts);
    }
    if (spec.contains("torus") && spec.at("torus").is_number_integer())
      return CompactGroup::torus(spec.at("torus").get<int>());
  }
  throw UnsupportedError("unsupported group descriptor " + spec.dump());
}

// ---- points ---------------------------------------------------------------

GroupPoint identity(const CompactGroup& G) {
  GroupPoint x;
  x.angles.assign(G.angle_count(), 0.0);
  x.su2.assign(G.su2_count(), Eigen::Matrix2cd::Identity());
  return x;
}

GroupPoint multiply(const CompactGroup& G, const GroupPoint& a, const GroupPoint& b) {
  GroupPoint r;
  r.angles.resize(G.angle_count());
  for (int i = 0; i < G.angle_count(); ++i) r.angles[i] = wrap_angle(a.angles[i] + b.angles[i]);
  r.su2.resize(G.su2_count());
  for (int i = 0; i < G.su2_count(); ++i) r.su2[i] = a.su2[i] * b.su2[i];
  return r;
}

GroupPoint inverse(const CompactGroup& G, const GroupPoint& a) {
  GroupPoint r;
  r.angles.resize(G.angle_count());
  for (int i = 0; i < G.angle_count(); ++i) r.angles[i] = wrap_angle(-a.angles[i]);
  r.su2.resize(G.su2_count());
  for (int i = 0; i < G.su2_count(); ++i) r.su2[i] = a.su2[i].adjoint();
  return r;
}

GroupPoint exp_map(const CompactGroup& G, std::span<const double> Y) {
  if (static_cast<int>(Y.size()) != G.dim()) throw DomainError("exp_map: wrong vector size");
  GroupPoint x = identity(G);
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      for (int k = 0; k < f.dim; ++k) x.angles[f.slot + k] = wrap_angle(Y[f.offset + k]);
    } else {
      x.su2[f.slot] = expm_traceless(su2_algebra_element(Y.subspan(f.offset, 3)));
    }
  }
  return x;
}

double su2_half_angle(const Eigen::Matrix2cd& U) {
  const Eigen::Matrix2cd A = 0.5 * (U - U.adjoint());
  const auto y = su2_coordinates(A);
  const double s = std::sqrt((y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) / 2.0);
  const double c = 0.5 * U.trace().real();
  return std::atan2(s, c);
}

std::vector<double> log_map(const CompactGroup& G, const GroupPoint& x) {
  std::vector<double> Y(G.dim(), 0.0);
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      for (int k = 0; k < f.dim; ++k) Y[f.offset + k] = centered_angle(x.angles[f.slot + k]);
    } else {
      const Eigen::Matrix2cd& U = x.su2[f.slot];
      const auto y = su2_coordinates(0.5 * (U - U.adjoint()));
      const double phi = su2_half_angle(U);
      const double s = std::sin(phi);
      const double scale = s < 1e-300 ? 1.0 : phi / s;
      for (int k = 0; k < 3; ++k) Y[f.offset + k] = y[k] * scale;
    }
  }
  return Y;
}

ComplexGroupPoint complexify(const GroupPoint& x) {
  ComplexGroupPoint g;
  g.angles.assign(x.angles.begin(), x.angles.end());
  g.sl2 = x.su2;
  return g;
}

ComplexGroupPoint multiply(const CompactGroup& G, const ComplexGroupPoint& a,
                           const ComplexGroupPoint& b) {
  ComplexGroupPoint r;
  r.angles.resize(G.angle_count());
  for (int i = 0; i < G.angle_count(); ++i) {
    const Complex z = a.angles[i] + b.angles[i];
    r.angles[i] = Complex(wrap_angle(z.real()), z.imag());
  }
  r.sl2.resize(G.su2_count());
  for (int i = 0; i < G.su2_count(); ++i) r.sl2[i] = a.sl2[i] * b.sl2[i];
  return r;
}

ComplexGroupPoint inverse(const CompactGroup& G, const ComplexGroupPoint& a) {
  ComplexGroupPoint r;
  r.angles.resize(G.angle_count());
  for (int i = 0; i < G.angle_count(); ++i)
    r.angles[i] = Complex(wrap_angle(-a.angles[i].real()), -a.angles[i].imag());
  r.sl2.resize(G.su2_count());
  for (int i = 0; i < G.su2_count(); ++i) {
    const Eigen::Matrix2cd& g = a.sl2[i];
    Eigen::Matrix2cd inv;
    inv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);  // det g = 1
    r.sl2[i] = inv;
  }
  return r;
}

ComplexGroupPoint exp_map_complex(const CompactGroup& G, std::span<const double> X,
                                  std::span<const double> Y) {
  if (static_cast<int>(X.size()) != G.dim() || static_cast<int>(Y.size()) != G.dim())
    throw DomainError("exp_map_complex: wrong vector size");
  ComplexGroupPoint g;
  g.angles.resize(G.angle_count());
  g.sl2.resize(G.su2_count());
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      for (int k = 0; k < f.dim; ++k)
        g.angles[f.slot + k] = Complex(wrap_angle(X[f.offset + k]), Y[f.offset + k]);
    } else {
      const Eigen::Matrix2cd A = su2_algebra_element(X.subspan(f.offset, 3)) +
                                 kI * su2_algebra_element(Y.subspan(f.offset, 3));
      g.sl2[f.slot] = expm_traceless(A);
    }
  }
  return g;
}

ComplexGroupPoint from_polar(const CompactGroup& G, const GroupPoint& x,
                             std::span<const double> Y) {
  std::vector<double> zero(G.dim(), 0.0);
  return multiply(G, complexify(x), exp_map_complex(G, zero, Y));
}

ComplexGroupPoint conjugate_point(const CompactGroup& G, const ComplexGroupPoint& g) {
  ComplexGroupPoint r;
  r.angles.resize(G.angle_count());
  for (int i = 0; i < G.angle_count(); ++i) r.angles[i] = std::conj(g.angles[i]);
  r.sl2.resize(G.su2_count());
  for (int i = 0; i < G.su2_count(); ++i) {
    const Eigen::Matrix2cd h = g.sl2[i].adjoint();
    Eigen::Matrix2cd inv;
    inv << h(1, 1), -h(0, 1), -h(1, 0), h(0, 0);
    r.sl2[i] = inv;
  }
  return r;
}

Polar polar(const CompactGroup& G, const ComplexGroupPoint& g) {
  Polar p;
  p.x = identity(G);
  p.Y.assign(G.dim(), 0.0);
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      for (int k = 0; k < f.dim; ++k) {
        p.x.angles[f.slot + k] = wrap_angle(g.angles[f.slot + k].real());
        p.Y[f.offset + k] = g.angles[f.slot + k].imag();
      }
    } else {
      const Eigen::Matrix2cd& h = g.sl2[f.slot];
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h.adjoint() * h);
      const Eigen::Vector2d lam = es.eigenvalues();
      const Eigen::Matrix2cd V = es.eigenvectors();
      Eigen::Vector2cd half_log, inv_sqrt;
      for (int i = 0; i < 2; ++i) {
        half_log(i) = 0.5 * std::log(lam(i));
        inv_sqrt(i) = 1.0 / std::sqrt(lam(i));
      }
      const Eigen::Matrix2cd H = V * half_log.asDiagonal() * V.adjoint();  // log of (h^*h)^{1/2}
      const Eigen::Matrix2cd Pinv = V * inv_sqrt.asDiagonal() * V.adjoint();
      Eigen::Matrix2cd x = h * Pinv;
      // Re-project onto SU(2) to clean round-off.
      const Complex a = 0.5 * (x(0, 0) + std::conj(x(1, 1)));
      const Complex b = 0.5 * (x(1, 0) - std::conj(x(0, 1)));
      const double n = std::sqrt(std::norm(a) + std::norm(b));
      x << a / n, -std::conj(b) / n, b / n, std::conj(a) / n;
      p.x.su2[f.slot] = x;
      const Eigen::Matrix2cd Ymat = -kI * (H - 0.5 * H.trace() * Eigen::Matrix2cd::Identity());
      const auto y = su2_coordinates(Ymat);
      for (int k = 0; k < 3; ++k) p.Y[f.offset + k] = y[k];
    }
  }
  return p;
}

double distance_from_identity(const CompactGroup& G, const GroupPoint& x) {
  double s = 0.0;
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      for (int k = 0; k < f.dim; ++k) {
        const double a = centered_angle(x.angles[f.slot + k]);
        s += a * a;
      }
    } else {
      const double d = std::sqrt(2.0) * su2_half_angle(x.su2[f.slot]);
      s += d * d;
    }
  }
  return std::sqrt(s);
}

double distance(const CompactGroup& G, const GroupPoint& a, const GroupPoint& b) {
  return distance_from_identity(G, multiply(G, inverse(G, a), b));
}

bool approx_equal(const CompactGroup& G, const GroupPoint& a, const GroupPoint& b,
                  double tol) {
  return distance(G, a, b) <= tol;
}

GroupPoint haar_random(const CompactGroup& G, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  std::normal_distribution<double> normal(0.0, 1.0);
  GroupPoint x = identity(G);
  for (auto& a : x.angles) a = uni(rng);
  for (auto& U : x.su2) {
    double q[4];
    double n = 0.0;
    do {
      n = 0.0;
      for (double& v : q) {
        v = normal(rng);
        n += v * v;
      }
    } while (n < 1e-20);
    n = std::sqrt(n);
    const Complex a(q[0] / n, q[3] / n), b(q[2] / n, q[1] / n);
    U << a, -std::conj(b), b, std::conj(a);
  }
  return x;
}

void check_point(const CompactGroup& G, const GroupPoint& x, double tol) {
  require(static_cast<int>(x.angles.size()) == G.angle_count() &&
              static_cast<int>(x.su2.size()) == G.su2_count(),
          "group point has the wrong shape for " + G.name());
  for (const auto& U : x.su2) {
    require((U.adjoint() * U - Eigen::Matrix2cd::Identity()).norm() <= tol,
            "SU(2) point is not unitary");
    require(std::abs(U.determinant() - 1.0) <= tol, "SU(2) point has det != 1");
  }
}

void check_point(const CompactGroup& G, const ComplexGroupPoint& g, double tol) {
  require(static_cast<int>(g.angles.size()) == G.angle_count() &&
              static_cast<int>(g.sl2.size()) == G.su2_count(),
          "complex group point has the wrong shape for " + G.name());
  for (const auto& h : g.sl2)
    require(std::abs(h.determinant() - 1.0) <= tol * std::max(1.0, h.squaredNorm()),
            "SL(2,C) point has det != 1");
}

}  // namespace heatlab
