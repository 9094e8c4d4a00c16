#include "heatlab/operators.hpp"

#include <algorithm>
#include <cmath>

namespace heatlab {

namespace {

FourierCoefficients bracket_derivative(const FourierCoefficients& u, int j, int k) {
  const CompactGroup& G = u.group();
  FourierCoefficients out(G);
  for (int l = 0; l < G.dim(); ++l) {
    const double c = G.structure_constant(l, j, k);
    if (c != 0.0) out = out + u.derivative_coefficients(l).scaled(c);
  }
  return out;
}

std::vector<double> bracket_vector(const CompactGroup& G, int j, int k) {
  std::vector<double> Z(G.dim());
  for (int l = 0; l < G.dim(); ++l) Z[l] = G.structure_constant(l, j, k);
  return Z;
}

TensorFunctional annihilate_tensor(std::span<const double> Z, const TensorFunctional& xi) {
  if (xi.N < 1) throw DomainError("annihilation needs truncation >= 1");
  const int d = xi.dim();
  TensorFunctional out = TensorFunctional::zero(xi.group, xi.t, xi.N - 1);
  for (int n = 0; n < xi.N; ++n)
    for (Eigen::Index i = 0; i < out.components[n].size(); ++i)
      for (int k = 0; k < d; ++k)
        if (Z[k] != 0.0) out.components[n](i) += Z[k] * xi.components[n + 1](i * d + k);
  return out;
}

std::vector<double> unit(int d, int k) {
  if (k < 0 || k >= d) throw DomainError("basis index out of range");
  std::vector<double> Z(d, 0.0);
  Z[k] = 1.0;
  return Z;
}

double fnorm(const TensorFunctional& a) { return std::sqrt(fock_norm(a).value); }

void finish(CheckReport& r) { r.pass = r.max_residual <= r.tolerance; }

// Position-space inner product by exact quadrature of the truncated kernel.
Complex position_inner(const FourierCoefficients& f, const FourierCoefficients& g, double t,
                       double* tail) {
  const CompactGroup& G = f.group();
  const HeatKernel h(G, t);
  const QuadratureRule rule =
      haar_quadrature(G, exactness_for_degree(f.max_degree() + g.max_degree() + h.max_degree()));
  Complex s = 0.0;
  double nf = 0.0, ng = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Complex a = f(rule.nodes[i]), b = g(rule.nodes[i]);
    s += rule.weights[i] * std::conj(a) * b * h.evaluate(rule.nodes[i]).value.real();
    nf += rule.weights[i] * std::norm(a);
    ng += rule.weights[i] * std::norm(b);
  }
  if (tail) *tail = h.tail_bound() * std::sqrt(nf * ng);
  return s;
}

}  // namespace

namespace {

// One circle coordinate or one SU(2) factor of the truncated heat series,
// with its value and left-invariant derivatives at a point.
struct AtomJet {
  int basis = 0, width = 1;
  double v = 0.0;
  double g[3] = {0, 0, 0};
  double h[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
};

AtomJet circle_jet(double t, int N, double theta) {
  AtomJet a;
  for (int n = -N; n <= N; ++n) {
    const double e = std::exp(-t * n * n / 2.0);
    a.v += e * std::cos(n * theta);
    a.g[0] -= e * n * std::sin(n * theta);
    a.h[0][0] -= e * n * n * std::cos(n * theta);
  }
  return a;
}

// Characters are Chebyshev polynomials U_{2j} in a = tr(x)/2, so the factor
// is F(a) and its derivatives follow from those of a.
AtomJet su2_jet(double t, int J2, const Eigen::Matrix2cd& x) {
  const double a = x.trace().real() / 2.0;
  double u0 = 0.0, u1 = 1.0, d0 = 0.0, d1 = 0.0, s0 = 0.0, s1 = 0.0;
  double F = 0.0, F1 = 0.0, F2 = 0.0;
  for (int tj = 0; tj <= J2; ++tj) {
    const double w = (tj + 1.0) * std::exp(-t * su2_casimir(tj) / 2.0);
    F += w * u1;
    F1 += w * d1;
    F2 += w * s1;
    const double u2 = 2.0 * a * u1 - u0, d2 = 2.0 * u1 + 2.0 * a * d1 - d0,
                 s2 = 4.0 * d1 + 2.0 * a * s1 - s0;
    u0 = u1, u1 = u2, d0 = d1, d1 = d2, s0 = s1, s1 = s2;
  }
  AtomJet j;
  j.width = 3;
  j.v = F;
  double da[3];
  for (int k = 0; k < 3; ++k) da[k] = (x * su2_basis(k)).trace().real() / 2.0;
  for (int k = 0; k < 3; ++k) {
    j.g[k] = F1 * da[k];
    for (int l = 0; l < 3; ++l)
      j.h[k][l] = F2 * da[k] * da[l] + F1 * (x * su2_basis(k) * su2_basis(l)).trace().real() / 2.0;
  }
  return j;
}

// Below this t the series above loses all relative accuracy far from the
// identity (rho_t ~ e^{-pi^2/t}); the Poisson-summed forms are used instead.
constexpr double kPoissonBelow = 2.0;

// Value and first two derivatives in one real variable.
struct Jet {
  double v = 0.0, d = 0.0, dd = 0.0;
};
Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
Jet operator*(double c, Jet a) { return {c * a.v, c * a.d, c * a.dd}; }
Jet operator*(Jet a, Jet b) { return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd}; }

// exp(-u^2/t) with u' = 1.
Jet gauss(double u, double t) {
  const double e = std::exp(-u * u / t);
  return {e, -2.0 * u / t * e, (4.0 * u * u / (t * t) - 2.0 / t) * e};
}

// Jet of sum_n c_n x^{2n}.
Jet even_series(const double* c, int terms, double x) {
  Jet r;
  double p = 1.0;  // x^{2n-2}
  for (int n = 0; n < terms; ++n) {
    r.v += c[n] * p * (n == 0 ? 1.0 : x * x);
    if (n >= 1) {
      r.d += c[n] * 2 * n * p * x;
      r.dd += c[n] * 2 * n * (2 * n - 1) * p;
      p *= x * x;
    }
  }
  return r;
}

// x / sin x, by its even series near 0.
Jet x_over_sin(double x) {
  if (std::abs(x) < 0.1) {
    static const double c[] = {1.0, 1.0 / 6, 7.0 / 360, 31.0 / 15120, 127.0 / 604800, 73.0 / 3421440};
    return even_series(c, 6, x);
  }
  const double sn = std::sin(x), cs = std::cos(x), csc = 1.0 / sn, cot = cs / sn;
  return {x * csc, csc - x * csc * cot, -2.0 * csc * cot + x * csc * (cot * cot + csc * csc)};
}

// sinh x / x and cosh x for |x| < 0.5.
Jet sinhc(double x) {
  static const double c[] = {1.0, 1.0 / 6, 1.0 / 120, 1.0 / 5040, 1.0 / 362880, 1.0 / 39916800,
                             1.0 / 6227020800.0, 1.0 / 1307674368000.0, 1.0 / 355687428096000.0};
  return even_series(c, 9, x);
}
Jet cosh_series(double x) {
  static const double c[] = {1.0, 1.0 / 2, 1.0 / 24, 1.0 / 720, 1.0 / 40320, 1.0 / 3628800,
                             1.0 / 479001600.0, 1.0 / 87178291200.0, 1.0 / 20922789888000.0};
  return even_series(c, 9, x);
}

// Circle: rho_t(theta) = sqrt(2 pi / t) sum_k exp(-(theta + 2 pi k)^2 / 2t).
AtomJet circle_jet_poisson(double t, double theta) {
  const double th = wrap_angle(theta);
  const int K = 2 + static_cast<int>(std::sqrt(1600.0 * t) / (2.0 * kPi));
  Jet r;
  for (int k = -K; k <= K; ++k) r = r + gauss(th + 2.0 * kPi * k, 2.0 * t);
  r = std::sqrt(2.0 * kPi / t) * r;
  AtomJet a;
  a.v = r.v;
  a.g[0] = r.d;
  a.h[0][0] = r.dd;
  return a;
}

// SU(2), x with eigenvalues e^{+-i theta}: the Poisson form
//   rho_t = e^{t/4} sqrt(4 pi/t) / t * sum_k (u_k / sin theta) e^{-u_k^2/t},  u_k = theta + 2 pi k,
// with the terms paired so nothing cancels near theta = 0 or pi.
AtomJet su2_jet_poisson(double t, const Eigen::Matrix2cd& x) {
  const double a = x.trace().real() / 2.0;
  const double s = std::sqrt(std::norm(x(0, 1)) + std::pow(x(0, 0).imag(), 2));  // sin theta
  // psi = theta - m with m = 0 or pi; pairs (k, -k) about 0 or (k, -1-k) about pi.
  // theta - pi is taken as -atan2(s, -a), not from theta, to keep its relative accuracy.
  const bool far = a < 0.0;
  const double psi = far ? -std::atan2(s, -a) : std::atan2(s, a);
  const Jet S = x_over_sin(psi);
  Jet sum = far ? Jet{} : gauss(psi, t);
  for (int k = far ? 0 : 1;; ++k) {
    const double c = far ? kPi * (2 * k + 1) : 2.0 * kPi * k;
    // stop once a pair is below e^{-800} relative to the leading term
    if (k > 1 && ((c - kPi / 2) * (c - kPi / 2) - psi * psi) / t > 800.0) break;
    const Jet gm = gauss(psi - c, t), gp = gauss(psi + c, t);
    const double xx = 2.0 * c * psi / t, xd = 2.0 * c / t, kappa = 2.0 * c * c / t;
    // gm + gp = 2 A cosh x and D = A sinh(x)/x with A = e^{-(psi^2+c^2)/t}; near
    // psi = 0 both go through even series so their odd derivatives come out exact.
    Jet sum2, D;
    if (std::abs(xx) >= 0.5) {
      const Jet q{1.0 / (2.0 * xx), -xd / (2.0 * xx * xx), xd * xd / (xx * xx * xx)};
      sum2 = gm + gp;
      D = (gm - gp) * q;
    } else {
      const double A = std::exp(-(psi * psi + c * c) / t);
      const Jet Aj{A, -2.0 * psi / t * A, (4.0 * psi * psi / (t * t) - 2.0 / t) * A};
      const Jet sc = sinhc(xx), ch = cosh_series(xx);
      D = Aj * Jet{sc.v, sc.d * xd, sc.dd * xd * xd};
      sum2 = 2.0 * (Aj * Jet{ch.v, ch.d * xd, ch.dd * xd * xd});
    }
    sum = sum + sum2 - (2.0 * kappa) * D;
  }
  const double C = (far ? -1.0 : 1.0) * std::exp(t / 4.0) * std::sqrt(4.0 * kPi / t) / t;
  const Jet r = C * (S * sum);  // in theta
  AtomJet j;
  j.width = 3;
  j.v = r.v;
  // d/da = -(1/sin theta) d/dtheta; grad a vanishes like sin theta at +-I.
  double F1;
  if (s > 1e-12) {
    F1 = -r.d / s;
  } else {
    F1 = far ? r.dd : -r.dd;
  }
  double da[3];
  for (int k = 0; k < 3; ++k) da[k] = (x * su2_basis(k)).trace().real() / 2.0;
  for (int k = 0; k < 3; ++k) {
    j.g[k] = F1 * da[k];
    for (int l = 0; l < 3; ++l) {
      // F2 da_k da_l = (rho'' + cos theta F1) (da_k / sin)(da_l / sin)
      const double outer = s > 1e-12 ? (r.dd + a * F1) * (da[k] / s) * (da[l] / s) : 0.0;
      j.h[k][l] = outer + F1 * (x * su2_basis(k) * su2_basis(l)).trace().real() / 2.0;
    }
  }
  return j;
}

}  // namespace

PositionRealization::PositionRealization(CompactGroup G, double t, double max_degree,
                                         int extra_exactness)
    : group_(std::move(G)), t_(t) {
  const HeatKernel h(group_, t);
  rule_ = std::make_shared<const QuadratureRule>(haar_quadrature(
      group_, exactness_for_degree(2.0 * max_degree + h.max_degree()) + extra_exactness));
  cache_ = std::make_shared<const NodeCache>(*rule_, irreps_with_degree(group_, max_degree));
  // Per-atom cutoffs, read off the labels of the truncated series.
  std::vector<int> cut;
  const FourierCoefficients H = h.fourier();
  for (const auto& c : H.components()) {
    const IrrepLabel& l = c.irrep.label();
    if (cut.empty()) cut.assign(l.size(), 0);
    for (std::size_t i = 0; i < l.size(); ++i) cut[i] = std::max(cut[i], std::abs(l[i]));
  }
  const int d = group_.dim();
  const std::size_t n = rule_->size();
  rho_.assign(n, 0.0);
  drho_.assign(d, std::vector<double>(n, 0.0));
  ddrho_.assign(d * d, std::vector<double>(n, 0.0));
  const bool poisson = t < kPoissonBelow;
  std::vector<AtomJet> jets;
  for (std::size_t i = 0; i < n; ++i) {
    const GroupPoint& x = rule_->nodes[i];
    jets.clear();
    std::size_t atom = 0;
    for (const auto& f : group_.factors()) {
      if (f.kind == FactorKind::torus) {
        for (int k = 0; k < f.dim; ++k, ++atom) {
          jets.push_back(poisson ? circle_jet_poisson(t, x.angles[f.slot + k])
                                 : circle_jet(t, cut[atom], x.angles[f.slot + k]));
          jets.back().basis = f.offset + k;
        }
      } else {
        jets.push_back(poisson ? su2_jet_poisson(t, x.su2[f.slot]) : su2_jet(t, cut[atom++], x.su2[f.slot]));
        if (poisson) ++atom;
        jets.back().basis = f.offset;
      }
    }
    // Product rule over atoms, without dividing by factor values.
    auto others = [&](std::size_t a, std::size_t b) {
      double p = 1.0;
      for (std::size_t c = 0; c < jets.size(); ++c)
        if (c != a && c != b) p *= jets[c].v;
      return p;
    };
    rho_[i] = others(jets.size(), jets.size());
    for (std::size_t a = 0; a < jets.size(); ++a) {
      const AtomJet& A = jets[a];
      const double pa = others(a, a);
      for (int k = 0; k < A.width; ++k) {
        drho_[A.basis + k][i] = A.g[k] * pa;
        for (int l = 0; l < A.width; ++l) ddrho_[(A.basis + k) * d + A.basis + l][i] = A.h[k][l] * pa;
      }
      for (std::size_t b = 0; b < jets.size(); ++b) {
        if (b == a) continue;
        const AtomJet& B = jets[b];
        const double pab = others(a, b);
        for (int k = 0; k < A.width; ++k)
          for (int l = 0; l < B.width; ++l)
            ddrho_[(A.basis + k) * d + B.basis + l][i] = A.g[k] * B.g[l] * pab;
      }
    }
    const HeatKernel::Value ref = h.evaluate(x);
    if (std::abs(rho_[i] - ref.value.real()) > 1e-10 * std::abs(ref.value.real()) + ref.tail)
      throw ConsistencyError("heat kernel jet disagrees with the heat module at a node");
    // The Poisson forms are accurate to rounding relative to rho itself.
    if (!(rho_[i] > (poisson ? 0.0 : ref.tail)) || !std::isfinite(rho_[i]))
      throw TruncationError("rho_t not certified positive at a quadrature node; increase t");
  }
}

FourierCoefficients PositionRealization::annihilate(int k, const FourierCoefficients& u) const {
  if (k < 0 || k >= group_.dim()) throw DomainError("basis index out of range");
  return u.derivative_coefficients(k);
}

std::vector<Complex> PositionRealization::values(const FourierCoefficients& u) const {
  bool cached = true;
  for (const auto& c : u.components()) cached = cached && cache_->index_of(c.irrep.label()) >= 0;
  if (cached) return cache_->evaluate(u);
  std::vector<Complex> out(rule_->size());
  for (std::size_t i = 0; i < rule_->size(); ++i) out[i] = u(rule_->nodes[i]);
  return out;
}

std::vector<Complex> PositionRealization::create(int k, const FourierCoefficients& u) const {
  const auto uv = values(u);
  const auto xu = values(annihilate(k, u));
  std::vector<Complex> out(rule_->size());
  for (std::size_t i = 0; i < rule_->size(); ++i) out[i] = -xu[i] - drho_[k][i] / rho_[i] * uv[i];
  return out;
}

std::vector<double> PositionRealization::minus_log_hessian(int j, int k) const {
  const int d = group_.dim();
  std::vector<double> out(rule_->size());
  for (std::size_t i = 0; i < rule_->size(); ++i) {
    const double r = rho_[i];
    out[i] = -(ddrho_[j * d + k][i] / r - drho_[j][i] * drho_[k][i] / (r * r));
  }
  return out;
}

Complex PositionRealization::inner(std::span<const Complex> u, std::span<const Complex> v) const {
  Complex s = 0.0;
  for (std::size_t i = 0; i < rule_->size(); ++i) s += rule_->weights[i] * rho_[i] * std::conj(u[i]) * v[i];
  return s;
}

Complex PositionRealization::inner(const FourierCoefficients& u, const FourierCoefficients& v) const {
  const auto a = values(u), b = values(v);
  return inner(a, b);
}

BargmannTorusRealization::BargmannTorusRealization(CompactGroup G, double t)
    : group_(std::move(G)), t_(t) {
  if (!group_.is_abelian())
    throw UnsupportedError("Bargmann-side creators are implemented on tori only; use the Fock realization");
  if (!(t > 0.0)) throw DomainError("realization needs t > 0");
}

FourierCoefficients BargmannTorusRealization::annihilate(int k, const FourierCoefficients& F) const {
  if (k < 0 || k >= group_.dim()) throw DomainError("basis index out of range");
  return F.derivative_coefficients(k);
}

Complex BargmannTorusRealization::inner(const FourierCoefficients& F, const FourierCoefficients& G) const {
  return torus_holomorphic_inner(F, G, t_);
}

Complex BargmannTorusRealization::create_pairing(int k, const FourierCoefficients& G,
                                                 const FourierCoefficients& F) const {
  return torus_holomorphic_inner(G, F, t_, true, k);
}

FockRealization::FockRealization(CompactGroup G, double t, int N)
    : group_(std::move(G)), t_(t), N_(N) {
  if (N < 1) throw DomainError("Fock realization needs N >= 1");
  for (int n = 0; n <= N; ++n) spaces_.emplace_back(group_, t, n);
}

TensorFunctional FockRealization::annihilate(int k, const TensorFunctional& xi) const {
  return annihilate_tensor(unit(group_.dim(), k), xi);
}

TensorFunctional FockRealization::annihilate(std::span<const double> Z,
                                             const TensorFunctional& xi) const {
  return annihilate_tensor(Z, xi);
}

TensorFunctional FockRealization::create(int k, const TensorFunctional& eta, int target) const {
  return create(unit(group_.dim(), k), eta, target);
}

TensorFunctional FockRealization::create(std::span<const double> Z, const TensorFunctional& eta,
                                         int target) const {
  if (target < 1 || target > N_)
    throw DomainError("creation target degree " + std::to_string(target) + " outside 1.." +
                      std::to_string(N_));
  const int d = group_.dim();
  TensorFunctional raw = TensorFunctional::zero(group_, t_, target);
  for (int m = 1; m <= std::min(target, eta.N + 1); ++m)
    for (Eigen::Index i = 0; i < eta.components[m - 1].size(); ++i)
      for (int k = 0; k < d; ++k)
        if (Z[k] != 0.0) raw.components[m](i * d + k) += (m / t_) * Z[k] * eta.components[m - 1](i);
  return spaces_[target].project(raw);
}

TensorFunctional FockRealization::random_state(int n, std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const CMatrix& B = spaces_.at(n).basis();
  CVector c(B.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(normal(rng), normal(rng));
  return spaces_[n].unflatten(B * c);
}

CheckReport adjointness_check(const FockRealization& r, std::span<const TensorFunctional> states,
                              double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  const int N = r.N();
  for (std::size_t s = 0; s < states.size(); ++s) {
    const TensorFunctional& u = states[s];
    const TensorFunctional v = states[(s + 1) % states.size()].truncated(N - 1);
    for (int k = 0; k < r.group().dim(); ++k) {
      const TensorFunctional au = r.annihilate(k, u);
      const Complex lhs = fock_inner(au, v);
      const Complex rhs = fock_inner(u, r.create(k, v, N));
      const double scale = std::max(fnorm(au) * fnorm(v), 1e-300);
      rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs) / scale);
      ++rep.cases;
    }
  }
  finish(rep);
  return rep;
}

CheckReport adjointness_check(const PositionRealization& r,
                              std::span<const FourierCoefficients> states, double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& u = states[s];
    const auto& v = states[(s + 1) % states.size()];
    const auto uv = r.values(u), vv = r.values(v);
    for (int k = 0; k < r.group().dim(); ++k) {
      const auto au = r.values(r.annihilate(k, u));
      const Complex lhs = r.inner(au, vv);
      const Complex rhs = r.inner(uv, r.create(k, v));
      const double scale = std::max(std::sqrt(r.inner(au, au).real() * r.inner(vv, vv).real()), 1e-300);
      rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs) / scale);
      ++rep.cases;
    }
  }
  finish(rep);
  return rep;
}

CheckReport adjointness_check(const BargmannTorusRealization& r,
                              std::span<const FourierCoefficients> states, double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& G = states[s];
    const auto& F = states[(s + 1) % states.size()];
    for (int k = 0; k < r.group().dim(); ++k) {
      const auto aG = r.annihilate(k, G);
      const Complex lhs = r.inner(aG, F);
      const Complex rhs = r.create_pairing(k, G, F);
      const double scale = std::max(std::sqrt(r.inner(aG, aG).real() * r.inner(F, F).real()), 1e-300);
      rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs) / scale);
      ++rep.cases;
    }
  }
  finish(rep);
  return rep;
}

CheckReport commutator_check(const FockRealization& r, int j, int k,
                             std::span<const TensorFunctional> states, double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  const int N = r.N();
  if (N < 2) throw DomainError("commutator check needs N >= 2");
  const auto Z = bracket_vector(r.group(), j, k);
  for (const auto& u : states) {
    const TensorFunctional ajk = r.annihilate(j, r.annihilate(k, u));
    const TensorFunctional w =
        ajk - r.annihilate(k, r.annihilate(j, u)) - r.annihilate(Z, u).truncated(N - 2);
    rep.max_residual =
        std::max(rep.max_residual, fnorm(w) / std::max({fnorm(ajk), fnorm(u), 1e-300}));
    ++rep.cases;

    const TensorFunctional eta = u.truncated(N - 2);
    const TensorFunctional cjk = r.create(j, r.create(k, eta, N - 1), N);
    const TensorFunctional w2 = cjk - r.create(k, r.create(j, eta, N - 1), N) + r.create(Z, eta, N);
    rep.max_residual =
        std::max(rep.max_residual, fnorm(w2) / std::max({fnorm(cjk), fnorm(eta), 1e-300}));
    ++rep.cases;
  }
  finish(rep);
  return rep;
}

CheckReport commutator_check(const PositionRealization& r, int j, int k,
                             std::span<const FourierCoefficients> states, double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  for (const auto& u : states) {
    const auto ajk = r.annihilate(j, r.annihilate(k, u));
    const auto w = ajk - r.annihilate(k, r.annihilate(j, u)) - bracket_derivative(u, j, k);
    const double scale = std::max({std::sqrt(r.inner(ajk, ajk).real()), std::sqrt(r.inner(u, u).real()), 1e-300});
    rep.max_residual = std::max(rep.max_residual, std::sqrt(std::abs(r.inner(w, w))) / scale);
    ++rep.cases;
  }
  finish(rep);
  return rep;
}

CheckReport ccr_check_abelian(const FockRealization& r, int j, int k,
                              std::span<const TensorFunctional> states, double tol) {
  if (!r.group().is_abelian())
    throw UnsupportedError("canonical commutation relations hold on abelian groups only; " +
                           r.group().name() + " is not abelian");
  CheckReport rep;
  rep.tolerance = tol;
  const int N = r.N();
  const double expected = (j == k ? 1.0 : 0.0) / r.t();
  for (const auto& u : states) {
    const TensorFunctional low = u.truncated(N - 1);
    const TensorFunctional lhs =
        r.annihilate(j, r.create(k, low, N)) - r.create(k, r.annihilate(j, u), N).truncated(N - 1);
    const TensorFunctional w = lhs - low.scaled(expected);
    rep.max_residual = std::max(rep.max_residual, fnorm(w) / std::max(fnorm(low) / r.t(), 1e-300));
    ++rep.cases;
  }
  finish(rep);
  return rep;
}

CheckReport ccr_check_abelian(const PositionRealization& r, int, int,
                              std::span<const FourierCoefficients>, double) {
  throw UnsupportedError(
      "position-space CCR on " + r.group().name() +
      ": -X_j X_k log rho_t is a non-constant theta-function quotient on a torus; the constant "
      "commutator is a statement about R^d (euclid reference) and the Fock realization");
}

CheckReport substitute_identity_check(const PositionRealization& r, int j, int k,
                                      std::span<const FourierCoefficients> states, double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  const auto hess = r.minus_log_hessian(j, k);
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& u = states[s];
    const auto& v = states[(s + 1) % states.size()];
    const Complex lhs = r.inner(r.create(j, v), r.create(k, u)) -
                        r.inner(r.annihilate(k, v), r.annihilate(j, u));
    const auto uv = r.values(u);
    std::vector<Complex> hu(uv.size());
    for (std::size_t i = 0; i < uv.size(); ++i) hu[i] = hess[i] * uv[i];
    const auto vv = r.values(v);
    const Complex rhs = -r.inner(v, bracket_derivative(u, j, k)) + r.inner(vv, hu);
    const double scale = std::max(std::abs(rhs), std::sqrt(r.inner(uv, uv).real() * r.inner(vv, vv).real()));
    rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs) / std::max(scale, 1e-300));
    ++rep.cases;
  }
  finish(rep);
  return rep;
}

namespace {

// sum_{n<=N} (t^n/n!) sum_k <u, a*_{k_1}..a*_{k_n} psi_0><psi_0, a_{k_n}..a_{k_1} v>
Complex resolution_sum(const FockRealization& r, const TensorFunctional& u, const TensorFunctional& v) {
  const int N = r.N();
  const int d = r.group().dim();
  Complex total = 0.0;
  for (int n = 0; n <= N; ++n) {
    const double w = std::exp(n * std::log(r.t()) - std::lgamma(n + 1.0));
    std::vector<int> ks(n, 0);
    Eigen::Index count = 1;
    for (int i = 0; i < n; ++i) count *= d;
    for (Eigen::Index c = 0; c < count; ++c) {
      Eigen::Index rem = c;
      for (int p = n - 1; p >= 0; --p) ks[p] = static_cast<int>(rem % d), rem /= d;
      // a*_{k_1} ... a*_{k_n} psi_0, innermost first, landing in degree N.
      TensorFunctional chain = r.vacuum(N - n);
      for (int p = n - 1; p >= 0; --p) chain = r.create(ks[p], chain, N - p);
      TensorFunctional down = v;
      for (int p = 0; p < n; ++p) down = r.annihilate(ks[p], down);
      total += w * fock_inner(u, chain) * down.components[0](0);
    }
  }
  return total;
}

}  // namespace

CheckReport resolution_of_identity_check(
    const FockRealization& r, std::span<const std::pair<TensorFunctional, TensorFunctional>> pairs,
    double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  for (const auto& [u, v] : pairs) {
    const Complex lhs = fock_inner(u, v);
    const Complex rhs = resolution_sum(r, u, v);
    const double scale = std::max(std::abs(lhs), std::max(fnorm(u) * fnorm(v), 1e-300));
    rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs) / scale);
    ++rep.cases;
  }
  finish(rep);
  return rep;
}

CheckReport resolution_of_identity_check(
    const FockRealization& r,
    std::span<const std::pair<FourierCoefficients, FourierCoefficients>> pairs, double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  rep.pass = true;
  const double t = r.t();
  const int N = r.N();
  for (const auto& [f, g] : pairs) {
    double heat_tail = 0.0;
    const Complex lhs = position_inner(f, g, t, &heat_tail);
    const HermiteCoefficients hf = taylor_map(f, t, N), hg = taylor_map(g, t, N);
    const Complex rhs = resolution_sum(r, hf.xi, hg.xi);
    const double tail =
        std::sqrt(hermite_tail(hf.heated, t, N) * hermite_tail(hg.heated, t, N)) + heat_tail;
    const double scale =
        std::max(std::abs(lhs), std::sqrt(norm_in_position(f, t).value * norm_in_position(g, t).value));
    // The truncated sum is exact against the truncated Fock product; the
    // position product differs from both by the Fock tail.
    const Complex truncated = fock_inner(hf.xi, hg.xi);
    rep.max_residual = std::max(rep.max_residual, std::abs(rhs - truncated) / scale);
    rep.tail = std::max(rep.tail, tail / scale);
    if (std::abs(lhs - rhs) > tol * scale + tail) rep.pass = false;
    ++rep.cases;
  }
  if (rep.max_residual > tol) rep.pass = false;
  return rep;
}

CheckReport intertwiner_check(double t, int N, std::span<const FourierCoefficients> states,
                              double tol) {
  CheckReport rep;
  rep.tolerance = tol;
  if (N < 1) throw DomainError("intertwiner check needs N >= 1");
  for (const auto& f : states) {
    const CompactGroup& G = f.group();
    const TensorFunctional xi = taylor_map(f, t, N).xi;
    for (int k = 0; k < G.dim(); ++k) {
      const TensorFunctional lhs = taylor_map(f.derivative_coefficients(k), t, N - 1).xi;
      const TensorFunctional rhs = annihilate_tensor(unit(G.dim(), k), xi);
      double scale = 1.0, diff = 0.0;
      for (int n = 0; n < N; ++n) {
        scale = std::max(scale, lhs.components[n].cwiseAbs().maxCoeff());
        diff = std::max(diff, (lhs.components[n] - rhs.components[n]).cwiseAbs().maxCoeff());
      }
      rep.max_residual = std::max(rep.max_residual, diff / scale);
      ++rep.cases;
    }
    // The vacuum goes to the vacuum.
    const TensorFunctional one = taylor_map(FourierCoefficients::constant(G, 1.0), t, N).xi;
    const TensorFunctional vac = TensorFunctional::vacuum(G, t, N);
    double diff = 0.0;
    for (int n = 0; n <= N; ++n)
      diff = std::max(diff, (one.components[n] - vac.components[n]).cwiseAbs().maxCoeff());
    rep.max_residual = std::max(rep.max_residual, diff);
    ++rep.cases;
  }
  finish(rep);
  return rep;
}

Eigen::Index vacuum_kernel_dimension(const FockRealization& r) {
  const int N = r.N();
  const int d = r.group().dim();
  const FockSpace& top = r.space(N);
  const FockSpace& low = r.space(N - 1);
  const CMatrix& B = top.basis();
  CMatrix M(d * low.size(), B.cols());
  RVector scale(low.size());
  for (int n = 0; n < N; ++n) {
    const Eigen::Index end = n + 1 < N ? low.offset(n + 1) : low.size();
    scale.segment(low.offset(n), end - low.offset(n)).setConstant(std::sqrt(low.weight(n)));
  }
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    const TensorFunctional xi = top.unflatten(B.col(c));
    for (int k = 0; k < d; ++k)
      M.block(k * low.size(), c, low.size(), 1) = scale.asDiagonal() * low.flatten(r.annihilate(k, xi));
  }
  Eigen::FullPivLU<CMatrix> lu(M);
  lu.setThreshold(1e-10);
  return B.cols() - lu.rank();
}

}  // namespace heatlab
