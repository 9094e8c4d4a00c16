#include "heatlab/euclid.hpp"

#include <algorithm>
#include <cmath>

#include "heatlab/gauss.hpp"

namespace heatlab {

namespace {

double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

// Exact for small n, where the float factorial is an integer.
double int_factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_positive_t(double t) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
}

double max_coeff(const Polynomial& p) {
  double m = 0.0;
  for (const auto& [n, c] : p.terms()) m = std::max(m, std::abs(c));
  return m;
}

void finish(EuclidCheck& c, double scale, double tol) {
  c.rel_err = std::abs(c.lhs - c.rhs) / std::max(scale, 1e-300);
  c.pass = c.rel_err <= tol;
}

}  // namespace

Polynomial Polynomial::constant(int d, Complex c) {
  Polynomial p(d);
  p.add(MultiIndex(d, 0), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& n, Complex c) {
  Polynomial p(static_cast<int>(n.size()));
  for (int e : n)
    if (e < 0) throw DomainError("negative exponent");
  p.add(n, c);
  return p;
}

Polynomial Polynomial::variable(int d, int k) {
  if (k < 0 || k >= d) throw DomainError("variable index out of range");
  MultiIndex n(d, 0);
  n[k] = 1;
  return monomial(n);
}

Complex Polynomial::coefficient(const MultiIndex& n) const {
  const auto it = terms_.find(n);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void Polynomial::add(const MultiIndex& n, Complex c) {
  if (static_cast<int>(n.size()) != d_) throw DomainError("multi-index has the wrong length");
  if (c == Complex(0.0)) return;
  Complex& slot = terms_[n];
  slot += c;
  if (slot == Complex(0.0)) terms_.erase(n);
}

int Polynomial::degree() const {
  int deg = -1;
  for (const auto& [n, c] : terms_) {
    int s = 0;
    for (int e : n) s += e;
    deg = std::max(deg, s);
  }
  return deg;
}

void Polynomial::require_same(const Polynomial& o) const {
  if (d_ != o.d_) throw DomainError("polynomials in different numbers of variables");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  require_same(o);
  Polynomial r = *this;
  for (const auto& [n, c] : o.terms_) r.add(n, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  require_same(o);
  Polynomial r(d_);
  MultiIndex m(d_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      for (int k = 0; k < d_; ++k) m[k] = a[k] + b[k];
      r.add(m, ca * cb);
    }
  return r;
}

Polynomial Polynomial::scaled(Complex c) const {
  Polynomial r(d_);
  for (const auto& [n, v] : terms_) r.add(n, c * v);
  return r;
}

Polynomial Polynomial::derivative(int k) const {
  if (k < 0 || k >= d_) throw DomainError("variable index out of range");
  Polynomial r(d_);
  for (const auto& [n, c] : terms_) {
    if (n[k] == 0) continue;
    MultiIndex m = n;
    --m[k];
    r.add(m, c * static_cast<double>(n[k]));
  }
  return r;
}

Polynomial Polynomial::laplacian() const {
  Polynomial r(d_);
  for (int k = 0; k < d_; ++k) r = r + derivative(k).derivative(k);
  return r;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial r(d_);
  for (const auto& [n, c] : terms_)
    if (std::abs(c) > tol) r.add(n, c);
  return r;
}

Complex Polynomial::operator()(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != d_) throw DomainError("point has the wrong dimension");
  Complex s = 0.0;
  for (const auto& [n, c] : terms_) {
    Complex m = c;
    for (int k = 0; k < d_; ++k)
      for (int e = 0; e < n[k]; ++e) m *= z[k];
    s += m;
  }
  return s;
}

Complex Polynomial::operator()(std::span<const double> x) const {
  std::vector<Complex> z(x.begin(), x.end());
  return (*this)(z);
}

Polynomial heat_euclid(const Polynomial& f, double s) {
  Polynomial out = f;
  Polynomial term = f;
  for (int k = 1; term.degree() >= 0; ++k) {
    term = term.laplacian().scaled(s / (2.0 * k));
    out = out + term;
  }
  return out;
}

Polynomial bt_euclid_polynomial(const Polynomial& f, double t) {
  require_positive_t(t);
  return heat_euclid(f, t);
}

Complex bt_euclid(const Polynomial& f, double t, std::span<const Complex> z) {
  return bt_euclid_polynomial(f, t)(z);
}

Polynomial hermite_euclid(const MultiIndex& n, double t) {
  require_positive_t(t);
  return heat_euclid(Polynomial::monomial(n), -t);
}

double gaussian_moment(int n, double t) {
  if (n < 0) throw DomainError("negative moment order");
  if (n % 2 == 1) return 0.0;
  double m = 1.0;
  for (int k = n - 1; k > 0; k -= 2) m *= k * t;
  return m;
}

Complex gaussian_inner(const Polynomial& f, const Polynomial& g, double t) {
  require_positive_t(t);
  if (f.dim() != g.dim()) throw DomainError("polynomials in different numbers of variables");
  Complex s = 0.0;
  for (const auto& [a, ca] : f.terms())
    for (const auto& [b, cb] : g.terms()) {
      double m = 1.0;
      for (int k = 0; k < f.dim() && m != 0.0; ++k) m *= gaussian_moment(a[k] + b[k], t);
      s += std::conj(ca) * cb * m;
    }
  return s;
}

Complex gaussian_inner_quadrature(const Polynomial& f, const Polynomial& g, double t) {
  require_positive_t(t);
  const int d = f.dim();
  const int n = std::max(1, (std::max(f.degree(), 0) + std::max(g.degree(), 0)) / 2 + 1);
  const GaussRule r = gauss_hermite(n);
  const double sq = std::sqrt(2.0 * t);
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  Complex s = 0.0;
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      x[k] = sq * r.nodes[idx[k]];
      w *= r.weights[idx[k]] / std::sqrt(kPi);
    }
    s += w * std::conj(f(x)) * g(x);
    int k = 0;
    while (k < d && ++idx[k] == n) idx[k++] = 0;
    if (k == d) break;
  }
  return s;
}

double monomial_norm(const MultiIndex& n, double t) {
  require_positive_t(t);
  double v = 1.0;
  for (int e : n) v *= int_factorial(e) * std::pow(t, e);
  return v;
}

EuclidCheck monomial_norm_check(const MultiIndex& n, double t, double tol) {
  EuclidCheck c;
  c.lhs = monomial_norm(n, t);
  // z = x + iy with x, y ~ N(0, t/2) per coordinate: E (x^2 + y^2)^{n_k}.
  double q = 1.0;
  for (int e : n) {
    const GaussRule r = gauss_hermite(e + 1);
    const double sq = std::sqrt(t);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
      for (std::size_t j = 0; j < r.nodes.size(); ++j) {
        const double x = sq * r.nodes[i], y = sq * r.nodes[j];
        s += r.weights[i] * r.weights[j] / kPi * std::pow(x * x + y * y, e);
      }
    q *= s;
  }
  c.rhs = q;
  finish(c, c.lhs, tol);
  return c;
}

EuclidCheck hermite_orthogonality_check(const MultiIndex& m, const MultiIndex& n, double t,
                                        double tol) {
  const Polynomial Hm = hermite_euclid(m, t), Hn = hermite_euclid(n, t);
  EuclidCheck c;
  c.lhs = gaussian_inner(Hm, Hn, t).real();
  c.rhs = m == n ? monomial_norm(n, t) : 0.0;
  const double scale = std::sqrt(monomial_norm(m, t) * monomial_norm(n, t));
  const double quad = std::abs(gaussian_inner_quadrature(Hm, Hn, t) - c.rhs) / scale;
  const double imag = std::abs(gaussian_inner(Hm, Hn, t).imag()) / scale;
  finish(c, scale, tol);
  c.rel_err = std::max({c.rel_err, quad, imag});
  c.pass = c.rel_err <= tol;
  return c;
}

EuclidCheck unitarity_check(const Polynomial& f, double t, double tol) {
  EuclidCheck c;
  c.lhs = gaussian_inner(f, f, t).real();
  const Polynomial F = bt_euclid_polynomial(f, t);
  double s = 0.0;
  for (const auto& [a, ca] : F.terms()) {
    // |d^alpha F(0)|^2 t^|alpha| / alpha! = |c_alpha|^2 alpha! t^|alpha|
    double w = 1.0;
    for (int e : a) w *= factorial(e) * std::pow(t, e);
    s += std::norm(ca) * w;
  }
  c.rhs = s;
  finish(c, std::max(c.lhs, 1e-300), tol);
  return c;
}

Polynomial annihilate_euclid(int k, const Polynomial& f) { return f.derivative(k); }

Polynomial create_euclid(int k, const Polynomial& f, double t) {
  require_positive_t(t);
  return f.derivative(k).scaled(-1.0) + (Polynomial::variable(f.dim(), k) * f).scaled(1.0 / t);
}

EuclidCheck ccr_euclid_check(int j, int k, std::span<const Polynomial> states, double t,
                             double tol) {
  EuclidCheck c;
  c.pass = true;
  const double expected = (j == k ? 1.0 : 0.0) / t;
  for (const auto& f : states) {
    const Polynomial comm = annihilate_euclid(j, create_euclid(k, f, t)) -
                            create_euclid(k, annihilate_euclid(j, f), t);
    const Polynomial r = comm - f.scaled(expected);
    const double err = max_coeff(r) / std::max(max_coeff(f) / t, 1e-300);
    if (err >= c.rel_err) {
      c.rel_err = err;
      c.lhs = max_coeff(comm);
      c.rhs = expected * max_coeff(f);
    }
  }
  c.pass = c.rel_err <= tol;
  return c;
}

EuclidCheck adjointness_euclid_check(int k, std::span<const Polynomial> states, double t,
                                     double tol) {
  EuclidCheck c;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const Polynomial& f = states[s];
    const Polynomial& g = states[(s + 1) % states.size()];
    const Complex lhs = gaussian_inner(annihilate_euclid(k, f), g, t);
    const Complex rhs = gaussian_inner(f, create_euclid(k, g, t), t);
    const double scale = std::sqrt(gaussian_inner(annihilate_euclid(k, f), annihilate_euclid(k, f), t).real() *
                                   gaussian_inner(g, g, t).real());
    const double err = std::abs(lhs - rhs) / std::max(scale, 1e-300);
    if (err >= c.rel_err) {
      c.rel_err = err;
      c.lhs = std::abs(lhs);
      c.rhs = std::abs(rhs);
    }
  }
  c.pass = c.rel_err <= tol;
  return c;
}

}  // namespace heatlab
