#pragma once

#include <map>
#include <span>
#include <vector>

#include "heatlab/common.hpp"

namespace heatlab {

using MultiIndex = std::vector<int>;

// Polynomial in d variables with complex coefficients, stored by exponent.
class Polynomial {
 public:
  explicit Polynomial(int d = 1) : d_(d) {}
  static Polynomial constant(int d, Complex c);
  static Polynomial monomial(const MultiIndex& n, Complex c = 1.0);
  // x_k
  static Polynomial variable(int d, int k);

  int dim() const { return d_; }
  const std::map<MultiIndex, Complex>& terms() const { return terms_; }
  Complex coefficient(const MultiIndex& n) const;
  void add(const MultiIndex& n, Complex c);
  int degree() const;  // -1 for the zero polynomial

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(Complex c) const;
  Polynomial derivative(int k) const;
  Polynomial laplacian() const;
  // Drops coefficients with |c| <= tol.
  Polynomial pruned(double tol = 0.0) const;

  Complex operator()(std::span<const Complex> z) const;
  Complex operator()(std::span<const double> x) const;

 private:
  void require_same(const Polynomial& o) const;
  int d_;
  std::map<MultiIndex, Complex> terms_;
};

// e^{s Delta/2} f as a terminating series; s may be negative.
Polynomial heat_euclid(const Polynomial& f, double s);
// B_t f(z) = (e^{t Delta/2} f)(z).
Complex bt_euclid(const Polynomial& f, double t, std::span<const Complex> z);
Polynomial bt_euclid_polynomial(const Polynomial& f, double t);
// H_n = e^{-t Delta/2} x^n.
Polynomial hermite_euclid(const MultiIndex& n, double t);

// E[x^n] for x ~ N(0, t): (n-1)!! t^{n/2}, zero for odd n.
double gaussian_moment(int n, double t);
// <f, g> in L^2(R^d, rho_t) by moments.
Complex gaussian_inner(const Polynomial& f, const Polynomial& g, double t);
// Same integral by tensor Gauss-Hermite quadrature, exact for these degrees.
Complex gaussian_inner_quadrature(const Polynomial& f, const Polynomial& g, double t);

// int |z^n|^2 dmu_t with dmu_t = (pi t)^{-d} e^{-|z|^2/t}: closed form prod n_k! t^{n_k}.
double monomial_norm(const MultiIndex& n, double t);

struct EuclidCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

// Closed form against tensor Gauss-Hermite quadrature of the radial integral.
EuclidCheck monomial_norm_check(const MultiIndex& n, double t, double tol = 1e-10);
// <H_m, H_n> against delta_{mn} prod n_k! t^{n_k}, both by moments and quadrature.
EuclidCheck hermite_orthogonality_check(const MultiIndex& m, const MultiIndex& n, double t,
                                        double tol = 1e-10);
// ||f||^2_{L^2(rho_t)} against sum_alpha t^{|alpha|}/alpha! |d^alpha B_t f(0)|^2.
EuclidCheck unitarity_check(const Polynomial& f, double t, double tol = 1e-12);

// a_k = d/dx_k and a_k^* = -d/dx_k + x_k/t on L^2(rho_t).
Polynomial annihilate_euclid(int k, const Polynomial& f);
Polynomial create_euclid(int k, const Polynomial& f, double t);
// max over test polynomials of |[a_j, a_k^*] f - (delta_jk/t) f| (coefficient sup), relative.
EuclidCheck ccr_euclid_check(int j, int k, std::span<const Polynomial> states, double t,
                             double tol = 1e-12);
// <a_k f, g> = <f, a_k^* g> by Gaussian moments.
EuclidCheck adjointness_euclid_check(int k, std::span<const Polynomial> states, double t,
                                     double tol = 1e-12);

}  // namespace heatlab
