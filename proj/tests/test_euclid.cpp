#include <cmath>

#include <doctest.h>

#include "heatlab/euclid.hpp"
#include "support.hpp"

using namespace heatlab;

namespace {

Polynomial x_pow(int n) { return Polynomial::monomial({n}); }

bool same(const Polynomial& a, const Polynomial& b, double tol = 1e-14) {
  return (a - b).pruned(tol).degree() < 0;
}

Polynomial random_poly(testing::Gen& g, int d, int deg) {
  Polynomial p(d);
  MultiIndex n(d, 0);
  // all exponents with |n| <= deg
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == d) {
      p.add(n, g.complex_normal());
      return;
    }
    for (int e = 0; e <= left; ++e) {
      n[k] = e;
      rec(k + 1, left - e);
    }
    n[k] = 0;
  };
  rec(0, deg);
  return p;
}

}  // namespace

TEST_CASE("B_t on low monomials") {
  const double t = 0.7;
  CHECK(same(bt_euclid_polynomial(Polynomial::constant(1, 1.0), t), Polynomial::constant(1, 1.0)));
  // x^2 -> z^2 + t, x^3 -> z^3 + 3 t z
  CHECK(same(bt_euclid_polynomial(x_pow(2), t), x_pow(2) + Polynomial::constant(1, t)));
  CHECK(same(bt_euclid_polynomial(x_pow(3), t), x_pow(3) + x_pow(1).scaled(3.0 * t)));
  const std::vector<Complex> z{Complex(0.3, -1.2)};
  CHECK(std::abs(bt_euclid(x_pow(2), t, z) - (z[0] * z[0] + t)) < 1e-15);
}

TEST_CASE("Hermite polynomials") {
  const double t = 0.4;
  CHECK(same(hermite_euclid({1}, t), x_pow(1)));
  CHECK(same(hermite_euclid({2}, t), x_pow(2) - Polynomial::constant(1, t)));
  for (int n = 0; n <= 8; ++n) CHECK(same(bt_euclid_polynomial(hermite_euclid({n}, t), t), x_pow(n), 1e-12));
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; n <= 6; ++n) {
      const EuclidCheck c = hermite_orthogonality_check({m}, {n}, t);
      CHECK(c.pass);
      // independent: t^n n! on the diagonal
      if (m == n) CHECK(c.lhs == doctest::Approx(std::pow(t, n) * std::tgamma(n + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("Gaussian moments and monomial norms") {
  CHECK(gaussian_moment(0, 0.3) == 1.0);
  CHECK(gaussian_moment(3, 0.3) == 0.0);
  CHECK(gaussian_moment(4, 0.3) == doctest::Approx(3.0 * 0.09));
  const double t = 0.9;
  CHECK(monomial_norm({0}, t) == 1.0);
  CHECK(monomial_norm({1}, t) == doctest::Approx(t));
  CHECK(monomial_norm({2}, t) == doctest::Approx(2.0 * t * t));
  for (int n = 0; n <= 10; ++n) CHECK(monomial_norm_check({n}, t).pass);
  CHECK(monomial_norm_check({2, 3}, t).pass);
}

TEST_CASE("quadrature and moment inner products agree") {
  testing::for_all("inner", 20, 131, [](testing::Gen& g) {
    const int d = g.integer(1, 2);
    const Polynomial f = random_poly(g, d, g.integer(0, 5)), h = random_poly(g, d, g.integer(0, 5));
    const double t = g.uniform(0.1, 2.0);
    const Complex a = gaussian_inner(f, h, t), b = gaussian_inner_quadrature(f, h, t);
    CHECK(std::abs(a - b) <= 1e-11 * std::sqrt(gaussian_inner(f, f, t).real() * gaussian_inner(h, h, t).real()));
  });
}

TEST_CASE("unitarity, CCR and adjointness") {
  testing::for_all("polynomials of degree <= 6", 20, 137, [](testing::Gen& g) {
    const int d = g.integer(1, 3);
    const double t = g.uniform(0.1, 2.0);
    const std::vector<Polynomial> ps{random_poly(g, d, 6), random_poly(g, d, 3), random_poly(g, d, 5)};
    CHECK(unitarity_check(ps[0], t).pass);
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) CHECK(ccr_euclid_check(j, k, ps, t).pass);
      CHECK(adjointness_euclid_check(j, ps, t).pass);
    }
    // the heat flow inverts exactly on polynomials
    CHECK(same(heat_euclid(heat_euclid(ps[0], t), -t), ps[0], 1e-10));
  });
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(hermite_euclid({2}, 0.0), DomainError);
  CHECK_THROWS_AS(Polynomial::monomial({-1}), DomainError);
  CHECK_THROWS_AS(Polynomial(2) + Polynomial(1), DomainError);
  CHECK_THROWS_AS(gaussian_moment(-2, 1.0), DomainError);
}
