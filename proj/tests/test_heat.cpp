#include <cmath>

#include <doctest.h>

#include "heatlab/gauss.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/quadrature.hpp"
#include "support.hpp"

using namespace heatlab;

namespace {

// Poisson-summed (wrapped Gaussian) form of the circle heat kernel,
// independent of the character series: rho_t(z) = sqrt(2pi/t) sum_k exp(-(z + 2 pi k)^2 / 2t).
Complex theta_oracle(double t, Complex z) {
  Complex s = 0.0;
  for (int k = -60; k <= 60; ++k) s += std::exp(-(z + 2.0 * kPi * k) * (z + 2.0 * kPi * k) / (2.0 * t));
  return std::sqrt(2.0 * kPi / t) * s;
}

GroupPoint angle(double th) { return GroupPoint{{th}, {}}; }

}  // namespace

TEST_CASE("torus(1) heat kernel at 0, t = 1") {
  const HeatKernel h(CompactGroup::torus(1), 1.0);
  // sum_n e^{-n^2/2}, summed with 200 terms in extended precision.
  CHECK(h(angle(0.0)) == doctest::Approx(2.50662828804290554483).epsilon(1e-14));
  CHECK(std::abs(theta_oracle(1.0, 0.0) - 2.50662828804290554483) < 1e-13);
}

TEST_CASE("torus(1) heat kernel matches the theta form") {
  for (double t : {0.05, 0.3, 1.0, 4.0}) {
    const HeatKernel h(CompactGroup::torus(1), t);
    for (int i = 0; i < 40; ++i) {
      const double th = 2.0 * kPi * i / 40.0;
      // evaluate(): operator() refuses values below the truncation bound (t = 0.05 near pi).
      CHECK(std::abs(h.evaluate(angle(th)).value.real() - theta_oracle(t, th).real()) <= 1e-12 * std::max(1.0, h(angle(0.0))));
    }
  }
}

TEST_CASE("large t: only the trivial character survives") {
  const HeatKernel h(CompactGroup::torus(1), 60.0);
  for (double th : {0.0, 1.0, 3.0}) CHECK(h(angle(th)) == doctest::Approx(1.0).epsilon(1e-12));
  const HeatKernel s(CompactGroup::su2(), 60.0);
  std::mt19937_64 rng(3);
  CHECK(s(haar_random(CompactGroup::su2(), rng)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("su2, t = 0.5: peak at the identity") {
  const CompactGroup G = CompactGroup::su2();
  const HeatKernel h(G, 0.5);
  GroupPoint minus = identity(G);
  minus.su2[0] = -Eigen::Matrix2cd::Identity();
  // sum (2j+1)^2 e^{-t j(j+1)} and sum (-1)^{2j} (2j+1)^2 e^{-t j(j+1)}.
  CHECK(h(identity(G)) == doctest::Approx(11.3615278072467444016).epsilon(1e-13));
  CHECK(h.evaluate(minus).value.real() == doctest::Approx(2.33913062620662665709e-6).epsilon(1e-8));
  CHECK(h(identity(G)) > h(minus));
}

TEST_CASE("complex heat kernel") {
  const CompactGroup G = CompactGroup::torus(1);
  const HeatKernel h(G, 1.0);
  ComplexGroupPoint z{{Complex(0.0, 0.3)}, {}};
  // sum_n e^{-n^2/2} e^{-0.3 n}
  const Complex v = h(z);
  CHECK(v.real() == doctest::Approx(2.62200300536367569927).epsilon(1e-14));
  CHECK(std::abs(v.imag()) < 1e-14);
  CHECK(std::abs(v - theta_oracle(1.0, Complex(0.0, 0.3))) < 1e-12);

  testing::for_all("conjugate symmetry", 20, 5, [&](testing::Gen& g) {
    ComplexGroupPoint w{{Complex(g.uniform(0, 2 * kPi), g.uniform(-1, 1))}, {}};
    CHECK(std::abs(std::conj(h(w)) - h(conjugate_point(G, w))) < 1e-12 * std::abs(h(w)));
  });
}

TEST_CASE("heat_operator") {
  const CompactGroup su2 = CompactGroup::su2();
  const auto e = FourierCoefficients::matrix_entry(su2, {2}, 0, 1);
  const auto he = heat_operator(e, 0.7);
  REQUIRE(he.components().size() == 1);
  // c_1 = 4
  CHECK(std::abs(he.components()[0].coeff(1, 0) - std::exp(-0.7 * 2.0) * e.components()[0].coeff(1, 0)) < 1e-15);

  testing::for_all("inverse", 20, 17, [](testing::Gen& g) {
    const CompactGroup G = g.group();
    const auto f = g.function(G, 2);
    const double t = g.uniform(0.05, 2.0);
    CHECK(std::sqrt((heat_operator(heat_operator(f, t), -t) - f).plancherel_norm2()) <
          1e-12 * std::sqrt(f.plancherel_norm2()));
    CHECK(std::sqrt((heat_operator(f, 0.0) - f).plancherel_norm2()) == 0.0);
  });
}

TEST_CASE("nu_t and mu_t on the torus") {
  // Normalized Gaussian: peak pi^{-1/2} at t = 1, second moment t/2.
  const std::vector<double> zero{0.0};
  CHECK(nu_t_torus(1, 1.0, zero) == doctest::Approx(1.0 / std::sqrt(kPi)));
  const GaussRule gh = gauss_hermite(40);
  for (double t : {0.3, 1.0, 2.5}) {
    double mass = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      const double Y = std::sqrt(t) * gh.nodes[i];
      const std::vector<double> y{Y};
      const double w = gh.weights[i] * std::sqrt(t) * std::exp(gh.nodes[i] * gh.nodes[i]);
      mass += w * nu_t_torus(1, t, y);
      m2 += w * Y * Y * nu_t_torus(1, t, y);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(t / 2.0).epsilon(1e-12));
  }

  // mu_t: total mass 1; concentrated near z = 0 for small t.
  for (double t : {0.02, 0.5}) {
    const int n = 400;
    double mass = 0.0, inner = 0.0;
    const double L = 8.0 * std::sqrt(t);
    const int ny = 400;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < ny; ++j) {
        const double th = 2.0 * kPi * i / n, y = -L + 2.0 * L * (j + 0.5) / ny;
        const std::vector<Complex> z{Complex(th, y)};
        const double w = mu_t_torus(1, t, z) / n * (2.0 * L / ny);
        mass += w;
        if (std::abs(Complex(centered_angle(th), y)) < 0.5) inner += w;
      }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    if (t < 0.1) CHECK(inner > 0.999);
  }
}

TEST_CASE("mu_t factorization against a heat-equation solve") {
  // u(s, theta) = rho_{s}(theta) solves u_s = u_thth / 2; march from a
  // narrow start by finite differences and compare with rho_{t/2}.
  const double t = 0.8, s0 = 0.2, s1 = t / 2.0;
  const int n = 1024;
  const double h = 2.0 * kPi / n, ds = 0.2 * h * h;
  const HeatKernel start(CompactGroup::torus(1), s0), end(CompactGroup::torus(1), s1);
  std::vector<double> u(n), v(n);
  for (int i = 0; i < n; ++i) u[i] = start(angle(i * h));
  int steps = static_cast<int>(std::round((s1 - s0) / ds));
  const double dss = (s1 - s0) / steps;
  for (int k = 0; k < steps; ++k) {
    for (int i = 0; i < n; ++i)
      v[i] = u[i] + 0.5 * dss * (u[(i + 1) % n] - 2.0 * u[i] + u[(i + n - 1) % n]) / (h * h);
    u.swap(v);
  }
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) {
    err = std::max(err, std::abs(u[i] - end(angle(i * h))));
    scale = std::max(scale, end(angle(i * h)));
  }
  CHECK(err / scale < 1e-4);
  // mu_t(theta + iY) = rho_{t/2}(theta) nu_t(Y)
  const std::vector<double> Y{0.3};
  const std::vector<Complex> z{Complex(1.1, 0.3)};
  CHECK(mu_t_torus(1, t, z) == doctest::Approx(end(angle(1.1)) * nu_t_torus(1, t, Y)).epsilon(1e-14));
}

TEST_CASE("pairing with the heat kernel") {
  testing::for_all("int phi rho_t = (e^{t Delta/2} phi)(e)", 12, 23, [](testing::Gen& g) {
    const CompactGroup G = g.integer(0, 1) ? CompactGroup::su2() : CompactGroup::torus(g.integer(1, 2));
    const auto phi = g.function(G, 2);
    const double t = g.uniform(0.3, 1.5);
    const HeatKernel h(G, t);
    const QuadratureRule rule = haar_quadrature(G, exactness_for_degree(2 + h.max_degree()));
    Complex s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * phi(rule.nodes[i]) * h(rule.nodes[i]);
    const Complex want = heat_operator(phi, t)(identity(G));
    CHECK(std::abs(s - want) < 1e-11 * std::sqrt(phi.plancherel_norm2()));
  });
}

TEST_CASE("semigroup under convolution") {
  testing::for_all("rho_s * rho_t = rho_{s+t}", 6, 29, [](testing::Gen& g) {
    const CompactGroup G = g.integer(0, 1) ? CompactGroup::su2() : CompactGroup::torus(1);
    const double s = g.uniform(0.5, 1.5), t = g.uniform(0.5, 1.5);
    const HeatKernel hs(G, s), ht(G, t), hst(G, s + t);
    const QuadratureRule rule = haar_quadrature(G, exactness_for_degree(hs.max_degree() + ht.max_degree()));
    const GroupPoint x = haar_random(G, g.rng());
    double c = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
      c += rule.weights[i] * hs(multiply(G, x, inverse(G, rule.nodes[i]))) * ht(rule.nodes[i]);
    CHECK(c == doctest::Approx(hst(x)).epsilon(1e-8));
  });
}

TEST_CASE("complex kernel restricted to K") {
  testing::for_all("rho_t(complexify x) = rho_t(x)", 30, 31, [](testing::Gen& g) {
    const CompactGroup G = g.group();
    const HeatKernel h(G, g.uniform(0.2, 2.0));
    const GroupPoint x = haar_random(G, g.rng());
    const auto real = h.evaluate(x), cplx = h.evaluate(complexify(x));
    CHECK(std::abs(real.value - cplx.value) <= 1e-12 * std::max(1.0, std::abs(real.value)) + real.tail);
  });
}

TEST_CASE("bad arguments") {
  CHECK_THROWS_AS(HeatKernel(CompactGroup::su2(), 0.0), DomainError);
  CHECK_THROWS_AS(HeatKernel(CompactGroup::su2(), -1.0), DomainError);
}
