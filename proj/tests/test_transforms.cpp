#include <cmath>

#include <doctest.h>

#include "heatlab/transforms.hpp"
#include "support.hpp"

using namespace heatlab;

namespace {

Complex theta_oracle(double t, Complex z) {
  Complex s = 0.0;
  for (int k = -60; k <= 60; ++k) s += std::exp(-(z + 2.0 * kPi * k) * (z + 2.0 * kPi * k) / (2.0 * t));
  return std::sqrt(2.0 * kPi / t) * s;
}

FourierCoefficients cos_theta(const CompactGroup& G) {
  return (FourierCoefficients::character(G, {1}) + FourierCoefficients::character(G, {-1})).scaled(0.5);
}

}  // namespace

TEST_CASE("B_t fixes constants and scales matrix entries") {
  testing::for_all("constants and entries", 20, 41, [](testing::Gen& g) {
    const CompactGroup G = g.group();
    const double t = g.uniform(0.1, 1.5);
    const auto pts = random_complex_points(G, 3, 0.7, g.rng());
    const auto one = FourierCoefficients::constant(G, 1.0);
    const IrrepLabel l = g.label(G, 2);
    const Irrep pi(G, l);
    const int i = g.integer(0, pi.dim() - 1), j = g.integer(0, pi.dim() - 1);
    const auto e = FourierCoefficients::matrix_entry(G, l, i, j);
    for (const auto& z : pts) {
      CHECK(std::abs(segal_bargmann_B(one, t, z) - 1.0) < 1e-14);
      const Complex want = std::exp(-t * pi.casimir() / 2.0) * pi.evaluate(z)(i, j);
      CHECK(std::abs(segal_bargmann_B(e, t, z) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
      CHECK(segal_bargmann_B(e, t, z) == segal_bargmann_C(e, t, z));
    }
  });
}

TEST_CASE("torus(1): B_1 cos at z = i") {
  const CompactGroup G = CompactGroup::torus(1);
  // Convolution against the theta form of rho_1 on a fine periodic grid.
  const int n = 2000;
  Complex conv = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * i / n;
    conv += theta_oracle(1.0, Complex(0.0, 1.0) - th) * std::cos(th) / double(n);
  }
  const double frozen = 0.935925715424278987890965629289;  // e^{-1/2} cosh 1
  CHECK(std::abs(conv - frozen) < 1e-13);
  const ComplexGroupPoint z{{Complex(0.0, 1.0)}, {}};
  CHECK(std::abs(segal_bargmann_B(cos_theta(G), 1.0, z) - frozen) < 1e-14);
}

TEST_CASE("series and convolution forms of B_t agree") {
  testing::for_all("B_t convolution", 6, 43, [](testing::Gen& g) {
    const CompactGroup G = g.integer(0, 1) ? CompactGroup::su2() : CompactGroup::torus(2);
    const double t = g.uniform(0.3, 1.2);
    const auto f = g.function(G, 1);
    const HeatKernel h(G, t);
    for (const auto& z : random_complex_points(G, 2, 0.5, g.rng())) {
      const QuadratureRule rule = haar_quadrature(G, exactness_for_degree(1 + h.degree_at(z)));
      const Complex a = segal_bargmann_B(f, t, z), b = segal_bargmann_convolution(f, t, z, rule);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
  });
}

TEST_CASE("position norms") {
  const CompactGroup T = CompactGroup::torus(1), S = CompactGroup::su2();
  for (double t : {0.1, 0.5, 1.0}) {
    CHECK(norm_in_position(FourierCoefficients::constant(T, 1.0), t).value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(norm_in_position(FourierCoefficients::character(T, {1}), t).value == doctest::Approx(1.0).epsilon(1e-13));
  }
  // chi_{1/2}^2 = chi_0 + chi_1, so the norm is 1 + 3 e^{-2t}.
  const auto chi = FourierCoefficients::character(S, {1});
  CHECK(norm_in_position(chi, 0.5).value == doctest::Approx(2.10363832351432696478).epsilon(1e-12));
  for (double t : {0.2, 1.0}) CHECK(norm_in_position(chi, t).value == doctest::Approx(1.0 + 3.0 * std::exp(-2.0 * t)).epsilon(1e-12));
  CHECK_THROWS_AS(norm_in_position(chi, 0.0), DomainError);
}

TEST_CASE("Bargmann and nu_t norms on the torus") {
  const CompactGroup T = CompactGroup::torus(1);
  for (double t : {0.1, 0.5, 1.0}) {
    CHECK(norm_in_bargmann_torus(segal_bargmann(FourierCoefficients::constant(T, 1.0), t)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm_in_nu_torus(segal_bargmann(FourierCoefficients::constant(T, 1.0), t)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm_in_bargmann_torus(segal_bargmann(FourierCoefficients::character(T, {1}), t)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto c = cos_theta(T);
  CHECK(norm_in_bargmann_torus(segal_bargmann(c, 1.0)) == doctest::Approx(norm_in_position(c, 1.0).value).epsilon(1e-12));

  testing::for_all("unitarity", 20, 47, [](testing::Gen& g) {
    const CompactGroup G = CompactGroup::torus(g.integer(1, 2));
    const double t = g.uniform(0.1, 1.0);
    const auto f = g.function(G, 3);
    const auto F = segal_bargmann(f, t);
    CHECK(norm_in_bargmann_torus(F) == doctest::Approx(norm_in_position(f, t).value).epsilon(1e-9));
    CHECK(norm_in_nu_torus(F) == doctest::Approx(norm_in_haar(f)).epsilon(1e-9));
  });
}

TEST_CASE("pointwise bound") {
  const CompactGroup S = CompactGroup::su2();
  // F = c at g = e: equality.
  const Holomorphic one(FourierCoefficients::constant(S, 2.0), 0.5);
  const std::vector<ComplexGroupPoint> e{complexify(identity(S))};
  const BoundReport r = pointwise_bound_check(one, 4.0, e);
  CHECK(r.max_ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.violations == 0);

  std::mt19937_64 rng(53);
  FourierCoefficients f(S);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      f = f + FourierCoefficients::matrix_entry(S, {1}, i, j).scaled(Complex(std::normal_distribution<double>()(rng), 0.3));
  for (double t : {0.1, 1.0}) {
    const auto F = segal_bargmann(f, t);
    const auto pts = random_complex_points(S, 2000, 1.0, rng);
    const BoundReport b = pointwise_bound_check(F, norm_in_position(f, t).value, pts);
    CHECK(b.violations == 0);
    CHECK(b.max_ratio < 1.0);
    CHECK_FALSE(b.exact_distance);
  }

  const CompactGroup T = CompactGroup::torus(1);
  for (double t : {0.1, 1.0}) {
    const auto F = segal_bargmann(FourierCoefficients::character(T, {1}), t);
    std::vector<ComplexGroupPoint> grid;
    for (int i = 0; i < 60; ++i)
      for (int j = 0; j < 41; ++j) grid.push_back({{Complex(2 * kPi * i / 60, -4.0 + 0.2 * j)}, {}});
    const BoundReport b = pointwise_bound_check(F, norm_in_bargmann_torus(F), grid);
    CHECK(b.exact_distance);
    CHECK(b.violations == 0);
    // |F|^2 e^{-|z|^2/t} = e^{-(Y+t)^2/t}: sharp at theta = 0, Y = -t (on the grid for t = 1).
    CHECK(b.max_ratio <= 1.0 + 1e-12);
    if (t == 1.0) CHECK(b.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("phase-space density") {
  const CompactGroup T = CompactGroup::torus(1);
  for (double t : {0.1, 0.5, 1.0}) {
    const PhaseReport p = phase_density_check_torus(FourierCoefficients::constant(T, 1.0), t, 48);
    CHECK(p.integral == doctest::Approx(1.0).epsilon(1e-10));
    // f = 1: D = nu_t(Y)/(2 pi), largest at Y = 0.
    CHECK(p.sup_density == doctest::Approx(1.0 / std::sqrt(kPi * t) / (2.0 * kPi)).epsilon(1e-10));
    CHECK(p.sup_density <= p.bound * (1.0 + 1e-12));
    CHECK(p.pass);
  }
  double prev = 0.0;
  for (double t : {0.1, 0.5, 1.0}) {
    const double a = measured_phase_constant(1, t);
    CHECK(a >= 1.0);
    CHECK(a > prev);
    prev = a;
  }
  CHECK(measured_phase_constant(1, 0.1) - 1.0 < 1e-6);
}

TEST_CASE("irrep-level operator identities") {
  const CompactGroup S = CompactGroup::su2();
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      const NormIdentityResult r = norm_identities_check(Irrep(S, {a}), Irrep(S, {b}), 0.7);
      CHECK(r.norm3_residual <= 1e-12);
      CHECK(r.norm2_residual <= 1e-10);
    }
}

TEST_CASE("B_t intertwines left-invariant derivatives") {
  testing::for_all("B_t X_k = X_k B_t", 15, 59, [](testing::Gen& g) {
    const CompactGroup G = g.group();
    const double t = g.uniform(0.2, 1.2);
    const auto f = g.function(G, 1);
    const auto F = segal_bargmann(f, t);
    const int k = g.integer(0, G.dim() - 1);
    const auto z = random_complex_points(G, 1, 0.5, g.rng())[0];
    const Complex lhs = segal_bargmann_B(f.derivative_coefficients(k), t, z);
    // X_k F(z) by a central difference along z exp(s X_k).
    const double s = 1e-5;
    std::vector<double> X(G.dim(), 0.0), zero(G.dim(), 0.0);
    X[k] = s;
    const auto fwd = multiply(G, z, exp_map_complex(G, X, zero));
    X[k] = -s;
    const auto bwd = multiply(G, z, exp_map_complex(G, X, zero));
    const Complex fd = (F(fwd) - F(bwd)) / (2.0 * s);
    const int ks[] = {k};
    CHECK(std::abs(lhs - F.data().derivative(ks, z)) <= 1e-11 * std::max(1.0, std::abs(lhs)));
    CHECK(std::abs(lhs - fd) <= 1e-7 * std::max(1.0, std::abs(lhs)));
  });
}

TEST_CASE("B_t f on K solves the heat equation") {
  testing::for_all("d/dt = Delta/2", 10, 61, [](testing::Gen& g) {
    const CompactGroup G = g.integer(0, 1) ? CompactGroup::su2() : CompactGroup::torus(1);
    const double t = g.uniform(0.3, 1.0);
    const auto f = g.function(G, 2);
    const GroupPoint x = haar_random(G, g.rng());
    const double h = 1e-3;
    const Complex dt = (heat_operator(f, t + h)(x) - heat_operator(f, t - h)(x)) / (2.0 * h);
    Complex lap = 0.0;
    const auto u = heat_operator(f, t);
    for (int k = 0; k < G.dim(); ++k) {
      const int kk[] = {k, k};
      lap += u.derivative(kk, x);
    }
    CHECK(std::abs(dt - 0.5 * lap) <= 1e-5 * std::max(1.0, std::abs(lap)));
  });
}
