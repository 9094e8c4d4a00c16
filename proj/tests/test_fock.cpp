#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "heatlab/fock.hpp"
#include "heatlab/transforms.hpp"
#include "support.hpp"

using namespace heatlab;

namespace {

double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

}  // namespace

TEST_CASE("taylor_map of a constant is the vacuum") {
  for (const auto& G : {CompactGroup::torus(2), CompactGroup::su2()}) {
    const auto h = taylor_map(FourierCoefficients::constant(G, 1.0), 0.5, 4);
    CHECK(std::abs(h.xi.components[0](0) - 1.0) < 1e-15);
    for (int n = 1; n <= 4; ++n) CHECK(h.xi.components[n].cwiseAbs().maxCoeff() < 1e-15);
    CHECK(fock_norm(h.xi).value == doctest::Approx(1.0));
  }
}

TEST_CASE("torus(1): entries and norm of e^{i theta}") {
  const CompactGroup G = CompactGroup::torus(1);
  const double t = 0.7;
  const auto f = FourierCoefficients::character(G, {1});
  const auto h = taylor_map(f, t, 8);
  Complex in = 1.0;
  double partial = 0.0, w = 1.0;
  for (int n = 0; n <= 8; ++n) {
    // n derivatives of e^{-t/2} e^{i theta} at 0
    CHECK(std::abs(h.xi.components[n](0) - std::exp(-t / 2.0) * in) < 1e-14);
    partial += w * std::exp(-t);
    in *= kI;
    w *= t / (n + 1);
  }
  CHECK(fock_norm(h.xi).value == doctest::Approx(partial).epsilon(1e-14));
  const FockNorm full = fock_norm(h, 40);
  CHECK(full.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("su2: first-order entries of the spin-1/2 entry") {
  const CompactGroup G = CompactGroup::su2();
  const double t = 0.6;
  const auto h = taylor_map(FourierCoefficients::matrix_entry(G, {1}, 0, 0), t, 2);
  for (int k = 0; k < 3; ++k) {
    // d/ds pi(exp(s X_k))_{00} by a central difference of the group map.
    const double s = 1e-6;
    const Complex fd = (su2_rep_matrix(1, expm_traceless(s * su2_basis(k)))(0, 0) -
                        su2_rep_matrix(1, expm_traceless(-s * su2_basis(k)))(0, 0)) / (2.0 * s);
    CHECK(std::abs(h.xi.components[1](k) - std::exp(-t * 1.5 / 2.0) * fd) < 1e-9);
  }
}

TEST_CASE("Hermite isometry instances") {
  for (double t : {0.1, 0.5, 1.0}) {
    const auto one = hermite_isometry_check(FourierCoefficients::constant(CompactGroup::su2(), 1.0), t, 4);
    CHECK(one.position == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(one.fock == doctest::Approx(1.0).epsilon(1e-13));
    const auto e = FourierCoefficients::character(CompactGroup::torus(2), {1, 1});
    const int N = choose_hermite_truncation(heat_operator(e, t), t, 1e-10);
    const auto r = hermite_isometry_check(e, t, N);
    CHECK(r.position == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.fock == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.pass);
  }
  std::mt19937_64 rng(71);
  const auto f = random_band_limited(CompactGroup::su2(), 1, rng);
  const int N = choose_hermite_truncation(heat_operator(f, 0.5), 0.5, 1e-10);
  const auto r = hermite_isometry_check(f, 0.5, N);
  CHECK(r.rel_err <= 1e-6);
  CHECK(r.tail <= 1e-8);
  CHECK(r.dense_mismatch <= 1e-12);
  CHECK(r.pass);
}

TEST_CASE("inverse Taylor map") {
  const CompactGroup G = CompactGroup::su2();
  const auto vac = TensorFunctional::vacuum(G, 0.5, 4);
  const auto one = inverse_taylor(vac);
  CHECK(std::abs(one(identity(G)) - 1.0) < 1e-10);
  CHECK((one - FourierCoefficients::constant(G, 1.0)).plancherel_norm2() < 1e-16);

  const auto e = FourierCoefficients::matrix_entry(G, {1}, 0, 0);
  const auto back = inverse_taylor(taylor_map(e, 0.5, 4).xi);
  CHECK(std::sqrt((back - e).plancherel_norm2()) < 1e-8);

  auto bad = taylor_map(e, 0.5, 4).xi;
  bad.components[2](1) += 0.5;
  CHECK_THROWS_AS(inverse_taylor(bad), InvariantError);
  CHECK_THROWS_AS(inverse_taylor(TensorFunctional::vacuum(CompactGroup::torus(1), 0.5, 4)), UnsupportedError);
}

TEST_CASE("Hermite functions") {
  const CompactGroup T = CompactGroup::torus(1);
  const HeatKernel h(T, 0.8);
  const int k1[] = {0};
  CHECK(std::abs(hermite_function(h, {}, GroupPoint{{0.7}, {}}) - 1.0) < 1e-14);
  CHECK(std::abs(hermite_function(h, k1, GroupPoint{{0.0}, {}})) < 1e-14);
  for (double th : {0.3, 1.2, 2.9})
    CHECK(std::abs(hermite_function(h, k1, GroupPoint{{th}, {}}) + hermite_function(h, k1, GroupPoint{{2 * kPi - th}, {}})) < 1e-12);

  testing::for_all("<H_k, f> = (X_k e^{t Delta/2} f)(e)", 8, 73, [](testing::Gen& g) {
    const CompactGroup G = g.integer(0, 1) ? CompactGroup::su2() : CompactGroup::torus(2);
    const double t = g.uniform(0.6, 1.2);
    const HeatKernel hk(G, t);
    const auto f = g.function(G, 1);
    const int n = g.integer(1, 3);
    std::vector<int> ks(n);
    for (auto& k : ks) k = g.integer(0, G.dim() - 1);
    const QuadratureRule rule = haar_quadrature(G, exactness_for_degree(1 + hk.max_degree()) + 2);
    Complex s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
      s += rule.weights[i] * hermite_function(hk, ks, rule.nodes[i]) * f(rule.nodes[i]) * hk(rule.nodes[i]);
    const Complex want = heat_operator(f, t).derivative(ks, identity(G));
    CHECK(std::abs(s - want) <= 1e-6 * std::max(1.0, std::abs(want)));
  });
}

TEST_CASE("Fock space dimension is the PBW count") {
  for (const auto& G : {CompactGroup::torus(1), CompactGroup::torus(2), CompactGroup::su2()})
    for (int N = 0; N <= 4; ++N) CHECK(FockSpace(G, 0.5, N).dimension() == binom(N + G.dim(), G.dim()));
}

TEST_CASE("tensor JSON round trip") {
  std::mt19937_64 rng(79);
  const auto xi = taylor_map(random_band_limited(CompactGroup::su2(), 1, rng), 0.4, 3).xi;
  const auto back = tensor_from_json(to_json(xi));
  CHECK(back.N == xi.N);
  CHECK(back.t == xi.t);
  for (int n = 0; n <= xi.N; ++n) CHECK((back.components[n] - xi.components[n]).norm() == 0.0);
}

TEST_CASE("taylor_map properties") {
  testing::for_all("J-relations", 20, 83, [](testing::Gen& g) {
    const CompactGroup G = g.group();
    const auto xi = taylor_map(g.function(G, 1.5), g.uniform(0.1, 1.0), G.dim() > 3 ? 4 : 6).xi;
    CHECK(ideal_residual(xi) <= 1e-10);
  });
  testing::for_all("abelian entries are symmetric", 10, 89, [](testing::Gen& g) {
    const CompactGroup G = CompactGroup::torus(2);
    const auto xi = taylor_map(g.function(G, 2), g.uniform(0.1, 1.0), 3).xi;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const int a[] = {j, k}, b[] = {k, j};
        CHECK(std::abs(xi.at(a) - xi.at(b)) <= 1e-12 * std::max(1.0, std::abs(xi.at(a))));
      }
  });
  testing::for_all("doubling identity", 10, 97, [](testing::Gen& g) {
    const CompactGroup G = g.group();
    const DoublingReport d = doubling_identity_check(g.function(G, 1), g.uniform(0.1, 1.0));
    CHECK(std::abs(d.series - d.direct) <= 1e-8 * d.direct + d.tail);
    CHECK(std::abs(d.exponential - d.direct) <= 1e-8 * d.direct);
  });
  testing::for_all("inverse round trip", 6, 101, [](testing::Gen& g) {
    const CompactGroup G = CompactGroup::su2();
    const auto f = g.function(G, 1);
    const auto back = inverse_taylor(taylor_map(f, g.uniform(0.2, 1.0), 4).xi);
    CHECK(std::sqrt((back - f).plancherel_norm2() / f.plancherel_norm2()) < 1e-8);
  });
}
