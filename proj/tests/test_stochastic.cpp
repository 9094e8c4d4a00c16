#include <cmath>

#include <doctest.h>

#include "heatlab/stochastic.hpp"
#include "support.hpp"

using namespace heatlab;

TEST_CASE("zero noise gives the identity") {
  for (const auto& G : {CompactGroup::torus(2), CompactGroup::su2()}) {
    NoisePath p = make_noise_path(G, 0.5, 10, 1, 0);
    std::fill(p.increments.begin(), p.increments.end(), 0.0);
    CHECK(approx_equal(G, holonomy(p), identity(G), 0.0));
  }
}

TEST_CASE("paths are reproducible and order independent") {
  const CompactGroup S = CompactGroup::su2();
  const NoisePath a = make_noise_path(S, 0.5, 64, 9, 3), b = make_noise_path(S, 0.5, 64, 9, 3);
  CHECK(a.increments == b.increments);
  CHECK(make_noise_path(S, 0.5, 64, 9, 4).increments != a.increments);
  const GroupPoint h = holonomy(a), s = sample_holonomy(S, 0.5, 64, 9, 3);
  CHECK((h.su2[0] - s.su2[0]).norm() == 0.0);

  const auto one = sample_holonomies(S, 0.5, 32, 50, 17, {1});
  const auto many = sample_holonomies(S, 0.5, 32, 50, 17, {4});
  for (std::size_t i = 0; i < one.size(); ++i) CHECK((one[i].su2[0] - many[i].su2[0]).norm() == 0.0);
}

TEST_CASE("holonomy multiplies steps left to right") {
  const CompactGroup S = CompactGroup::su2();
  const NoisePath p = make_noise_path(S, 1.0, 3, 5, 0);
  Eigen::Matrix2cd want = Eigen::Matrix2cd::Identity();
  for (int i = 0; i < 3; ++i) want = want * expm_traceless(su2_algebra_element(p.step(i)));
  CHECK((holonomy(p).su2[0] - want).norm() < 1e-14);
}

TEST_CASE("coarsening sums increments") {
  const CompactGroup T = CompactGroup::torus(1);
  const NoisePath p = make_noise_path(T, 0.5, 12, 3, 1);
  const NoisePath q = coarsen(p, 4);
  CHECK(q.mesh == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(q.step(i)[0] == doctest::Approx(p.step(4 * i)[0] + p.step(4 * i + 1)[0] + p.step(4 * i + 2)[0] + p.step(4 * i + 3)[0]));
  // Abelian: the holonomy is exactly the exponential of the sum.
  CHECK(std::abs(centered_angle(holonomy(q).angles[0] - holonomy(p).angles[0])) < 1e-14);
}

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (i + 1.0);
  double naive = 0.0;
  for (double x : v) naive += x;
  CHECK(pairwise_sum(v) == doctest::Approx(naive).epsilon(1e-14));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("characteristic function on the circle") {
  const CompactGroup T = CompactGroup::torus(1);
  const IrrepLabel labels[] = {{0}, {1}, {2}};
  const PushforwardReport r = pushforward_check(T, 0.8, labels, 20000, 10, 29);
  REQUIRE(r.moments.size() == 3);
  CHECK(r.moments[0].mean == Complex(1.0, 0.0));
  CHECK(r.moments[1].expected == doctest::Approx(std::exp(-0.4)));
  CHECK(r.moments[2].expected == doctest::Approx(std::exp(-1.6)));
  CHECK(r.pass);
}

TEST_CASE("wrapped Gaussian") {
  CHECK(wrapped_gaussian_cdf(0.0, 0.5) == 0.0);
  CHECK(wrapped_gaussian_cdf(2.0 * kPi, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wrapped_gaussian_cdf(kPi, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  const auto hs = sample_holonomies(CompactGroup::torus(1), 0.5, 1, 20000, 31);
  const KSReport ks = ks_wrapped_gaussian(hs, CompactGroup::torus(1), 0.5);
  CHECK(ks.critical == doctest::Approx(1.6276 / std::sqrt(20000.0)));
  CHECK(ks.pass);
}

TEST_CASE("su2 scheme mean in closed form") {
  // j = 0: factor 1 exactly.
  CHECK(su2_step_factor(0, 0.3) == 1.0);
  // m = 1, s = t: one exponential step; compare with Monte Carlo.
  const CompactGroup S = CompactGroup::su2();
  const auto hs = sample_holonomies(S, 0.6, 4, 40000, 37);
  double mean = 0.0, m2 = 0.0;
  for (const auto& h : hs) {
    const double c = h.su2[0].trace().real();
    mean += c;
    m2 += c * c;
  }
  mean /= hs.size();
  const double se = std::sqrt((m2 / hs.size() - mean * mean) / hs.size());
  CHECK(std::abs(mean - 2.0 * std::pow(su2_step_factor(1, 0.15), 4)) < 4.0 * se);

  const std::vector<int> meshes{250, 1000, 4000};
  for (int tj : {1, 2}) {
    const WeakOrderReport w = weak_order_su2(0.5, tj, meshes);
    CHECK(w.min_order >= 1.0);
    CHECK(w.pass);
  }
}

TEST_CASE("loops") {
  std::mt19937_64 rng(41);
  const CompactGroup T = CompactGroup::torus(2);
  const LoopSpec ls = random_loop(T, 3, 0.5, rng);
  const LoopElement l = discretize(ls, 50);
  CHECK(approx_equal(T, l.points.front(), identity(T), 1e-14));
  CHECK(approx_equal(T, l.points.back(), identity(T), 1e-12));
  // Torus: the log steps telescope, so the holonomy is unchanged.
  const NoisePath p = make_noise_path(T, 0.5, 50, 43, 0);
  CHECK(approx_equal(T, holonomy(loop_action(l, p)), holonomy(p), 1e-12));
  CHECK_THROWS_AS(loop_action(discretize(ls, 49), p), DomainError);

  // l = e acts trivially.
  LoopSpec flat{CompactGroup::su2(), {{0.0}, {0.0}, {0.0}}};
  const NoisePath q = make_noise_path(flat.group, 0.5, 20, 47, 0);
  const NoisePath r = loop_action(discretize(flat, 20), q);
  REQUIRE(r.increments.size() == q.increments.size());
  for (std::size_t i = 0; i < q.increments.size(); ++i) CHECK(std::abs(r.increments[i] - q.increments[i]) <= 1e-15);

  const LoopSpec su = random_loop(CompactGroup::su2(), 2, 0.5, rng);
  const std::vector<int> meshes{64, 256, 1024};
  const LoopConvergenceReport c = loop_convergence(su, 0.5, meshes, 100, 53);
  CHECK_FALSE(c.exact);
  CHECK(c.mean_distance[2] < c.mean_distance[0]);
  CHECK(c.pass);
}

TEST_CASE("chaos expansion") {
  const CompactGroup T = CompactGroup::torus(1);
  const ChaosReport one = chaos_term_check(FourierCoefficients::constant(T, 1.0), 0.5, 200, 20, 59);
  CHECK(one.residual < 1e-28);
  CHECK(one.tail == 0.0);
  CHECK(one.pass);

  const auto c = (FourierCoefficients::character(T, {1}) + FourierCoefficients::character(T, {-1})).scaled(0.5);
  for (double t : {0.1, 0.5}) {
    // On a circle one step is exact in law and I_2 = (W^2 - t)/2 for any mesh.
    const ChaosReport r = chaos_term_check(c, t, 200000, 1, 61);
    // cos: xi_n = e^{-t/2} Re(i^n), so the tail is e^{-t} sum_{n > 2, even} t^n/n!
    double tail = 0.0, w = 1.0;
    for (int n = 1; n < 60; ++n) {
      w *= t / n;
      if (n > 2 && n % 2 == 0) tail += w;
    }
    CHECK(r.tail == doctest::Approx(std::exp(-t) * tail).epsilon(1e-10));
    CHECK(r.pass);
  }
}
