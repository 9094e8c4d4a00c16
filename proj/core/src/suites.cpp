#include "heatlab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "heatlab/euclid.hpp"
#include "heatlab/fock.hpp"
#include "heatlab/operators.hpp"
#include "heatlab/stochastic.hpp"
#include "heatlab/transforms.hpp"

namespace heatlab {

namespace {

using nlohmann::json;

// Running worst case over the cases of one test.
struct Worst {
  double lhs = 0.0, rhs = 0.0, rel = -1.0, tail = 0.0;
  std::size_t cases = 0;
  bool pass = true;

  void take(double l, double r, double e, double tl, bool ok) {
    ++cases;
    pass = pass && ok;
    if (e > rel || std::isnan(e)) {
      lhs = l, rhs = r, rel = e, tail = tl;
    }
    if (std::isnan(e)) pass = false;
  }
};

struct Ctx {
  const SuiteConfig& cfg;
  CompactGroup G;
  std::string group;
  std::string suite;
  std::mt19937_64 rng;
  std::vector<TestRecord> tests;
  std::vector<SkipRecord> skips;

  std::uint64_t stream(double t, int salt) const {
    const std::size_t h = std::hash<std::string>{}(suite + "|" + group + "|" + std::to_string(t) +
                                                    "|" + std::to_string(salt));
    return cfg.seed ^ (static_cast<std::uint64_t>(h) * 0x9E3779B97F4A7C15ull);
  }

  void add(const std::string& test, double t, double lhs, double rhs, double rel, double tol,
           double tail, bool pass, json detail = json::object()) {
    tests.push_back({suite, test, group, t, lhs, rhs, rel, tol, tail, pass, std::move(detail)});
  }
  void add(const std::string& test, double t, const Worst& w, double tol, json detail = json::object()) {
    detail["cases"] = w.cases;
    add(test, t, w.lhs, w.rhs, std::max(w.rel, 0.0), tol, w.tail, w.pass, std::move(detail));
  }
  void skip(const std::string& reason) { skips.push_back({suite, group, reason}); }

  FourierCoefficients random_function() { return random_band_limited(G, cfg.max_degree, rng); }
};

double fock_entries(const CompactGroup& G, int N) {
  double s = 0.0, p = 1.0;
  for (int n = 0; n <= N; ++n, p *= G.dim()) s += p;
  return s;
}

void require_fock_budget(const Ctx& c, int N) {
  const double e = fock_entries(c.G, N);
  if (e > c.cfg.max_fock_entries)
    throw ResourceError("Fock truncation N=" + std::to_string(N) + " on " + c.group + " needs " +
                        std::to_string(static_cast<long long>(e)) +
                        " entries, above limits.max_fock_entries");
}

// Largest depth with at most `cap` tensor entries (for the dense ideal check).
int dense_depth(const CompactGroup& G, double cap, int N) {
  int n = 0;
  while (n < N && fock_entries(G, n + 1) <= cap) ++n;
  return n;
}

// Characters whose means are tested: trivial, then weight 1 and 2 on each atom.
std::vector<IrrepLabel> pushforward_labels(const CompactGroup& G) {
  std::size_t len = 0;
  for (const auto& f : G.factors()) len += f.kind == FactorKind::torus ? f.dim : 1;
  std::vector<IrrepLabel> out{IrrepLabel(len, 0)};
  for (std::size_t i = 0; i < len; ++i)
    for (int w : {1, 2}) {
      IrrepLabel l(len, 0);
      l[i] = w;
      out.push_back(l);
    }
  return out;
}

// ---------------------------------------------------------------- suites

void suite_transform_unitarity(Ctx& c) {
  for (double t : c.cfg.t_ladder) {
    if (c.G.is_abelian()) {
      Worst b, cc;
      for (int i = 0; i < c.cfg.functions; ++i) {
        const FourierCoefficients f = c.random_function();
        const double haar = norm_in_haar(f);
        const PositionNorm pos = norm_in_position(f, t);
        const Holomorphic F = segal_bargmann(f, t);
        const double nb = norm_in_bargmann_torus(F);
        const double eb = std::abs(nb - pos.value) / haar;
        b.take(nb, pos.value, eb, pos.tail / haar, eb <= 1e-7 + pos.tail / haar);
        const double nn = norm_in_nu_torus(F);
        const double ec = std::abs(nn - haar) / haar;
        cc.take(nn, haar, ec, 0.0, ec <= 1e-7);
      }
      c.add("B_t isometry L2(rho_t) -> HL2(mu_t)", t, b, 1e-7);
      c.add("C_t isometry L2(dx) -> HL2(nu_t)", t, cc, 1e-7);
    } else {
      // Holomorphic norms go through the Taylor identity (taylor-isometry);
      // here the two formulas for B_t are compared pointwise.
      const HeatKernel h(c.G, t);
      Worst w;
      for (int i = 0; i < c.cfg.functions; ++i) {
        const FourierCoefficients f = c.random_function();
        const double scale = std::sqrt(norm_in_haar(f));
        for (const auto& g : random_complex_points(c.G, 4, 0.5, c.rng)) {
          // |Y| is constant along g x^{-1}, so one degree covers every node.
          const QuadratureRule rule =
              haar_quadrature(c.G, exactness_for_degree(c.cfg.max_degree + h.degree_at(g)));
          const Complex a = segal_bargmann_B(f, t, g);
          const Complex b = segal_bargmann_convolution(f, t, g, rule);
          const double e = std::abs(a - b) / std::max(scale, std::abs(a));
          w.take(std::abs(a), std::abs(b), e, 0.0, e <= 1e-9);
        }
      }
      c.add("B_t series vs convolution", t, w, 1e-9);
    }
  }
}

void suite_taylor_isometry(Ctx& c) {
  for (double t : c.cfg.t_ladder) {
    Worst iso, ideal;
    int Nmax = 0;
    for (int i = 0; i < c.cfg.functions; ++i) {
      const FourierCoefficients f = c.random_function();
      const int N = choose_hermite_truncation(heat_operator(f, t), t, 1e-10);
      Nmax = std::max(Nmax, N);
      const HermiteIsometryReport r = hermite_isometry_check(f, t, N, 1e-6, 1e-8);
      iso.take(r.fock, r.position, r.rel_err, r.tail, r.pass);
      const TensorFunctional xi = taylor_map(f, t, dense_depth(c.G, 1e5, 10)).xi;
      const double res = ideal_residual(xi);
      ideal.take(res, 0.0, res, 0.0, res <= 1e-10);
    }
    c.add("position norm vs Fock norm", t, iso, 1e-6, {{"max_N", Nmax}});
    c.add("J-relations of taylor_map", t, ideal, 1e-10, {{"depth", dense_depth(c.G, 1e5, 10)}});
  }
}

void suite_hermite(Ctx& c) {
  const auto irreps = irreps_with_degree(c.G, c.cfg.max_degree);
  const std::size_t n_ir = std::min<std::size_t>(irreps.size(), 6);
  for (double t : c.cfg.t_ladder) {
    Worst dbl;
    for (int i = 0; i < c.cfg.functions; ++i) {
      const DoublingReport d = doubling_identity_check(c.random_function(), t);
      const double e = std::max(std::abs(d.series - d.direct), std::abs(d.exponential - d.direct)) /
                       std::max(std::abs(d.direct), 1e-300);
      dbl.take(d.series, d.direct, e, d.tail, e <= 1e-8 + d.tail / std::max(std::abs(d.direct), 1e-300));
    }
    c.add("doubling identity", t, dbl, 1e-8);
    Worst n3, n2;
    for (std::size_t a = 0; a < n_ir; ++a)
      for (std::size_t b = 0; b < n_ir; ++b) {
        const NormIdentityResult r = norm_identities_check(irreps[a], irreps[b], t);
        n3.take(r.norm3_residual, 0.0, r.norm3_residual, 0.0, r.norm3_residual <= 1e-12);
        n2.take(r.norm2_residual, 0.0, r.norm2_residual, 0.0, r.norm2_residual <= 1e-10);
      }
    c.add("irrep identity (JX, X split)", t, n3, 1e-12);
    c.add("factored exponentials", t, n2, 1e-10);
  }
  if (c.G.has_torus_factor()) {
    c.skip("inverse Taylor map: not onto on groups with a torus factor");
    return;
  }
  const int N = static_cast<int>(std::ceil(4.0 * c.cfg.max_degree));
  for (double t : c.cfg.t_ladder) {
    Worst inv;
    for (int i = 0; i < c.cfg.functions; ++i) {
      const FourierCoefficients f = c.random_function();
      const FourierCoefficients g = inverse_taylor(taylor_map(f, t, N).xi);
      const double e = std::sqrt((g - f).plancherel_norm2() / f.plancherel_norm2());
      inv.take(std::sqrt(g.plancherel_norm2()), std::sqrt(f.plancherel_norm2()), e, 0.0, e <= 1e-8);
    }
    c.add("inverse Taylor round trip", t, inv, 1e-8, {{"N", N}});
  }
}

void suite_operators(Ctx& c) {
  const int N = c.cfg.truncation;
  require_fock_budget(c, N);
  const int d = c.G.dim();
  for (double t : c.cfg.t_ladder) {
    const FockRealization F(c.G, t, N);
    std::vector<TensorFunctional> xs;
    for (int i = 0; i < c.cfg.functions; ++i) xs.push_back(F.random_state(N, c.rng));
    auto put = [&](const std::string& name, const CheckReport& r) {
      c.add(name, t, r.max_residual, 0.0, r.max_residual, r.tolerance, r.tail, r.pass,
            {{"cases", r.cases}});
    };
    put("Fock adjointness", adjointness_check(F, xs, 1e-9));
    for (int j = 0; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        put("Fock [a_" + std::to_string(j) + ",a_" + std::to_string(k) + "]", commutator_check(F, j, k, xs));
    const Eigen::Index kd = vacuum_kernel_dimension(F);
    c.add("vacuum uniqueness (kernel dimension)", t, static_cast<double>(kd), 1.0,
          std::abs(kd - 1.0), 0.0, 0.0, kd == 1);

    std::vector<FourierCoefficients> fs;
    for (int i = 0; i < c.cfg.functions; ++i) fs.push_back(c.random_function());
    try {
      const PositionRealization P(c.G, t, c.cfg.max_degree, c.cfg.quadrature_exactness);
      put("position adjointness", adjointness_check(P, fs, 1e-8));
      for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k)
          put("position [a_" + std::to_string(j) + ",a_" + std::to_string(k) + "]",
              commutator_check(P, j, k, fs));
    } catch (const TruncationError& e) {
      c.skip("position realization at t=" + std::to_string(t) + ": " + e.what());
    }
    if (c.G.is_abelian()) {
      const BargmannTorusRealization B(c.G, t);
      std::vector<FourierCoefficients> hs;
      for (const auto& f : fs) hs.push_back(segal_bargmann(f, t).data());
      put("Bargmann adjointness (Toeplitz creator)", adjointness_check(B, hs, 1e-8));
    }
    put("Taylor map intertwines a_X, vacuum to vacuum", intertwiner_check(t, N, fs, 1e-9));
  }
}

void suite_ccr(Ctx& c) {
  const int N = c.cfg.truncation;
  const int d = c.G.dim();
  if (c.G.is_abelian()) {
    require_fock_budget(c, N);
    for (double t : c.cfg.t_ladder) {
      const FockRealization F(c.G, t, N);
      std::vector<TensorFunctional> xs;
      for (int i = 0; i < c.cfg.functions; ++i) xs.push_back(F.random_state(N, c.rng));
      Worst w;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const CheckReport r = ccr_check_abelian(F, j, k, xs, 1e-9);
          w.take(r.max_residual, 0.0, r.max_residual, 0.0, r.pass);
        }
      c.add("Fock [a_j, a_k^*] = (1/t) delta_jk", t, w, 1e-9);
      if (std::abs(t - 1.0) < 1e-15) c.add("Fock [a_j, a_k^*] = t delta_jk (t = 1)", t, w, 1e-9);
    }
    try {
      const double tmax = *std::max_element(c.cfg.t_ladder.begin(), c.cfg.t_ladder.end());
      const PositionRealization P(c.G, tmax, c.cfg.max_degree);
      const std::vector<FourierCoefficients> none;
      ccr_check_abelian(P, 0, 0, none);
    } catch (const UnsupportedError& e) {
      c.skip(std::string("position CCR: ") + e.what());
    } catch (const TruncationError& e) {
      c.skip(std::string("position CCR: ") + e.what());
    }
    return;
  }
  c.skip("Fock CCR: " + c.group + " is not abelian; the substitute identity is tested instead");
  for (double t : c.cfg.t_ladder) {
    std::vector<FourierCoefficients> fs;
    for (int i = 0; i < c.cfg.functions; ++i) fs.push_back(c.random_function());
    try {
      const PositionRealization P(c.G, t, c.cfg.max_degree, c.cfg.quadrature_exactness);
      Worst w;
      for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
          const CheckReport r = substitute_identity_check(P, j, k, fs, 1e-6);
          w.take(r.max_residual, 0.0, r.max_residual, 0.0, r.pass);
        }
      c.add("[a_j, a_k^*] = -[X_j,X_k] - X_j X_k log rho_t", t, w, 1e-6);
    } catch (const TruncationError& e) {
      c.skip("substitute identity at t=" + std::to_string(t) + ": " + e.what());
    }
  }
}

void suite_resolution(Ctx& c) {
  const int N = c.cfg.truncation;
  require_fock_budget(c, N);
  for (double t : c.cfg.t_ladder) {
    const FockRealization F(c.G, t, N);
    std::vector<std::pair<TensorFunctional, TensorFunctional>> tp{{F.vacuum(N), F.vacuum(N)}};
    for (int i = 0; i < c.cfg.functions; ++i)
      tp.emplace_back(F.random_state(N, c.rng), F.random_state(N, c.rng));
    const CheckReport rt = resolution_of_identity_check(F, tp, 1e-6);
    c.add("truncated resolution, Fock states", t, rt.max_residual, 0.0, rt.max_residual, rt.tolerance,
          rt.tail, rt.pass, {{"cases", rt.cases}});
    std::vector<std::pair<FourierCoefficients, FourierCoefficients>> fp;
    for (int i = 0; i < std::max(1, c.cfg.functions / 2); ++i)
      fp.emplace_back(c.random_function(), c.random_function());
    const CheckReport rh = resolution_of_identity_check(F, fp, 1e-6);
    c.add("truncated resolution, Hermite pairs", t, rh.max_residual, 0.0, rh.max_residual,
          rh.tolerance, rh.tail, rh.pass, {{"cases", rh.cases}});
    if (c.G.is_abelian()) {
      const TensorFunctional u = F.create(0, F.vacuum(N - 1), N);
      const double lhs = fock_inner(u, u).real();
      const double e = std::abs(lhs - 1.0 / t) * t;
      c.add("single excitation norm = 1/t", t, lhs, 1.0 / t, e, 1e-12, 0.0, e <= 1e-12);
    }
  }
}

void suite_stochastic(Ctx& c) {
  const std::size_t S = c.cfg.mc_samples;
  const int m = c.cfg.mc_mesh;
  if (static_cast<double>(S) * m * c.G.dim() > c.cfg.max_mc_steps)
    throw ResourceError("monte_carlo samples * mesh * dim exceeds limits.max_mc_steps");
  const SamplingOptions opt{c.cfg.jobs};
  const auto labels = pushforward_labels(c.G);
  for (double t : c.cfg.t_ladder) {
    const auto hs = sample_holonomies(c.G, t, m, S, c.stream(t, 0), opt);
    const PushforwardReport p = pushforward_check(hs, c.G, t, labels, m);
    for (const auto& e : p.moments) {
      std::string name = "E chi(holonomy), label";
      for (int v : e.label) name += " " + std::to_string(v);
      const double se = std::max(e.std_error_re, e.std_error_im);
      c.add(name, t, e.mean.real(), e.expected, std::abs(e.mean.real() - e.expected), 3.0 * se, 0.0,
            e.z <= p.z_limit, {{"z", e.z}, {"imag_mean", e.mean.imag()}, {"samples", S}, {"mesh", m}});
    }
    if (c.G.is_abelian()) {
      const KSReport ks = ks_wrapped_gaussian(hs, c.G, t);
      c.add("Kolmogorov-Smirnov vs wrapped Gaussian", t, ks.statistic, ks.critical, ks.statistic,
            ks.critical, 0.0, ks.pass, {{"samples", ks.samples}});
    }
    if (c.G.su2_count() > 0) {
      const std::vector<int> meshes{250, 1000, 4000};
      const WeakOrderReport w = weak_order_su2(t, 1, meshes);
      c.add("weak order of the product scheme (spin 1/2)", t, w.min_order, 1.0, 0.0, 0.0, 0.0, w.pass,
            {{"errors", w.errors}, {"orders", w.orders}});
    }
    std::mt19937_64 lr(c.stream(t, 1));
    const LoopSpec spec = random_loop(c.G, 3, 0.5, lr);
    const std::vector<int> lm{64, 256, 1024};
    const LoopConvergenceReport lc = loop_convergence(spec, t, lm, 100, c.stream(t, 2), opt);
    c.add("loop action leaves holonomy invariant in the limit", t, lc.min_order, 1.0, 0.0, 0.0, 0.0,
          lc.pass,
          {{"mean_distance", lc.mean_distance}, {"orders", lc.orders},
           {"order_std_errors", lc.order_std_errors}, {"exact", lc.exact}});
    IrrepLabel first(labels.front().size(), 0);
    first[0] = 1;
    const FourierCoefficients chi = FourierCoefficients::character(c.G, first);
    const FourierCoefficients phi = (chi + chi.conjugate()).scaled(0.5);
    const ChaosReport ch = chaos_term_check(phi, t, S, m, c.stream(t, 3), opt);
    c.add("order-2 chaos residual vs Fock tail", t, ch.residual, ch.tail, std::abs(ch.residual - ch.tail),
          3.0 * ch.std_error, 0.0, ch.pass, {{"z", ch.z}, {"samples", S}, {"mesh", m}});
  }
}

void suite_bounds(Ctx& c) {
  for (double t : c.cfg.t_ladder) {
    const FourierCoefficients f = c.random_function();
    const Holomorphic F = segal_bargmann(f, t);
    // Off the torus ||F|| is taken from the isometry (tested in taylor-isometry).
    const double norm2 = c.G.is_abelian() ? norm_in_bargmann_torus(F) : norm_in_position(f, t).value;
    const auto pts = random_complex_points(c.G, c.cfg.bound_samples, 1.0, c.rng);
    const BoundReport r = pointwise_bound_check(F, norm2, pts);
    c.add("|F(g)|^2 <= ||F||^2 exp(|g|^2/t)", t, r.max_ratio, 1.0, 0.0, 0.0, 0.0, r.violations == 0,
          {{"samples", r.samples}, {"violations", r.violations},
           {"surrogate_ratio", r.max_surrogate_ratio}, {"exact_distance", r.exact_distance}});
  }
}

void suite_phase_density(Ctx& c) {
  if (!c.G.is_abelian()) {
    c.skip("phase-space density bound: torus only");
    return;
  }
  for (double t : c.cfg.t_ladder) {
    const PhaseReport r = phase_density_check_torus(c.random_function(), t, c.cfg.phase_grid);
    c.add("integral of the density", t, r.integral, 1.0, std::abs(r.integral - 1.0), 1e-6, 0.0,
          std::abs(r.integral - 1.0) <= 1e-6);
    c.add("sup density <= a_t (2 pi t)^-d", t, r.sup_density, r.bound, 0.0, 0.0, 0.0,
          r.sup_density <= r.bound * (1.0 + 1e-12), {{"a_t", r.a_t}});
  }
  std::vector<double> ts = c.cfg.t_ladder;
  std::sort(ts.begin(), ts.end());
  std::vector<double> a;
  bool ok = true;
  for (double t : ts) a.push_back(measured_phase_constant(c.G.dim(), t));
  for (std::size_t i = 0; i < a.size(); ++i) {
    ok = ok && a[i] >= 1.0;
    if (i > 0) ok = ok && a[i] > a[i - 1];
  }
  c.add("a_t strictly decreasing to 1 as t decreases", 0.0, a.back(), 1.0, 0.0, 0.0, 0.0, ok,
        {{"t", ts}, {"a_t", a}});
}

void suite_euclid(Ctx& c) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double t : c.cfg.t_ladder) {
    Worst orth, mono, unit;
    for (int m = 0; m <= 6; ++m)
      for (int n = 0; n <= 6; ++n) {
        const EuclidCheck e = hermite_orthogonality_check({m}, {n}, t);
        orth.take(e.lhs, e.rhs, e.rel_err, 0.0, e.pass);
      }
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b) {
        const EuclidCheck e = hermite_orthogonality_check({a, b}, {b, a}, t);
        orth.take(e.lhs, e.rhs, e.rel_err, 0.0, e.pass);
      }
    for (int n = 0; n <= 8; ++n) {
      const EuclidCheck e = monomial_norm_check({n}, t);
      mono.take(e.lhs, e.rhs, e.rel_err, 0.0, e.pass);
    }
    std::vector<Polynomial> ps;
    for (int i = 0; i < c.cfg.functions; ++i) {
      Polynomial p(2);
      for (int a = 0; a <= 6; ++a)
        for (int b = 0; a + b <= 6; ++b) p.add({a, b}, Complex(normal(c.rng), normal(c.rng)));
      ps.push_back(p);
      const EuclidCheck e = unitarity_check(p, t);
      unit.take(e.lhs, e.rhs, e.rel_err, 0.0, e.pass);
    }
    c.add("Hermite orthogonality <H_m,H_n> = delta n! t^n", t, orth, 1e-10);
    c.add("monomial norms t^n n!", t, mono, 1e-10);
    c.add("B_t unitarity on polynomials of degree <= 6", t, unit, 1e-12);
    Worst ccr, adj;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const EuclidCheck e = ccr_euclid_check(j, k, ps, t);
        ccr.take(e.lhs, e.rhs, e.rel_err, 0.0, e.pass);
      }
      const EuclidCheck e = adjointness_euclid_check(j, ps, t);
      adj.take(e.lhs, e.rhs, e.rel_err, 0.0, e.pass);
    }
    c.add("position CCR on R^2: [a_j, a_k^*] = (1/t) delta_jk", t, ccr, 1e-12);
    c.add("position adjointness on R^2", t, adj, 1e-12);
  }
}

using SuiteFn = void (*)(Ctx&);

struct SuiteEntry {
  const char* name;
  SuiteFn fn;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> r{
      {"transform-unitarity", suite_transform_unitarity},
      {"taylor-isometry", suite_taylor_isometry},
      {"hermite", suite_hermite},
      {"operators", suite_operators},
      {"ccr", suite_ccr},
      {"resolution", suite_resolution},
      {"stochastic", suite_stochastic},
      {"bounds", suite_bounds},
      {"phase-density", suite_phase_density},
      {"euclid", suite_euclid},
  };
  return r;
}

// ---------------------------------------------------------------- config

template <class T>
T get_number(const json& j, const std::string& key, double lo, double hi) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!(x >= lo && x <= hi))
    throw ConfigError("config key '" + key + "' out of range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  if constexpr (std::is_integral_v<T>) {
    if (x != std::floor(x)) throw ConfigError("config key '" + key + "' must be an integer");
  }
  return static_cast<T>(x);
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown key '" + k + "' in " + where);
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& e : registry()) n.emplace_back(e.name);
    return n;
  }();
  return names;
}

SuiteConfig parse_config(const json& j) {
  check_keys(j,
             {"group", "groups", "t", "truncation", "quadrature_exactness", "max_degree", "functions",
              "monte_carlo", "bound_samples", "phase_grid", "seed", "jobs", "suites", "limits",
              "structure_constants"},
             "config");
  SuiteConfig c;
  if (j.contains("group") == j.contains("groups"))
    throw ConfigError("config needs exactly one of 'group' or 'groups'");
  if (j.contains("group")) {
    c.groups.push_back(j.at("group"));
  } else {
    if (!j.at("groups").is_array() || j.at("groups").empty())
      throw ConfigError("'groups' must be a non-empty array");
    for (const auto& g : j.at("groups")) c.groups.push_back(g);
  }
  for (const auto& g : c.groups) {
    try {
      make_group(g);
    } catch (const Error& e) {
      throw ConfigError(std::string("bad group descriptor: ") + e.what());
    }
  }
  if (j.contains("t")) {
    const json& t = j.at("t");
    c.t_ladder.clear();
    if (t.is_number()) {
      c.t_ladder.push_back(t.get<double>());
    } else if (t.is_array() && !t.empty()) {
      for (const auto& v : t) {
        if (!v.is_number()) throw ConfigError("'t' entries must be numbers");
        c.t_ladder.push_back(v.get<double>());
      }
    } else {
      throw ConfigError("'t' must be a number or a non-empty array");
    }
    for (double t : c.t_ladder)
      if (!(t > 0.0 && t <= 100.0)) throw ConfigError("'t' values must lie in (0, 100]");
  }
  if (j.contains("truncation")) c.truncation = get_number<int>(j, "truncation", 2, 64);
  if (j.contains("quadrature_exactness"))
    c.quadrature_exactness = get_number<int>(j, "quadrature_exactness", 0, 64);
  if (j.contains("max_degree")) {
    c.max_degree = get_number<double>(j, "max_degree", 0.5, 8);
    if (c.max_degree * 2 != std::floor(c.max_degree * 2))
      throw ConfigError("'max_degree' must be a multiple of 1/2");
  }
  if (j.contains("functions")) c.functions = get_number<int>(j, "functions", 1, 1000);
  if (j.contains("monte_carlo")) {
    const json& m = j.at("monte_carlo");
    check_keys(m, {"samples", "mesh"}, "monte_carlo");
    if (m.contains("samples")) c.mc_samples = get_number<std::size_t>(m, "samples", 2, 1e8);
    if (m.contains("mesh")) c.mc_mesh = get_number<int>(m, "mesh", 1, 1e6);
  }
  if (j.contains("bound_samples")) c.bound_samples = get_number<std::size_t>(j, "bound_samples", 1, 1e7);
  if (j.contains("phase_grid")) c.phase_grid = get_number<int>(j, "phase_grid", 4, 4096);
  if (j.contains("seed")) c.seed = get_number<std::uint64_t>(j, "seed", 0, 9.007199254740992e15);
  if (j.contains("jobs")) c.jobs = get_number<int>(j, "jobs", 0, 1024);
  if (j.contains("suites")) {
    if (!j.at("suites").is_array()) throw ConfigError("'suites' must be an array of names");
    for (const auto& s : j.at("suites")) {
      if (!s.is_string()) throw ConfigError("'suites' entries must be strings");
      const std::string name = s.get<std::string>();
      const auto& all = suite_names();
      if (std::find(all.begin(), all.end(), name) == all.end())
        throw ConfigError("unknown suite '" + name + "'");
      c.suites.push_back(name);
    }
  } else {
    c.suites = suite_names();
  }
  if (j.contains("limits")) {
    const json& l = j.at("limits");
    check_keys(l, {"max_fock_entries", "max_mc_steps"}, "limits");
    if (l.contains("max_fock_entries")) c.max_fock_entries = get_number<double>(l, "max_fock_entries", 1, 1e9);
    if (l.contains("max_mc_steps")) c.max_mc_steps = get_number<double>(l, "max_mc_steps", 1, 1e13);
  }
  if (j.contains("structure_constants")) {
    if (c.groups.size() != 1) throw ConfigError("'structure_constants' needs a single group");
    if (!j.at("structure_constants").is_array())
      throw ConfigError("'structure_constants' must be an array of numbers");
    for (const auto& v : j.at("structure_constants")) {
      if (!v.is_number()) throw ConfigError("'structure_constants' must be an array of numbers");
      c.structure_constants.push_back(v.get<double>());
    }
    const int d = make_group(c.groups.front()).dim();
    if (c.structure_constants.size() != static_cast<std::size_t>(d) * d * d)
      throw ConfigError("'structure_constants' needs dim^3 entries");
  }
  return c;
}

json config_to_json(const SuiteConfig& c) {
  json j = {{"groups", c.groups},
            {"t", c.t_ladder},
            {"truncation", c.truncation},
            {"quadrature_exactness", c.quadrature_exactness},
            {"max_degree", c.max_degree},
            {"functions", c.functions},
            {"monte_carlo", {{"samples", c.mc_samples}, {"mesh", c.mc_mesh}}},
            {"bound_samples", c.bound_samples},
            {"phase_grid", c.phase_grid},
            {"seed", c.seed},
            {"suites", c.suites},
            {"limits", {{"max_fock_entries", c.max_fock_entries}, {"max_mc_steps", c.max_mc_steps}}}};
  if (!c.structure_constants.empty()) j["structure_constants"] = c.structure_constants;
  return j;
}

Report run_suites(const SuiteConfig& c) {
  Report report;
  report.config = config_to_json(c);
  if (c.suites.empty()) return report;

  struct Task {
    std::size_t group;
    std::string suite;
    std::vector<TestRecord> tests;
    std::vector<SkipRecord> skips;
  };
  std::vector<Task> tasks;
  std::vector<CompactGroup> groups;
  std::vector<bool> valid;
  bool euclid_done = false;
  for (std::size_t g = 0; g < c.groups.size(); ++g) {
    CompactGroup G = make_group(c.groups[g]);
    if (!c.structure_constants.empty()) G = G.with_structure_constants(c.structure_constants);
    groups.push_back(G);
    // Group invariants gate everything else on that group.
    Task inv{g, "group-invariants", {}, {}};
    bool ok = true;
    std::string msg = "ok";
    try {
      G.validate();
    } catch (const InvariantError& e) {
      ok = false;
      msg = e.what();
    }
    inv.tests.push_back({"group-invariants", "structure constants (antisymmetry, Jacobi, Ad-invariance)",
                         G.name(), 0.0, ok ? 0.0 : 1.0, 0.0, ok ? 0.0 : 1.0, 0.0, 0.0, ok,
                         json{{"message", msg}}});
    tasks.push_back(std::move(inv));
    valid.push_back(ok);
    for (const auto& s : c.suites) {
      if (s == "euclid") {
        // Group independent: run once.
        if (euclid_done) continue;
        euclid_done = true;
      }
      tasks.push_back({g, s, {}, {}});
    }
  }

  auto run = [&](Task& task) {
    if (task.suite == "group-invariants") return;
    const CompactGroup& G = groups[task.group];
    const bool euclid = task.suite == "euclid";
    Ctx ctx{c, G, euclid ? std::string("R^d") : G.name(), task.suite, std::mt19937_64{}, {}, {}};
    ctx.rng.seed(ctx.stream(0.0, -1));
    if (!euclid && !valid[task.group]) {
      ctx.skip("group invariants failed");
    } else {
      try {
        for (const auto& e : registry())
          if (task.suite == e.name) e.fn(ctx);
      } catch (const Error& e) {
        ctx.add("error", 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, false, {{"message", e.what()}});
      }
    }
    task.tests = std::move(ctx.tests);
    task.skips = std::move(ctx.skips);
  };

  unsigned workers = c.jobs > 0 ? static_cast<unsigned>(c.jobs) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
  if (workers == 1) {
    for (auto& t : tasks) run(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) run(tasks[i]);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& t : tasks) {
    for (auto& r : t.tests) report.tests.push_back(std::move(r));
    for (auto& s : t.skips) report.skipped.push_back(std::move(s));
  }
  return report;
}

}  // namespace heatlab
