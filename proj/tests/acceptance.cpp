// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "heatlab/euclid.hpp"
#include "heatlab/fock.hpp"
#include "heatlab/operators.hpp"
#include "heatlab/stochastic.hpp"
#include "heatlab/suites.hpp"
#include "heatlab/transforms.hpp"

using namespace heatlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) o.detail = what + "; " + o.detail;
  o.pass = o.pass && ok;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const std::vector<double> kLadder{0.1, 0.5, 1.0};

CompactGroup torus_su2() {
  const CompactGroup p[] = {CompactGroup::torus(1), CompactGroup::su2()};
  return CompactGroup::product(p);
}

// 1, 2: torus unitarity of B_t and C_t.
Outcome torus_unitarity(bool c_form) {
  Outcome o;
  double worst = 0.0;
  for (int d : {1, 2}) {
    const CompactGroup G = CompactGroup::torus(d);
    std::mt19937_64 rng(1000 + d);
    for (double t : kLadder)
      for (int i = 0; i < 50; ++i) {
        const FourierCoefficients f = random_band_limited(G, 3, rng);
        const double haar = norm_in_haar(f);
        const Holomorphic F = segal_bargmann(f, t);
        const double e = c_form ? std::abs(norm_in_nu_torus(F) - haar) / haar
                                : std::abs(norm_in_bargmann_torus(F) - norm_in_position(f, t).value) / haar;
        worst = std::max(worst, e);
        note(o, e <= 1e-7, "torus(" + std::to_string(d) + ") t=" + fmt("%g", t));
      }
  }
  o.detail += fmt("300 cases, worst |diff|/||f||^2 = %.2e (tol 1e-7)", worst);
  return o;
}

// 3: su2 Hermite isometry.
Outcome su2_isometry() {
  Outcome o;
  const CompactGroup S = CompactGroup::su2();
  std::mt19937_64 rng(3000);
  double worst = 0.0, worst_tail = 0.0;
  int maxN = 0;
  for (double t : kLadder)
    for (int i = 0; i < 20; ++i) {
      const FourierCoefficients f = random_band_limited(S, 2, rng);
      const int N = choose_hermite_truncation(heat_operator(f, t), t, 1e-10);
      maxN = std::max(maxN, N);
      const HermiteIsometryReport r = hermite_isometry_check(f, t, N, 1e-6, 1e-8);
      const double e = std::abs(r.fock - r.position) / r.position;
      worst = std::max(worst, e);
      worst_tail = std::max(worst_tail, r.tail);
      note(o, e <= 1e-6 + r.tail / r.position && r.tail <= 1e-8, fmt("t=%g case %g", t, i));
    }
  o.detail += fmt("60 cases, worst rel diff %.2e (tol 1e-6 + tail), worst tail %.2e (<= 1e-8), max N ", worst, worst_tail) +
              std::to_string(maxN);
  return o;
}

// 4: J-relations of taylor_map at every degree.
Outcome ideal() {
  Outcome o;
  double worst = 0.0;
  std::mt19937_64 rng(4000);
  const std::vector<std::pair<CompactGroup, int>> cases{
      {CompactGroup::torus(1), 12}, {CompactGroup::torus(2), 10}, {CompactGroup::su2(), 9}, {torus_su2(), 7}};
  int count = 0;
  for (const auto& [G, N] : cases)
    for (double t : kLadder)
      for (int i = 0; i < 5; ++i) {
        const double r = ideal_residual(taylor_map(random_band_limited(G, 2, rng), t, N).xi);
        worst = std::max(worst, r);
        ++count;
        note(o, r <= 1e-10, G.name());
      }
  o.detail += std::to_string(count) + fmt(" outputs up to degree 12, worst residual %.2e (tol 1e-10)", worst);
  return o;
}

// 5: operator algebra.
Outcome operator_algebra() {
  Outcome o;
  std::mt19937_64 rng(5000);
  double adj = 0.0, comm = 0.0, ccr = 0.0, sub = 0.0, res = 0.0;
  auto fs_of = [&](const CompactGroup& G, double deg, int n) {
    std::vector<FourierCoefficients> v;
    for (int i = 0; i < n; ++i) v.push_back(random_band_limited(G, deg, rng));
    return v;
  };
  for (const CompactGroup& G : {CompactGroup::torus(1), CompactGroup::torus(2), CompactGroup::su2()}) {
    const int d = G.dim();
    for (double t : kLadder) {
      const FockRealization F(G, t, 4);
      std::vector<TensorFunctional> xs;
      for (int i = 0; i < 10; ++i) xs.push_back(F.random_state(4, rng));
      CheckReport r = adjointness_check(F, xs, 1e-9);
      adj = std::max(adj, r.max_residual);
      note(o, r.pass, "Fock adjointness on " + G.name());
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          r = commutator_check(F, j, k, xs, 1e-9);
          comm = std::max(comm, r.max_residual);
          note(o, r.pass, "Fock commutator on " + G.name());
          if (G.is_abelian()) {
            r = ccr_check_abelian(F, j, k, xs, 1e-9);
            ccr = std::max(ccr, r.max_residual);
            note(o, r.pass, "CCR on " + G.name());
          }
        }

      const auto fs = fs_of(G, 1, 10);
      const PositionRealization P(G, t, 1);
      r = adjointness_check(P, fs, 1e-8);
      adj = std::max(adj, r.max_residual);
      note(o, r.pass, "position adjointness on " + G.name());
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          r = commutator_check(P, j, k, fs, 1e-9);
          comm = std::max(comm, r.max_residual);
          note(o, r.pass, "position commutator on " + G.name());
          if (!G.is_abelian()) {
            r = substitute_identity_check(P, j, k, fs, 1e-6);
            sub = std::max(sub, r.max_residual);
            note(o, r.pass, "substitute identity");
          }
        }
      if (G.is_abelian()) {
        std::vector<FourierCoefficients> hs;
        for (const auto& f : fs) hs.push_back(segal_bargmann(f, t).data());
        r = adjointness_check(BargmannTorusRealization(G, t), hs, 1e-8);
        adj = std::max(adj, r.max_residual);
        note(o, r.pass, "Bargmann adjointness on " + G.name());
      }

      // Resolution of the identity on degree <= 2: Fock states at N = 2,
      // and Hermite coefficients of band-limited pairs.
      const FockRealization F2(G, t, 2);
      std::vector<std::pair<TensorFunctional, TensorFunctional>> tp{{F2.vacuum(2), F2.vacuum(2)}};
      for (int i = 0; i < 10; ++i) tp.emplace_back(F2.random_state(2, rng), F2.random_state(2, rng));
      r = resolution_of_identity_check(F2, tp, 1e-6);
      res = std::max(res, r.max_residual);
      note(o, r.pass, "resolution (Fock states) on " + G.name());
      std::vector<std::pair<FourierCoefficients, FourierCoefficients>> hp;
      for (int i = 0; i < 5; ++i) hp.emplace_back(random_band_limited(G, 1, rng), random_band_limited(G, 1, rng));
      r = resolution_of_identity_check(F, hp, 1e-6);
      note(o, r.pass, "resolution (Hermite pairs) on " + G.name());
    }
  }
  o.detail += fmt("adjointness %.1e, commutators %.1e, CCR [a,a*] = (1/t)<X,Y> %.1e", adj, comm, ccr) +
              fmt(", substitute identity %.1e, resolution %.1e", sub, res);
  return o;
}

// 6: intertwining and vacuum.
Outcome intertwining() {
  Outcome o;
  std::mt19937_64 rng(6000);
  double worst = 0.0;
  for (const CompactGroup& G : {CompactGroup::torus(1), CompactGroup::torus(2), CompactGroup::su2(), torus_su2()})
    for (double t : kLadder) {
      std::vector<FourierCoefficients> fs;
      for (int i = 0; i < 20; ++i) fs.push_back(random_band_limited(G, 1, rng));
      const CheckReport r = intertwiner_check(t, 4, fs, 1e-9);
      worst = std::max(worst, r.max_residual);
      note(o, r.pass, G.name());
      note(o, vacuum_kernel_dimension(FockRealization(G, t, 3)) == 1, "vacuum kernel on " + G.name());
    }
  o.detail += fmt("20 states per case, worst residual %.2e (tol 1e-9), vacuum kernel dimension 1", worst);
  return o;
}

// 7: pointwise bound.
Outcome pointwise() {
  Outcome o;
  std::mt19937_64 rng(7000);
  double worst = 0.0;
  std::size_t total = 0, bad = 0;
  for (const CompactGroup& G : {CompactGroup::torus(1), CompactGroup::torus(2), CompactGroup::su2()})
    for (double t : {0.1, 1.0}) {
      const FourierCoefficients f = random_band_limited(G, 2, rng);
      const Holomorphic F = segal_bargmann(f, t);
      const double n2 = G.is_abelian() ? norm_in_bargmann_torus(F) : norm_in_position(f, t).value;
      const BoundReport r = pointwise_bound_check(F, n2, random_complex_points(G, 10000, 1.0, rng));
      total += r.samples;
      bad += r.violations;
      worst = std::max(worst, r.max_ratio);
      note(o, r.violations == 0, G.name());
    }
  o.detail += std::to_string(total) + " points, " + std::to_string(bad) + " violations" +
              fmt(", max ratio %.3f", worst);
  return o;
}

// 8: phase-space density on a torus.
Outcome phase() {
  Outcome o;
  std::mt19937_64 rng(8000);
  double worst_int = 0.0;
  for (int d : {1, 2}) {
    const CompactGroup G = CompactGroup::torus(d);
    for (double t : kLadder)
      for (int i = 0; i < 3; ++i) {
        const FourierCoefficients f = i == 0 ? FourierCoefficients::constant(G, 1.0) : random_band_limited(G, 2, rng);
        const PhaseReport p = phase_density_check_torus(f, t, d == 1 ? 64 : 24);
        worst_int = std::max(worst_int, std::abs(p.integral - 1.0));
        note(o, std::abs(p.integral - 1.0) <= 1e-6, "integral");
        note(o, p.sup_density <= p.bound * (1.0 + 1e-12), "sup bound");
      }
    std::vector<double> a;
    for (double t : {1.0, 0.5, 0.1}) a.push_back(measured_phase_constant(d, t));
    note(o, a[0] > a[1] && a[1] > a[2] && a[2] >= 1.0 && a[2] - 1.0 < 1e-6, "a_t not decreasing to 1");
    if (d == 1) o.detail += fmt("a_t at t=1,0.5,0.1: 1+%.2e, 1+%.2e, 1+%.2e; ", a[0] - 1, a[1] - 1, a[2] - 1);
  }
  o.detail += fmt("worst |int D - 1| %.2e (tol 1e-6)", worst_int);
  return o;
}

// 9: stochastic pushforward and weak order.
Outcome pushforward() {
  Outcome o;
  double worst_z = 0.0;
  const std::size_t M = 100000;
  const int mesh = 1000;
  const IrrepLabel su[] = {{1}, {2}};
  const IrrepLabel tor[] = {{1}, {2}};
  for (double t : {0.5, 1.0}) {
    const PushforwardReport a = pushforward_check(CompactGroup::su2(), t, su, M, mesh, 9001);
    const PushforwardReport b = pushforward_check(CompactGroup::torus(1), t, tor, M, mesh, 9002);
    for (const auto* r : {&a, &b})
      for (const auto& m : r->moments) {
        worst_z = std::max(worst_z, m.z);
        note(o, m.z <= 3.0, fmt("z = %.2f at t=%g", m.z, t));
      }
  }
  double min_order = 1e9;
  const std::vector<int> meshes{250, 1000, 4000};
  for (double t : {0.5, 1.0})
    for (int tj : {1, 2}) {
      const WeakOrderReport w = weak_order_su2(t, tj, meshes);
      min_order = std::min(min_order, w.min_order);
      note(o, w.min_order >= 1.0 - 1e-3 && w.pass, "weak order");
    }
  o.detail += fmt("M=1e5, mesh 1e3, worst |z| %.2f (<= 3); min weak order %.4f", worst_z, min_order);
  return o;
}

// 10: chaos expansion.
Outcome chaos() {
  Outcome o;
  const CompactGroup T = CompactGroup::torus(1), S = CompactGroup::su2();
  const FourierCoefficients cosine =
      (FourierCoefficients::character(T, {1}) + FourierCoefficients::character(T, {-1})).scaled(0.5);
  const FourierCoefficients chi = FourierCoefficients::character(S, {1});
  double worst_z = 0.0;
  for (double t : kLadder)
    for (const auto* phi : {&cosine, &chi}) {
      const ChaosReport r = chaos_term_check(*phi, t, 100000, 1000, 10000 + static_cast<std::uint64_t>(10 * t));
      worst_z = std::max(worst_z, std::abs(r.z));
      note(o, r.pass, fmt("t=%g z=%.2f", t, r.z));
    }
  o.detail += fmt("cos theta and chi_1/2, t in {0.1,0.5,1}, worst |z| %.2f (<= 3)", worst_z);
  return o;
}

// 11: irrep-level identities and the doubling identity.
Outcome identities() {
  Outcome o;
  double n3 = 0.0, n2 = 0.0, dbl = 0.0;
  std::mt19937_64 rng(11000);
  for (const CompactGroup& G : {CompactGroup::torus(1), CompactGroup::torus(2), CompactGroup::su2()}) {
    const auto irreps = irreps_with_degree(G, 2);
    for (double t : kLadder) {
      for (const auto& a : irreps)
        for (const auto& b : irreps) {
          const NormIdentityResult r = norm_identities_check(a, b, t);
          n3 = std::max(n3, r.norm3_residual);
          n2 = std::max(n2, r.norm2_residual);
          note(o, r.norm3_residual <= 1e-12 && r.norm2_residual <= 1e-10, G.name());
        }
      for (int i = 0; i < 10; ++i) {
        const DoublingReport d = doubling_identity_check(random_band_limited(G, 2, rng), t);
        const double e = std::max(std::abs(d.series - d.direct), std::abs(d.exponential - d.direct)) / d.direct;
        dbl = std::max(dbl, e);
        note(o, e <= 1e-8 + d.tail / d.direct, "doubling on " + G.name());
      }
    }
  }
  o.detail += fmt("matrix identity %.1e (machine precision, tol 1e-12), factored exponentials %.1e (tol 1e-10), doubling %.1e (tol 1e-8)",
                  n3, n2, dbl);
  return o;
}

// 12: Euclidean reference.
Outcome euclid() {
  Outcome o;
  double worst = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    for (int m = 0; m <= 10; ++m)
      for (int n = 0; n <= 10; ++n) {
        const EuclidCheck e = hermite_orthogonality_check({m}, {n}, t, 1e-10);
        worst = std::max(worst, e.rel_err);
        note(o, e.pass, fmt("H_%g,H_%g", m, n));
      }
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b) {
        const EuclidCheck e = hermite_orthogonality_check({a, b}, {b, a}, t, 1e-10);
        worst = std::max(worst, e.rel_err);
        note(o, e.pass, "2d orthogonality");
        const EuclidCheck m = monomial_norm_check({a, b}, t, 1e-10);
        worst = std::max(worst, m.rel_err);
        note(o, m.pass, "2d monomial");
      }
    for (int n = 0; n <= 12; ++n) {
      const EuclidCheck e = monomial_norm_check({n}, t, 1e-10);
      worst = std::max(worst, e.rel_err);
      note(o, e.pass, "monomial");
    }
  }
  o.detail += fmt("worst relative residual %.2e (tol 1e-10)", worst);
  return o;
}

// 13: determinism of the report payload.
Outcome determinism() {
  Outcome o;
  nlohmann::json cfg = {{"groups", {"torus:1", "su2"}},
                        {"t", {0.5, 1.0}},
                        {"truncation", 3},
                        {"functions", 3},
                        {"monte_carlo", {{"samples", 5000}, {"mesh", 50}}},
                        {"bound_samples", 200},
                        {"seed", 13}};
  SuiteConfig c = parse_config(cfg);
  c.jobs = 1;
  const std::string a = report_payload(run_suites(c)).dump();
  const std::string b = report_payload(run_suites(c)).dump();
  c.jobs = 4;
  const std::string d = report_payload(run_suites(c)).dump();
  note(o, a == b, "repeat differs");
  note(o, a == d, "jobs=4 differs");
  o.detail += std::to_string(a.size()) + " bytes, identical across two runs and jobs 1 vs 4";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget;  // seconds, 0 = none
  };
  const std::vector<Criterion> all{
      {1, "torus unitarity of B_t", [] { return torus_unitarity(false); }, 30},
      {2, "torus unitarity of C_t", [] { return torus_unitarity(true); }, 30},
      {3, "su2 Hermite/Taylor isometry", su2_isometry, 120},
      {4, "ideal annihilation (J-relations)", ideal, 0},
      {5, "operator algebra", operator_algebra, 0},
      {6, "intertwining and vacuum", intertwining, 0},
      {7, "pointwise bound", pointwise, 0},
      {8, "phase-space density bound", phase, 0},
      {9, "stochastic pushforward and weak order", pushforward, 300},
      {10, "chaos expansion", chaos, 0},
      {11, "irrep-level and doubling identities", identities, 0},
      {12, "Euclidean reference exactness", euclid, 0},
      {13, "report determinism", determinism, 0},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0 && secs > c.budget) {
      o.pass = false;
      o.detail += fmt("; over the %g s budget", c.budget);
    }
    failed += !o.pass;
    std::printf("%s criterion %2d  %-38s %7.1f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
