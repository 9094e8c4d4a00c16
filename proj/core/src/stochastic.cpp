#include "heatlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace heatlab {

namespace {

void require_positive_t(double t) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  for (auto& th : pool) th.join();
}

// In-place right multiplication by exp(Y).
void apply_step(const CompactGroup& G, GroupPoint& x, std::span<const double> Y) {
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      for (int k = 0; k < f.dim; ++k)
        x.angles[f.slot + k] = wrap_angle(x.angles[f.slot + k] + Y[f.offset + k]);
    } else {
      x.su2[f.slot] = x.su2[f.slot] * expm_traceless(su2_algebra_element(Y.subspan(f.offset, 3)));
    }
  }
}

void draw_step(std::mt19937_64& rng, std::normal_distribution<double>& normal, double sd,
               std::span<double> out) {
  for (double& v : out) v = sd * normal(rng);
}

std::vector<double> adjoint(const CompactGroup& G, const GroupPoint& x, std::span<const double> Y) {
  std::vector<double> out(Y.begin(), Y.end());
  for (const auto& f : G.factors()) {
    if (f.kind != FactorKind::su2) continue;
    const Eigen::Matrix2cd& U = x.su2[f.slot];
    const auto c = su2_coordinates(U * su2_algebra_element(Y.subspan(f.offset, 3)) * U.adjoint());
    std::copy(c.begin(), c.end(), out.begin() + f.offset);
  }
  return out;
}

struct MeanSe {
  double mean = 0.0, se = 0.0;
};

MeanSe mean_se(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  MeanSe r;
  r.mean = pairwise_sum(v) / n;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - r.mean) * (v[i] - r.mean);
  r.se = n > 1 ? std::sqrt(pairwise_sum(sq) / (n - 1.0) / n) : 0.0;
  return r;
}

std::vector<double> measured_orders(std::span<const int> meshes, std::span<const double> errors) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < meshes.size(); ++i)
    out.push_back(std::log(errors[i] / errors[i + 1]) /
                  std::log(static_cast<double>(meshes[i + 1]) / meshes[i]));
  return out;
}

}  // namespace

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

NoisePath make_noise_path(const CompactGroup& G, double t, int mesh, std::uint64_t seed,
                          std::uint64_t index) {
  require_positive_t(t);
  if (mesh < 1) throw DomainError("mesh must be >= 1");
  NoisePath p{G, t, mesh, seed, index, {}};
  const int d = G.dim();
  p.increments.resize(static_cast<std::size_t>(mesh) * d);
  auto rng = sample_stream(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(t / mesh);
  for (int i = 0; i < mesh; ++i)
    draw_step(rng, normal, sd, std::span<double>(p.increments).subspan(static_cast<std::size_t>(i) * d, d));
  return p;
}

NoisePath coarsen(const NoisePath& p, int factor) {
  if (factor < 1 || p.mesh % factor != 0) throw DomainError("coarsening factor must divide the mesh");
  const int d = p.group.dim();
  NoisePath q = p;
  q.mesh = p.mesh / factor;
  q.increments.assign(static_cast<std::size_t>(q.mesh) * d, 0.0);
  for (int i = 0; i < p.mesh; ++i)
    for (int k = 0; k < d; ++k) q.increments[(i / factor) * d + k] += p.increments[i * d + k];
  return q;
}

GroupPoint holonomy(const NoisePath& p) {
  GroupPoint x = identity(p.group);
  for (int i = 0; i < p.mesh; ++i) apply_step(p.group, x, p.step(i));
  return x;
}

GroupPoint sample_holonomy(const CompactGroup& G, double t, int mesh, std::uint64_t seed,
                           std::uint64_t index) {
  require_positive_t(t);
  if (mesh < 1) throw DomainError("mesh must be >= 1");
  auto rng = sample_stream(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(t / mesh);
  std::vector<double> y(G.dim());
  GroupPoint x = identity(G);
  for (int i = 0; i < mesh; ++i) {
    draw_step(rng, normal, sd, y);
    apply_step(G, x, y);
  }
  return x;
}

std::vector<GroupPoint> sample_holonomies(const CompactGroup& G, double t, int mesh,
                                          std::size_t samples, std::uint64_t seed,
                                          const SamplingOptions& options) {
  std::vector<GroupPoint> out(samples);
  parallel_for(samples, options.jobs,
               [&](std::size_t i) { out[i] = sample_holonomy(G, t, mesh, seed, i); });
  return out;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

PushforwardReport pushforward_check(std::span<const GroupPoint> holonomies, const CompactGroup& G,
                                    double t, std::span<const IrrepLabel> labels, int mesh) {
  require_positive_t(t);
  PushforwardReport rep;
  rep.samples = holonomies.size();
  rep.mesh = mesh;
  rep.pass = true;
  std::vector<double> re(holonomies.size()), im(holonomies.size());
  for (const auto& label : labels) {
    const Irrep pi(G, label);
    for (std::size_t i = 0; i < holonomies.size(); ++i) {
      const Complex c = pi.character(holonomies[i]);
      re[i] = c.real();
      im[i] = c.imag();
    }
    const MeanSe r = mean_se(re), m = mean_se(im);
    MomentEstimate e;
    e.label = label;
    e.mean = {r.mean, m.mean};
    e.std_error_re = r.se;
    e.std_error_im = m.se;
    e.expected = pi.dim() * std::exp(-t * pi.casimir() / 2.0);
    auto z = [](double diff, double se) {
      if (se > 0.0) return std::abs(diff) / se;
      return diff == 0.0 ? 0.0 : INFINITY;
    };
    // The trivial character is exact and has zero variance.
    e.z = std::max(z(r.mean - e.expected, r.se), z(m.mean, m.se));
    if (std::abs(r.mean - e.expected) <= 1e-12 * pi.dim() && std::abs(m.mean) <= 1e-12 * pi.dim())
      e.z = 0.0;
    if (!(e.z <= rep.z_limit)) rep.pass = false;
    rep.moments.push_back(e);
  }
  return rep;
}

PushforwardReport pushforward_check(const CompactGroup& G, double t,
                                    std::span<const IrrepLabel> labels, std::size_t samples,
                                    int mesh, std::uint64_t seed, const SamplingOptions& options) {
  const auto hs = sample_holonomies(G, t, mesh, samples, seed, options);
  return pushforward_check(hs, G, t, labels, mesh);
}

double wrapped_gaussian_cdf(double theta, double t) {
  require_positive_t(t);
  const double s = std::sqrt(2.0 * t);
  double F = 0.0;
  const int K = 3 + static_cast<int>(std::ceil(8.0 * std::sqrt(t)));
  for (int k = -K; k <= K; ++k) {
    const double a = 2.0 * kPi * k;
    // Phi((theta + a)/sqrt t) - Phi(a/sqrt t)
    F += 0.5 * (std::erfc(-(theta + a) / s) - std::erfc(-a / s));
  }
  return F;
}

KSReport ks_wrapped_gaussian(std::span<const GroupPoint> holonomies, const CompactGroup& G, double t) {
  if (!G.is_abelian()) throw UnsupportedError("wrapped Gaussian law holds on tori only");
  KSReport rep;
  rep.samples = holonomies.size();
  const double M = static_cast<double>(holonomies.size());
  rep.critical = 1.6276 / std::sqrt(M);
  std::vector<double> th(holonomies.size());
  for (int a = 0; a < G.angle_count(); ++a) {
    for (std::size_t i = 0; i < th.size(); ++i) th[i] = holonomies[i].angles[a];
    std::sort(th.begin(), th.end());
    for (std::size_t i = 0; i < th.size(); ++i) {
      const double F = wrapped_gaussian_cdf(th[i], t);
      rep.statistic = std::max({rep.statistic, (i + 1.0) / M - F, F - i / M});
    }
  }
  rep.pass = rep.statistic < rep.critical;
  return rep;
}

double su2_step_factor(int two_j, double s) {
  // E over Y ~ N(0, s I_3) of chi_j(exp Y); the half-angle is |Y|/sqrt2 and
  // E[r^2 e^{i w r}] / s = (1 - s w^2) e^{-s w^2/2} for the radial part.
  double sum = 0.0;
  for (int i = 0; i <= two_j; ++i) {
    const double m = (two_j - 2.0 * i) / 2.0;
    sum += (1.0 - 2.0 * s * m * m) * std::exp(-s * m * m);
  }
  return sum / (two_j + 1.0);
}

WeakOrderReport weak_order_su2(double t, int two_j, std::span<const int> meshes) {
  require_positive_t(t);
  if (meshes.size() < 2) throw DomainError("weak order needs at least two meshes");
  WeakOrderReport rep;
  rep.meshes.assign(meshes.begin(), meshes.end());
  const double d = two_j + 1.0;
  const double exact = d * std::exp(-t * su2_casimir(two_j) / 2.0);
  for (int m : meshes) {
    if (m < 1) throw DomainError("mesh must be >= 1");
    rep.errors.push_back(std::abs(d * std::exp(m * std::log(su2_step_factor(two_j, t / m))) - exact));
  }
  rep.orders = measured_orders(meshes, rep.errors);
  rep.min_order = *std::min_element(rep.orders.begin(), rep.orders.end());
  rep.pass = rep.min_order >= 1.0;
  return rep;
}

LoopSpec random_loop(const CompactGroup& G, int modes, double amplitude, std::mt19937_64& rng) {
  if (modes < 1) throw DomainError("loop needs at least one mode");
  std::normal_distribution<double> normal(0.0, 1.0);
  LoopSpec s{G, std::vector<std::vector<double>>(G.dim(), std::vector<double>(modes))};
  for (auto& row : s.coeffs)
    for (int q = 0; q < modes; ++q) row[q] = amplitude * normal(rng) / (q + 1.0);
  return s;
}

LoopElement discretize(const LoopSpec& spec, int mesh) {
  if (mesh < 1) throw DomainError("mesh must be >= 1");
  const CompactGroup& G = spec.group;
  LoopElement l{G, {}, {}};
  std::vector<double> Y(G.dim());
  for (int i = 0; i <= mesh; ++i) {
    const double tau = static_cast<double>(i) / mesh;
    for (int k = 0; k < G.dim(); ++k) {
      Y[k] = 0.0;
      for (std::size_t q = 0; q < spec.coeffs[k].size(); ++q)
        Y[k] += spec.coeffs[k][q] * std::sin(2.0 * kPi * (q + 1.0) * tau);
    }
    // Endpoints are exactly e.
    l.points.push_back(i == 0 || i == mesh ? identity(G) : exp_map(G, Y));
  }
  for (int i = 0; i < mesh; ++i)
    l.log_steps.push_back(log_map(G, multiply(G, l.points[i + 1], inverse(G, l.points[i]))));
  return l;
}

NoisePath loop_action(const LoopElement& l, const NoisePath& p) {
  if (l.mesh() != p.mesh)
    throw DomainError("loop mesh " + std::to_string(l.mesh()) + " does not match path mesh " +
                      std::to_string(p.mesh));
  if (!(l.group == p.group)) throw DomainError("loop and path live on different groups");
  NoisePath q = p;
  const int d = p.group.dim();
  for (int i = 0; i < p.mesh; ++i) {
    const auto a = adjoint(p.group, l.points[i], p.step(i));
    for (int k = 0; k < d; ++k) q.increments[i * d + k] = a[k] - l.log_steps[i][k];
  }
  return q;
}

LoopConvergenceReport loop_convergence(const LoopSpec& spec, double t, std::span<const int> meshes,
                                       std::size_t samples, std::uint64_t seed,
                                       const SamplingOptions& options) {
  if (meshes.size() < 2) throw DomainError("convergence study needs at least two meshes");
  const int finest = *std::max_element(meshes.begin(), meshes.end());
  for (int m : meshes)
    if (m < 1 || finest % m != 0) throw DomainError("meshes must divide the finest mesh");
  const CompactGroup& G = spec.group;
  std::vector<LoopElement> loops;
  for (int m : meshes) loops.push_back(discretize(spec, m));
  std::vector<std::vector<double>> dist(meshes.size(), std::vector<double>(samples));
  parallel_for(samples, options.jobs, [&](std::size_t s) {
    const NoisePath fine = make_noise_path(G, t, finest, seed, s);
    for (std::size_t i = 0; i < meshes.size(); ++i) {
      const NoisePath p = coarsen(fine, finest / meshes[i]);
      dist[i][s] = distance(G, holonomy(p), holonomy(loop_action(loops[i], p)));
    }
  });
  LoopConvergenceReport rep;
  rep.meshes.assign(meshes.begin(), meshes.end());
  const double n = static_cast<double>(samples);
  for (const auto& v : dist) rep.mean_distance.push_back(pairwise_sum(v) / n);
  rep.exact = *std::max_element(rep.mean_distance.begin(), rep.mean_distance.end()) <= 1e-12;
  rep.orders = measured_orders(meshes, rep.mean_distance);
  rep.min_order = *std::min_element(rep.orders.begin(), rep.orders.end());
  rep.pass = true;
  for (std::size_t i = 0; i + 1 < meshes.size(); ++i) {
    // Var(log a - log b) with a, b the paired sample means.
    const double a = rep.mean_distance[i], b = rep.mean_distance[i + 1];
    std::vector<double> u(samples);
    for (std::size_t s = 0; s < samples; ++s) u[s] = dist[i][s] / a - dist[i + 1][s] / b;
    const MeanSe m = mean_se(u);
    const double se = m.se / std::log(static_cast<double>(meshes[i + 1]) / meshes[i]);
    rep.order_std_errors.push_back(se);
    if (!rep.exact && !(rep.orders[i] + 3.0 * se >= 1.0)) rep.pass = false;
  }
  return rep;
}

ChaosReport chaos_term_check(const FourierCoefficients& phi, double t, std::size_t samples, int mesh,
                             std::uint64_t seed, const SamplingOptions& options) {
  require_positive_t(t);
  if (mesh < 1) throw DomainError("mesh must be >= 1");
  const CompactGroup& G = phi.group();
  const int d = G.dim();
  const HermiteCoefficients h = taylor_map(phi, t, 2);
  const Complex xi0 = h.xi.components[0](0);
  const CVector& xi1 = h.xi.components[1];
  const CVector& xi2 = h.xi.components[2];

  // Expected residual: the Fock mass above degree 2.
  const int N = std::max(3, choose_hermite_truncation(h.heated, t, 1e-14));
  const auto norms = hermite_component_norms(h.heated, N);
  ChaosReport rep;
  for (int n = 3; n <= N; ++n) rep.tail += std::exp(n * std::log(t) - std::lgamma(n + 1.0)) * norms[n];
  const double tail_bound = hermite_tail(h.heated, t, N);

  std::vector<double> r2(samples);
  parallel_for(samples, options.jobs, [&](std::size_t s) {
    auto rng = sample_stream(seed, s);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double dt = t / mesh, sd = std::sqrt(dt);
    std::vector<double> y(d), W(d, 0.0);
    GroupPoint x = identity(G);
    Complex I2 = 0.0;
    for (int i = 0; i < mesh; ++i) {
      draw_step(rng, normal, sd, y);
      // Earlier times carry the leftmost index.
      // Within a step the double integral is (y_j y_k - delta_jk dt)/2 plus a
      // Levy area, which drops out against the symmetric part of xi2.
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          I2 += xi2(j * d + k) * (W[j] * y[k] + 0.5 * (y[j] * y[k] - (j == k ? dt : 0.0)));
      for (int k = 0; k < d; ++k) W[k] += y[k];
      apply_step(G, x, y);
    }
    Complex I1 = 0.0;
    for (int k = 0; k < d; ++k) I1 += xi1(k) * W[k];
    r2[s] = std::norm(phi(x) - xi0 - I1 - I2);
  });
  const MeanSe m = mean_se(r2);
  rep.residual = m.mean;
  rep.std_error = m.se;
  rep.samples = samples;
  rep.mesh = mesh;
  const double diff = std::abs(m.mean - rep.tail);
  rep.z = m.se > 0.0 ? std::max(0.0, diff - tail_bound) / m.se : (diff <= tail_bound ? 0.0 : INFINITY);
  rep.pass = rep.z <= 3.0;
  return rep;
}

}  // namespace heatlab
