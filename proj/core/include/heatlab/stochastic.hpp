#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "heatlab/fock.hpp"

namespace heatlab {

// Brownian increments on the Lie algebra: mesh steps, each d coordinates
// with variance t/mesh. Stream keyed by (seed, index).
struct NoisePath {
  CompactGroup group;
  double t = 1.0;
  int mesh = 1;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<double> increments;  // row-major, mesh x dim

  std::span<const double> step(int i) const {
    return {increments.data() + static_cast<std::size_t>(i) * group.dim(),
            static_cast<std::size_t>(group.dim())};
  }
};

// Independent generator for sample `index` of stream `seed`; the same pair
// gives the same numbers whatever the thread count.
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);

NoisePath make_noise_path(const CompactGroup& G, double t, int mesh, std::uint64_t seed,
                          std::uint64_t index);
// Sums consecutive groups of `factor` steps (coarser mesh, same path).
NoisePath coarsen(const NoisePath& p, int factor);

// exp(dW_1) exp(dW_2) ... exp(dW_m), first increment leftmost.
GroupPoint holonomy(const NoisePath& p);
// Same value as holonomy(make_noise_path(...)) without storing the path.
GroupPoint sample_holonomy(const CompactGroup& G, double t, int mesh, std::uint64_t seed,
                           std::uint64_t index);

struct SamplingOptions {
  int jobs = 0;  // 0: hardware concurrency
};

std::vector<GroupPoint> sample_holonomies(const CompactGroup& G, double t, int mesh,
                                          std::size_t samples, std::uint64_t seed,
                                          const SamplingOptions& options = {});

// Pairwise summation; the result does not depend on how samples were produced.
double pairwise_sum(std::span<const double> v);

struct MomentEstimate {
  IrrepLabel label;
  Complex mean;
  double std_error_re = 0.0;
  double std_error_im = 0.0;
  double expected = 0.0;  // d e^{-t c/2}
  double z = 0.0;         // max of the real and imaginary z-scores
};

struct PushforwardReport {
  std::vector<MomentEstimate> moments;
  std::size_t samples = 0;
  int mesh = 0;
  double z_limit = 3.0;
  bool pass = false;
};

// Monte-Carlo means of characters of the holonomy against d e^{-t c/2}.
PushforwardReport pushforward_check(const CompactGroup& G, double t,
                                    std::span<const IrrepLabel> labels, std::size_t samples,
                                    int mesh, std::uint64_t seed,
                                    const SamplingOptions& options = {});
PushforwardReport pushforward_check(std::span<const GroupPoint> holonomies, const CompactGroup& G,
                                    double t, std::span<const IrrepLabel> labels, int mesh);

struct KSReport {
  double statistic = 0.0;
  double critical = 0.0;  // alpha = 0.01
  std::size_t samples = 0;
  bool pass = false;
};

// Kolmogorov-Smirnov test of each torus angle against the wrapped Gaussian
// of variance t on [0, 2pi); the reported statistic is the largest.
KSReport ks_wrapped_gaussian(std::span<const GroupPoint> holonomies, const CompactGroup& G, double t);
double wrapped_gaussian_cdf(double theta, double t);

// E[chi_j(exp dW)] / (2j+1) for one step of variance s per coordinate;
// the scheme mean after m steps is (2j+1) a^m.
double su2_step_factor(int two_j, double s);

struct WeakOrderReport {
  std::vector<int> meshes;
  std::vector<double> errors;  // |(2j+1) a(t/m)^m - (2j+1) e^{-t c/2}|
  std::vector<double> orders;  // between consecutive meshes
  double min_order = 0.0;
  bool pass = false;
};

WeakOrderReport weak_order_su2(double t, int two_j, std::span<const int> meshes);

// Smooth loop l(tau) = exp(sum_k sum_q c_{kq} sin(2 pi q tau) X_k).
struct LoopSpec {
  CompactGroup group;
  std::vector<std::vector<double>> coeffs;  // [k][q-1]
};

LoopSpec random_loop(const CompactGroup& G, int modes, double amplitude, std::mt19937_64& rng);

struct LoopElement {
  CompactGroup group;
  std::vector<GroupPoint> points;               // l(i/m), i = 0..m; l_0 = l_m = e
  std::vector<std::vector<double>> log_steps;   // log(l_{i+1} l_i^{-1})
  int mesh() const { return static_cast<int>(log_steps.size()); }
};

LoopElement discretize(const LoopSpec& spec, int mesh);

// dW_i -> Ad(l_i) dW_i - log(l_{i+1} l_i^{-1}); throws DomainError on mesh mismatch.
NoisePath loop_action(const LoopElement& l, const NoisePath& p);

struct LoopConvergenceReport {
  std::vector<int> meshes;
  std::vector<double> mean_distance;  // E d(hol(l.p), hol(p))
  std::vector<double> orders;
  std::vector<double> order_std_errors;  // delta method on the log means
  double min_order = 0.0;
  bool exact = false;  // all distances at rounding level (abelian case)
  // exact, or every order + 3 standard errors >= 1
  bool pass = false;
};

LoopConvergenceReport loop_convergence(const LoopSpec& spec, double t, std::span<const int> meshes,
                                       std::size_t samples, std::uint64_t seed,
                                       const SamplingOptions& options = {});

struct ChaosReport {
  double residual = 0.0;   // MC mean of |phi(h) - sum_{n<=2} I_n|^2
  double std_error = 0.0;
  double tail = 0.0;       // sum_{n>2} t^n/n! ||xi_n||^2
  double z = 0.0;
  std::size_t samples = 0;
  int mesh = 0;
  bool pass = false;
};

// Order <= 2 Wiener chaos of phi(holonomy) with constant integrands from
// taylor_map; iterated integrals by forward increments.
ChaosReport chaos_term_check(const FourierCoefficients& phi, double t, std::size_t samples, int mesh,
                             std::uint64_t seed, const SamplingOptions& options = {});

}  // namespace heatlab
