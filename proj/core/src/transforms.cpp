#include "heatlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "heatlab/gauss.hpp"

namespace heatlab {

namespace {

void require_positive_t(double t) {
  if (!(t > 0.0)) throw DomainError("Segal-Bargmann transform needs t > 0");
}

void require_torus(const CompactGroup& G, const char* what) {
  if (!G.is_abelian())
    throw UnsupportedError(std::string(what) + " is only available on tori; got " + G.name());
}

// One coordinate's nodes z = theta + iY and weights.
struct AxisRule {
  std::vector<Complex> z;
  std::vector<Complex> w;
};

int band_of(const FourierCoefficients& F) {
  int B = 0;
  for (const auto& c : F.components())
    for (int n : c.irrep.label()) B = std::max(B, std::abs(n));
  return B;
}

// F at every point of the tensor grid axes[0] x ... x axes[d-1], axis 0
// fastest. The coefficient tensor is contracted one axis at a time.
std::vector<Complex> torus_grid_values(const FourierCoefficients& F, int B,
                                       const std::vector<AxisRule>& axes) {
  const int d = static_cast<int>(axes.size());
  const int modes = 2 * B + 1;
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= modes;
  CVector T = CVector::Zero(static_cast<Eigen::Index>(total));
  for (const auto& c : F.components()) {
    std::size_t idx = 0, stride = 1;
    for (int k = 0; k < d; ++k) {
      idx += static_cast<std::size_t>(c.irrep.label()[k] + B) * stride;
      stride *= modes;
    }
    T(static_cast<Eigen::Index>(idx)) += c.coeff(0, 0);
  }
  for (int k = 0; k < d; ++k) {
    const auto& ax = axes[k];
    const Eigen::Index nodes = static_cast<Eigen::Index>(ax.z.size());
    CMatrix E(nodes, modes);
    for (Eigen::Index i = 0; i < nodes; ++i)
      for (int n = -B; n <= B; ++n) E(i, n + B) = std::exp(kI * static_cast<double>(n) * ax.z[i]);
    const Eigen::Index rest = T.size() / modes;
    const Eigen::Map<const CMatrix> Tm(T.data(), modes, rest);
    CMatrix R = (E * Tm).transpose();
    T = Eigen::Map<CVector>(R.data(), R.size());
  }
  return std::vector<Complex>(T.data(), T.data() + T.size());
}

Complex weighted_sum(const std::vector<Complex>& a, const std::vector<Complex>& b,
                     const std::vector<AxisRule>& axes) {
  const int d = static_cast<int>(axes.size());
  std::vector<std::size_t> idx(d, 0);
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Complex w = 1.0;
    for (int k = 0; k < d; ++k) w *= axes[k].w[idx[k]];
    s += std::conj(a[i]) * b[i] * w;
    for (int k = 0; k < d; ++k) {
      if (++idx[k] < axes[k].z.size()) break;
      idx[k] = 0;
    }
  }
  return s;
}

// theta trapezoid (with a density) times Gauss-Hermite for nu_t in Y. The
// density may depend on Y as well (creator weights).
AxisRule make_axis(int M, const std::function<Complex(double, double)>& density, double t,
                   int hermite_nodes) {
  const GaussRule gh = gauss_hermite(hermite_nodes);
  AxisRule ax;
  const double st = std::sqrt(t);
  const double norm = 1.0 / std::sqrt(kPi);
  for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
    for (int i = 0; i < M; ++i) {
      const double theta = 2.0 * kPi * i / M;
      const double y = st * gh.nodes[j];
      ax.z.emplace_back(theta, y);
      ax.w.push_back(density(theta, y) / static_cast<double>(M) * gh.weights[j] * norm);
    }
  }
  return ax;
}

int hermite_count(const TorusGridOptions& options, int B, double t) {
  if (options.hermite_nodes > 0) return options.hermite_nodes;
  return std::max(24, static_cast<int>(std::ceil(4.0 * B * std::sqrt(t) + 16.0)));
}

Complex torus_inner(const FourierCoefficients& F, const FourierCoefficients& G, double t,
                    bool with_rho, int creator_axis, const TorusGridOptions& options) {
  const auto& grp = F.group();
  require_torus(grp, "holomorphic torus norm");
  require_torus(G.group(), "holomorphic torus norm");
  require_positive_t(t);
  const int d = grp.dim();
  if (creator_axis >= d) throw DomainError("creator axis out of range");
  const int B = std::max(band_of(F), band_of(G));
  const int nh = hermite_count(options, B + (creator_axis >= 0 ? 1 : 0), t);
  std::vector<AxisRule> axes;
  if (with_rho) {
    // The truncated rho_{t/2} is a trigonometric polynomial, so M > 2B + N
    // makes the theta sum exact for it.
    const HeatKernel rho(CompactGroup::torus(1), t / 2.0);
    const int M = 2 * B + static_cast<int>(rho.max_degree()) + 1;
    auto density = [&](double theta, double) -> Complex {
      GroupPoint x;
      x.angles = {theta};
      return rho.evaluate(x).value.real();
    };
    // -(d/d zbar) mu = -(1/2)(d/d theta + i d/dY) mu on this axis.
    const int one = 0;
    auto creator = [&](double theta, double y) -> Complex {
      GroupPoint x;
      x.angles = {theta};
      const double r = rho.evaluate(x).value.real();
      const double dr = rho.derivative(std::span<const int>(&one, 1), x).value.real();
      return -0.5 * dr + kI * (y / t) * r;
    };
    for (int k = 0; k < d; ++k)
      axes.push_back(k == creator_axis ? make_axis(M, creator, t, nh) : make_axis(M, density, t, nh));
  } else {
    if (creator_axis >= 0) throw DomainError("creator weights are defined for mu_t only");
    auto flat = [](double, double) -> Complex { return 1.0; };
    for (int k = 0; k < d; ++k) axes.push_back(make_axis(2 * B + 1, flat, t, nh));
  }
  return weighted_sum(torus_grid_values(F, B, axes), torus_grid_values(G, B, axes), axes);
}

}  // namespace

Holomorphic segal_bargmann(const FourierCoefficients& f, double t) {
  require_positive_t(t);
  return Holomorphic(heat_operator(f, t), t);
}

Complex segal_bargmann_B(const FourierCoefficients& f, double t, const ComplexGroupPoint& g) {
  return segal_bargmann(f, t)(g);
}

Complex segal_bargmann_C(const FourierCoefficients& f, double t, const ComplexGroupPoint& g) {
  return segal_bargmann(f, t)(g);
}

Complex segal_bargmann_convolution(const FourierCoefficients& f, double t,
                                   const ComplexGroupPoint& g, const QuadratureRule& rule) {
  require_positive_t(t);
  const auto& G = f.group();
  const HeatKernel h(G, t);
  Complex s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto& x = rule.nodes[i];
    const ComplexGroupPoint gx = multiply(G, g, complexify(inverse(G, x)));
    s += rule.weights[i] * h.evaluate(gx).value * f(x);
  }
  return s;
}

PositionNorm norm_in_position(const FourierCoefficients& f, double t, double tol) {
  require_positive_t(t);
  const auto& G = f.group();
  const HeatKernel h(G, t);
  const double D = f.max_degree();

  // |f|^2 times the truncated rho_t is band-limited: this rule is exact for it.
  const QuadratureRule rule = haar_quadrature(G, exactness_for_degree(2.0 * D + h.max_degree()));
  double q = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double a = std::norm(f(rule.nodes[i]));
    q += rule.weights[i] * a * h.evaluate(rule.nodes[i]).value.real();
    l2 += rule.weights[i] * a;
  }

  // (e^{t Delta/2} |f|^2)(e) from the Fourier coefficients of |f|^2.
  const QuadratureRule rule2 = haar_quadrature(G, exactness_for_degree(4.0 * D));
  const FourierCoefficients sq = fourier_transform(
      G, [&](const GroupPoint& x) { return Complex(std::norm(f(x)), 0.0); }, 2.0 * D, rule2);
  double heat = 0.0;
  for (const auto& c : sq.components())
    heat += c.irrep.dim() * std::exp(-t * c.irrep.casimir() / 2.0) * c.coeff.trace().real();

  PositionNorm out{q, heat, h.tail_bound() * l2};
  if (std::abs(q - heat) > tol * std::max(1.0, std::abs(q)) + out.tail)
    throw ConsistencyError("L2(rho_t) norm: quadrature " + std::to_string(q) + " vs heat route " +
                           std::to_string(heat));
  return out;
}

double norm_in_haar(const FourierCoefficients& f) {
  const QuadratureRule rule = haar_quadrature(f.group(), exactness_for_degree(2.0 * f.max_degree()));
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::norm(f(rule.nodes[i]));
  return s;
}

double norm_in_bargmann_torus(const Holomorphic& F, const TorusGridOptions& options) {
  return torus_inner(F.data(), F.data(), F.t(), true, -1, options).real();
}

double norm_in_nu_torus(const Holomorphic& F, const TorusGridOptions& options) {
  return torus_inner(F.data(), F.data(), F.t(), false, -1, options).real();
}

Complex torus_holomorphic_inner(const FourierCoefficients& F, const FourierCoefficients& G,
                                double t, bool mu, int creator_axis,
                                const TorusGridOptions& options) {
  return torus_inner(F, G, t, mu, creator_axis, options);
}

BoundReport pointwise_bound_check(const Holomorphic& F, double norm2,
                                  std::span<const ComplexGroupPoint> sample) {
  const auto& G = F.data().group();
  const double t = F.t();
  BoundReport r;
  r.exact_distance = G.is_abelian();
  const double log_norm = std::log(norm2);
  bool first = true;
  for (const auto& g : sample) {
    const Polar p = polar(G, g);
    double dist2 = 0.0, y2 = 0.0;
    for (const auto& fac : G.factors()) {
      double yf = 0.0;
      for (int k = 0; k < fac.dim; ++k) yf += p.Y[fac.offset + k] * p.Y[fac.offset + k];
      y2 += yf;
      if (fac.kind == FactorKind::torus) {
        for (int k = 0; k < fac.dim; ++k) {
          const double th = centered_angle(p.x.angles[fac.slot + k]);
          dist2 += th * th;
        }
        dist2 += yf;
      } else {
        const double up = std::sqrt(2.0) * su2_half_angle(p.x.su2[fac.slot]) + std::sqrt(yf);
        dist2 += up * up;
      }
    }
    const double a = std::norm(F(g));
    const double log_a = a > 0.0 ? std::log(a) : -1e300;
    const double ratio = std::exp(log_a - log_norm - dist2 / t);
    const double surrogate = std::exp(log_a - log_norm - y2 / t);
    ++r.samples;
    if (ratio > 1.0 + 1e-12) ++r.violations;
    r.max_surrogate_ratio = std::max(r.max_surrogate_ratio, surrogate);
    if (first || ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.witness = g;
      first = false;
    }
  }
  return r;
}

std::vector<ComplexGroupPoint> random_complex_points(const CompactGroup& G, std::size_t n,
                                                     double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<ComplexGroupPoint> out;
  out.reserve(n);
  std::vector<double> Y(G.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const GroupPoint x = haar_random(G, rng);
    for (double& y : Y) y = normal(rng);
    out.push_back(from_polar(G, x, Y));
  }
  return out;
}

double measured_phase_constant(int d, double t) {
  if (!(t > 0.0)) throw DomainError("phase constant needs t > 0");
  // One coordinate: sqrt(t/pi) sum_n exp(-(Y + n t)^2 / t), periodic in Y
  // with period t; maximize on a grid and refine by golden section.
  const int N = static_cast<int>(std::ceil(8.0 / std::sqrt(t))) + 2;
  auto g = [&](double Y) {
    double s = 0.0;
    for (int n = -N; n <= N; ++n) s += std::exp(-(Y + n * t) * (Y + n * t) / t);
    return std::sqrt(t / kPi) * s;
  };
  const int grid = 256;
  double best = -1.0, best_y = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double y = t * i / grid;
    const double v = g(y);
    if (v > best) best = v, best_y = y;
  }
  double lo = best_y - t / grid, hi = best_y + t / grid;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double m1 = hi - r * (hi - lo), m2 = lo + r * (hi - lo);
    if (g(m1) < g(m2)) lo = m1; else hi = m2;
  }
  best = std::max(best, g((lo + hi) / 2.0));
  return std::pow(best, d);
}

PhaseReport phase_density_check_torus(const FourierCoefficients& f, double t, int grid) {
  const auto& G = f.group();
  require_torus(G, "phase density");
  require_positive_t(t);
  if (grid < 4) throw DomainError("phase density grid must have at least 4 points");
  const int d = G.dim();
  const double n2 = f.plancherel_norm2();
  if (!(n2 > 0.0)) throw DomainError("phase density needs a nonzero function");
  const FourierCoefficients unit = f.scaled(1.0 / std::sqrt(n2));
  const Holomorphic F = segal_bargmann(unit, t);
  const double alpha = std::pow(2.0 * kPi, -d);

  PhaseReport r;
  r.integral = norm_in_nu_torus(F);

  const int B = band_of(F.data());
  const double ymax = t * B + 4.0 * std::sqrt(t);
  std::vector<AxisRule> axes(d);
  for (auto& ax : axes) {
    for (int j = 0; j < grid; ++j) {
      const double y = -ymax + 2.0 * ymax * j / (grid - 1);
      for (int i = 0; i < grid; ++i) {
        ax.z.emplace_back(2.0 * kPi * i / grid, y);
        ax.w.push_back(std::exp(-y * y / t) / std::sqrt(kPi * t));
      }
    }
  }
  const auto values = torus_grid_values(F.data(), B, axes);
  std::vector<std::size_t> idx(d, 0);
  std::vector<Complex> best_z(d);
  for (const Complex& v : values) {
    double w = alpha;
    for (int k = 0; k < d; ++k) w *= axes[k].w[idx[k]].real();
    const double D = std::norm(v) * w;
    if (D > r.sup_density) {
      r.sup_density = D;
      for (int k = 0; k < d; ++k) best_z[k] = axes[k].z[idx[k]];
    }
    for (int k = 0; k < d; ++k) {
      if (++idx[k] < axes[k].z.size()) break;
      idx[k] = 0;
    }
  }
  // Pattern search around the best grid point.
  auto density = [&](const std::vector<Complex>& z) {
    ComplexGroupPoint g;
    g.angles = z;
    std::vector<double> Y(d);
    for (int k = 0; k < d; ++k) Y[k] = z[k].imag();
    return std::norm(F(g)) * nu_t_torus(d, t, Y) * alpha;
  };
  double step = 2.0 * kPi / grid;
  while (step > 1e-10) {
    bool moved = false;
    for (int k = 0; k < d; ++k) {
      for (Complex dir : {Complex(step, 0), Complex(-step, 0), Complex(0, step), Complex(0, -step)}) {
        auto z = best_z;
        z[k] += dir;
        const double D = density(z);
        if (D > r.sup_density) {
          r.sup_density = D;
          best_z = z;
          moved = true;
        }
      }
    }
    if (!moved) step /= 2.0;
  }
  r.a_t = measured_phase_constant(d, t);
  r.bound = r.a_t * std::pow(2.0 * kPi * t, -d);
  r.pass = std::abs(r.integral - 1.0) <= 1e-6 && r.sup_density <= r.bound * (1.0 + 1e-12);
  return r;
}

NormIdentityResult norm_identities_check(const Irrep& lambda, const Irrep& mu, double t) {
  if (!(lambda.group() == mu.group())) throw DomainError("norm identities: irreps of different groups");
  const int d = lambda.group().dim();
  const CMatrix Il = CMatrix::Identity(lambda.dim(), lambda.dim());
  const CMatrix Im = CMatrix::Identity(mu.dim(), mu.dim());
  const Eigen::Index n = static_cast<Eigen::Index>(lambda.dim()) * mu.dim();
  CMatrix XX = CMatrix::Zero(n, n), JJ = CMatrix::Zero(n, n), ZZ = CMatrix::Zero(n, n),
          ZbZb = CMatrix::Zero(n, n);
  for (int k = 0; k < d; ++k) {
    const CMatrix P = Eigen::kroneckerProduct(lambda.generator(k), Im).eval();
    const CMatrix Q = Eigen::kroneckerProduct(Il, mu.generator(k).conjugate()).eval();
    const CMatrix X = P + Q;
    const CMatrix JX = kI * (P - Q);
    const CMatrix Z = (X - kI * JX) / 2.0;
    const CMatrix Zb = (X + kI * JX) / 2.0;
    XX += X * X;
    JJ += JX * JX;
    ZZ += Z * Z;
    ZbZb += Zb * Zb;
  }
  const CMatrix lhs3 = (t / 2.0) * XX;
  const CMatrix rhs3 = (t / 4.0) * XX + (t / 4.0) * JJ + (t / 4.0) * (XX - JJ);
  const double s3 = std::max(lhs3.norm(), 1e-300);

  const CMatrix lhs2 = ((t / 2.0) * XX).exp();
  const CMatrix delta_c = XX + JJ;  // Delta_{K_C} on this space
  const CMatrix rhs2 = ((t / 4.0) * delta_c).exp() * ((t / 2.0) * ZZ).exp() * ((t / 2.0) * ZbZb).exp();
  return {(lhs3 - rhs3).norm() / s3, (lhs2 - rhs2).norm() / std::max(lhs2.norm(), 1e-300)};
}

}  // namespace heatlab
