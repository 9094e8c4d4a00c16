#pragma once

#include <span>
#include <vector>

#include "heatlab/heat.hpp"

namespace heatlab {

// B_t f = C_t f: heat operator, then holomorphic evaluation.
class Holomorphic {
 public:
  Holomorphic(FourierCoefficients heated, double t) : data_(std::move(heated)), t_(t) {}
  Complex operator()(const ComplexGroupPoint& g) const { return data_(g); }
  const FourierCoefficients& data() const { return data_; }
  double t() const { return t_; }

 private:
  FourierCoefficients data_;
  double t_;
};

Holomorphic segal_bargmann(const FourierCoefficients& f, double t);
Complex segal_bargmann_B(const FourierCoefficients& f, double t, const ComplexGroupPoint& g);
Complex segal_bargmann_C(const FourierCoefficients& f, double t, const ComplexGroupPoint& g);
// int_K rho_t(g x^{-1}) f(x) dx by quadrature, the convolution form of B_t.
Complex segal_bargmann_convolution(const FourierCoefficients& f, double t,
                                   const ComplexGroupPoint& g, const QuadratureRule& rule);

struct PositionNorm {
  double value;       // quadrature of |f|^2 rho_t
  double heat_route;  // (e^{t Delta/2} |f|^2)(e) from Fourier data of |f|^2
  double tail;        // heat-kernel truncation bound times ||f||^2_{L^2(dx)}
};

// ||f||^2 in L^2(K, rho_t), two independent ways. Throws ConsistencyError if
// they disagree by more than tol * max(1, value).
PositionNorm norm_in_position(const FourierCoefficients& f, double t, double tol = 1e-9);
// ||f||^2 in L^2(K, dx) by quadrature.
double norm_in_haar(const FourierCoefficients& f);

struct TorusGridOptions {
  int hermite_nodes = 0;  // 0: chosen from band and t
};

// int_{K_C} |F|^2 mu_t on a torus: theta trapezoid grid times Gauss-Hermite
// nodes in Y, exact for the band-limited integrand up to the rho_{t/2} tail.
double norm_in_bargmann_torus(const Holomorphic& F, const TorusGridOptions& options = {});
// int |F|^2 nu_t(Y) (d theta/2pi)^d dY.
double norm_in_nu_torus(const Holomorphic& F, const TorusGridOptions& options = {});
// <F, G> in HL^2(mu_t) (mu = true) or HL^2(nu_t) for holomorphic data on a
// torus. With creator_axis = k >= 0 the mu_t density on that axis becomes
// -(d/d zbar_k) mu_t, which gives <F, phi_k G> with phi_k = -(d/d zbar_k) log mu_t.
Complex torus_holomorphic_inner(const FourierCoefficients& F, const FourierCoefficients& G,
                                double t, bool mu = true, int creator_axis = -1,
                                const TorusGridOptions& options = {});

struct BoundReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;            // max |F(g)|^2 / (||F||^2 e^{|g|^2/t}), gating
  double max_surrogate_ratio = 0.0;  // same with |g| replaced by |Y| (diagnostic)
  ComplexGroupPoint witness;         // argmax of the gating ratio
  bool exact_distance = false;       // true when |g| is exact (torus)
};

// |F(g)|^2 <= ||F||^2 e^{|g|^2/t}. On the torus |g|^2 = |theta|^2 + |Y|^2
// exactly; otherwise |g| is replaced by the upper bound d(e,x) + |Y| from
// g = x e^{iY}.
BoundReport pointwise_bound_check(const Holomorphic& F, double norm2,
                                  std::span<const ComplexGroupPoint> sample);

// Random points x e^{iY} with x Haar and Y Gaussian of standard deviation scale.
std::vector<ComplexGroupPoint> random_complex_points(const CompactGroup& G, std::size_t n,
                                                     double scale, std::mt19937_64& rng);

struct PhaseReport {
  double integral = 0.0;    // int D d theta dY
  double sup_density = 0.0; // sup D over the search grid
  double a_t = 0.0;         // sup over unit f of sup D, times (2 pi t)^d
  double bound = 0.0;       // a_t (2 pi t)^{-d}
  bool pass = false;
};

// D = |C_t f|^2 nu_t alpha with alpha = (2pi)^{-d}; f is normalized in
// L^2(dx) first. grid: points per theta coordinate in the sup search.
PhaseReport phase_density_check_torus(const FourierCoefficients& f, double t, int grid);
// sup_z K(z,z) nu_t(Y) alpha (2 pi t)^d from the direct reproducing-kernel sum.
double measured_phase_constant(int d, double t);

struct NormIdentityResult {
  double norm3_residual;  // relative, Frobenius
  double norm2_residual;  // relative, Frobenius
};

// Operator identities on pi_lambda (x) conj(pi_mu): X -> P + Q, JX -> i(P - Q)
// with P = pi_lambda(X) (x) 1, Q = 1 (x) conj pi_mu(X).
NormIdentityResult norm_identities_check(const Irrep& lambda, const Irrep& mu, double t);

}  // namespace heatlab
