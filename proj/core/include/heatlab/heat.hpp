#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "heatlab/fourier.hpp"

namespace heatlab {

// rho_t = sum_lambda d_lambda e^{-t c_lambda/2} chi_lambda, the heat kernel at
// the identity for d rho/dt = (1/2) Delta_K rho, density against unit-mass
// Haar measure. Series are truncated per factor (each circle and each SU(2)
// factor separately) with rigorous Gaussian tail bounds.
class HeatKernel {
 public:
  struct Value {
    Complex value;
    double tail;  // rigorous bound on |truncated - exact|
  };

  HeatKernel(CompactGroup G, double t, double tolerance = 1e-15);

  const CompactGroup& group() const { return group_; }
  double t() const { return t_; }
  double tolerance() const { return tolerance_; }
  // Casimir cutoff of the truncated series at real points.
  double term_cutoff() const { return term_cutoff_; }
  // Bound on the truncation error anywhere on K.
  double tail_bound() const { return tail_bound_; }
  // Largest irrep degree kept in the truncated series (circle: N, su2: j).
  double max_degree() const;
  // Degree of the series actually summed at a complex point (|Y| enlarges it).
  double degree_at(const ComplexGroupPoint& g) const;

  // Real value; throws TruncationError if positivity cannot be certified.
  double operator()(const GroupPoint& x) const;
  Complex operator()(const ComplexGroupPoint& g) const;
  Value evaluate(const GroupPoint& x) const;
  Value evaluate(const ComplexGroupPoint& g) const;
  // (X_{k_1} ... X_{k_n} rho_t)(x), left-invariant fields, same ordering
  // convention as FourierCoefficients::derivative.
  Value derivative(std::span<const int> ks, const GroupPoint& x) const;

  // The truncated series as Fourier data (cutoffs used at real points).
  FourierCoefficients fourier() const;

 private:
  CompactGroup group_;
  double t_;
  double tolerance_;
  double term_cutoff_ = 0.0;
  double tail_bound_ = 0.0;
  std::vector<int> base_cutoff_;  // per atom: N for a circle, 2J for su2
  std::vector<double> base_tail_;
};

// f-hat(lambda) -> e^{-t c_lambda/2} f-hat(lambda); any real t.
FourierCoefficients heat_operator(const FourierCoefficients& f, double t);

// (pi t)^{-d/2} e^{-|Y|^2/t}.
double nu_t_torus(int d, double t, std::span<const double> Y);
// rho_{t/2}(Re z) nu_t(Im z); density against (d theta/2pi)^d dY.
double mu_t_torus(int d, double t, std::span<const Complex> z);

// CSV with columns: coordinates..., value, tail_bound.
void write_kernel_csv(std::ostream& out, const HeatKernel& h, std::span<const GroupPoint> points);

}  // namespace heatlab
