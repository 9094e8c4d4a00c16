#pragma once

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "heatlab/irrep.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

// f(x) = sum_lambda d_lambda tr(fhat(lambda) pi_lambda(x)),
// fhat(lambda) = int f(x) pi_lambda(x)^* dx.
class FourierCoefficients {
 public:
  struct Component {
    Irrep irrep;
    CMatrix coeff;
  };

  FourierCoefficients() = default;
  explicit FourierCoefficients(CompactGroup G) : group_(std::move(G)) {}

  static FourierCoefficients constant(const CompactGroup& G, Complex c);
  // The function x -> pi_lambda(x)_{row, col}.
  static FourierCoefficients matrix_entry(const CompactGroup& G, const IrrepLabel& label,
                                          int row, int col);
  static FourierCoefficients character(const CompactGroup& G, const IrrepLabel& label);

  // Adds coeff to the stored coefficient of pi (creating it if absent).
  void add(const Irrep& pi, const CMatrix& coeff);
  void add(const IrrepLabel& label, const CMatrix& coeff);

  const CompactGroup& group() const { return group_; }
  const std::vector<Component>& components() const { return components_; }
  std::vector<Component>& components() { return components_; }
  const Component* find(const IrrepLabel& label) const;

  Complex operator()(const GroupPoint& x) const;
  Complex operator()(const ComplexGroupPoint& g) const;
  // (X_{k_1} ... X_{k_n} f)(x) for left-invariant X: generators inserted on the right.
  Complex derivative(std::span<const int> ks, const GroupPoint& x) const;
  Complex derivative(std::span<const int> ks, const ComplexGroupPoint& g) const;

  double max_degree() const;
  double max_casimir() const;
  // sum_lambda d_lambda ||fhat||_HS^2 = ||f||^2 in L^2(dx).
  double plancherel_norm2() const;

  // f -> X_k f, i.e. fhat -> pi(X_k) fhat.
  FourierCoefficients derivative_coefficients(int k) const;
  // Coefficients of the pointwise product f g (exact, via quadrature).
  FourierCoefficients multiply(const FourierCoefficients& other) const;
  FourierCoefficients conjugate() const;  // x -> conj f(x)
  FourierCoefficients scaled(Complex c) const;
  FourierCoefficients operator+(const FourierCoefficients& other) const;
  FourierCoefficients operator-(const FourierCoefficients& other) const;
  // Drops components whose coefficients are all below tol.
  FourierCoefficients pruned(double tol = 0.0) const;

 private:
  CompactGroup group_;
  std::vector<Component> components_;  // sorted by label
};

// Projects a function onto the irreps of degree <= max_degree using the
// given rule (exact when f is band-limited and the rule is fine enough).
FourierCoefficients fourier_transform(const CompactGroup& G,
                                      const std::function<Complex(const GroupPoint&)>& f,
                                      double max_degree, const QuadratureRule& rule);

// Random combination of matrix entries with degree <= max_degree; complex
// Gaussian coefficients.
FourierCoefficients random_band_limited(const CompactGroup& G, double max_degree,
                                        std::mt19937_64& rng);

// Values of pi_lambda at all nodes of a rule, cached for repeated integration.
class NodeCache {
 public:
  NodeCache(const QuadratureRule& rule, std::vector<Irrep> irreps);
  const QuadratureRule& rule() const { return *rule_; }
  const std::vector<Irrep>& irreps() const { return irreps_; }
  // Index of an irrep label in irreps(), or -1.
  int index_of(const IrrepLabel& label) const;
  const CMatrix& value(std::size_t node, std::size_t irrep) const {
    return values_[node * irreps_.size() + irrep];
  }
  // f at every node; throws DomainError if f has an irrep outside the cache.
  std::vector<Complex> evaluate(const FourierCoefficients& f) const;

 private:
  const QuadratureRule* rule_;
  std::vector<Irrep> irreps_;
  std::vector<CMatrix> values_;
};

}  // namespace heatlab
