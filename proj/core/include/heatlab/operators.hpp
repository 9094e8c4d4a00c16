#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "heatlab/fock.hpp"
#include "heatlab/transforms.hpp"

namespace heatlab {

enum class Space { position, bargmann, fock };

struct CheckReport {
  double max_residual = 0.0;  // relative unless noted
  double tolerance = 0.0;
  double tail = 0.0;
  std::size_t cases = 0;
  bool pass = false;
};

// L^2(K, rho_t) with states given as band-limited Fourier data. Inner
// products and creators are evaluated on a quadrature rule fine enough for
// states of degree <= max_degree.
class PositionRealization {
 public:
  PositionRealization(CompactGroup G, double t, double max_degree, int extra_exactness = 8);

  const CompactGroup& group() const { return group_; }
  double t() const { return t_; }
  const QuadratureRule& rule() const { return *rule_; }

  FourierCoefficients annihilate(int k, const FourierCoefficients& u) const;
  // a_k^* u = -X_k u - (X_k rho_t / rho_t) u at the quadrature nodes.
  std::vector<Complex> create(int k, const FourierCoefficients& u) const;
  std::vector<Complex> values(const FourierCoefficients& u) const;
  // -(X_j X_k log rho_t) at the nodes.
  std::vector<double> minus_log_hessian(int j, int k) const;
  Complex inner(std::span<const Complex> u, std::span<const Complex> v) const;
  Complex inner(const FourierCoefficients& u, const FourierCoefficients& v) const;

 private:
  CompactGroup group_;
  double t_;
  std::shared_ptr<const QuadratureRule> rule_;
  std::shared_ptr<const NodeCache> cache_;  // irreps of degree <= max_degree
  std::vector<double> rho_;                 // per node
  std::vector<std::vector<double>> drho_;   // [k][node]
  std::vector<std::vector<double>> ddrho_;  // [j*d+k][node], X_j X_k rho
};

// HL^2(K_C, mu_t) on a torus, states given as holomorphic Fourier data.
class BargmannTorusRealization {
 public:
  BargmannTorusRealization(CompactGroup G, double t);
  const CompactGroup& group() const { return group_; }
  double t() const { return t_; }
  FourierCoefficients annihilate(int k, const FourierCoefficients& F) const;
  Complex inner(const FourierCoefficients& F, const FourierCoefficients& G) const;
  // <G, a_k^* F> = <G, phi_k F> with phi_k = -(d/d zbar_k) log mu_t (Toeplitz form).
  Complex create_pairing(int k, const FourierCoefficients& G, const FourierCoefficients& F) const;

 private:
  CompactGroup group_;
  double t_;
};

// The truncated Fock space: a_X xi (alpha) = xi(alpha X) lowers the
// truncation by one; a_X^* is its adjoint, i.e. (m/t) delta_{k_m, X}
// eta_{m-1} (X appended last) followed by the weighted projection onto the
// relation-satisfying subspace of the target degree.
class FockRealization {
 public:
  FockRealization(CompactGroup G, double t, int N);
  const CompactGroup& group() const { return group_; }
  double t() const { return t_; }
  int N() const { return N_; }
  const FockSpace& space(int n) const { return spaces_.at(n); }

  TensorFunctional annihilate(int k, const TensorFunctional& xi) const;
  // a_Z for Z = sum_l z_l X_l.
  TensorFunctional annihilate(std::span<const double> Z, const TensorFunctional& xi) const;
  TensorFunctional create(int k, const TensorFunctional& eta, int target) const;
  TensorFunctional create(std::span<const double> Z, const TensorFunctional& eta, int target) const;
  TensorFunctional vacuum(int n) const { return TensorFunctional::vacuum(group_, t_, n); }
  // A random element of the degree-n subspace.
  TensorFunctional random_state(int n, std::mt19937_64& rng) const;

 private:
  CompactGroup group_;
  double t_;
  int N_;
  std::vector<FockSpace> spaces_;
};

CheckReport adjointness_check(const FockRealization& r, std::span<const TensorFunctional> states,
                              double tol = 1e-9);
CheckReport adjointness_check(const PositionRealization& r,
                              std::span<const FourierCoefficients> states, double tol = 1e-8);
CheckReport adjointness_check(const BargmannTorusRealization& r,
                              std::span<const FourierCoefficients> states, double tol = 1e-8);

// [a_j, a_k] = a_{[X_j,X_k]} on degree-N states, and the dual relation
// [a_j^*, a_k^*] = -a_{[X_j,X_k]}^* on degree-(N-2) states.
CheckReport commutator_check(const FockRealization& r, int j, int k,
                             std::span<const TensorFunctional> states, double tol = 1e-9);
CheckReport commutator_check(const PositionRealization& r, int j, int k,
                             std::span<const FourierCoefficients> states, double tol = 1e-9);

// [a_j, a_k^*] = (1/t) <X_j, X_k> on abelian groups. Nonabelian groups throw
// UnsupportedError.
CheckReport ccr_check_abelian(const FockRealization& r, int j, int k,
                              std::span<const TensorFunctional> states, double tol = 1e-9);
// The position realization on a torus throws UnsupportedError: there
// -X_j X_k log rho_t is not constant (the relation is a statement about R^d;
// see euclid.hpp for that realization).
CheckReport ccr_check_abelian(const PositionRealization& r, int j, int k,
                              std::span<const FourierCoefficients> states, double tol = 1e-9);

// <v, [a_j, a_k^*] u> computed weakly from creators and annihilators versus
// <v, (-[X_j, X_k] - X_j X_k log rho_t) u>.
CheckReport substitute_identity_check(const PositionRealization& r, int j, int k,
                                      std::span<const FourierCoefficients> states, double tol = 1e-6);

// <u, v> = sum_{n<=N} (t^n/n!) sum_k <u, a*_{k_1}..a*_{k_n} psi_0><psi_0, a_{k_n}..a_{k_1} v>
// on degree-N states.
CheckReport resolution_of_identity_check(const FockRealization& r,
                                         std::span<const std::pair<TensorFunctional, TensorFunctional>> pairs,
                                         double tol = 1e-6);
// Same sum for Hermite coefficients of band-limited f, g against the
// position inner product; tail from the Fock tails of f and g.
CheckReport resolution_of_identity_check(const FockRealization& r,
                                         std::span<const std::pair<FourierCoefficients, FourierCoefficients>> pairs,
                                         double tol = 1e-6);

// taylor_map(X_k f) = a_k taylor_map(f) and taylor_map(1) = vacuum.
CheckReport intertwiner_check(double t, int N, std::span<const FourierCoefficients> states,
                              double tol = 1e-9);

// Dimension of the joint kernel of all a_k on the degree-N subspace (should be 1).
Eigen::Index vacuum_kernel_dimension(const FockRealization& r);

}  // namespace heatlab
