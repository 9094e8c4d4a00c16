#pragma once

#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heatlab/heat.hpp"

namespace heatlab {

// Degree-truncated functional on the tensor algebra: xi_n(k_1..k_n) for
// n = 0..N, stored flat and row-major (k_1 slowest).
struct TensorFunctional {
  CompactGroup group;
  double t = 1.0;
  int N = 0;
  std::vector<CVector> components;

  static TensorFunctional zero(const CompactGroup& G, double t, int N);
  static TensorFunctional vacuum(const CompactGroup& G, double t, int N);

  int dim() const { return group.dim(); }
  Complex at(std::span<const int> ks) const;
  Complex& at(std::span<const int> ks);
  // Drops degrees above M (M <= N).
  TensorFunctional truncated(int M) const;
  TensorFunctional operator+(const TensorFunctional& o) const;
  TensorFunctional operator-(const TensorFunctional& o) const;
  TensorFunctional scaled(Complex c) const;
};

// {"group": name, "t":..., "N":..., "components": {"0": [[re, im], ...], ...}}
nlohmann::json to_json(const TensorFunctional& xi);
TensorFunctional tensor_from_json(const nlohmann::json& j);

// sum_n (t^n/n!) sum_k conj(a_n(k)) b_n(k), over the common degrees.
Complex fock_inner(const TensorFunctional& a, const TensorFunctional& b);

struct FockNorm {
  double value = 0.0;  // squared norm
  double tail = 0.0;   // bound on the omitted degrees
  int terms = 0;       // highest degree included
};

// Squared norm of the stored degrees; tail is zero (nothing is known beyond N).
FockNorm fock_norm(const TensorFunctional& xi);

// Entries alpha_{k_1..k_n} = (X_{k_1}...X_{k_n} e^{t Delta/2} f)(e), plus the
// heated Fourier data they came from (needed for tails beyond N).
struct HermiteCoefficients {
  TensorFunctional xi;
  FourierCoefficients heated;
};

struct TaylorOptions {
  std::size_t max_entries = 1u << 22;  // cap on sum_n d^n
};

HermiteCoefficients taylor_map(const FourierCoefficients& f, double t, int N,
                               const TaylorOptions& options = {});

// ||xi_n||_n^2 for n = 0..n_max, from transfer matrices
// T = sum_k pi_lambda(X_k) (x) conj pi_mu(X_k); no d^n enumeration.
std::vector<double> hermite_component_norms(const FourierCoefficients& heated, int n_max);
// Rigorous bound on sum_{n > N} (t^n/n!) ||xi_n||^2 from
// ||xi_n|| <= sum_lambda d^{3/2} ||A_lambda|| c_lambda^{n/2}.
double hermite_tail(const FourierCoefficients& heated, double t, int N);
// Smallest N <= cap with hermite_tail <= tail_tol; throws TruncationError.
int choose_hermite_truncation(const FourierCoefficients& heated, double t, double tail_tol,
                              int cap = 1000);
// Squared Fock norm through degree `terms` (transfer matrices) with tail.
FockNorm fock_norm(const HermiteCoefficients& h, int terms);

// Max over degrees n <= N of the J-relation residual, relative to the size
// of the entries involved.
double ideal_residual(const TensorFunctional& xi);
void check_ideal(const TensorFunctional& xi, double tol = 1e-10);

struct HermiteIsometryReport {
  double position = 0.0;  // ||f||^2 in L^2(rho_t)
  double fock = 0.0;      // truncated Fock norm
  double tail = 0.0;      // Fock tail plus heat-kernel truncation
  double rel_err = 0.0;
  double dense_mismatch = 0.0;  // dense tensors vs transfer matrices, low degrees
  int N = 0;
  bool pass = false;
};

// N is the Fock truncation; tails above tail_tol throw TruncationError. The
// low degrees (up to dense_N) are also summed entry by entry as a cross-check.
HermiteIsometryReport hermite_isometry_check(const FourierCoefficients& f, double t, int N,
                                             double tol = 1e-6, double tail_tol = 1e-8,
                                             int dense_N = 4);

struct DoublingReport {
  double direct = 0.0;       // (e^{t Delta/2} |f|^2)(e) from Fourier data of |f|^2
  double series = 0.0;       // sum_{n<=N} t^n/n! ||xi_n||^2
  double exponential = 0.0;  // sum d d tr((A (x) conj B) exp(t T)), the summed series
  double tail = 0.0;
  int N = 0;
};

DoublingReport doubling_identity_check(const FourierCoefficients& f, double t,
                                       double tail_tol = 1e-12);

struct InverseTaylorBudget {
  int max_two_j = 12;     // largest 2j tried per su2 factor
  double tolerance = 1e-8;
};

// Least-squares recovery of f from its Hermite coefficients. Groups with a
// torus factor are rejected: there the Taylor map is not onto.
FourierCoefficients inverse_taylor(const TensorFunctional& xi, const InverseTaylorBudget& budget = {});

// (-1)^n (X_{k_n} ... X_{k_1} rho_t)(x) / rho_t(x).
Complex hermite_function(const HeatKernel& h, std::span<const int> ks, const GroupPoint& x);

// Degree-<=N truncation of the dual of the enveloping algebra: the subspace
// of tensors satisfying the J-relations, with the t^n/n! weighted inner product.
class FockSpace {
 public:
  FockSpace(CompactGroup G, double t, int N);

  const CompactGroup& group() const { return group_; }
  double t() const { return t_; }
  int N() const { return N_; }
  Eigen::Index size() const { return size_; }
  Eigen::Index offset(int n) const { return offsets_[n]; }
  double weight(int n) const { return weights_[n]; }
  // Dimension of the relation-satisfying subspace.
  Eigen::Index dimension() const { return basis_.cols(); }

  CVector flatten(const TensorFunctional& xi) const;
  TensorFunctional unflatten(const CVector& v) const;
  const CMatrix& relations() const { return relations_; }
  // Columns: a basis of the subspace, orthonormal in the weighted product.
  const CMatrix& basis() const { return basis_; }
  CVector project(const CVector& v) const;
  TensorFunctional project(const TensorFunctional& xi) const;

 private:
  CompactGroup group_;
  double t_;
  int N_;
  Eigen::Index size_ = 0;
  std::vector<Eigen::Index> offsets_;
  std::vector<double> weights_;
  RVector diag_;  // weight per flat entry
  CMatrix relations_;
  CMatrix basis_;
};

}  // namespace heatlab
