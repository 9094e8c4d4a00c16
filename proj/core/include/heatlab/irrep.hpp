#pragma once

#include <memory>
#include <string>
#include <vector>

#include "heatlab/group.hpp"

namespace heatlab {

// Irrep labels are concatenated per factor: a torus(d) factor contributes its
// integer vector n, an su2 factor contributes 2j.
using IrrepLabel = std::vector<int>;

class Irrep {
 public:
  Irrep() = default;
  Irrep(const CompactGroup& G, IrrepLabel label);

  const IrrepLabel& label() const { return data_->label; }
  int dim() const { return data_->dim; }
  // Scalar by which -sum_k pi(X_k)^2 acts, read off the generator matrices.
  double casimir() const { return data_->casimir; }
  const CMatrix& generator(int k) const { return data_->generators[k]; }
  const std::vector<CMatrix>& generators() const { return data_->generators; }
  // Upper bound on the operator norms of the basis generators.
  double generator_bound() const { return data_->generator_bound; }
  // Quadrature degree: max over factors of |n_k| (torus) and j (su2).
  double degree() const { return data_->degree; }
  const CompactGroup& group() const { return data_->group; }

  CMatrix evaluate(const GroupPoint& x) const;
  CMatrix evaluate(const ComplexGroupPoint& g) const;
  Complex character(const GroupPoint& x) const;
  Complex character(const ComplexGroupPoint& g) const;
  // pi(sum_k Y_k X_k)
  CMatrix algebra(std::span<const double> Y) const;

  std::string name() const;

 private:
  struct Data {
    CompactGroup group;
    IrrepLabel label;
    int dim = 1;
    double casimir = 0.0;
    double generator_bound = 0.0;
    double degree = 0.0;
    std::vector<CMatrix> generators;
  };
  std::shared_ptr<const Data> data_;
};

// All irreps with Casimir <= cutoff, sorted by (Casimir, label).
std::vector<Irrep> irreps_up_to(const CompactGroup& G, double cutoff);
// All irreps with degree <= max_degree (torus: max|n_k|, su2: j), sorted by label.
std::vector<Irrep> irreps_with_degree(const CompactGroup& G, double max_degree);

// Spin-j representation of a 2x2 matrix on the symmetric-power model with
// orthonormal basis u^{2j-m} v^m / sqrt((2j-m)! m!). Holomorphic in g.
CMatrix su2_rep_matrix(int two_j, const Eigen::Matrix2cd& g);
// The induced Lie-algebra representation (derivation on polynomials).
CMatrix su2_rep_algebra(int two_j, const Eigen::Matrix2cd& X);
// Character of the spin-j representation, via the Chebyshev recursion in tr g.
Complex su2_character(int two_j, Complex trace);

// -sum_k pi_j(X_k)^2 read off at the (0,0) entry; O(2j) work.
double su2_casimir(int two_j);

// Throws InvariantError if commutation, Casimir or skew-Hermitian checks fail.
void validate_irrep(const Irrep& pi, double tol = 1e-12);

}  // namespace heatlab
