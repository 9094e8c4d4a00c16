#pragma once

#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heatlab/common.hpp"

namespace heatlab {

enum class FactorKind { torus, su2 };

// One factor of a product group. A torus(d) factor owns d consecutive
// angles; an su2 factor owns one matrix slot.
struct Factor {
  FactorKind kind;
  int dim;     // dimension of the factor's Lie algebra
  int offset;  // first basis index in the product algebra
  int slot;    // first index into GroupPoint::angles, or index into GroupPoint::su2
};

struct GroupPoint {
  std::vector<double> angles;         // torus coordinates in [0, 2pi)
  std::vector<Eigen::Matrix2cd> su2;  // unitary, det 1
};

struct ComplexGroupPoint {
  std::vector<Complex> angles;        // z = theta + iY, real part mod 2pi
  std::vector<Eigen::Matrix2cd> sl2;  // det 1
};

class CompactGroup {
 public:
  static CompactGroup torus(int d);
  static CompactGroup su2();
  static CompactGroup product(std::span<const CompactGroup> parts);

  int dim() const { return dim_; }
  const std::vector<Factor>& factors() const { return factors_; }
  int angle_count() const { return angle_count_; }
  int su2_count() const { return su2_count_; }
  bool is_abelian() const { return su2_count_ == 0; }
  bool has_torus_factor() const { return angle_count_ > 0; }
  const std::vector<std::string>& basis_labels() const { return labels_; }
  const std::string& name() const { return name_; }

  // [X_j, X_k] = sum_l c(l, j, k) X_l.
  double structure_constant(int l, int j, int k) const {
    return c_[(static_cast<std::size_t>(l) * dim_ + j) * dim_ + k];
  }
  const std::vector<double>& structure_constants() const { return c_; }
  std::vector<double> bracket(std::span<const double> X, std::span<const double> Y) const;

  // Copy with replaced constants (layout c[(l*d + j)*d + k]). Used to
  // feed deliberately corrupted data through validate().
  CompactGroup with_structure_constants(std::vector<double> c) const;

  // Throws InvariantError on antisymmetry, Jacobi, Ad-invariance or
  // block-structure violations, and when an su2 block disagrees with su2_basis.
  void validate(double tol = 1e-12) const;

  // Index of the factor owning basis vector k.
  int factor_of_basis(int k) const { return basis_factor_[k]; }

  bool operator==(const CompactGroup& other) const {
    return name_ == other.name_ && c_ == other.c_;
  }

 private:
  void finish();

  std::vector<Factor> factors_;
  std::vector<std::string> labels_;
  std::vector<double> c_;
  std::vector<int> basis_factor_;
  std::string name_;
  int dim_ = 0;
  int angle_count_ = 0;
  int su2_count_ = 0;
};

// Parses "torus:d" / "su2" strings, or {"product": [...]} objects.
CompactGroup make_group(const nlohmann::json& spec);
CompactGroup make_group(std::string_view descriptor);
inline CompactGroup make_group(const char* descriptor) { return make_group(std::string_view(descriptor)); }

// Orthonormal basis of su(2) for <X,Y> = Re tr(X^* Y): X_k = i sigma_k / sqrt 2.
const Eigen::Matrix2cd& su2_basis(int k);
Eigen::Matrix2cd su2_algebra_element(std::span<const double> Y);
std::vector<double> su2_coordinates(const Eigen::Matrix2cd& X);
// Exponential of a traceless 2x2 matrix (closed form, A^2 = -det(A) I).
Eigen::Matrix2cd expm_traceless(const Eigen::Matrix2cd& A);

GroupPoint identity(const CompactGroup& G);
GroupPoint multiply(const CompactGroup& G, const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const CompactGroup& G, const GroupPoint& a);
GroupPoint exp_map(const CompactGroup& G, std::span<const double> Y);
// Principal logarithm; for su2 the rotation half-angle is taken in [0, pi].
std::vector<double> log_map(const CompactGroup& G, const GroupPoint& x);

ComplexGroupPoint complexify(const GroupPoint& x);
ComplexGroupPoint multiply(const CompactGroup& G, const ComplexGroupPoint& a,
                           const ComplexGroupPoint& b);
ComplexGroupPoint inverse(const CompactGroup& G, const ComplexGroupPoint& a);
// exp(X + iY) in K_C.
ComplexGroupPoint exp_map_complex(const CompactGroup& G, std::span<const double> X,
                                  std::span<const double> Y);
// x e^{iY}.
ComplexGroupPoint from_polar(const CompactGroup& G, const GroupPoint& x,
                             std::span<const double> Y);
// Antiholomorphic involution fixing K: z -> conj z, g -> (g^*)^{-1}.
ComplexGroupPoint conjugate_point(const CompactGroup& G, const ComplexGroupPoint& g);

struct Polar {
  GroupPoint x;
  std::vector<double> Y;
};
// g = x e^{iY} with x in K and Y in the Lie algebra.
Polar polar(const CompactGroup& G, const ComplexGroupPoint& g);

// Geodesic distance to the identity in the bi-invariant metric.
double distance_from_identity(const CompactGroup& G, const GroupPoint& x);
double distance(const CompactGroup& G, const GroupPoint& a, const GroupPoint& b);
bool approx_equal(const CompactGroup& G, const GroupPoint& a, const GroupPoint& b,
                  double tol = 1e-10);

// Haar-distributed random point.
GroupPoint haar_random(const CompactGroup& G, std::mt19937_64& rng);

// Rotation half-angle phi in [0, pi] of an SU(2) matrix (eigenvalues e^{+-i phi}).
double su2_half_angle(const Eigen::Matrix2cd& U);

// Throws InvariantError if a point is off the group by more than tol.
void check_point(const CompactGroup& G, const GroupPoint& x, double tol = 1e-12);
void check_point(const CompactGroup& G, const ComplexGroupPoint& g, double tol = 1e-12);

double wrap_angle(double theta);  // into [0, 2pi)
double centered_angle(double theta);  // into (-pi, pi]

}  // namespace heatlab
