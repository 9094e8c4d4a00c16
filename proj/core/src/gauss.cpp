#include "heatlab/gauss.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "heatlab/common.hpp"

namespace heatlab {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

// Golub-Welsch on the Jacobi matrix of the Hermite recurrence.
GaussRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("gauss_hermite: n must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::sqrt(kPi);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v * v;
  }
  // Symmetrize to remove eigen-solver round-off.
  for (int k = 0; k < n / 2; ++k) {
    const double x = 0.5 * (rule.nodes[n - 1 - k] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[n - 1 - k] + rule.weights[k]);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.weights[k] = rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace heatlab
