#pragma once

#include <vector>

namespace heatlab {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

// n-point Gauss-Hermite rule for the weight exp(-x^2) on the real line.
GaussRule gauss_hermite(int n);

}  // namespace heatlab
