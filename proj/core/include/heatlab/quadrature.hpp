#pragma once

#include <cstddef>
#include <vector>

#include "heatlab/group.hpp"

namespace heatlab {

// Normalized-Haar quadrature. A rule of exactness E integrates exactly every
// matrix entry of degree <= 2E, so products of two entries of degree <= E
// (Schur orthogonality) come out exact.
struct QuadratureRule {
  std::vector<GroupPoint> nodes;
  std::vector<double> weights;
  int exactness = 0;

  std::size_t size() const { return nodes.size(); }
};

struct QuadratureOptions {
  std::size_t max_nodes = 4'000'000;
};

// Torus: 2E+1 uniform points per circle. SU(2): Euler angles
// U = e^{-i a s3/2} e^{-i b s2/2} e^{-i g s3/2} with a uniform on [0,2pi)
// (2E+1 points), g uniform on [0,4pi) (4E+1 points) and E+1 Gauss-Legendre
// points in cos b. Products use the tensor rule.
QuadratureRule haar_quadrature(const CompactGroup& G, int exactness,
                               const QuadratureOptions& options = {});

// Smallest exactness whose rule integrates entries of the given degree.
int exactness_for_degree(double degree);

}  // namespace heatlab
