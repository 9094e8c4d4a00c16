#include "heatlab/quadrature.hpp"

#include <cmath>

#include "heatlab/gauss.hpp"

namespace heatlab {

namespace {

struct FactorRule {
  std::vector<std::vector<double>> angles;  // torus factor
  std::vector<Eigen::Matrix2cd> mats;       // su2 factor
  std::vector<double> weights;
};

FactorRule torus_rule(int d, int E) {
  const int M = 2 * E + 1;
  FactorRule r;
  std::vector<int> idx(d, 0);
  const double w = std::pow(1.0 / M, d);
  while (true) {
    std::vector<double> a(d);
    for (int k = 0; k < d; ++k) a[k] = 2.0 * kPi * idx[k] / M;
    r.angles.push_back(std::move(a));
    r.weights.push_back(w);
    int k = 0;
    while (k < d && idx[k] == M - 1) idx[k++] = 0;
    if (k == d) break;
    ++idx[k];
  }
  return r;
}

Eigen::Matrix2cd euler(double a, double b, double g) {
  const Complex ea = std::exp(Complex(0, -a / 2)), eg = std::exp(Complex(0, -g / 2));
  Eigen::Matrix2cd A, B, C;
  A << ea, 0.0, 0.0, std::conj(ea);
  B << std::cos(b / 2), -std::sin(b / 2), std::sin(b / 2), std::cos(b / 2);
  C << eg, 0.0, 0.0, std::conj(eg);
  return A * B * C;
}

FactorRule su2_rule(int E) {
  const int Na = 2 * E + 1, Ng = 4 * E + 1;
  const GaussRule gl = gauss_legendre(E + 1);
  FactorRule r;
  for (int i = 0; i < Na; ++i)
    for (std::size_t k = 0; k < gl.nodes.size(); ++k)
      for (int j = 0; j < Ng; ++j) {
        const double a = 2.0 * kPi * i / Na;
        const double g = 4.0 * kPi * j / Ng;
        const double b = std::acos(gl.nodes[k]);
        r.mats.push_back(euler(a, b, g));
        r.weights.push_back(gl.weights[k] / 2.0 / Na / Ng);
      }
  return r;
}

}  // namespace

int exactness_for_degree(double degree) {
  return std::max(1, static_cast<int>(std::ceil(degree / 2.0 - 1e-12)));
}

QuadratureRule haar_quadrature(const CompactGroup& G, int exactness,
                               const QuadratureOptions& options) {
  if (exactness < 1) throw DomainError("haar_quadrature: exactness must be >= 1");
  // Size check before building anything.
  double count = 1.0;
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus)
      count *= std::pow(2.0 * exactness + 1.0, f.dim);
    else
      count *= (2.0 * exactness + 1.0) * (4.0 * exactness + 1.0) * (exactness + 1.0);
  }
  if (count > static_cast<double>(options.max_nodes))
    throw ResourceError("haar_quadrature: " + std::to_string(static_cast<long long>(count)) +
                        " nodes exceed the cap of " + std::to_string(options.max_nodes));

  std::vector<FactorRule> rules;
  for (const auto& f : G.factors())
    rules.push_back(f.kind == FactorKind::torus ? torus_rule(f.dim, exactness)
                                                : su2_rule(exactness));

  QuadratureRule rule;
  rule.exactness = exactness;
  rule.nodes.reserve(static_cast<std::size_t>(count));
  rule.weights.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> idx(rules.size(), 0);
  while (true) {
    GroupPoint x = identity(G);
    double w = 1.0;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const Factor& f = G.factors()[i];
      if (f.kind == FactorKind::torus) {
        for (int k = 0; k < f.dim; ++k) x.angles[f.slot + k] = rules[i].angles[idx[i]][k];
      } else {
        x.su2[f.slot] = rules[i].mats[idx[i]];
      }
      w *= rules[i].weights[idx[i]];
    }
    rule.nodes.push_back(std::move(x));
    rule.weights.push_back(w);
    std::size_t i = 0;
    while (i < rules.size() && idx[i] + 1 == rules[i].weights.size()) idx[i++] = 0;
    if (i == rules.size()) break;
    ++idx[i];
  }
  return rule;
}

}  // namespace heatlab
