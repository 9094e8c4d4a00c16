#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "heatlab/fourier.hpp"
#include "heatlab/group.hpp"

namespace testing {

// Hand-rolled generators for property tests. Every case is reproducible
// from (seed, case index), which is printed on failure.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  heatlab::Complex complex_normal() { return {normal(), normal()}; }

  // One of the small groups the library is meant for.
  heatlab::CompactGroup group() {
    switch (integer(0, 4)) {
      case 0: return heatlab::CompactGroup::torus(1);
      case 1: return heatlab::CompactGroup::torus(2);
      case 2: return heatlab::CompactGroup::su2();
      case 3: {
        const heatlab::CompactGroup p[] = {heatlab::CompactGroup::torus(1), heatlab::CompactGroup::su2()};
        return heatlab::CompactGroup::product(p);
      }
      default: {
        const heatlab::CompactGroup p[] = {heatlab::CompactGroup::su2(), heatlab::CompactGroup::su2()};
        return heatlab::CompactGroup::product(p);
      }
    }
  }

  std::vector<double> algebra(const heatlab::CompactGroup& G, double scale) {
    std::vector<double> Y(G.dim());
    for (auto& y : Y) y = scale * normal();
    return Y;
  }

  heatlab::FourierCoefficients function(const heatlab::CompactGroup& G, double max_degree) {
    return heatlab::random_band_limited(G, max_degree, rng_);
  }

  // Random irrep label with degree <= max_degree (2j for su2 atoms).
  heatlab::IrrepLabel label(const heatlab::CompactGroup& G, int max_degree) {
    heatlab::IrrepLabel l;
    for (const auto& f : G.factors()) {
      if (f.kind == heatlab::FactorKind::torus) {
        for (int k = 0; k < f.dim; ++k) l.push_back(integer(-max_degree, max_degree));
      } else {
        l.push_back(integer(0, 2 * max_degree));
      }
    }
    return l;
  }

 private:
  std::mt19937_64 rng_;
};

// Runs body(gen) for `cases` independent cases; each case gets its own seed.
inline void for_all(const std::string& name, int cases, std::uint64_t seed,
                    const std::function<void(Gen&)>& body) {
  for (int i = 0; i < cases; ++i) {
    const std::uint64_t s = seed * 1000003ull + static_cast<std::uint64_t>(i);
    Gen g(s);
    CAPTURE(name);
    CAPTURE(i);
    CAPTURE(s);
    body(g);
  }
}

inline double rel(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double rel(heatlab::Complex a, heatlab::Complex b, double scale) {
  return std::abs(a - b) / std::max(scale, 1e-300);
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
