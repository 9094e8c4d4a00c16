#include "heatlab/irrep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <unsupported/Eigen/KroneckerProduct>

namespace heatlab {

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double binomial(int n, int k) {
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

Complex ipow(Complex z, int n) {
  Complex r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

// Number of label entries a factor consumes.
int label_width(const Factor& f) { return f.kind == FactorKind::torus ? f.dim : 1; }

int label_length(const CompactGroup& G) {
  int n = 0;
  for (const auto& f : G.factors()) n += label_width(f);
  return n;
}

}  // namespace

CMatrix su2_rep_matrix(int two_j, const Eigen::Matrix2cd& g) {
  const int n = two_j;
  const Complex a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  CMatrix M = CMatrix::Zero(n + 1, n + 1);
  std::vector<Complex> p1, p2;
  for (int m = 0; m <= n; ++m) {
    const int p = n - m, q = m;
    // (a u + c v)^p (b u + d v)^q, coefficients indexed by the power of v.
    p1.assign(p + 1, 0.0);
    p2.assign(q + 1, 0.0);
    for (int r = 0; r <= p; ++r)
      p1[r] = binomial(p, r) * ipow(c, r) * ipow(a, p - r);
    for (int s = 0; s <= q; ++s)
      p2[s] = binomial(q, s) * ipow(d, s) * ipow(b, q - s);
    for (int r = 0; r <= p; ++r)
      for (int s = 0; s <= q; ++s) {
        const int mp = r + s;
        const double norm = std::exp(0.5 * (log_factorial(n - mp) + log_factorial(mp) -
                                            log_factorial(p) - log_factorial(q)));
        M(mp, m) += p1[r] * p2[s] * norm;
      }
  }
  return M;
}

CMatrix su2_rep_algebra(int two_j, const Eigen::Matrix2cd& X) {
  const int n = two_j;
  CMatrix M = CMatrix::Zero(n + 1, n + 1);
  for (int m = 0; m <= n; ++m) {
    const int p = n - m, q = m;
    M(m, m) += static_cast<double>(p) * X(0, 0) + static_cast<double>(q) * X(1, 1);
    if (p > 0) M(m + 1, m) += std::sqrt(static_cast<double>(p) * (q + 1)) * X(1, 0);
    if (q > 0) M(m - 1, m) += std::sqrt(static_cast<double>(q) * (p + 1)) * X(0, 1);
  }
  return M;
}

double su2_casimir(int two_j) {
  // (pi(X)^2)(0,0) only involves column 0 and row 0 of the derivation
  // action on u^{2j}: entries 2j X00, sqrt(2j) X10 and sqrt(2j) X01.
  const double n = two_j;
  double c = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Matrix2cd& X = su2_basis(k);
    const Complex s = n * X(0, 0) * n * X(0, 0) + n * X(0, 1) * X(1, 0);
    c -= s.real();
  }
  return c;
}

Complex su2_character(int two_j, Complex trace) {
  Complex u0 = 1.0, u1 = trace;
  if (two_j == 0) return u0;
  for (int k = 1; k < two_j; ++k) {
    const Complex u2 = trace * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

Irrep::Irrep(const CompactGroup& G, IrrepLabel label) {
  if (static_cast<int>(label.size()) != label_length(G))
    throw DomainError("irrep label has wrong length for " + G.name());
  auto data = std::make_shared<Data>();
  data->group = G;
  data->label = std::move(label);

  // Per-factor generator blocks, then Kronecker-embed.
  std::vector<std::vector<CMatrix>> blocks;
  std::vector<int> dims;
  std::size_t pos = 0;
  double degree = 0.0;
  for (const auto& f : G.factors()) {
    std::vector<CMatrix> gens;
    if (f.kind == FactorKind::torus) {
      for (int k = 0; k < f.dim; ++k) {
        const int nk = data->label[pos + k];
        CMatrix m(1, 1);
        m(0, 0) = Complex(0.0, static_cast<double>(nk));
        gens.push_back(m);
        degree = std::max(degree, std::abs(static_cast<double>(nk)));
      }
      dims.push_back(1);
    } else {
      const int two_j = data->label[pos];
      if (two_j < 0) throw DomainError("negative spin label");
      for (int k = 0; k < 3; ++k) gens.push_back(su2_rep_algebra(two_j, su2_basis(k)));
      dims.push_back(two_j + 1);
      degree = std::max(degree, two_j / 2.0);
    }
    blocks.push_back(std::move(gens));
    pos += label_width(f);
  }
  int total = 1;
  for (int d : dims) total *= d;
  data->dim = total;
  data->degree = degree;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    int left = 1, right = 1;
    for (std::size_t k = 0; k < i; ++k) left *= dims[k];
    for (std::size_t k = i + 1; k < dims.size(); ++k) right *= dims[k];
    for (const auto& g : blocks[i]) {
      CMatrix full = kron(kron(CMatrix::Identity(left, left), g), CMatrix::Identity(right, right));
      data->generators.push_back(std::move(full));
    }
  }
  CMatrix cas = CMatrix::Zero(total, total);
  for (const auto& g : data->generators) cas -= g * g;
  data->casimir = cas(0, 0).real();
  // Gershgorin row sums: an upper bound on each operator norm.
  double bound = 0.0;
  for (const auto& g : data->generators)
    bound = std::max(bound, g.cwiseAbs().rowwise().sum().maxCoeff());
  data->generator_bound = bound;
  data_ = std::move(data);
}

CMatrix Irrep::evaluate(const GroupPoint& x) const {
  return evaluate(complexify(x));
}

CMatrix Irrep::evaluate(const ComplexGroupPoint& g) const {
  const auto& G = data_->group;
  CMatrix result = CMatrix::Identity(1, 1);
  std::size_t pos = 0;
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      Complex phase = 1.0;
      for (int k = 0; k < f.dim; ++k)
        phase *= std::exp(kI * static_cast<double>(data_->label[pos + k]) * g.angles[f.slot + k]);
      result *= phase;
    } else {
      result = kron(result, su2_rep_matrix(data_->label[pos], g.sl2[f.slot]));
    }
    pos += label_width(f);
  }
  return result;
}

Complex Irrep::character(const ComplexGroupPoint& g) const {
  const auto& G = data_->group;
  Complex chi = 1.0;
  std::size_t pos = 0;
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      Complex s = 0.0;
      for (int k = 0; k < f.dim; ++k)
        s += static_cast<double>(data_->label[pos + k]) * g.angles[f.slot + k];
      chi *= std::exp(kI * s);
    } else {
      chi *= su2_character(data_->label[pos], g.sl2[f.slot].trace());
    }
    pos += label_width(f);
  }
  return chi;
}

Complex Irrep::character(const GroupPoint& x) const { return character(complexify(x)); }

CMatrix Irrep::algebra(std::span<const double> Y) const {
  CMatrix A = CMatrix::Zero(dim(), dim());
  for (int k = 0; k < static_cast<int>(Y.size()); ++k) A += Y[k] * data_->generators[k];
  return A;
}

std::string Irrep::name() const {
  std::string s;
  const auto& G = data_->group;
  std::size_t pos = 0;
  for (const auto& f : G.factors()) {
    if (!s.empty()) s += "x";
    if (f.kind == FactorKind::torus) {
      s += "n(";
      for (int k = 0; k < f.dim; ++k) {
        if (k) s += ",";
        s += std::to_string(data_->label[pos + k]);
      }
      s += ")";
    } else {
      const int tj = data_->label[pos];
      s += "j=" + (tj % 2 == 0 ? std::to_string(tj / 2) : std::to_string(tj) + "/2");
    }
    pos += label_width(f);
  }
  return s;
}

namespace {

// Enumerates per-factor label pieces; each piece has a Casimir and degree.
struct Piece {
  std::vector<int> label;
  double casimir;
  double degree;
};

std::vector<Piece> factor_pieces(const Factor& f, double cas_cut, double deg_cut) {
  std::vector<Piece> out;
  if (f.kind == FactorKind::torus) {
    // Each |n_k| <= min(sqrt(cas_cut), deg_cut).
    const int r = static_cast<int>(std::floor(std::min(std::sqrt(std::max(cas_cut, 0.0)), deg_cut) + 1e-12));
    std::vector<int> n(f.dim, -r);
    while (true) {
      double c = 0.0, dg = 0.0;
      for (int v : n) {
        c += static_cast<double>(v) * v;
        dg = std::max(dg, std::abs(static_cast<double>(v)));
      }
      if (c <= cas_cut + 1e-9 && dg <= deg_cut + 1e-12) out.push_back({n, c, dg});
      int k = 0;
      while (k < f.dim && n[k] == r) n[k++] = -r;
      if (k == f.dim) break;
      ++n[k];
    }
  } else {
    for (int two_j = 0;; ++two_j) {
      if (two_j / 2.0 > deg_cut + 1e-12) break;
      const double c = su2_casimir(two_j);
      if (c > cas_cut + 1e-9) break;
      out.push_back({{two_j}, c, two_j / 2.0});
    }
  }
  return out;
}

std::vector<Irrep> enumerate(const CompactGroup& G, double cas_cut, double deg_cut) {
  std::vector<std::vector<Piece>> per;
  for (const auto& f : G.factors()) per.push_back(factor_pieces(f, cas_cut, deg_cut));
  std::vector<Irrep> out;
  std::vector<int> label;
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double cas) {
    if (i == per.size()) {
      out.emplace_back(G, label);
      return;
    }
    for (const auto& p : per[i]) {
      if (cas + p.casimir > cas_cut + 1e-9) continue;
      const std::size_t mark = label.size();
      label.insert(label.end(), p.label.begin(), p.label.end());
      rec(i + 1, cas + p.casimir);
      label.resize(mark);
    }
  };
  rec(0, 0.0);
  return out;
}

}  // namespace

std::vector<Irrep> irreps_up_to(const CompactGroup& G, double cutoff) {
  if (!(cutoff >= 0.0)) throw DomainError("irreps_up_to: cutoff must be nonnegative");
  auto out = enumerate(G, cutoff, 1e300);
  std::stable_sort(out.begin(), out.end(), [](const Irrep& a, const Irrep& b) {
    if (a.casimir() != b.casimir()) return a.casimir() < b.casimir();
    return a.label() < b.label();
  });
  return out;
}

std::vector<Irrep> irreps_with_degree(const CompactGroup& G, double max_degree) {
  auto out = enumerate(G, 1e300, max_degree);
  std::sort(out.begin(), out.end(),
            [](const Irrep& a, const Irrep& b) { return a.label() < b.label(); });
  return out;
}

void validate_irrep(const Irrep& pi, double tol) {
  const auto& G = pi.group();
  const int d = G.dim();
  const int n = pi.dim();
  for (int j = 0; j < d; ++j) {
    const CMatrix& A = pi.generator(j);
    if ((A + A.adjoint()).norm() > tol) throw InvariantError(pi.name() + ": generator not skew-Hermitian");
    for (int k = 0; k < d; ++k) {
      CMatrix lhs = A * pi.generator(k) - pi.generator(k) * A;
      for (int l = 0; l < d; ++l) lhs -= G.structure_constant(l, j, k) * pi.generator(l);
      if (lhs.norm() > tol * std::max(1.0, pi.casimir()))
        throw InvariantError(pi.name() + ": generators violate the commutation relations");
    }
  }
  CMatrix cas = CMatrix::Zero(n, n);
  for (const auto& g : pi.generators()) cas -= g * g;
  if ((cas - pi.casimir() * CMatrix::Identity(n, n)).norm() > tol * std::max(1.0, pi.casimir()))
    throw InvariantError(pi.name() + ": Casimir is not scalar");
}

}  // namespace heatlab
