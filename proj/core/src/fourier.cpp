#include "heatlab/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace heatlab {

namespace {

bool label_less(const FourierCoefficients::Component& c, const IrrepLabel& l) {
  return c.irrep.label() < l;
}

Complex trace_product(const CMatrix& a, const CMatrix& b) {
  // tr(a b) without forming the product.
  return (a.transpose().cwiseProduct(b)).sum();
}

}  // namespace

FourierCoefficients FourierCoefficients::constant(const CompactGroup& G, Complex c) {
  FourierCoefficients f(G);
  IrrepLabel zero;
  for (const auto& fac : G.factors())
    for (int k = 0; k < (fac.kind == FactorKind::torus ? fac.dim : 1); ++k) zero.push_back(0);
  CMatrix m(1, 1);
  m(0, 0) = c;
  f.add(zero, m);
  return f;
}

FourierCoefficients FourierCoefficients::matrix_entry(const CompactGroup& G,
                                                      const IrrepLabel& label, int row, int col) {
  const Irrep pi(G, label);
  if (row < 0 || col < 0 || row >= pi.dim() || col >= pi.dim())
    throw DomainError("matrix_entry: index out of range");
  CMatrix m = CMatrix::Zero(pi.dim(), pi.dim());
  m(col, row) = 1.0 / pi.dim();  // d tr(E_{col,row}/d pi) = pi_{row,col}
  FourierCoefficients f(G);
  f.add(pi, m);
  return f;
}

FourierCoefficients FourierCoefficients::character(const CompactGroup& G,
                                                   const IrrepLabel& label) {
  const Irrep pi(G, label);
  FourierCoefficients f(G);
  f.add(pi, CMatrix::Identity(pi.dim(), pi.dim()) / static_cast<double>(pi.dim()));
  return f;
}

void FourierCoefficients::add(const Irrep& pi, const CMatrix& coeff) {
  if (coeff.rows() != pi.dim() || coeff.cols() != pi.dim())
    throw DomainError("FourierCoefficients::add: coefficient has wrong shape");
  auto it = std::lower_bound(components_.begin(), components_.end(), pi.label(), label_less);
  if (it != components_.end() && it->irrep.label() == pi.label()) {
    it->coeff += coeff;
  } else {
    components_.insert(it, Component{pi, coeff});
  }
}

void FourierCoefficients::add(const IrrepLabel& label, const CMatrix& coeff) {
  auto it = std::lower_bound(components_.begin(), components_.end(), label, label_less);
  if (it != components_.end() && it->irrep.label() == label) {
    it->coeff += coeff;
    return;
  }
  add(Irrep(group_, label), coeff);
}

const FourierCoefficients::Component* FourierCoefficients::find(const IrrepLabel& label) const {
  auto it = std::lower_bound(components_.begin(), components_.end(), label, label_less);
  if (it != components_.end() && it->irrep.label() == label) return &*it;
  return nullptr;
}

Complex FourierCoefficients::operator()(const GroupPoint& x) const {
  return (*this)(complexify(x));
}

Complex FourierCoefficients::operator()(const ComplexGroupPoint& g) const {
  Complex s = 0.0;
  for (const auto& c : components_)
    s += static_cast<double>(c.irrep.dim()) * trace_product(c.coeff, c.irrep.evaluate(g));
  return s;
}

Complex FourierCoefficients::derivative(std::span<const int> ks, const GroupPoint& x) const {
  return derivative(ks, complexify(x));
}

Complex FourierCoefficients::derivative(std::span<const int> ks,
                                        const ComplexGroupPoint& g) const {
  Complex s = 0.0;
  for (const auto& c : components_) {
    CMatrix m = c.irrep.evaluate(g);
    for (int k : ks) m = m * c.irrep.generator(k);
    s += static_cast<double>(c.irrep.dim()) * trace_product(c.coeff, m);
  }
  return s;
}

double FourierCoefficients::max_degree() const {
  double d = 0.0;
  for (const auto& c : components_) d = std::max(d, c.irrep.degree());
  return d;
}

double FourierCoefficients::max_casimir() const {
  double d = 0.0;
  for (const auto& c : components_) d = std::max(d, c.irrep.casimir());
  return d;
}

double FourierCoefficients::plancherel_norm2() const {
  double s = 0.0;
  for (const auto& c : components_) s += c.irrep.dim() * c.coeff.squaredNorm();
  return s;
}

FourierCoefficients FourierCoefficients::derivative_coefficients(int k) const {
  FourierCoefficients out(group_);
  for (const auto& c : components_) out.components_.push_back({c.irrep, c.irrep.generator(k) * c.coeff});
  return out;
}

FourierCoefficients FourierCoefficients::multiply(const FourierCoefficients& other) const {
  const double deg = max_degree() + other.max_degree();
  const QuadratureRule rule = haar_quadrature(group_, std::max(1, static_cast<int>(std::ceil(deg - 1e-12))));
  return fourier_transform(
      group_, [&](const GroupPoint& x) { return (*this)(x) * other(x); }, deg, rule);
}

FourierCoefficients FourierCoefficients::conjugate() const {
  const double deg = max_degree();
  const QuadratureRule rule = haar_quadrature(group_, std::max(1, static_cast<int>(std::ceil(deg - 1e-12))));
  return fourier_transform(
      group_, [&](const GroupPoint& x) { return std::conj((*this)(x)); }, deg, rule);
}

FourierCoefficients FourierCoefficients::scaled(Complex c) const {
  FourierCoefficients out = *this;
  for (auto& comp : out.components_) comp.coeff *= c;
  return out;
}

FourierCoefficients FourierCoefficients::operator+(const FourierCoefficients& other) const {
  FourierCoefficients out = *this;
  for (const auto& c : other.components_) out.add(c.irrep, c.coeff);
  return out;
}

FourierCoefficients FourierCoefficients::operator-(const FourierCoefficients& other) const {
  return *this + other.scaled(-1.0);
}

FourierCoefficients FourierCoefficients::pruned(double tol) const {
  FourierCoefficients out(group_);
  for (const auto& c : components_)
    if (c.coeff.cwiseAbs().maxCoeff() > tol) out.components_.push_back(c);
  return out;
}

FourierCoefficients fourier_transform(const CompactGroup& G,
                                      const std::function<Complex(const GroupPoint&)>& f,
                                      double max_degree, const QuadratureRule& rule) {
  const auto irreps = irreps_with_degree(G, max_degree);
  std::vector<CMatrix> acc;
  for (const auto& pi : irreps) acc.push_back(CMatrix::Zero(pi.dim(), pi.dim()));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Complex v = f(rule.nodes[i]) * rule.weights[i];
    for (std::size_t l = 0; l < irreps.size(); ++l)
      acc[l] += v * irreps[l].evaluate(rule.nodes[i]).adjoint();
  }
  FourierCoefficients out(G);
  for (std::size_t l = 0; l < irreps.size(); ++l) out.components().push_back({irreps[l], acc[l]});
  return out;
}

FourierCoefficients random_band_limited(const CompactGroup& G, double max_degree,
                                        std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  FourierCoefficients f(G);
  for (const auto& pi : irreps_with_degree(G, max_degree)) {
    CMatrix m(pi.dim(), pi.dim());
    const double s = 1.0 / std::sqrt(2.0 * pi.dim());
    for (int i = 0; i < pi.dim(); ++i)
      for (int j = 0; j < pi.dim(); ++j) m(i, j) = Complex(normal(rng), normal(rng)) * s;
    f.components().push_back({pi, m});
  }
  return f;
}

NodeCache::NodeCache(const QuadratureRule& rule, std::vector<Irrep> irreps)
    : rule_(&rule), irreps_(std::move(irreps)) {
  values_.reserve(rule.size() * irreps_.size());
  for (const auto& x : rule.nodes)
    for (const auto& pi : irreps_) values_.push_back(pi.evaluate(x));
}

int NodeCache::index_of(const IrrepLabel& label) const {
  for (std::size_t i = 0; i < irreps_.size(); ++i)
    if (irreps_[i].label() == label) return static_cast<int>(i);
  return -1;
}

std::vector<Complex> NodeCache::evaluate(const FourierCoefficients& f) const {
  std::vector<int> where;
  for (const auto& c : f.components()) {
    const int i = index_of(c.irrep.label());
    if (i < 0) throw DomainError("NodeCache: irrep " + c.irrep.name() + " not cached");
    where.push_back(i);
  }
  std::vector<Complex> out(rule_->size(), 0.0);
  for (std::size_t n = 0; n < rule_->size(); ++n) {
    Complex s = 0.0;
    for (std::size_t c = 0; c < where.size(); ++c) {
      const auto& comp = f.components()[c];
      s += static_cast<double>(comp.irrep.dim()) * trace_product(comp.coeff, value(n, where[c]));
    }
    out[n] = s;
  }
  return out;
}

}  // namespace heatlab
