#include "heatlab/fock.hpp"

#include "heatlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace heatlab {

namespace {

Eigen::Index ipow(int d, int n) {
  Eigen::Index r = 1;
  for (int i = 0; i < n; ++i) r *= d;
  return r;
}

Eigen::Index flat_index(int d, std::span<const int> ks) {
  Eigen::Index i = 0;
  for (int k : ks) {
    if (k < 0 || k >= d) throw DomainError("tensor index out of range");
    i = i * d + k;
  }
  return i;
}

void same_space(const TensorFunctional& a, const TensorFunctional& b) {
  if (!(a.group == b.group) || a.t != b.t)
    throw DomainError("tensor functionals live on different spaces");
}

double fock_weight(double t, int n) { return std::exp(n * std::log(t) - std::lgamma(n + 1.0)); }

// sum_{n > N} x^n / n!
double poisson_tail(double x, int N) {
  if (x <= 0.0) return 0.0;
  int n = N + 1;
  double term = std::exp(n * std::log(x) - std::lgamma(n + 1.0));
  double s = 0.0;
  while (true) {
    s += term;
    const double next = term * x / (n + 1);
    if (n + 1 > 2.0 * x && next <= 1e-18 * s) {
      s += next / (1.0 - x / (n + 2));
      break;
    }
    term = next;
    ++n;
  }
  return s;
}

// For each component: the matrices A pi(X_{k_1}) ... pi(X_{k_n}) at level n,
// in flat row-major order.
template <class Visit>
void walk_products(const CMatrix& A, const Irrep& pi, int N, Visit&& visit) {
  const int d = pi.group().dim();
  std::vector<CMatrix> level{A};
  visit(0, 0, level[0]);
  for (int n = 1; n <= N; ++n) {
    std::vector<CMatrix> next;
    next.reserve(level.size() * d);
    for (const auto& M : level)
      for (int k = 0; k < d; ++k) next.push_back(M * pi.generator(k));
    for (std::size_t i = 0; i < next.size(); ++i) visit(n, static_cast<Eigen::Index>(i), next[i]);
    level.swap(next);
  }
}

}  // namespace

TensorFunctional TensorFunctional::zero(const CompactGroup& G, double t, int N) {
  if (!(t > 0.0)) throw DomainError("Fock space needs t > 0");
  if (N < 0) throw DomainError("truncation must be >= 0");
  TensorFunctional xi;
  xi.group = G;
  xi.t = t;
  xi.N = N;
  for (int n = 0; n <= N; ++n) xi.components.push_back(CVector::Zero(ipow(G.dim(), n)));
  return xi;
}

TensorFunctional TensorFunctional::vacuum(const CompactGroup& G, double t, int N) {
  TensorFunctional xi = zero(G, t, N);
  xi.components[0](0) = 1.0;
  return xi;
}

Complex TensorFunctional::at(std::span<const int> ks) const {
  if (static_cast<int>(ks.size()) > N) throw DomainError("tensor degree above truncation");
  return components[ks.size()](flat_index(dim(), ks));
}

Complex& TensorFunctional::at(std::span<const int> ks) {
  if (static_cast<int>(ks.size()) > N) throw DomainError("tensor degree above truncation");
  return components[ks.size()](flat_index(dim(), ks));
}

TensorFunctional TensorFunctional::truncated(int M) const {
  if (M > N || M < 0) throw DomainError("truncated: bad degree");
  TensorFunctional out = *this;
  out.N = M;
  out.components.resize(M + 1);
  return out;
}

TensorFunctional TensorFunctional::operator+(const TensorFunctional& o) const {
  same_space(*this, o);
  TensorFunctional out = N >= o.N ? *this : o;
  const TensorFunctional& small = N >= o.N ? o : *this;
  for (int n = 0; n <= small.N; ++n) out.components[n] += small.components[n];
  return out;
}

TensorFunctional TensorFunctional::operator-(const TensorFunctional& o) const {
  return *this + o.scaled(-1.0);
}

TensorFunctional TensorFunctional::scaled(Complex c) const {
  TensorFunctional out = *this;
  for (auto& v : out.components) v *= c;
  return out;
}

nlohmann::json to_json(const TensorFunctional& xi) {
  nlohmann::json comps = nlohmann::json::object();
  for (int n = 0; n <= xi.N; ++n) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < xi.components[n].size(); ++i)
      arr.push_back({xi.components[n](i).real(), xi.components[n](i).imag()});
    comps[std::to_string(n)] = std::move(arr);
  }
  return {{"group", xi.group.name()}, {"t", xi.t}, {"N", xi.N}, {"components", std::move(comps)}};
}

TensorFunctional tensor_from_json(const nlohmann::json& j) {
  const CompactGroup G = make_group(j.at("group"));
  TensorFunctional xi = TensorFunctional::zero(G, j.at("t").get<double>(), j.at("N").get<int>());
  for (int n = 0; n <= xi.N; ++n) {
    const auto& arr = j.at("components").at(std::to_string(n));
    if (static_cast<Eigen::Index>(arr.size()) != xi.components[n].size())
      throw DomainError("tensor JSON: degree " + std::to_string(n) + " has wrong length");
    for (std::size_t i = 0; i < arr.size(); ++i)
      xi.components[n](static_cast<Eigen::Index>(i)) = Complex(arr[i].at(0).get<double>(), arr[i].at(1).get<double>());
  }
  return xi;
}

Complex fock_inner(const TensorFunctional& a, const TensorFunctional& b) {
  same_space(a, b);
  Complex s = 0.0;
  for (int n = 0; n <= std::min(a.N, b.N); ++n)
    s += fock_weight(a.t, n) * a.components[n].dot(b.components[n]);
  return s;
}

FockNorm fock_norm(const TensorFunctional& xi) {
  FockNorm r;
  for (int n = 0; n <= xi.N; ++n) r.value += fock_weight(xi.t, n) * xi.components[n].squaredNorm();
  r.terms = xi.N;
  return r;
}

HermiteCoefficients taylor_map(const FourierCoefficients& f, double t, int N,
                               const TaylorOptions& options) {
  const CompactGroup& G = f.group();
  std::size_t entries = 0;
  for (int n = 0; n <= N; ++n) entries += static_cast<std::size_t>(ipow(G.dim(), n));
  if (N > 0 && entries > options.max_entries)
    throw ResourceError("taylor_map: " + std::to_string(entries) + " tensor entries exceed the cap");
  HermiteCoefficients h{TensorFunctional::zero(G, t, N), heat_operator(f, t)};
  for (const auto& c : h.heated.components()) {
    const double dl = c.irrep.dim();
    walk_products(c.coeff, c.irrep, N, [&](int n, Eigen::Index i, const CMatrix& M) {
      h.xi.components[n](i) += dl * M.trace();
    });
  }
  return h;
}

std::vector<double> hermite_component_norms(const FourierCoefficients& heated, int n_max) {
  std::vector<double> out(n_max + 1, 0.0);
  const int d = heated.group().dim();
  for (const auto& a : heated.components()) {
    for (const auto& b : heated.components()) {
      const Eigen::Index D = static_cast<Eigen::Index>(a.irrep.dim()) * b.irrep.dim();
      CMatrix T = CMatrix::Zero(D, D);
      for (int k = 0; k < d; ++k)
        T += Eigen::kroneckerProduct(a.irrep.generator(k), b.irrep.generator(k).conjugate()).eval();
      CMatrix M = Eigen::kroneckerProduct(a.coeff, b.coeff.conjugate()).eval();
      const double dd = static_cast<double>(a.irrep.dim()) * b.irrep.dim();
      for (int n = 0; n <= n_max; ++n) {
        out[n] += dd * M.trace().real();
        if (n < n_max) M = M * T;
      }
    }
  }
  return out;
}

double hermite_tail(const FourierCoefficients& heated, double t, int N) {
  double tail = 0.0;
  for (const auto& a : heated.components()) {
    const double aa = std::pow(a.irrep.dim(), 1.5) * a.coeff.norm();
    for (const auto& b : heated.components()) {
      const double bb = std::pow(b.irrep.dim(), 1.5) * b.coeff.norm();
      tail += aa * bb * poisson_tail(t * std::sqrt(a.irrep.casimir() * b.irrep.casimir()), N);
    }
  }
  return tail;
}

int choose_hermite_truncation(const FourierCoefficients& heated, double t, double tail_tol,
                              int cap) {
  for (int N = 0; N <= cap; ++N)
    if (hermite_tail(heated, t, N) <= tail_tol) return N;
  throw TruncationError("Fock tail above " + std::to_string(tail_tol) + " at the degree cap " +
                        std::to_string(cap));
}

FockNorm fock_norm(const HermiteCoefficients& h, int terms) {
  const auto norms = hermite_component_norms(h.heated, terms);
  FockNorm r;
  for (int n = 0; n <= terms; ++n) r.value += fock_weight(h.xi.t, n) * norms[n];
  r.tail = hermite_tail(h.heated, h.xi.t, terms);
  r.terms = terms;
  return r;
}

double ideal_residual(const TensorFunctional& xi) {
  const CompactGroup& G = xi.group;
  const int d = G.dim();
  double worst = 0.0;
  std::vector<int> ks, low;
  for (int n = 2; n <= xi.N; ++n) {
    const double scale =
        std::max({1.0, xi.components[n].cwiseAbs().maxCoeff(), xi.components[n - 1].cwiseAbs().maxCoeff()});
    const Eigen::Index count = ipow(d, n);
    ks.assign(n, 0);
    for (Eigen::Index i = 0; i < count; ++i) {
      Eigen::Index r = i;
      for (int p = n - 1; p >= 0; --p) ks[p] = static_cast<int>(r % d), r /= d;
      for (int p = 0; p + 1 < n; ++p) {
        if (ks[p] >= ks[p + 1]) continue;  // the swapped relation is the same one
        std::vector<int> sw = ks;
        std::swap(sw[p], sw[p + 1]);
        Complex res = xi.components[n](i) - xi.components[n](flat_index(d, sw));
        low.assign(ks.begin(), ks.end());
        low.erase(low.begin() + p + 1);
        for (int l = 0; l < d; ++l) {
          const double c = G.structure_constant(l, ks[p], ks[p + 1]);
          if (c == 0.0) continue;
          low[p] = l;
          res -= c * xi.components[n - 1](flat_index(d, low));
        }
        worst = std::max(worst, std::abs(res) / scale);
      }
    }
  }
  return worst;
}

void check_ideal(const TensorFunctional& xi, double tol) {
  const double r = ideal_residual(xi);
  if (!(r <= tol))
    throw InvariantError("tensor violates the enveloping-algebra relations: residual " +
                         std::to_string(r));
}

HermiteIsometryReport hermite_isometry_check(const FourierCoefficients& f, double t, int N,
                                             double tol, double tail_tol, int dense_N) {
  HermiteIsometryReport r;
  r.N = N;
  const PositionNorm pos = norm_in_position(f, t);
  const int dn = std::min(N, dense_N);
  const HermiteCoefficients h = taylor_map(f, t, dn);
  const FockNorm fn = fock_norm(h, N);
  if (fn.tail > tail_tol)
    throw TruncationError("Fock tail " + std::to_string(fn.tail) + " above " +
                          std::to_string(tail_tol) + " at N = " + std::to_string(N));
  const auto norms = hermite_component_norms(h.heated, dn);
  for (int n = 0; n <= dn; ++n) {
    const double dense = h.xi.components[n].squaredNorm();
    r.dense_mismatch =
        std::max(r.dense_mismatch, std::abs(dense - norms[n]) / std::max(1.0, dense));
  }
  r.position = pos.value;
  r.fock = fn.value;
  r.tail = fn.tail + pos.tail;
  const double scale = std::max(std::abs(pos.value), 1e-300);
  r.rel_err = std::abs(pos.value - fn.value) / scale;
  r.pass = std::abs(pos.value - fn.value) <= tol * scale + r.tail && r.dense_mismatch <= 1e-10;
  return r;
}

DoublingReport doubling_identity_check(const FourierCoefficients& f, double t, double tail_tol) {
  DoublingReport r;
  const FourierCoefficients heated = heat_operator(f, t);
  r.N = choose_hermite_truncation(heated, t, tail_tol);
  const auto norms = hermite_component_norms(heated, r.N);
  for (int n = 0; n <= r.N; ++n) r.series += fock_weight(t, n) * norms[n];
  r.tail = hermite_tail(heated, t, r.N);
  r.direct = norm_in_position(f, t).heat_route;
  const int d = f.group().dim();
  for (const auto& a : heated.components()) {
    for (const auto& b : heated.components()) {
      const Eigen::Index D = static_cast<Eigen::Index>(a.irrep.dim()) * b.irrep.dim();
      CMatrix T = CMatrix::Zero(D, D);
      for (int k = 0; k < d; ++k)
        T += Eigen::kroneckerProduct(a.irrep.generator(k), b.irrep.generator(k).conjugate()).eval();
      const CMatrix E = (t * T).exp();
      const CMatrix M = Eigen::kroneckerProduct(a.coeff, b.coeff.conjugate()).eval();
      r.exponential += static_cast<double>(a.irrep.dim()) * b.irrep.dim() * (M * E).trace().real();
    }
  }
  return r;
}

FourierCoefficients inverse_taylor(const TensorFunctional& xi, const InverseTaylorBudget& budget) {
  const CompactGroup& G = xi.group;
  if (G.has_torus_factor())
    throw UnsupportedError(
        "inverse_taylor: " + G.name() +
        " has a torus factor; it is not simply connected and its Taylor map is not onto");
  check_ideal(xi, 1e-8);
  const int d = G.dim();
  Eigen::Index rows = 0;
  for (int n = 0; n <= xi.N; ++n) rows += ipow(d, n);
  CVector rhs(rows);
  std::vector<double> sw;
  {
    Eigen::Index r = 0;
    for (int n = 0; n <= xi.N; ++n) {
      const double s = std::sqrt(fock_weight(xi.t, n));
      for (Eigen::Index i = 0; i < xi.components[n].size(); ++i, ++r) {
        rhs(r) = s * xi.components[n](i);
        sw.push_back(s);
      }
    }
  }
  const double rhs_norm = std::max(rhs.norm(), 1e-300);
  for (int two_j = 0; two_j <= budget.max_two_j; ++two_j) {
    const auto irreps = irreps_with_degree(G, two_j / 2.0);
    Eigen::Index unknowns = 0;
    for (const auto& pi : irreps) unknowns += static_cast<Eigen::Index>(pi.dim()) * pi.dim();
    if (unknowns > rows) break;
    CMatrix A = CMatrix::Zero(rows, unknowns);
    Eigen::Index col = 0;
    for (const auto& pi : irreps) {
      const int D = pi.dim();
      std::vector<Eigen::Index> offs(xi.N + 1, 0);
      for (int n = 1; n <= xi.N; ++n) offs[n] = offs[n - 1] + ipow(d, n - 1);
      walk_products(CMatrix::Identity(D, D), pi, xi.N, [&](int n, Eigen::Index i, const CMatrix& P) {
        const Eigen::Index r = offs[n] + i;
        // d tr(C P) = d sum_{ab} C_ab P_ba
        for (int a = 0; a < D; ++a)
          for (int b = 0; b < D; ++b) A(r, col + a * D + b) = sw[r] * static_cast<double>(D) * P(b, a);
      });
      col += static_cast<Eigen::Index>(D) * D;
    }
    const Eigen::ColPivHouseholderQR<CMatrix> qr(A);
    const CVector sol = qr.solve(rhs);
    const double res = (A * sol - rhs).norm() / rhs_norm;
    if (res > budget.tolerance) continue;
    if (qr.rank() < unknowns)
      throw TruncationError("inverse_taylor: degree " + std::to_string(xi.N) +
                            " data does not determine the coefficients uniquely");
    FourierCoefficients heated(G);
    col = 0;
    for (const auto& pi : irreps) {
      const int D = pi.dim();
      CMatrix C(D, D);
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) C(a, b) = sol(col + a * D + b);
      heated.components().push_back({pi, C});
      col += static_cast<Eigen::Index>(D) * D;
    }
    std::sort(heated.components().begin(), heated.components().end(),
              [](const auto& x, const auto& y) { return x.irrep.label() < y.irrep.label(); });
    return heat_operator(heated, -xi.t);
  }
  throw TruncationError("inverse_taylor: residual floor not reached within the irrep budget");
}

Complex hermite_function(const HeatKernel& h, std::span<const int> ks, const GroupPoint& x) {
  const double rho = h(x);
  if (ks.empty()) return 1.0;
  std::vector<int> rev(ks.rbegin(), ks.rend());
  const Complex v = h.derivative(rev, x).value;
  return (ks.size() % 2 == 0 ? 1.0 : -1.0) * v / rho;
}

FockSpace::FockSpace(CompactGroup G, double t, int N) : group_(std::move(G)), t_(t), N_(N) {
  if (!(t > 0.0)) throw DomainError("Fock space needs t > 0");
  if (N < 0) throw DomainError("truncation must be >= 0");
  const int d = group_.dim();
  for (int n = 0; n <= N; ++n) {
    offsets_.push_back(size_);
    weights_.push_back(fock_weight(t, n));
    size_ += ipow(d, n);
  }
  diag_.resize(size_);
  for (int n = 0; n <= N; ++n) diag_.segment(offsets_[n], ipow(d, n)).setConstant(weights_[n]);

  std::vector<std::vector<std::pair<Eigen::Index, double>>> rows;
  std::vector<int> ks, low;
  for (int n = 2; n <= N; ++n) {
    const Eigen::Index count = ipow(d, n);
    ks.assign(n, 0);
    for (Eigen::Index i = 0; i < count; ++i) {
      Eigen::Index r = i;
      for (int p = n - 1; p >= 0; --p) ks[p] = static_cast<int>(r % d), r /= d;
      for (int p = 0; p + 1 < n; ++p) {
        if (ks[p] >= ks[p + 1]) continue;
        std::vector<int> sw = ks;
        std::swap(sw[p], sw[p + 1]);
        std::vector<std::pair<Eigen::Index, double>> row{{offsets_[n] + i, 1.0},
                                                         {offsets_[n] + flat_index(d, sw), -1.0}};
        low.assign(ks.begin(), ks.end());
        low.erase(low.begin() + p + 1);
        for (int l = 0; l < d; ++l) {
          const double c = group_.structure_constant(l, ks[p], ks[p + 1]);
          if (c == 0.0) continue;
          low[p] = l;
          row.push_back({offsets_[n - 1] + flat_index(d, low), -c});
        }
        rows.push_back(std::move(row));
      }
    }
  }
  relations_ = CMatrix::Zero(static_cast<Eigen::Index>(rows.size()), size_);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) relations_(static_cast<Eigen::Index>(r), c) += v;

  // Null space of R in coordinates where the weighted product is Euclidean.
  const RVector isq = diag_.cwiseSqrt().cwiseInverse();
  CMatrix K;
  if (relations_.rows() == 0) {
    K = CMatrix::Identity(size_, size_);
  } else {
    const CMatrix C = relations_ * isq.asDiagonal();
    Eigen::FullPivLU<CMatrix> lu(C);
    K = lu.kernel();
  }
  const Eigen::HouseholderQR<CMatrix> qr(K);
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(K.rows(), K.cols());
  basis_ = isq.asDiagonal() * Q;
}

CVector FockSpace::flatten(const TensorFunctional& xi) const {
  if (!(xi.group == group_) || xi.t != t_) throw DomainError("FockSpace: functional from another space");
  CVector v = CVector::Zero(size_);
  for (int n = 0; n <= std::min(N_, xi.N); ++n) v.segment(offsets_[n], xi.components[n].size()) = xi.components[n];
  return v;
}

TensorFunctional FockSpace::unflatten(const CVector& v) const {
  TensorFunctional xi = TensorFunctional::zero(group_, t_, N_);
  for (int n = 0; n <= N_; ++n) xi.components[n] = v.segment(offsets_[n], xi.components[n].size());
  return xi;
}

CVector FockSpace::project(const CVector& v) const {
  return basis_ * (basis_.adjoint() * diag_.asDiagonal() * v);
}

TensorFunctional FockSpace::project(const TensorFunctional& xi) const {
  return unflatten(project(flatten(xi)));
}

}  // namespace heatlab
