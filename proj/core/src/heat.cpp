#include "heatlab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <tuple>

namespace heatlab {

namespace {

// One independent factor of the series: a single circle coordinate or one
// SU(2) factor.
struct Atom {
  bool circle;
  int slot;   // angle index or su2 matrix index
  int basis;  // first basis index
  int width;  // number of basis vectors
};

std::vector<Atom> atoms_of(const CompactGroup& G) {
  std::vector<Atom> out;
  for (const auto& f : G.factors()) {
    if (f.kind == FactorKind::torus) {
      for (int k = 0; k < f.dim; ++k) out.push_back({true, f.slot + k, f.offset + k, 1});
    } else {
      out.push_back({false, f.slot, f.offset, 3});
    }
  }
  return out;
}

// Sum of term(n) for n >= from, assuming terms eventually decay faster than
// geometrically; the remainder after stopping is bounded by a geometric tail.
double series_tail(const std::function<double(int)>& term, int from) {
  double sum = 0.0;
  double prev = term(from);
  sum += prev;
  for (int n = from + 1; n < from + 100000; ++n) {
    const double cur = term(n);
    sum += cur;
    if (cur == 0.0) break;
    const double r = cur / prev;
    if (r < 0.5 && cur <= 1e-18 * sum) {
      sum += cur * r / (1.0 - r);
      break;
    }
    if (cur < 1e-320) break;
    prev = cur;
  }
  return sum;
}

// Smallest N >= n_min with tail(N) <= tol, where tail(N) = sum_{n>N} term(n).
std::pair<int, double> choose_cutoff(const std::function<double(int)>& term, double tol,
                                     int n_min = 0) {
  int N = n_min;
  // Walk past the peak until single terms are well below tol.
  while (N < 20000 && !(term(N + 1) < tol * 1e-3 && term(N + 2) <= term(N + 1))) ++N;
  double tail = series_tail(term, N + 1);
  while (tail > tol && N < 20000) {
    ++N;
    tail = series_tail(term, N + 1);
  }
  if (tail > tol) throw TruncationError("heat kernel series does not converge to tolerance");
  // Shrink while still within tolerance.
  while (N > n_min) {
    const double t2 = series_tail(term, N);
    if (t2 > tol) break;
    --N;
    tail = t2;
  }
  return {N, tail};
}

double circle_term(double t, double y, int m, int n) {
  // Two terms +-n beyond the cutoff.
  const double nn = n;
  return 2.0 * std::pow(nn, m) * std::exp(-t * nn * nn / 2.0 + nn * std::abs(y));
}

double su2_term(double t, double ynorm, int m, int two_j) {
  const double c = su2_casimir(two_j);
  const double d = two_j + 1.0;
  return d * d * std::pow(std::sqrt(c), m) * std::exp(-t * c / 2.0 + ynorm * std::sqrt(c));
}

double ynorm_of(const Eigen::Matrix2cd& g) {
  // |Y| from the polar decomposition: singular values of g are e^{+-|Y|/sqrt2}.
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(g);
  const double smax = svd.singularValues()(0);
  return std::sqrt(2.0) * std::log(std::max(smax, 1.0));
}

// Rounding allowance per unit of absolute term mass.
constexpr double kRoundoff = 8.0 * std::numeric_limits<double>::epsilon();

struct AtomValue {
  Complex value;
  double tail;
  double bound;  // upper bound on |exact value|
};

AtomValue circle_value(double t, Complex z, int m, double tol, int base, double base_tail) {
  const double y = z.imag();
  int N = base;
  double tail = base_tail;
  if (m != 0 || y != 0.0)
    std::tie(N, tail) = choose_cutoff([&](int n) { return circle_term(t, y, m, n); }, tol, base);
  Complex s = 0.0;
  double mag = 0.0;
  for (int n = -N; n <= N; ++n) {
    const double nn = n;
    Complex d = 1.0;
    for (int i = 0; i < m; ++i) d *= Complex(0.0, nn);
    const Complex term = d * std::exp(-t * nn * nn / 2.0) * std::exp(kI * nn * z);
    s += term;
    mag += std::abs(term);
  }
  tail += kRoundoff * mag;
  return {s, tail, std::abs(s) + tail};
}

AtomValue su2_value(double t, const Eigen::Matrix2cd& g, std::span<const int> ks, double tol,
                    int base, double base_tail, bool real_point) {
  const int m = static_cast<int>(ks.size());
  const double yn = real_point ? 0.0 : ynorm_of(g);
  int J2 = base;
  double tail = base_tail;
  if (m != 0 || yn != 0.0)
    std::tie(J2, tail) = choose_cutoff([&](int tj) { return su2_term(t, yn, m, tj); }, tol, base);
  Complex s = 0.0;
  double mag = 0.0;
  if (m == 0) {
    // Characters by the Chebyshev recursion in tr g.
    const Complex tr = g.trace();
    Complex u0 = 0.0, u1 = 1.0;
    for (int tj = 0; tj <= J2; ++tj) {
      const double w = (tj + 1.0) * std::exp(-t * su2_casimir(tj) / 2.0);
      s += w * u1;
      // Recursion error grows roughly like (2j+1) |chi|.
      mag += w * (tj + 1.0) * std::max(std::abs(u1), 1.0);
      const Complex u2 = tr * u1 - u0;
      u0 = u1;
      u1 = u2;
    }
  } else {
    for (int tj = 0; tj <= J2; ++tj) {
      CMatrix M = su2_rep_matrix(tj, g);
      for (int k : ks) M = M * su2_rep_algebra(tj, su2_basis(k));
      const double w = (tj + 1.0) * std::exp(-t * su2_casimir(tj) / 2.0);
      s += w * M.trace();
      // Entry formula loses accuracy roughly like 2^{2j}.
      mag += w * M.cwiseAbs().sum() * std::pow(2.0, tj);
    }
  }
  tail += kRoundoff * mag;
  return {s, tail, std::abs(s) + tail};
}

// prod(a_i + e_i) - prod(a_i) <= sum_i e_i prod_{j != i} (a_j + e_j), which
// avoids cancellation when the tails are tiny.
HeatKernel::Value combine(const std::vector<AtomValue>& parts) {
  Complex v = 1.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v *= parts[i].value;
    double term = parts[i].tail;
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (j != i) term *= parts[j].bound;
    tail += term;
  }
  return {v, tail};
}

HeatKernel::Value eval_impl(const CompactGroup& G, double t, double tol,
                            const std::vector<int>& base, const std::vector<double>& base_tail,
                            const ComplexGroupPoint& g,
                            std::span<const int> ks, bool real_point) {
  const auto atoms = atoms_of(G);
  std::vector<AtomValue> parts;
  parts.reserve(atoms.size());
  std::vector<int> sub;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    sub.clear();
    for (int k : ks)
      if (k >= a.basis && k < a.basis + a.width) sub.push_back(k - a.basis);
    if (a.circle) {
      parts.push_back(circle_value(t, g.angles[a.slot], static_cast<int>(sub.size()), tol,
                                   base[i], base_tail[i]));
    } else {
      parts.push_back(su2_value(t, g.sl2[a.slot], sub, tol, base[i], base_tail[i], real_point));
    }
  }
  return combine(parts);
}

}  // namespace

HeatKernel::HeatKernel(CompactGroup G, double t, double tolerance)
    : group_(std::move(G)), t_(t), tolerance_(tolerance) {
  if (!(t > 0.0)) throw DomainError("heat kernel needs t > 0");
  if (!(tolerance > 0.0)) throw DomainError("heat kernel tolerance must be positive");
  std::vector<AtomValue> at_e;
  for (const auto& a : atoms_of(group_)) {
    if (a.circle) {
      const auto [N, tail] = choose_cutoff([&](int n) { return circle_term(t, 0.0, 0, n); }, tolerance);
      base_cutoff_.push_back(N);
      base_tail_.push_back(tail);
      term_cutoff_ += static_cast<double>(N) * N;
      double v = 1.0;
      for (int n = 1; n <= N; ++n) v += 2.0 * std::exp(-t * n * n / 2.0);
      at_e.push_back({v, tail, v + tail});
    } else {
      const auto [J2, tail] = choose_cutoff([&](int tj) { return su2_term(t, 0.0, 0, tj); }, tolerance);
      base_cutoff_.push_back(J2);
      base_tail_.push_back(tail);
      term_cutoff_ += su2_casimir(J2);
      double v = 0.0;
      for (int tj = 0; tj <= J2; ++tj) v += (tj + 1.0) * (tj + 1.0) * std::exp(-t * su2_casimir(tj) / 2.0);
      at_e.push_back({v, tail, v + tail});
    }
  }
  // |chi| <= d on K, so the values at e bound every atom.
  tail_bound_ = combine(at_e).tail;
}

double HeatKernel::max_degree() const {
  const auto atoms = atoms_of(group_);
  double d = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    d = std::max(d, atoms[i].circle ? base_cutoff_[i] : base_cutoff_[i] / 2.0);
  return d;
}

double HeatKernel::degree_at(const ComplexGroupPoint& g) const {
  const auto atoms = atoms_of(group_);
  double d = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (a.circle) {
      const double y = g.angles[a.slot].imag();
      const int N = y == 0.0 ? base_cutoff_[i]
                             : choose_cutoff([&](int n) { return circle_term(t_, y, 0, n); },
                                             tolerance_, base_cutoff_[i]).first;
      d = std::max(d, static_cast<double>(N));
    } else {
      const double yn = ynorm_of(g.sl2[a.slot]);
      const int J2 = yn == 0.0 ? base_cutoff_[i]
                               : choose_cutoff([&](int tj) { return su2_term(t_, yn, 0, tj); },
                                               tolerance_, base_cutoff_[i]).first;
      d = std::max(d, J2 / 2.0);
    }
  }
  return d;
}

HeatKernel::Value HeatKernel::evaluate(const ComplexGroupPoint& g) const {
  return eval_impl(group_, t_, tolerance_, base_cutoff_, base_tail_, g, {}, false);
}

HeatKernel::Value HeatKernel::evaluate(const GroupPoint& x) const {
  auto v = eval_impl(group_, t_, tolerance_, base_cutoff_, base_tail_, complexify(x), {}, true);
  v.value = v.value.real();
  return v;
}

double HeatKernel::operator()(const GroupPoint& x) const {
  const Value v = evaluate(x);
  if (!(v.value.real() > v.tail))
    throw TruncationError("heat kernel positivity not certified: value " +
                          std::to_string(v.value.real()) + " vs truncation bound " +
                          std::to_string(v.tail) + " at t=" + std::to_string(t_));
  return v.value.real();
}

Complex HeatKernel::operator()(const ComplexGroupPoint& g) const { return evaluate(g).value; }

HeatKernel::Value HeatKernel::derivative(std::span<const int> ks, const GroupPoint& x) const {
  for (int k : ks)
    if (k < 0 || k >= group_.dim()) throw DomainError("heat kernel derivative: bad basis index");
  return eval_impl(group_, t_, tolerance_, base_cutoff_, base_tail_, complexify(x), ks, true);
}

FourierCoefficients HeatKernel::fourier() const {
  const auto atoms = atoms_of(group_);
  FourierCoefficients out(group_);
  // Enumerate label pieces atom by atom.
  std::vector<std::vector<int>> ranges;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::vector<int> r;
    if (atoms[i].circle) {
      for (int n = -base_cutoff_[i]; n <= base_cutoff_[i]; ++n) r.push_back(n);
    } else {
      for (int tj = 0; tj <= base_cutoff_[i]; ++tj) r.push_back(tj);
    }
    ranges.push_back(std::move(r));
  }
  std::vector<std::size_t> idx(atoms.size(), 0);
  while (true) {
    IrrepLabel label;
    for (std::size_t i = 0; i < atoms.size(); ++i) label.push_back(ranges[i][idx[i]]);
    const Irrep pi(group_, label);
    out.components().push_back(
        {pi, std::exp(-t_ * pi.casimir() / 2.0) * CMatrix::Identity(pi.dim(), pi.dim())});
    std::size_t i = 0;
    while (i < atoms.size() && idx[i] + 1 == ranges[i].size()) idx[i++] = 0;
    if (i == atoms.size()) break;
    ++idx[i];
  }
  std::sort(out.components().begin(), out.components().end(),
            [](const auto& a, const auto& b) { return a.irrep.label() < b.irrep.label(); });
  return out;
}

FourierCoefficients heat_operator(const FourierCoefficients& f, double t) {
  FourierCoefficients out = f;
  for (auto& c : out.components()) c.coeff *= std::exp(-t * c.irrep.casimir() / 2.0);
  return out;
}

double nu_t_torus(int d, double t, std::span<const double> Y) {
  if (!(t > 0.0)) throw DomainError("nu_t needs t > 0");
  if (static_cast<int>(Y.size()) != d) throw DomainError("nu_t: wrong dimension");
  double y2 = 0.0;
  for (double y : Y) y2 += y * y;
  return std::pow(kPi * t, -d / 2.0) * std::exp(-y2 / t);
}

double mu_t_torus(int d, double t, std::span<const Complex> z) {
  if (static_cast<int>(z.size()) != d) throw DomainError("mu_t: wrong dimension");
  const HeatKernel rho(CompactGroup::torus(d), t / 2.0);
  GroupPoint x;
  std::vector<double> Y(d);
  for (int k = 0; k < d; ++k) {
    x.angles.push_back(wrap_angle(z[k].real()));
    Y[k] = z[k].imag();
  }
  return rho.evaluate(x).value.real() * nu_t_torus(d, t, Y);
}

void write_kernel_csv(std::ostream& out, const HeatKernel& h, std::span<const GroupPoint> points) {
  const auto& G = h.group();
  out.precision(17);
  for (int k = 0; k < G.angle_count(); ++k) out << "theta" << k + 1 << ",";
  for (int k = 0; k < G.su2_count(); ++k)
    out << "u" << k + 1 << "_a_re,u" << k + 1 << "_a_im,u" << k + 1 << "_b_re,u" << k + 1
        << "_b_im,";
  out << "value,tail_bound\n";
  for (const auto& x : points) {
    for (double a : x.angles) out << a << ",";
    for (const auto& U : x.su2)
      out << U(0, 0).real() << "," << U(0, 0).imag() << "," << U(1, 0).real() << ","
          << U(1, 0).imag() << ",";
    const auto v = h.evaluate(x);
    out << v.value.real() << "," << v.tail << "\n";
  }
}

}  // namespace heatlab
