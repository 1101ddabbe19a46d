#include "skein/pillowcase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "skein/errors.hpp"

namespace skein::pillow {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kDropTol = 1e-14;

double wrap2(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0) r += 2.0;
  if (r >= 2.0) r = 0.0;
  return r;
}

// exp(i pi r) for rational r, reduced mod 2 first.
Complex exp_i_pi(const Rational& r) {
  long long num = r.numerator() % (2 * r.denominator());
  if (num < 0) num += 2 * r.denominator();
  Rational red(num, r.denominator());
  if (red == Rational(0)) return {1.0, 0.0};
  if (red == Rational(1)) return {-1.0, 0.0};
  if (red == Rational(1, 2)) return {0.0, 1.0};
  if (red == Rational(3, 2)) return {0.0, -1.0};
  double th = kPi * boost::rational_cast<double>(red);
  return {std::cos(th), std::sin(th)};
}

long long floor_div(const Rational& x, long long k) {
  // floor(x / k)
  long long num = x.numerator();
  long long den = x.denominator() * k;
  long long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

double slope_value(long p, long q, double alpha, double beta) { return p * alpha + q * beta; }

}  // namespace

ModuliPoint ModuliPoint::canonical(double alpha, double beta) {
  double a = wrap2(alpha);
  double b = wrap2(beta);
  if (a > 1.0) {
    a = 2.0 - a;
    b = wrap2(-b);
  }
  if ((a == 0.0 || a == 1.0) && b > 1.0) b = 2.0 - b;
  return {a, b};
}

Complex cocycle(long m, long n, double alpha, double beta) {
  return std::polar(1.0, kPi * (alpha * n - beta * m));
}

// -------------------------------------------------------------- sections

EquivariantSection::EquivariantSection(BumpSpec bump, bool symmetrize) : bump_(bump), symmetrize_(symmetrize) {
  if (!(bump_.radius > 0.0 && bump_.radius < 1.0)) throw Error("bump radius must lie in (0, 1)");
}

Complex EquivariantSection::bump_value(double alpha, double beta) const {
  double da = (alpha - bump_.center_alpha) / bump_.radius;
  double db = (beta - bump_.center_beta) / bump_.radius;
  double rho2 = da * da + db * db;
  if (rho2 >= 1.0) return {0.0, 0.0};
  double env = std::exp(1.0 - 1.0 / (1.0 - rho2));
  return bump_.amplitude * env * (1.0 + bump_.slope_alpha * da + bump_.slope_beta * db);
}

Complex EquivariantSection::equivariant(double alpha, double beta) const {
  // s(x) = sum_w j(w, x)^{-1} g(x + 2w); only w with |x + 2w - c| < r contribute.
  Complex total{0.0, 0.0};
  const long m0 = static_cast<long>(std::floor((bump_.center_alpha - alpha - bump_.radius) / 2.0));
  const long n0 = static_cast<long>(std::floor((bump_.center_beta - beta - bump_.radius) / 2.0));
  for (long m = m0; m <= m0 + 2; ++m)
    for (long n = n0; n <= n0 + 2; ++n) {
      Complex g = bump_value(alpha + 2.0 * m, beta + 2.0 * n);
      if (g == Complex{0.0, 0.0}) continue;
      total += std::conj(cocycle(m, n, alpha, beta)) * g;
    }
  return total;
}

Complex EquivariantSection::operator()(double alpha, double beta) const {
  if (!symmetrize_) return equivariant(alpha, beta);
  return equivariant(alpha, beta) + equivariant(-alpha, -beta);
}

SectionFn EquivariantSection::fn() const {
  EquivariantSection copy = *this;
  return [copy](double a, double b) { return copy(a, b); };
}

BumpSpec random_bump(std::uint64_t seed) {
  auto u = [&](std::uint32_t k) { return quad::counter_uniform(seed, 0, k); };
  BumpSpec b;
  b.center_alpha = 2.0 * u(0);
  b.center_beta = 2.0 * u(1);
  b.radius = 0.2 + 0.4 * u(2);
  b.amplitude = {0.5 + u(3), u(4) - 0.5};
  b.slope_alpha = {u(5) - 0.5, u(6) - 0.5};
  b.slope_beta = {u(7) - 0.5, u(8) - 0.5};
  return b;
}

// -------------------------------------------------------------- functions

bool is_singular(long p, long q, double alpha, double beta, double tol) {
  double x = slope_value(p, q, alpha, beta);
  return std::abs(x - std::round(x)) < tol;
}

double f_curve(long p, long q, int d, const ModuliPoint& pt) {
  if (std::gcd(std::labs(p), std::labs(q)) != 1) throw Error("slope is not primitive");
  double v = -2.0 * std::cos(kPi * slope_value(p, q, pt.alpha, pt.beta));
  double r = 1.0;
  for (int k = 0; k < d; ++k) r *= v;
  return r;
}

double F_curve(long p, long q, const ModuliPoint& pt) {
  double c = std::cos(kPi * slope_value(p, q, pt.alpha, pt.beta));
  return std::acos(std::clamp(c, -1.0, 1.0)) / kPi;
}

quad::McEstimate liouville_integral(const std::function<double(double, double)>& f, std::uint64_t samples,
                                    std::uint64_t seed, unsigned threads) {
  return quad::mc_mean(samples, threads, [&](std::uint64_t i) {
    return f(2.0 * quad::counter_uniform(seed, i, 0), 2.0 * quad::counter_uniform(seed, i, 1));
  });
}

double liouville_quadrature(const std::function<double(double, double)>& f, int panels) {
  return 0.25 * quad::gauss_legendre_2d(f, 0.0, 2.0, 0.0, 2.0, panels, panels);
}

ModuliPoint flow(long p, long q, double t, const ModuliPoint& pt) {
  if (is_singular(p, q, pt.alpha, pt.beta))
    throw SingularLocus("flow evaluated on the singular locus of (" + std::to_string(p) + "," + std::to_string(q) + ")");
  double sgn = std::sin(kPi * slope_value(p, q, pt.alpha, pt.beta)) > 0 ? 1.0 : -1.0;
  return ModuliPoint::canonical(pt.alpha - 2.0 * t * sgn * q, pt.beta + 2.0 * t * sgn * p);
}

// -------------------------------------------------------------- transport

Complex transport_phase(double alpha0, double beta0, double u, double w, double T) {
  return std::polar(1.0, -0.5 * kPi * T * (alpha0 * w - beta0 * u));
}

WrappedTransport transport_wrapped(double alpha0, double beta0, double u, double w, double T) {
  Complex phase{1.0, 0.0};
  double y[2] = {alpha0, beta0};
  const double v[2] = {u, w};
  double remaining = T;
  // Cross a wall: y_old = y_new + 2 shift.
  auto wrap_if_needed = [&]() {
    long shift[2] = {0, 0};
    for (int k = 0; k < 2; ++k) {
      if (v[k] > 0 && y[k] >= 2.0) {
        y[k] -= 2.0;
        shift[k] = 1;
      } else if (v[k] < 0 && y[k] <= 0.0) {
        y[k] += 2.0;
        shift[k] = -1;
      }
    }
    if (shift[0] || shift[1]) phase *= std::conj(cocycle(shift[0], shift[1], y[0], y[1]));
  };
  wrap_if_needed();
  int guard = 0;
  while (remaining > 0.0) {
    if (++guard > 1000000) throw Error("transport path crosses too many walls");
    double exit = remaining;
    for (int k = 0; k < 2; ++k) {
      if (v[k] > 0) exit = std::min(exit, (2.0 - y[k]) / v[k]);
      if (v[k] < 0) exit = std::min(exit, -y[k] / v[k]);
    }
    phase *= transport_phase(y[0], y[1], u, w, exit);
    for (int k = 0; k < 2; ++k) {
      y[k] += exit * v[k];
      // Snap onto the wall that was hit.
      if (v[k] > 0 && std::abs(y[k] - 2.0) < 1e-15) y[k] = 2.0;
      if (v[k] < 0 && std::abs(y[k]) < 1e-15) y[k] = 0.0;
    }
    remaining -= exit;
    if (remaining > 0.0) wrap_if_needed();
  }
  // Final reduction into [0, 2)^2.
  long shift[2] = {0, 0};
  for (int k = 0; k < 2; ++k) {
    double r = wrap2(y[k]);
    shift[k] = std::lround((y[k] - r) / 2.0);
    y[k] = r;
  }
  if (shift[0] || shift[1]) phase *= std::conj(cocycle(shift[0], shift[1], y[0], y[1]));
  return {phase, y[0], y[1]};
}

Complex loop_holonomy(const std::vector<std::pair<double, double>>& vertices) {
  Complex h{1.0, 0.0};
  for (size_t k = 0; k < vertices.size(); ++k) {
    auto [a0, b0] = vertices[k];
    auto [a1, b1] = vertices[(k + 1) % vertices.size()];
    h *= transport_phase(a0, b0, a1 - a0, b1 - b0, 1.0);
  }
  return h;
}

// -------------------------------------------------------------- section operators

SectionFn psi_op(long p, long q, double t, SectionFn s) {
  return [p, q, t, s = std::move(s)](double a, double b) {
    if (is_singular(p, q, a, b)) throw SingularLocus("psi evaluated on the singular locus");
    return std::polar(1.0, -kPi * t * slope_value(p, q, a, b)) * s(a + 2.0 * t * q, b - 2.0 * t * p);
  };
}

SectionFn o_op(long p, long q, int d, SectionFn s) {
  SectionFn cur = std::move(s);
  for (int k = 0; k < d; ++k) {
    SectionFn plus = psi_op(p, q, 0.5, cur);
    SectionFn minus = psi_op(p, q, -0.5, cur);
    cur = [plus, minus](double a, double b) { return plus(a, b) + minus(a, b); };
  }
  return cur;
}

SectionFn heisenberg_op(long p, long q, SectionFn s) {
  return [p, q, s = std::move(s)](double a, double b) {
    return std::polar(1.0, 0.5 * kPi * slope_value(p, q, a, b)) * s(a + q, b - p);
  };
}

SectionFn o_closed_form(long p, long q, SectionFn s) {
  SectionFn h = heisenberg_op(p, q, std::move(s));
  return [p, q, h](double a, double b) {
    if (is_singular(p, q, a, b)) throw SingularLocus("O evaluated on the singular locus");
    return 2.0 * std::cos(kPi * slope_value(p, q, a, b)) * h(a, b);
  };
}

// -------------------------------------------------------------- TrigPoly

TrigPoly TrigPoly::constant(Complex c) { return monomial(Rational(0), Rational(0), c); }

TrigPoly TrigPoly::monomial(Rational ka, Rational kb, Complex c) {
  TrigPoly t;
  t.add_term({ka, kb}, c);
  return t;
}

void TrigPoly::add_term(const Freq& k, Complex c) {
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kDropTol) terms_.erase(it);
}

Complex TrigPoly::operator()(double alpha, double beta) const {
  Complex total{0.0, 0.0};
  for (const auto& [k, c] : terms_)
    total += c * std::polar(1.0, kPi * (boost::rational_cast<double>(k.first) * alpha +
                                        boost::rational_cast<double>(k.second) * beta));
  return total;
}

TrigPoly TrigPoly::shifted(Rational va, Rational vb) const {
  TrigPoly r;
  for (const auto& [k, c] : terms_) r.add_term(k, c * exp_i_pi(k.first * va + k.second * vb));
  return r;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

TrigPoly operator*(const TrigPoly& x, const TrigPoly& y) {
  TrigPoly r;
  for (const auto& [kx, cx] : x.terms_)
    for (const auto& [ky, cy] : y.terms_) r.add_term({kx.first + ky.first, kx.second + ky.second}, cx * cy);
  return r;
}

TrigPoly TrigPoly::scaled(Complex c) const {
  TrigPoly r;
  for (const auto& [k, v] : terms_) r.add_term(k, v * c);
  return r;
}

Complex TrigPoly::liouville_exact() const {
  // (1/2) int_0^2 exp(i pi k x) dx = 1 for k = 0, (exp(2 i pi k) - 1) / (2 i pi k) otherwise.
  auto mean = [](const Rational& k) -> Complex {
    if (k == Rational(0)) return {1.0, 0.0};
    return (exp_i_pi(2 * k) - 1.0) / (Complex(0.0, 2.0 * kPi) * boost::rational_cast<double>(k));
  };
  Complex total{0.0, 0.0};
  for (const auto& [k, c] : terms_) total += c * mean(k.first) * mean(k.second);
  return total;
}

std::string TrigPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << "," << c.imag() << ")e^{i pi(" << k.first << " a + " << k.second << " b)}";
  }
  return os.str();
}

// -------------------------------------------------------------- TorusOperator

TorusOperator TorusOperator::identity() {
  TorusOperator op;
  op.add_term(Rational(0), Rational(0), TrigPoly::constant(1.0));
  return op;
}

TorusOperator TorusOperator::psi(long p, long q, Rational t) {
  TorusOperator op;
  op.add_term(2 * t * Rational(q), -2 * t * Rational(p), TrigPoly::monomial(-t * Rational(p), -t * Rational(q)));
  return op;
}

TorusOperator TorusOperator::o(long p, long q, int d) {
  TorusOperator one = psi(p, q, Rational(1, 2));
  one += psi(p, q, Rational(-1, 2));
  return one.power(d);
}

TorusOperator TorusOperator::experiment(long p, long q, Rational t) {
  TorusOperator op = psi(p, q, t);
  op += psi(p, q, -t);
  return op;
}

void TorusOperator::add_term(Rational va, Rational vb, const TrigPoly& multiplier) {
  // v = v0 + 2w with v0 in [0, 2)^2; s(x + v) = j(w, x + v0) s(x + v0).
  long long m = floor_div(va, 2);
  long long n = floor_div(vb, 2);
  Rational a0 = va - Rational(2 * m);
  Rational b0 = vb - Rational(2 * n);
  TrigPoly folded = multiplier;
  if (m != 0 || n != 0) {
    Complex phase = exp_i_pi(a0 * Rational(n) - b0 * Rational(m));
    folded = multiplier * TrigPoly::monomial(Rational(n), Rational(-m), phase);
  }
  auto [it, inserted] = terms_.try_emplace({a0, b0}, folded);
  if (!inserted) it->second += folded;
  if (it->second.is_zero()) terms_.erase(it);
}

TorusOperator& TorusOperator::operator+=(const TorusOperator& o) {
  for (const auto& [v, mlt] : o.terms_) add_term(v.first, v.second, mlt);
  return *this;
}

TorusOperator TorusOperator::scaled(Complex c) const {
  TorusOperator r;
  for (const auto& [v, mlt] : terms_) r.add_term(v.first, v.second, mlt.scaled(c));
  return r;
}

TorusOperator operator*(const TorusOperator& x, const TorusOperator& y) {
  TorusOperator r;
  for (const auto& [a, ma] : x.terms_)
    for (const auto& [b, mb] : y.terms_)
      r.add_term(a.first + b.first, a.second + b.second, ma * mb.shifted(a.first, a.second));
  return r;
}

TorusOperator TorusOperator::power(int d) const {
  if (d < 0) throw Error("negative operator power");
  TorusOperator r = identity();
  for (int k = 0; k < d; ++k) r = r * *this;
  return r;
}

Complex TorusOperator::apply(const SectionFn& s, double alpha, double beta) const {
  Complex total{0.0, 0.0};
  for (const auto& [v, mlt] : terms_)
    total += mlt(alpha, beta) * s(alpha + boost::rational_cast<double>(v.first),
                                  beta + boost::rational_cast<double>(v.second));
  return total;
}

TrigPoly TorusOperator::zero_shift_multiplier() const {
  auto it = terms_.find({Rational(0), Rational(0)});
  return it == terms_.end() ? TrigPoly{} : it->second;
}

bool TorusOperator::approx_equal(const TorusOperator& o, double tol) const {
  TorusOperator diff = *this;
  diff += o.scaled(-1.0);
  for (const auto& [v, mlt] : diff.terms_)
    for (const auto& [k, c] : mlt.terms())
      if (std::abs(c) > tol) return false;
  return true;
}

std::string TorusOperator::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, mlt] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "[" << mlt.to_string() << "] T(" << v.first << "," << v.second << ")";
  }
  return os.str();
}

TorusOperator operator_of(const torus::SkeinElement& x) {
  TorusOperator r;
  for (const auto& [c, v] : x.terms()) {
    Complex coeff = v.coerce(arith::ScalarKind::Complex).as_complex();
    TorusOperator term = c.is_empty() ? TorusOperator::identity() : TorusOperator::o(c.p(), c.q(), c.copies());
    r += term.scaled(coeff);
  }
  return r;
}

OperatorTrace operator_trace(const TorusOperator& op, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  TrigPoly k = op.zero_shift_multiplier();
  auto re = liouville_integral([&](double a, double b) { return k(a, b).real(); }, samples, seed, threads);
  auto im = liouville_integral([&](double a, double b) { return k(a, b).imag(); }, samples, seed, threads);
  return {{re.value, im.value}, std::hypot(re.stderr_, im.stderr_)};
}

Complex operator_trace_exact(const TorusOperator& op) { return op.zero_shift_multiplier().liouville_exact(); }

std::pair<double, double> random_regular_point(std::uint64_t seed, std::uint64_t index,
                                               const std::vector<std::pair<long, long>>& slopes, double margin) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t sample = index * 4096 + attempt;
    double a = 2.0 * quad::counter_uniform(seed, sample, 0);
    double b = 2.0 * quad::counter_uniform(seed, sample, 1);
    bool ok = true;
    for (auto [p, q] : slopes)
      if (is_singular(p, q, a, b, margin)) {
        ok = false;
        break;
      }
    if (ok) return {a, b};
    if (attempt > 4000) throw Error("could not find a regular point");
  }
}

}  // namespace skein::pillow
