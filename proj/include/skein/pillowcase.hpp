#pragma once

// The pillowcase (R^2 / 2Z^2) / (x ~ -x), its prequantum line bundle with
// connection d + (i pi / 2)(alpha dbeta - beta dalpha), twist flows, and the
// transport operators Psi^t and O_gamma = Psi^{1/2} + Psi^{-1/2} acting on
// equivariant sections.
//
// Sections are functions s on R^2 with s(x + 2v) = j(v, x) s(x),
// j((m, n), (alpha, beta)) = exp(i pi (alpha n - beta m)), and s(-x) = s(x).

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "skein/quadrature.hpp"
#include "skein/torus_skein.hpp"

namespace skein::pillow {

using Complex = std::complex<double>;
using Rational = boost::rational<long long>;

inline constexpr double kSingularTol = 1e-6;

struct ModuliPoint {
  double alpha = 0.0;
  double beta = 0.0;
  // Representative with 0 <= alpha <= 1, 0 <= beta < 2, and beta <= 1 when
  // alpha is 0 or 1.
  static ModuliPoint canonical(double alpha, double beta);
};

// Bundle cocycle j((m, n), (alpha, beta)).
Complex cocycle(long m, long n, double alpha, double beta);

// Bump exp(1 - 1/(1 - rho^2)) * amplitude * (1 + slope . (x - center) / radius)
// for rho = |x - center| / radius < 1, zero outside.
struct BumpSpec {
  double center_alpha = 0.5;
  double center_beta = 0.5;
  double radius = 0.4;
  Complex amplitude{1.0, 0.0};
  Complex slope_alpha{0.0, 0.0};
  Complex slope_beta{0.0, 0.0};
};

using SectionFn = std::function<Complex(double alpha, double beta)>;

class EquivariantSection {
 public:
  // radius must lie in (0, 1).
  explicit EquivariantSection(BumpSpec bump, bool symmetrize = true);
  Complex operator()(double alpha, double beta) const;
  const BumpSpec& bump() const { return bump_; }
  SectionFn fn() const;

 private:
  Complex bump_value(double alpha, double beta) const;
  Complex equivariant(double alpha, double beta) const;
  BumpSpec bump_;
  bool symmetrize_;
};

// Random bump with center in [0,2)^2 and radius in [0.2, 0.6].
BumpSpec random_bump(std::uint64_t seed);

// -------------------------------------------------------------- functions

bool is_singular(long p, long q, double alpha, double beta, double tol = kSingularTol);
// (-2 cos(pi (p alpha + q beta)))^d.
double f_curve(long p, long q, int d, const ModuliPoint& pt);
// (1/pi) acos(cos(pi (p alpha + q beta))).
double F_curve(long p, long q, const ModuliPoint& pt);

// (1/4) int_{[0,2]^2} f by Monte Carlo.
quad::McEstimate liouville_integral(const std::function<double(double, double)>& f, std::uint64_t samples,
                                    std::uint64_t seed, unsigned threads = 1);
// Same integral by composite Gauss-Legendre.
double liouville_quadrature(const std::function<double(double, double)>& f, int panels = 8);

// Hamiltonian flow of F_(p,q): translation by 2 t sign(sin(pi(p alpha + q beta))) (-q, p).
// Throws SingularLocus on F^{-1}({0, 1}).
ModuliPoint flow(long p, long q, double t, const ModuliPoint& pt);

// -------------------------------------------------------------- transport

// Parallel transport along start + s (u, w), 0 <= s <= T, in the trivialisation
// over R^2: exp(-(i pi / 2) T (alpha0 w - beta0 u)).
Complex transport_phase(double alpha0, double beta0, double u, double w, double T);

struct WrappedTransport {
  Complex phase;
  double end_alpha;  // end point reduced to [0, 2)^2
  double end_beta;
};

// Transport with start and end expressed in the fundamental domain [0,2)^2:
// the segment is cut where it leaves the domain, and each re-entry applies the
// chart transition given by the cocycle.
WrappedTransport transport_wrapped(double alpha0, double beta0, double u, double w, double T);

// Holonomy around the closed polygon through the given vertices.
Complex loop_holonomy(const std::vector<std::pair<double, double>>& vertices);

// -------------------------------------------------------------- operators

// (Psi^t_(p,q) s)(x) = exp(-i pi t (p alpha + q beta)) s(alpha + 2tq, beta - 2tp):
// pull back along the lifted flow and transport along the flow segment.
SectionFn psi_op(long p, long q, double t, SectionFn s);
// (Psi^{1/2} + Psi^{-1/2})^d.
SectionFn o_op(long p, long q, int d, SectionFn s);
// ([gamma] s)(x) = exp(i pi (p alpha + q beta)/2) s(alpha + q, beta - p).
SectionFn heisenberg_op(long p, long q, SectionFn s);
// 2 cos(pi (p alpha + q beta)) ([gamma] s)(x).
SectionFn o_closed_form(long p, long q, SectionFn s);

// Finite sum of c exp(i pi (k_alpha alpha + k_beta beta)) with rational k.
class TrigPoly {
 public:
  using Freq = std::pair<Rational, Rational>;
  TrigPoly() = default;
  static TrigPoly constant(Complex c);
  static TrigPoly monomial(Rational ka, Rational kb, Complex c = 1.0);

  const std::map<Freq, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const Freq& k, Complex c);
  Complex operator()(double alpha, double beta) const;
  // p(x + v).
  TrigPoly shifted(Rational va, Rational vb) const;
  TrigPoly& operator+=(const TrigPoly& o);
  friend TrigPoly operator*(const TrigPoly& x, const TrigPoly& y);
  TrigPoly scaled(Complex c) const;
  // Exact (1/4) int_{[0,2]^2}.
  Complex liouville_exact() const;
  std::string to_string() const;

 private:
  std::map<Freq, Complex> terms_;
};

// (O s)(x) = sum over shifts v of M_v(x) s(x + v), with every shift reduced
// to [0, 2)^2 using the cocycle.
class TorusOperator {
 public:
  using Shift = std::pair<Rational, Rational>;
  TorusOperator() = default;

  static TorusOperator identity();
  static TorusOperator psi(long p, long q, Rational t);
  static TorusOperator o(long p, long q, int d = 1);
  // Psi^{a/b} + Psi^{-a/b}; no identity with skein traces is claimed.
  static TorusOperator experiment(long p, long q, Rational t);

  const std::map<Shift, TrigPoly>& terms() const { return terms_; }
  void add_term(Rational va, Rational vb, const TrigPoly& multiplier);

  TorusOperator& operator+=(const TorusOperator& o);
  TorusOperator scaled(Complex c) const;
  // (x * y) s = x (y s).
  friend TorusOperator operator*(const TorusOperator& x, const TorusOperator& y);
  TorusOperator power(int d) const;

  Complex apply(const SectionFn& s, double alpha, double beta) const;
  TrigPoly zero_shift_multiplier() const;
  bool approx_equal(const TorusOperator& o, double tol) const;
  std::string to_string() const;

 private:
  std::map<Shift, TrigPoly> terms_;
};

// Image of a skein element at A = -i: empty -> identity, d copies of (p, q) -> O_(p,q)^d.
TorusOperator operator_of(const torus::SkeinElement& x);

struct OperatorTrace {
  Complex value;
  double stderr_ = 0.0;
};

// Liouville integral of the zero-shift multiplier by Monte Carlo; other
// shifts have isolated fixed points and contribute nothing.
OperatorTrace operator_trace(const TorusOperator& op, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads = 1);
Complex operator_trace_exact(const TorusOperator& op);

// Uniform point of [0,2)^2 at distance > margin from the singular loci of all
// listed slopes; deterministic in (seed, index).
std::pair<double, double> random_regular_point(std::uint64_t seed, std::uint64_t index,
                                               const std::vector<std::pair<long, long>>& slopes,
                                               double margin = 1e-3);

}  // namespace skein::pillow
