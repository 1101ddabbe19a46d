#pragma once

// Skein algebra of the torus, computed through its embedding into the
// quantum torus T = Z[A^{+-1}]<L^{+-1}, M^{+-1}> / (LM = A^2 ML).
//
// A multicurve on the torus is d parallel copies of a primitive curve (p, q);
// its image is Phi(p, q)^d with Phi(p, q) = A^{pq} (M^p L^q + M^{-p} L^{-q}).
// Multiplication of skein elements is nc_mul of the images followed by
// triangular elimination back onto the multicurve basis.

#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "skein/arith.hpp"

namespace skein::torus {

using arith::ExactScalar;
using arith::ScalarKind;
using arith::Specialization;

// Exponents (p, q) of the monomial M^p L^q.
using Exponent = std::pair<long, long>;

class NCTorusElement {
 public:
  NCTorusElement() = default;

  static NCTorusElement unit(const Specialization& spec);
  static NCTorusElement monomial(long p, long q, ExactScalar coeff);

  const std::map<Exponent, ExactScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Zero of the right kind when the exponent is absent.
  ExactScalar coeff(long p, long q, ScalarKind kind) const;

  void add_term(long p, long q, const ExactScalar& c);

  // sigma(M^p L^q) = M^{-p} L^{-q}.
  NCTorusElement sigma() const;
  bool is_symmetric() const;

  NCTorusElement& operator+=(const NCTorusElement& o);
  NCTorusElement& operator-=(const NCTorusElement& o);
  friend NCTorusElement operator+(NCTorusElement x, const NCTorusElement& y) { return x += y; }
  friend NCTorusElement operator-(NCTorusElement x, const NCTorusElement& y) { return x -= y; }
  NCTorusElement scaled(const ExactScalar& c) const;

  friend bool operator==(const NCTorusElement& x, const NCTorusElement& y);
  // Coefficient-wise comparison after coercion to complex.
  bool approx_equal(const NCTorusElement& o, double tol) const;

  std::string to_string() const;

 private:
  std::map<Exponent, ExactScalar> terms_;
};

// Bilinear extension of (M^p L^q)(M^r L^s) = A^{2qr} M^{p+r} L^{q+s}.
NCTorusElement nc_mul(const NCTorusElement& x, const NCTorusElement& y, const Specialization& spec);

class TorusMulticurve {
 public:
  // The empty multicurve.
  TorusMulticurve() = default;
  static TorusMulticurve empty() { return {}; }
  // d parallel copies of (p, q). Orientation is canonicalised to p > 0 or
  // (p, q) = (0, 1); throws skein::Error if d < 1 or gcd(|p|, |q|) != 1.
  static TorusMulticurve make(int d, long p, long q);
  static TorusMulticurve simple(long p, long q) { return make(1, p, q); }

  bool is_empty() const { return d_ == 0; }
  int copies() const { return d_; }
  long p() const { return p_; }
  long q() const { return q_; }
  // Number of components n(gamma).
  int components() const { return d_; }
  // Integral homology class (d p, d q); (0, 0) for the empty curve.
  Exponent homology() const { return {d_ * p_, d_ * q_}; }

  std::string to_string() const;

  friend auto operator<=>(const TorusMulticurve&, const TorusMulticurve&) = default;
  friend bool operator==(const TorusMulticurve&, const TorusMulticurve&) = default;

 private:
  int d_ = 0;
  long p_ = 0;
  long q_ = 0;
};

class SkeinElement {
 public:
  explicit SkeinElement(Specialization spec) : spec_(spec) {}

  static SkeinElement curve(const Specialization& spec, const TorusMulticurve& c);
  static SkeinElement curve(const Specialization& spec, const TorusMulticurve& c, const ExactScalar& coeff);

  const Specialization& spec() const { return spec_; }
  const std::map<TorusMulticurve, ExactScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  ExactScalar coeff(const TorusMulticurve& c) const;

  // Coefficients must already be of kind spec().kind().
  void add_term(const TorusMulticurve& c, const ExactScalar& coeff);

  SkeinElement& operator+=(const SkeinElement& o);
  friend SkeinElement operator+(SkeinElement x, const SkeinElement& y) { return x += y; }
  SkeinElement scaled(const ExactScalar& c) const;

  friend bool operator==(const SkeinElement& x, const SkeinElement& y);
  bool approx_equal(const SkeinElement& o, double tol) const;

  std::string to_string() const;

 private:
  Specialization spec_;
  std::map<TorusMulticurve, ExactScalar> terms_;
};

// Image of a multicurve in T: Phi(p, q)^d, the unit for the empty curve.
NCTorusElement phi(const TorusMulticurve& c, const Specialization& spec);
NCTorusElement phi(const SkeinElement& x);

// Unique skein element with phi(result) == x. Throws NotSymmetric if x is not
// sigma-invariant and NotInImage if the elimination does not reproduce x.
SkeinElement phi_inverse(const NCTorusElement& x, const Specialization& spec);

// Stacking product. Throws SpecMismatch for operands at different specializations.
SkeinElement skein_mul(const SkeinElement& x, const SkeinElement& y);

// Z_2^2 grading classes (d p mod 2, d q mod 2) of the supported multicurves.
std::set<std::pair<int, int>> grading(const SkeinElement& x);

}  // namespace skein::torus
