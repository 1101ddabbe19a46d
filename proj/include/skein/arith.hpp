#pragma once

// Coefficient arithmetic for skein computations: Laurent polynomials in A over
// Z, Gaussian integers, and the evaluation of A at roots e^{i pi a/b}.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace skein::arith {

using BigInt = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;

// Coefficients below this magnitude are treated as zero in float containers.
inline constexpr double kComplexZeroTol = 1e-12;

class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(BigInt constant);  // NOLINT: integers embed as constants
  LaurentPoly(int constant) : LaurentPoly(BigInt(constant)) {}  // NOLINT

  static LaurentPoly monomial(long exponent, BigInt coeff = 1);

  const std::map<long, BigInt>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  BigInt coeff(long exponent) const;

  // Substitute A -> A^{-1}.
  LaurentPoly bar() const;
  // Multiply by A^k.
  LaurentPoly shifted(long k) const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly x, const LaurentPoly& y) { return x += y; }
  friend LaurentPoly operator-(LaurentPoly x, const LaurentPoly& y) { return x -= y; }
  friend LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y);
  LaurentPoly operator-() const;
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  Complex evaluate(Complex a) const;
  std::string to_string() const;

 private:
  void add_term(long exponent, const BigInt& c);
  std::map<long, BigInt> coeffs_;  // canonical: no zero values
};

LaurentPoly laurent_mul(const LaurentPoly& x, const LaurentPoly& y);

struct GaussianInt {
  BigInt re = 0;
  BigInt im = 0;

  static GaussianInt i() { return {0, 1}; }
  bool is_zero() const { return re == 0 && im == 0; }
  GaussianInt conj() const { return {re, -im}; }
  Complex to_complex() const;
  std::string to_string() const;

  friend GaussianInt operator+(const GaussianInt& x, const GaussianInt& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend GaussianInt operator-(const GaussianInt& x, const GaussianInt& y) {
    return {x.re - y.re, x.im - y.im};
  }
  friend GaussianInt operator*(const GaussianInt& x, const GaussianInt& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  GaussianInt operator-() const { return {-re, -im}; }
  friend bool operator==(const GaussianInt&, const GaussianInt&) = default;
};

// i^k for any integer k.
GaussianInt i_power(long k);

enum class ScalarKind { Integer, Gaussian, Laurent, Complex };
std::string kind_name(ScalarKind kind);

class ExactScalar {
 public:
  using Storage = std::variant<BigInt, GaussianInt, LaurentPoly, Complex>;

  ExactScalar() : value_(BigInt(0)) {}
  ExactScalar(BigInt v) : value_(std::move(v)) {}             // NOLINT
  ExactScalar(int v) : value_(BigInt(v)) {}                   // NOLINT
  ExactScalar(GaussianInt v) : value_(std::move(v)) {}        // NOLINT
  ExactScalar(LaurentPoly v) : value_(std::move(v)) {}        // NOLINT
  ExactScalar(Complex v) : value_(v) {}                       // NOLINT

  static ExactScalar zero(ScalarKind kind);
  static ExactScalar one(ScalarKind kind);

  ScalarKind kind() const { return static_cast<ScalarKind>(value_.index()); }
  const Storage& storage() const { return value_; }

  const BigInt& as_integer() const;
  const GaussianInt& as_gaussian() const;
  const LaurentPoly& as_laurent() const;
  Complex as_complex() const;

  // Exact zero for exact kinds; |z| <= kComplexZeroTol for floats.
  bool is_zero() const;

  // Explicit widening: Integer -> Gaussian/Laurent/Complex, Gaussian -> Complex.
  // Anything else throws IncompatibleVariants.
  ExactScalar coerce(ScalarKind target) const;

  ExactScalar conj() const;
  ExactScalar operator-() const;

  friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y);
  ExactScalar& operator+=(const ExactScalar& y) { return *this = *this + y; }
  ExactScalar& operator-=(const ExactScalar& y) { return *this = *this - y; }
  ExactScalar& operator*=(const ExactScalar& y) { return *this = *this * y; }

  // Exact equality; floats compare bitwise. Mixed kinds throw.
  friend bool operator==(const ExactScalar& x, const ExactScalar& y);

  std::string to_string() const;

 private:
  Storage value_;
};

// |x - y| <= tol after coercion to complex; Laurent values are not comparable here.
bool approx_equal(const ExactScalar& x, const ExactScalar& y, double tol);

// A point A = e^{i pi a/b} with gcd(a, b) = 1, or the formal parameter.
class Specialization {
 public:
  static Specialization formal() { return Specialization(); }
  static Specialization root(long a, long b);

  bool is_formal() const { return formal_; }
  long a() const { return a_; }
  long b() const { return b_; }
  ScalarKind kind() const;

  // A^k as a scalar of kind().
  ExactScalar a_power(long k) const;
  // Numerical value of A (throws for formal).
  Complex value() const;
  std::string to_string() const;

  friend bool operator==(const Specialization& x, const Specialization& y);

 private:
  Specialization() = default;
  bool formal_ = true;
  long a_ = 0;
  long b_ = 1;
};

// Evaluate x at A = e^{i pi a/b}. Integer for b = 1, GaussianInt for b = 2,
// complex doubles otherwise.
ExactScalar specialize(const LaurentPoly& x, long a, long b);
ExactScalar specialize(const LaurentPoly& x, const Specialization& spec);

}  // namespace skein::arith
