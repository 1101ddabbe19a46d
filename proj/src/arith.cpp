#include "skein/arith.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "skein/errors.hpp"

namespace skein::arith {

namespace {

long floor_mod(long x, long m) {
  long r = x % m;
  return r < 0 ? r + m : r;
}

// e^{i pi num/den} with num reduced modulo 2 den before the trig call.
Complex unit_root(long num, long den) {
  long r = floor_mod(num, 2 * den);
  double angle = std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(BigInt constant) { add_term(0, constant); }

LaurentPoly LaurentPoly::monomial(long exponent, BigInt coeff) {
  LaurentPoly p;
  p.add_term(exponent, coeff);
  return p;
}

BigInt LaurentPoly::coeff(long exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? BigInt(0) : it->second;
}

void LaurentPoly::add_term(long exponent, const BigInt& c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(exponent, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly r;
  for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(-e, c);
  return r;
}

LaurentPoly LaurentPoly::shifted(long k) const {
  LaurentPoly r;
  for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(e + k, c);
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.coeffs_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.coeffs_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y) {
  LaurentPoly r;
  for (const auto& [e1, c1] : x.coeffs_)
    for (const auto& [e2, c2] : y.coeffs_) r.add_term(e1 + e2, c1 * c2);
  return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r;
  for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(e, -c);
  return r;
}

Complex LaurentPoly::evaluate(Complex a) const {
  Complex sum = 0.0;
  for (const auto& [e, c] : coeffs_)
    sum += c.convert_to<double>() * std::pow(a, static_cast<double>(e));
  return sum;
}

std::string LaurentPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const auto& [e, c] = *it;
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << "*";
    os << "A";
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

LaurentPoly laurent_mul(const LaurentPoly& x, const LaurentPoly& y) { return x * y; }

// ---------------------------------------------------------------- Gaussian

Complex GaussianInt::to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }

std::string GaussianInt::to_string() const {
  std::ostringstream os;
  if (im == 0) {
    os << re;
  } else if (re == 0) {
    os << (im == 1 ? "" : im == -1 ? "-" : im.str()) << "i";
  } else {
    BigInt mag = im < 0 ? BigInt(-im) : im;
    os << re << (im < 0 ? " - " : " + ") << (mag == 1 ? "" : mag.str()) << "i";
  }
  return os.str();
}

GaussianInt i_power(long k) {
  switch (floor_mod(k, 4)) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

std::string kind_name(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::Integer: return "integer";
    case ScalarKind::Gaussian: return "gaussian";
    case ScalarKind::Laurent: return "laurent";
    case ScalarKind::Complex: return "complex";
  }
  return "?";
}

// ---------------------------------------------------------------- ExactScalar

ExactScalar ExactScalar::zero(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::Integer: return BigInt(0);
    case ScalarKind::Gaussian: return GaussianInt{};
    case ScalarKind::Laurent: return LaurentPoly{};
    case ScalarKind::Complex: return Complex(0.0);
  }
  return {};
}

ExactScalar ExactScalar::one(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::Integer: return BigInt(1);
    case ScalarKind::Gaussian: return GaussianInt{1, 0};
    case ScalarKind::Laurent: return LaurentPoly(1);
    case ScalarKind::Complex: return Complex(1.0);
  }
  return {};
}

const BigInt& ExactScalar::as_integer() const {
  if (auto* p = std::get_if<BigInt>(&value_)) return *p;
  throw IncompatibleVariants("expected integer scalar, got " + kind_name(kind()));
}

const GaussianInt& ExactScalar::as_gaussian() const {
  if (auto* p = std::get_if<GaussianInt>(&value_)) return *p;
  throw IncompatibleVariants("expected gaussian scalar, got " + kind_name(kind()));
}

const LaurentPoly& ExactScalar::as_laurent() const {
  if (auto* p = std::get_if<LaurentPoly>(&value_)) return *p;
  throw IncompatibleVariants("expected laurent scalar, got " + kind_name(kind()));
}

Complex ExactScalar::as_complex() const {
  if (auto* p = std::get_if<Complex>(&value_)) return *p;
  throw IncompatibleVariants("expected complex scalar, got " + kind_name(kind()));
}

bool ExactScalar::is_zero() const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BigInt>) return v == 0;
        else if constexpr (std::is_same_v<T, Complex>) return std::abs(v) <= kComplexZeroTol;
        else return v.is_zero();
      },
      value_);
}

ExactScalar ExactScalar::coerce(ScalarKind target) const {
  ScalarKind from = kind();
  if (from == target) return *this;
  if (from == ScalarKind::Integer) {
    const BigInt& v = as_integer();
    switch (target) {
      case ScalarKind::Gaussian: return GaussianInt{v, 0};
      case ScalarKind::Laurent: return LaurentPoly(v);
      case ScalarKind::Complex: return Complex(v.convert_to<double>(), 0.0);
      default: break;
    }
  }
  if (from == ScalarKind::Gaussian && target == ScalarKind::Complex) return as_gaussian().to_complex();
  throw IncompatibleVariants("cannot coerce " + kind_name(from) + " to " + kind_name(target));
}

ExactScalar ExactScalar::conj() const {
  return std::visit(
      [](const auto& v) -> ExactScalar {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BigInt>) return v;
        else if constexpr (std::is_same_v<T, GaussianInt>) return v.conj();
        else if constexpr (std::is_same_v<T, LaurentPoly>) return v.bar();
        else return std::conj(v);
      },
      value_);
}

ExactScalar ExactScalar::operator-() const {
  return std::visit([](const auto& v) -> ExactScalar {
    using T = std::decay_t<decltype(v)>;
    return ExactScalar(T(-v));
  }, value_);
}

namespace {

void require_same(const ExactScalar& x, const ExactScalar& y, const char* op) {
  if (x.kind() != y.kind())
    throw IncompatibleVariants(std::string(op) + " of " + kind_name(x.kind()) + " and " +
                               kind_name(y.kind()) + " without coercion");
}

template <class Op>
ExactScalar combine(const ExactScalar& x, const ExactScalar& y, Op op) {
  return std::visit(
      [&](const auto& a) -> ExactScalar {
        using T = std::decay_t<decltype(a)>;
        return op(a, std::get<T>(y.storage()));
      },
      x.storage());
}

}  // namespace

ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
  require_same(x, y, "addition");
  return combine(x, y, [](const auto& a, const auto& b) {
    using T = std::decay_t<decltype(a)>;
    return ExactScalar(T(a + b));
  });
}

ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) {
  require_same(x, y, "subtraction");
  return combine(x, y, [](const auto& a, const auto& b) {
    using T = std::decay_t<decltype(a)>;
    return ExactScalar(T(a - b));
  });
}

ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
  require_same(x, y, "multiplication");
  return combine(x, y, [](const auto& a, const auto& b) {
    using T = std::decay_t<decltype(a)>;
    return ExactScalar(T(a * b));
  });
}

bool operator==(const ExactScalar& x, const ExactScalar& y) {
  require_same(x, y, "comparison");
  return x.value_ == y.value_;
}

std::string ExactScalar::to_string() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BigInt>) {
          return v.str();
        } else if constexpr (std::is_same_v<T, Complex>) {
          std::ostringstream os;
          os.precision(17);
          os << "(" << v.real() << ", " << v.imag() << ")";
          return os.str();
        } else {
          return v.to_string();
        }
      },
      value_);
}

bool approx_equal(const ExactScalar& x, const ExactScalar& y, double tol) {
  Complex a = x.coerce(ScalarKind::Complex).as_complex();
  Complex b = y.coerce(ScalarKind::Complex).as_complex();
  return std::abs(a - b) <= tol;
}

// ---------------------------------------------------------------- Specialization

Specialization Specialization::root(long a, long b) {
  if (b <= 0) throw Error("specialization denominator must be positive");
  if (std::gcd(a, b) != 1) throw Error("specialization a/b must be in lowest terms");
  Specialization s;
  s.formal_ = false;
  s.a_ = a;
  s.b_ = b;
  return s;
}

ScalarKind Specialization::kind() const {
  if (formal_) return ScalarKind::Laurent;
  if (b_ == 1) return ScalarKind::Integer;
  if (b_ == 2) return ScalarKind::Gaussian;
  return ScalarKind::Complex;
}

ExactScalar Specialization::a_power(long k) const {
  if (formal_) return LaurentPoly::monomial(k);
  // A^k = e^{i pi a k / b}; reduce a*k modulo 2b in 128-bit to avoid overflow.
  auto ak = static_cast<__int128>(a_) * k;
  long r = static_cast<long>(((ak % (2 * b_)) + 2 * b_) % (2 * b_));
  switch (kind()) {
    case ScalarKind::Integer: return BigInt(r == 0 ? 1 : -1);
    case ScalarKind::Gaussian: return i_power(r);
    default: return unit_root(r, b_);
  }
}

Complex Specialization::value() const {
  if (formal_) throw Error("formal specialization has no numerical value");
  return unit_root(a_, b_);
}

std::string Specialization::to_string() const {
  if (formal_) return "formal";
  return std::to_string(a_) + "/" + std::to_string(b_);
}

bool operator==(const Specialization& x, const Specialization& y) {
  if (x.formal_ || y.formal_) return x.formal_ == y.formal_;
  return x.b_ == y.b_ && floor_mod(x.a_ - y.a_, 2 * x.b_) == 0;
}

ExactScalar specialize(const LaurentPoly& x, const Specialization& spec) {
  if (spec.is_formal()) return x;
  ExactScalar sum = ExactScalar::zero(spec.kind());
  for (const auto& [e, c] : x.coeffs()) sum += ExactScalar(c).coerce(spec.kind()) * spec.a_power(e);
  return sum;
}

ExactScalar specialize(const LaurentPoly& x, long a, long b) {
  return specialize(x, Specialization::root(a, b));
}

}  // namespace skein::arith
