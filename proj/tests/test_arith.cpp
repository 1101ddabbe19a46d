#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "skein/arith.hpp"
#include "skein/errors.hpp"

using namespace skein;
using namespace skein::arith;

namespace {

LaurentPoly A(long k, long c = 1) { return LaurentPoly::monomial(k, BigInt(c)); }

// Dense convolution over a shifted exponent window.
LaurentPoly dense_mul(const LaurentPoly& x, const LaurentPoly& y) {
  if (x.is_zero() || y.is_zero()) return {};
  long lo_x = x.coeffs().begin()->first, hi_x = x.coeffs().rbegin()->first;
  long lo_y = y.coeffs().begin()->first, hi_y = y.coeffs().rbegin()->first;
  std::vector<BigInt> cx(hi_x - lo_x + 1), cy(hi_y - lo_y + 1), out(cx.size() + cy.size() - 1);
  for (long e = lo_x; e <= hi_x; ++e) cx[e - lo_x] = x.coeff(e);
  for (long e = lo_y; e <= hi_y; ++e) cy[e - lo_y] = y.coeff(e);
  for (size_t i = 0; i < cx.size(); ++i)
    for (size_t j = 0; j < cy.size(); ++j) out[i + j] += cx[i] * cy[j];
  LaurentPoly r;
  for (size_t k = 0; k < out.size(); ++k) r += A(lo_x + lo_y + static_cast<long>(k)) * LaurentPoly(out[k]);
  return r;
}

Complex evaluate_at(const LaurentPoly& x, long a, long b) {
  Complex total = 0.0;
  for (const auto& [e, c] : x.coeffs())
    total += c.convert_to<double>() * std::polar(1.0, std::numbers::pi * static_cast<double>(a * e) / static_cast<double>(b));
  return total;
}

// 1e-12 relative to the magnitude of the values.
bool close(const ExactScalar& x, const ExactScalar& y) {
  Complex a = x.coerce(ScalarKind::Complex).as_complex(), b = y.coerce(ScalarKind::Complex).as_complex();
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("laurent_mul examples") {
  CHECK(laurent_mul(A(1) + A(-1), A(1) - A(-1)) == A(2) - A(-2));
  LaurentPoly x = A(3, 2) - A(-4, 7);
  CHECK(laurent_mul(LaurentPoly(1), x) == x);
  CHECK(laurent_mul(A(1) + A(-1), A(1) + A(-1)) == A(2) + LaurentPoly(2) + A(-2));
}

TEST_CASE("canonical form drops zero coefficients") {
  LaurentPoly x = A(2, 3) + A(2, -3);
  CHECK(x.is_zero());
  CHECK(x.coeffs().empty());
  CHECK(x == LaurentPoly());
}

TEST_CASE("laurent_mul agrees with dense convolution") {
  gen::Rng r(101);
  for (int k = 0; k < 300; ++k) {
    auto x = gen::laurent(r), y = gen::laurent(r);
    CHECK(laurent_mul(x, y) == dense_mul(x, y));
  }
}

TEST_CASE("specialize examples") {
  auto s = specialize(A(1) + A(-1), -1, 2);
  CHECK(s.kind() == ScalarKind::Gaussian);
  CHECK(s.is_zero());
  CHECK(specialize(A(2), -1, 2) == ExactScalar(GaussianInt{-1, 0}));
  CHECK(specialize(A(1), 1, 1) == ExactScalar(BigInt(-1)));
  CHECK(specialize(A(1), -1, 2) == ExactScalar(GaussianInt{0, -1}));
  CHECK(specialize(A(1), 1, 2) == ExactScalar(GaussianInt::i()));
  CHECK(specialize(A(3), 0, 1) == ExactScalar(BigInt(1)));
  CHECK(specialize(A(1), 1, 3).kind() == ScalarKind::Complex);
}

TEST_CASE("specialize rejects non-reduced roots") {
  CHECK_THROWS_AS(Specialization::root(2, 4), Error);
  CHECK_THROWS_AS(Specialization::root(1, 0), Error);
}

TEST_CASE("specialize is a ring homomorphism") {
  gen::Rng r(7);
  const std::vector<std::pair<long, long>> exact = {{0, 1}, {1, 1}, {1, 2}, {-1, 2}};
  const std::vector<std::pair<long, long>> floats = {{1, 3}, {-1, 4}, {3, 4}, {2, 5}, {-1, 6}, {5, 6}};
  for (int k = 0; k < 200; ++k) {
    auto x = gen::laurent(r), y = gen::laurent(r);
    for (auto [a, b] : exact) {
      CHECK(specialize(x * y, a, b) == specialize(x, a, b) * specialize(y, a, b));
      CHECK(specialize(x + y, a, b) == specialize(x, a, b) + specialize(y, a, b));
    }
    for (auto [a, b] : floats) {
      CHECK(close(specialize(x * y, a, b), specialize(x, a, b) * specialize(y, a, b)));
      CHECK(close(specialize(x + y, a, b), specialize(x, a, b) + specialize(y, a, b)));
    }
  }
}

TEST_CASE("specialize matches direct complex evaluation") {
  gen::Rng r(8);
  for (int k = 0; k < 200; ++k) {
    auto x = gen::laurent(r);
    for (auto [a, b] : std::vector<std::pair<long, long>>{{0, 1}, {1, 1}, {1, 2}, {-1, 2}, {1, 3}, {-1, 4}, {5, 6}})
      CHECK(close(specialize(x, a, b), ExactScalar(evaluate_at(x, a, b))));
  }
}

TEST_CASE("scalar operations") {
  ExactScalar i = GaussianInt::i();
  CHECK(i * i == ExactScalar(GaussianInt{-1, 0}));
  CHECK(ExactScalar(GaussianInt{3, 5}).conj() == ExactScalar(GaussianInt{3, -5}));
  ExactScalar sum = i.coerce(ScalarKind::Complex) + ExactScalar(Complex(0.5, 0.0));
  CHECK(sum.as_complex() == Complex(0.5, 1.0));
  CHECK(ExactScalar(A(2)).conj() == ExactScalar(A(-2)));
  CHECK(-ExactScalar(BigInt(4)) == ExactScalar(BigInt(-4)));
}

TEST_CASE("mixing variants without coercion throws") {
  ExactScalar i = GaussianInt::i();
  CHECK_THROWS_AS(i + ExactScalar(Complex(0.5, 0.0)), IncompatibleVariants);
  CHECK_THROWS_AS(ExactScalar(BigInt(1)) * i, IncompatibleVariants);
  CHECK_THROWS_AS(ExactScalar(A(1)) + ExactScalar(BigInt(1)), IncompatibleVariants);
  CHECK_THROWS_AS(ExactScalar(Complex(1.0, 0.0)).coerce(ScalarKind::Integer), IncompatibleVariants);
}

TEST_CASE("big integer coefficients do not overflow") {
  LaurentPoly x = LaurentPoly(BigInt(1) << 70);
  LaurentPoly y = laurent_mul(x, x);
  CHECK(y.coeff(0) == (BigInt(1) << 140));
  CHECK(specialize(y, 1, 2) == ExactScalar(GaussianInt{BigInt(1) << 140, 0}));
}

TEST_CASE("i_power cycles with period 4") {
  for (long k = -9; k <= 9; ++k) {
    GaussianInt expect = GaussianInt{1, 0};
    for (long j = 0; j < ((k % 4) + 4) % 4; ++j) expect = expect * GaussianInt::i();
    CHECK(i_power(k) == expect);
  }
}
