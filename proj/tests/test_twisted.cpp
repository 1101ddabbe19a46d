#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "skein/errors.hpp"
#include "skein/twisted.hpp"

using namespace skein;
using namespace skein::twisted;
using arith::GaussianInt;
using torus::TorusMulticurve;

namespace {

GaussianInt g(long re, long im = 0) { return GaussianInt{re, im}; }

SkeinElement at_i(const TorusMulticurve& c) { return SkeinElement::curve(minus_i(), c); }

}  // namespace

TEST_CASE("phi_map examples") {
  auto m = TorusMulticurve::simple(1, 0);
  CHECK(phi_map(m) == TwistedElement::basis(m, {1, 0}, g(-1)));
  CHECK(phi_map(TorusMulticurve::empty()) == TwistedElement::unit());
  auto m2 = TorusMulticurve::make(2, 1, 0);
  CHECK(phi_map(m2) == TwistedElement::basis(m2, {0, 0}, g(1)));
  CHECK_THROWS_AS(phi_map(SkeinElement::curve(minus_one(), m)), SpecMismatch);
}

TEST_CASE("twisted_mul examples") {
  auto m = TorusMulticurve::simple(1, 0), l = TorusMulticurve::simple(0, 1);
  auto x = TwistedElement::basis(m, {1, 0}, g(1));
  CHECK(twisted_mul(TwistedElement::unit(), x) == x);
  CHECK(twisted_mul(x, x) == TwistedElement::basis(TorusMulticurve::make(2, 1, 0), {0, 0}, g(1)));

  auto y = TwistedElement::basis(l, {0, 1}, g(1));
  auto at_minus_one = torus::skein_mul(SkeinElement::curve(minus_one(), m), SkeinElement::curve(minus_one(), l));
  TwistedElement expect;
  for (const auto& [c, v] : at_minus_one.terms()) expect.add_term(c, {1, 1}, v.coerce(arith::ScalarKind::Gaussian) * ExactScalar(g(0, -1)));
  CHECK(twisted_mul(x, y) == expect);
}

TEST_CASE("iso_check examples") {
  auto m = at_i(TorusMulticurve::simple(1, 0)), l = at_i(TorusMulticurve::simple(0, 1));
  CHECK(iso_check(m, m));
  CHECK(iso_check(m, l));
  gen::Rng r(1);
  for (int k = 0; k < 20; ++k) CHECK(iso_check(at_i(TorusMulticurve::empty()), at_i(gen::multicurve(r))));
}

TEST_CASE("grading zero constraint") {
  TwistedElement x;
  CHECK_THROWS_AS(x.add_term(TorusMulticurve::simple(1, 0), {0, 1}, g(1)), Error);
  CHECK_NOTHROW(x.add_term(TorusMulticurve::simple(1, 2), {1, 0}, g(1)));
}

TEST_CASE("phi_map is injective on the basis and grading compatible") {
  std::set<TwistedKey> seen;
  for (const auto& c : sweep_basis({3, 5})) {
    auto img = phi_map(c);
    REQUIRE(img.terms().size() == 1);
    const auto& [key, coeff] = *img.terms().begin();
    CHECK(key.first == c);
    CHECK((coeff == ExactScalar(g(1)) || coeff == ExactScalar(g(-1)) || coeff == ExactScalar(g(0, 1)) ||
           coeff == ExactScalar(g(0, -1))));
    CHECK(seen.insert(key).second);
  }
}

TEST_CASE("trivial loop is the same scalar on both sides") {
  auto [skein_side, twisted_side] = trivial_loop_values();
  CHECK(skein_side == twisted_side);
  CHECK(skein_side == ExactScalar(g(2)));
  // In K(torus, -1) the loop is -2, and phi multiplies by (-1)^{n} with n = 1.
  auto s = minus_one();
  CHECK(-(s.a_power(2) + s.a_power(-2)) == ExactScalar(arith::BigInt(-2)));
}

TEST_CASE("small sweep passes") {
  auto r = iso_sweep({1, 1});
  CHECK(r.basis_size == 5);
  CHECK(r.pairs == 25);
  CHECK(r.failures.empty());
}

TEST_CASE("full sweep passes with the reflected labeling") {
  SweepOptions opts;
  opts.threads = 4;
  auto r = iso_sweep({3, 5}, opts);
  CHECK(r.basis_size == 121);
  CHECK(r.pairs == 121 * 121);
  CHECK(r.failures.empty());
}

TEST_CASE("literal labeling fails by a global sign") {
  SweepOptions opts;
  opts.labeling = Labeling::Literal;
  opts.threads = 4;
  auto r = iso_sweep({2, 3}, opts);
  REQUIRE_FALSE(r.failures.empty());
  for (const auto& f : r.failures) CHECK(f.lhs == f.rhs.scaled(g(-1)));
}

TEST_CASE("fault injection is reported") {
  SweepOptions opts;
  opts.corrupt = TorusMulticurve::simple(1, 0);
  auto r = iso_sweep({1, 1}, opts);
  REQUIRE_FALSE(r.failures.empty());
  bool listed = false;
  for (const auto& f : r.failures) listed = listed || (f.x == TorusMulticurve::empty() && f.y == TorusMulticurve::simple(1, 0));
  CHECK(listed);
}

TEST_CASE("sweep results do not depend on thread count") {
  SweepOptions one, many;
  one.labeling = many.labeling = Labeling::Literal;
  many.threads = 3;
  auto a = iso_sweep({2, 2}, one), b = iso_sweep({2, 2}, many);
  REQUIRE(a.failures.size() == b.failures.size());
  for (size_t k = 0; k < a.failures.size(); ++k) {
    CHECK(a.failures[k].x == b.failures[k].x);
    CHECK(a.failures[k].y == b.failures[k].y);
  }
}
