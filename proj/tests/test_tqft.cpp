#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "skein/errors.hpp"
#include "skein/quadrature.hpp"
#include "skein/tqft.hpp"
#include "skein/twisted.hpp"

using namespace skein;
using namespace skein::tqft;

namespace {

TrivalentGraph k4() {
  return TrivalentGraph({{"a", {0, 1}}, {"b", {0, 2}}, {"c", {0, 3}}, {"d", {1, 2}}, {"e", {1, 3}}, {"f", {2, 3}}});
}

TrivalentGraph prism() {
  return TrivalentGraph({{"a", {0, 1}},
                         {"b", {1, 2}},
                         {"c", {2, 0}},
                         {"d", {3, 4}},
                         {"e", {4, 5}},
                         {"f", {5, 3}},
                         {"g", {0, 3}},
                         {"h", {1, 4}},
                         {"i", {2, 5}}});
}

// Theta plus a separate circle.
TrivalentGraph theta_and_circle() {
  return TrivalentGraph({{"a", {0, 1}}, {"b", {0, 1}}, {"c", {0, 1}}, {"o", {}}});
}

std::vector<TrivalentGraph> graphs() {
  return {TrivalentGraph::circle(), TrivalentGraph::circle(2), TrivalentGraph::theta(), TrivalentGraph::dumbbell(),
          k4(), prism(), theta_and_circle()};
}

// Every coloring in {0..p/2-2}^E, filtered by the vertex conditions.
void brute_force(const TrivalentGraph& g, long long p, const std::function<void(const Coloring&)>& visit) {
  const int E = g.d_G();
  const int top = static_cast<int>(p / 2 - 2);
  Coloring c(E, 0);
  for (;;) {
    bool ok = true;
    for (const auto& inc : g.incidence()) ok = ok && vertex_admissible(c[inc[0]], c[inc[1]], c[inc[2]], p);
    if (ok) visit(c);
    int k = E - 1;
    while (k >= 0 && ++c[k] > top) c[k--] = 0;
    if (k < 0) break;
  }
}

double brute_trace(const TrivalentGraph& g, const EdgeMulti& m, const Rational& theta, long long p) {
  double total = 0.0;
  brute_force(g, p, [&](const Coloring& c) {
    double prod = 1.0;
    for (int e = 0; e < g.d_G(); ++e) prod *= std::pow(-2.0 * std::cos(2 * std::numbers::pi * boost::rational_cast<double>(theta) * (c[e] + 1)), m[e]);
    total += prod;
  });
  return total;
}

int components(const TrivalentGraph& g) {
  std::vector<int> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  int circles = 0;
  for (const auto& e : g.edges()) {
    if (e.is_circle())
      ++circles;
    else
      parent[find(e.ends[0])] = find(e.ends[1]);
  }
  int c = 0;
  for (int v = 0; v < g.vertex_count(); ++v) c += find(v) == v;
  return c + circles;
}

EdgeMulti random_multi(gen::Rng& r, const TrivalentGraph& g, int top = 3) {
  EdgeMulti m(g.d_G());
  for (auto& x : m) x = static_cast<int>(r.uniform(0, top));
  return m;
}

bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("coloring counts on small graphs") {
  CHECK(count_colorings(TrivalentGraph::circle(), 4) == 1);
  for (long long n = 1; n <= 10; ++n) CHECK(count_colorings(TrivalentGraph::circle(), 4 * n) == static_cast<std::uint64_t>(2 * n - 1));
  // p = 8: colors 0..2; (0,0,0), (0,1,1) x3, (0,2,2) x3, (1,1,2) x3 with sum <= 4
  CHECK(count_colorings(TrivalentGraph::theta(), 8) == 10);
  CHECK(count_colorings(TrivalentGraph::circle(2), 8) == 9);
  CHECK_THROWS_AS(count_colorings(TrivalentGraph::theta(), 7), Error);
  CHECK_THROWS_AS(count_colorings(TrivalentGraph::theta(), 2), Error);
}

TEST_CASE("enumeration matches brute force") {
  for (const auto& g : graphs())
    for (long long p : {4LL, 6LL, 8LL, 10LL}) {
      std::set<Coloring> fast, slow;
      enumerate_colorings(g, p, [&](const Coloring& c) { CHECK(fast.insert(c).second); });
      brute_force(g, p, [&](const Coloring& c) { slow.insert(c); });
      CHECK(fast == slow);
      CHECK(count_colorings(g, p) == slow.size());
    }
}

TEST_CASE("trace_sum and the contracted sum match brute force") {
  gen::Rng r(21);
  for (const auto& g : graphs())
    for (int k = 0; k < 6; ++k) {
      long long p = 2 * r.uniform(2, 5);
      Rational theta(2 * r.uniform(0, 3 * p) + 1, p);
      if (theta.denominator() != p) continue;
      auto m = random_multi(r, g);
      double expect = brute_trace(g, m, theta, p);
      CHECK(close(trace_sum(g, m, theta, p), expect));
      CHECK(close(trace_sum_contracted(g, m, theta, p), expect));
      CHECK(trace_sum(g, m, theta, p, 3) == trace_sum(g, m, theta, p, 1));
    }
}

TEST_CASE("m = 0 counts colorings") {
  for (const auto& g : graphs()) {
    EdgeMulti zero(g.d_G(), 0);
    CHECK(trace_sum(g, zero, Rational(-3, 8), 8) == static_cast<double>(count_colorings(g, 8)));
  }
}

TEST_CASE("circle with m = 2 sums to 4(n - 1)") {
  AdmissibleSequence seq;
  for (long long n = 1; n <= 30; ++n) {
    REQUIRE(seq.admissible_at(n));
    CHECK(close(trace_sum(TrivalentGraph::circle(), {2}, seq.theta(n), seq.p(n)), 4.0 * (n - 1), 1e-12));
    CHECK(close(normalized_trace(TrivalentGraph::circle(), {2}, seq, n), 2.0 * (n - 1) / n, 1e-12));
  }
}

TEST_CASE("contracted sum on larger instances") {
  AdmissibleSequence seq;
  gen::Rng r(22);
  for (const auto& g : {TrivalentGraph::theta(), TrivalentGraph::dumbbell(), k4()}) {
    auto m = random_multi(r, g, 2);
    CHECK(close(trace_sum_contracted(g, m, seq.theta(6), seq.p(6)), trace_sum(g, m, seq.theta(6), seq.p(6))));
  }
  CHECK(trace_sum_contracted(TrivalentGraph(), {}, Rational(-1, 4) + Rational(1, 8), 8) == 1.0);
  CHECK(trace_sum(TrivalentGraph(), {}, Rational(3, 8), 8) == 1.0);
}

TEST_CASE("admissible sequences") {
  AdmissibleSequence seq;
  CHECK(seq.theta(5) == Rational(-9, 20));
  CHECK(seq.admissible_at(5));
  AdmissibleSequence bad;
  bad.zeta = 2;
  CHECK_FALSE(bad.admissible_at(3));
}

TEST_CASE("cycle space and Lambda_B") {
  for (const auto& g : graphs()) {
    int non_circle = g.d_G() - g.circle_count();
    CHECK(g.cycle_dimension() == non_circle - g.vertex_count() + components(g));
    for (int B : {2, 4}) {
      auto classes = lambda_B_classes(g, B);
      double expect = std::pow(B / 2.0, g.d_G()) * std::pow(2.0, g.cycle_dimension());
      CHECK(static_cast<double>(classes.size()) == expect);
    }
    for (const auto& cyc : g.cycle_basis())
      for (const auto& inc : g.incidence()) CHECK((cyc[inc[0]] + cyc[inc[1]] + cyc[inc[2]]) % 2 == 0);
  }
  CHECK(lambda_B_classes(TrivalentGraph::circle(), 2) == std::vector<std::vector<int>>{{0}, {1}});
  CHECK(lambda_B_classes(TrivalentGraph::theta(), 2).size() == 4);
  CHECK_THROWS_AS(lambda_B_classes(TrivalentGraph::theta(), 3), Error);
}

TEST_CASE("class_vanishes examples") {
  CHECK_FALSE(class_vanishes(TrivalentGraph::circle(), {1}));
  CHECK(class_vanishes(TrivalentGraph::circle(), {2}));
  CHECK_FALSE(class_vanishes(TrivalentGraph::theta(), {1, 1, 0}));
  CHECK(class_vanishes(TrivalentGraph::theta(), {1, 1, 1}));
  CHECK_FALSE(class_vanishes(TrivalentGraph::theta(), {1, 0, 0}));
  CHECK(class_vanishes(TrivalentGraph::dumbbell(), {0, 1, 0}));
  CHECK_FALSE(class_vanishes(TrivalentGraph::dumbbell(), {1, 0, 0}));
  CHECK_THROWS_AS(class_vanishes(TrivalentGraph::theta(), {1, 0}), Error);
}

TEST_CASE("central binomial integrals") {
  for (int m = 0; m <= 12; ++m) {
    double q = quad::gauss_legendre_1d([m](double t) { return std::pow(2 * std::cos(std::numbers::pi * t), m); }, 0, 1);
    CHECK(std::abs(central_binomial_integral(m) - q) < 1e-9);
  }
  CHECK(central_binomial_integral(4) == 6.0);
  CHECK_THROWS_AS(central_binomial_integral(-1), Error);
}

TEST_CASE("tracei examples") {
  CHECK(close(tracei_value(TrivalentGraph::circle(), {0}).value, 1.0));
  CHECK(close(tracei_value(TrivalentGraph::circle(), {2}).value, 2.0));
  CHECK(close(tracei_value(TrivalentGraph::circle(), {4}).value, 6.0));
  CHECK(tracei_value(TrivalentGraph::circle(), {3}).value == 0.0);
  CHECK(tracei_value(TrivalentGraph::theta(), {1, 0, 0}).value == 0.0);
  // Theta, m = 0: 2^{2-3} vol(U_theta), vol = 1 - 3/6 - 1/6
  CHECK(close(tracei_value(TrivalentGraph::theta(), {0, 0, 0}).value, 1.0 / 6));
}

TEST_CASE("Riemann sums converge to tracei") {
  AdmissibleSequence seq;
  for (const auto& [g, m] : std::vector<std::pair<TrivalentGraph, EdgeMulti>>{
           {TrivalentGraph::theta(), {0, 0, 0}}, {TrivalentGraph::theta(), {1, 1, 1}}, {TrivalentGraph::dumbbell(), {2, 0, 0}}}) {
    double ref = tracei_value(g, m).value;
    CHECK(std::abs(normalized_trace(g, m, seq, 60) - ref) < 0.05 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("convergence table is monotone with error 2/n") {
  auto rows = convergence_table(TrivalentGraph::circle(), {2}, AdmissibleSequence{}, {10, 20, 40, 80}, 2.0);
  REQUIRE(rows.size() == 4);
  for (size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].p == 4 * rows[k].n);
    CHECK(close(rows[k].error, 2.0 / rows[k].n, 1e-12));
    if (k > 0) CHECK(rows[k].error < rows[k - 1].error);
  }
}

TEST_CASE("Monte Carlo limit agrees with tracei") {
  AdmissibleSequence seq;
  LimitOptions opts;
  opts.samples = 100000;
  opts.seed = 9;
  for (const auto& [g, m] : std::vector<std::pair<TrivalentGraph, EdgeMulti>>{
           {TrivalentGraph::circle(), {2}}, {TrivalentGraph::theta(), {1, 1, 1}}, {TrivalentGraph::theta(), {2, 0, 0}},
           {TrivalentGraph::dumbbell(), {0, 2, 0}}}) {
    auto est = limit_trace(g, m, seq, opts);
    auto ref = tracei_value(g, m);
    CHECK(std::abs(est.value - ref.value) <= 4 * std::hypot(est.stderr_, ref.error) + 1e-12);
  }
  // Odd class: every sample is an exact zero.
  auto zero = limit_trace(TrivalentGraph::theta(), {1, 0, 0}, seq, opts);
  CHECK(std::abs(zero.value) < 1e-12);
}

TEST_CASE("torus limit form is linear with <empty> = 1") {
  AdmissibleSequence seq;
  LimitOptions opts;
  opts.samples = 20000;
  auto spec = twisted::minus_i();
  auto e = torus::SkeinElement::curve(spec, torus::TorusMulticurve::empty());
  CHECK(torus_limit_form(e, seq, opts) == std::complex<double>(1.0, 0.0));
  gen::Rng r(23);
  for (int k = 0; k < 20; ++k) {
    auto x = gen::skein(r, spec), y = gen::skein(r, spec);
    auto lhs = torus_limit_form(x + y.scaled(arith::GaussianInt{2, 1}), seq, opts);
    auto rhs = torus_limit_form(x, seq, opts) + std::complex<double>(2, 1) * torus_limit_form(y, seq, opts);
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
  }
  // Same copy count, different slopes, same value.
  auto a = torus::SkeinElement::curve(spec, torus::TorusMulticurve::make(2, 1, 0));
  auto b = torus::SkeinElement::curve(spec, torus::TorusMulticurve::make(2, 2, 3));
  CHECK(torus_limit_form(a, seq, opts) == torus_limit_form(b, seq, opts));
}

TEST_CASE("gram probe on a small basis") {
  auto spec = twisted::minus_i();
  std::vector<torus::SkeinElement> basis;
  for (auto c : {torus::TorusMulticurve::empty(), torus::TorusMulticurve::simple(1, 0), torus::TorusMulticurve::simple(0, 1)})
    basis.push_back(torus::SkeinElement::curve(spec, c));
  LimitOptions opts;
  opts.samples = 50000;
  auto rep = gram_probe(basis, AdmissibleSequence{}, opts);
  REQUIRE(rep.matrix.size() == 3);
  CHECK(rep.matrix[0][0] == std::complex<double>(1.0, 0.0));
  CHECK(rep.eigenvalues.size() == 3);
  CHECK(std::is_sorted(rep.eigenvalues.begin(), rep.eigenvalues.end()));
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) CHECK(std::abs(rep.hermitian[i][j] - std::conj(rep.hermitian[j][i])) < 1e-15);
  CHECK(rep.max_stderr > 0.0);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(TrivalentGraph(std::vector<GraphEdge>{{"a", {0, 1}}}), MalformedGraph);
  CHECK_THROWS_AS(TrivalentGraph(std::vector<GraphEdge>{{"a", {0}}}), MalformedGraph);
  CHECK_THROWS_AS(TrivalentGraph({{"a", {0, 0}}, {"b", {0, 1}}}), MalformedGraph);
  CHECK_THROWS_AS(trace_sum(TrivalentGraph::theta(), {1, 1}, Rational(1, 8), 8), Error);
  CHECK_THROWS_AS(trace_sum(TrivalentGraph::theta(), {1, -1, 0}, Rational(1, 8), 8), Error);
}
