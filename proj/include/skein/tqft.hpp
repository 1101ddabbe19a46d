#pragma once

// Curve-operator traces of the SO(3)/SU(2) TQFT on a handlebody boundary,
// written as sums over admissible colorings of a trivalent graph, their
// Riemann-sum limits as integrals over the polytope U_G, and the Gram matrix
// of the limiting trace form on the torus.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "skein/quadrature.hpp"
#include "skein/torus_skein.hpp"

namespace skein::tqft {

using Rational = boost::rational<long long>;

struct GraphEdge {
  std::string name;
  // Two vertex indices (equal for a loop), or empty for a vertex-free circle.
  std::vector<int> ends;
  bool is_circle() const { return ends.empty(); }
};

class TrivalentGraph {
 public:
  TrivalentGraph() = default;
  // Vertex count is 1 + the largest end index (0 without ends). Throws
  // MalformedGraph unless every vertex has degree 3 counting loops twice.
  explicit TrivalentGraph(std::vector<GraphEdge> edges);

  static TrivalentGraph circle(int count = 1);
  static TrivalentGraph theta();
  // Two loops joined by a bridge.
  static TrivalentGraph dumbbell();

  const std::vector<GraphEdge>& edges() const { return edges_; }
  int vertex_count() const { return vertex_count_; }
  int d_G() const { return static_cast<int>(edges_.size()); }
  int circle_count() const;
  // Incident edge indices per vertex, length 3, loops listed twice.
  const std::vector<std::vector<int>>& incidence() const { return incidence_; }

  // dim H^1(G, Z_2), counting each circle once.
  int cycle_dimension() const;
  // Z_2 cycle basis (edge indicator vectors), fundamental cycles of a
  // spanning forest followed by circle edges.
  std::vector<std::vector<int>> cycle_basis() const;

 private:
  std::vector<GraphEdge> edges_;
  int vertex_count_ = 0;
  std::vector<std::vector<int>> incidence_;
};

using EdgeMulti = std::vector<int>;  // indexed like edges()
using Coloring = std::vector<int>;

// theta_n = a/b + zeta/p_n with p_n = step * n.
struct AdmissibleSequence {
  long long a = -1;
  long long b = 2;
  Rational zeta{1};
  long long step = 4;

  Rational base() const { return Rational(a, b); }
  long long p(long long n) const { return step * n; }
  Rational theta(long long n) const { return base() + zeta / Rational(p(n)); }
  // Whether theta_n has lowest denominator p_n.
  bool admissible_at(long long n) const;
};

// Vertex conditions on a triple of colors (repeated entries for loops).
bool vertex_admissible(int x, int y, int z, long long p);

// Calls visit once per admissible coloring with colors in {0, ..., p/2 - 2}.
void enumerate_colorings(const TrivalentGraph& g, long long p, const std::function<void(const Coloring&)>& visit);
std::uint64_t count_colorings(const TrivalentGraph& g, long long p);

// -2 cos(2 pi frac(theta (s + 1))) raised to m.
double edge_weight(const Rational& theta, int color, int m);

// Sum over admissible colorings of prod_e edge_weight. p is the denominator
// of theta. Work is split by the color of the first edge and summed in order.
double trace_sum(const TrivalentGraph& g, const EdgeMulti& m, const Rational& theta, long long p,
                 unsigned threads = 1);

// Same value by variable elimination over edge colors, eliminating greedily
// the edge whose new factor has the fewest variables.
double trace_sum_contracted(const TrivalentGraph& g, const EdgeMulti& m, const Rational& theta, long long p);

// (2 / p_n)^{d_G} trace_sum at theta_n.
double normalized_trace(const TrivalentGraph& g, const EdgeMulti& m, const AdmissibleSequence& seq, long long n,
                        unsigned threads = 1);

// All mu in {0..B-1}^E with even vertex sums.
std::vector<std::vector<int>> lambda_B_classes(const TrivalentGraph& g, int B);

// Linear inequalities defining U_G inside [0,1]^E.
std::vector<quad::LinearConstraint> polytope_constraints(const TrivalentGraph& g);
bool in_polytope(const TrivalentGraph& g, const std::vector<double>& tau);

struct LimitOptions {
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Monte Carlo estimate of B^{-d_G} sum_{mu in Lambda_B} int_{U_G} F_mu.
quad::McEstimate limit_trace(const TrivalentGraph& g, const EdgeMulti& m, const AdmissibleSequence& seq,
                             const LimitOptions& opts = {});

// Whether the class of m in H^1(G, Z_2) vanishes.
bool class_vanishes(const TrivalentGraph& g, const EdgeMulti& m);

struct TraceiResult {
  double value = 0.0;
  double error = 0.0;  // quadrature error bound, or MC standard error
  bool monte_carlo = false;
};

// delta * 2^g / 2^{d_G} * int_{U_G} prod_e (2 cos pi tau_e)^{m_e}, the limit at
// a/b = -1/2, zeta = 1. Circle factors use central binomials; the remaining
// polytope integral is deterministic for up to 3 edges and Monte Carlo above.
TraceiResult tracei_value(const TrivalentGraph& g, const EdgeMulti& m, const LimitOptions& mc = {});

// int_0^1 (2 cos pi t)^m dt: C(m, m/2) for even m, 0 for odd m.
double central_binomial_integral(int m);

struct ConvergenceRow {
  long long n;
  long long p;
  double normalized;
  double error;  // |normalized - reference|
};

std::vector<ConvergenceRow> convergence_table(const TrivalentGraph& g, const EdgeMulti& m,
                                              const AdmissibleSequence& seq, const std::vector<long long>& ns,
                                              double reference, unsigned threads = 1);

// Limit trace <x> on the torus at e^{i pi a/b}: linear in x, <empty> = 1 and
// <d copies of (p, q)> = limit_trace(circle, m = d).
struct GramReport {
  std::vector<torus::SkeinElement> basis;
  std::vector<std::vector<std::complex<double>>> matrix;
  std::vector<std::vector<std::complex<double>>> hermitian;
  std::vector<double> eigenvalues;  // ascending
  double max_asymmetry = 0.0;       // max |M_xy - M_yx|
  double max_stderr = 0.0;
};

std::complex<double> torus_limit_form(const torus::SkeinElement& x, const AdmissibleSequence& seq,
                                      const LimitOptions& opts, double* max_stderr = nullptr);

GramReport gram_probe(const std::vector<torus::SkeinElement>& basis, const AdmissibleSequence& seq,
                      const LimitOptions& opts = {});

}  // namespace skein::tqft
