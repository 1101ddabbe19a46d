#include "skein/tqft.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include <Eigen/Dense>
#include <boost/math/special_functions/binomial.hpp>

#include "skein/errors.hpp"

namespace skein::tqft {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// frac(x) in [0, 1).
Rational frac(const Rational& x) {
  long long num = x.numerator() % x.denominator();
  if (num < 0) num += x.denominator();
  return Rational(num, x.denominator());
}

// cos(2 pi r) for r in [0, 1), exact at quarter points.
double cos_two_pi(const Rational& r) {
  if (r.numerator() == 0) return 1.0;
  if (r == Rational(1, 4) || r == Rational(3, 4)) return 0.0;
  if (r == Rational(1, 2)) return -1.0;
  return std::cos(2.0 * kPi * boost::rational_cast<double>(r));
}

double ipow(double x, int m) {
  double r = 1.0;
  for (int k = 0; k < m; ++k) r *= x;
  return r;
}

void check_multi(const TrivalentGraph& g, const EdgeMulti& m) {
  if (static_cast<int>(m.size()) != g.d_G()) throw Error("multiplicity vector does not match the edge count");
  for (int v : m)
    if (v < 0) throw Error("edge multiplicities must be nonnegative");
}

long long max_color(long long p) {
  if (p < 4 || p % 2 != 0) throw Error("p must be even and at least 4");
  return p / 2 - 2;
}

struct Enumerator {
  const TrivalentGraph& g;
  long long p;
  long long top;
  std::vector<std::vector<int>> closes;  // vertices whose last incident edge is e
  Coloring col;

  Enumerator(const TrivalentGraph& graph, long long pp) : g(graph), p(pp), top(max_color(pp)) {
    closes.resize(g.d_G());
    for (int v = 0; v < g.vertex_count(); ++v) {
      const auto& inc = g.incidence()[v];
      closes[*std::max_element(inc.begin(), inc.end())].push_back(v);
    }
    col.assign(g.d_G(), 0);
  }

  bool vertex_ok(int v) const {
    const auto& inc = g.incidence()[v];
    return vertex_admissible(col[inc[0]], col[inc[1]], col[inc[2]], p);
  }

  template <class F>
  void run(int e, F& visit) {
    if (e == g.d_G()) {
      visit(col);
      return;
    }
    for (long long s = 0; s <= top; ++s) {
      col[e] = static_cast<int>(s);
      bool ok = true;
      for (int v : closes[e])
        if (!vertex_ok(v)) {
          ok = false;
          break;
        }
      if (ok) run(e + 1, visit);
    }
  }

  template <class F>
  void run_with_first(int s, F& visit) {
    col[0] = s;
    for (int v : closes[0])
      if (!vertex_ok(v)) return;
    run(1, visit);
  }
};

std::vector<std::vector<double>> weight_table(const TrivalentGraph& g, const EdgeMulti& m, const Rational& theta,
                                              long long p) {
  long long top = max_color(p);
  std::vector<std::vector<double>> w(g.d_G());
  for (int e = 0; e < g.d_G(); ++e)
    for (long long s = 0; s <= top; ++s) w[e].push_back(edge_weight(theta, static_cast<int>(s), m[e]));
  return w;
}

}  // namespace

// ---------------------------------------------------------------- graphs

TrivalentGraph::TrivalentGraph(std::vector<GraphEdge> edges) : edges_(std::move(edges)) {
  int vmax = -1;
  for (const auto& e : edges_) {
    if (!e.ends.empty() && e.ends.size() != 2) throw MalformedGraph("edge '" + e.name + "' must have 0 or 2 ends");
    for (int v : e.ends) {
      if (v < 0) throw MalformedGraph("negative vertex index");
      vmax = std::max(vmax, v);
    }
  }
  vertex_count_ = vmax + 1;
  incidence_.assign(vertex_count_, {});
  for (size_t k = 0; k < edges_.size(); ++k)
    for (int v : edges_[k].ends) incidence_[v].push_back(static_cast<int>(k));
  for (int v = 0; v < vertex_count_; ++v)
    if (incidence_[v].size() != 3)
      throw MalformedGraph("vertex " + std::to_string(v) + " has degree " + std::to_string(incidence_[v].size()));
}

TrivalentGraph TrivalentGraph::circle(int count) {
  std::vector<GraphEdge> es;
  for (int k = 0; k < count; ++k) es.push_back({count == 1 ? "c" : "c" + std::to_string(k + 1), {}});
  return TrivalentGraph(std::move(es));
}

TrivalentGraph TrivalentGraph::theta() { return TrivalentGraph({{"a", {0, 1}}, {"b", {0, 1}}, {"c", {0, 1}}}); }

TrivalentGraph TrivalentGraph::dumbbell() {
  return TrivalentGraph({{"l1", {0, 0}}, {"e", {0, 1}}, {"l2", {1, 1}}});
}

int TrivalentGraph::circle_count() const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [](const auto& e) { return e.is_circle(); }));
}

int TrivalentGraph::cycle_dimension() const { return static_cast<int>(cycle_basis().size()); }

std::vector<std::vector<int>> TrivalentGraph::cycle_basis() const {
  const int V = vertex_count_;
  const int E = d_G();
  // Spanning forest by BFS; parent edge per vertex.
  std::vector<int> parent_edge(V, -1), parent(V, -1), depth(V, -1);
  std::vector<bool> tree(E, false);
  for (int r = 0; r < V; ++r) {
    if (depth[r] != -1) continue;
    depth[r] = 0;
    std::vector<int> queue{r};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int e : incidence_[u]) {
        int w = edges_[e].ends[0] == u ? edges_[e].ends[1] : edges_[e].ends[0];
        if (depth[w] != -1) continue;
        depth[w] = depth[u] + 1;
        parent[w] = u;
        parent_edge[w] = e;
        tree[e] = true;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::vector<int>> basis;
  for (int e = 0; e < E; ++e) {
    if (edges_[e].is_circle() || tree[e]) continue;
    std::vector<int> cyc(E, 0);
    cyc[e] = 1;
    int u = edges_[e].ends[0], w = edges_[e].ends[1];
    while (u != w) {
      if (depth[u] < depth[w]) std::swap(u, w);
      cyc[parent_edge[u]] ^= 1;
      u = parent[u];
    }
    basis.push_back(std::move(cyc));
  }
  for (int e = 0; e < E; ++e)
    if (edges_[e].is_circle()) {
      std::vector<int> cyc(E, 0);
      cyc[e] = 1;
      basis.push_back(std::move(cyc));
    }
  return basis;
}

bool AdmissibleSequence::admissible_at(long long n) const { return theta(n).denominator() == p(n); }

// ---------------------------------------------------------------- colorings

bool vertex_admissible(int x, int y, int z, long long p) {
  long long s = static_cast<long long>(x) + y + z;
  return s % 2 == 0 && s <= p - 4 && x <= y + z && y <= x + z && z <= x + y;
}

void enumerate_colorings(const TrivalentGraph& g, long long p, const std::function<void(const Coloring&)>& visit) {
  Enumerator en(g, p);
  auto f = [&](const Coloring& c) { visit(c); };
  en.run(0, f);
}

std::uint64_t count_colorings(const TrivalentGraph& g, long long p) {
  std::uint64_t count = 0;
  Enumerator en(g, p);
  auto f = [&](const Coloring&) { ++count; };
  en.run(0, f);
  return count;
}

double edge_weight(const Rational& theta, int color, int m) {
  double c = cos_two_pi(frac(theta * Rational(color + 1)));
  return ipow(-2.0 * c, m);
}

double trace_sum(const TrivalentGraph& g, const EdgeMulti& m, const Rational& theta, long long p, unsigned threads) {
  check_multi(g, m);
  if (g.d_G() == 0) return 1.0;
  const auto w = weight_table(g, m, theta, p);
  const int top = static_cast<int>(max_color(p));
  std::vector<double> partial(top + 1, 0.0);
  std::atomic<int> next{0};
  auto worker = [&] {
    Enumerator en(g, p);
    for (int s; (s = next.fetch_add(1)) <= top;) {
      double acc = 0.0;
      auto f = [&](const Coloring& c) {
        double prod = 1.0;
        for (int e = 0; e < g.d_G(); ++e) prod *= w[e][c[e]];
        acc += prod;
      };
      en.run_with_first(s, f);
      partial[s] = acc;
    }
  };
  threads = std::max(1u, threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

namespace {

struct Factor {
  std::vector<int> vars;  // sorted
  std::vector<double> table;
};

}  // namespace

double trace_sum_contracted(const TrivalentGraph& g, const EdgeMulti& m, const Rational& theta, long long p) {
  check_multi(g, m);
  const int E = g.d_G();
  if (E == 0) return 1.0;
  const auto w = weight_table(g, m, theta, p);
  const size_t D = static_cast<size_t>(max_color(p)) + 1;

  std::vector<Factor> factors;
  for (int e = 0; e < E; ++e) factors.push_back({{e}, w[e]});
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& inc = g.incidence()[v];
    Factor f;
    f.vars = inc;
    std::sort(f.vars.begin(), f.vars.end());
    f.vars.erase(std::unique(f.vars.begin(), f.vars.end()), f.vars.end());
    size_t size = 1;
    for (size_t k = 0; k < f.vars.size(); ++k) size *= D;
    f.table.assign(size, 0.0);
    std::vector<int> col(E, 0);
    for (size_t idx = 0; idx < size; ++idx) {
      size_t r = idx;
      for (size_t k = f.vars.size(); k-- > 0;) {
        col[f.vars[k]] = static_cast<int>(r % D);
        r /= D;
      }
      f.table[idx] = vertex_admissible(col[inc[0]], col[inc[1]], col[inc[2]], p) ? 1.0 : 0.0;
    }
    factors.push_back(std::move(f));
  }

  std::vector<bool> eliminated(E, false);
  for (int round = 0; round < E; ++round) {
    int best = -1;
    size_t best_scope = 0;
    for (int x = 0; x < E; ++x) {
      if (eliminated[x]) continue;
      std::vector<int> scope;
      for (const auto& f : factors)
        if (std::binary_search(f.vars.begin(), f.vars.end(), x)) scope.insert(scope.end(), f.vars.begin(), f.vars.end());
      std::sort(scope.begin(), scope.end());
      scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
      if (best == -1 || scope.size() < best_scope) {
        best = x;
        best_scope = scope.size();
      }
    }
    const int x = best;
    eliminated[x] = true;

    std::vector<Factor> touching, rest;
    for (auto& f : factors)
      (std::binary_search(f.vars.begin(), f.vars.end(), x) ? touching : rest).push_back(std::move(f));
    std::vector<int> scope;
    for (const auto& f : touching) scope.insert(scope.end(), f.vars.begin(), f.vars.end());
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    std::vector<int> out_vars;
    for (int v : scope)
      if (v != x) out_vars.push_back(v);

    double cells = std::pow(static_cast<double>(D), static_cast<double>(scope.size()));
    if (cells > 2e8) throw Error("contraction factor too large");

    Factor out;
    out.vars = out_vars;
    size_t out_size = 1;
    for (size_t k = 0; k < out_vars.size(); ++k) out_size *= D;
    out.table.assign(out_size, 0.0);

    // Strides of each touching factor with respect to scope positions.
    std::vector<std::vector<size_t>> strides(touching.size(), std::vector<size_t>(scope.size(), 0));
    for (size_t t = 0; t < touching.size(); ++t) {
      size_t stride = 1;
      for (size_t k = touching[t].vars.size(); k-- > 0;) {
        size_t pos = std::lower_bound(scope.begin(), scope.end(), touching[t].vars[k]) - scope.begin();
        strides[t][pos] = stride;
        stride *= D;
      }
    }
    std::vector<size_t> out_stride(scope.size(), 0);
    {
      size_t stride = 1;
      for (size_t k = out_vars.size(); k-- > 0;) {
        size_t pos = std::lower_bound(scope.begin(), scope.end(), out_vars[k]) - scope.begin();
        out_stride[pos] = stride;
        stride *= D;
      }
    }
    std::vector<size_t> digit(scope.size(), 0);
    std::vector<size_t> fidx(touching.size(), 0);
    size_t oidx = 0;
    const size_t total = static_cast<size_t>(cells);
    for (size_t it = 0; it < total; ++it) {
      double prod = 1.0;
      for (size_t t = 0; t < touching.size() && prod != 0.0; ++t) prod *= touching[t].table[fidx[t]];
      out.table[oidx] += prod;
      // Increment the mixed-radix counter, last scope variable fastest.
      for (size_t k = scope.size(); k-- > 0;) {
        if (++digit[k] < D) {
          for (size_t t = 0; t < touching.size(); ++t) fidx[t] += strides[t][k];
          oidx += out_stride[k];
          break;
        }
        for (size_t t = 0; t < touching.size(); ++t) fidx[t] -= strides[t][k] * (D - 1);
        oidx -= out_stride[k] * (D - 1);
        digit[k] = 0;
      }
    }
    rest.push_back(std::move(out));
    factors = std::move(rest);
  }
  double result = 1.0;
  for (const auto& f : factors) result *= f.table.at(0);
  return result;
}

double normalized_trace(const TrivalentGraph& g, const EdgeMulti& m, const AdmissibleSequence& seq, long long n,
                        unsigned threads) {
  const long long p = seq.p(n);
  return std::pow(2.0 / static_cast<double>(p), g.d_G()) * trace_sum(g, m, seq.theta(n), p, threads);
}

// ---------------------------------------------------------------- limits

std::vector<std::vector<int>> lambda_B_classes(const TrivalentGraph& g, int B) {
  if (B <= 0 || B % 2 != 0) throw Error("B must be a positive even integer");
  const int E = g.d_G();
  if (std::pow(static_cast<double>(B), E) > 5e7) throw Error("Lambda_B enumeration too large");
  std::vector<std::vector<int>> out;
  std::vector<int> mu(E, 0);
  for (;;) {
    bool ok = true;
    for (const auto& inc : g.incidence())
      if ((mu[inc[0]] + mu[inc[1]] + mu[inc[2]]) % 2 != 0) {
        ok = false;
        break;
      }
    if (ok) out.push_back(mu);
    int k = E - 1;
    while (k >= 0 && ++mu[k] == B) mu[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::vector<quad::LinearConstraint> polytope_constraints(const TrivalentGraph& g) {
  const int E = g.d_G();
  std::vector<quad::LinearConstraint> out;
  for (const auto& inc : g.incidence()) {
    quad::LinearConstraint sum{std::vector<double>(E, 0.0), 2.0};
    for (int e : inc) sum.coeffs[e] += 1.0;
    out.push_back(sum);
    for (int k = 0; k < 3; ++k) {
      quad::LinearConstraint tri{std::vector<double>(E, 0.0), 0.0};
      tri.coeffs[inc[k]] += 1.0;
      tri.coeffs[inc[(k + 1) % 3]] -= 1.0;
      tri.coeffs[inc[(k + 2) % 3]] -= 1.0;
      out.push_back(tri);
    }
  }
  return out;
}

bool in_polytope(const TrivalentGraph& g, const std::vector<double>& tau) {
  for (const auto& inc : g.incidence()) {
    double x = tau[inc[0]], y = tau[inc[1]], z = tau[inc[2]];
    if (x + y + z > 2.0 || x > y + z || y > x + z || z > x + y) return false;
  }
  return true;
}

quad::McEstimate limit_trace(const TrivalentGraph& g, const EdgeMulti& m, const AdmissibleSequence& seq,
                             const LimitOptions& opts) {
  check_multi(g, m);
  const int E = g.d_G();
  const long long b = seq.b;
  if (b <= 0 || std::gcd(seq.a, b) != 1) throw Error("a/b must be in lowest terms with b > 0");
  const int B = static_cast<int>(std::lcm(b, 2LL));
  const auto classes = lambda_B_classes(g, B);
  const double zeta = boost::rational_cast<double>(seq.zeta);
  const double scale = 1.0 / std::pow(static_cast<double>(B), E);

  // frac((a/b)(r + 1)) per residue r.
  std::vector<Rational> phase(B);
  for (int r = 0; r < B; ++r) phase[r] = frac(seq.base() * Rational(r + 1));

  auto sample = [&](std::uint64_t i) {
    std::vector<double> tau(E);
    for (int e = 0; e < E; ++e) tau[e] = quad::counter_uniform(opts.seed, i, static_cast<std::uint32_t>(e));
    if (!in_polytope(g, tau)) return 0.0;
    std::vector<std::vector<double>> f(E, std::vector<double>(B));
    for (int e = 0; e < E; ++e) {
      const double t = kPi * zeta * tau[e];
      for (int r = 0; r < B; ++r) {
        double c;
        if (phase[r].numerator() == 0)
          c = std::cos(t);
        else if (phase[r] == Rational(1, 2))
          c = -std::cos(t);
        else
          c = std::cos(2.0 * kPi * boost::rational_cast<double>(phase[r]) + t);
        f[e][r] = ipow(-2.0 * c, m[e]);
      }
    }
    double total = 0.0;
    for (const auto& mu : classes) {
      double prod = 1.0;
      for (int e = 0; e < E; ++e) prod *= f[e][mu[e]];
      total += prod;
    }
    return total * scale;
  };
  return quad::mc_mean(opts.samples, opts.threads, sample);
}

bool class_vanishes(const TrivalentGraph& g, const EdgeMulti& m) {
  check_multi(g, m);
  for (const auto& cyc : g.cycle_basis()) {
    long long s = 0;
    for (int e = 0; e < g.d_G(); ++e) s += static_cast<long long>(cyc[e]) * m[e];
    if (s % 2 != 0) return false;
  }
  return true;
}

double central_binomial_integral(int m) {
  if (m < 0) throw Error("negative exponent");
  if (m % 2 != 0) return 0.0;
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(m), static_cast<unsigned>(m / 2));
}

TraceiResult tracei_value(const TrivalentGraph& g, const EdgeMulti& m, const LimitOptions& mc) {
  check_multi(g, m);
  TraceiResult out;
  if (!class_vanishes(g, m)) return out;

  double circles = 1.0;
  std::vector<int> inner;  // non-circle edges
  for (int e = 0; e < g.d_G(); ++e) {
    if (g.edges()[e].is_circle())
      circles *= central_binomial_integral(m[e]);
    else
      inner.push_back(e);
  }
  const double prefactor = std::pow(2.0, g.cycle_dimension() - g.d_G());

  const int k = static_cast<int>(inner.size());
  auto integrand = [&](const std::vector<double>& t) {
    double prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= ipow(2.0 * std::cos(kPi * t[j]), m[inner[j]]);
    return prod;
  };
  double poly = 1.0;
  double poly_err = 0.0;
  if (k > 0 && k <= 3) {
    std::vector<quad::LinearConstraint> cons;
    for (const auto& c : polytope_constraints(g)) {
      quad::LinearConstraint r{std::vector<double>(k), c.bound};
      for (int j = 0; j < k; ++j) r.coeffs[j] = c.coeffs[inner[j]];
      cons.push_back(std::move(r));
    }
    poly = quad::integrate_polytope(k, cons, integrand);
    poly_err = 1e-9;
  } else if (k > 3) {
    std::vector<double> full(g.d_G(), 0.0);
    auto est = quad::mc_mean(mc.samples, mc.threads, [&](std::uint64_t i) {
      std::vector<double> t(k);
      for (int j = 0; j < k; ++j) {
        t[j] = quad::counter_uniform(mc.seed, i, static_cast<std::uint32_t>(j));
      }
      std::vector<double> tau(g.d_G(), 0.5);
      for (int j = 0; j < k; ++j) tau[inner[j]] = t[j];
      return in_polytope(g, tau) ? integrand(t) : 0.0;
    });
    poly = est.value;
    poly_err = est.stderr_;
    out.monte_carlo = true;
  }
  out.value = prefactor * circles * poly;
  out.error = std::abs(prefactor * circles) * poly_err;
  return out;
}

std::vector<ConvergenceRow> convergence_table(const TrivalentGraph& g, const EdgeMulti& m,
                                              const AdmissibleSequence& seq, const std::vector<long long>& ns,
                                              double reference, unsigned threads) {
  std::vector<ConvergenceRow> rows;
  for (long long n : ns) {
    double v = normalized_trace(g, m, seq, n, threads);
    rows.push_back({n, seq.p(n), v, std::abs(v - reference)});
  }
  return rows;
}

// ---------------------------------------------------------------- Gram probe

namespace {

struct FormCache {
  const AdmissibleSequence& seq;
  const LimitOptions& opts;
  std::map<int, quad::McEstimate> by_copies;
  double max_stderr = 0.0;

  double value(int d) {
    auto it = by_copies.find(d);
    if (it == by_copies.end()) {
      auto est = limit_trace(TrivalentGraph::circle(), {d}, seq, opts);
      it = by_copies.emplace(d, est).first;
      max_stderr = std::max(max_stderr, est.stderr_);
    }
    return it->second.value;
  }

  std::complex<double> form(const torus::SkeinElement& x) {
    std::complex<double> total = 0.0;
    for (const auto& [c, v] : x.terms()) {
      std::complex<double> coeff = v.coerce(arith::ScalarKind::Complex).as_complex();
      total += coeff * (c.is_empty() ? 1.0 : value(c.copies()));
    }
    return total;
  }
};

}  // namespace

std::complex<double> torus_limit_form(const torus::SkeinElement& x, const AdmissibleSequence& seq,
                                      const LimitOptions& opts, double* max_stderr) {
  FormCache cache{seq, opts, {}, 0.0};
  auto v = cache.form(x);
  if (max_stderr) *max_stderr = cache.max_stderr;
  return v;
}

GramReport gram_probe(const std::vector<torus::SkeinElement>& basis, const AdmissibleSequence& seq,
                      const LimitOptions& opts) {
  FormCache cache{seq, opts, {}, 0.0};
  GramReport r;
  r.basis = basis;
  const size_t n = basis.size();
  r.matrix.assign(n, std::vector<std::complex<double>>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r.matrix[i][j] = cache.form(torus::skein_mul(basis[i], basis[j]));
  Eigen::MatrixXcd H(n, n);
  r.hermitian.assign(n, std::vector<std::complex<double>>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      r.hermitian[i][j] = 0.5 * (r.matrix[i][j] + std::conj(r.matrix[j][i]));
      H(i, j) = r.hermitian[i][j];
      r.max_asymmetry = std::max(r.max_asymmetry, std::abs(r.matrix[i][j] - r.matrix[j][i]));
    }
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) r.eigenvalues.push_back(solver.eigenvalues()(k));
  }
  r.max_stderr = cache.max_stderr;
  return r;
}

}  // namespace skein::tqft
