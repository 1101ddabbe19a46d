#include "skein/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/Dense>

namespace skein::quad {

namespace {

constexpr std::uint64_t kBlock = 4096;

using GL = boost::math::quadrature::gauss<double, 20>;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint32_t coord) {
  std::uint64_t h = mix64(seed ^ mix64(sample ^ mix64(0x5eedULL + coord)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

McEstimate mc_mean(std::uint64_t samples, unsigned threads, const std::function<double(std::uint64_t)>& sample) {
  McEstimate out;
  out.samples = samples;
  if (samples == 0) return out;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> sum(blocks), sum_sq(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b; (b = next.fetch_add(1)) < blocks;) {
      double s = 0, s2 = 0;
      const std::uint64_t end = std::min(samples, (b + 1) * kBlock);
      for (std::uint64_t i = b * kBlock; i < end; ++i) {
        double v = sample(i);
        s += v;
        s2 += v * v;
      }
      sum[b] = s;
      sum_sq[b] = s2;
    }
  };
  threads = std::max(1u, threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  double s = 0, s2 = 0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    s += sum[b];
    s2 += sum_sq[b];
  }
  const double n = static_cast<double>(samples);
  out.value = s / n;
  if (samples > 1) {
    double var = std::max(0.0, (s2 - n * out.value * out.value) / (n - 1));
    out.stderr_ = std::sqrt(var / n);
  }
  return out;
}

double gauss_legendre_1d(const std::function<double(double)>& f, double a, double b, int panels) {
  if (b <= a) return 0.0;
  double h = (b - a) / panels;
  double total = 0;
  for (int k = 0; k < panels; ++k) total += GL::integrate(f, a + k * h, a + (k + 1) * h);
  return total;
}

double gauss_legendre_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                         double by, int panels_x, int panels_y) {
  auto inner = [&](double x) {
    return gauss_legendre_1d([&](double y) { return f(x, y); }, ay, by, panels_y);
  };
  return gauss_legendre_1d(inner, ax, bx, panels_x);
}

namespace {

constexpr double kFeasTol = 1e-12;

struct PolytopeIntegrator {
  int dim;
  std::vector<LinearConstraint> cons;  // includes the box constraints
  const std::function<double(const std::vector<double>&)>& f;

  // Values of x_k at the vertices of the slice {x_j fixed for j < k}.
  std::vector<double> breakpoints(int k, const std::vector<double>& x) const {
    const int r = dim - k;
    std::vector<double> out;
    const int C = static_cast<int>(cons.size());
    std::vector<int> pick(r);
    for (int j = 0; j < r; ++j) pick[j] = j;
    if (r > C) return out;
    for (;;) {
      Eigen::MatrixXd A(r, r);
      Eigen::VectorXd rhs(r);
      for (int i = 0; i < r; ++i) {
        const auto& c = cons[pick[i]];
        double b = c.bound;
        for (int j = 0; j < k; ++j) b -= c.coeffs[j] * x[j];
        for (int j = 0; j < r; ++j) A(i, j) = c.coeffs[k + j];
        rhs(i) = b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (lu.rank() == r) {
        Eigen::VectorXd y = lu.solve(rhs);
        bool feasible = true;
        for (const auto& c : cons) {
          double v = 0;
          for (int j = 0; j < k; ++j) v += c.coeffs[j] * x[j];
          for (int j = 0; j < r; ++j) v += c.coeffs[k + j] * y(j);
          if (v > c.bound + kFeasTol) {
            feasible = false;
            break;
          }
        }
        if (feasible) out.push_back(y(0));
      }
      int i = r - 1;
      while (i >= 0 && pick[i] == C - r + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  double integrate(int k, std::vector<double>& x) const {
    std::vector<double> bp = breakpoints(k, x);
    if (bp.size() < 2) return 0.0;
    double total = 0.0;
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
      double a = bp[i], b = bp[i + 1];
      if (b - a < 1e-13) continue;
      if (k == dim - 1) {
        total += GL::integrate(
            [&](double t) {
              x[k] = t;
              return f(x);
            },
            a, b);
      } else {
        total += GL::integrate(
            [&](double t) {
              std::vector<double> y = x;
              y[k] = t;
              return integrate(k + 1, y);
            },
            a, b);
      }
    }
    return total;
  }
};

}  // namespace

double integrate_polytope(int dim, const std::vector<LinearConstraint>& constraints,
                          const std::function<double(const std::vector<double>&)>& f) {
  if (dim == 0) {
    std::vector<double> x;
    for (const auto& c : constraints)
      if (c.bound < 0) return 0.0;
    return f(x);
  }
  std::vector<LinearConstraint> cons = constraints;
  for (int j = 0; j < dim; ++j) {
    LinearConstraint lo{std::vector<double>(dim, 0.0), 0.0};
    lo.coeffs[j] = -1.0;
    LinearConstraint hi{std::vector<double>(dim, 0.0), 1.0};
    hi.coeffs[j] = 1.0;
    cons.push_back(lo);
    cons.push_back(hi);
  }
  std::vector<double> x(dim, 0.0);
  PolytopeIntegrator p{dim, std::move(cons), f};
  return p.integrate(0, x);
}

}  // namespace skein::quad
