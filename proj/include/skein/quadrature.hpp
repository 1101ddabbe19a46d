#pragma once

// Integration helpers: counter-based uniform streams for reproducible Monte
// Carlo, blocked MC accumulation with a fixed reduction order, composite
// Gauss-Legendre in two dimensions, and nested quadrature over polytopes
// given by linear inequalities.

#include <cstdint>
#include <functional>
#include <vector>

namespace skein::quad {

// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Uniform double in [0, 1) determined by (seed, sample index, coordinate).
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint32_t coord);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

// Mean and standard error of sample(i) for i in [0, samples). Samples are
// grouped in fixed blocks; block sums are combined in index order so the
// result does not depend on the thread count.
McEstimate mc_mean(std::uint64_t samples, unsigned threads, const std::function<double(std::uint64_t)>& sample);

// Composite tensor Gauss-Legendre (order 20 per panel) on [ax,bx] x [ay,by].
double gauss_legendre_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                         double by, int panels_x, int panels_y);

// Composite Gauss-Legendre (order 20 per panel) on [a, b].
double gauss_legendre_1d(const std::function<double(double)>& f, double a, double b, int panels = 1);

// coeffs . x <= bound
struct LinearConstraint {
  std::vector<double> coeffs;
  double bound;
};

// Integral of f over {x in [0,1]^dim : constraints}. Each coordinate range
// is split at the projections of the vertices of the current slice, so the
// nested integrand is smooth on every piece and order-20 Gauss-Legendre is
// used throughout. Cost grows quickly with dim; intended for dim <= 3 and
// smooth f.
double integrate_polytope(int dim, const std::vector<LinearConstraint>& constraints,
                          const std::function<double(const std::vector<double>&)>& f);

}  // namespace skein::quad
