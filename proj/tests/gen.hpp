#pragma once

// Small random generators for property tests.

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <boost/random/uniform_int_distribution.hpp>

#include "skein/arith.hpp"
#include "skein/torus_skein.hpp"

namespace gen {

struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  long uniform(long lo, long hi) { return boost::random::uniform_int_distribution<long>(lo, hi)(eng); }
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64 eng;
};

inline skein::arith::LaurentPoly laurent(Rng& r, int max_terms = 5, long max_exp = 6, long max_coeff = 9) {
  skein::arith::LaurentPoly x;
  int n = static_cast<int>(r.uniform(0, max_terms));
  for (int k = 0; k < n; ++k)
    x += skein::arith::LaurentPoly::monomial(r.uniform(-max_exp, max_exp), skein::arith::BigInt(r.uniform(-max_coeff, max_coeff)));
  return x;
}

inline std::pair<long, long> primitive(Rng& r, long bound) {
  while (true) {
    long p = r.uniform(-bound, bound), q = r.uniform(-bound, bound);
    if (std::gcd(p, q) == 1) return {p, q};
  }
}

inline skein::torus::TorusMulticurve multicurve(Rng& r, int max_copies = 3, long bound = 5) {
  if (r.uniform(0, 9) == 0) return skein::torus::TorusMulticurve::empty();
  auto [p, q] = primitive(r, bound);
  return skein::torus::TorusMulticurve::make(static_cast<int>(r.uniform(1, max_copies)), p, q);
}

// Random coefficient in the ring of the specialization (small integers embedded).
inline skein::arith::ExactScalar scalar(Rng& r, const skein::arith::Specialization& spec) {
  using skein::arith::ScalarKind;
  switch (spec.kind()) {
    case ScalarKind::Laurent:
      return laurent(r, 3, 3, 4);
    case ScalarKind::Gaussian:
      return skein::arith::GaussianInt{r.uniform(-4, 4), r.uniform(-4, 4)};
    case ScalarKind::Complex:
      return skein::arith::Complex(static_cast<double>(r.uniform(-4, 4)), static_cast<double>(r.uniform(-4, 4)));
    default:
      return skein::arith::BigInt(r.uniform(-4, 4));
  }
}

inline skein::torus::SkeinElement skein(Rng& r, const skein::arith::Specialization& spec, int max_terms = 3,
                                        int max_copies = 2, long bound = 3) {
  skein::torus::SkeinElement x(spec);
  int n = static_cast<int>(r.uniform(1, max_terms));
  for (int k = 0; k < n; ++k) x.add_term(multicurve(r, max_copies, bound), scalar(r, spec));
  return x;
}

}  // namespace gen
