#pragma once

// The grading-zero part of K(torus, -1) (x) A, the map
// gamma -> (-1)^{n(gamma)} gamma (x) [gamma] from K(torus, -i), and the
// exhaustive check that it is multiplicative.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skein/heis.hpp"
#include "skein/torus_skein.hpp"

namespace skein::twisted {

using arith::ExactScalar;
using heis::Z2Class;
using torus::SkeinElement;
using torus::TorusMulticurve;

// Which lattice vector labels the Heisenberg factor of a curve with
// homology (P, Q).
//   Reflected: [(P, -Q)]. Multiplicative with the product on K(torus, -i)
//              computed from LM = A^2 ML and Phi.
//   Literal:   [(P, Q)]. Off by a global sign on non-commuting pairs under
//              those conventions; kept for comparison.
enum class Labeling { Reflected, Literal };

using TwistedKey = std::pair<TorusMulticurve, Z2Class>;

class TwistedElement {
 public:
  TwistedElement() = default;

  static TwistedElement unit();
  static TwistedElement basis(const TorusMulticurve& c, const Z2Class& cls, ExactScalar coeff);

  const std::map<TwistedKey, ExactScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  ExactScalar coeff(const TorusMulticurve& c, const Z2Class& cls) const;

  // Coefficients are Gaussian integers. Throws skein::Error if the class of
  // the curve mod 2 differs from cls.
  void add_term(const TorusMulticurve& c, const Z2Class& cls, const ExactScalar& coeff);

  TwistedElement& operator+=(const TwistedElement& o);
  TwistedElement scaled(const ExactScalar& c) const;
  friend bool operator==(const TwistedElement& x, const TwistedElement& y) { return x.terms_ == y.terms_; }
  std::string to_string() const;

 private:
  std::map<TwistedKey, ExactScalar> terms_;
};

// The point A = -i where phi_map is defined, and A = -1 for the first factor.
arith::Specialization minus_i();
arith::Specialization minus_one();

// Lattice vector carried by the Heisenberg factor of a multicurve.
heis::LatticeVector heis_label(const TorusMulticurve& c, Labeling labeling);

TwistedElement phi_map(const TorusMulticurve& c, Labeling labeling = Labeling::Reflected);
// Throws SpecMismatch unless x is at A = -i.
TwistedElement phi_map(const SkeinElement& x, Labeling labeling = Labeling::Reflected);

// (g (x) h)(d (x) k) = (g d at A = -1) (x) h k.
TwistedElement twisted_mul(const TwistedElement& x, const TwistedElement& y);

bool iso_check(const SkeinElement& x, const SkeinElement& y, Labeling labeling = Labeling::Reflected);

// Value of a null-homotopic loop on each side: -A^2 - A^{-2} at A = -i, and
// (-1) times its value at A = -1. Both equal 2.
std::pair<ExactScalar, ExactScalar> trivial_loop_values();

struct SweepBounds {
  int max_copies = 3;
  long max_coord = 5;
};

struct SweepFailure {
  TorusMulticurve x;
  TorusMulticurve y;
  TwistedElement lhs;
  TwistedElement rhs;
};

struct SweepOptions {
  Labeling labeling = Labeling::Reflected;
  unsigned threads = 1;
  // Fault injection: negate the image of this curve on the right-hand side.
  std::optional<TorusMulticurve> corrupt;
};

struct SweepReport {
  size_t basis_size = 0;
  size_t pairs = 0;
  std::vector<SweepFailure> failures;  // ordered by (x, y) basis index
};

// Empty curve followed by all canonical multicurves within the bounds.
std::vector<TorusMulticurve> sweep_basis(const SweepBounds& bounds);

SweepReport iso_sweep(const SweepBounds& bounds, const SweepOptions& options = {});

}  // namespace skein::twisted
