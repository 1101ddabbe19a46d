#pragma once

// Twisted group algebra of H_1(Sigma, Z) = Z^{2g}: generators [gamma] with
// [gamma]^2 = 1 and [gamma][delta] = i^{-gamma.delta} [gamma + delta].
// One basis vector per class in Z_2^{2g}, represented by its 0/1 lift.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "skein/arith.hpp"

namespace skein::heis {

using arith::ExactScalar;
using arith::GaussianInt;

using LatticeVector = std::vector<long>;
using Z2Class = std::vector<int>;  // entries in {0, 1}

class SymplecticLattice {
 public:
  explicit SymplecticLattice(int genus);
  int genus() const { return genus_; }
  int rank() const { return 2 * genus_; }
  // sum_k (x_{2k-1} y_{2k} - x_{2k} y_{2k-1}) in 1-based coordinates.
  long pairing(std::span<const long> x, std::span<const long> y) const;

 private:
  int genus_;
};

struct ReducedClass {
  Z2Class cls;
  GaussianInt phase;  // +-1
};

// [gamma] = phase * [canonical lift], using [lift + 2 mu] = (-1)^{lift.mu} [lift].
ReducedClass heis_class(const SymplecticLattice& lattice, std::span<const long> gamma);

class HeisElement {
 public:
  explicit HeisElement(int genus) : genus_(genus) {}

  static HeisElement unit(int genus);
  // phase * [class] for an arbitrary integral vector.
  static HeisElement generator(int genus, std::span<const long> gamma);
  static HeisElement basis(int genus, const Z2Class& cls, ExactScalar coeff);

  int genus() const { return genus_; }
  const std::map<Z2Class, ExactScalar>& terms() const { return terms_; }
  ExactScalar coeff(const Z2Class& cls) const;
  void add_term(const Z2Class& cls, const ExactScalar& c);

  HeisElement& operator+=(const HeisElement& o);
  HeisElement scaled(const ExactScalar& c) const;
  friend bool operator==(const HeisElement& x, const HeisElement& y);
  std::string to_string() const;

 private:
  void check_class(const Z2Class& cls) const;
  int genus_;
  std::map<Z2Class, ExactScalar> terms_;
};

// Throws GenusMismatch for elements of different genus.
HeisElement heis_mul(const HeisElement& x, const HeisElement& y);

// Coefficient of the zero class.
ExactScalar heis_trace(const HeisElement& x);

}  // namespace skein::heis
