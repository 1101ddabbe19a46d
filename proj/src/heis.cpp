#include "skein/heis.hpp"

#include <sstream>

#include "skein/errors.hpp"

namespace skein::heis {

namespace {

long floor_div2(long x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }

LatticeVector as_vector(const Z2Class& cls) { return {cls.begin(), cls.end()}; }

}  // namespace

SymplecticLattice::SymplecticLattice(int genus) : genus_(genus) {
  if (genus < 1) throw Error("genus must be positive");
}

long SymplecticLattice::pairing(std::span<const long> x, std::span<const long> y) const {
  if (x.size() != static_cast<size_t>(rank()) || y.size() != static_cast<size_t>(rank()))
    throw GenusMismatch("lattice vector of wrong rank");
  long s = 0;
  for (int k = 0; k < genus_; ++k) s += x[2 * k] * y[2 * k + 1] - x[2 * k + 1] * y[2 * k];
  return s;
}

ReducedClass heis_class(const SymplecticLattice& lattice, std::span<const long> gamma) {
  if (gamma.size() != static_cast<size_t>(lattice.rank())) throw GenusMismatch("lattice vector of wrong rank");
  LatticeVector lift(gamma.size());
  LatticeVector mu(gamma.size());
  Z2Class cls(gamma.size());
  for (size_t k = 0; k < gamma.size(); ++k) {
    mu[k] = floor_div2(gamma[k]);
    lift[k] = gamma[k] - 2 * mu[k];
    cls[k] = static_cast<int>(lift[k]);
  }
  long s = lattice.pairing(lift, mu);
  return {cls, GaussianInt{(s % 2 == 0) ? 1 : -1, 0}};
}

HeisElement HeisElement::unit(int genus) {
  return basis(genus, Z2Class(2 * genus, 0), GaussianInt{1, 0});
}

HeisElement HeisElement::generator(int genus, std::span<const long> gamma) {
  auto r = heis_class(SymplecticLattice(genus), gamma);
  return basis(genus, r.cls, r.phase);
}

HeisElement HeisElement::basis(int genus, const Z2Class& cls, ExactScalar coeff) {
  HeisElement x(genus);
  x.add_term(cls, coeff);
  return x;
}

void HeisElement::check_class(const Z2Class& cls) const {
  if (cls.size() != static_cast<size_t>(2 * genus_)) throw GenusMismatch("class of wrong rank");
  for (int v : cls)
    if (v != 0 && v != 1) throw Error("class entries must be 0 or 1");
}

ExactScalar HeisElement::coeff(const Z2Class& cls) const {
  auto it = terms_.find(cls);
  return it == terms_.end() ? ExactScalar(GaussianInt{}) : it->second;
}

void HeisElement::add_term(const Z2Class& cls, const ExactScalar& c) {
  check_class(cls);
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(cls, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

HeisElement& HeisElement::operator+=(const HeisElement& o) {
  if (o.genus_ != genus_) throw GenusMismatch("adding elements of different genus");
  for (const auto& [cls, c] : o.terms_) add_term(cls, c);
  return *this;
}

HeisElement HeisElement::scaled(const ExactScalar& c) const {
  HeisElement r(genus_);
  for (const auto& [cls, v] : terms_) r.add_term(cls, v * c);
  return r;
}

bool operator==(const HeisElement& x, const HeisElement& y) {
  return x.genus_ == y.genus_ && x.terms_ == y.terms_;
}

std::string HeisElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [cls, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")[";
    for (size_t k = 0; k < cls.size(); ++k) os << (k ? "," : "") << cls[k];
    os << "]";
  }
  return os.str();
}

HeisElement heis_mul(const HeisElement& x, const HeisElement& y) {
  if (x.genus() != y.genus()) throw GenusMismatch("heis_mul of different genus");
  SymplecticLattice lattice(x.genus());
  HeisElement r(x.genus());
  for (const auto& [cx, vx] : x.terms()) {
    LatticeVector gx = as_vector(cx);
    for (const auto& [cy, vy] : y.terms()) {
      LatticeVector gy = as_vector(cy);
      LatticeVector sum(gx.size());
      for (size_t k = 0; k < sum.size(); ++k) sum[k] = gx[k] + gy[k];
      auto red = heis_class(lattice, sum);
      ExactScalar twist = arith::i_power(-lattice.pairing(gx, gy)) * red.phase;
      ExactScalar c = vx * vy;
      r.add_term(red.cls, c * twist.coerce(c.kind()));
    }
  }
  return r;
}

ExactScalar heis_trace(const HeisElement& x) { return x.coeff(Z2Class(2 * x.genus(), 0)); }

}  // namespace skein::heis
