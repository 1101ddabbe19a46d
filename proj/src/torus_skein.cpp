#include "skein/torus_skein.hpp"

#include <cstdlib>
#include <numeric>
#include <optional>
#include <sstream>

#include "skein/errors.hpp"

namespace skein::torus {

namespace {

bool coeff_close(const ExactScalar& a, const ExactScalar& b, double tol) {
  if (a.kind() != ScalarKind::Complex) return a == b;
  std::complex<double> x = a.as_complex();
  std::complex<double> y = b.as_complex();
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

constexpr double kFloatTol = 1e-9;

}  // namespace

// ---------------------------------------------------------------- NCTorusElement

NCTorusElement NCTorusElement::unit(const Specialization& spec) {
  return monomial(0, 0, ExactScalar::one(spec.kind()));
}

NCTorusElement NCTorusElement::monomial(long p, long q, ExactScalar coeff) {
  NCTorusElement x;
  x.add_term(p, q, coeff);
  return x;
}

ExactScalar NCTorusElement::coeff(long p, long q, ScalarKind kind) const {
  auto it = terms_.find({p, q});
  return it == terms_.end() ? ExactScalar::zero(kind) : it->second;
}

void NCTorusElement::add_term(long p, long q, const ExactScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace({p, q}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

NCTorusElement NCTorusElement::sigma() const {
  NCTorusElement r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(Exponent{-e.first, -e.second}, c);
  return r;
}

bool NCTorusElement::is_symmetric() const {
  for (const auto& [e, c] : terms_) {
    auto it = terms_.find({-e.first, -e.second});
    if (it == terms_.end()) {
      if (!c.is_zero()) return false;
      continue;
    }
    if (!coeff_close(c, it->second, kFloatTol)) return false;
  }
  return true;
}

NCTorusElement& NCTorusElement::operator+=(const NCTorusElement& o) {
  for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, c);
  return *this;
}

NCTorusElement& NCTorusElement::operator-=(const NCTorusElement& o) {
  for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, -c);
  return *this;
}

NCTorusElement NCTorusElement::scaled(const ExactScalar& c) const {
  NCTorusElement r;
  for (const auto& [e, v] : terms_) r.add_term(e.first, e.second, v * c);
  return r;
}

bool operator==(const NCTorusElement& x, const NCTorusElement& y) {
  if (x.terms_.size() != y.terms_.size()) return false;
  for (auto a = x.terms_.begin(), b = y.terms_.begin(); a != x.terms_.end(); ++a, ++b)
    if (a->first != b->first || !(a->second == b->second)) return false;
  return true;
}

bool NCTorusElement::approx_equal(const NCTorusElement& o, double tol) const {
  NCTorusElement diff = *this - o;
  for (const auto& [e, c] : diff.terms_)
    if (std::abs(c.coerce(ScalarKind::Complex).as_complex()) > tol) return false;
  return true;
}

std::string NCTorusElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")*M^" << e.first << "L^" << e.second;
  }
  return os.str();
}

NCTorusElement nc_mul(const NCTorusElement& x, const NCTorusElement& y, const Specialization& spec) {
  NCTorusElement r;
  for (const auto& [ex, cx] : x.terms())
    for (const auto& [ey, cy] : y.terms()) {
      // L^q M^r = A^{2qr} M^r L^q
      ExactScalar c = cx * cy * spec.a_power(2 * ex.second * ey.first);
      r.add_term(ex.first + ey.first, ex.second + ey.second, c);
    }
  return r;
}

// ---------------------------------------------------------------- TorusMulticurve

TorusMulticurve TorusMulticurve::make(int d, long p, long q) {
  if (d < 1) throw Error("multicurve copy count must be positive");
  if (std::gcd(std::labs(p), std::labs(q)) != 1)
    throw Error("multicurve slope (" + std::to_string(p) + "," + std::to_string(q) + ") is not primitive");
  if (p < 0 || (p == 0 && q < 0)) {
    p = -p;
    q = -q;
  }
  TorusMulticurve c;
  c.d_ = d;
  c.p_ = p;
  c.q_ = q;
  return c;
}

std::string TorusMulticurve::to_string() const {
  if (is_empty()) return "empty";
  std::ostringstream os;
  if (d_ > 1) os << d_ << "x";
  os << "(" << p_ << "," << q_ << ")";
  return os.str();
}

// ---------------------------------------------------------------- SkeinElement

SkeinElement SkeinElement::curve(const Specialization& spec, const TorusMulticurve& c) {
  return curve(spec, c, ExactScalar::one(spec.kind()));
}

SkeinElement SkeinElement::curve(const Specialization& spec, const TorusMulticurve& c, const ExactScalar& coeff) {
  SkeinElement x(spec);
  x.add_term(c, coeff);
  return x;
}

ExactScalar SkeinElement::coeff(const TorusMulticurve& c) const {
  auto it = terms_.find(c);
  return it == terms_.end() ? ExactScalar::zero(spec_.kind()) : it->second;
}

void SkeinElement::add_term(const TorusMulticurve& c, const ExactScalar& coeff) {
  if (coeff.kind() != spec_.kind())
    throw IncompatibleVariants("coefficient of kind " + arith::kind_name(coeff.kind()) +
                               " in skein element at " + spec_.to_string());
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(c, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SkeinElement& SkeinElement::operator+=(const SkeinElement& o) {
  if (!(spec_ == o.spec_)) throw SpecMismatch("adding skein elements at different specializations");
  for (const auto& [c, v] : o.terms_) add_term(c, v);
  return *this;
}

SkeinElement SkeinElement::scaled(const ExactScalar& c) const {
  SkeinElement r(spec_);
  for (const auto& [curve, v] : terms_) r.add_term(curve, v * c);
  return r;
}

bool operator==(const SkeinElement& x, const SkeinElement& y) {
  if (!(x.spec_ == y.spec_) || x.terms_.size() != y.terms_.size()) return false;
  for (auto a = x.terms_.begin(), b = y.terms_.begin(); a != x.terms_.end(); ++a, ++b)
    if (a->first != b->first || !(a->second == b->second)) return false;
  return true;
}

bool SkeinElement::approx_equal(const SkeinElement& o, double tol) const {
  if (!(spec_ == o.spec_)) return false;
  SkeinElement diff = *this + o.scaled(-ExactScalar::one(spec_.kind()));
  for (const auto& [c, v] : diff.terms_)
    if (std::abs(v.coerce(ScalarKind::Complex).as_complex()) > tol) return false;
  return true;
}

std::string SkeinElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [c, v] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << v.to_string() << ")*" << c.to_string();
  }
  return os.str();
}

// ---------------------------------------------------------------- Phi

NCTorusElement phi(const TorusMulticurve& c, const Specialization& spec) {
  if (c.is_empty()) return NCTorusElement::unit(spec);
  const long p = c.p();
  const long q = c.q();
  NCTorusElement simple;
  ExactScalar lead = spec.a_power(p * q);
  simple.add_term(p, q, lead);
  simple.add_term(-p, -q, lead);
  NCTorusElement power = simple;
  for (int k = 1; k < c.copies(); ++k) power = nc_mul(power, simple, spec);
  return power;
}

NCTorusElement phi(const SkeinElement& x) {
  NCTorusElement r;
  for (const auto& [c, v] : x.terms()) r += phi(c, x.spec()).scaled(v);
  return r;
}

SkeinElement phi_inverse(const NCTorusElement& x, const Specialization& spec) {
  if (!x.is_symmetric()) throw NotSymmetric("element of T is not sigma-invariant: " + x.to_string());

  NCTorusElement rem = x;
  SkeinElement result(spec);
  for (;;) {
    // Highest divisibility depth first; ties by lexicographic canonical exponent.
    std::optional<Exponent> best;
    long best_depth = 0;
    for (const auto& [e, c] : rem.terms()) {
      auto [p, q] = e;
      if (p == 0 && q == 0) continue;
      if (p < 0 || (p == 0 && q < 0)) continue;
      long depth = std::gcd(std::labs(p), std::labs(q));
      if (depth > best_depth) {
        best_depth = depth;
        best = e;
      }
    }
    if (!best) break;
    const long d = best_depth;
    const long p = best->first / d;
    const long q = best->second / d;
    TorusMulticurve curve = TorusMulticurve::make(static_cast<int>(d), p, q);
    // Leading coefficient of Phi(p,q)^d at M^{dp} L^{dq} is A^{d^2 pq}.
    ExactScalar c = rem.coeff(best->first, best->second, spec.kind()) * spec.a_power(-d * d * p * q);
    result.add_term(curve, c);
    NCTorusElement sub = phi(curve, spec).scaled(c);
    rem -= sub;
    if (!rem.coeff(best->first, best->second, spec.kind()).is_zero())
      throw NotInImage("elimination did not clear the leading monomial");
  }

  for (const auto& [e, c] : rem.terms())
    if (e != Exponent{0, 0}) throw NotInImage("non-constant remainder after elimination");
  result.add_term(TorusMulticurve::empty(), rem.coeff(0, 0, spec.kind()));

  NCTorusElement check = phi(result);
  bool ok = spec.kind() == ScalarKind::Complex ? check.approx_equal(x, kFloatTol) : check == x;
  if (!ok) throw NotInImage("phi(phi_inverse(x)) != x");
  return result;
}

SkeinElement skein_mul(const SkeinElement& x, const SkeinElement& y) {
  if (!(x.spec() == y.spec()))
    throw SpecMismatch("skein_mul at " + x.spec().to_string() + " and " + y.spec().to_string());
  return phi_inverse(nc_mul(phi(x), phi(y), x.spec()), x.spec());
}

std::set<std::pair<int, int>> grading(const SkeinElement& x) {
  std::set<std::pair<int, int>> out;
  for (const auto& [c, v] : x.terms()) {
    auto [hp, hq] = c.homology();
    out.emplace(static_cast<int>(((hp % 2) + 2) % 2), static_cast<int>(((hq % 2) + 2) % 2));
  }
  return out;
}

}  // namespace skein::torus
