#include "skein/twisted.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <thread>

#include "skein/errors.hpp"

namespace skein::twisted {

using arith::GaussianInt;
using arith::ScalarKind;
using arith::Specialization;
using torus::NCTorusElement;

namespace {

Z2Class mod2_class(const TorusMulticurve& c) {
  auto [hp, hq] = c.homology();
  return {static_cast<int>(((hp % 2) + 2) % 2), static_cast<int>(((hq % 2) + 2) % 2)};
}

ExactScalar gaussian(const ExactScalar& x) { return x.coerce(ScalarKind::Gaussian); }

}  // namespace

Specialization minus_i() { return Specialization::root(-1, 2); }
Specialization minus_one() { return Specialization::root(1, 1); }

// ---------------------------------------------------------------- TwistedElement

TwistedElement TwistedElement::unit() {
  return basis(TorusMulticurve::empty(), {0, 0}, GaussianInt{1, 0});
}

TwistedElement TwistedElement::basis(const TorusMulticurve& c, const Z2Class& cls, ExactScalar coeff) {
  TwistedElement x;
  x.add_term(c, cls, coeff);
  return x;
}

ExactScalar TwistedElement::coeff(const TorusMulticurve& c, const Z2Class& cls) const {
  auto it = terms_.find({c, cls});
  return it == terms_.end() ? ExactScalar(GaussianInt{}) : it->second;
}

void TwistedElement::add_term(const TorusMulticurve& c, const Z2Class& cls, const ExactScalar& coeff) {
  if (cls != mod2_class(c))
    throw Error("twisted term " + c.to_string() + " has nonzero total grading");
  ExactScalar v = gaussian(coeff);
  if (v.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace({c, cls}, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TwistedElement& TwistedElement::operator+=(const TwistedElement& o) {
  for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, v);
  return *this;
}

TwistedElement TwistedElement::scaled(const ExactScalar& c) const {
  TwistedElement r;
  for (const auto& [k, v] : terms_) r.add_term(k.first, k.second, v * gaussian(c));
  return r;
}

std::string TwistedElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << v.to_string() << ")*" << k.first.to_string() << "x[" << k.second[0] << "," << k.second[1] << "]";
  }
  return os.str();
}

// ---------------------------------------------------------------- phi_map

heis::LatticeVector heis_label(const TorusMulticurve& c, Labeling labeling) {
  auto [hp, hq] = c.homology();
  if (labeling == Labeling::Reflected) hq = -hq;
  return {hp, hq};
}

TwistedElement phi_map(const TorusMulticurve& c, Labeling labeling) {
  heis::LatticeVector v = heis_label(c, labeling);
  auto red = heis::heis_class(heis::SymplecticLattice(1), v);
  GaussianInt sign{c.components() % 2 == 0 ? 1 : -1, 0};
  return TwistedElement::basis(c, red.cls, sign * red.phase);
}

TwistedElement phi_map(const SkeinElement& x, Labeling labeling) {
  if (!(x.spec() == minus_i())) throw SpecMismatch("phi_map expects an element at A = -i, got " + x.spec().to_string());
  TwistedElement r;
  for (const auto& [c, v] : x.terms()) r += phi_map(c, labeling).scaled(v);
  return r;
}

TwistedElement twisted_mul(const TwistedElement& x, const TwistedElement& y) {
  const Specialization spec = minus_one();
  TwistedElement r;
  for (const auto& [kx, vx] : x.terms()) {
    NCTorusElement px = torus::phi(kx.first, spec);
    auto hx = heis::HeisElement::basis(1, kx.second, GaussianInt{1, 0});
    for (const auto& [ky, vy] : y.terms()) {
      SkeinElement prod = torus::phi_inverse(torus::nc_mul(px, torus::phi(ky.first, spec), spec), spec);
      auto h = heis::heis_mul(hx, heis::HeisElement::basis(1, ky.second, GaussianInt{1, 0}));
      ExactScalar c = vx * vy;
      for (const auto& [curve, sv] : prod.terms())
        for (const auto& [cls, hv] : h.terms()) r.add_term(curve, cls, c * gaussian(sv) * hv);
    }
  }
  return r;
}

bool iso_check(const SkeinElement& x, const SkeinElement& y, Labeling labeling) {
  TwistedElement lhs = phi_map(torus::skein_mul(x, y), labeling);
  TwistedElement rhs = twisted_mul(phi_map(x, labeling), phi_map(y, labeling));
  return lhs == rhs;
}

std::pair<ExactScalar, ExactScalar> trivial_loop_values() {
  auto loop = [](const Specialization& s) { return -(s.a_power(2) + s.a_power(-2)); };
  ExactScalar skein_side = gaussian(loop(minus_i()));
  ExactScalar twisted_side = gaussian(-loop(minus_one()));
  return {skein_side, twisted_side};
}

// ---------------------------------------------------------------- sweep

std::vector<TorusMulticurve> sweep_basis(const SweepBounds& bounds) {
  std::vector<TorusMulticurve> out{TorusMulticurve::empty()};
  for (int d = 1; d <= bounds.max_copies; ++d)
    for (long p = 0; p <= bounds.max_coord; ++p)
      for (long q = -bounds.max_coord; q <= bounds.max_coord; ++q) {
        if (std::gcd(p, std::labs(q)) != 1) continue;
        if (p == 0 && q != 1) continue;
        out.push_back(TorusMulticurve::make(d, p, q));
      }
  return out;
}

SweepReport iso_sweep(const SweepBounds& bounds, const SweepOptions& options) {
  const std::vector<TorusMulticurve> basis = sweep_basis(bounds);
  const size_t n = basis.size();
  const Specialization si = minus_i();
  const Specialization s1 = minus_one();

  std::vector<NCTorusElement> img_i(n), img_1(n);
  std::vector<TwistedElement> lhs_img(n), rhs_img(n);
  for (size_t k = 0; k < n; ++k) {
    img_i[k] = torus::phi(basis[k], si);
    img_1[k] = torus::phi(basis[k], s1);
    lhs_img[k] = phi_map(basis[k], options.labeling);
    rhs_img[k] = lhs_img[k];
    if (options.corrupt && *options.corrupt == basis[k]) rhs_img[k] = rhs_img[k].scaled(GaussianInt{-1, 0});
  }

  std::vector<std::vector<SweepFailure>> per_row(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t a; (a = next.fetch_add(1)) < n;) {
      for (size_t b = 0; b < n; ++b) {
        SkeinElement prod_i = torus::phi_inverse(torus::nc_mul(img_i[a], img_i[b], si), si);
        TwistedElement lhs;
        for (const auto& [c, v] : prod_i.terms()) lhs += phi_map(c, options.labeling).scaled(v);

        SkeinElement prod_1 = torus::phi_inverse(torus::nc_mul(img_1[a], img_1[b], s1), s1);
        const auto& [ka, va] = *rhs_img[a].terms().begin();
        const auto& [kb, vb] = *rhs_img[b].terms().begin();
        auto h = heis::heis_mul(heis::HeisElement::basis(1, ka.second, GaussianInt{1, 0}),
                                heis::HeisElement::basis(1, kb.second, GaussianInt{1, 0}));
        TwistedElement rhs;
        ExactScalar c = va * vb;
        for (const auto& [curve, sv] : prod_1.terms())
          for (const auto& [cls, hv] : h.terms()) rhs.add_term(curve, cls, c * gaussian(sv) * hv);

        if (!(lhs == rhs)) per_row[a].push_back({basis[a], basis[b], lhs, rhs});
      }
    }
  };

  unsigned threads = std::max(1u, options.threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepReport report;
  report.basis_size = n;
  report.pairs = n * n;
  for (auto& row : per_row)
    for (auto& f : row) report.failures.push_back(std::move(f));
  return report;
}

}  // namespace skein::twisted
