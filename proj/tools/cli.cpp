#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "skein/errors.hpp"
#include "skein/io.hpp"
#include "skein/pillowcase.hpp"
#include "skein/quadrature.hpp"
#include "skein/ribbon.hpp"
#include "skein/tqft.hpp"
#include "skein/torus_skein.hpp"
#include "skein/twisted.hpp"

namespace skeinlab {

namespace fs = std::filesystem;
using nlohmann::json;
using skein::ParseError;
using skein::arith::ScalarKind;
using skein::io::Rational;

namespace {

constexpr const char* kRecordVersion = "skeinlab/1";

struct Common {
  std::uint64_t seed = 1;
  std::uint64_t samples = 200000;
  double tol = std::numeric_limits<double>::quiet_NaN();
  unsigned threads = 1;
  std::string cache_dir;
  bool no_cache = false;
  bool verbose = false;
  std::string output = "json";
  std::string out_path;

  bool has_tol() const { return !std::isnan(tol); }
  double tol_or(double fallback) const { return has_tol() ? tol : fallback; }
};

// ------------------------------------------------------------------ input

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ParseError("empty input: " + origin);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in " + origin + ": " + e.what());
  }
}

json read_json_file(const std::string& path) { return parse_json_text(slurp(path), "'" + path + "'"); }

// "p,q" -> primitive pair
std::pair<long, long> parse_slope(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("slope must be written p,q: '" + text + "'");
  try {
    size_t used = 0;
    long p = std::stol(text.substr(0, comma), &used);
    if (used != comma) throw ParseError("bad slope '" + text + "'");
    std::string rest = text.substr(comma + 1);
    long q = std::stol(rest, &used);
    if (used != rest.size()) throw ParseError("bad slope '" + text + "'");
    return {p, q};
  } catch (const std::logic_error&) {
    throw ParseError("bad slope '" + text + "'");
  }
}

std::string canonical_rational(const std::string& text) { return skein::io::format_rational(skein::io::parse_rational(text)); }

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

// ----------------------------------------------------------------- output

json check(const std::string& name, bool pass, json detail = json::object()) {
  detail["name"] = name;
  detail["pass"] = pass;
  return detail;
}

json table(std::vector<std::string> columns, json rows) { return {{"columns", std::move(columns)}, {"rows", std::move(rows)}}; }

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "";
  return csv_cell(json(v.dump()));
}

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

fs::path default_cache_dir() {
  if (const char* env = std::getenv("SKEINLAB_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "skeinlab";
  return ".skeinlab-cache";
}

// ---------------------------------------------------------------- commands

using Compute = std::function<json(const json& job)>;

struct Job {
  json spec;
  Compute compute;
};

skein::tqft::AdmissibleSequence sequence_of(const json& job) {
  Rational base = skein::io::parse_rational(job.at("theta").get<std::string>());
  skein::tqft::AdmissibleSequence seq;
  seq.a = base.numerator();
  seq.b = base.denominator();
  seq.zeta = skein::io::parse_rational(job.at("zeta").get<std::string>());
  seq.step = job.value("step", 4LL);
  if (seq.step <= 0 || seq.step % 2 != 0) throw ParseError("--step must be a positive even integer");
  return seq;
}

bool at_minus_half(const skein::tqft::AdmissibleSequence& seq) {
  return seq.base() == Rational(-1, 2) && seq.zeta == Rational(1);
}

// skein-mul ---------------------------------------------------------------

json compute_skein_mul(const json& job) {
  using namespace skein::torus;
  auto spec = skein::io::parse_spec(job.at("spec").get<std::string>());
  std::vector<SkeinElement> xs;
  for (const auto& in : job.at("inputs")) xs.push_back(skein::io::skein_from_json(in, spec));
  if (xs.empty()) throw ParseError("skein-mul needs at least one input");

  SkeinElement prod = xs[0];
  NCTorusElement expected = phi(xs[0]);
  for (size_t k = 1; k < xs.size(); ++k) {
    prod = skein_mul(prod, xs[k]);
    expected = nc_mul(expected, phi(xs[k]), spec);
  }
  NCTorusElement image = phi(prod);
  double tol = job.at("tol").get<double>();
  bool hom = spec.kind() == ScalarKind::Complex ? image.approx_equal(expected, tol) : image == expected;

  json classes = json::array();
  for (auto [a, b] : grading(prod)) classes.push_back({a, b});
  json rows = json::array();
  for (const auto& [c, v] : prod.terms()) rows.push_back({c.copies(), c.p(), c.q(), v.to_string()});

  return {{"values", {{"product", skein::io::to_json(prod)}, {"grading", classes}}},
          {"checks", json::array({check("phi_homomorphism", hom)})},
          {"table", table({"d", "p", "q", "coeff"}, rows)}};
}

// iso-sweep ---------------------------------------------------------------

json compute_iso_sweep(const json& job, unsigned threads) {
  using namespace skein::twisted;
  SweepBounds bounds{job.at("max_copies").get<int>(), job.at("max_coord").get<long>()};
  if (bounds.max_copies < 1 || bounds.max_coord < 1) throw ParseError("sweep bounds must be positive");
  SweepOptions opts;
  opts.labeling = job.at("labeling") == "literal" ? Labeling::Literal : Labeling::Reflected;
  opts.threads = threads;
  if (!job.at("corrupt").is_null()) opts.corrupt = skein::io::multicurve_from_json(job.at("corrupt"));

  auto report = iso_sweep(bounds, opts);
  json failures = json::array();
  json rows = json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"x", skein::io::to_json(f.x)},
                        {"y", skein::io::to_json(f.y)},
                        {"lhs", skein::io::to_json(f.lhs)},
                        {"rhs", skein::io::to_json(f.rhs)},
                        {"equal", false}});
    rows.push_back({f.x.to_string(), f.y.to_string(), f.lhs.to_string(), f.rhs.to_string()});
  }
  json values = {{"basis_size", report.basis_size}, {"pairs", report.pairs}, {"failures", failures}};
  return {{"values", values},
          {"checks", json::array({check("iso_sweep", report.failures.empty(),
                                        {{"failed_pairs", report.failures.size()}, {"pairs", report.pairs}})})},
          {"table", table({"x", "y", "lhs", "rhs"}, rows)}};
}

// tqft --------------------------------------------------------------------

struct GraphInput {
  json graph;
  json multi;
};

GraphInput load_graph(const std::string& arg, const std::string& m_text) {
  json src;
  json file_m;
  if (fs::exists(arg)) {
    src = read_json_file(arg);
    if (src.is_object() && src.contains("m")) file_m = src.at("m");
    if (src.is_object() && src.contains("graph")) src = src.at("graph");
  } else {
    src = arg;
  }
  auto g = skein::io::graph_from_json(src);
  json mj;
  if (!m_text.empty()) {
    bool plain = m_text.find_first_of("[{") == std::string::npos;
    mj = plain ? parse_json_text("[" + m_text + "]", "--m") : parse_json_text(m_text, "--m");
  } else if (!file_m.is_null()) {
    mj = file_m;
  } else {
    throw ParseError("edge multiplicities are required (--m or an \"m\" entry in the graph file)");
  }
  return {skein::io::to_json(g), skein::io::multi_from_json(mj, g)};
}

json compute_tqft_trace(const json& job, unsigned threads) {
  using namespace skein::tqft;
  auto g = skein::io::graph_from_json(job.at("graph"));
  EdgeMulti m = job.at("m").get<EdgeMulti>();
  auto seq = sequence_of(job);
  std::string method = job.at("method");
  double tol = job.at("tol").get<double>();
  std::optional<double> reference;
  if (!job.at("reference").is_null()) reference = job.at("reference").get<double>();
  double bound = job.at("bound").get<double>();

  json rows = json::array();
  json out_rows = json::array();
  bool agree = true;
  bool within = true;
  double max_rel = 0.0;
  for (long long n : job.at("ns").get<std::vector<long long>>()) {
    if (n < 1) throw ParseError("n must be positive");
    if (!seq.admissible_at(n))
      throw ParseError("theta_n = " + skein::io::format_rational(seq.theta(n)) + " does not have lowest denominator p_n = " +
                       std::to_string(seq.p(n)));
    long long p = seq.p(n);
    Rational th = seq.theta(n);
    json row = {{"n", n}, {"p", p}, {"theta", skein::io::format_rational(th)}};
    std::optional<double> naive, contracted;
    if (method != "contracted") naive = trace_sum(g, m, th, p, threads);
    if (method != "naive") contracted = trace_sum_contracted(g, m, th, p);
    double value = naive ? *naive : *contracted;
    if (naive) row["trace_sum"] = *naive;
    if (contracted) row["contracted"] = *contracted;
    if (naive && contracted) {
      double rel = std::abs(*naive - *contracted) / std::max(1.0, std::abs(*naive));
      max_rel = std::max(max_rel, rel);
      agree = agree && rel <= tol;
    }
    double normalized = std::pow(2.0 / static_cast<double>(p), g.d_G()) * value;
    row["normalized"] = normalized;
    if (reference) {
      double err = std::abs(normalized - *reference);
      row["error"] = err;
      within = within && err <= bound / static_cast<double>(n) + 1e-12;
    }
    out_rows.push_back({n, p, row["theta"], row.value("trace_sum", json()), row.value("contracted", json()), normalized,
                        row.value("error", json())});
    rows.push_back(row);
  }
  json checks = json::array();
  if (method == "both") checks.push_back(check("contracted_agreement", agree, {{"max_relative_difference", max_rel}}));
  if (reference) checks.push_back(check("convergence_bound", within, {{"reference", *reference}, {"bound", bound}}));
  return {{"values", {{"rows", rows}, {"d_G", g.d_G()}}},
          {"checks", checks},
          {"table", table({"n", "p", "theta", "trace_sum", "contracted", "normalized", "error"}, out_rows)}};
}

json compute_tqft_limit(const json& job, unsigned threads) {
  using namespace skein::tqft;
  auto g = skein::io::graph_from_json(job.at("graph"));
  EdgeMulti m = job.at("m").get<EdgeMulti>();
  auto seq = sequence_of(job);
  LimitOptions opts{job.at("samples").get<std::uint64_t>(), job.at("seed").get<std::uint64_t>(), threads};
  auto est = limit_trace(g, m, seq, opts);
  json values = {{"limit", est.value},
                 {"stderr", est.stderr_},
                 {"samples", est.samples},
                 {"class_vanishes", class_vanishes(g, m)},
                 {"lambda_B_size", lambda_B_classes(g, static_cast<int>(std::lcm(seq.b, 2LL))).size()}};
  json checks = json::array();
  json rows = json::array({{"limit_trace", est.value, est.stderr_}});
  auto compare = [&](const std::string& name, double ref, double ref_err) {
    double sigma = std::sqrt(est.stderr_ * est.stderr_ + ref_err * ref_err);
    double diff = std::abs(est.value - ref);
    checks.push_back(check(name, diff <= 3.0 * sigma + 1e-12, {{"reference", ref}, {"difference", diff}, {"sigma", sigma}}));
  };
  if (at_minus_half(seq) && seq.step == 4) {
    auto ti = tracei_value(g, m, opts);
    values["tracei"] = {{"value", ti.value}, {"error", ti.error}, {"monte_carlo", ti.monte_carlo}};
    rows.push_back({"tracei", ti.value, ti.error});
    compare("tracei_agreement", ti.value, ti.error);
  }
  if (!job.at("reference").is_null()) compare("reference", job.at("reference").get<double>(), 0.0);
  return {{"values", values}, {"checks", checks}, {"table", table({"quantity", "value", "error"}, rows)}};
}

// pillowcase ----------------------------------------------------------------

json compute_pillowcase(const json& job, unsigned threads) {
  using namespace skein::pillow;
  const std::string which = job.at("check");
  const double t = to_double(skein::io::parse_rational(job.at("t").get<std::string>()));
  const int points = job.at("points").get<int>();
  const std::uint64_t seed = job.at("seed").get<std::uint64_t>();
  const std::uint64_t samples = job.at("samples").get<std::uint64_t>();
  const json tol_override = job.at("tol");
  auto curve = skein::io::multicurve_from_json(job.at("curve"));
  auto other = skein::io::multicurve_from_json(job.at("with"));
  if (curve.is_empty() || other.is_empty()) throw ParseError("pillowcase curves must be nonempty");
  if (points < 1) throw ParseError("--points must be positive");
  auto tol_for = [&](double fallback) { return tol_override.is_null() ? fallback : tol_override.get<double>(); };

  EquivariantSection section(random_bump(seed));
  SectionFn s = section.fn();
  std::vector<std::pair<long, long>> slopes = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {curve.p(), curve.q()}, {other.p(), other.q()}};
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < points; ++k) pts.push_back(random_regular_point(seed, static_cast<std::uint64_t>(k), slopes));

  json checks = json::array();
  json rows = json::array();
  auto pointwise = [&](const std::string& name, double tol, const std::function<std::pair<Complex, Complex>(double, double)>& f,
                       json extra = json::object()) {
    double max_err = 0.0;
    int nonzero = 0;
    for (auto [a, b] : pts) {
      auto [lhs, rhs] = f(a, b);
      max_err = std::max(max_err, std::abs(lhs - rhs));
      if (std::abs(rhs) > 1e-12) ++nonzero;
    }
    extra["max_error"] = max_err;
    extra["tolerance"] = tol;
    extra["nonzero_points"] = nonzero;
    checks.push_back(check(name, max_err <= tol, extra));
    rows.push_back({name, max_err, tol, max_err <= tol});
  };
  bool all = which == "all";
  bool matched = false;
  auto wants = [&](const char* name) {
    bool w = all || which == name;
    matched = matched || w;
    return w;
  };

  if (wants("identity")) {
    auto z = psi_op(curve.p(), curve.q(), 0.0, s);
    pointwise("identity", tol_for(1e-12), [&](double a, double b) { return std::pair{z(a, b), s(a, b)}; });
  }
  if (wants("commutation")) {
    auto lm = psi_op(0, 1, t, psi_op(1, 0, t, s));
    auto ml = psi_op(1, 0, t, psi_op(0, 1, t, s));
    Complex expected = std::polar(1.0, -4.0 * std::numbers::pi * t * t);
    // Observed phase where the section is largest.
    double best = 0.0;
    Complex phase = 0.0;
    for (auto [a, b] : pts) {
      Complex r = ml(a, b);
      if (std::abs(r) > best) {
        best = std::abs(r);
        phase = lm(a, b) / r;
      }
    }
    json extra = {{"expected_phase", skein::io::complex_json(expected)},
                  {"observed_phase", best > 1e-12 ? skein::io::complex_json(phase) : json()}};
    pointwise("commutation", tol_for(1e-9), [&](double a, double b) { return std::pair{lm(a, b), expected * ml(a, b)}; },
              extra);
  }
  if (wants("slope")) {
    long p = curve.p(), q = curve.q();
    SectionFn rhs = s;
    for (long k = 0; k < std::labs(q); ++k) rhs = psi_op(0, 1, q > 0 ? t : -t, rhs);
    for (long k = 0; k < std::labs(p); ++k) rhs = psi_op(1, 0, p > 0 ? t : -t, rhs);
    auto lhs = psi_op(p, q, t, s);
    Complex phase = std::polar(1.0, -2.0 * std::numbers::pi * t * t * static_cast<double>(p * q));
    pointwise("slope", tol_for(1e-9), [&](double a, double b) { return std::pair{lhs(a, b), phase * rhs(a, b)}; });
  }
  if (wants("closed-form")) {
    auto o = o_op(curve.p(), curve.q(), 1, s);
    auto cf = o_closed_form(curve.p(), curve.q(), s);
    pointwise("closed_form", tol_for(1e-9), [&](double a, double b) { return std::pair{o(a, b), cf(a, b)}; });
  }
  if (wants("product")) {
    auto spec = skein::twisted::minus_i();
    auto prod = skein::torus::skein_mul(skein::torus::SkeinElement::curve(spec, curve),
                                        skein::torus::SkeinElement::curve(spec, other));
    auto lhs = o_op(curve.p(), curve.q(), curve.copies(), o_op(other.p(), other.q(), other.copies(), s));
    std::vector<std::pair<Complex, SectionFn>> terms;
    for (const auto& [c, v] : prod.terms())
      terms.push_back({v.coerce(ScalarKind::Complex).as_complex(), c.is_empty() ? s : o_op(c.p(), c.q(), c.copies(), s)});
    bool algebraic = (TorusOperator::o(curve.p(), curve.q(), curve.copies()) *
                      TorusOperator::o(other.p(), other.q(), other.copies()))
                         .approx_equal(operator_of(prod), tol_for(1e-9));
    pointwise(
        "product", tol_for(1e-9),
        [&](double a, double b) {
          Complex r = 0.0;
          for (const auto& [c, f] : terms) r += c * f(a, b);
          return std::pair{lhs(a, b), r};
        },
        {{"skein_product", skein::io::to_json(prod)}, {"operators_equal", algebraic}});
    if (!algebraic) checks.back()["pass"] = false;
  }
  if (wants("equivariance")) {
    std::uint64_t k = 0;
    pointwise("equivariance", tol_for(1e-12), [&](double a, double b) {
      long mm = static_cast<long>(std::floor(skein::quad::counter_uniform(seed, k, 7) * 7.0)) - 3;
      long nn = static_cast<long>(std::floor(skein::quad::counter_uniform(seed, k, 8) * 7.0)) - 3;
      ++k;
      Complex base = s(a, b);
      Complex shifted = s(a + 2.0 * static_cast<double>(mm), b + 2.0 * static_cast<double>(nn));
      double defect = std::abs(shifted - cocycle(mm, nn, a, b) * base) + std::abs(s(-a, -b) - base);
      return std::pair{base + defect, base};
    });
  }
  if (wants("holonomy")) {
    // Clockwise square of side 2t: symplectic area 2t^2.
    double side = 2.0 * t;
    double max_err = 0.0;
    Complex expected = std::polar(1.0, 2.0 * std::numbers::pi * 0.5 * side * side);
    for (auto [a, b] : pts) {
      Complex h = loop_holonomy({{a, b}, {a, b + side}, {a + side, b + side}, {a + side, b}});
      max_err = std::max(max_err, std::abs(h - expected));
    }
    double tol = tol_for(1e-12);
    checks.push_back(check("holonomy", max_err <= tol,
                           {{"expected", skein::io::complex_json(expected)}, {"max_error", max_err}, {"tolerance", tol}}));
    rows.push_back({"holonomy", max_err, tol, max_err <= tol});
  }
  if (wants("trace")) {
    auto op = TorusOperator::o(curve.p(), curve.q(), curve.copies());
    auto tr = operator_trace(op, samples, seed, threads);
    auto ref = skein::tqft::tracei_value(skein::tqft::TrivalentGraph::circle(), {curve.copies()});
    Complex exact = operator_trace_exact(op);
    double diff = std::abs(tr.value - ref.value);
    bool pass = diff <= 3.0 * tr.stderr_ + 1e-12;
    checks.push_back(check("trace", pass,
                           {{"value", skein::io::complex_json(tr.value)},
                            {"stderr", tr.stderr_},
                            {"reference", ref.value},
                            {"exact", skein::io::complex_json(exact)},
                            {"difference", diff}}));
    rows.push_back({"trace", diff, 3.0 * tr.stderr_ + 1e-12, pass});
  }
  if (!matched) throw ParseError("unknown pillowcase check '" + which + "'");
  return {{"values", {{"bump", skein::io::to_json(section.bump())}, {"points", points}}},
          {"checks", checks},
          {"table", table({"check", "error", "tolerance", "pass"}, rows)}};
}

// ribbon ----------------------------------------------------------------------

json ribbon_preset(const std::string& name) {
  auto edge = [](const char* a, const char* b, const char* type) { return json{{"pair", json::array({a, b})}, {"type", type}}; };
  auto rot = [](std::vector<std::string> hs) { return json(std::move(hs)); };
  if (name == "disc")
    return {{"vertices", json::array({rot({"a"}), rot({"b"})})}, {"edges", json::array({edge("a", "b", "handle")})}};
  if (name == "annulus") return {{"vertices", json::array({rot({"a", "b"})})}, {"edges", json::array({edge("a", "b", "handle")})}};
  if (name == "moebius")
    return {{"vertices", json::array({rot({"a", "b"})})}, {"edges", json::array({edge("a", "b", "moebius")})}};
  if (name == "two-moebius")
    return {{"vertices", json::array({rot({"a", "b", "c", "d"})})},
            {"edges", json::array({edge("a", "b", "moebius"), edge("c", "d", "moebius")})}};
  throw ParseError("no such ribbon graph file or preset '" + name + "'");
}

json compute_ribbon(const json& job, unsigned threads) {
  using namespace skein::ribbon;
  json rows = json::array();
  json graphs = json::array();
  bool ok = true;
  for (const auto& gj : job.at("graphs")) {
    auto g = skein::io::ribbon_from_json(gj);
    auto r = lemma_details(g);
    ok = ok && r.holds;
    graphs.push_back({{"n", r.n}, {"chi", r.chi}, {"assignments", r.assignments}, {"m", r.m_values}, {"holds", r.holds}});
    std::string ms;
    for (int m : r.m_values) ms += (ms.empty() ? "" : " ") + std::to_string(m);
    rows.push_back({"graph " + std::to_string(graphs.size() - 1), r.n, r.chi, ms, r.holds});
  }
  const auto fuzz = job.at("fuzz").get<std::uint64_t>();
  const auto seed = job.at("seed").get<std::uint64_t>();
  json failures = json::array();
  if (fuzz > 0) {
    std::vector<char> holds(fuzz, 1);
    std::vector<std::thread> pool;
    unsigned nt = std::max(1u, threads);
    for (unsigned w = 0; w < nt; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t k = w; k < fuzz; k += nt) holds[k] = lemma_check(random_graph(skein::quad::mix64(seed) + k));
      });
    for (auto& th : pool) th.join();
    for (std::uint64_t k = 0; k < fuzz; ++k)
      if (!holds[k]) failures.push_back({{"index", k}, {"graph", skein::io::to_json(random_graph(skein::quad::mix64(seed) + k))}});
    ok = ok && failures.empty();
    rows.push_back({"fuzz x" + std::to_string(fuzz), nullptr, nullptr, std::to_string(failures.size()) + " failures",
                    failures.empty()});
  }
  json values = {{"graphs", graphs}, {"fuzz", fuzz}, {"fuzz_failures", failures}};
  return {{"values", values},
          {"checks", json::array({check("lemma", ok)})},
          {"table", table({"source", "n", "chi", "m", "holds"}, rows)}};
}

// gram ------------------------------------------------------------------------

json compute_gram(const json& job, unsigned threads) {
  using namespace skein::tqft;
  auto spec = skein::io::parse_spec(job.at("spec").get<std::string>());
  if (spec.is_formal()) throw ParseError("gram-probe needs a root a/b, not a formal parameter");
  std::vector<skein::torus::SkeinElement> basis;
  for (const auto& b : job.at("basis")) basis.push_back(skein::io::skein_from_json(b, spec));
  AdmissibleSequence seq;
  seq.a = spec.a();
  seq.b = spec.b();
  seq.zeta = skein::io::parse_rational(job.at("zeta").get<std::string>());
  LimitOptions opts{job.at("samples").get<std::uint64_t>(), job.at("seed").get<std::uint64_t>(), threads};
  auto report = gram_probe(basis, seq, opts);
  double empty_form = torus_limit_form(skein::torus::SkeinElement::curve(spec, skein::torus::TorusMulticurve::empty()), seq, opts)
                          .real();
  double tol = job.at("tol").get<double>();

  auto matrix_json = [](const std::vector<std::vector<std::complex<double>>>& m) {
    json out = json::array();
    for (const auto& row : m) {
      json r = json::array();
      for (auto z : row) r.push_back(skein::io::complex_json(z));
      out.push_back(r);
    }
    return out;
  };
  json rows = json::array();
  for (size_t i = 0; i < report.matrix.size(); ++i)
    for (size_t j = 0; j < report.matrix.size(); ++j) {
      rows.push_back({"matrix", i, j, report.matrix[i][j].real(), report.matrix[i][j].imag()});
      rows.push_back({"hermitian", i, j, report.hermitian[i][j].real(), report.hermitian[i][j].imag()});
    }
  for (size_t k = 0; k < report.eigenvalues.size(); ++k) rows.push_back({"eigenvalue", k, nullptr, report.eigenvalues[k], 0.0});

  double min_eig = report.eigenvalues.empty() ? 0.0 : report.eigenvalues.front();
  json values = {{"matrix", matrix_json(report.matrix)},
                 {"hermitian", matrix_json(report.hermitian)},
                 {"eigenvalues", report.eigenvalues},
                 {"min_eigenvalue", min_eig},
                 {"positive_semidefinite_estimate", min_eig >= -3.0 * report.max_stderr},
                 {"max_asymmetry", report.max_asymmetry},
                 {"max_stderr", report.max_stderr},
                 {"empty_form", empty_form}};
  json checks = json::array({check("symmetric", report.max_asymmetry <= tol, {{"tolerance", tol}}),
                             check("empty_form", std::abs(empty_form - 1.0) <= 0.01, {{"value", empty_form}})});
  return {{"values", values}, {"checks", checks}, {"table", table({"kind", "i", "j", "re", "im"}, rows)}};
}

json default_gram_basis() {
  json basis = json::array();
  basis.push_back(json::array({{{"curve", "empty"}}}));
  for (auto c : {json{{"p", 1}, {"q", 0}}, json{{"p", 0}, {"q", 1}}, json{{"p", 1}, {"q", 1}}, json{{"d", 2}, {"p", 1}, {"q", 0}}})
    basis.push_back(json::array({{{"curve", c}}}));
  return basis;
}

// ------------------------------------------------------------------- driver

int emit(const json& record, const Common& c, std::ostream& out) {
  std::string text = c.output == "csv" ? render_csv(record) : record.dump(2) + "\n";
  if (c.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) throw ParseError("cannot write output file '" + c.out_path + "'");
    f << text;
  }
  return record.at("pass").get<bool>() ? kPass : kCheckFailed;
}

int execute(const std::string& command, const Job& job_in, const Common& c, std::ostream& out, std::ostream& err) {
  json job = job_in.spec;
  job["command"] = command;
  job["format"] = kRecordVersion;
  const std::string hash = job_hash(job);

  fs::path cache_file;
  if (!c.no_cache) {
    fs::path dir = c.cache_dir.empty() ? default_cache_dir() : fs::path(c.cache_dir);
    cache_file = dir / (hash + ".json");
    std::ifstream in(cache_file, std::ios::binary);
    if (in) {
      try {
        json envelope = json::parse(in);
        if (envelope.at("record").at("job") == job) {
          if (c.verbose) err << "cache hit " << hash << " (stored " << envelope.value("created", "?") << ")\n";
          return emit(envelope.at("record"), c, out);
        }
      } catch (const json::exception&) {
        if (c.verbose) err << "ignoring unreadable cache entry " << cache_file << "\n";
      }
    }
  }

  json body = job_in.compute(job);
  bool pass = true;
  for (const auto& ch : body.at("checks")) pass = pass && ch.at("pass").get<bool>();
  json record = {{"command", command}, {"job_hash", hash}, {"job", job}, {"pass", pass}};
  for (auto& [k, v] : body.items()) record[k] = v;

  if (!c.no_cache) {
    std::error_code ec;
    fs::create_directories(cache_file.parent_path(), ec);
    json envelope = {{"created", timestamp_utc()}, {"record", record}};
    std::ofstream f(cache_file, std::ios::binary);
    if (f) f << envelope.dump() << "\n";
    else if (c.verbose) err << "could not write cache entry " << cache_file << "\n";
  }
  return emit(record, c, out);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string job_hash(const json& job) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(job.dump());
  return ss.str();
}

std::string render_csv(const json& record) {
  std::string out;
  const auto& t = record.at("table");
  bool first = true;
  for (const auto& col : t.at("columns")) {
    out += (first ? "" : ",") + csv_cell(col);
    first = false;
  }
  out += "\n";
  for (const auto& row : t.at("rows")) {
    first = true;
    for (const auto& cell : row) {
      out += (first ? "" : ",") + csv_cell(cell);
      first = false;
    }
    out += "\n";
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"skeinlab: torus skein algebra, twisted Heisenberg algebra, TQFT traces and pillowcase operators"};
  app.name("skeinlab");
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--samples", c.samples, "Monte Carlo sample count")->capture_default_str();
  app.add_option("--tol", c.tol, "Tolerance override");
  app.add_option("--threads", c.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", c.cache_dir, "Result cache directory");
  app.add_flag("--no-cache", c.no_cache, "Neither read nor write the result cache");
  app.add_option("--output", c.output, "Output format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--out", c.out_path, "Write output to this file instead of stdout");
  app.add_flag("-v,--verbose", c.verbose, "Report cache activity on stderr");

  // skein-mul
  std::string spec_text = "-1/2";
  std::vector<std::string> inputs;
  auto* mul = app.add_subcommand("skein-mul", "Multiply skein elements of the torus");
  mul->add_option("inputs", inputs, "JSON files holding skein elements or multicurves")->required();
  mul->add_option("--spec", spec_text, "Specialization: formal or a/b for A = exp(i pi a/b)")->capture_default_str();

  // iso-sweep
  int max_copies = 3;
  long max_coord = 5;
  std::string labeling = "reflected";
  std::string corrupt;
  auto* sweep = app.add_subcommand("iso-sweep", "Check phi(xy) = phi(x)phi(y) on all basis pairs within bounds");
  sweep->add_option("--max-copies", max_copies)->capture_default_str();
  sweep->add_option("--max-coord", max_coord)->capture_default_str();
  sweep->add_option("--labeling", labeling)->capture_default_str()->check(CLI::IsMember({"reflected", "literal"}));
  sweep->add_option("--corrupt", corrupt, "Negate the image of this curve (fault injection)")->group("");

  // tqft-trace / tqft-limit
  std::string graph_arg, m_text, theta_text = "-1/2", zeta_text = "1", n_range, method = "both";
  long long step = 4;
  std::vector<long long> ns;
  double reference = std::numeric_limits<double>::quiet_NaN();
  double bound = 2.0;
  auto add_graph_opts = [&](CLI::App* sub) {
    sub->add_option("--graph", graph_arg, "Graph JSON file or preset (circle, theta, dumbbell)")->required();
    sub->add_option("--m", m_text, "Edge multiplicities: 1,1,0 or JSON list/object");
    sub->add_option("--theta", theta_text, "Base a/b")->capture_default_str();
    sub->add_option("--zeta", zeta_text, "zeta as a/b")->capture_default_str();
    sub->add_option("--step", step, "p_n = step * n")->capture_default_str();
    sub->add_option("--reference", reference, "Reference value for the limit");
  };
  auto* trace = app.add_subcommand("tqft-trace", "Trace sums over admissible colorings and normalized traces");
  add_graph_opts(trace);
  trace->add_option("--n", ns, "Values of n")->delimiter(',');
  trace->add_option("--n-range", n_range, "Range lo:hi of n");
  trace->add_option("--method", method)->capture_default_str()->check(CLI::IsMember({"both", "naive", "contracted"}));
  trace->add_option("--bound", bound, "Convergence check |error| <= bound / n")->capture_default_str();
  auto* limit = app.add_subcommand("tqft-limit", "Monte Carlo limit of normalized traces and the tracei comparison");
  add_graph_opts(limit);

  // pillowcase-check
  std::string pc_check = "all", t_text = "1/2", curve_text = "1,0", with_text = "0,1";
  int copies = 1, with_copies = 1, points = 100;
  auto* pillow = app.add_subcommand("pillowcase-check", "Transport operator checks on the pillowcase");
  pillow->add_option("--check", pc_check)
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "identity", "commutation", "slope", "closed-form", "product", "equivariance", "holonomy",
                             "trace"}));
  pillow->add_option("--t", t_text, "Flow time a/b")->capture_default_str();
  pillow->add_option("--curve", curve_text, "Slope p,q")->capture_default_str();
  pillow->add_option("--copies", copies)->capture_default_str();
  pillow->add_option("--with", with_text, "Second slope for the product check")->capture_default_str();
  pillow->add_option("--with-copies", with_copies)->capture_default_str();
  pillow->add_option("--points", points)->capture_default_str();

  // ribbon-check
  std::vector<std::string> ribbon_inputs;
  std::uint64_t fuzz = 0;
  auto* ribbon = app.add_subcommand("ribbon-check", "Parity check n + m + chi = 0 mod 2 on ribbon graphs");
  ribbon->add_option("graphs", ribbon_inputs, "Graph JSON files or presets (disc, annulus, moebius, two-moebius)");
  ribbon->add_option("--fuzz", fuzz, "Number of random graphs")->capture_default_str();

  // gram-probe
  std::string basis_file;
  auto* gram = app.add_subcommand("gram-probe", "Gram matrix of the limit form on a torus basis");
  gram->add_option("--spec", spec_text, "Root a/b")->capture_default_str();
  gram->add_option("--zeta", zeta_text)->capture_default_str();
  gram->add_option("--basis", basis_file, "JSON list of skein elements");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    Job job;
    std::string name;
    if (mul->parsed()) {
      name = "skein-mul";
      json ins = json::array();
      for (const auto& path : inputs) ins.push_back(read_json_file(path));
      job.spec = {{"spec", skein::io::format_spec(skein::io::parse_spec(spec_text))},
                  {"inputs", ins},
                  {"tol", c.tol_or(1e-12)}};
      job.compute = compute_skein_mul;
    } else if (sweep->parsed()) {
      name = "iso-sweep";
      json bad = corrupt.empty() ? json() : skein::io::to_json(skein::io::multicurve_from_json(parse_json_text(corrupt, "--corrupt")));
      job.spec = {{"max_copies", max_copies}, {"max_coord", max_coord}, {"labeling", labeling}, {"corrupt", bad}};
      job.compute = [&](const json& j) { return compute_iso_sweep(j, c.threads); };
    } else if (trace->parsed() || limit->parsed()) {
      auto gi = load_graph(graph_arg, m_text);
      json common = {{"graph", gi.graph},
                     {"m", gi.multi},
                     {"theta", canonical_rational(theta_text)},
                     {"zeta", canonical_rational(zeta_text)},
                     {"step", step},
                     {"reference", std::isnan(reference) ? json() : json(reference)}};
      sequence_of(common);
      if (trace->parsed()) {
        name = "tqft-trace";
        if (!n_range.empty()) {
          auto colon = n_range.find(':');
          if (colon == std::string::npos) throw ParseError("--n-range must be lo:hi");
          long long lo = 0, hi = 0;
          try {
            lo = std::stoll(n_range.substr(0, colon));
            hi = std::stoll(n_range.substr(colon + 1));
          } catch (const std::logic_error&) {
            throw ParseError("bad --n-range '" + n_range + "'");
          }
          if (lo < 1 || hi < lo) throw ParseError("--n-range needs 1 <= lo <= hi");
          for (long long n = lo; n <= hi; ++n) ns.push_back(n);
        }
        if (ns.empty()) ns.push_back(10);
        common["ns"] = ns;
        common["method"] = method;
        common["bound"] = bound;
        common["tol"] = c.tol_or(1e-9);
        job.spec = common;
        job.compute = [&](const json& j) { return compute_tqft_trace(j, c.threads); };
      } else {
        name = "tqft-limit";
        common["samples"] = c.samples;
        common["seed"] = c.seed;
        job.spec = common;
        job.compute = [&](const json& j) { return compute_tqft_limit(j, c.threads); };
      }
    } else if (pillow->parsed()) {
      name = "pillowcase-check";
      auto [p1, q1] = parse_slope(curve_text);
      auto [p2, q2] = parse_slope(with_text);
      json cj = skein::io::to_json(skein::io::multicurve_from_json({{"d", copies}, {"p", p1}, {"q", q1}}));
      json wj = skein::io::to_json(skein::io::multicurve_from_json({{"d", with_copies}, {"p", p2}, {"q", q2}}));
      job.spec = {{"check", pc_check},
                  {"t", canonical_rational(t_text)},
                  {"curve", cj},
                  {"with", wj},
                  {"points", points},
                  {"seed", c.seed},
                  {"samples", c.samples},
                  {"tol", c.has_tol() ? json(c.tol) : json()}};
      job.compute = [&](const json& j) { return compute_pillowcase(j, c.threads); };
    } else if (ribbon->parsed()) {
      name = "ribbon-check";
      if (ribbon_inputs.empty() && fuzz == 0) throw ParseError("ribbon-check needs graph files, presets or --fuzz");
      json graphs = json::array();
      for (const auto& arg : ribbon_inputs) {
        json gj = fs::exists(arg) ? read_json_file(arg) : ribbon_preset(arg);
        graphs.push_back(skein::io::to_json(skein::io::ribbon_from_json(gj)));
      }
      job.spec = {{"graphs", graphs}, {"fuzz", fuzz}, {"seed", c.seed}};
      job.compute = [&](const json& j) { return compute_ribbon(j, c.threads); };
    } else if (gram->parsed()) {
      name = "gram-probe";
      auto spec = skein::io::parse_spec(spec_text);
      json basis = basis_file.empty() ? default_gram_basis() : read_json_file(basis_file);
      if (!basis.is_array()) throw ParseError("basis file must hold a JSON list");
      json canon = json::array();
      for (const auto& b : basis) canon.push_back(skein::io::to_json(skein::io::skein_from_json(b, spec)));
      job.spec = {{"spec", skein::io::format_spec(spec)},
                  {"zeta", canonical_rational(zeta_text)},
                  {"basis", canon},
                  {"samples", c.samples},
                  {"seed", c.seed},
                  {"tol", c.tol_or(1e-9)}};
      job.compute = [&](const json& j) { return compute_gram(j, c.threads); };
    }
    return execute(name, job, c, out, err);
  } catch (const skein::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace skeinlab
