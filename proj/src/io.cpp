#include "skein/io.hpp"

#include <charconv>
#include <map>
#include <set>

#include "skein/errors.hpp"

namespace skein::io {

using arith::BigInt;
using arith::ExactScalar;
using arith::GaussianInt;
using arith::LaurentPoly;
using arith::ScalarKind;

namespace {

long long parse_ll(const std::string& s, const std::string& what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("malformed " + what + ": '" + s + "'");
  return v;
}

BigInt parse_bigint(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (!j.is_string()) throw ParseError("expected an integer or decimal string");
  const std::string s = j.get<std::string>();
  size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size()) throw ParseError("empty integer string");
  for (size_t k = start; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') throw ParseError("malformed integer '" + s + "'");
  return BigInt(s[0] == '+' ? s.substr(1) : s);
}

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  long long num = parse_ll(text.substr(0, slash), "rational");
  long long den = slash == std::string::npos ? 1 : parse_ll(text.substr(slash + 1), "rational");
  if (den == 0) throw ParseError("zero denominator in '" + text + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

arith::Specialization parse_spec(const std::string& text) {
  if (text == "formal") return arith::Specialization::formal();
  auto slash = text.find('/');
  long long a = parse_ll(text.substr(0, slash), "specialization");
  long long b = slash == std::string::npos ? 1 : parse_ll(text.substr(slash + 1), "specialization");
  try {
    return arith::Specialization::root(a, b);
  } catch (const Error& e) {
    throw ParseError(std::string("invalid specialization: ") + e.what());
  }
}

std::string format_spec(const arith::Specialization& spec) {
  if (spec.is_formal()) return "formal";
  return std::to_string(spec.a()) + "/" + std::to_string(spec.b());
}

json to_json(const LaurentPoly& x) {
  json j = json::object();
  for (const auto& [e, c] : x.coeffs()) j[std::to_string(e)] = c.str();
  return j;
}

LaurentPoly laurent_from_json(const json& j) {
  return guarded("Laurent polynomial", [&] {
    if (!j.is_object()) throw ParseError("Laurent polynomial must be an object");
    LaurentPoly out;
    for (const auto& [k, v] : j.items()) out += LaurentPoly::monomial(parse_ll(k, "exponent"), parse_bigint(v));
    return out;
  });
}

json to_json(const ExactScalar& x) {
  switch (x.kind()) {
    case ScalarKind::Integer:
      return x.as_integer().str();
    case ScalarKind::Gaussian:
      return {{"re", x.as_gaussian().re.str()}, {"im", x.as_gaussian().im.str()}};
    case ScalarKind::Laurent:
      return {{"laurent", to_json(x.as_laurent())}};
    case ScalarKind::Complex:
      return complex_json(x.as_complex());
  }
  return nullptr;
}

ExactScalar scalar_from_json(const json& j) {
  return guarded("scalar", [&]() -> ExactScalar {
    if (j.is_string() || j.is_number_integer()) return parse_bigint(j);
    if (j.is_array()) {
      if (j.size() != 2) throw ParseError("complex scalar must be [re, im]");
      return arith::Complex(j[0].get<double>(), j[1].get<double>());
    }
    if (j.is_object() && j.contains("laurent")) return laurent_from_json(j.at("laurent"));
    if (j.is_object() && j.contains("re")) {
      GaussianInt g{parse_bigint(j.at("re")), j.contains("im") ? parse_bigint(j.at("im")) : BigInt(0)};
      return g;
    }
    throw ParseError("unrecognised scalar " + j.dump());
  });
}

json to_json(const torus::TorusMulticurve& c) {
  if (c.is_empty()) return "empty";
  return {{"d", c.copies()}, {"p", c.p()}, {"q", c.q()}};
}

torus::TorusMulticurve multicurve_from_json(const json& j) {
  return guarded("multicurve", [&] {
    if (j.is_string()) {
      if (j.get<std::string>() != "empty") throw ParseError("unknown multicurve '" + j.get<std::string>() + "'");
      return torus::TorusMulticurve::empty();
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("q")) throw ParseError("multicurve needs p and q");
    int d = j.value("d", 1);
    try {
      return torus::TorusMulticurve::make(d, j.at("p").get<long>(), j.at("q").get<long>());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  });
}

json to_json(const torus::SkeinElement& x) {
  json out = json::array();
  for (const auto& [c, v] : x.terms()) out.push_back({{"curve", to_json(c)}, {"coeff", to_json(v)}});
  return out;
}

torus::SkeinElement skein_from_json(const json& j, const arith::Specialization& spec) {
  return guarded("skein element", [&] {
    torus::SkeinElement out(spec);
    auto add = [&](const json& rec) {
      ExactScalar c = rec.contains("coeff") ? scalar_from_json(rec.at("coeff")) : ExactScalar(1);
      if (c.kind() != spec.kind()) {
        try {
          c = c.coerce(spec.kind());
        } catch (const Error&) {
          throw ParseError("coefficient " + rec.at("coeff").dump() + " does not fit " + format_spec(spec));
        }
      }
      out.add_term(multicurve_from_json(rec.at("curve")), c);
    };
    if (j.is_array()) {
      for (const auto& rec : j) add(rec);
    } else if (j.is_object() && j.contains("curve")) {
      add(j);
    } else {
      out.add_term(multicurve_from_json(j), ExactScalar::one(spec.kind()));
    }
    return out;
  });
}

json to_json(const heis::HeisElement& x) {
  json terms = json::array();
  for (const auto& [cls, c] : x.terms()) terms.push_back({{"class", cls}, {"coeff", to_json(c)}});
  return {{"genus", x.genus()}, {"terms", terms}};
}

heis::HeisElement heis_from_json(const json& j) {
  return guarded("Heisenberg element", [&] {
    heis::HeisElement out(j.at("genus").get<int>());
    for (const auto& t : j.at("terms")) {
      ExactScalar c = scalar_from_json(t.at("coeff"));
      if (c.kind() == ScalarKind::Integer) c = c.coerce(ScalarKind::Gaussian);
      out.add_term(t.at("class").get<heis::Z2Class>(), c);
    }
    return out;
  });
}

json to_json(const twisted::TwistedElement& x) {
  json out = json::array();
  for (const auto& [k, v] : x.terms())
    out.push_back({{"curve", to_json(k.first)}, {"class", k.second}, {"coeff", to_json(v)}});
  return out;
}

ribbon::RibbonGraph ribbon_from_json(const json& j) {
  return guarded("ribbon graph", [&] {
    auto rot = j.at("vertices").get<std::vector<std::vector<std::string>>>();
    std::vector<std::pair<std::pair<std::string, std::string>, ribbon::EdgeType>> edges;
    for (const auto& e : j.at("edges")) {
      auto pair = e.at("pair").get<std::vector<std::string>>();
      if (pair.size() != 2) throw ParseError("edge pair must have two half-edges");
      std::string type = e.value("type", "handle");
      ribbon::EdgeType t;
      if (type == "handle")
        t = ribbon::EdgeType::Handle;
      else if (type == "moebius")
        t = ribbon::EdgeType::Moebius;
      else
        throw ParseError("edge type must be 'handle' or 'moebius'");
      edges.push_back({{pair[0], pair[1]}, t});
    }
    return ribbon::RibbonGraph::from_labels(rot, edges);
  });
}

json to_json(const ribbon::RibbonGraph& g) {
  json vertices = json::array();
  for (const auto& r : g.rotations()) {
    json v = json::array();
    for (int h : r) v.push_back("h" + std::to_string(h));
    vertices.push_back(v);
  }
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"pair", {"h" + std::to_string(e.ends[0]), "h" + std::to_string(e.ends[1])}},
                     {"type", e.type == ribbon::EdgeType::Moebius ? "moebius" : "handle"}});
  return {{"vertices", vertices}, {"edges", edges}};
}

tqft::TrivalentGraph graph_from_json(const json& j) {
  return guarded("graph", [&] {
    if (j.is_string()) {
      const std::string name = j.get<std::string>();
      if (name == "circle") return tqft::TrivalentGraph::circle();
      if (name == "theta") return tqft::TrivalentGraph::theta();
      if (name == "dumbbell") return tqft::TrivalentGraph::dumbbell();
      throw ParseError("unknown graph preset '" + name + "'");
    }
    std::vector<tqft::GraphEdge> edges;
    std::set<std::string> names;
    for (const auto& e : j.at("edges")) {
      tqft::GraphEdge ge{e.at("name").get<std::string>(), e.value("ends", std::vector<int>{})};
      if (!names.insert(ge.name).second) throw ParseError("duplicate edge name '" + ge.name + "'");
      edges.push_back(std::move(ge));
    }
    try {
      return tqft::TrivalentGraph(std::move(edges));
    } catch (const MalformedGraph& e) {
      throw ParseError(e.what());
    }
  });
}

json to_json(const tqft::TrivalentGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"name", e.name}, {"ends", e.ends}});
  return {{"edges", edges}};
}

tqft::EdgeMulti multi_from_json(const json& j, const tqft::TrivalentGraph& g) {
  return guarded("multiplicities", [&] {
    tqft::EdgeMulti m(g.d_G(), 0);
    if (j.is_array()) {
      if (static_cast<int>(j.size()) != g.d_G()) throw ParseError("multiplicity list length differs from edge count");
      for (int e = 0; e < g.d_G(); ++e) m[e] = j[e].get<int>();
    } else if (j.is_object()) {
      std::map<std::string, int> index;
      for (int e = 0; e < g.d_G(); ++e) index[g.edges()[e].name] = e;
      for (const auto& [k, v] : j.items()) {
        auto it = index.find(k);
        if (it == index.end()) throw ParseError("unknown edge '" + k + "'");
        m[it->second] = v.get<int>();
      }
    } else if (j.is_number_integer() && g.d_G() == 1) {
      m[0] = j.get<int>();
    } else {
      throw ParseError("multiplicities must be a list or an object");
    }
    for (int v : m)
      if (v < 0) throw ParseError("multiplicities must be nonnegative");
    return m;
  });
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json to_json(const pillow::BumpSpec& b) {
  return {{"center", {b.center_alpha, b.center_beta}},
          {"radius", b.radius},
          {"amplitude", complex_json(b.amplitude)},
          {"slope_alpha", complex_json(b.slope_alpha)},
          {"slope_beta", complex_json(b.slope_beta)}};
}

pillow::BumpSpec bump_from_json(const json& j) {
  return guarded("bump", [&] {
    auto cplx = [](const json& v) { return std::complex<double>(v.at(0).get<double>(), v.at(1).get<double>()); };
    pillow::BumpSpec b;
    auto c = j.at("center");
    b.center_alpha = c.at(0).get<double>();
    b.center_beta = c.at(1).get<double>();
    b.radius = j.at("radius").get<double>();
    if (j.contains("amplitude")) b.amplitude = cplx(j.at("amplitude"));
    if (j.contains("slope_alpha")) b.slope_alpha = cplx(j.at("slope_alpha"));
    if (j.contains("slope_beta")) b.slope_beta = cplx(j.at("slope_beta"));
    return b;
  });
}

}  // namespace skein::io
