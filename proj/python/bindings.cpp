#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "skein/errors.hpp"
#include "skein/io.hpp"

namespace py = pybind11;
using skein::io::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw skein::ParseError(e.what());
  }
}

skein::tqft::TrivalentGraph graph(const std::string& text) { return skein::io::graph_from_json(parse(text)); }

skein::tqft::AdmissibleSequence sequence(const std::string& base, const std::string& zeta, long long step) {
  skein::tqft::AdmissibleSequence seq;
  auto b = skein::io::parse_rational(base);
  seq.a = b.numerator();
  seq.b = b.denominator();
  seq.zeta = skein::io::parse_rational(zeta);
  seq.step = step;
  return seq;
}

std::string skein_mul(const std::vector<std::string>& factors, const std::string& spec_text) {
  auto spec = skein::io::parse_spec(spec_text);
  skein::torus::SkeinElement acc = skein::torus::SkeinElement::curve(spec, skein::torus::TorusMulticurve::empty());
  for (const auto& f : factors) acc = skein::torus::skein_mul(acc, skein::io::skein_from_json(parse(f), spec));
  return skein::io::to_json(acc).dump();
}

std::string phi_map(const std::string& x) {
  auto spec = skein::twisted::minus_i();
  return skein::io::to_json(skein::twisted::phi_map(skein::io::skein_from_json(parse(x), spec))).dump();
}

std::string heis_mul(const std::string& x, const std::string& y) {
  return skein::io::to_json(skein::heis::heis_mul(skein::io::heis_from_json(parse(x)), skein::io::heis_from_json(parse(y))))
      .dump();
}

py::dict iso_sweep(int max_copies, long max_coord, const std::string& labeling, unsigned threads) {
  skein::twisted::SweepOptions opts;
  if (labeling == "literal")
    opts.labeling = skein::twisted::Labeling::Literal;
  else if (labeling != "reflected")
    throw skein::ParseError("labeling must be 'reflected' or 'literal'");
  opts.threads = threads;
  skein::twisted::SweepReport r;
  {
    py::gil_scoped_release release;
    r = skein::twisted::iso_sweep({max_copies, max_coord}, opts);
  }
  py::list failures;
  for (const auto& f : r.failures)
    failures.append(py::make_tuple(skein::io::to_json(f.x).dump(), skein::io::to_json(f.y).dump()));
  py::dict out;
  out["basis_size"] = r.basis_size;
  out["pairs"] = r.pairs;
  out["failures"] = failures;
  return out;
}

py::dict ribbon_check(const std::string& g) {
  auto d = skein::ribbon::lemma_details(skein::io::ribbon_from_json(parse(g)));
  py::dict out;
  out["holds"] = d.holds;
  out["n"] = d.n;
  out["chi"] = d.chi;
  out["m_values"] = d.m_values;
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full{"skeinlab"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = skeinlab::run(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of skeinlab. Structured values cross the boundary as JSON text.";

  auto base = py::register_exception<skein::Error>(m, "SkeinError", PyExc_ValueError);
  py::register_exception<skein::ParseError>(m, "ParseError", base.ptr());

  m.def("skein_mul", &skein_mul, py::arg("factors"), py::arg("spec") = "-1/2");
  m.def("phi_map", &phi_map, py::arg("x"));
  m.def("heis_mul", &heis_mul, py::arg("x"), py::arg("y"));
  m.def("iso_sweep", &iso_sweep, py::arg("max_copies") = 3, py::arg("max_coord") = 5, py::arg("labeling") = "reflected",
        py::arg("threads") = 1);
  m.def("ribbon_check", &ribbon_check, py::arg("graph"));
  m.def("random_ribbon_graph", [](std::uint64_t seed) { return skein::io::to_json(skein::ribbon::random_graph(seed)).dump(); },
        py::arg("seed"));

  m.def("count_colorings", [](const std::string& g, long long p) { return skein::tqft::count_colorings(graph(g), p); },
        py::arg("graph"), py::arg("p"));
  m.def(
      "trace_sum",
      [](const std::string& g, const std::string& m_text, const std::string& theta, bool contracted) {
        auto G = graph(g);
        auto multi = skein::io::multi_from_json(parse(m_text), G);
        auto th = skein::io::parse_rational(theta);
        return contracted ? skein::tqft::trace_sum_contracted(G, multi, th, th.denominator())
                          : skein::tqft::trace_sum(G, multi, th, th.denominator());
      },
      py::arg("graph"), py::arg("m"), py::arg("theta"), py::arg("contracted") = false);
  m.def(
      "normalized_trace",
      [](const std::string& g, const std::string& m_text, long long n, const std::string& base, const std::string& zeta,
         long long step) {
        auto G = graph(g);
        auto seq = sequence(base, zeta, step);
        if (!seq.admissible_at(n)) throw skein::ParseError("theta_n is not in lowest terms with denominator p_n");
        return skein::tqft::normalized_trace(G, skein::io::multi_from_json(parse(m_text), G), seq, n);
      },
      py::arg("graph"), py::arg("m"), py::arg("n"), py::arg("base") = "-1/2", py::arg("zeta") = "1", py::arg("step") = 4);
  m.def(
      "limit_trace",
      [](const std::string& g, const std::string& m_text, const std::string& base, const std::string& zeta,
         std::uint64_t samples, std::uint64_t seed, unsigned threads) {
        auto G = graph(g);
        auto multi = skein::io::multi_from_json(parse(m_text), G);
        auto seq = sequence(base, zeta, 4);
        py::gil_scoped_release release;
        auto est = skein::tqft::limit_trace(G, multi, seq, {samples, seed, threads});
        return std::pair{est.value, est.stderr_};
      },
      py::arg("graph"), py::arg("m"), py::arg("base") = "-1/2", py::arg("zeta") = "1", py::arg("samples") = 200000,
      py::arg("seed") = 1, py::arg("threads") = 1);
  m.def(
      "tracei",
      [](const std::string& g, const std::string& m_text) {
        auto G = graph(g);
        auto r = skein::tqft::tracei_value(G, skein::io::multi_from_json(parse(m_text), G));
        return std::pair{r.value, r.error};
      },
      py::arg("graph"), py::arg("m"));
  m.def(
      "class_vanishes",
      [](const std::string& g, const std::string& m_text) {
        auto G = graph(g);
        return skein::tqft::class_vanishes(G, skein::io::multi_from_json(parse(m_text), G));
      },
      py::arg("graph"), py::arg("m"));

  m.def(
      "operator_trace",
      [](long p, long q, int d) { return skein::pillow::operator_trace_exact(skein::pillow::TorusOperator::o(p, q, d)); },
      py::arg("p"), py::arg("q"), py::arg("d") = 1);
  m.def(
      "psi_commutator_error",
      [](double t, std::uint64_t seed, int points) {
        skein::pillow::EquivariantSection sec(skein::pillow::random_bump(seed));
        auto s = sec.fn();
        auto lm = skein::pillow::psi_op(0, 1, t, skein::pillow::psi_op(1, 0, t, s));
        auto ml = skein::pillow::psi_op(1, 0, t, skein::pillow::psi_op(0, 1, t, s));
        std::complex<double> phase = std::polar(1.0, -4.0 * 3.141592653589793 * t * t);
        double worst = 0.0;
        for (int k = 0; k < points; ++k) {
          auto [a, b] = skein::pillow::random_regular_point(seed, static_cast<std::uint64_t>(k), {{1, 0}, {0, 1}});
          worst = std::max(worst, std::abs(lm(a, b) - phase * ml(a, b)));
        }
        return worst;
      },
      py::arg("t"), py::arg("seed") = 1, py::arg("points") = 100);

  m.def("run_cli", &run_cli, py::arg("args"));
}
