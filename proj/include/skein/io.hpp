#pragma once

// JSON formats shared by the command-line tool and the Python bindings.
// Parse failures throw skein::ParseError.

#include <string>

#include <boost/rational.hpp>
#include "json.hpp"

#include "skein/heis.hpp"
#include "skein/pillowcase.hpp"
#include "skein/ribbon.hpp"
#include "skein/tqft.hpp"
#include "skein/torus_skein.hpp"
#include "skein/twisted.hpp"

namespace skein::io {

using nlohmann::json;
using Rational = boost::rational<long long>;

// "a/b" or an integer "a". Throws ParseError otherwise or for b = 0.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

// "formal" or "a/b".
arith::Specialization parse_spec(const std::string& text);
std::string format_spec(const arith::Specialization& spec);

// {"<exponent>": "<decimal coefficient>"}
json to_json(const arith::LaurentPoly& x);
arith::LaurentPoly laurent_from_json(const json& j);

// Integer: "123"; Gaussian: {"re": "1", "im": "-2"}; Laurent: {"laurent": {...}};
// Complex: [re, im].
json to_json(const arith::ExactScalar& x);
arith::ExactScalar scalar_from_json(const json& j);

// "empty" or {"d": 2, "p": 1, "q": 0} (d defaults to 1).
json to_json(const torus::TorusMulticurve& c);
torus::TorusMulticurve multicurve_from_json(const json& j);

// [{"curve": ..., "coeff": ...}, ...]; coefficients are widened to the
// specialization's kind (missing coefficient means 1).
json to_json(const torus::SkeinElement& x);
torus::SkeinElement skein_from_json(const json& j, const arith::Specialization& spec);

json to_json(const heis::HeisElement& x);
heis::HeisElement heis_from_json(const json& j);

json to_json(const twisted::TwistedElement& x);

// {"vertices": [["h1", "h2"], ...], "edges": [{"pair": ["h1", "h2"], "type": "moebius"}]}
ribbon::RibbonGraph ribbon_from_json(const json& j);
json to_json(const ribbon::RibbonGraph& g);

// {"edges": [{"name": "a", "ends": [0, 1]}, {"name": "c", "ends": []}]}, or one
// of the strings "circle", "theta", "dumbbell".
tqft::TrivalentGraph graph_from_json(const json& j);
json to_json(const tqft::TrivalentGraph& g);
// Multiplicities as a list in edge order or an object keyed by edge name
// (missing names mean 0).
tqft::EdgeMulti multi_from_json(const json& j, const tqft::TrivalentGraph& g);

json to_json(const pillow::BumpSpec& b);
pillow::BumpSpec bump_from_json(const json& j);

json complex_json(std::complex<double> z);

}  // namespace skein::io
