#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json record() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "skeinlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = skeinlab::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / ("skeinlab-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return (dir / name).string();
}

json check_named(const json& record, const std::string& name) {
  for (const auto& c : record.at("checks"))
    if (c.at("name") == name) return c;
  return json();
}

}  // namespace

TEST_CASE("skein-mul at A = -i") {
  auto dir = scratch();
  auto m = write(dir, "m.json", R"({"p": 1, "q": 0})");
  auto l = write(dir, "l.json", R"({"p": 0, "q": 1})");
  auto r = run({"--no-cache", "skein-mul", m, l});
  REQUIRE(r.code == skeinlab::kPass);
  auto rec = r.record();
  CHECK(rec.at("table").at("rows") == json::parse(R"([[1, 1, -1, "-i"], [1, 1, 1, "i"]])"));
  CHECK(check_named(rec, "phi_homomorphism").at("pass") == true);

  auto csv = run({"--no-cache", "--output", "csv", "skein-mul", m, l});
  CHECK(csv.out == "d,p,q,coeff\n1,1,-1,-i\n1,1,1,i\n");

  auto formal = run({"--no-cache", "skein-mul", m, l, "--spec", "formal"});
  CHECK(formal.code == skeinlab::kPass);
}

TEST_CASE("usage and parse errors exit with 2") {
  auto dir = scratch();
  auto bad = write(dir, "bad.json", R"({"p": 2, "q": 4})");
  auto empty = write(dir, "empty.json", "");
  auto ok = write(dir, "ok.json", R"({"p": 1, "q": 0})");
  CHECK(run({}).code == skeinlab::kUsage);
  CHECK(run({"no-such-command"}).code == skeinlab::kUsage);
  CHECK(run({"--no-cache", "skein-mul", bad, ok}).code == skeinlab::kUsage);
  CHECK(run({"--no-cache", "skein-mul", empty}).code == skeinlab::kUsage);
  CHECK(run({"--no-cache", "skein-mul", (dir / "missing.json").string()}).code == skeinlab::kUsage);
  CHECK(run({"--no-cache", "skein-mul", ok, "--spec", "2/4"}).code == skeinlab::kUsage);
  CHECK(run({"--no-cache", "tqft-trace", "--graph", "square", "--m", "1"}).code == skeinlab::kUsage);
  CHECK(run({"--no-cache", "tqft-trace", "--graph", "theta", "--m", "1,1"}).code == skeinlab::kUsage);
  CHECK(run({"--no-cache", "pillowcase-check", "--curve", "2,4"}).code == skeinlab::kUsage);
  CHECK(run({"--no-cache", "--output", "xml", "ribbon-check", "disc"}).code == skeinlab::kUsage);
  auto help = run({"--help"});
  CHECK(help.code == skeinlab::kPass);
  CHECK(help.out.find("iso-sweep") != std::string::npos);
}

TEST_CASE("iso-sweep passes and reports injected faults") {
  auto ok = run({"--no-cache", "iso-sweep", "--max-copies", "2", "--max-coord", "2"});
  CHECK(ok.code == skeinlab::kPass);
  auto bad = run({"--no-cache", "iso-sweep", "--max-copies", "1", "--max-coord", "1", "--corrupt", R"({"p": 1, "q": 0})"});
  REQUIRE(bad.code == skeinlab::kCheckFailed);
  CHECK_FALSE(bad.record().at("pass").get<bool>());
  auto literal = run({"--no-cache", "iso-sweep", "--max-copies", "2", "--max-coord", "2", "--labeling", "literal"});
  CHECK(literal.code == skeinlab::kCheckFailed);
}

TEST_CASE("tqft-trace on the circle") {
  auto r = run({"--no-cache", "tqft-trace", "--graph", "circle", "--m", "2", "--n", "10,20,40", "--reference", "2"});
  REQUIRE(r.code == skeinlab::kPass);
  auto rows = r.record().at("values").at("rows");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].at("trace_sum").get<double>() == 76.0);
  CHECK(std::abs(rows[1].at("normalized").get<double>() - 1.9) < 1e-12);
  CHECK(check_named(r.record(), "convergence_bound").at("pass") == true);

  auto tight = run({"--no-cache", "tqft-trace", "--graph", "circle", "--m", "2", "--n", "20", "--reference", "2", "--bound", "1"});
  CHECK(tight.code == skeinlab::kCheckFailed);

  auto theta = run({"--no-cache", "tqft-trace", "--graph", "theta", "--m", "1,1,1", "--n-range", "2:5"});
  CHECK(theta.code == skeinlab::kPass);
  CHECK(check_named(theta.record(), "contracted_agreement").at("pass") == true);

  auto zero = run({"--no-cache", "tqft-trace", "--graph", "theta", "--m", "0,0,0", "--n", "2"});
  REQUIRE(zero.code == skeinlab::kPass);
  // p = 8: ten admissible colorings
  CHECK(zero.record().at("values").at("rows")[0].at("trace_sum").get<double>() == 10.0);
}

TEST_CASE("tqft-trace reads graph files") {
  auto dir = scratch();
  auto g = write(dir, "g.json", R"({"graph": "dumbbell", "m": {"e": 2}})");
  auto r = run({"--no-cache", "tqft-trace", "--graph", g, "--n", "3"});
  CHECK(r.code == skeinlab::kPass);
  CHECK(r.record().at("job").at("m") == json::parse("[0, 2, 0]"));
}

TEST_CASE("tqft-limit agrees with tracei") {
  auto r = run({"--no-cache", "--samples", "50000", "tqft-limit", "--graph", "theta", "--m", "1,1,1"});
  CHECK(r.code == skeinlab::kPass);
  auto v = r.record().at("values");
  CHECK(v.at("class_vanishes") == true);
  auto odd = run({"--no-cache", "--samples", "20000", "tqft-limit", "--graph", "circle", "--m", "1"});
  CHECK(odd.code == skeinlab::kPass);
  CHECK(std::abs(odd.record().at("values").at("limit").get<double>()) < 1e-12);
}

TEST_CASE("pillowcase checks") {
  auto all = run({"--no-cache", "pillowcase-check"});
  CHECK(all.code == skeinlab::kPass);
  auto comm = run({"--no-cache", "pillowcase-check", "--check", "commutation"});
  REQUIRE(comm.code == skeinlab::kPass);
  auto phase = check_named(comm.record(), "commutation").at("observed_phase");
  CHECK(std::abs(phase[0].get<double>() + 1.0) < 1e-9);
  CHECK(std::abs(phase[1].get<double>()) < 1e-9);
  auto trace = run({"--no-cache", "--samples", "50000", "pillowcase-check", "--check", "trace", "--copies", "2"});
  CHECK(trace.code == skeinlab::kPass);
  auto identity = run({"--no-cache", "pillowcase-check", "--check", "identity", "--t", "0"});
  CHECK(identity.code == skeinlab::kPass);
  auto slope = run({"--no-cache", "pillowcase-check", "--check", "slope", "--curve", "2,3", "--t", "1/3"});
  CHECK(slope.code == skeinlab::kPass);
  auto product = run({"--no-cache", "pillowcase-check", "--check", "product", "--curve", "1,1", "--with", "1,-1",
                      "--with-copies", "2"});
  CHECK(product.code == skeinlab::kPass);
  // An impossible tolerance makes a numeric check fail.
  auto strict = run({"--no-cache", "--tol", "-1", "pillowcase-check", "--check", "closed-form"});
  CHECK(strict.code == skeinlab::kCheckFailed);
}

TEST_CASE("ribbon-check presets and fuzzing") {
  auto r = run({"--no-cache", "ribbon-check", "disc", "annulus", "moebius", "two-moebius"});
  REQUIRE(r.code == skeinlab::kPass);
  auto graphs = r.record().at("values").at("graphs");
  REQUIRE(graphs.size() == 4);
  CHECK(graphs[0].at("n") == 1);
  CHECK(graphs[1].at("n") == 2);
  CHECK(graphs[2].at("m") == json::parse("[1, 1]"));
  CHECK(graphs[3].at("chi") == -1);
  auto fuzz = run({"--no-cache", "ribbon-check", "--fuzz", "300"});
  CHECK(fuzz.code == skeinlab::kPass);
  auto threaded = run({"--no-cache", "--threads", "3", "ribbon-check", "--fuzz", "300"});
  CHECK(threaded.out == fuzz.out);
}

TEST_CASE("gram-probe") {
  auto r = run({"--no-cache", "--samples", "50000", "gram-probe"});
  CHECK(r.code == skeinlab::kPass);
  CHECK(r.record().at("values").at("eigenvalues").size() == 5);
}

TEST_CASE("result cache") {
  auto dir = scratch();
  std::vector<std::string> args = {"--cache-dir", dir.string(), "tqft-trace", "--graph", "circle", "--m", "2", "--n", "7"};
  auto first = run(args);
  REQUIRE(first.code == skeinlab::kPass);
  auto second = run(args);
  CHECK(second.out == first.out);

  // Threads are not part of the job, so they hit the same entry.
  auto with_threads = args;
  with_threads.insert(with_threads.begin(), {"--threads", "2"});
  CHECK(run(with_threads).out == first.out);

  // A tampered entry is served as-is, which shows nothing was recomputed.
  std::string hash = first.record().at("job_hash");
  fs::path file = dir / (hash + ".json");
  REQUIRE(fs::exists(file));
  json envelope = json::parse(std::ifstream(file));
  CHECK(envelope.contains("created"));
  envelope["record"]["values"]["marker"] = "from-cache";
  std::ofstream(file) << envelope.dump();
  auto hit = run(args);
  CHECK(hit.record().at("values").at("marker") == "from-cache");

  auto bypass = args;
  bypass.insert(bypass.begin(), "--no-cache");
  CHECK(run(bypass).out == first.out);

  // An entry for a different job under the same name is ignored.
  envelope["record"]["job"]["m"] = json::array({5});
  std::ofstream(file) << envelope.dump();
  CHECK(run(args).out == first.out);

  std::ofstream(file) << "not json";
  CHECK(run(args).out == first.out);
}

TEST_CASE("output file and hashing helpers") {
  auto dir = scratch();
  auto path = (dir / "out.json").string();
  auto r = run({"--no-cache", "-o", path, "ribbon-check", "disc"});
  CHECK(r.code == skeinlab::kPass);
  CHECK(r.out.empty());
  CHECK(json::parse(std::ifstream(path)).at("pass") == true);

  CHECK(skeinlab::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(skeinlab::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(skeinlab::job_hash(json::parse(R"({"b": 1, "a": 2})")) == skeinlab::job_hash(json::parse(R"({"a": 2, "b": 1})")));
  CHECK(skeinlab::job_hash(json::object()).size() == 16);
}
