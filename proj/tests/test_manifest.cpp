#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <string>

#include "tcyl/errors.hpp"
#include "tcyl/field_io.hpp"
#include "tcyl/manifest.hpp"
#include "tcyl/pipeline.hpp"

using namespace tcyl;
namespace fs = std::filesystem;

namespace {

RunManifest small_run(std::uint64_t seed) {
  RunManifest m;
  m.model.mass = 1.0;
  m.model.beta = 4.0;
  m.model.circumference = 4.0;
  m.model.poly = Polynomial::quartic(0.5);
  m.n_t = 8;
  m.n_x = 8;
  m.mc.seed = seed;
  m.mc.n_therm = 200;
  m.mc.n_sweeps = 3000;
  m.mc.n_chains = 2;
  m.finalize();
  return m;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tcyl_test_manifest_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("SHA-256 digest") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifest round trip and hash") {
  auto m = small_run(42);
  m.model.poly = Polynomial({0.1, 0.0, 0.25, 0.0, 0.5});
  m.checks = {"kms", "exact_covariance"};
  m.oracle.momentum_scale = 3.0;
  m.finalize();
  const auto text = m.to_text();
  CHECK(text.find("P = [0.1, 0, 0.25, 0, 0.5]") != std::string::npos);
  const auto back = parse_manifest(text);
  CHECK(back.manifest_hash == m.manifest_hash);
  CHECK(back.to_text() == text);
  CHECK(back.model.poly.coeffs() == m.model.poly.coeffs());
  CHECK(back.checks == m.checks);
  CHECK(back.mc.seed == 42);
  CHECK(back.oracle.momentum_scale == 3.0);

  auto same = m;
  same.output_dir = "elsewhere";
  same.finalize();
  CHECK(same.manifest_hash == m.manifest_hash);
  auto other = m;
  other.mc.seed = 43;
  other.finalize();
  CHECK(other.manifest_hash != m.manifest_hash);

  const auto free = parse_manifest("[model]\nmass = 1\nbeta = 2\ncircumference = 2\nP = [0]\n");
  CHECK(free.model.poly.is_zero());
  CHECK(free.manifest_hash.size() == 64);
  CHECK(free.n_t == 16);
}

TEST_CASE("manifest rejects corrupt or unknown content") {
  const auto text = small_run(1).to_text();
  CHECK_THROWS_AS(parse_manifest(replace(text, "n_sweeps = 3000", "n_sweeps = 3001")), FormatError);
  CHECK_THROWS_AS(parse_manifest(replace(text, "[lattice]\n", "[lattice]\nn_z = 4\n")), FormatError);
  CHECK_THROWS_AS(parse_manifest(text + "[extra]\nkey = 1\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest("[mc]\nseed = twelve\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest("[model]\nP = 1, 2\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest("[checks]\nenabled = kms, telepathy\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_manifest("[lattice]\nn_t = 0\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_manifest("[model]\nP = [0, 0, 0, -1]\n"), InvalidParameter);
  CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.toml"), Error);
}

TEST_CASE("verdict JSON is deterministic") {
  CheckReport a;
  a.name = "kms_periodicity";
  a.verdict = Verdict::Pass;
  a.statistic = 1.25;
  a.threshold = 4.0;
  a.values = {{"max_z", 1.25}};
  a.message = "m";
  CheckReport b = a;
  b.name = "clustering";
  b.verdict = Verdict::Inconclusive;
  const auto j1 = verdicts_json("abc", 7, {a, b});
  CHECK(j1 == verdicts_json("abc", 7, {a, b}));
  const auto j = nlohmann::json::parse(j1);
  CHECK(j["manifest_hash"] == "abc");
  CHECK(j["seed"] == 7);
  CHECK(j["all_pass"] == false);
  CHECK(j["checks"][0]["verdict"] == "PASS");
  CHECK(j["checks"][1]["verdict"] == "INCONCLUSIVE");
  CHECK(j1.find("time") == std::string::npos);
  CHECK(all_pass({a}));
  CHECK_FALSE(all_pass({a, b}));

  const auto txt = report_text("title", "abc", {a, b}, {"note one"});
  CHECK(txt.find("PASS") != std::string::npos);
  CHECK(txt.find("note one") != std::string::npos);
}

TEST_CASE("simulation pipeline reproducibility") {
  const auto m = small_run(5);
  const auto r1 = run_simulation(m, 1);
  const auto r2 = run_simulation(m, 2);
  REQUIRE(r1.samples.size() == r2.samples.size());
  CHECK(r1.samples == r2.samples);
  CHECK(r1.raw.s == r2.raw.s);
  CHECK(r1.reports.size() == 3);

  const auto d1 = scratch("a");
  const auto d2 = scratch("b");
  write_simulation(r1, d1);
  write_simulation(r2, d2);
  for (const auto* name : {"manifest.toml", "samples.bin", "correlator.csv", "observables.csv", "verdicts.json",
                           "report.txt"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(d1 / name));
    CHECK(read_text_file(d1 / name) == read_text_file(d2 / name));
  }
  CHECK(read_text_file(d1 / "observables.csv").rfind("observable,mean,std_error,tau_int,n_eff\n", 0) == 0);

  const auto again = correlate_run(d1);
  CHECK(again.manifest.manifest_hash == m.manifest_hash);
  CHECK(again.raw.spec == m.lattice());
  CHECK(again.reports.size() == r1.reports.size());

  const auto nelson = nelson_compare_runs(d1, d2);
  CHECK(nelson.verdict == Verdict::Pass);

  auto different = small_run(6);
  const auto r3 = run_simulation(different, 2);
  CHECK(r3.samples != r1.samples);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("oracle pipeline on the free circle") {
  RunManifest m;
  m.model.mass = 0.7;
  m.model.beta = 3.0;
  m.model.circumference = 3.0;
  m.oracle.k_max = 2;
  m.oracle.n_max = 3;
  m.finalize();
  const auto r = run_oracle(m);
  CHECK(r.gap == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(r.e_c == 0.0);
  CHECK(all_pass(r.reports));
  CHECK(r.two_point_csv.rfind("t,y,value\n", 0) == 0);

  m.oracle.momentum_scale = 3.0;
  m.finalize();
  CHECK_FALSE(all_pass(run_oracle(m).reports));
}
