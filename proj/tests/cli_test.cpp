#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "elastica");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = elastica::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scene(const std::string& name) { return std::string(ELASTICA_SCENES) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("elastica_cli_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> r;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) r.push_back(l);
  return r;
}

}  // namespace

TEST_CASE("invariants of the de Sitter equator") {
  const Run r = cli({"invariants", scene("desitter.json"), "equator", "--grid", "3"});
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "s,kappa_g,kappa_n,tau_g,kappa,tau,f");
  CHECK(l[2] ==
        "5.000000000000e-01,0.000000000000e+00,-1.000000000000e+00,0.000000000000e+00,"
        "1.000000000000e+00,0.000000000000e+00,0.000000000000e+00");
}

TEST_CASE("undefined quantities print as nan or null") {
  const Run csv = cli({"invariants", scene("plane.json"), "line", "--grid", "2"});
  CHECK(csv.code == 0);
  CHECK(lines(csv.out)[1].find(",nan,nan,nan") != std::string::npos);

  const Run js = cli({"invariants", scene("plane.json"), "line", "--grid", "2", "--format", "json"});
  CHECK(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j["samples"][0]["tau"].is_null());
  CHECK(j["samples"][0]["kappa_n"].get<double>() == 0.0);
}

TEST_CASE("verdicts are results, not errors") {
  const Run r = cli({"check-el", scene("cylinder.json"), "helix", "--grid", "9"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "NotExtremal");
  CHECK(j["branch"] == "Q x n = +T");
  CHECK(std::fabs(std::fabs(j["bc"][2].get<double>()) - std::sqrt(2.0)) < 1e-12);

  const Run e = cli({"check-el", scene("plane.json"), "line"});
  CHECK(e.code == 0);
  CHECK(nlohmann::json::parse(e.out)["verdict"] == "Extremal");

  const Run x = cli({"check-el", scene("cylinder.json"), "crossing", "--grid", "65"});
  CHECK(x.code == 0);
  CHECK(nlohmann::json::parse(x.out)["verdict"] == "Inconclusive");
}

TEST_CASE("functional and first variation") {
  const Run f = cli({"functional", scene("cylinder.json"), "helix"});
  CHECK(f.code == 0);
  CHECK(std::fabs(nlohmann::json::parse(f.out)["H"].get<double>() - 2.0) < 1e-12);

  const Run v = cli({"vary", scene("cylinder.json"), "helix", "bump1", "--grid", "3"});
  CHECK(v.code == 0);
  CHECK(v.out.find("-1.697056274848e+01") != std::string::npos);
}

TEST_CASE("numerical-domain errors exit 3 and name the failure") {
  const Run r = cli({"vary", scene("plane.json"), "line", "bump1"});
  CHECK(r.code == 3);
  CHECK(r.out.empty());
  CHECK(r.err.find("IndefiniteDenominator") != std::string::npos);
  CHECK(r.err.find("first variation") != std::string::npos);
  CHECK(r.err.find("at s=") != std::string::npos);
  CHECK(r.err.find("kappa_n") != std::string::npos);

  const Run d = cli({"functional", scene("plane.json"), "line"});
  CHECK(d.code == 3);
  CHECK(d.err.find("DegenerateOsculating") != std::string::npos);
}

TEST_CASE("schema and usage errors exit 2 with a path") {
  const std::string unknown = write_temp(
      "unknown.json",
      R"({"version":"v1","surfaces":[{"name":"p","catalog":"spacelike_plane","bogus":1}]})");
  Run r = cli({"invariants", unknown, "c"});
  CHECK(r.code == 2);
  CHECK(r.err.find("surfaces[0]: unknown field 'bogus'") != std::string::npos);

  const std::string noversion = write_temp("noversion.json", R"({"surfaces":[]})");
  r = cli({"invariants", noversion, "c"});
  CHECK(r.code == 2);
  CHECK(r.err.find("missing field 'version'") != std::string::npos);

  const std::string badref = write_temp(
      "badref.json",
      R"({"version":"v1","surfaces":[{"name":"p","catalog":"spacelike_plane"}],)"
      R"("curves":[{"name":"c","patch":"q","u":"s","v":"0","length":1}]})");
  r = cli({"invariants", badref, "c"});
  CHECK(r.code == 2);
  CHECK(r.err.find("curves[0].patch: unknown surface 'q'") != std::string::npos);

  const std::string badexpr = write_temp(
      "badexpr.json",
      R"({"version":"v1","surfaces":[{"name":"p","catalog":"spacelike_plane"}],)"
      R"("curves":[{"name":"c","patch":"p","u":"s +* 2","v":"0","length":1}]})");
  r = cli({"invariants", badexpr, "c"});
  CHECK(r.code == 2);
  CHECK(r.err.find("curves[0].u") != std::string::npos);

  CHECK(cli({"invariants", scene("nope.json"), "x"}).code == 2);
  CHECK(cli({"invariants", scene("plane.json"), "nocurve"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"invariants", scene("plane.json"), "line", "--format", "xml"}).code == 2);
  CHECK(cli({}).code == 2);

  for (const char* f : {"unknown.json", "noversion.json", "badref.json", "badexpr.json"})
    fs::remove(fs::temp_directory_path() / (std::string("elastica_cli_test_") + f));
}

TEST_CASE("catalog and output files") {
  const Run c = cli({"catalog", "--format", "json"});
  CHECK(c.code == 0);
  const auto j = nlohmann::json::parse(c.out);
  CHECK(j.size() == 6);

  const fs::path out = fs::temp_directory_path() / "elastica_cli_test_out.csv";
  const Run w = cli({"invariants", scene("desitter.json"), "equator", "--grid", "3", "--out",
                     out.string()});
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == cli({"invariants", scene("desitter.json"), "equator", "--grid", "3"}).out);
  fs::remove(out);
}

TEST_CASE("minimize reports and logs") {
  const fs::path log = fs::temp_directory_path() / "elastica_cli_test_log.csv";
  const Run r = cli({"minimize", scene("plane.json"), "perturbed_line", "--log", log.string()});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "converged");
  CHECK(j["check"]["verdict"] == "Extremal");
  std::ifstream in(log);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("iteration") != std::string::npos);
  fs::remove(log);
}
