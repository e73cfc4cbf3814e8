#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mubpp/cli.hpp"
#include "mubpp/mub.hpp"

using namespace mubpp;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mubpp");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mubpp_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("gen-mub") {
  const Result three = run({"gen-mub", "--n", "3"});
  CHECK(three.code == 0);
  const auto j = nlohmann::json::parse(three.out);
  CHECK(j["dim"] == 3);
  CHECK(j["bases"].size() == 4);

  const Result six = run({"gen-mub", "--n", "6"});
  CHECK(six.code == 2);
  CHECK(six.err.find("unsupported dimension") != std::string::npos);

  const auto path = temp_file("n9.json");
  CHECK(run({"gen-mub", "--n", "9", "--out", path.string()}).code == 0);
  std::ifstream in(path);
  const MubSet set = mub_from_json(nlohmann::json::parse(in));
  CHECK(set.size() == 10);
  CHECK(verify_mub(set, 1e-10).pass);
  CHECK(run({"verify", path.string()}).code == 0);
}

TEST_CASE("verify") {
  const auto path = temp_file("n5.json");
  REQUIRE(run({"gen-mub", "--n", "5", "--out", path.string()}).code == 0);
  const Result ok = run({"verify", path.string(), "--tol", "1e-10"});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("PASS", 0) == 0);

  // Deviations of a valid file sit at a few ulps, so a sub-ulp tolerance fails.
  const Result strict = run({"verify", path.string(), "--tol", "1e-16", "--format", "json"});
  const auto report = nlohmann::json::parse(strict.out);
  CHECK(report["max_deviation"].get<double>() < 1e-12);
  CHECK(strict.code == (report["max_deviation"].get<double>() <= 1e-16 ? 0 : 1));

  std::ifstream in(path);
  auto j = nlohmann::json::parse(in);
  j["bases"][2][7] = {0.9, 0.1};
  const auto corrupt = temp_file("corrupt.json");
  std::ofstream(corrupt) << j.dump();
  const Result bad = run({"verify", corrupt.string()});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("max_deviation=") != std::string::npos);

  const auto garbage = temp_file("garbage.json");
  std::ofstream(garbage) << "{not json";
  CHECK(run({"verify", garbage.string()}).code == 2);
  CHECK(run({"verify", temp_file("missing.json").string()}).code == 2);
  std::ofstream(garbage) << R"({"dim": 2, "bases": [[1, 2]]})";
  CHECK(run({"verify", garbage.string()}).code == 2);
}

TEST_CASE("bounds-table") {
  const Result r = run({"bounds-table", "--n-list", "3,5,7,11,13"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "N,bases,subset,d_exact,thm1,thm2,eq13,thm3,corollary,two_basis,sigma1_sq");
  CHECK(rows[1].rfind("3,4,all,", 0) == 0);

  const Result nc = run({"bounds-table", "--n-list", "5", "--bases", "no-computational", "--format", "json"});
  CHECK(nc.code == 0);
  const auto j = nlohmann::json::parse(nc.out);
  CHECK(j[0]["corollary"].get<double>() == doctest::Approx(0.4));
  CHECK(j[0]["d_exact"].get<double>() <= 0.4 + 1e-9);

  const Result mixed = run({"bounds-table", "--n-list", "3,6"});
  CHECK(mixed.code == 1);
  CHECK(lines(mixed.out).size() == 3);
  CHECK(lines(mixed.out)[2].rfind("6,0,all,error", 0) == 0);

  CHECK(run({"bounds-table"}).code == 2);
  CHECK(run({"bounds-table", "--n-list", "3", "--format", "xml"}).code == 2);
  CHECK(run({"bounds-table", "--n-list", "3", "--bases", "0,9"}).code == 1);
}

TEST_CASE("fig1 is reproducible byte for byte") {
  const Result a = run({"fig1"});
  const Result b = run({"fig1"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == cli::default_fig1_dims().size() + 1);
  CHECK(a.out == run({"bounds-table", "--n-list", "3,5,7,9,11,13"}).out);
}

TEST_CASE("simulate") {
  const Result honest = run({"simulate", "--n", "3", "--cycles", "10000", "--seed", "8"});
  CHECK(honest.code == 0);
  const auto h = nlohmann::json::parse(honest.out);
  CHECK(h["detections"] == 0);
  CHECK(h["decoded_ok"].get<std::uint64_t>() ==
        h["cycles"].get<std::uint64_t>() - h["control_rounds"].get<std::uint64_t>());

  const auto cfg_path = temp_file("session.json");
  std::ofstream(cfg_path) << R"({"N": 3, "cycles": 100000, "control_fraction": 1.0, "bases": [0, 1, 2, 3],
                                 "weights": [0.25, 0.25, 0.25, 0.25], "attack": "optimal", "seed": 21})";
  const Result attacked = run({"simulate", "--config", cfg_path.string()});
  CHECK(attacked.code == 0);
  const auto a = nlohmann::json::parse(attacked.out);
  const double d = a["analytic_nondetection"].get<double>();
  const double sigma = std::sqrt(d * (1.0 - d) / 100000.0);
  CHECK(std::abs(a["empirical_nondetection"].get<double>() - d) <= 3.0 * sigma);

  CHECK(run({"simulate", "--config", cfg_path.string()}).out == attacked.out);
  const Result csv = run({"simulate", "--config", cfg_path.string(), "--format", "csv", "--cycles", "50"});
  CHECK(lines(csv.out).size() == 2);
  CHECK(lines(csv.out)[1].rfind("50,50,", 0) == 0);

  CHECK(run({"simulate", "--n", "3", "--control-fraction", "1.5"}).code == 2);
  CHECK(run({"simulate", "--n", "6"}).code == 2);
  CHECK(run({"simulate"}).code == 2);
  CHECK(run({"simulate", "--n", "3", "--attack", "optimal", "--weights", "0.7,0.1,0.1,0.1"}).code == 2);
  std::ofstream(cfg_path) << R"({"N": 3})";
  CHECK(run({"simulate", "--config", cfg_path.string()}).code == 2);
}

TEST_CASE("seed falls back to MUBPP_SEED") {
  ::setenv("MUBPP_SEED", "99", 1);
  const Result env = run({"simulate", "--n", "3", "--cycles", "200"});
  ::unsetenv("MUBPP_SEED");
  const Result flag = run({"simulate", "--n", "3", "--cycles", "200", "--seed", "99"});
  CHECK(env.code == 0);
  CHECK(env.out == flag.out);

  ::setenv("MUBPP_SEED", "not-a-number", 1);
  CHECK(run({"simulate", "--n", "3", "--cycles", "200"}).code == 2);
  ::unsetenv("MUBPP_SEED");
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"gen-mub"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
