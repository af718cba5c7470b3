#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pnforms/cli.hpp"

using namespace pnforms::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_args(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pnforms_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("range parsing") {
  CHECK(parse_range("-4..4", "--d").values().size() == 9);
  CHECK(parse_range("3", "--n").values() == std::vector<int>{3});
  CHECK(parse_range("all", "--p", true).all);
  CHECK_THROWS_AS(parse_range("all", "--d"), UsageError);
  CHECK_THROWS_AS(parse_range("4..3", "--d"), UsageError);
  CHECK_THROWS_AS(parse_range("x", "--d"), UsageError);
  CHECK_THROWS_AS(parse_range("1..", "--d"), UsageError);
}

TEST_CASE("bott table") {
  const auto r = run_args({"bott", "--n", "2", "--p", "0..2", "--d", "-4..4"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string title, header, line;
  std::getline(lines, title);
  std::getline(lines, header);
  std::istringstream hs(header);
  std::vector<std::string> cols;
  for (std::string w; hs >> w;) cols.push_back(w);
  REQUIRE(cols.size() == 11);
  CHECK(std::count_if(cols.begin(), cols.end(), [](const std::string& c) { return c.rfind("d=", 0) == 0; }) == 9);
  bool found = false;
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    std::vector<std::string> cells;
    for (std::string w; ls >> w;) cells.push_back(w);
    if (cells[0] == "1" && cells[1] == "0") {
      CHECK(cells[2 + 6] == "3");  // d = 2
      found = true;
    }
  }
  CHECK(found);

  const auto csv = run_args({"bott", "--n", "2", "--p", "all", "--d", "0..1", "--format", "csv"});
  CHECK(csv.out == run_args({"bott", "--n", "2", "--p", "all", "--d", "0..1", "--format", "csv"}).out);
  CHECK(csv.out.rfind("n,p,d,i,dim\n", 0) == 0);
  const auto js = nlohmann::json::parse(run_args({"bott", "--n", "2", "--p", "1", "--d", "2", "--format", "json"}).out);
  CHECK(js[0]["dims"] == nlohmann::json::array({3, 0, 0}));
}

TEST_CASE("bott usage errors") {
  CHECK(run_args({"bott", "--n", "2", "--p", "5", "--d", "0"}).code == 1);
  CHECK(run_args({"bott", "--n", "2", "--p", "0", "--d", "3..1"}).code == 1);
  CHECK(run_args({"bott", "--n", "2"}).code == 1);
  CHECK(run_args({}).code == 1);
  CHECK(run_args({"frobnicate"}).code == 1);
}

TEST_CASE("h0 listing") {
  const auto r = run_args({"h0", "--n", "1", "--p", "1", "--d", "2", "--field", "rational"});
  CHECK(r.code == 0);
  CHECK(r.out == "h0(Omega^1_P1(2)) = 1 over QQ\n  [0] -x1 dx0 + x0 dx1\n");
  const auto j = nlohmann::json::parse(run_args({"h0", "--n", "2", "--p", "1", "--d", "2", "--format", "json"}).out);
  CHECK(j["dim"] == 3);
  CHECK(j["key"].size() == 9);
  CHECK(j["basis"].size() == 9);
  CHECK(run_args({"h0", "--n", "2", "--p", "1", "--d", "2", "--q", "100"}).code == 1);
}

TEST_CASE("verify-display") {
  const auto r = run_args({"verify-display", "--n", "2..3", "--p", "all", "--t", "0..1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("10 displays checked, 0 failed") != std::string::npos);
  CHECK(run_args({"verify-display", "--n", "1", "--p", "0"}).code == 0);
  const auto bad = run_args({"verify-display", "--n", "2", "--p", "0", "--t", "1", "--inject-fault", "bottom-right"});
  CHECK(bad.code != 0);
  CHECK(bad.err.find("square bottom-right does not commute") != std::string::npos);
  CHECK(run_args({"verify-display", "--n", "2", "--p", "2"}).code == 1);
  const auto csv = run_args({"verify-display", "--n", "2", "--p", "0", "--format", "csv"});
  CHECK(csv.out.find("2,0,0,0,2,3,1,2,3,exact-at-sections") != std::string::npos);
}

TEST_CASE("maxrank certificates round trip") {
  const std::string a = temp_path("a.json"), b = temp_path("b.json");
  const std::vector<std::string> args = {"maxrank", "--n", "2", "--p", "0", "--d", "2", "--s", "4",
                                         "--q", "101", "--trials", "5", "--seed", "1"};
  auto with_out = [&](const std::string& path) {
    auto v = args;
    v.push_back("--out");
    v.push_back(path);
    return run_args(v);
  };
  const auto r = with_out(a);
  CHECK(r.code == 0);
  CHECK(r.out.find("shape 8x8 rank 8 maximal") != std::string::npos);
  CHECK(with_out(b).code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto v = run_args({"maxrank", "--verify", a});
  CHECK(v.code == 0);
  CHECK(v.out.find("replays: rank 8, maximal") != std::string::npos);

  auto j = nlohmann::json::parse(slurp(a));
  j["rank"] = 7;
  std::ofstream(b) << j.dump();
  const auto tampered = run_args({"maxrank", "--verify", b});
  CHECK(tampered.code == 1);
  CHECK(tampered.err.find("rank 8 differs from the recorded 7") != std::string::npos);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("maxrank edge cases") {
  CHECK(run_args({"maxrank", "--n", "2", "--p", "0", "--d", "2", "--s", "0"}).code == 0);
  const auto small = run_args({"maxrank", "--n", "1", "--p", "0", "--d", "2", "--s", "200"});
  CHECK(small.code == 1);
  CHECK(small.err.find("field too small") != std::string::npos);
  CHECK(run_args({"maxrank", "--n", "2", "--p", "2", "--d", "2", "--s", "1"}).code == 1);
  const auto j = nlohmann::json::parse(
      run_args({"maxrank", "--n", "2", "--p", "1", "--d", "1", "--s", "2", "--format", "json"}).out);
  CHECK(j["shape"] == nlohmann::json::array({2, 1}));
}

TEST_CASE("horace") {
  const auto r = run_args({"horace", "--n", "2", "--p", "0", "--d", "2", "--s", "4", "--base", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("✓ root n=2 p=0 d=2 s=4") == 0);
  CHECK(r.out.find("0 implication failures") != std::string::npos);
  CHECK(run_args({"horace", "--n", "2", "--p", "0", "--d", "0", "--s", "4", "--base", "1"}).code == 1);
  const auto leaf = run_args({"horace", "--n", "2", "--p", "0", "--d", "2", "--s", "0", "--base", "1", "--format", "json"});
  CHECK(leaf.code == 0);
  const auto j = nlohmann::json::parse(leaf.out);
  CHECK(j["summary"]["nodes"] == 1);
  CHECK(j["tree"]["role"] == "leaf-base-case");
}
