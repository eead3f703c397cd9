#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntlab/runner.hpp"
#include "test_util.hpp"

using namespace ntlab;
namespace fs = std::filesystem;

TEST_SUITE("cli") {

namespace {

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "ntlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<fs::path> files_with_suffix(const fs::path& dir, const std::string& suffix) {
  std::vector<fs::path> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
      out.push_back(e.path());
  }
  return out;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("moment report carries the documented fields") {
  const auto dir = testing::scratch_dir("moment");
  const auto r = run({"--cache-dir", (dir / "cache").string(), "--output", (dir / "out").string(), "moment", "--kind",
                      "delta", "--T", "1000", "--U", "5"});
  REQUIRE(r.status == 0);
  const auto jsonl = files_with_suffix(dir / "out", "_moment.jsonl");
  REQUIRE(jsonl.size() == 1);
  CHECK(jsonl[0].filename().string().size() == std::string("0123456789abcdef_moment.jsonl").size());
  const auto rows = lines(jsonl[0]);
  REQUIRE(rows.size() == 1);
  const auto j = nlohmann::ordered_json::parse(rows[0]);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"kind", "T", "U", "k", "moment", "main_term", "ratio", "coeffs", "seed",
                                         "runtime_s"});
  CHECK(j["ratio"].is_number());
  CHECK(j["runtime_s"].is_null());
  const auto csv = lines(files_with_suffix(dir / "out", "_moment.csv").at(0));
  CHECK(csv.at(0) == "kind,T,U,k,moment,main_term,ratio,coeffs,seed,runtime_s");
}

TEST_CASE("same configuration and seed give identical ledger rows") {
  const auto dir = testing::scratch_dir("determinism");
  const std::vector<std::string> tail{"voronoi-check", "--kind", "delta", "--N", "10", "--N", "100",
                                      "--samples", "200", "--lo", "1000", "--hi", "2000"};
  auto args = [&](const std::string& out) {
    std::vector<std::string> a{"--seed", "77", "--cache-dir", (dir / "cache").string(), "--output", out};
    a.insert(a.end(), tail.begin(), tail.end());
    return a;
  };
  REQUIRE(run(args((dir / "a").string())).status == 0);
  REQUIRE(run(args((dir / "b").string())).status == 0);
  REQUIRE(run(args((dir / "b").string())).status == 0);
  const auto a = lines(files_with_suffix(dir / "a", ".csv").at(0));
  const auto b = lines(files_with_suffix(dir / "b", ".csv").at(0));
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 5);
  CHECK(a[1] == b[1]);
  CHECK(a[2] == b[2]);
  CHECK(b[1] == b[3]);
  CHECK(b[2] == b[4]);
  CHECK(files_with_suffix(dir / "a", ".csv")[0].filename() == files_with_suffix(dir / "b", ".csv")[0].filename());

  // a different seed is a different run
  auto other = args((dir / "c").string());
  other[1] = "78";
  REQUIRE(run(other).status == 0);
  CHECK(files_with_suffix(dir / "c", ".csv")[0].filename() != files_with_suffix(dir / "a", ".csv")[0].filename());
}

TEST_CASE("quadruples command reports 780") {
  const auto dir = testing::scratch_dir("quadruples");
  const auto r = run({"--output", dir.string(), "quadruples", "--N", "20", "--k", "2", "--delta", "0",
                      "--brute-force-check"});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("\"count\":780") != std::string::npos);
  const auto csv = lines(files_with_suffix(dir, "_quadruples.csv").at(0));
  CHECK(csv.at(0) == "N,k,delta,count,bound_scale");
  CHECK(csv.at(1) == "20,2,0,780,400");
}

TEST_CASE("exit statuses and error records") {
  const auto dir = testing::scratch_dir("errors");
  CHECK(run({"--output", dir.string(), "quadruples", "--N", "200"}).status == kExitResource);
  CHECK(run({"--output", dir.string(), "moment", "--kind", "delta", "--T", "0", "--U", "5"}).status == kExitConfig);
  CHECK(run({"--output", dir.string(), "no-such-command"}).status == kExitConfig);
  CHECK(run({"--output", dir.string(), "moment", "--kind", "zeta", "--T", "10", "--U", "1"}).status == kExitConfig);
  CHECK(run({"--output", dir.string(), "quadruples"}).status == kExitConfig);
  CHECK(run({"--help"}).status == kExitOk);
  const auto r = run({"--output", dir.string(), "moment", "--kind", "delta", "--T", "1000.5", "--U", "5"});
  CHECK(r.status == kExitConfig);
  CHECK(r.err.find("invalid-argument") != std::string::npos);
  const auto jsonl = files_with_suffix(dir, "_moment.jsonl");
  REQUIRE_FALSE(jsonl.empty());
  bool found = false;
  for (const auto& p : jsonl)
    for (const auto& l : lines(p)) {
      const auto j = nlohmann::json::parse(l);
      if (j.contains("error")) {
        found = true;
        CHECK(j["exit_status"] == kExitConfig);
      }
    }
  CHECK(found);
  CHECK(exit_status_for(ErrorKind::AssertionFailed) == kExitAssertion);
  CHECK(exit_status_for(ErrorKind::ResourceLimit) == kExitResource);
}

TEST_CASE("configuration file with command-line override") {
  const auto dir = testing::scratch_dir("config");
  const auto cfg = dir / "run.toml";
  {
    std::ofstream f(cfg);
    f << "seed = 5\n[quadruples]\nN = 30\nk = 2\n";
  }
  const auto a = run({"--config", cfg.string(), "--output", (dir / "a").string(), "quadruples"});
  REQUIRE(a.status == 0);
  CHECK(a.out.find("\"N\":30") != std::string::npos);
  const auto b = run({"--config", cfg.string(), "--output", (dir / "b").string(), "quadruples", "--N", "20"});
  REQUIRE(b.status == 0);
  CHECK(b.out.find("\"count\":780") != std::string::npos);
}

TEST_CASE("cache directory from the environment") {
  const auto dir = testing::scratch_dir("envcache");
  ::setenv("NTLAB_CACHE_DIR", (dir / "cache").string().c_str(), 1);
  const auto r = run({"--output", (dir / "out").string(), "sieve", "--kind", "r", "--limit", "5000"});
  ::unsetenv("NTLAB_CACHE_DIR");
  REQUIRE(r.status == 0);
  CHECK(fs::exists(dir / "cache" / "arith_r_5000_v1.ntmc"));
  const auto again = run({"--cache-dir", (dir / "cache").string(), "--output", (dir / "out").string(), "sieve",
                          "--kind", "r", "--limit", "5000"});
  CHECK(again.out.find("\"from_cache\":true") != std::string::npos);
}

TEST_CASE("other subcommands run end to end") {
  const auto dir = testing::scratch_dir("commands");
  const std::string cache = (dir / "cache").string(), out = (dir / "out").string();
  auto ok = [&](std::vector<std::string> a) {
    a.insert(a.begin(), {"--cache-dir", cache, "--output", out});
    const auto r = run(a);
    CAPTURE(r.err);
    CHECK(r.status == 0);
    return r;
  };
  ok({"delta", "--kind", "delta-star", "--x", "2.5", "--x", "1000"});
  ok({"delta", "--kind", "cusp", "--x", "3"});
  ok({"e-curve", "--t-min", "100", "--t-max", "150"});
  ok({"moment", "--kind", "e", "--T", "200", "--U", "3"});
  ok({"moment", "--kind", "circle", "--T", "1000", "--U", "2", "--U", "4", "--U", "8"});
  ok({"moment", "--kind", "cusp", "--T", "500", "--U", "2"});
  ok({"moment", "--kind", "delta", "--T", "10000", "--U", "12", "--k", "4"});
  ok({"moment", "--kind", "delta", "--T", "10000", "--U", "12", "--omega-samples", "1000"});
  ok({"moment", "--kind", "delta", "--T", "100000", "--U", "18", "--U", "24", "--U", "32", "--U", "42", "--U", "56",
      "--U", "75"});
  ok({"jutila", "--T", "10000", "--U", "10"});
  ok({"large-values", "--T", "1000", "--V", "3"});
  const auto f = ok({"fit-summatory", "--kind", "d", "--lo", "1000", "--hi", "100000"});
  CHECK(f.out.find("leading_coeff") != std::string::npos);
}

}
