#include "catch_amalgamated.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace chur::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "chur");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("chur_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_config(const fs::path &dir, const std::string &name, const std::string &body) {
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p.string();
}

std::string slurp(const fs::path &p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("figure1 with defaults") {
  const auto r = invoke({"figure1"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("verdict: holds") != std::string::npos);
  CHECK(r.out.find("points: 50") != std::string::npos);
  CHECK(r.out.rfind("version: chur 0.1.0", 0) == 0);
}

TEST_CASE("figure1 edge cases") {
  const auto dir = scratch("figure1");
  SECTION("empty a list") {
    const auto cfg = write_config(dir, "empty.json", R"({"figure1": {"a_values": []}})");
    const auto r = invoke({"figure1", "--config", cfg, "--out", (dir / "o").string()});
    CHECK(r.code == exit_ok);
    const std::string csv = slurp(dir / "o" / "figure1.csv");
    CHECK(csv.find("gamma, bound, gaussian_lambda, closed_form\n") != std::string::npos);
    CHECK(csv.back() == '\n');
    CHECK(csv.substr(csv.find("closed_form\n") + 12).empty());
  }
  SECTION("a = 0 gives Lambda = B = 2") {
    const auto cfg = write_config(dir, "zero.json", R"({"figure1": {"a_values": [0]}})");
    const auto r = invoke({"figure1", "--config", cfg, "--out", (dir / "z").string()});
    CHECK(r.code == exit_ok);
    const std::string csv = slurp(dir / "z" / "figure1.csv");
    std::istringstream row(csv.substr(csv.find("closed_form\n") + 12));
    double a = -1, b = 0, lam = 0, closed = 0;
    char sep;
    row >> a >> sep >> b >> sep >> lam >> sep >> closed;
    CHECK(a == 0.0);
    CHECK(b == 2.0);
    CHECK(std::abs(lam - 2.0) <= 1e-12);
    CHECK(closed == 2.0);
  }
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(invoke({"figure1", "--self-test"}).code == exit_violation);
  CHECK(invoke({"nonsense"}).code == exit_config);
  CHECK(invoke({}).code == exit_config);
  CHECK(invoke({"figure1", "--config", (dir / "missing.json").string()}).code == exit_config);

  const auto bad = write_config(dir, "bad.json", R"({"figure1": {"a_cout": 5}})");
  const auto r = invoke({"figure1", "--config", bad});
  CHECK(r.code == exit_config);
  CHECK(r.err.find("unknown configuration key 'figure1.a_cout'") != std::string::npos);

  const auto typed = write_config(dir, "typed.json", R"({"grid": {"n_points": "many"}})");
  const auto t = invoke({"figure1", "--config", typed});
  CHECK(t.code == exit_config);
  CHECK(t.err.find("'grid.n_points' must be a number") != std::string::npos);

  const auto broken = write_config(dir, "broken.json", "{\"figure1\": ");
  CHECK(invoke({"figure1", "--config", broken}).code == exit_config);

  const auto nofile = write_config(dir, "nofile.json",
                                   R"({"sweep": {"state": {"kind": "file", "path": "/nonexistent"}}})");
  CHECK(invoke({"sweep", "--config", nofile}).code == exit_config);

  const auto notable = write_config(dir, "notable.json",
                                    R"({"mask": {"kind": "tabulated", "path": "/nonexistent"}})");
  CHECK(invoke({"mask", "--config", notable}).code == exit_config);

  CHECK(invoke({"figure1", "--grid-n", "1"}).code == exit_config);
  CHECK(invoke({"--version"}).code == exit_ok);
}

TEST_CASE("outputs are reproducible") {
  const auto dir = scratch("repro");
  const auto cfg = write_config(dir, "v.json",
                                R"({"verify": {"n_states": 6, "lambda_count": 5, "autocorr_states": 2}})");
  const auto out = (dir / "o").string();
  const auto a = invoke({"verify", "--config", cfg, "--out", out, "--workers", "1"});
  REQUIRE(a.code == exit_ok);
  const std::string csv1 = slurp(dir / "o" / "verify.csv");
  const std::string sum1 = slurp(dir / "o" / "verify_summary.txt");
  const auto b = invoke({"verify", "--config", cfg, "--out", out, "--workers", "3"});
  REQUIRE(b.code == exit_ok);
  CHECK(slurp(dir / "o" / "verify.csv") == csv1);
  CHECK(slurp(dir / "o" / "verify_summary.txt") == sum1);
  CHECK(a.out == sum1);
  CHECK(csv1.rfind("# chur 0.1.0 verify ", 0) == 0);
}

TEST_CASE("default config from the environment") {
  const auto dir = scratch("env");
  const auto cfg = write_config(dir, "env.json", R"({"figure1": {"a_values": [1.0, 2.0]}})");
  ::setenv("CHUR_DEFAULT_CONFIG", cfg.c_str(), 1);
  const auto r = invoke({"figure1"});
  ::unsetenv("CHUR_DEFAULT_CONFIG");
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("points: 2\n") != std::string::npos);
}

TEST_CASE("each command on a small configuration") {
  const auto dir = scratch("commands");
  const std::string small_grid = R"("grid": {"n_points": 2048, "length": 40.0})";
  struct Case {
    std::string command;
    std::string body;
  };
  const std::vector<Case> cases{
      {"verify", R"({"verify": {"n_states": 4, "lambda_count": 5, "autocorr_states": 1}})"},
      {"figure1", R"({"figure1": {"a_count": 5}})"},
      {"sweep", R"({"sweep": {"state": {"kind": "random", "seed": 3}, "lambda_count": 11}})"},
      {"sweep", R"({"sweep": {"representation": "momentum", "lambda_count": 11}})"},
      {"mask", R"({"mask": {"kind": "top_hat", "y_min": -3, "y_max": 3, "y_count": 7}})"},
      {"mask", R"({"mask": {"kind": "gaussian", "sigma": 0.5}})"},
      {"mask", R"({"mask": {"kind": "periodic", "period": 1.5}})"},
      {"qubit", R"({"qubit": {"lambda_count": 5}})"},
      {"qubit", R"({"qubit": {"lambda_count": 5, "shots": 10000}})"},
      {"finite-dim", R"({"finite_dim": {"dimensions": [2, 3], "samples": 500}})"},
      {"lqc", R"({"lqc": {"lambda_b": [0.5, 1.0]}})"},
      {"tightness", R"({"tightness": {"gammas": [1.0], "max_evaluations": 200}})"},
  };
  int i = 0;
  for (const auto &c : cases) {
    std::string body = c.body;
    body.insert(1, small_grid + ", ");
    const auto cfg = write_config(dir, "c" + std::to_string(i++) + ".json", body);
    const auto r = invoke({c.command, "--config", cfg});
    INFO(c.command << " " << body << "\n" << r.err);
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("verdict: holds") != std::string::npos);
  }

  SECTION("self-test flips the verdict") {
    const auto cfg = write_config(dir, "st.json",
                                  R"({"finite_dim": {"dimensions": [2], "samples": 200}})");
    CHECK(invoke({"finite-dim", "--config", cfg, "--self-test"}).code == exit_violation);
    const auto lq = write_config(dir, "lq.json", R"({"lqc": {"lambda_b": [1.0]}})");
    CHECK(invoke({"lqc", "--config", lq, "--self-test"}).code == exit_violation);
  }
  SECTION("unknown enumerations are configuration errors") {
    const auto cfg = write_config(dir, "fam.json", R"({"tightness": {"family": "square"}})");
    CHECK(invoke({"tightness", "--config", cfg}).code == exit_config);
    const auto rep = write_config(dir, "rep.json", R"({"sweep": {"representation": "energy"}})");
    CHECK(invoke({"sweep", "--config", rep}).code == exit_config);
  }
}

TEST_CASE("shipped configurations match the schema") {
  const fs::path dir = CHUR_CONFIG_DIR;
  std::size_t seen = 0;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json")
      continue;
    std::ifstream is(entry.path());
    json cfg = default_config();
    INFO(entry.path().string());
    CHECK_NOTHROW(merge_config(cfg, json::parse(is, nullptr, true, true), ""));
    ++seen;
  }
  CHECK(seen > 0);
}
