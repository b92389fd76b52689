#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "holoscreen/text_format.hpp"
#include "runner.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = holo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "holoscreen_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help and argument errors") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"run", "--help"}).code == 0);
    CHECK(run({}).code == 1);
    CHECK(run({"run", "cycle", "--bogus"}).code == 1);
    CHECK(run({"run", "cycle", "--repeat", "0"}).code == 1);
    const auto unknown = run({"run", "teleport"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("unknown kind") != std::string::npos);
  }

  TEST_CASE("options must apply to the kind") {
    const auto r = run({"run", "cycle", "--shared", "2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("does not apply") != std::string::npos);
    CHECK(run({"run", "cycle", "--n", "x"}).code == 1);
  }

  TEST_CASE("cycle csv carries the provenance header and LF endings") {
    const auto r = run({"run", "cycle", "--n", "3", "--cycles", "2", "--seed", "9"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# holoscreen 0.1.0 kind=cycle config_digest=", 0) == 0);
    CHECK(r.out.find("seed=9\n") != std::string::npos);
    CHECK(r.out.find('\r') == std::string::npos);
    std::size_t lines = 0;
    for (char c : r.out) lines += c == '\n';
    CHECK(lines == 2 + 2 * 4 * 3);
  }

  TEST_CASE("runs are deterministic under a seed") {
    for (const char* kind : {"cycle", "entangle", "contextuality", "scatter", "clone"}) {
      std::vector<std::string> args{"run", kind, "--seed", "4"};
      if (std::string(kind) == "contextuality") args.insert(args.end(), {"--prbox", "0.9"});
      const auto a = run(args), b = run(args);
      REQUIRE(a.code == 0);
      CHECK(a.out == b.out);
      args[3] = "5";
      if (std::string(kind) != "contextuality" && std::string(kind) != "scatter") CHECK(run(args).out != a.out);
    }
  }

  TEST_CASE("json artifacts start with the meta block") {
    const auto r = run({"run", "contextuality", "--prbox", "1"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::ordered_json::parse(r.out);
    CHECK(j.begin().key() == "meta");
    CHECK(j["meta"]["tool"] == "holoscreen");
    CHECK(j["meta"]["config_digest"].get<std::string>().size() == 16);
    CHECK(j["verdict"] == "CONTEXTUAL");
    CHECK(j["core"]["built"] == false);
  }

  TEST_CASE("config settings win over flags with a warning") {
    const auto cfg = scratch("entangle.cfg");
    holo::io::write_file(cfg.string(), "kind = entangle\nshared = 2\ncycles = 3\nseed = 11\n");
    const auto r = run({"run", "cycle", "--config", cfg.string(), "--shared", "1", "--seed", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("warning: config file sets kind") != std::string::npos);
    CHECK(r.err.find("warning: config file sets seed") != std::string::npos);
    CHECK(r.err.find("warning: config file sets shared") != std::string::npos);
    CHECK(r.out.find("kind=entangle") != std::string::npos);
    CHECK(r.out.find("seed=11") != std::string::npos);
    std::istringstream rows(r.out);
    std::string last, line;
    while (std::getline(rows, line)) last = line;
    REQUIRE(last.rfind("3,", 0) == 0);
    CHECK(std::stod(last.substr(2)) == doctest::Approx(2.0));

    holo::io::write_file(cfg.string(), "kind = entangle\nnode = X\n");
    CHECK(run({"run", "--config", cfg.string()}).code == 1);
    holo::io::write_file(cfg.string(), "classifier c\ntokens a\n");
    CHECK(run({"run", "entangle", "--config", cfg.string()}).code == 1);
  }

  TEST_CASE("blanket reads its DAG from a file") {
    const auto dag = scratch("chain.dag");
    holo::io::write_file(dag.string(), "dag\nnodes A X C\nedge A X\nedge X C\ncpt X 0.9 0.1 ; 0.2 0.8\ncpt C 0.7 0.3 ; 0.1 0.9\nend\n");
    const auto ok = run({"run", "blanket", "--input", dag.string(), "--node", "X"});
    REQUIRE(ok.code == 0);
    CHECK(nlohmann::json::parse(ok.out)["reports"][0]["shielded"] == true);
    const auto leak = run({"run", "blanket", "--input", dag.string(), "--node", "X", "--blanket", "A"});
    REQUIRE(leak.code == 0);
    CHECK(nlohmann::json::parse(leak.out)["reports"][0]["shielded"] == false);
    CHECK(run({"run", "blanket", "--input", dag.string(), "--node", "Q"}).code == 1);
    CHECK(run({"run", "blanket", "--input", scratch("missing.dag").string()}).code != 0);
  }

  TEST_CASE("repeat writes one artifact per seed") {
    const auto out = scratch("rep.csv");
    const auto r = run({"run", "entangle", "--repeat", "3", "--jobs", "2", "--seed", "20", "-o", out.string()});
    REQUIRE(r.code == 0);
    for (int s = 20; s < 23; ++s) {
      const auto p = scratch("rep.seed" + std::to_string(s) + ".csv");
      REQUIRE(fs::exists(p));
      CHECK(holo::io::read_file(p.string()).find("seed=" + std::to_string(s) + "\n") != std::string::npos);
    }
    const auto single = run({"run", "entangle", "--seed", "21"});
    CHECK(holo::io::read_file(scratch("rep.seed21.csv").string()) == single.out);
  }

  TEST_CASE("exit codes for failed preconditions") {
    CHECK(run({"run", "entangle", "--shared", "5"}).code == 1);
    CHECK(run({"run", "scatter", "--n", "11"}).code == 1);
    CHECK(run({"run", "cycle", "--n", "2", "--alpha", "0.9,0.3"}).code == 1);
    CHECK(run({"run", "cycle", "--n", "5", "--area", "16"}).code == 2);
  }
}
