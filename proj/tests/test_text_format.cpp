#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "corpus.hpp"
#include "holoscreen/text_format.hpp"

using namespace holo;
using namespace holo::io;

namespace {

constexpr const char* kDocument = R"(# two bits and a copy map
seed = 7
label = two words

classifier a
tokens 0 1
types q
row 0 : 0
row 1 : 1
end

classifier b
tokens u v
types y w
weight w
row u : 0 0.25
row v : 1 0.75
end

infomorphism copy a b
fwd q = y
bwd u = 0 v = 1
end

dag
nodes X Y Z
edge X Y
edge Y Z
cpt X 0.3 0.7
cpt Y 0.9 0.1 ; 0.2 0.8
end

contexts
names s t u
context s t = 0.5 0 0 0.5
context x1 = 0.5 0.5
context 0 u = 0.25 0.25 0.25 0.25
end
)";

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_SUITE("text_format") {
  TEST_CASE("document parses") {
    const auto d = parse_document(kDocument);
    REQUIRE(d.classifiers.size() == 2);
    CHECK(d.classifier("b")->weight_type() == std::size_t{1});
    CHECK((*d.classifier("b"))(1, 1) == 0.75);
    const auto& f = d.infomorphism("copy");
    CHECK(f.fwd == std::vector<std::size_t>{0});
    CHECK(f.bwd == std::vector<std::size_t>{0, 1});
    REQUIRE(d.dags.size() == 1);
    CHECK(d.dags[0].parents(2) == std::vector<std::size_t>{1});
    CHECK(d.dags[0].cpt(1)[1][1] == 0.8);
    REQUIRE(d.families.size() == 1);
    CHECK(d.families[0].ground == 3);
    CHECK(d.families[0].contexts[1].vars == std::vector<std::size_t>{1});
    CHECK(d.families[0].contexts[2].vars == std::vector<std::size_t>{0, 2});
    CHECK(d.settings_map().at("label") == "two words");
    CHECK(d.settings_map().at("seed") == "7");
    CHECK_THROWS_AS(d.classifier("zzz"), ValidationError);
  }

  TEST_CASE("CRLF and tabs are accepted") {
    std::string text = "classifier c\r\ntokens\ta\r\ntypes x\r\nrow a : 1\r\nend\r\n";
    CHECK(parse_document(text).classifiers.size() == 1);
  }

  TEST_CASE("parse errors carry line numbers") {
    CHECK(parse_error_line("classifier c\ntokens a\ntypes x\nrow a : nope\nend\n") == 4);
    CHECK(parse_error_line("classifier c\ntokens a b\ntypes x\nrow a : 1\nend\n") == 1);
    CHECK(parse_error_line("\n\nbogus line\n") == 3);
    CHECK(parse_error_line("classifier c\ntokens a\ntypes x\nrow a : 1\n") > 0);
    CHECK(parse_error_line("classifier c\ntokens a\ntypes x\nrow a : 1.5\nend\n") == 1);
    CHECK(parse_error_line("dag\nnodes A B\nedge A C\nend\n") == 3);
    CHECK(parse_error_line("contexts\nground 2\ncontext x0 = 0.5\nend\n") > 0);
  }

  TEST_CASE("numbers round-trip through their shortest form") {
    CounterRng rng(1);
    for (int t = 0; t < 1000; ++t) {
      const double x = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
      CHECK(std::stod(format_number(x)) == x);
    }
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(1.0) == "1");
  }

  TEST_CASE("classifiers and maps round-trip") {
    const auto d = parse_document(kDocument);
    for (const auto& c : d.classifiers) {
      const auto back = parse_document(to_text(*c));
      REQUIRE(back.classifiers.size() == 1);
      CHECK(*back.classifiers[0] == *c);
    }
    const auto text = to_text(*d.classifiers[0]) + to_text(*d.classifiers[1]) +
                      to_text("copy", d.infomorphism("copy"));
    const auto back = parse_document(text);
    CHECK(back.infomorphism("copy").bwd == d.infomorphism("copy").bwd);
  }

  TEST_CASE("random DAGs and families round-trip") {
    for (std::size_t i = 0; i < 30; ++i) {
      const auto dag = corpus::random_dag(2, i);
      const auto back = parse_document(to_text(dag));
      REQUIRE(back.dags.size() == 1);
      CHECK(back.dags[0].edges() == dag.edges());
      for (std::size_t v = 0; v < dag.size(); ++v) CHECK(back.dags[0].cpt(v) == dag.cpt(v));

      const auto f = corpus::random_family(3, i).family;
      const auto fb = parse_document(to_text(f));
      REQUIRE(fb.families.size() == 1);
      CHECK(fb.families[0].ground == f.ground);
      REQUIRE(fb.families[0].contexts.size() == f.contexts.size());
      for (std::size_t k = 0; k < f.contexts.size(); ++k) {
        CHECK(fb.families[0].contexts[k].vars == f.contexts[k].vars);
        CHECK(fb.families[0].contexts[k].dist == f.contexts[k].dist);
      }
    }
  }

  TEST_CASE("diagram blocks") {
    const std::string text = std::string(kDocument) + R"(
classifier core
tokens 0 1
types q
row 0 : 0
row 1 : 1
end
infomorphism ia a core
fwd q = q
bwd 0 = 0 1 = 1
end
diagram d
base a
core core
cocone ia
inputs a
output a q
end
)";
    const auto d = parse_document(text);
    REQUIRE(d.diagrams.size() == 1);
    const auto& g = d.diagrams[0].second;
    CHECK(g.arity() == 1);
    CHECK(g.output == std::make_pair(std::size_t{0}, std::size_t{0}));
    CHECK(cccd::verify_cccd(g).commutes);
  }

  TEST_CASE("files") {
    const auto path = (std::filesystem::temp_directory_path() / "holoscreen_text_format.txt").string();
    write_file(path, kDocument);
    CHECK(read_file(path) == kDocument);
    CHECK(load_document(path).classifiers.size() == 2);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_file(path), Error);
  }
}
