#include <doctest.h>

#include "holoscreen/cccd.hpp"

using namespace holo;
using namespace holo::cccd;

namespace {

Labeling labeling(std::map<std::string, std::set<std::size_t>> sectors) { return {std::move(sectors), {}}; }

}  // namespace

TEST_SUITE("sequence") {
  TEST_CASE("validation") {
    CHECK_THROWS_AS(make_sequence(labeling({{"A", {0, 1}}, {"B", {1}}})), ValidationError);
    CHECK_THROWS_AS(validate(MeasurementSequence{}), ValidationError);
    MeasurementSequence ragged{{labeling({{"A", {0, 1}}}), labeling({{"A", {0}}})}};
    CHECK_THROWS_AS(validate(ragged), ValidationError);
    Labeling bad_rot = labeling({{"A", {0}}});
    bad_rot.rotated = {3};
    CHECK_THROWS_AS(make_sequence(bad_rot), ValidationError);
  }

  TEST_CASE("split appends S -> (S1, S2) -> S") {
    const auto seq = make_sequence(labeling({{"S", {4, 1, 7, 2}}, {"R", {0}}}));
    const auto out = split_sequence(seq, 0, "S", 1);
    REQUIRE(out.steps.size() == 3);
    CHECK(out.steps[1].sectors.at("S1") == std::set<std::size_t>{1});
    CHECK(out.steps[1].sectors.at("S2") == std::set<std::size_t>{2, 4, 7});
    CHECK(out.steps[1].sectors.at("R") == std::set<std::size_t>{0});
    CHECK(out.steps[2] == out.steps[0]);
    CHECK_THROWS_AS(split_sequence(seq, 0, "S", 0), ValidationError);
    CHECK_THROWS_AS(split_sequence(seq, 0, "S", 4), ValidationError);
    CHECK_THROWS_AS(split_sequence(seq, 0, "T", 1), ValidationError);
    CHECK_THROWS_AS(split_sequence(seq, 3, "S", 1), ValidationError);
  }

  TEST_CASE("swap merges R and P then relabels P rotated") {
    const auto seq = make_sequence(labeling({{"R", {0, 1}}, {"P", {2}}, {"Y", {3}}}));
    const auto out = swap_qrf_sequence(seq, 0, "P", "Q");
    REQUIRE(out.steps.size() == 3);
    CHECK(out.steps[1].sectors.at("R+P") == std::set<std::size_t>{0, 1, 2});
    CHECK(out.steps[1].sectors.count("R") == 0);
    CHECK(out.steps[2].sectors.at("R") == std::set<std::size_t>{0, 1});
    CHECK(out.steps[2].sectors.at("Q") == std::set<std::size_t>{2});
    CHECK(out.steps[2].rotated == std::set<std::size_t>{2});
    CHECK(out.steps[2].sectors.count("P") == 0);
  }

  TEST_CASE("swap with an empty pointer sector") {
    const auto seq = make_sequence(labeling({{"R", {0}}, {"P", {}}}));
    const auto out = swap_qrf_sequence(seq, 0, "P", "Q");
    REQUIRE(out.steps.size() == 2);
    CHECK(out.steps[1].sectors.at("Q").empty());
    CHECK(to_cobordism(out).front().kind == CobordismKind::cylinder);
  }

  TEST_CASE("swap rejects overlap and name clashes") {
    MeasurementSequence overlap{{labeling({{"R", {0}}, {"P", {1}}, {"Q", {2}}})}};
    CHECK_THROWS_AS(swap_qrf_sequence(overlap, 0, "P", "Q"), ValidationError);
    CHECK_THROWS_AS(swap_qrf_sequence(overlap, 0, "Z", "W"), ValidationError);
    MeasurementSequence self{{labeling({{"R", {0}}, {"P", {1}}})}};
    CHECK_THROWS_AS(swap_qrf_sequence(self, 0, "P", "X", "P"), ValidationError);
  }

  TEST_CASE("cobordism shapes") {
    auto seq = make_sequence(labeling({{"S", {0, 1, 2}}, {"R", {3}}, {"P", {4}}}));
    seq = split_sequence(seq, 0, "S", 2);
    seq = swap_qrf_sequence(seq, 2, "P", "Q");
    seq.steps.push_back(seq.steps.back());
    const auto rec = to_cobordism(seq);
    REQUIRE(rec.size() == seq.steps.size() - 1);
    CHECK(rec[0].kind == CobordismKind::pair_of_pants);
    CHECK(rec[1].kind == CobordismKind::reverse_pair_of_pants);
    CHECK(rec[2].kind == CobordismKind::reverse_pair_of_pants);
    CHECK(rec[3].kind == CobordismKind::pair_of_pants);
    CHECK(rec[4].kind == CobordismKind::cylinder);
    CHECK(rec[0].source == seq.steps[0]);
    CHECK(rec[0].target == seq.steps[1]);

    MeasurementSequence shuffle{{labeling({{"A", {0, 1}}, {"B", {2, 3}}}), labeling({{"A", {0, 2}}, {"B", {1, 3}}})}};
    CHECK(to_cobordism(shuffle).front().kind == CobordismKind::composite);
    CHECK(std::string(name(CobordismKind::pair_of_pants)) == "pair_of_pants");
  }

  TEST_CASE("record count over random split chains") {
    for (std::size_t n = 2; n < 8; ++n) {
      std::set<std::size_t> all;
      for (std::size_t i = 0; i < n; ++i) all.insert(i);
      auto seq = make_sequence(labeling({{"S", all}}));
      for (std::size_t cut = 1; cut < n; ++cut) seq = split_sequence(seq, seq.steps.size() - 1, "S", cut);
      CHECK(seq.steps.size() == 1 + 2 * (n - 1));
      const auto rec = to_cobordism(seq);
      CHECK(rec.size() == seq.steps.size() - 1);
      for (std::size_t k = 0; k < rec.size(); ++k)
        CHECK(rec[k].kind == (k % 2 ? CobordismKind::reverse_pair_of_pants : CobordismKind::pair_of_pants));
    }
  }
}
