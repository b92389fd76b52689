#include <doctest.h>

#include <cmath>
#include <map>

#include "corpus.hpp"
#include "holoscreen/cccd.hpp"
#include "oracles.hpp"

using namespace holo;
using namespace holo::cccd;
using infolog::share;

namespace {

ClassifierRef bits(const std::string& name, std::size_t n) {
  std::vector<std::string> tokens;
  Eigen::MatrixXd p(static_cast<Eigen::Index>(std::size_t{1} << n), static_cast<Eigen::Index>(n));
  std::vector<std::string> types;
  for (std::size_t i = 0; i < n; ++i) types.push_back("q" + std::to_string(i));
  for (std::size_t o = 0; o < (std::size_t{1} << n); ++o) {
    tokens.push_back(outcome_label(o, n));
    for (std::size_t i = 0; i < n; ++i)
      p(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) = double((o >> (n - 1 - i)) & 1U);
  }
  return share(Classifier(name, tokens, types, p));
}

/// Recomputes the Farkas score of every global assignment from the terms.
std::pair<double, double> certificate_scores(const ContextFamily& f, const Certificate& c) {
  std::map<std::pair<std::string, std::string>, double> coeff;
  double observed = c.normalization_coefficient;
  for (const auto& t : c.terms) {
    coeff[{t.classifier, t.token}] = t.coefficient;
    observed += t.coefficient * t.target;
  }
  double best = -1e300;
  for (std::uint64_t g = 0; g < (std::uint64_t{1} << f.ground); ++g) {
    double s = c.normalization_coefficient;
    for (std::size_t k = 0; k < f.contexts.size(); ++k) {
      const auto& ctx = f.contexts[k];
      auto it = coeff.find({"C" + std::to_string(k), outcome_label(restrict_assignment(g, ctx.vars), ctx.vars.size())});
      if (it != coeff.end()) s += it->second;
    }
    best = std::max(best, s);
  }
  return {observed, best};
}

ContextFamily chsh_like(double a, double b) {
  // Two overlapping contexts sharing x1 with disagreeing marginals on it.
  ContextFamily f;
  f.ground = 3;
  f.contexts.push_back({{0, 1}, {1 - a, 0, 0, a}});
  f.contexts.push_back({{1, 2}, {1 - b, 0, 0, b}});
  return f;
}

}  // namespace

TEST_SUITE("cccd") {
  TEST_CASE("family validation") {
    ContextFamily f;
    f.ground = 2;
    f.contexts.push_back({{0, 2}, {0.25, 0.25, 0.25, 0.25}});
    CHECK_THROWS_AS(validate(f), ValidationError);
    f.contexts[0].vars = {0, 0};
    CHECK_THROWS_AS(validate(f), ValidationError);
    f.contexts[0].vars = {0, 1};
    f.contexts[0].dist = {0.5, 0.5};
    CHECK_THROWS_AS(validate(f), ValidationError);
    f.contexts[0].dist = {0.5, 0.5, 0.5, -0.5};
    CHECK_THROWS_AS(validate(f), ValidationError);
    f.contexts[0].dist = {0.5, 0.25, 0.25, 0.1};
    CHECK_THROWS_AS(validate(f), ValidationError);
    f.ground = 17;
    f.contexts.clear();
    CHECK_THROWS_AS(validate(f), CapacityExceeded);
  }

  TEST_CASE("restriction and marginals") {
    CHECK(restrict_assignment(0b101, {0, 1, 2}) == 0b101);
    CHECK(restrict_assignment(0b001, {0, 1}) == 0b10);
    CHECK(outcome_label(5, 4) == "0101");
    std::vector<double> global(8, 0.0);
    global[0b011] = 0.5;
    global[0b100] = 0.5;
    const auto m = marginal(global, {2, 0});
    CHECK(m == std::vector<double>{0.0, 0.5, 0.5, 0.0});
  }

  TEST_CASE("contextuality examples") {
    const auto pr = contextuality_check(prbox_family(1.0));
    CHECK(pr.verdict == Verdict::contextual);
    REQUIRE(pr.certificate);
    CHECK(pr.certificate->violation > 1e-6);
    CHECK(pr.deterministic == false);

    const auto mixed = contextuality_check(prbox_family(0.5));
    CHECK(mixed.verdict == Verdict::feasible);
    CHECK(mixed.global.size() == 16);
    CHECK(mixed.max_marginal_error < 1e-9);

    // The local bound for the PR-box correlator sits at 3/4.
    CHECK(contextuality_check(prbox_family(0.74)).verdict == Verdict::feasible);
    CHECK(contextuality_check(prbox_family(0.76)).verdict == Verdict::contextual);

    CHECK(contextuality_check(chsh_like(0.3, 0.3)).verdict == Verdict::feasible);
    CHECK(contextuality_check(chsh_like(0.3, 0.6)).verdict == Verdict::contextual);
  }

  TEST_CASE("deterministic families are cross-checked") {
    ContextFamily f;
    f.ground = 3;
    f.contexts.push_back({{0, 1}, {0, 1, 0, 0}});
    f.contexts.push_back({{1, 2}, {0, 0, 1, 0}});
    auto r = contextuality_check(f);
    CHECK(r.deterministic);
    CHECK(r.cross_checked);
    CHECK(r.verdict == Verdict::feasible);
    f.contexts[1].dist = {1, 0, 0, 0};
    r = contextuality_check(f);
    CHECK(r.verdict == Verdict::contextual);
    CHECK(*deterministic_assignment_exists(f) == false);
    CHECK_FALSE(deterministic_assignment_exists(prbox_family(0.5)).has_value());
  }

  TEST_CASE("Farkas certificates separate the observed marginals") {
    std::size_t checked = 0;
    for (std::size_t i = 0; i < 120; ++i) {
      const auto g = corpus::random_family(0xCE57, i);
      const auto r = contextuality_check(g.family);
      if (r.verdict != Verdict::contextual) continue;
      REQUIRE(r.certificate);
      const auto [observed, best] = certificate_scores(g.family, *r.certificate);
      CHECK(std::abs(observed - r.certificate->violation) < 1e-9);
      CHECK(best <= 1e-9);
      CHECK(std::abs(best - r.certificate->max_support) < 1e-9);
      CHECK(observed > 0.0);
      ++checked;
    }
    CHECK(checked > 10);
  }

  TEST_CASE("witnesses reproduce the marginals") {
    for (std::size_t i = 0; i < 120; ++i) {
      const auto g = corpus::random_family(0xFEED, i);
      for (Witness w : {Witness::vertex, Witness::max_entropy}) {
        const auto r = contextuality_check(g.family, w);
        if (r.verdict != Verdict::feasible) continue;
        double total = 0.0;
        for (double v : r.global) {
          total += v;
          CHECK(v >= -1e-12);
        }
        CHECK(std::abs(total - 1.0) < 1e-9);
        for (const auto& c : g.family.contexts) {
          const auto m = marginal(r.global, c.vars);
          for (std::size_t o = 0; o < m.size(); ++o) CHECK(std::abs(m[o] - c.dist[o]) < 1e-7);
        }
      }
      if (g.kind == corpus::FamilyKind::marginals) CHECK(contextuality_check(g.family).verdict == Verdict::feasible);
    }
  }

  TEST_CASE("max-entropy witness of independent marginals is the product") {
    ContextFamily f;
    f.ground = 2;
    f.contexts.push_back({{0}, {0.3, 0.7}});
    f.contexts.push_back({{1}, {0.6, 0.4}});
    const auto r = contextuality_check(f, Witness::max_entropy);
    REQUIRE(r.verdict == Verdict::feasible);
    // bit 0 = x0, bit 1 = x1.
    CHECK(std::abs(r.global[0b00] - 0.3 * 0.6) < 1e-6);
    CHECK(std::abs(r.global[0b01] - 0.7 * 0.6) < 1e-6);
    CHECK(std::abs(r.global[0b11] - 0.7 * 0.4) < 1e-6);
  }

  TEST_CASE("build_core without cross maps is the product") {
    const auto a = bits("a", 1), b = bits("b", 2);
    const auto r = build_core({a, b}, {});
    REQUIRE(r.diagram);
    CHECK(r.diagram->core->token_count() == 8);
    CHECK(r.diagram->core->type_count() == 3);
    CHECK(verify_cccd(*r.diagram).commutes);
  }

  TEST_CASE("build_core keeps only related tuples") {
    const auto a = bits("a", 1), b = bits("b", 1);
    const CrossMap g{0, 1, {a, b, {0}, {0, 1}}};
    const auto r = build_core({a, b}, {g});
    REQUIRE(r.diagram);
    CHECK(r.diagram->core->tokens() == std::vector<std::string>{"0|0", "1|1"});
    const auto check = verify_cccd(*r.diagram);
    CHECK(check.commutes);
    CHECK(check.violations.empty());

    auto bad = *r.diagram;
    Eigen::MatrixXd p = bad.core->matrix();
    p(0, 0) = 0.5;
    bad.core = share(bad.core->with_matrix(p));
    for (auto& f : bad.cocone) f.target = bad.core;
    const auto broken = verify_cccd(bad);
    CHECK_FALSE(broken.commutes);
    CHECK(broken.max_deviation == doctest::Approx(0.5));

    const CrossMap wrong{0, 1, {a, b, {0}, {1, 0}}};
    CHECK_THROWS_AS(build_core({a, b}, {wrong}), ValidationError);
    CHECK_THROWS_AS(build_core({}, {}), ValidationError);
  }

  TEST_CASE("verify_cccd rejects malformed diagrams") {
    const auto a = bits("a", 1);
    CCCDDiagram d;
    d.base = {a};
    CHECK_THROWS_AS(verify_cccd(d), ValidationError);
    d.core = a;
    CHECK_THROWS_AS(verify_cccd(d), ValidationError);
  }

  TEST_CASE("cone legs are Chu duals of the cocone") {
    const auto r = build_core(classifiers_from_contexts(prbox_family(0.5)).base,
                              classifiers_from_contexts(prbox_family(0.5)).cross);
    REQUIRE(r.diagram);
    const auto cone = r.diagram->cone();
    REQUIRE(cone.size() == r.diagram->cocone.size());
    for (std::size_t j = 0; j < cone.size(); ++j) {
      CHECK(cone[j].fwd == r.diagram->cocone[j].bwd);
      CHECK(verify_infomorphism(cone[j]).valid);
    }
  }

  TEST_CASE("build_core agrees with the contextuality verdict") {
    for (std::size_t i = 0; i < 80; ++i) {
      const auto g = corpus::random_family(0xAB, i);
      const auto verdict = contextuality_check(g.family).verdict;
      const auto fc = classifiers_from_contexts(g.family);
      bool built = false;
      try {
        const auto r = build_core(fc.base, fc.cross);
        built = r.verdict == Verdict::feasible;
        if (built) {
          REQUIRE(r.diagram);
          CHECK(verify_cccd(*r.diagram).commutes);
        } else {
          CHECK(r.certificate.has_value());
        }
      } catch (const ValidationError&) {
        built = false;
      }
      CHECK(built == (verdict == Verdict::feasible));
    }
  }

  TEST_CASE("PR box core is contextual with a certificate") {
    const auto fc = classifiers_from_contexts(prbox_family(1.0));
    CHECK(fc.context_count == 4);
    CHECK(fc.base.size() == 8);
    const auto r = build_core(fc.base, fc.cross);
    CHECK(r.verdict == Verdict::contextual);
    CHECK_FALSE(r.diagram.has_value());
    REQUIRE(r.certificate);
    CHECK(r.certificate->violation > 0.0);
  }

  TEST_CASE("mediating infomorphism") {
    const auto a = bits("a", 1), b = bits("b", 1);
    const auto r = build_core({a, b}, {{0, 1, {a, b, {0}, {0, 1}}}});
    REQUIRE(r.diagram);
    const auto& d = *r.diagram;
    const auto copy = share(Classifier("copy", d.core->tokens(), d.core->types(), d.core->matrix()));
    std::vector<Infomorphism> legs;
    for (const auto& f : d.cocone) legs.push_back({f.source, copy, f.fwd, f.bwd});
    const auto u = mediating_infomorphism(d, copy, legs);
    REQUIRE(u);
    CHECK(u->fwd == std::vector<std::size_t>{0, 1});
    CHECK(u->bwd == std::vector<std::size_t>{0, 1});
    for (std::size_t j = 0; j < legs.size(); ++j) {
      const auto composed = compose(d.cocone[j], *u);
      CHECK(composed.fwd == legs[j].fwd);
      CHECK(composed.bwd == legs[j].bwd);
    }

    // A candidate token projecting onto an unrelated pair has no mediator.
    Eigen::MatrixXd p(1, 2);
    p << 0, 1;
    const auto odd = share(Classifier("odd", {"x"}, {"a.q0", "b.q0"}, p));
    std::vector<Infomorphism> odd_legs{{a, odd, {0}, {0}}, {b, odd, {1}, {1}}};
    CHECK_FALSE(mediating_infomorphism(d, odd, odd_legs).has_value());
    CHECK_THROWS_AS(mediating_infomorphism(d, odd, {odd_legs[0]}), ValidationError);
  }

  TEST_CASE("overlap classifiers") {
    const auto fc = classifiers_from_contexts(chsh_like(0.3, 0.3));
    REQUIRE(fc.base.size() == 3);
    CHECK(fc.base[2]->name() == "C0&C1");
    CHECK(fc.cross.size() == 2);
    for (const auto& g : fc.cross) CHECK(verify_infomorphism(g.map).valid);
    const auto bad = classifiers_from_contexts(chsh_like(0.3, 0.6));
    bool any_invalid = false;
    for (const auto& g : bad.cross) any_invalid |= !verify_infomorphism(g.map).valid;
    CHECK(any_invalid);
  }

  TEST_CASE("Boolean diagrams") {
    const std::vector<int> x_or{0, 1, 1, 0};
    for (bool layered : {false, true}) {
      const auto d = qrf_diagram(2, x_or, layered);
      CHECK(d.arity() == 2);
      CHECK(truth_table(d) == x_or);
      CHECK(evaluate(d, {1, 0}) == 1);
      CHECK(verify_cccd(d).commutes);
      CHECK(d.base.size() == (layered ? 4u : 3u));
    }
    CounterRng rng(8);
    for (std::size_t k = 0; k <= 5; ++k) {
      std::vector<int> table(std::size_t{1} << k);
      for (auto& v : table) v = static_cast<int>(rng.below(2));
      CHECK(truth_table(qrf_diagram(k, table)) == table);
    }
    CHECK_THROWS_AS(qrf_diagram(2, {0, 1}), ValidationError);
    CHECK_THROWS_AS(qrf_diagram(1, {0, 2}), ValidationError);
    CHECK_THROWS_AS(evaluate(qrf_diagram(2, x_or), {1}), DimensionMismatch);
    CHECK_THROWS_AS(qrf_diagram(13, {}), CapacityExceeded);
  }
}
