#include <catch_amalgamated.hpp>

#include "ubg/expr.hpp"
#include "ubg/universal.hpp"
#include "ubg/verify.hpp"

using namespace ubg;

namespace {

Config micro(int stages) {
  Config c;
  c.scalar_set = {Dyadic(-1), Dyadic(0), Dyadic(1)};
  c.word_cap = 1;
  c.stage_count = stages;
  return c;
}

const Construction& micro_build() {
  static const Construction c = [] {
    Config cfg = micro(4);
    cfg.check_budget = 1'000'000;
    return build(cfg);
  }();
  return c;
}

bool all_ok(const std::vector<VerificationReport>& reps) {
  for (const auto& r : reps) {
    if (!r.ok()) return false;
  }
  return true;
}

bool flags(const std::vector<VerificationReport>& reps, const std::string& clause) {
  for (const auto& r : reps) {
    for (const auto& ce : r.counterexamples) {
      if (ce.clause == clause) return true;
    }
  }
  return false;
}

void set_rho(Stage& s, ElementId a, ElementId b, const Rational& v, bool both) {
  const std::size_t n = s.size();
  s.rho[s.pos(a) * n + s.pos(b)] = v;
  if (both) s.rho[s.pos(b) * n + s.pos(a)] = v;
}

}  // namespace

TEST_CASE("unperturbed micro construction passes every suite") {
  Construction c = micro_build();
  CHECK(all_ok(check_conditions(c)));
  CHECK(all_ok(check_biinvariance_all(c)));
  CHECK(all_ok(check_universal(c)));
}

TEST_CASE("asymmetric perturbation is caught by condition (1)") {
  Construction c = micro_build();
  const ElementId x = eval_text("x", c), xi = eval_text("inv(x)", c);
  set_rho(c.stages[3], x, xi, Rational(3), false);
  const auto reps = check_conditions(c);
  CHECK_FALSE(all_ok(reps));
  CHECK(flags(reps, "(1)"));
}

TEST_CASE("symmetric perturbation is caught by bi-invariance") {
  Construction c = micro_build();
  const ElementId x = eval_text("x", c);
  set_rho(c.stages[3], x, kUnit, Rational(3, 2), true);
  const auto reps = check_biinvariance_all(c);
  CHECK_FALSE(all_ok(reps));
  CHECK((flags(reps, "left invariance") || flags(reps, "right invariance")));
}

TEST_CASE("raising a metric entry breaks the Fact inequality") {
  Construction c = micro_build();
  const ElementId a = eval_text("x - inv(x)", c), b = eval_text("inv(x - inv(x))", c);
  const Rational big = c.stages[3].metric(a, b) + Rational(5);
  set_rho(c.stages[3], a, b, big, true);
  const auto reps = check_biinvariance_all(c);
  CHECK(flags(reps, "Fact"));
  CHECK(flags(reps, "triangle"));
}

TEST_CASE("halving a norm is caught by the universal suite and the extension check") {
  Construction c = micro_build();
  const ElementId x = eval_text("x", c);
  Stage& s2 = c.stages[2];
  s2.norm[s2.pos(x)] = s2.norm_of(x) / Rational(2);
  const auto uni = check_universal(c);
  CHECK_FALSE(all_ok(uni));
  CHECK(flags(uni, "pseudonorm <= norm"));
  CHECK(flags(uni, "tight at x"));
  CHECK_FALSE(all_ok(check_conditions(c)));
}

TEST_CASE("condition (2) catches a metric that drifts from the norm") {
  Construction c = micro_build();
  const ElementId a = eval_text("x + inv(x)", c);
  set_rho(c.stages[3], a, kUnit, c.stages[3].metric(a, kUnit) + Rational(1), true);
  CHECK(flags(check_conditions(c), "(2)"));
}

TEST_CASE("sampling beyond the budget records the seed and is reproducible") {
  Config cfg = micro(3);
  cfg.check_budget = 500;
  cfg.seed = 77;
  Construction c = build(cfg);
  const auto a = check_conditions(c), b = check_conditions(c);
  bool sampled = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].attempted == b[i].attempted);
    if (a[i].sampled) {
      sampled = true;
      CHECK(a[i].seed == 77);
      CHECK(a[i].str().find("seed 77") != std::string::npos);
    }
  }
  CHECK(sampled);
  CHECK(all_ok(a));
  // Bi-invariance stays exhaustive regardless of the budget.
  for (const auto& r : check_biinvariance_all(c)) CHECK_FALSE(r.sampled);
}

TEST_CASE("vacuous clauses are reported") {
  Construction c = build(micro(2));
  const auto reps = check_conditions(c);
  int vacuous = 0;
  for (const auto& r : reps) {
    for (const auto& n : r.notes) vacuous += n.find("vacuous") != std::string::npos;
  }
  CHECK(vacuous == 1);  // (4) needs X_3
  CHECK(all_ok(reps));
}

TEST_CASE("summaries merge counts") {
  Construction c = build(micro(3));
  const auto parts = check_conditions(c);
  const auto total = summarize("conditions", parts);
  std::uint64_t attempted = 0;
  for (const auto& p : parts) attempted += p.attempted;
  CHECK(total.attempted == attempted);
  CHECK(total.ok());
}
