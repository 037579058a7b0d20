#include <catch_amalgamated.hpp>

#include "ubg/construction.hpp"
#include "ubg/expr.hpp"
#include "ubg/oracle.hpp"

using namespace ubg;

namespace {

Rational coef_of(const Vector& v, ElementId id) {
  for (const auto& e : v) {
    if (e.basis == id) return e.coef.to_rational();
  }
  return Rational(0);
}

}  // namespace

TEST_CASE("norm_2 with literal parameters equals the three-variable oracle") {
  const auto c = build(Config::literal());
  const Stage& s2 = c.stage(2);
  REQUIRE(s2.size() == 81);
  const ElementId x = *c.store.find(ElementTerm::generator(0));
  const ElementId xi = *c.store.find(c.store.group_inv(x));
  for (std::size_t i = 0; i < s2.size(); ++i) {
    const Vector v = c.store.vector_of(s2.members[i]);
    const Rational a = coef_of(v, x), b = coef_of(v, xi);
    CAPTURE(c.store.render(s2.members[i]));
    CHECK(s2.norm[i] == oracle::norm2_three_variable(a, b));
  }
}

TEST_CASE("norm_2 named values") {
  auto c = build(Config::literal());
  auto norm = [&](const char* text) { return c.norm(eval_text(text, c)).first; };
  CHECK(norm("x") == Rational(1));
  CHECK(norm("inv(x)") == Rational(1));
  CHECK(norm("x - inv(x)") == Rational(2));
  CHECK(norm("1/2 x - 1/2 inv(x)") == Rational(1));
  CHECK(norm("1/2 x + 1/2 inv(x)") == Rational(1));
  CHECK(norm("e") == Rational(0));
  CHECK(c.norm(eval_text("x", c)).second == 2);
}

TEST_CASE("gamma LP values equal the vertex oracle") {
  for (const Config& cfg : {Config::literal(), Config{}}) {
    ElementStore store;
    auto s0 = make_stage0();
    auto s1 = make_word_stage(store, s0, nullptr, cfg);
    rho_extend(store, s1, s0, cfg);
    auto s2 = make_vector_stage(store, s1, s0, cfg);
    Gamma gamma(store, s1);
    REQUIRE(gamma.molecules().size() <= 12);
    for (auto id : s2.members) {
      const Vector v = store.vector_of(id);
      const auto o = oracle::lp_by_vertices(gamma.molecules(), v);
      REQUIRE(o);
      CHECK(gamma.lp(v) == *o);
    }
  }
}

TEST_CASE("norm tables are seminorms on the stage") {
  const auto c = build(Config::literal());
  const Stage& s = c.stage(2);
  const auto& store = c.store;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const ElementId a = s.members[i];
    CHECK(s.norm[i].sign() >= 0);
    CHECK((s.norm[i].is_zero()) == (a == kUnit));
    std::pair<Dyadic, ElementId> neg[] = {{Dyadic(-1), a}};
    if (auto na = store.find(store.linear_combination(neg)); na && s.contains(*na)) {
      CHECK(s.norm_of(*na) == s.norm[i]);
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
      std::pair<Dyadic, ElementId> t[] = {{Dyadic(1), a}, {Dyadic(1), s.members[j]}};
      auto sum = store.find(store.linear_combination(t));
      if (sum && s.contains(*sum)) CHECK(s.norm_of(*sum) <= s.norm[i] + s.norm[j]);
    }
  }
}

TEST_CASE("desk norm extension") {
  Config cfg;
  cfg.stage_count = 2;
  auto c = build(cfg);
  auto norm = [&](const char* text) { return c.norm(eval_text(text, c)).first; };
  CHECK(norm("x") == Rational(1));
  CHECK(norm("x - inv(x)") == Rational(2));
  CHECK(norm("-1/2 x") == Rational(1, 2));
  CHECK(check_extension_norm(c.store, c.stage(2), c.stage(1)).ok());
}

TEST_CASE("rule multipliers cover nonzero scalars and dyadic inverses") {
  const auto m = rule_multipliers({Dyadic(-1), Dyadic(-1, 1), Dyadic(0), Dyadic(1, 1), Dyadic(1)});
  CHECK(std::find(m.begin(), m.end(), Dyadic(0)) == m.end());
  CHECK(std::find(m.begin(), m.end(), Dyadic(2)) != m.end());
  CHECK(std::find(m.begin(), m.end(), Dyadic(-1, 1)) != m.end());
}
