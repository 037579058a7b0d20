#include <catch_amalgamated.hpp>

#include "ubg/expr.hpp"
#include "ubg/universal.hpp"

using namespace ubg;

namespace {

Construction literal2() {
  Config cfg = Config::literal();
  cfg.targets = {TargetSpace::parse("abs:1")};
  return build(cfg);
}

}  // namespace

TEST_CASE("sigma_1 examples with y = 1") {
  auto c = literal2();
  const TargetSpace t = TargetSpace::parse("abs:1");
  const Stage& s1 = c.stage(1);
  const auto sigma = sigma_table(c, s1, t);
  const std::size_t n = s1.size();
  auto at = [&](const char* a, const char* b) {
    return sigma[s1.pos(eval_text(a, c)) * n + s1.pos(eval_text(b, c))];
  };
  CHECK(at("x", "e") == Rational(1));
  CHECK(at("inv(x)", "e") == Rational(1));
  CHECK(at("x", "inv(x)") == Rational(2));
  CHECK(s1.metric(eval_text("x", c), eval_text("inv(x)", c)) == Rational(2));
}

TEST_CASE("the pseudonorm vanishes on 1/2 x + 1/2 inv(x)") {
  auto c = literal2();
  Morphism phi(c.store, TargetSpace::parse("abs:1"));
  const ElementId g = eval_text("1/2 x + 1/2 inv(x)", c);
  CHECK(phi(g) == TargetVector{Rational(0)});
  CHECK(c.norm(g).first == Rational(1));
  CHECK(phi(eval_text("x - inv(x)", c)) == TargetVector{Rational(2)});
}

TEST_CASE("target norms") {
  const auto mx = TargetSpace::parse("max:1,-1/2");
  const auto l2 = TargetSpace::parse("euclid:3,4");
  const auto ab = TargetSpace::parse("abs:-3/2");
  CHECK(target_norm(mx, mx.image) == Rational(1));
  CHECK(norm_squared(mx, mx.image) == Rational(1));
  CHECK(norm_squared(l2, l2.image) == Rational(25));
  CHECK_FALSE(target_norm(l2, l2.image).has_value());
  CHECK(target_norm(ab, ab.image) == Rational(3, 2));
  CHECK(norm_squared(ab, ab.image) == Rational(9, 4));
}

TEST_CASE("universal suite passes for abs, max and euclidean targets") {
  Config cfg;
  cfg.scalar_set = {Dyadic(-1), Dyadic(0), Dyadic(1)};
  cfg.targets = {TargetSpace::parse("abs:1"), TargetSpace::parse("abs:3/2"), TargetSpace::parse("max:1,-1/2"),
                 TargetSpace::parse("euclid:1,2")};
  const auto c = build(cfg);
  const auto reps = check_universal(c);
  REQUIRE(reps.size() == 8);
  for (const auto& r : reps) {
    CAPTURE(r.str());
    CHECK(r.ok());
    CHECK(r.attempted > 0);
  }
  CHECK(reps[0].notes.back() == "worst ratio 1");
}

TEST_CASE("morphism preserves operations and scales with y") {
  auto c = literal2();
  const TargetSpace t = TargetSpace::parse("max:2,-1");
  Morphism phi(c.store, t);
  const ElementId x = eval_text("x", c), xi = eval_text("inv(x)", c);
  CHECK(phi(x) == t.image);
  CHECK(phi(xi) == Rational(-1) * t.image);
  CHECK(phi(kUnit) == TargetVector(2));
  const ElementId comb = eval_text("3/2 x - 1/2 inv(x)", c);
  CHECK(phi(comb) == Rational(2) * t.image);
  TargetSpace half = t;
  half.image = Rational(1, 2) * t.image;
  Morphism psi(c.store, half);
  CHECK(psi(comb) == Rational(1, 2) * phi(comb));
}
