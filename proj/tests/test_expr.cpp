#include <catch_amalgamated.hpp>

#include <random>

#include "ubg/expr.hpp"

using namespace ubg;

namespace {

ExprPtr random_expr(std::mt19937_64& rng, int depth) {
  const int pick = depth <= 0 ? static_cast<int>(rng() % 2) : static_cast<int>(rng() % 5);
  switch (pick) {
    case 0: return Expr::x();
    case 1: return Expr::e();
    case 2: return Expr::inv(random_expr(rng, depth - 1));
    case 3: return Expr::prod(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default: {
      std::vector<std::pair<Dyadic, ExprPtr>> terms;
      const int m = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < m; ++i) {
        const auto num = static_cast<std::int64_t>(rng() % 41) - 20;
        terms.emplace_back(Dyadic(num, static_cast<int>(rng() % 4)), random_expr(rng, depth - 1));
      }
      return Expr::sum(std::move(terms));
    }
  }
}

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::kIo;
}

Construction small() {
  Config cfg;
  cfg.scalar_set = {Dyadic(-1), Dyadic(0), Dyadic(1)};
  return build(cfg);  // word_cap 2, X_3 has 197 members
}

}  // namespace

TEST_CASE("parse examples") {
  CHECK(*parse_expr("x . inv(x)") == *Expr::prod(Expr::x(), Expr::inv(Expr::x())));
  CHECK(*parse_expr("1/2 x + 1/2 inv(x)") ==
        *Expr::sum({{Dyadic(1, 1), Expr::x()}, {Dyadic(1, 1), Expr::inv(Expr::x())}}));
  CHECK(*parse_expr("  x.inv( x ) ") == *parse_expr("x . inv(x)"));
  CHECK(*parse_expr("x - inv(x)") == *Expr::sum({{Dyadic(1), Expr::x()}, {Dyadic(-1), Expr::inv(Expr::x())}}));
  CHECK(*parse_expr("-1/4 x") == *Expr::sum({{Dyadic(-1, 2), Expr::x()}}));
  CHECK(*parse_expr("x . x . x") == *Expr::prod(Expr::prod(Expr::x(), Expr::x()), Expr::x()));
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse_expr("x +");
    FAIL("expected syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSyntax);
    CHECK(std::string(e.what()).find("offset 3") != std::string::npos);
  }
  CHECK(error_of([] { parse_expr("x . (e"); }) == ErrorKind::kSyntax);
  CHECK(error_of([] { parse_expr("y"); }) == ErrorKind::kSyntax);
  CHECK(error_of([] { parse_expr(""); }) == ErrorKind::kSyntax);
  CHECK(error_of([] { parse_expr("x x"); }) == ErrorKind::kSyntax);
  CHECK(error_of([] { parse_expr("inv x"); }) == ErrorKind::kSyntax);
  CHECK(error_of([] { parse_expr("1/3 x"); }) == ErrorKind::kScalarDomain);
  CHECK(error_of([] { parse_expr("1/0 x"); }) == ErrorKind::kScalarDomain);
}

TEST_CASE("parse inverts render on fuzzed expressions") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 20000; ++i) {
    const ExprPtr e = random_expr(rng, 1 + static_cast<int>(rng() % 5));
    const std::string text = render_expr(*e);
    CAPTURE(text);
    const ExprPtr back = parse_expr(text);
    REQUIRE(*back == *e);
    CHECK(render_expr(*back) == text);
  }
}

TEST_CASE("evaluation examples") {
  auto c = small();
  CHECK(eval_text("x . inv(x)", c) == kUnit);
  Config desk;
  desk.stage_count = 2;
  auto d = build(desk);
  const ElementId g = eval_text("1/2 x + 1/2 inv(x)", d);
  CHECK(d.first_stage_of(g) == 2);
  CHECK(d.store.render(g) == "1/2 x + 1/2 inv(x)");
  CHECK(d.store.term(g).kind == TermKind::kCombo);
  CHECK(c.first_stage_of(eval_text("x . x", c)) == 3);
  try {
    eval_text("x . x . x . x", c);
    FAIL("expected out-of-universe");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOutOfUniverse);
    CHECK(std::string(e.what()).find("X_4") != std::string::npos);
  }
}

TEST_CASE("evaluation is invariant under regrouping") {
  auto c = small();
  CHECK(eval_text("(x . inv(x - inv(x))) . (inv(x) . x)", c) ==
        eval_text("x . (inv(x - inv(x)) . inv(x)) . x", c));
  CHECK(eval_text("(x + inv(x)) - x", c) == eval_text("x + (inv(x) - x)", c));
  CHECK(eval_text("-1 (x + inv(x))", c) == eval_text("-1 x - 1 inv(x)", c));
  CHECK(eval_text("inv(x . inv(x + inv(x)))", c) == eval_text("(x + inv(x)) . inv(x)", c));
  // Rendered members evaluate back to themselves.
  for (auto id : c.top().members) CHECK(eval_text(c.store.render(id), c) == id);
}
