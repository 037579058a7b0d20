#include <catch_amalgamated.hpp>

#include "ubg/construction.hpp"
#include "ubg/stages.hpp"

using namespace ubg;

namespace {

std::vector<Stage> members_only(ElementStore& store, const Config& cfg, int upto) {
  std::vector<Stage> st;
  st.push_back(make_stage0());
  for (int n = 1; n <= upto; ++n) {
    if (n % 2 == 1) {
      st.push_back(make_word_stage(store, st[n - 1], n >= 2 ? &st[n - 2] : nullptr, cfg));
    } else {
      st.push_back(make_vector_stage(store, st[n - 1], st[n - 2], cfg));
    }
  }
  return st;
}

Config micro() {
  Config c;
  c.scalar_set = {Dyadic(-1), Dyadic(0), Dyadic(1)};
  c.word_cap = 1;
  return c;
}

}  // namespace

TEST_CASE("first stages") {
  ElementStore store;
  const auto st = members_only(store, Config{}, 1);
  CHECK(st[0].members == std::vector<ElementId>{kUnit});
  REQUIRE(st[1].size() == 3);
  std::vector<std::string> names;
  for (auto id : st[1].members) names.push_back(store.render(id));
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"e", "inv(x)", "x"});
  CHECK(st[1].new_members.size() == 2);
}

TEST_CASE("stage sizes: desk") {
  ElementStore store;
  const auto st = members_only(store, Config{}, 3);
  CHECK(st[1].size() == 3);
  CHECK(st[2].size() == 25);   // 5^2 coordinate choices over {x, x^-1}
  CHECK(st[2].basis.size() == 2);
  CHECK(st[3].generators.size() == 23);  // x plus the 22 new vectors
  CHECK(st[3].size() == 2117);  // words of length <= 2 over 23 generators
}

TEST_CASE("stage sizes: literal parameters") {
  ElementStore store;
  const auto st = members_only(store, Config::literal(), 2);
  CHECK(st[2].size() == 81);
}

TEST_CASE("stage sizes: micro") {
  ElementStore store;
  const auto st = members_only(store, micro(), 4);
  CHECK(st[1].size() == 3);
  CHECK(st[2].size() == 9);
  CHECK(st[3].size() == 15);  // e, x^{+-1} and 6 new generators with inverses
  CHECK(st[4].size() == 6561);  // 3^8 over 8 basis elements
}

TEST_CASE("stages are nested and new members are exactly the difference") {
  ElementStore store;
  const auto st = members_only(store, micro(), 4);
  for (std::size_t n = 1; n < st.size(); ++n) {
    for (auto id : st[n - 1].members) CHECK(st[n].contains(id));
    std::size_t fresh = 0;
    for (auto id : st[n].members) fresh += !st[n - 1].contains(id);
    CHECK(fresh == st[n].new_members.size());
    for (auto id : st[n].new_members) CHECK_FALSE(st[n - 1].contains(id));
  }
  CHECK(membership(st, kUnit, 0));
  CHECK_THROWS_AS(membership(st, kUnit, 9), Error);
  CHECK(first_stage(st, st[3].new_members.front()) == 3);
}

TEST_CASE("member budget") {
  ElementStore store;
  Config c;
  c.member_budget = 100;
  try {
    members_only(store, c, 3);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBudgetExceeded);
  }
}

TEST_CASE("stage order is enforced") {
  ElementStore store;
  const Config c;
  auto s0 = make_stage0();
  auto s1 = make_word_stage(store, s0, nullptr, c);
  CHECK_THROWS_AS(make_word_stage(store, s1, &s0, c), Error);
  CHECK_THROWS_AS(make_vector_stage(store, s0, s0, c), Error);
  Construction con;
  con.stages.push_back(s0);
  CHECK_THROWS_AS(con.stage(1), Error);
}
