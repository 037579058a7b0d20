#include <catch_amalgamated.hpp>

#include "ubg/construction.hpp"
#include "ubg/expr.hpp"
#include "ubg/oracle.hpp"

using namespace ubg;

namespace {

Config micro() {
  Config c;
  c.scalar_set = {Dyadic(-1), Dyadic(0), Dyadic(1)};
  c.word_cap = 1;
  return c;
}

struct Chain {
  ElementStore store;
  Stage s0, s1, s2, s3;
  MetricBuildInfo info;
  explicit Chain(const Config& cfg, MetricOptions opt = {}) {
    s0 = make_stage0();
    s1 = make_word_stage(store, s0, nullptr, cfg);
    rho_extend(store, s1, s0, cfg, opt);
    s2 = make_vector_stage(store, s1, s0, cfg);
    norm_extend(store, s2, s1, cfg);
    s3 = make_word_stage(store, s2, &s1, cfg);
    info = rho_extend(store, s3, s2, cfg, opt);
  }
};

}  // namespace

TEST_CASE("rho_1 base case") {
  auto c = build(Config::literal(1));
  auto d = [&](const char* a, const char* b) { return c.distance(eval_text(a, c), eval_text(b, c)).first; };
  CHECK(d("x", "e") == Rational(1));
  CHECK(d("inv(x)", "e") == Rational(1));
  CHECK(d("x", "inv(x)") == Rational(2));
  CHECK(d("x", "x") == Rational(0));
}

TEST_CASE("rho_3 on micro instances equals the factorization oracle") {
  for (int factor : {1, 2}) {
    Config cfg = micro();
    cfg.ambient_expansion = factor;
    Chain ch(cfg);
    const std::size_t n = ch.s3.size();
    REQUIRE(n == 15);
    const auto o = oracle::rho_by_factorization(ch.store, ch.s3, ch.s2, 6, 4);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CAPTURE(factor, ch.store.render(ch.s3.members[i]), ch.store.render(ch.s3.members[j]));
        REQUIRE(o[i * n + j]);
        CHECK(ch.s3.rho_at(i, j) == *o[i * n + j]);
      }
    }
  }
}

TEST_CASE("fast and generic split kernels agree") {
  Config cfg;
  cfg.scalar_set = {Dyadic(-1), Dyadic(0), Dyadic(1)};
  Chain fast(cfg, {true});
  Chain slow(cfg, {false});
  REQUIRE(fast.s3.size() == 197);
  CHECK(fast.info.fast_kernel);
  CHECK_FALSE(slow.info.fast_kernel);
  CHECK(fast.s3.members == slow.s3.members);
  CHECK(fast.s3.rho == slow.s3.rho);
}

TEST_CASE("rho_3 is a bi-invariant metric extending the norm") {
  Config cfg;
  cfg.scalar_set = {Dyadic(-1), Dyadic(0), Dyadic(1)};
  Chain ch(cfg);
  const Stage& s = ch.s3;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(s.rho_at(i, i) == Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) CHECK(s.rho_at(i, j).sign() > 0);
      CHECK(s.rho_at(i, j) == s.rho_at(j, i));
    }
  }
  CHECK(check_extension_metric(ch.store, ch.s3, ch.s2).ok());
  // Left and right translation by a generator, where both products stay in X_3.
  for (auto g : s.generators) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto gi = ch.store.find(ch.store.group_mul(g, s.members[i]));
        auto gj = ch.store.find(ch.store.group_mul(g, s.members[j]));
        if (gi && gj && s.contains(*gi) && s.contains(*gj)) {
          CHECK(s.metric(*gi, *gj) == s.rho_at(i, j));
        }
      }
    }
  }
}

TEST_CASE("word stage needs its sealed predecessor") {
  ElementStore store;
  const Config cfg;
  auto s0 = make_stage0();
  auto s1 = make_word_stage(store, s0, nullptr, cfg);
  CHECK_THROWS_AS(rho_extend(store, s1, s1, cfg), Error);
  rho_extend(store, s1, s0, cfg);
  auto s2 = make_vector_stage(store, s1, s0, cfg);
  auto s3 = make_word_stage(store, s2, &s1, cfg);
  CHECK_THROWS_AS(rho_extend(store, s3, s2, cfg), Error);  // s2 has no norm yet
}
