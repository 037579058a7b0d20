#include <catch_amalgamated.hpp>

#include <random>

#include "ubg/relax.hpp"

using namespace ubg;

namespace {

/// Random sparse instance with nonnegative coefficients in {1/2, 1, 2}.
ConstraintSystem random_instance(std::mt19937_64& rng, std::size_t n) {
  ConstraintSystem sys;
  const Rational coefs[] = {Rational(1, 2), Rational(1), Rational(2)};
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 3 == 0) {
      sys.bounds.emplace_back(std::nullopt);
    } else {
      sys.bounds.emplace_back(Rational(static_cast<std::int64_t>(rng() % 16), 1 + static_cast<std::int64_t>(rng() % 4)));
    }
  }
  const std::size_t rules = n + rng() % (n / 2 + 1);
  for (std::size_t k = 0; k < rules; ++k) {
    const std::size_t t = rng() % n;
    if (rng() % 4 == 0) {
      sys.rules.push_back(Rule::equality(t, rng() % n));
    } else {
      std::vector<std::pair<Rational, std::size_t>> terms;
      const std::size_t m = 1 + rng() % 2;
      for (std::size_t j = 0; j < m; ++j) terms.emplace_back(coefs[rng() % 3], rng() % n);
      sys.rules.push_back(Rule::upper(t, std::move(terms)));
    }
  }
  return sys;
}

}  // namespace

TEST_CASE("fixpoint on a small shortest-path system") {
  // d(i) <= d(j) + w as f(i) <= 1*f(j) + w*f(c) with f(c) pinned to 1.
  ConstraintSystem sys;
  sys.bounds = {Rational(0), std::nullopt, std::nullopt, std::nullopt, Rational(1)};
  auto edge = [&](std::size_t i, std::size_t j, std::int64_t w) {
    sys.rules.push_back(Rule::upper(i, {{Rational(1), j}, {Rational(w), 4}}));
  };
  edge(1, 0, 5);
  edge(2, 0, 1);
  edge(1, 2, 2);
  edge(3, 1, 1);
  const auto r = relax_fixpoint(sys);
  CHECK(r.values[1] == Bound(Rational(3)));
  CHECK(r.values[2] == Bound(Rational(1)));
  CHECK(r.values[3] == Bound(Rational(4)));
  CHECK(r.unconstrained.empty());
  CHECK(violated_rules(sys, r.values).empty());
}

TEST_CASE("unreachable entries stay at infinity") {
  ConstraintSystem sys;
  sys.bounds = {Rational(1), std::nullopt, std::nullopt};
  sys.rules.push_back(Rule::upper(1, {{Rational(1), 2}}));
  const auto r = relax_fixpoint(sys);
  CHECK(r.unconstrained == std::vector<std::size_t>{1, 2});
}

TEST_CASE("contracting cycles do not converge") {
  ConstraintSystem sys;
  sys.bounds = {Rational(1)};
  sys.rules.push_back(Rule::upper(0, {{Rational(1, 2), 0}}));
  try {
    relax_fixpoint(sys, 50);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonConvergence);
  }
}

TEST_CASE("malformed systems are rejected") {
  ConstraintSystem sys;
  sys.bounds = {Rational(-1)};
  CHECK_THROWS_AS(relax_fixpoint(sys), Error);
  sys.bounds = {Rational(1)};
  sys.rules.push_back(Rule::upper(0, {{Rational(-1), 0}}));
  CHECK_THROWS_AS(relax_fixpoint(sys), Error);
  sys.rules = {Rule::equality(0, 3)};
  CHECK_THROWS_AS(relax_fixpoint(sys), Error);
}

// Synchronous sweep k holds the minimum over derivation trees of depth <= k,
// so a fixpoint confirmed by sweep 9 must equal the depth-8 enumeration.
TEST_CASE("relaxation equals brute-force enumeration on random instances") {
  std::mt19937_64 rng(20240611);
  int compared = 0, attempts = 0;
  while (compared < 150) {
    REQUIRE(++attempts < 20000);
    const std::size_t n = 4 + rng() % 37;  // 4..40 entries
    const auto sys = random_instance(rng, n);
    ExplicitRelaxResult r;
    try {
      r = relax_fixpoint(sys, 9);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::kNonConvergence);
      continue;
    }
    std::vector<Bound> oracle;
    try {
      oracle = brute_force_oracle(sys, 8, 2'000'000);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::kBudgetExceeded);
      continue;
    }
    ++compared;
    CAPTURE(attempts, n);
    CHECK(r.values == oracle);
    CHECK(violated_rules(sys, r.values).empty());
    // Greatest solution: every rule-satisfying f below the bounds is below r.
    // A shifted copy of r that violates nothing must not exceed it.
    for (std::size_t i = 0; i < n; ++i) {
      if (!r.values[i]) continue;
      auto f = r.values;
      f[i] = *f[i] + Rational(1);
      CHECK_FALSE(violated_rules(sys, f).empty());
    }
  }
}

TEST_CASE("sweep order does not matter") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    auto sys = random_instance(rng, 10);
    ExplicitRelaxResult a;
    try {
      a = relax_fixpoint(sys, 200);
    } catch (const Error&) {
      continue;
    }
    std::shuffle(sys.rules.begin(), sys.rules.end(), rng);
    const auto b = relax_fixpoint(sys, 200);
    CHECK(a.values == b.values);
    CHECK(a.sweeps == b.sweeps);
  }
}
