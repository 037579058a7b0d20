#include <catch_amalgamated.hpp>

#include <random>

#include "ubg/algebra.hpp"

using namespace ubg;

namespace {

struct Fixture {
  ElementStore store;
  ElementId x, a, b;  // generators
  Fixture() {
    x = store.intern(ElementTerm::generator(0));
    store.register_generator(x);
    a = store.intern(ElementTerm::generator(1));
    store.register_generator(a);
    b = store.intern(ElementTerm::generator(2));
    store.register_generator(b);
  }
};

}  // namespace

TEST_CASE("interning is canonical") {
  Fixture f;
  auto& s = f.store;
  CHECK(s.intern(ElementTerm::generator(0)) == f.x);
  CHECK(s.intern(ElementTerm::unit()) == kUnit);
  const ElementId w = s.mul(f.x, f.a);
  CHECK(s.mul(f.x, f.a) == w);
  CHECK(s.render(w) == "x . x1");
  CHECK(s.find(ElementTerm::word({{f.a, 1}, {f.x, 1}})) == std::nullopt);
}

TEST_CASE("free reduction") {
  Fixture f;
  auto& s = f.store;
  const ElementId xi = s.inv(f.x);
  CHECK(s.mul(f.x, xi) == kUnit);
  CHECK(s.mul(xi, f.x) == kUnit);
  CHECK(s.inv(xi) == f.x);
  CHECK(s.mul(kUnit, f.x) == f.x);
  CHECK(s.render(xi) == "inv(x)");
  const ElementId w = s.mul(s.mul(f.x, f.a), s.inv(f.a));
  CHECK(w == f.x);
  CHECK_THROWS_AS(s.group_mul(f.x, s.mul(f.x, f.a) + 100), Error);
}

TEST_CASE("group axioms on random words") {
  Fixture f;
  auto& s = f.store;
  std::mt19937_64 rng(3);
  const ElementId gens[] = {f.x, f.a, f.b};
  auto random_word = [&] {
    std::vector<SignedLetter> l;
    const int len = static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) l.push_back({gens[rng() % 3], rng() % 2 ? 1 : -1});
    return s.intern(s.reduce_word(l));
  };
  for (int i = 0; i < 500; ++i) {
    const ElementId u = random_word(), v = random_word(), w = random_word();
    CHECK(s.mul(s.mul(u, v), w) == s.mul(u, s.mul(v, w)));
    CHECK(s.mul(u, s.inv(u)) == kUnit);
    CHECK(s.inv(s.mul(u, v)) == s.mul(s.inv(v), s.inv(u)));
    CHECK(s.mul(u, kUnit) == u);
    const auto l = s.letters_of(u);
    for (std::size_t k = 1; k < l.size(); ++k) CHECK(l[k] != l[k - 1].inverse());
  }
}

TEST_CASE("vector structure") {
  Fixture f;
  auto& s = f.store;
  const ElementId xi = s.inv(f.x);
  s.register_basis(f.x);
  s.register_basis(xi);
  std::pair<Dyadic, ElementId> half[] = {{Dyadic(1, 1), f.x}, {Dyadic(1, 1), xi}};
  const ElementId g = s.combine(half);
  CHECK(s.render(g) == "1/2 x + 1/2 inv(x)");
  CHECK(s.convex_decomposition(g).has_value());
  CHECK(s.rank(g) == 1);
  CHECK(s.rank(f.x) == 0);

  std::pair<Dyadic, ElementId> cancel[] = {{Dyadic(1), f.x}, {Dyadic(-1), f.x}};
  CHECK(s.combine(cancel) == kUnit);
  std::pair<Dyadic, ElementId> one[] = {{Dyadic(1), f.x}};
  CHECK(s.combine(one) == f.x);
  std::pair<Dyadic, ElementId> nested[] = {{Dyadic(2), g}, {Dyadic(-1), xi}};
  CHECK(s.combine(nested) == f.x);

  std::pair<Dyadic, ElementId> diff[] = {{Dyadic(1), f.x}, {Dyadic(-1), xi}};
  const ElementId d = s.combine(diff);
  CHECK_FALSE(s.convex_decomposition(d).has_value());
  CHECK(s.rank(d) == 0);

  // Combinations over non-basis elements are rejected.
  std::pair<Dyadic, ElementId> bad[] = {{Dyadic(1), f.a}};
  CHECK_THROWS_AS(s.combine(bad), Error);
}

TEST_CASE("rank through inverse convex combinations") {
  Fixture f;
  auto& s = f.store;
  const ElementId xi = s.inv(f.x);
  s.register_basis(f.x);
  s.register_basis(xi);
  std::pair<Dyadic, ElementId> half[] = {{Dyadic(1, 1), f.x}, {Dyadic(1, 1), xi}};
  const ElementId g = s.combine(half);
  s.register_generator(g);
  const ElementId gi = s.inv(g);
  CHECK(s.inverse_convex_base(gi) == g);
  CHECK(s.rank(gi) == 1);
  s.register_basis(gi);
  CHECK_THROWS_AS(s.register_basis(g), Error);
  std::pair<Dyadic, ElementId> mix[] = {{Dyadic(1, 1), gi}, {Dyadic(1, 1), f.x}};
  CHECK(s.rank(s.combine(mix)) == 2);
}
