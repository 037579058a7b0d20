#include <catch_amalgamated.hpp>

#include "ubg/config.hpp"

using namespace ubg;

TEST_CASE("default config is the desk configuration") {
  Config c;
  CHECK(c.stage_count == 3);
  CHECK(c.word_cap == 2);
  CHECK(c.scalars_for(1).size() == 5);
  CHECK(c.targets.size() == 3);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config round trips through its text form") {
  Config c;
  c.stage_count = 4;
  c.scalar_set = {Dyadic(1), Dyadic(0), Dyadic(-1)};
  c.word_cap = 1;
  c.seed = 99;
  c.targets = {TargetSpace::parse("euclid:1,2,-1/2")};
  const Config d = Config::parse(c.str());
  CHECK(d.str() == c.str());
  CHECK(d.seed == 99);
  CHECK(d.targets[0].kind == NormKind::kEuclidean);
  CHECK(d.targets[0].dimension() == 3);

  const Config p = Config::parse(Config::literal().str());
  CHECK(p.literal_scalars);
  CHECK(p.literal_word_cap);
  CHECK(p.str() == Config::literal().str());
}

TEST_CASE("literal scalar sets and word caps") {
  CHECK(Config::literal_scalar_set(1).size() == 9);
  CHECK(Config::literal_scalar_set(2).size() == 33);
  CHECK(Config::literal_scalar_set(1).front() == Dyadic(-2));
  const Config p = Config::literal();
  CHECK(p.word_cap_for(0) == 1);
  CHECK(p.word_cap_for(1) == 3);
  Config d;
  CHECK(d.word_cap_for(0) == 1);
  CHECK(d.word_cap_for(1) == 2);
}

TEST_CASE("config errors") {
  auto kind = [](const std::string& text) {
    try {
      Config::parse(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  CHECK(kind("stage_count = 0") == ErrorKind::kConfig);
  CHECK(kind("bogus = 1") == ErrorKind::kConfig);
  CHECK(kind("no equals sign") == ErrorKind::kConfig);
  CHECK(kind("scalar_set = 0, 1") == ErrorKind::kConfig);
  CHECK(kind("scalar_set = -1, 0, 1, 1/3, -1/3") == ErrorKind::kScalarDomain);
  CHECK(kind("targets = abs:1,2") == ErrorKind::kConfig);
  CHECK(kind("word_cap = 1/2") == ErrorKind::kConfig);
  CHECK_THROWS_AS(Config::load("/nonexistent/ubg.cfg"), Error);
  CHECK(Config::parse("# comment\n\nseed = 5  # trailing\n").seed == 5);
}
