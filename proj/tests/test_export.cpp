#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "ubg/export.hpp"
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

std::vector<ExportSummary> summaries(const std::vector<VerificationReport>& reps) {
  std::vector<ExportSummary> out;
  for (const auto& r : reps) out.push_back(ExportSummary::of(r));
  return out;
}

}  // namespace

TEST_CASE("stage 1 export") {
  const auto c = build(Config::literal(1));
  const Json doc = export_json(c);
  const auto& s1 = doc["stages"][1];
  CHECK(s1["members"].size() == 3);
  CHECK(s1["metric"].size() == 3);
  for (const auto& e : s1["metric"]) {
    CHECK(e.size() == 4);
    CHECK(e[2].get<std::int64_t>() > 0);
  }
  CHECK(doc["format"] == "ubg-export/1");
}

TEST_CASE("export round trip is byte-identical and re-verifies identically") {
  auto c = build(micro(4));
  const auto ver = summaries(check_conditions(c));
  const std::string text = export_string(c, ver);
  auto imported = import_json(Json::parse(text));
  CHECK(export_string(imported.construction, imported.verification) == text);
  CHECK(imported.verification == ver);
  CHECK(summaries(check_conditions(imported.construction)) == ver);
  CHECK(imported.construction.stages.size() == c.stages.size());
  CHECK(imported.construction.stage(4).norm == c.stage(4).norm);
  CHECK(imported.construction.stage(3).rho == c.stage(3).rho);
}

TEST_CASE("export file round trip and determinism") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string p1 = (dir / "ubg_test_a.json").string(), p2 = (dir / "ubg_test_b.json").string();
  export_tables(build(micro(3)), p1);
  export_tables(build(micro(3)), p2);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(p1) == slurp(p2));
  const auto back = import_tables(p1);
  CHECK(export_string(back.construction) == slurp(p1));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("export I/O errors") {
  const auto c = build(Config::literal(1));
  try {
    export_tables(c, "/nonexistent-dir/out.json");
    FAIL("expected I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
  CHECK_THROWS_AS(import_tables("/nonexistent-dir/in.json"), Error);
  const auto bad = (std::filesystem::temp_directory_path() / "ubg_bad.json").string();
  {
    std::ofstream out(bad);
    out << "{not json";
  }
  try {
    import_tables(bad);
    FAIL("expected I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
  CHECK_THROWS_AS(import_json(Json::parse(R"({"format": "other"})")), Error);
  std::remove(bad.c_str());
}
