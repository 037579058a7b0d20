#pragma once

// Export document: the config echo, every interned element with its
// canonical term, the stages with their exact tables, and verification
// summaries. Keys appear in a fixed order and values are integers, so equal
// constructions serialize to identical bytes.
//
//   {
//     "format": "ubg-export/1",
//     "config": "<config file text>",
//     "elements": [{"id": 0, "term": {...}, "text": "e", "generator": false, "basis": false}, ...],
//     "stages": [{"index": 1, "kind": "word", "members": [...], "generators": [...],
//                 "basis": [...], "build": {...},
//                 "metric": [[id_a, id_b, num, den], ...]       (word stages, a before b)
//                 "norm":   [[id, num, den], ...]}, ...],        (vector stages)
//     "verification": [{"suite": ..., "attempted": ..., "failed": ..., "sampled": ..., "seed": ...}, ...]
//   }

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ubg/algebra.hpp"
#include "ubg/config.hpp"
#include "ubg/construction.hpp"
#include "ubg/error.hpp"
#include "ubg/report.hpp"
#include "ubg/stages.hpp"

namespace ubg {

using Json = nlohmann::ordered_json;

struct ExportSummary {
  std::string suite;
  std::uint64_t attempted = 0;
  std::uint64_t failed = 0;
  bool sampled = false;
  std::uint64_t seed = 0;

  static ExportSummary of(const VerificationReport& r) {
    return {r.suite, r.attempted, r.failed, r.sampled, r.seed};
  }
  friend bool operator==(const ExportSummary&, const ExportSummary&) = default;
};

namespace detail {

inline Json term_json(const ElementTerm& t) {
  Json j;
  switch (t.kind) {
    case TermKind::kUnit: j["kind"] = "unit"; break;
    case TermKind::kGen:
      j["kind"] = "gen";
      j["index"] = t.gen;
      break;
    case TermKind::kWord: {
      j["kind"] = "word";
      Json letters = Json::array();
      for (const auto& l : t.letters) letters.push_back({l.base, l.sign});
      j["letters"] = std::move(letters);
      break;
    }
    case TermKind::kCombo: {
      j["kind"] = "combo";
      Json entries = Json::array();
      for (const auto& e : t.combo) entries.push_back({e.basis, e.coef.num(), e.coef.log2den()});
      j["entries"] = std::move(entries);
      break;
    }
  }
  return j;
}

inline ElementTerm term_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "unit") return ElementTerm::unit();
  if (kind == "gen") return ElementTerm::generator(j.at("index").get<int>());
  if (kind == "word") {
    std::vector<SignedLetter> letters;
    for (const auto& l : j.at("letters")) letters.push_back({l.at(0).get<ElementId>(), l.at(1).get<int>()});
    return ElementTerm::word(std::move(letters));
  }
  if (kind == "combo") {
    Vector v;
    for (const auto& e : j.at("entries")) {
      v.push_back({e.at(0).get<ElementId>(), Dyadic(e.at(1).get<std::int64_t>(), e.at(2).get<int>())});
    }
    return ElementTerm::combination(std::move(v));
  }
  throw Error(ErrorKind::kIo, "unknown term kind '" + kind + "'");
}

}  // namespace detail

inline Json export_json(const Construction& c, const std::vector<ExportSummary>& verification = {}) {
  Json doc;
  doc["format"] = "ubg-export/1";
  doc["config"] = c.cfg.str();
  Json elements = Json::array();
  for (ElementId id = 0; id < c.store.size(); ++id) {
    Json e;
    e["id"] = id;
    e["term"] = detail::term_json(c.store.term(id));
    e["text"] = c.store.render(id);
    e["generator"] = c.store.is_generator(id);
    e["basis"] = c.store.is_basis(id);
    elements.push_back(std::move(e));
  }
  doc["elements"] = std::move(elements);

  Json stages = Json::array();
  for (std::size_t k = 0; k < c.stages.size(); ++k) {
    const Stage& s = c.stages[k];
    Json j;
    j["index"] = s.index;
    j["kind"] = s.is_word() ? "word" : "vector";
    j["members"] = s.members;
    j["generators"] = s.generators;
    j["basis"] = s.basis;
    if (k < c.info.size()) {
      const auto& bi = c.info[k];
      j["build"] = {{"ambient", bi.ambient},     {"molecules", bi.molecules}, {"lp_solved", bi.lp_solved},
                    {"sweeps", bi.sweeps},       {"scale", bi.scale}};
    }
    Json table = Json::array();
    const std::size_t n = s.size();
    if (s.is_word()) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          const Rational& r = s.rho_at(a, b);
          table.push_back({s.members[a], s.members[b], r.num(), r.den()});
        }
      }
      j["metric"] = std::move(table);
    } else {
      for (std::size_t a = 0; a < n; ++a) table.push_back({s.members[a], s.norm[a].num(), s.norm[a].den()});
      j["norm"] = std::move(table);
    }
    stages.push_back(std::move(j));
  }
  doc["stages"] = std::move(stages);

  Json ver = Json::array();
  for (const auto& v : verification) {
    ver.push_back({{"suite", v.suite}, {"attempted", v.attempted}, {"failed", v.failed}, {"sampled", v.sampled},
                   {"seed", v.seed}});
  }
  doc["verification"] = std::move(ver);
  return doc;
}

inline std::string export_string(const Construction& c, const std::vector<ExportSummary>& verification = {}) {
  return export_json(c, verification).dump() + "\n";
}

inline void export_tables(const Construction& c, const std::string& path,
                          const std::vector<ExportSummary>& verification = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  out << export_string(c, verification);
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path + "' failed");
}

struct ImportedDocument {
  Construction construction;
  std::vector<ExportSummary> verification;
};

inline ImportedDocument import_json(const Json& doc) {
  if (doc.value("format", "") != "ubg-export/1") throw Error(ErrorKind::kIo, "not a ubg export document");
  ImportedDocument out;
  Construction& c = out.construction;
  c.cfg = Config::parse(doc.at("config").get<std::string>());
  for (const auto& e : doc.at("elements")) {
    const auto id = e.at("id").get<ElementId>();
    const ElementTerm t = detail::term_from_json(e.at("term"));
    if (id == kUnit) {
      if (t.kind != TermKind::kUnit) throw Error(ErrorKind::kIo, "element 0 must be the unit");
    } else if (c.store.intern(t) != id) {
      throw Error(ErrorKind::kIo, "element ids are not in interning order at id " + std::to_string(id));
    }
    if (e.at("generator").get<bool>()) c.store.register_generator(id);
    if (e.at("basis").get<bool>()) c.store.register_basis(id);
  }
  for (const auto& j : doc.at("stages")) {
    Stage s;
    s.index = j.at("index").get<int>();
    s.kind = j.at("kind").get<std::string>() == "word" ? StageKind::kWord : StageKind::kVector;
    s.members = j.at("members").get<std::vector<ElementId>>();
    s.generators = j.at("generators").get<std::vector<ElementId>>();
    s.basis = j.at("basis").get<std::vector<ElementId>>();
    s.index_members();
    if (c.stages.empty()) {
      s.new_members = s.members;
    } else {
      detail::fill_new_members(s, c.stages.back());
    }
    const std::size_t n = s.size();
    if (s.is_word()) {
      s.rho.assign(n * n, Rational(0));
      for (const auto& e : j.at("metric")) {
        const auto a = s.pos(e.at(0).get<ElementId>()), b = s.pos(e.at(1).get<ElementId>());
        const Rational r(e.at(2).get<std::int64_t>(), e.at(3).get<std::int64_t>());
        s.rho[a * n + b] = s.rho[b * n + a] = r;
      }
    } else {
      s.norm.assign(n, Rational(0));
      for (const auto& e : j.at("norm")) {
        s.norm[s.pos(e.at(0).get<ElementId>())] = Rational(e.at(1).get<std::int64_t>(), e.at(2).get<std::int64_t>());
      }
    }
    s.sealed = true;
    StageBuildInfo bi;
    bi.index = s.index;
    bi.kind = s.kind;
    bi.members = n;
    if (j.contains("build")) {
      const auto& b = j.at("build");
      bi.ambient = b.at("ambient").get<std::size_t>();
      bi.molecules = b.at("molecules").get<std::size_t>();
      bi.lp_solved = b.at("lp_solved").get<std::size_t>();
      bi.sweeps = b.at("sweeps").get<std::size_t>();
      bi.scale = b.at("scale").get<std::int64_t>();
    }
    c.info.push_back(bi);
    c.stages.push_back(std::move(s));
  }
  for (const auto& v : doc.at("verification")) {
    out.verification.push_back({v.at("suite").get<std::string>(), v.at("attempted").get<std::uint64_t>(),
                                v.at("failed").get<std::uint64_t>(), v.at("sampled").get<bool>(),
                                v.at("seed").get<std::uint64_t>()});
  }
  return out;
}

inline ImportedDocument import_tables(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kIo, "malformed export document '" + path + "': " + e.what());
  }
  return import_json(doc);
}

}  // namespace ubg
