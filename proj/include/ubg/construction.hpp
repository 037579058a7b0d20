#pragma once

// The stage chain X_0, X_1, ..., X_{stage_count} with its value tables.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/config.hpp"
#include "ubg/error.hpp"
#include "ubg/metric_ext.hpp"
#include "ubg/norm_ext.hpp"
#include "ubg/stages.hpp"

namespace ubg {

struct StageBuildInfo {
  int index = 0;
  StageKind kind = StageKind::kWord;
  std::size_t members = 0;
  std::size_t ambient = 0;  // word stages
  std::size_t molecules = 0;  // vector stages
  std::size_t lp_solved = 0;
  std::size_t sweeps = 0;
  std::int64_t scale = 1;
  double seconds = 0;
};

struct Construction {
  Config cfg;
  ElementStore store;
  std::vector<Stage> stages;
  std::vector<StageBuildInfo> info;

  const Stage& top() const { return stages.back(); }
  int top_index() const { return static_cast<int>(stages.size()) - 1; }

  const Stage& stage(int n) const {
    if (n < 0 || n > top_index()) {
      throw Error(ErrorKind::kNotBuilt, "X_" + std::to_string(n) + " has not been built");
    }
    return stages[n];
  }

  /// First built stage containing `a`; kOutOfUniverse otherwise.
  int first_stage_of(ElementId a) const {
    if (auto n = first_stage(stages, a)) return *n;
    throw Error(ErrorKind::kOutOfUniverse, store.render(a) + " is outside X_" + std::to_string(top_index()));
  }

  /// rho(a, b) from the first word stage holding both.
  std::pair<Rational, int> distance(ElementId a, ElementId b) const {
    for (const auto& s : stages) {
      if (s.is_word() && s.contains(a) && s.contains(b)) return {s.metric(a, b), s.index};
    }
    throw Error(ErrorKind::kOutOfUniverse, "no built word stage holds both " + store.render(a) + " and " +
                                               store.render(b));
  }

  /// ||a|| from the first vector stage holding it (stage 0 counts: ||e|| = 0).
  std::pair<Rational, int> norm(ElementId a) const {
    for (const auto& s : stages) {
      if (s.index > 0 && !s.is_word() && s.contains(a)) return {s.norm_of(a), s.index};
    }
    if (a == kUnit) return {Rational(0), 0};
    throw Error(ErrorKind::kOutOfUniverse, "no built vector stage holds " + store.render(a));
  }
};

using BuildProgress = std::function<void(const StageBuildInfo&)>;

/// Builds X_0 .. X_{cfg.stage_count}; each stage is sealed before the next
/// one starts.
inline Construction build(const Config& cfg, const BuildProgress& progress = {}) {
  cfg.validate();
  Construction c;
  c.cfg = cfg;
  c.stages.reserve(cfg.stage_count + 1);
  c.stages.push_back(make_stage0());
  c.info.push_back({0, StageKind::kVector, 1, 0, 0, 0, 0, 1, 0});
  for (int n = 1; n <= cfg.stage_count; ++n) {
    const Stage& prev = c.stages[n - 1];
    StageBuildInfo info;
    info.index = n;
    if (n % 2 == 1) {
      Stage s = make_word_stage(c.store, prev, n >= 2 ? &c.stages[n - 2] : nullptr, cfg);
      auto mi = rho_extend(c.store, s, prev, cfg);
      info.kind = StageKind::kWord;
      info.members = s.size();
      info.ambient = mi.ambient_size;
      info.sweeps = mi.sweeps;
      info.scale = mi.scale;
      info.seconds = mi.seconds;
      c.stages.push_back(std::move(s));
    } else {
      Stage s = make_vector_stage(c.store, prev, c.stages[n - 2], cfg);
      auto ni = norm_extend(c.store, s, prev, cfg);
      info.kind = StageKind::kVector;
      info.members = s.size();
      info.molecules = ni.molecules;
      info.lp_solved = ni.lp_solved;
      info.sweeps = ni.sweeps;
      info.scale = ni.scale;
      info.seconds = ni.seconds;
      c.stages.push_back(std::move(s));
    }
    c.info.push_back(info);
    if (progress) progress(info);
  }
  return c;
}

}  // namespace ubg
