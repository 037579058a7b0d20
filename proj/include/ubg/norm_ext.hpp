#pragma once

// ||.||_{n+1} on a vector stage X_{n+1} from rho_n on the word stage X_n:
// the auxiliary function gamma (base values, the molecule LP, and the
// inverse-convex recursion), then the greatest function below gamma
// satisfying the norm rules (a)-(c).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/config.hpp"
#include "ubg/error.hpp"
#include "ubg/lp.hpp"
#include "ubg/rational.hpp"
#include "ubg/relax.hpp"
#include "ubg/report.hpp"
#include "ubg/scaled.hpp"
#include "ubg/stages.hpp"

namespace ubg {

/// Coordinates of a full vector stage V_K(B): member m has digit d_s(m) =
/// position of its coefficient at basis slot s in the sorted scalar list,
/// and members are numbered in mixed radix (last slot fastest), which is
/// the enumeration order of the stage.
class VectorCoords {
 public:
  VectorCoords(const ElementStore& store, const Stage& stage, std::vector<Dyadic> scalars)
      : basis_(stage.basis), scalars_(std::move(scalars)) {
    std::sort(basis_.begin(), basis_.end());
    std::sort(scalars_.begin(), scalars_.end());
    scalars_.erase(std::unique(scalars_.begin(), scalars_.end()), scalars_.end());
    radix_ = static_cast<int>(scalars_.size());
    const std::size_t B = basis_.size();
    zero_digit_ = digit_of(Dyadic(0));
    if (zero_digit_ < 0) throw Error(ErrorKind::kConfig, "scalar set without 0");
    digits_.assign(stage.size() * B, static_cast<std::uint8_t>(zero_digit_));
    place_.assign(B, 1);
    for (std::size_t s = B; s-- > 1;) place_[s - 1] = place_[s] * radix_;
    for (std::size_t m = 0; m < stage.size(); ++m) {
      for (const auto& e : store.vector_of(stage.members[m])) {
        int slot = slot_of(e.basis);
        int d = digit_of(e.coef);
        if (slot < 0 || d < 0) throw Error(ErrorKind::kInvariantViolation, "stage member outside V_K(B)");
        digits_[m * B + slot] = static_cast<std::uint8_t>(d);
      }
      std::int64_t idx = 0;
      for (std::size_t s = 0; s < B; ++s) idx += digits_[m * B + s] * place_[s];
      if (idx != static_cast<std::int64_t>(m)) {
        throw Error(ErrorKind::kInvariantViolation, "vector stage is not in mixed-radix order");
      }
    }
  }

  std::size_t dims() const { return basis_.size(); }
  const std::vector<ElementId>& basis() const { return basis_; }
  const std::vector<Dyadic>& scalars() const { return scalars_; }

  int slot_of(ElementId b) const {
    auto it = std::lower_bound(basis_.begin(), basis_.end(), b);
    return it != basis_.end() && *it == b ? static_cast<int>(it - basis_.begin()) : -1;
  }
  int digit_of(const Dyadic& d) const {
    auto it = std::lower_bound(scalars_.begin(), scalars_.end(), d);
    return it != scalars_.end() && *it == d ? static_cast<int>(it - scalars_.begin()) : -1;
  }

  /// Table for alpha*u + beta*v digit by digit (-1 where it leaves K).
  std::vector<std::int8_t> combine_table(const Dyadic& alpha, const Dyadic& beta) const {
    std::vector<std::int8_t> t(radix_ * radix_);
    for (int a = 0; a < radix_; ++a) {
      for (int b = 0; b < radix_; ++b) {
        t[a * radix_ + b] = static_cast<std::int8_t>(digit_of(alpha * scalars_[a] + beta * scalars_[b]));
      }
    }
    return t;
  }

  /// Member index of the combination given by a combine_table, or -1.
  std::int64_t combine(const std::vector<std::int8_t>& table, std::size_t u, std::size_t v) const {
    const std::size_t B = basis_.size();
    const std::uint8_t* du = &digits_[u * B];
    const std::uint8_t* dv = &digits_[v * B];
    std::int64_t idx = 0;
    for (std::size_t s = 0; s < B; ++s) {
      const int d = table[du[s] * radix_ + dv[s]];
      if (d < 0) return -1;
      idx += d * place_[s];
    }
    return idx;
  }

  /// Member index after adding `delta` to the coefficient at `slot`.
  std::int64_t shift(std::size_t u, int slot, const Dyadic& delta) const {
    const std::size_t B = basis_.size();
    int d = digit_of(scalars_[digits_[u * B + slot]] + delta);
    if (d < 0) return -1;
    return static_cast<std::int64_t>(u) + (d - digits_[u * B + slot]) * place_[slot];
  }

 private:
  std::vector<ElementId> basis_;
  std::vector<Dyadic> scalars_;
  int radix_ = 0;
  int zero_digit_ = 0;
  std::vector<std::uint8_t> digits_;
  std::vector<std::int64_t> place_;
};

namespace detail {

using VectorKey = std::vector<std::tuple<ElementId, std::int64_t, int>>;

/// Canonical coordinates of a vector, negated so the first coefficient is
/// positive (the molecule program is symmetric under v -> -v).
inline VectorKey sign_folded_key(const ElementStore& store, Vector v) {
  auto t = store.term_of_vector(std::move(v));
  Vector c;
  if (t.kind == TermKind::kCombo) {
    c = std::move(t.combo);
  } else if (t.kind != TermKind::kUnit) {
    c = {ComboEntry{*store.find(t), Dyadic(1)}};
  }
  const bool flip = !c.empty() && c.front().coef.sign() < 0;
  VectorKey key;
  for (const auto& e : c) {
    const Dyadic d = flip ? -e.coef : e.coef;
    key.emplace_back(e.basis, d.num(), d.log2den());
  }
  return key;
}

inline Vector key_vector(const VectorKey& key) {
  Vector v;
  for (const auto& [b, num, k] : key) v.push_back({b, Dyadic(num, k)});
  return v;
}

}  // namespace detail

/// Elementary differences a - b, a, b in the word stage, deduplicated up to
/// sign with the least cost rho_n(a, b).
inline std::vector<Molecule> molecules_of(const ElementStore& store, const Stage& word_stage) {
  std::map<detail::VectorKey, Rational> best;
  std::vector<Vector> vecs;
  for (auto id : word_stage.members) vecs.push_back(store.vector_of(id));
  for (std::size_t i = 0; i < word_stage.size(); ++i) {
    for (std::size_t j = 0; j < word_stage.size(); ++j) {
      if (i == j) continue;
      Vector v = vecs[i];
      for (const auto& e : vecs[j]) v.push_back({e.basis, -e.coef});
      auto key = detail::sign_folded_key(store, std::move(v));
      if (key.empty()) continue;
      const Rational& r = word_stage.rho_at(i, j);
      auto [it, fresh] = best.emplace(std::move(key), r);
      if (!fresh && r < it->second) it->second = r;
    }
  }
  std::vector<Molecule> out;
  for (const auto& [key, cost] : best) out.push_back({detail::key_vector(key), cost});
  return out;
}

/// gamma clause values for a vector stage.
class Gamma {
 public:
  Gamma(ElementStore& store, const Stage& prev) : store_(&store), prev_(&prev) {
    molecules_ = molecules_of(store, prev);
  }

  const std::vector<Molecule>& molecules() const { return molecules_; }
  std::size_t lp_solved() const { return memo_.size(); }

  /// gamma(x - y) = rho_n(x, y) for x, y in X_n.
  Rational base(ElementId x, ElementId y) const { return prev_->metric(x, y); }

  /// Molecule program value for a difference vector (memoized, sign-folded).
  Rational lp(Vector v) {
    auto key = detail::sign_folded_key(*store_, std::move(v));
    if (key.empty()) return Rational(0);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Rational r = solve_molecule_lp(molecules_, detail::key_vector(key));
    memo_.emplace(std::move(key), r);
    return r;
  }

  /// Clause value for the representation x - y with x new at this stage:
  /// the molecule program when r(y) = 0, the inverse-convex recursion when
  /// y = (a_1 z_1 + ... + a_m z_m)^{-1}; nullopt when no clause applies.
  std::optional<Rational> pair(ElementId x, ElementId y) {
    if (y != kUnit && !store_->is_basis(y)) return std::nullopt;
    if (store_->rank(y) == 0) return lp(difference(x, y));
    auto base_id = store_->inverse_convex_base(y);
    if (!base_id) return std::nullopt;
    Rational sum;
    for (const auto& e : *store_->convex_decomposition(*base_id)) {
      auto zi = store_->inv(e.basis);
      auto v = pair(x, zi);
      if (!v) return std::nullopt;
      sum += e.coef.to_rational() * *v;
    }
    return sum;
  }

  Vector difference(ElementId x, ElementId y) const {
    std::pair<Dyadic, ElementId> t[2] = {{Dyadic(1), x}, {Dyadic(-1), y}};
    auto term = store_->linear_combination(t);
    if (term.kind == TermKind::kUnit) return {};
    if (term.kind == TermKind::kCombo) return term.combo;
    return {ComboEntry{*store_->find(term), Dyadic(1)}};
  }

 private:
  ElementStore* store_;
  const Stage* prev_;
  std::vector<Molecule> molecules_;
  std::map<detail::VectorKey, Rational> memo_;
};

// ---- relaxation system -------------------------------------------------------------

class NormSystem {
 public:
  using value_type = std::int64_t;

  struct Combination {
    Dyadic alpha, beta;
    std::vector<std::int8_t> table;
  };
  struct ConvexRule {
    std::uint32_t target;
    int shift;
    std::vector<std::pair<std::int64_t, std::uint32_t>> terms;
  };

  NormSystem(const VectorCoords& coords, std::size_t size, std::vector<std::int64_t> init,
             std::vector<Combination> combos, std::vector<ConvexRule> convex)
      : coords_(&coords), size_(size), init_(std::move(init)), combos_(std::move(combos)),
        convex_(std::move(convex)) {}

  std::vector<std::int64_t> initial() const { return init_; }

  void sweep(const std::vector<std::int64_t>& cur, std::vector<std::int64_t>& next) const {
    // (b) ||alpha u + beta v|| <= |alpha| ||u|| + |beta| ||v||
    for (const auto& c : combos_) {
      const int k = std::max(c.alpha.log2den(), c.beta.log2den());
      const std::int64_t a = std::abs(c.alpha.num()) << (k - c.alpha.log2den());
      const std::int64_t b = std::abs(c.beta.num()) << (k - c.beta.log2den());
      for (std::size_t u = 0; u < size_; ++u) {
        if (cur[u] >= kInfScaled) continue;
        for (std::size_t v = 0; v < size_; ++v) {
          if (cur[v] >= kInfScaled) continue;
          const std::int64_t w = coords_->combine(c.table, u, v);
          if (w < 0) continue;
          detail::i128 sum = static_cast<detail::i128>(a) * cur[u] + static_cast<detail::i128>(b) * cur[v];
          if ((sum & ((detail::i128{1} << k) - 1)) != 0) {
            throw Error(ErrorKind::kScaleExhausted, "homogeneity rule needs a finer scale");
          }
          next[w] = std::min(next[w], static_cast<std::int64_t>(sum >> k));
        }
      }
    }
    // (c) inverse convexity
    for (const auto& r : convex_) {
      detail::i128 sum = 0;
      bool finite = true;
      for (const auto& [num, idx] : r.terms) {
        if (cur[idx] >= kInfScaled) {
          finite = false;
          break;
        }
        sum += static_cast<detail::i128>(num) * cur[idx];
      }
      if (!finite) continue;
      if ((sum & ((detail::i128{1} << r.shift) - 1)) != 0) {
        throw Error(ErrorKind::kScaleExhausted, "inverse-convexity rule needs a finer scale");
      }
      next[r.target] = std::min(next[r.target], static_cast<std::int64_t>(sum >> r.shift));
    }
  }

 private:
  const VectorCoords* coords_;
  std::size_t size_;
  std::vector<std::int64_t> init_;
  std::vector<Combination> combos_;
  std::vector<ConvexRule> convex_;
};

// ---- stage tables ----------------------------------------------------------------

struct NormBuildInfo {
  std::size_t molecules = 0;
  std::size_t lp_solved = 0;
  std::size_t sweeps = 0;
  std::int64_t scale = 1;
  double seconds = 0;
};

/// Multipliers used by rule (b): nonzero scalars and their dyadic inverses.
inline std::vector<Dyadic> rule_multipliers(const std::vector<Dyadic>& scalars) {
  std::vector<Dyadic> out;
  for (const auto& s : scalars) {
    if (s.is_zero()) continue;
    out.push_back(s);
    // 1 / (a / 2^k) is dyadic only for a = +-2^j.
    std::int64_t a = std::abs(s.num());
    if ((a & (a - 1)) == 0) {
      int j = 0;
      while ((std::int64_t{1} << j) != a) ++j;
      out.push_back(Dyadic(s.sign() * (std::int64_t{1} << s.log2den()), j));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Initial upper bounds gamma over the stage (scaled later); nullopt where
/// no clause applies.
inline std::vector<Bound> gamma_table(ElementStore& store, const Stage& stage, const Stage& prev,
                                      const VectorCoords& coords, Gamma& gamma) {
  const std::size_t n = stage.size();
  std::vector<Bound> g(n);
  // gamma(x - y) = rho_n(x, y) for x, y in X_n
  for (std::size_t i = 0; i < prev.size(); ++i) {
    for (std::size_t j = 0; j < prev.size(); ++j) {
      auto v = gamma.difference(prev.members[i], prev.members[j]);
      auto id = store.find(store.term_of_vector(v));
      if (!id || !stage.contains(*id)) continue;
      g[stage.pos(*id)] = bound_min(g[stage.pos(*id)], prev.rho_at(i, j));
    }
  }
  // Molecule program for v = x - y with x new and r(y) = 0.
  std::vector<std::size_t> fresh;
  for (auto id : stage.new_members) fresh.push_back(stage.pos(id));
  auto minus = coords.combine_table(Dyadic(1), Dyadic(-1));
  for (std::size_t v = 0; v < n; ++v) {
    bool qualifies = !prev.contains(stage.members[v]);  // x = v, y = e
    for (std::size_t k = 0; !qualifies && k < fresh.size(); ++k) {
      auto y = coords.combine(minus, fresh[k], v);
      qualifies = y >= 0 && store.rank(stage.members[y]) == 0;
    }
    if (qualifies) g[v] = bound_min(g[v], gamma.lp(store.vector_of(stage.members[v])));
  }
  // Inverse-convex recursion for x new, y = (convex)^{-1}.
  for (std::size_t y = 0; y < n; ++y) {
    if (!store.inverse_convex_base(stage.members[y])) continue;
    for (auto x : fresh) {
      auto v = coords.combine(minus, x, y);
      if (v < 0) continue;
      if (auto val = gamma.pair(stage.members[x], stage.members[y])) g[v] = bound_min(g[v], *val);
    }
  }
  return g;
}

/// Attaches ||.|| to the vector stage `stage` (= X_{n+1}) given the sealed
/// word stage `prev` (= X_n).
inline NormBuildInfo norm_extend(ElementStore& store, Stage& stage, const Stage& prev,
                                 const Config& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  if (stage.is_word() || !prev.is_word() || prev.index + 1 != stage.index || !prev.sealed) {
    throw Error(ErrorKind::kConfig, "norm_extend needs a vector stage and its sealed predecessor");
  }
  const std::size_t n = stage.size();
  VectorCoords coords(store, stage, cfg.scalars_for(stage.index / 2));
  Gamma gamma(store, prev);
  std::vector<Bound> g = gamma_table(store, stage, prev, coords, gamma);

  NormBuildInfo info;
  info.molecules = gamma.molecules().size();
  info.lp_solved = gamma.lp_solved();
  std::vector<Rational> finite;
  for (const auto& b : g) {
    if (b) finite.push_back(*b);
  }
  info.scale = common_scale(finite);
  std::vector<std::int64_t> init(n, kInfScaled);
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i]) init[i] = to_scaled(*g[i], info.scale);
  }
  init[stage.pos(kUnit)] = 0;

  std::vector<NormSystem::Combination> combos;
  const auto mult = rule_multipliers(coords.scalars());
  for (const auto& a : mult) {
    for (const auto& b : mult) {
      if (b.sign() > 0) combos.push_back({a, b, coords.combine_table(a, b)});
    }
  }
  std::vector<NormSystem::ConvexRule> convex;
  for (std::size_t y = 0; y < n; ++y) {
    auto base_id = store.inverse_convex_base(stage.members[y]);
    if (!base_id) continue;
    auto conv = scaled_convex(store, *base_id);
    const int yslot = coords.slot_of(stage.members[y]);
    for (std::size_t x = 0; x < n; ++x) {
      auto target = coords.shift(x, yslot, Dyadic(-1));
      if (target < 0) continue;
      NormSystem::ConvexRule rule{static_cast<std::uint32_t>(target), conv->shift, {}};
      bool inside = true;
      for (const auto& [num, z] : conv->terms) {
        const int zslot = coords.slot_of(store.inv(z));
        auto idx = zslot < 0 ? -1 : coords.shift(x, zslot, Dyadic(-1));
        if (idx < 0) {
          inside = false;
          break;
        }
        rule.terms.emplace_back(num, static_cast<std::uint32_t>(idx));
      }
      if (inside) convex.push_back(std::move(rule));
    }
  }

  NormSystem sys(coords, n, std::move(init), std::move(combos), std::move(convex));
  auto out = relax_fixpoint_generic(sys, default_sweep_cap(n, cfg.sweep_cap_factor));
  info.sweeps = out.sweeps;

  stage.norm.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t v = out.values[i];
    if (v >= kInfScaled) {
      throw Error(ErrorKind::kInvariantViolation, "norm_" + std::to_string(stage.index) +
                                                      " left unconstrained at " + store.render(stage.members[i]));
    }
    if ((v == 0) != (stage.members[i] == kUnit)) {
      throw Error(ErrorKind::kInvariantViolation,
                  "norm_" + std::to_string(stage.index) + " vanishes at " + store.render(stage.members[i]));
    }
    stage.norm[i] = Rational(v, info.scale);
  }
  stage.sealed = true;
  info.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return info;
}

/// ||a - b||_{n+1} = rho_n(a, b) for all a, b in X_n whose difference lies
/// in the stage.
inline VerificationReport check_extension_norm(ElementStore& store, const Stage& stage,
                                               const Stage& prev) {
  VerificationReport rep;
  rep.suite = "extension norm_" + std::to_string(stage.index) + " / rho_" + std::to_string(prev.index);
  std::uint64_t outside = 0;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    for (std::size_t j = 0; j < prev.size(); ++j) {
      const ElementId a = prev.members[i], b = prev.members[j];
      std::pair<Dyadic, ElementId> t[2] = {{Dyadic(1), a}, {Dyadic(-1), b}};
      auto id = store.find(store.linear_combination(t));
      if (!id || !stage.contains(*id)) {
        ++outside;
        continue;
      }
      const Rational& nv = stage.norm_of(*id);
      const Rational& rv = prev.rho_at(i, j);
      rep.check(nv == rv, "(2)", {a, b}, [&] {
        return "norm of difference = " + nv.str() + " but rho = " + rv.str() + " for " + store.render(a) +
               " , " + store.render(b);
      });
    }
  }
  if (outside) rep.notes.push_back(std::to_string(outside) + " pairs have a difference outside the stage");
  return rep;
}

}  // namespace ubg
