#pragma once

// Greatest nonnegative function below given bounds that satisfies a set of
// downward-closure rules, computed by synchronous sweeps to a fixpoint.
//
// The engine is generic over a System type providing
//   using value_type = ...;
//   std::vector<value_type> initial() const;
//   void sweep(const std::vector<value_type>& cur, std::vector<value_type>& next);
// where sweep lowers entries of `next` (a copy of `cur`) using rule bounds
// evaluated on `cur` only. Updates therefore commit between sweeps and the
// result does not depend on the order in which rules are visited.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ubg/error.hpp"
#include "ubg/rational.hpp"

namespace ubg {

template <typename V>
struct RelaxOutcome {
  std::vector<V> values;
  std::size_t sweeps = 0;
};

template <typename System>
RelaxOutcome<typename System::value_type> relax_fixpoint_generic(
    System& sys, std::size_t sweep_cap,
    const std::function<void(std::size_t, const std::vector<typename System::value_type>&)>&
        on_sweep = {}) {
  using V = typename System::value_type;
  std::vector<V> cur = sys.initial();
  std::vector<V> next;
  for (std::size_t sweep = 1;; ++sweep) {
    next = cur;
    sys.sweep(cur, next);
    if (on_sweep) on_sweep(sweep, next);
    if (next == cur) return {std::move(cur), sweep};
    if (sweep >= sweep_cap) {
      throw Error(ErrorKind::kNonConvergence,
                  "no fixpoint after " + std::to_string(sweep) + " sweeps");
    }
    std::swap(cur, next);
  }
}

// ---- explicit constraint systems ----------------------------------------------

struct Rule {
  enum class Kind { kEquality, kUpperCombo };

  Kind kind = Kind::kUpperCombo;
  std::size_t target = 0;
  std::size_t other = 0;                                  // kEquality
  std::vector<std::pair<Rational, std::size_t>> terms;    // kUpperCombo

  static Rule equality(std::size_t i, std::size_t j) {
    Rule r;
    r.kind = Kind::kEquality;
    r.target = i;
    r.other = j;
    return r;
  }
  static Rule upper(std::size_t i, std::vector<std::pair<Rational, std::size_t>> terms) {
    Rule r;
    r.kind = Kind::kUpperCombo;
    r.target = i;
    r.terms = std::move(terms);
    return r;
  }
};

/// f(target) <= sum c_k f(j_k); +infinity if any positively weighted term is.
inline Bound combo_bound(const std::vector<std::pair<Rational, std::size_t>>& terms,
                         const std::vector<Bound>& f) {
  Rational sum;
  for (const auto& [c, j] : terms) {
    if (c.is_zero()) continue;
    if (!f[j]) return std::nullopt;
    sum += c * *f[j];
  }
  return sum;
}

struct ConstraintSystem {
  std::vector<Bound> bounds;
  std::vector<Rule> rules;

  std::size_t size() const { return bounds.size(); }

  void validate() const {
    for (const auto& b : bounds) {
      if (b && b->sign() < 0) throw Error(ErrorKind::kConfig, "negative initial bound");
    }
    for (const auto& r : rules) {
      if (r.target >= size()) throw Error(ErrorKind::kConfig, "rule target out of range");
      if (r.kind == Rule::Kind::kEquality) {
        if (r.other >= size()) throw Error(ErrorKind::kConfig, "rule operand out of range");
      } else {
        for (const auto& [c, j] : r.terms) {
          if (j >= size()) throw Error(ErrorKind::kConfig, "rule operand out of range");
          if (c.sign() < 0) throw Error(ErrorKind::kConfig, "negative rule coefficient");
        }
      }
    }
  }
};

namespace detail {

struct ExplicitSystem {
  using value_type = Bound;
  const ConstraintSystem* sys;

  std::vector<Bound> initial() const { return sys->bounds; }

  void sweep(const std::vector<Bound>& cur, std::vector<Bound>& next) const {
    for (const auto& r : sys->rules) {
      if (r.kind == Rule::Kind::kEquality) {
        next[r.target] = bound_min(next[r.target], cur[r.other]);
        next[r.other] = bound_min(next[r.other], cur[r.target]);
      } else {
        next[r.target] = bound_min(next[r.target], combo_bound(r.terms, cur));
      }
    }
  }
};

}  // namespace detail

struct ExplicitRelaxResult {
  std::vector<Bound> values;
  std::size_t sweeps = 0;
  std::vector<std::size_t> unconstrained;  // indices still at +infinity
};

inline std::size_t default_sweep_cap(std::size_t index_count, int factor = 10) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(factor) * index_count);
}

inline ExplicitRelaxResult relax_fixpoint(
    const ConstraintSystem& sys, std::size_t sweep_cap = 0,
    const std::function<void(std::size_t, const std::vector<Bound>&)>& on_sweep = {}) {
  sys.validate();
  detail::ExplicitSystem es{&sys};
  auto out = relax_fixpoint_generic(es, sweep_cap ? sweep_cap : default_sweep_cap(sys.size()),
                                    on_sweep);
  ExplicitRelaxResult r;
  r.values = std::move(out.values);
  r.sweeps = out.sweeps;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    if (!r.values[i]) r.unconstrained.push_back(i);
  }
  return r;
}

/// Indices of rules violated by f (direct evaluation, no relaxation).
inline std::vector<std::size_t> violated_rules(const ConstraintSystem& sys,
                                               const std::vector<Bound>& f) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < sys.rules.size(); ++k) {
    const auto& r = sys.rules[k];
    bool ok = true;
    if (r.kind == Rule::Kind::kEquality) {
      ok = f[r.target] == f[r.other];
    } else {
      ok = !bound_less(combo_bound(r.terms, f), f[r.target]);
    }
    if (!ok) out.push_back(k);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (bound_less(sys.bounds[i], f[i])) out.push_back(sys.rules.size() + i);
  }
  return out;
}

/// Independent oracle: minimum bound derivable by any rule-application tree
/// of depth <= depth, by plain recursive enumeration (no memoization, no
/// sweeps). Throws kBudgetExceeded once more than `budget` tree nodes have
/// been visited.
inline std::vector<Bound> brute_force_oracle(const ConstraintSystem& sys, int depth,
                                             std::uint64_t budget = 50'000'000) {
  sys.validate();
  // Every rule read as "target <= combination of operands".
  std::vector<std::vector<std::vector<std::pair<Rational, std::size_t>>>> derivations(sys.size());
  for (const auto& r : sys.rules) {
    if (r.kind == Rule::Kind::kEquality) {
      derivations[r.target].push_back({{Rational(1), r.other}});
      derivations[r.other].push_back({{Rational(1), r.target}});
    } else {
      derivations[r.target].push_back(r.terms);
    }
  }
  std::uint64_t visited = 0;
  std::function<Bound(std::size_t, int)> best = [&](std::size_t i, int d) -> Bound {
    if (++visited > budget) {
      throw Error(ErrorKind::kBudgetExceeded, "brute-force oracle budget exhausted");
    }
    Bound b = sys.bounds[i];
    if (d == 0) return b;
    for (const auto& terms : derivations[i]) {
      Rational sum;
      bool finite = true;
      for (const auto& [c, j] : terms) {
        if (c.is_zero()) continue;
        Bound v = best(j, d - 1);
        if (!v) {
          finite = false;
          break;
        }
        sum += c * *v;
      }
      if (finite) b = bound_min(b, sum);
    }
    return b;
  };
  std::vector<Bound> out(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) out[i] = best(i, depth);
  return out;
}

}  // namespace ubg
