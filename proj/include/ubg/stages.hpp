#pragma once

// The chain X_0 ⊆ X_1 ⊆ X_2 ⊆ ... . Odd stages are word stages
// W_cap(S_n); even stages are vector stages V_K(B_n). X_0 = {e} is treated
// as a vector stage with empty basis and the zero norm.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/config.hpp"
#include "ubg/error.hpp"
#include "ubg/rational.hpp"

namespace ubg {

enum class StageKind { kWord, kVector };

struct Stage {
  int index = 0;
  StageKind kind = StageKind::kVector;
  std::vector<ElementId> members;      // X_n in enumeration order
  std::vector<ElementId> new_members;  // X_n \ X_{n-1}, same order
  std::vector<ElementId> generators;   // S_n (word stages)
  std::vector<ElementId> basis;        // B_n (vector stages)
  std::unordered_map<ElementId, std::uint32_t> position;

  // Value table: rho is |members|^2 row-major (word stages), norm is
  // indexed by position (vector stages).
  std::vector<Rational> rho;
  std::vector<Rational> norm;
  bool sealed = false;

  std::size_t size() const { return members.size(); }
  bool is_word() const { return kind == StageKind::kWord; }

  bool contains(ElementId id) const { return position.count(id) != 0; }

  std::uint32_t pos(ElementId id) const {
    auto it = position.find(id);
    if (it == position.end()) {
      throw Error(ErrorKind::kOutOfUniverse,
                  "element " + std::to_string(id) + " is not in X_" + std::to_string(index));
    }
    return it->second;
  }

  const Rational& rho_at(std::size_t i, std::size_t j) const { return rho[i * members.size() + j]; }

  const Rational& metric(ElementId a, ElementId b) const {
    require_table(StageKind::kWord);
    return rho_at(pos(a), pos(b));
  }

  const Rational& norm_of(ElementId a) const {
    require_table(StageKind::kVector);
    return norm[pos(a)];
  }

  void index_members() {
    position.clear();
    position.reserve(members.size());
    for (std::uint32_t i = 0; i < members.size(); ++i) position.emplace(members[i], i);
  }

 private:
  void require_table(StageKind k) const {
    if (kind != k) {
      throw Error(ErrorKind::kConfig, "X_" + std::to_string(index) + " is a " +
                                          (is_word() ? "word" : "vector") + " stage");
    }
    if (!sealed) throw Error(ErrorKind::kNotBuilt, "X_" + std::to_string(index) + " has no table yet");
  }
};

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

inline void fill_new_members(Stage& s, const Stage& prev) {
  s.index_members();
  s.new_members.clear();
  for (auto id : s.members) {
    if (!prev.contains(id)) s.new_members.push_back(id);
  }
  for (auto id : prev.members) {
    if (!s.contains(id)) {
      throw Error(ErrorKind::kInvariantViolation,
                  "X_" + std::to_string(prev.index) + " is not contained in X_" + std::to_string(s.index));
    }
  }
}

}  // namespace detail

/// Number of irreducible words of length <= cap over s generators.
inline std::uint64_t word_count(std::uint64_t s, int cap) {
  if (s == 0) return 1;
  std::uint64_t total = 1, layer = 2 * s;
  for (int len = 1; len <= cap; ++len) {
    total += layer;
    if (total < layer) return UINT64_MAX;
    layer = detail::saturating_mul(layer, 2 * s - 1);
  }
  return total;
}

/// All irreducible words of length <= cap over the generators and their
/// inverses, shortest first, then lexicographic in letter order.
inline std::vector<ElementId> enumerate_words(ElementStore& store,
                                              const std::vector<ElementId>& generators, int cap,
                                              std::uint64_t budget) {
  std::uint64_t count = word_count(generators.size(), cap);
  if (count > budget) {
    throw Error(ErrorKind::kBudgetExceeded, "word stage needs " + std::to_string(count) +
                                                " members, budget is " + std::to_string(budget));
  }
  std::vector<SignedLetter> alphabet;
  for (auto g : generators) {
    alphabet.push_back({g, 1});
    alphabet.push_back({g, -1});
  }
  std::sort(alphabet.begin(), alphabet.end());
  std::vector<ElementId> out;
  out.reserve(count);
  out.push_back(kUnit);
  std::vector<SignedLetter> word;
  auto extend = [&](auto&& self, int target) -> void {
    if (static_cast<int>(word.size()) == target) {
      out.push_back(store.intern(store.reduce_word(word)));
      return;
    }
    for (const auto& l : alphabet) {
      if (!word.empty() && word.back() == l.inverse()) continue;
      word.push_back(l);
      self(self, target);
      word.pop_back();
    }
  };
  for (int len = 1; len <= cap; ++len) extend(extend, len);
  return out;
}

/// All functions basis -> scalars, in odometer order (basis sorted by id,
/// last basis element varying fastest, scalars ascending).
inline std::vector<ElementId> enumerate_vectors(ElementStore& store, std::vector<ElementId> basis,
                                                std::vector<Dyadic> scalars, std::uint64_t budget) {
  std::sort(basis.begin(), basis.end());
  std::sort(scalars.begin(), scalars.end());
  scalars.erase(std::unique(scalars.begin(), scalars.end()), scalars.end());
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) count = detail::saturating_mul(count, scalars.size());
  if (count > budget) {
    throw Error(ErrorKind::kBudgetExceeded,
                "vector stage needs " + (count == UINT64_MAX ? std::string("more than 2^64")
                                                             : std::to_string(count)) +
                    " members, budget is " + std::to_string(budget));
  }
  std::vector<ElementId> out;
  out.reserve(count);
  std::vector<std::size_t> digit(basis.size(), 0);
  Vector v(basis.size());
  for (;;) {
    for (std::size_t i = 0; i < basis.size(); ++i) v[i] = {basis[i], scalars[digit[i]]};
    out.push_back(store.intern(store.term_of_vector(v)));
    std::size_t k = basis.size();
    while (k > 0) {
      --k;
      if (++digit[k] < scalars.size()) break;
      digit[k] = 0;
      if (k == 0) return out;
    }
    if (basis.empty()) return out;
  }
}

/// X_0 = {e} with ||e|| = 0.
inline Stage make_stage0() {
  Stage s;
  s.index = 0;
  s.kind = StageKind::kVector;
  s.members = {kUnit};
  s.index_members();
  s.new_members = {kUnit};
  s.norm = {Rational(0)};
  s.sealed = true;
  return s;
}

/// Members of the word stage following `prev` (vector stage X_{n-1}); the
/// table is attached later. `older` is X_{n-2} (a word stage) or null when
/// building X_1.
inline Stage make_word_stage(ElementStore& store, const Stage& prev, const Stage* older,
                             const Config& cfg) {
  if (prev.is_word()) throw Error(ErrorKind::kConfig, "word stage must follow a vector stage");
  Stage s;
  s.index = prev.index + 1;
  s.kind = StageKind::kWord;
  if (!older) {
    ElementId x = store.intern(ElementTerm::generator(0));
    store.register_generator(x);
    s.generators = {x};
  } else {
    s.generators = older->generators;
    for (auto id : prev.members) {
      if (!older->contains(id)) {
        store.register_generator(id);
        s.generators.push_back(id);
      }
    }
  }
  std::sort(s.generators.begin(), s.generators.end());
  int cap = cfg.word_cap_for((s.index - 1) / 2);
  s.members = enumerate_words(store, s.generators, cap, cfg.member_budget);
  detail::fill_new_members(s, prev);
  return s;
}

/// Members of the vector stage following `prev` (word stage X_{n-1});
/// `older` is X_{n-2}.
inline Stage make_vector_stage(ElementStore& store, const Stage& prev, const Stage& older,
                               const Config& cfg) {
  if (!prev.is_word()) throw Error(ErrorKind::kConfig, "vector stage must follow a word stage");
  Stage s;
  s.index = prev.index + 1;
  s.kind = StageKind::kVector;
  s.basis = older.basis;
  for (auto id : prev.members) {
    if (!older.contains(id)) {
      store.register_basis(id);
      s.basis.push_back(id);
    }
  }
  std::sort(s.basis.begin(), s.basis.end());
  s.members = enumerate_vectors(store, s.basis, cfg.scalars_for(s.index / 2), cfg.member_budget);
  detail::fill_new_members(s, prev);
  return s;
}

/// a ∈ X_n, over the built stages.
inline bool membership(const std::vector<Stage>& stages, ElementId a, int n) {
  if (n < 0 || n >= static_cast<int>(stages.size())) {
    throw Error(ErrorKind::kNotBuilt, "X_" + std::to_string(n) + " has not been built (built through X_" +
                                          std::to_string(static_cast<int>(stages.size()) - 1) + ")");
  }
  return stages[n].contains(a);
}

/// Smallest built n with a ∈ X_n.
inline std::optional<int> first_stage(const std::vector<Stage>& stages, ElementId a) {
  for (const auto& s : stages) {
    if (s.contains(a)) return s.index;
  }
  return std::nullopt;
}

}  // namespace ubg
