#pragma once

// Elements of the countable set X. Each element has a canonical term: the
// unit, the first generator x, an irreducible word over registered
// generators, or a finite dyadic combination of registered basis elements.
// Terms are interned so that equality in X is id equality.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ubg/error.hpp"
#include "ubg/rational.hpp"

namespace ubg {

using ElementId = std::uint32_t;
inline constexpr ElementId kUnit = 0;

struct SignedLetter {
  ElementId base = kUnit;
  int sign = 1;  // +1 or -1

  SignedLetter inverse() const { return {base, -sign}; }
  friend bool operator==(const SignedLetter&, const SignedLetter&) = default;
  friend auto operator<=>(const SignedLetter& a, const SignedLetter& b) {
    if (auto c = a.base <=> b.base; c != 0) return c;
    return b.sign <=> a.sign;  // positive letter before its inverse
  }
};

struct ComboEntry {
  ElementId basis = kUnit;
  Dyadic coef;
  friend bool operator==(const ComboEntry&, const ComboEntry&) = default;
};

using Vector = std::vector<ComboEntry>;  // sorted by basis id, no zero coefficients

enum class TermKind : std::uint8_t { kUnit, kGen, kWord, kCombo };

struct ElementTerm {
  TermKind kind = TermKind::kUnit;
  int gen = 0;
  std::vector<SignedLetter> letters;
  Vector combo;

  static ElementTerm unit() { return {}; }
  static ElementTerm generator(int index) {
    ElementTerm t;
    t.kind = TermKind::kGen;
    t.gen = index;
    return t;
  }
  static ElementTerm word(std::vector<SignedLetter> letters) {
    ElementTerm t;
    t.kind = TermKind::kWord;
    t.letters = std::move(letters);
    return t;
  }
  static ElementTerm combination(Vector entries) {
    ElementTerm t;
    t.kind = TermKind::kCombo;
    t.combo = std::move(entries);
    return t;
  }

  friend bool operator==(const ElementTerm&, const ElementTerm&) = default;
};

struct ElementTermHash {
  std::size_t operator()(const ElementTerm& t) const noexcept {
    std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(t.kind);
    auto mix = [&h](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(static_cast<std::uint64_t>(t.gen));
    for (const auto& l : t.letters) mix((static_cast<std::uint64_t>(l.base) << 1) | (l.sign < 0));
    for (const auto& e : t.combo) {
      mix(e.basis);
      mix(static_cast<std::uint64_t>(e.coef.num()));
      mix(static_cast<std::uint64_t>(e.coef.log2den()));
    }
    return static_cast<std::size_t>(h);
  }
};

/// Interning store for canonical terms plus the generator / basis registries.
/// Single writer during construction; const access is safe once a stage is
/// sealed (the rank cache aside, which is filled on demand).
class ElementStore {
 public:
  ElementStore() {
    terms_.push_back(ElementTerm::unit());
    index_.emplace(terms_.back(), kUnit);
    generator_.push_back(false);
    basis_.push_back(false);
  }

  std::size_t size() const { return terms_.size(); }

  const ElementTerm& term(ElementId id) const {
    check_id(id);
    return terms_[id];
  }

  std::optional<ElementId> find(const ElementTerm& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  ElementId intern(const ElementTerm& t) {
    if (auto found = find(t)) return *found;
    validate_canonical(t);
    auto id = static_cast<ElementId>(terms_.size());
    terms_.push_back(t);
    index_.emplace(t, id);
    generator_.push_back(false);
    basis_.push_back(false);
    return id;
  }

  void register_generator(ElementId id) {
    check_id(id);
    auto k = terms_[id].kind;
    if (k != TermKind::kGen && k != TermKind::kCombo) {
      throw Error(ErrorKind::kCanonicality, "only Gen and Combo elements can be generators");
    }
    generator_[id] = true;
  }
  bool is_generator(ElementId id) const { return id < generator_.size() && generator_[id]; }

  void register_basis(ElementId id) {
    check_id(id);
    auto k = terms_[id].kind;
    if (k != TermKind::kGen && k != TermKind::kWord) {
      throw Error(ErrorKind::kCanonicality, "only Gen and Word elements can be basis elements");
    }
    basis_[id] = true;
  }
  bool is_basis(ElementId id) const { return id < basis_.size() && basis_[id]; }

  // ---- free group structure -------------------------------------------------

  /// Free reduction of a letter sequence, collapsing the empty word to the
  /// unit and a single positive letter to its base element.
  ElementTerm reduce_word(std::span<const SignedLetter> letters) const {
    std::vector<SignedLetter> out;
    out.reserve(letters.size());
    for (const auto& l : letters) {
      if (l.sign != 1 && l.sign != -1) {
        throw Error(ErrorKind::kInvalidLetter, "letter sign must be +1 or -1");
      }
      if (!is_generator(l.base)) {
        throw Error(ErrorKind::kInvalidLetter,
                    "letter base " + std::to_string(l.base) + " is not a registered generator");
      }
      if (!out.empty() && out.back() == l.inverse()) {
        out.pop_back();
      } else {
        out.push_back(l);
      }
    }
    if (out.empty()) return ElementTerm::unit();
    if (out.size() == 1 && out[0].sign == 1) return terms_[out[0].base];
    return ElementTerm::word(std::move(out));
  }

  /// Letter sequence of an element viewed in the free group.
  std::vector<SignedLetter> letters_of(ElementId id) const {
    const auto& t = term(id);
    switch (t.kind) {
      case TermKind::kUnit: return {};
      case TermKind::kWord: return t.letters;
      case TermKind::kGen:
      case TermKind::kCombo:
        if (is_generator(id)) return {SignedLetter{id, 1}};
        break;
    }
    throw Error(ErrorKind::kStageUnderflow,
                "element " + std::to_string(id) +
                    " is not yet a generator; build the next word stage first");
  }

  ElementTerm group_mul(ElementId a, ElementId b) const {
    auto la = letters_of(a);
    auto lb = letters_of(b);
    la.insert(la.end(), lb.begin(), lb.end());
    return reduce_word(la);
  }

  ElementTerm group_inv(ElementId a) const {
    auto la = letters_of(a);
    std::reverse(la.begin(), la.end());
    for (auto& l : la) l.sign = -l.sign;
    return reduce_word(la);
  }

  ElementId mul(ElementId a, ElementId b) { return intern(group_mul(a, b)); }
  ElementId inv(ElementId a) { return intern(group_inv(a)); }

  // ---- vector structure -----------------------------------------------------

  /// Coordinates over registered basis elements.
  Vector vector_of(ElementId id) const {
    const auto& t = term(id);
    if (t.kind == TermKind::kUnit) return {};
    if (t.kind == TermKind::kCombo) return t.combo;
    if (is_basis(id)) return {ComboEntry{id, Dyadic(1)}};
    throw Error(ErrorKind::kBasisUnderflow,
                "element " + std::to_string(id) +
                    " is not yet a basis element; build the next vector stage first");
  }

  /// Canonical term of a vector (coordinates need not be sorted or merged).
  ElementTerm term_of_vector(Vector v) const {
    std::sort(v.begin(), v.end(),
              [](const ComboEntry& a, const ComboEntry& b) { return a.basis < b.basis; });
    Vector merged;
    for (const auto& e : v) {
      if (e.basis == kUnit) continue;
      if (!is_basis(e.basis)) {
        throw Error(ErrorKind::kBasisUnderflow,
                    "element " + std::to_string(e.basis) + " is not a registered basis element");
      }
      if (!merged.empty() && merged.back().basis == e.basis) {
        merged.back().coef = merged.back().coef + e.coef;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged, [](const ComboEntry& e) { return e.coef.is_zero(); });
    if (merged.empty()) return ElementTerm::unit();
    if (merged.size() == 1 && merged[0].coef == Dyadic(1)) return terms_[merged[0].basis];
    return ElementTerm::combination(std::move(merged));
  }

  /// Formal combination of basis elements (Unit counts as zero).
  ElementTerm lin_combine(std::span<const std::pair<Dyadic, ElementId>> terms) const {
    Vector v;
    for (const auto& [c, id] : terms) {
      check_id(id);
      if (id == kUnit) continue;
      if (!is_basis(id)) {
        throw Error(ErrorKind::kBasisUnderflow,
                    "element " + std::to_string(id) + " is not a registered basis element");
      }
      v.push_back({id, c});
    }
    return term_of_vector(std::move(v));
  }

  /// Like lin_combine, but each operand may itself be any vector-expressible
  /// element (its coordinates are expanded first).
  ElementTerm linear_combination(std::span<const std::pair<Dyadic, ElementId>> terms) const {
    Vector v;
    for (const auto& [c, id] : terms) {
      for (const auto& e : vector_of(id)) v.push_back({e.basis, c * e.coef});
    }
    return term_of_vector(std::move(v));
  }

  ElementId combine(std::span<const std::pair<Dyadic, ElementId>> terms) {
    return intern(linear_combination(terms));
  }

  // ---- rank -------------------------------------------------------------------

  /// Convex decomposition of the canonical form, if it is one: support of
  /// size >= 2, strictly positive coefficients summing to 1.
  std::optional<Vector> convex_decomposition(ElementId id) const {
    const auto& t = term(id);
    if (t.kind != TermKind::kCombo || t.combo.size() < 2) return std::nullopt;
    Dyadic sum;
    for (const auto& e : t.combo) {
      if (e.coef.sign() <= 0) return std::nullopt;
      sum = sum + e.coef;
    }
    if (sum != Dyadic(1)) return std::nullopt;
    return t.combo;
  }

  /// If id is the formal inverse of a convex combination, that combination.
  std::optional<ElementId> inverse_convex_base(ElementId id) const {
    const auto& t = term(id);
    if (t.kind != TermKind::kWord || t.letters.size() != 1 || t.letters[0].sign != -1) {
      return std::nullopt;
    }
    if (!convex_decomposition(t.letters[0].base)) return std::nullopt;
    return t.letters[0].base;
  }

  int rank(ElementId id) const {
    check_id(id);
    if (rank_cache_.size() < terms_.size()) rank_cache_.resize(terms_.size(), -1);
    if (rank_cache_[id] >= 0) return rank_cache_[id];
    int r = 0;
    std::optional<Vector> conv = convex_decomposition(id);
    if (!conv) {
      if (auto base = inverse_convex_base(id)) conv = convex_decomposition(*base);
    }
    if (conv) {
      int best = 0;
      for (const auto& e : *conv) best = std::max(best, rank(e.basis));
      r = best + 1;
    }
    rank_cache_[id] = r;
    return r;
  }

  // ---- rendering --------------------------------------------------------------

  /// Text in the expression language; parsing and evaluating it yields id.
  std::string render(ElementId id) const {
    const auto& t = term(id);
    switch (t.kind) {
      case TermKind::kUnit: return "e";
      case TermKind::kGen: return t.gen == 0 ? "x" : "x" + std::to_string(t.gen);
      case TermKind::kWord: {
        std::string out;
        for (std::size_t i = 0; i < t.letters.size(); ++i) {
          if (i) out += " . ";
          const auto& l = t.letters[i];
          out += l.sign > 0 ? render_factor(l.base) : "inv(" + render(l.base) + ")";
        }
        return out;
      }
      case TermKind::kCombo: {
        std::string out;
        for (std::size_t i = 0; i < t.combo.size(); ++i) {
          const auto& e = t.combo[i];
          if (i == 0) {
            out += e.coef.str();
          } else {
            out += e.coef.sign() < 0 ? " - " : " + ";
            out += abs(e.coef).str();
          }
          out += " " + render_factor(e.basis);
        }
        return out;
      }
    }
    return "?";
  }

 private:
  std::string render_factor(ElementId id) const {
    const auto& t = term(id);
    if (t.kind == TermKind::kUnit || t.kind == TermKind::kGen) return render(id);
    if (t.kind == TermKind::kWord && t.letters.size() == 1 && t.letters[0].sign < 0) {
      return render(id);
    }
    return "(" + render(id) + ")";
  }

  void check_id(ElementId id) const {
    if (id >= terms_.size()) {
      throw Error(ErrorKind::kCanonicality, "unknown element id " + std::to_string(id));
    }
  }

  void validate_canonical(const ElementTerm& t) const {
    auto fail = [](const std::string& why) { throw Error(ErrorKind::kCanonicality, why); };
    switch (t.kind) {
      case TermKind::kUnit: return;
      case TermKind::kGen:
        if (t.gen < 0) fail("negative generator index");
        if (!t.letters.empty() || !t.combo.empty()) fail("Gen term with payload");
        return;
      case TermKind::kWord: {
        if (!t.combo.empty()) fail("Word term with combo payload");
        if (t.letters.empty()) fail("empty Word (collapses to Unit)");
        if (t.letters.size() == 1 && t.letters[0].sign == 1) {
          fail("length-1 positive Word (collapses to its base)");
        }
        for (std::size_t i = 0; i < t.letters.size(); ++i) {
          const auto& l = t.letters[i];
          if (l.base == kUnit) fail("Word contains the unit letter");
          if (l.sign != 1 && l.sign != -1) fail("bad letter sign");
          if (!is_generator(l.base)) fail("Word letter over an unregistered generator");
          if (i > 0 && t.letters[i - 1] == l.inverse()) fail("Word is not irreducible");
        }
        return;
      }
      case TermKind::kCombo: {
        if (!t.letters.empty()) fail("Combo term with letters");
        if (t.combo.empty()) fail("empty Combo (collapses to Unit)");
        if (t.combo.size() == 1 && t.combo[0].coef == Dyadic(1)) {
          fail("singleton Combo with coefficient 1 (collapses to the basis element)");
        }
        for (std::size_t i = 0; i < t.combo.size(); ++i) {
          const auto& e = t.combo[i];
          if (e.coef.is_zero()) fail("Combo with a zero coefficient");
          if (!is_basis(e.basis)) fail("Combo over an unregistered basis element");
          if (i > 0 && t.combo[i - 1].basis >= e.basis) fail("Combo entries not sorted/unique");
        }
        return;
      }
    }
  }

  std::vector<ElementTerm> terms_;
  std::unordered_map<ElementTerm, ElementId, ElementTermHash> index_;
  std::vector<bool> generator_;
  std::vector<bool> basis_;
  mutable std::vector<int> rank_cache_;
};

}  // namespace ubg
