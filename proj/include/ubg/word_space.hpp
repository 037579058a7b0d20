#pragma once

// A finite set of reduced words (all irreducible words of length <= max_len
// over a generator list), indexed densely and stored as a prefix trie so
// that products and inverses are table walks instead of term interning.

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/error.hpp"
#include "ubg/stages.hpp"

namespace ubg {

class WordSpace {
 public:
  using Code = std::uint16_t;  // 2 * generator position + (inverse ? 1 : 0)

  WordSpace(ElementStore& store, std::vector<ElementId> generators, int max_len,
            std::uint64_t budget)
      : generators_(std::move(generators)), max_len_(max_len) {
    std::sort(generators_.begin(), generators_.end());
    alphabet_ = static_cast<int>(2 * generators_.size());
    std::unordered_map<ElementId, int> gen_pos;
    for (int i = 0; i < static_cast<int>(generators_.size()); ++i) gen_pos[generators_[i]] = i;

    words_ = enumerate_words(store, generators_, max_len, budget);
    const std::size_t n = words_.size();
    letters_.resize(n);
    child_.assign(n * alphabet_, -1);
    index_.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      index_.emplace(words_[i], i);
      for (const auto& l : store.letters_of(words_[i])) {
        letters_[i].push_back(static_cast<Code>(2 * gen_pos.at(l.base) + (l.sign < 0 ? 1 : 0)));
      }
      if (i == 0) continue;
      std::int32_t parent = 0;
      const auto& w = letters_[i];
      for (std::size_t k = 0; k + 1 < w.size(); ++k) parent = child_[parent * alphabet_ + w[k]];
      child_[parent * alphabet_ + w.back()] = static_cast<std::int32_t>(i);
    }
    inverse_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::vector<Code> r(letters_[i].rbegin(), letters_[i].rend());
      for (auto& c : r) c ^= 1;
      inverse_[i] = static_cast<std::uint32_t>(walk(r));
    }
  }

  std::size_t size() const { return words_.size(); }
  int alphabet() const { return alphabet_; }
  int max_len() const { return max_len_; }
  ElementId id(std::uint32_t i) const { return words_[i]; }
  const std::vector<ElementId>& ids() const { return words_; }
  const std::vector<Code>& letters(std::uint32_t i) const { return letters_[i]; }
  std::uint32_t inverse(std::uint32_t i) const { return inverse_[i]; }

  std::int32_t index_of(ElementId id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : static_cast<std::int32_t>(it->second);
  }

  /// Index of a single letter word.
  std::int32_t letter_word(Code c) const { return child_[c]; }

  /// Index of a reduced code sequence, -1 if longer than max_len.
  std::int32_t walk(const std::vector<Code>& w) const {
    if (static_cast<int>(w.size()) > max_len_) return -1;
    std::int32_t node = 0;
    for (auto c : w) {
      node = child_[node * alphabet_ + c];
      if (node < 0) return -1;
    }
    return node;
  }

  /// Index of the reduced product, -1 if it leaves the space.
  std::int32_t product(std::uint32_t i, std::uint32_t j) const {
    const auto& a = letters_[i];
    const auto& b = letters_[j];
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[a.size() - 1 - k] == (b[k] ^ 1)) ++k;
    if (static_cast<int>(a.size() + b.size() - 2 * k) > max_len_) return -1;
    std::int32_t node = 0;
    for (std::size_t t = 0; t + k < a.size(); ++t) node = child_[node * alphabet_ + a[t]];
    for (std::size_t t = k; t < b.size(); ++t) node = child_[node * alphabet_ + b[t]];
    return node;
  }

  /// For every word u, all pairs (a, b) in the space with (ab)' = u.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> splits() const {
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out(size());
    for (std::uint32_t i = 0; i < size(); ++i) {
      for (std::uint32_t j = 0; j < size(); ++j) {
        auto p = product(i, j);
        if (p >= 0) out[p].emplace_back(i, j);
      }
    }
    return out;
  }

 private:
  std::vector<ElementId> generators_;
  int max_len_;
  int alphabet_ = 0;
  std::vector<ElementId> words_;
  std::vector<std::vector<Code>> letters_;
  std::vector<std::int32_t> child_;
  std::vector<std::uint32_t> inverse_;
  std::unordered_map<ElementId, std::uint32_t> index_;
};

}  // namespace ubg
