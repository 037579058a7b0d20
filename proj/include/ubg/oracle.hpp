#pragma once

// Independent brute-force oracles used to cross-check the extension
// operators. None of them shares code with the relaxation engines: the LP
// oracle enumerates basic solutions, the norm_2 oracle enumerates the
// vertices of the three-variable problem directly, and the decomposition
// oracle enumerates factorizations layer by layer without an ambient cap.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ubg/algebra.hpp"
#include "ubg/error.hpp"
#include "ubg/lp.hpp"
#include "ubg/rational.hpp"
#include "ubg/stages.hpp"

namespace ubg::oracle {

// ---- molecule LP by basic-solution enumeration -----------------------------------

namespace detail {

/// Solves M beta = t for a square-or-tall column set by Gaussian
/// elimination; nullopt if the columns are dependent or t is not in their
/// span.
inline std::optional<std::vector<BigRational>> solve_columns(const std::vector<std::vector<BigRational>>& cols,
                                                             const std::vector<BigRational>& t) {
  const std::size_t rows = t.size(), k = cols.size();
  std::vector<std::vector<BigRational>> m(rows, std::vector<BigRational>(k + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) m[r][c] = cols[c][r];
    m[r][k] = t[r];
  }
  std::size_t row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = row;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) return std::nullopt;  // dependent columns
    std::swap(m[p], m[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || m[r][c] == 0) continue;
      BigRational f = m[r][c] / m[row][c];
      for (std::size_t j = c; j <= k; ++j) m[r][j] -= f * m[row][j];
    }
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r) {
    if (m[r][k] != 0) return std::nullopt;
  }
  std::vector<BigRational> beta(k);
  for (std::size_t c = 0; c < k; ++c) beta[c] = m[c][k] / m[c][c];
  return beta;
}

}  // namespace detail

/// min sum |beta_j| cost_j over sum beta_j v_j = target, by trying every
/// linearly independent subset of molecules. Exponential; meant for at
/// most a dozen molecules.
inline std::optional<Rational> lp_by_vertices(const std::vector<Molecule>& molecules, const Vector& target) {
  if (molecules.size() > 20) throw Error(ErrorKind::kBudgetExceeded, "vertex oracle limited to 20 molecules");
  std::vector<ElementId> coords;
  for (const auto& e : target) coords.push_back(e.basis);
  for (const auto& m : molecules) {
    for (const auto& e : m.v) coords.push_back(e.basis);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  auto dense = [&](const Vector& v) {
    std::vector<BigRational> out(coords.size());
    for (const auto& e : v) {
      out[std::lower_bound(coords.begin(), coords.end(), e.basis) - coords.begin()] = to_big(e.coef);
    }
    return out;
  };
  const auto t = dense(target);
  bool zero = true;
  for (const auto& x : t) zero = zero && x == 0;
  if (zero) return Rational(0);

  std::vector<std::vector<BigRational>> all;
  for (const auto& m : molecules) all.push_back(dense(m.v));
  std::optional<BigRational> best;
  const std::uint32_t n = static_cast<std::uint32_t>(molecules.size());
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > coords.size()) continue;
    std::vector<std::vector<BigRational>> cols;
    std::vector<std::size_t> which;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        cols.push_back(all[j]);
        which.push_back(j);
      }
    }
    auto beta = detail::solve_columns(cols, t);
    if (!beta) continue;
    BigRational cost = 0;
    for (std::size_t i = 0; i < which.size(); ++i) cost += abs((*beta)[i]) * to_big(molecules[which[i]].cost);
    if (!best || cost < *best) best = cost;
  }
  if (!best) return std::nullopt;
  return from_big(*best);
}

// ---- norm_2 on the span of x, x^{-1} -------------------------------------------

/// ||a x + b x^{-1}||_2 = min |g1| + |g2| + 2|g3| over
/// a x + b x^{-1} = g1 x + g2 x^{-1} + g3 (x - x^{-1}).
/// The constraint leaves one free parameter t = g3 (g1 = a - t, g2 = b + t);
/// basic solutions set one of g1, g2, g3 to zero.
inline Rational norm2_three_variable(const Rational& a, const Rational& b) {
  std::optional<Rational> best;
  for (const Rational& t : {Rational(0), a, -b}) {
    Rational v = abs(a - t) + abs(b + t) + Rational(2) * abs(t);
    if (!best || v < *best) best = v;
  }
  return *best;
}

// ---- bounded factorization search ---------------------------------------------

struct Piece {
  ElementId a, b;
  Rational cost;
};

/// min sum cost_i over sequences of at most m_cap pieces with
/// (a_1...a_m)' = x and (b_1...b_m)' = y, for every pair (x, y) of
/// `targets`. Intermediate products are unrestricted except for the length
/// bound implied by the remaining piece count. Interns the words it visits.
inline std::vector<Bound> min_factorization(ElementStore& store, const std::vector<ElementId>& targets,
                                            const std::vector<Piece>& pieces, int m_cap,
                                            std::uint64_t budget = 50'000'000) {
  auto len = [&](ElementId id) { return store.letters_of(id).size(); };
  std::size_t target_len = 0, piece_len = 0;
  for (auto t : targets) target_len = std::max(target_len, len(t));
  for (const auto& p : pieces) piece_len = std::max({piece_len, len(p.a), len(p.b)});

  auto key = [](ElementId p, ElementId q) { return (static_cast<std::uint64_t>(p) << 32) | q; };
  std::unordered_map<std::uint64_t, Rational> layer{{key(kUnit, kUnit), Rational(0)}};
  std::unordered_map<std::uint64_t, Rational> reached = layer;
  std::uint64_t work = 0;
  for (int step = 1; step <= m_cap; ++step) {
    const std::size_t limit = target_len + static_cast<std::size_t>(m_cap - step) * piece_len;
    std::unordered_map<std::uint64_t, Rational> next;
    for (const auto& [k, cost] : layer) {
      const ElementId p = static_cast<ElementId>(k >> 32), q = static_cast<ElementId>(k & 0xffffffffu);
      for (const auto& pc : pieces) {
        if (++work > budget) throw Error(ErrorKind::kBudgetExceeded, "factorization oracle budget exhausted");
        const ElementId np = store.mul(p, pc.a), nq = store.mul(q, pc.b);
        if (len(np) > limit || len(nq) > limit) continue;
        Rational c = cost + pc.cost;
        auto [it, fresh] = next.emplace(key(np, nq), c);
        if (!fresh && c < it->second) it->second = c;
      }
    }
    for (const auto& [k, c] : next) {
      auto [it, fresh] = reached.emplace(k, c);
      if (!fresh && c < it->second) it->second = c;
    }
    layer = std::move(next);
  }
  const std::size_t n = targets.size();
  std::vector<Bound> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (auto it = reached.find(key(targets[i], targets[j])); it != reached.end()) out[i * n + j] = it->second;
    }
  }
  return out;
}

/// rho_{n+1} on a word stage whose members all have rank 0, straight from
/// the definitions: delta(x, y) = min sum ||a_i - b_i||_n over
/// factorizations with a_i, b_i, a_i - b_i in X_n (at most delta_cap
/// pieces), then rho = min sum delta(a_i, b_i) over factorizations inside
/// the stage (at most rho_cap pieces). Each piece (a, b) also enters
/// inverted as (a^{-1}, b^{-1}) at the same cost, so the result satisfies
/// rho(x, y) = rho(x^{-1}, y^{-1}); the bare formula leaves pairs with no
/// factorization at all (inverses of new generators) at infinity.
inline std::vector<Bound> rho_by_factorization(ElementStore& store, const Stage& stage, const Stage& prev,
                                               int delta_cap, int rho_cap) {
  for (auto id : stage.members) {
    if (store.rank(id) != 0) throw Error(ErrorKind::kConfig, "factorization oracle needs a rank-0 stage");
  }
  std::vector<Piece> small;
  for (auto a : prev.members) {
    for (auto b : prev.members) {
      std::pair<Dyadic, ElementId> t[2] = {{Dyadic(1), a}, {Dyadic(-1), b}};
      auto d = store.find(store.linear_combination(t));
      if (d && prev.contains(*d)) small.push_back({a, b, prev.norm_of(*d)});
    }
  }
  auto delta = min_factorization(store, stage.members, small, delta_cap);
  const std::size_t n = stage.size();
  std::vector<Piece> big;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!delta[i * n + j]) continue;
      const ElementId a = stage.members[i], b = stage.members[j];
      big.push_back({a, b, *delta[i * n + j]});
      const ElementId ai = store.inv(a), bi = store.inv(b);
      if (stage.contains(ai) && stage.contains(bi)) big.push_back({ai, bi, *delta[i * n + j]});
    }
  }
  return min_factorization(store, stage.members, big, rho_cap);
}

}  // namespace ubg::oracle
