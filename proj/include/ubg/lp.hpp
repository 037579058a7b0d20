#pragma once

// Exact linear programming over the rationals: two-phase dense tableau
// simplex with Bland's rule (no cycling), plus the molecule program used by
// the norm extension.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ubg/algebra.hpp"
#include "ubg/error.hpp"
#include "ubg/rational.hpp"

namespace ubg {

using BigRational = boost::multiprecision::cpp_rational;

inline BigRational to_big(const Rational& r) { return BigRational(r.num(), r.den()); }
inline BigRational to_big(const Dyadic& d) { return to_big(d.to_rational()); }

inline Rational from_big(const BigRational& r) {
  using boost::multiprecision::cpp_int;
  cpp_int n = boost::multiprecision::numerator(r);
  cpp_int d = boost::multiprecision::denominator(r);
  static const cpp_int lo = INT64_MIN, hi = INT64_MAX;
  if (n < lo || n > hi || d > hi) throw Error(ErrorKind::kOverflow, "LP value does not fit in 64 bits");
  return Rational(n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>());
}

template <typename T>
struct LpResult {
  T value;
  std::vector<T> x;
};

/// min c.x subject to A x = b, x >= 0. Returns nullopt when infeasible; an
/// unbounded program throws kInvariantViolation (costs here are never
/// negative). With T = Rational an intermediate overflow throws kOverflow.
template <typename T>
std::optional<LpResult<T>> solve_lp(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                                    const std::vector<T>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  // Columns: n structural, m artificial, then rhs.
  const std::size_t cols = n + m + 1;
  const T zero(0);
  std::vector<std::vector<T>> tab(m, std::vector<T>(cols, zero));
  std::vector<std::size_t> basic(m);
  for (std::size_t i = 0; i < m; ++i) {
    bool flip = b[i] < zero;
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = flip ? T(-A[i][j]) : A[i][j];
    tab[i][n + i] = T(1);
    tab[i][cols - 1] = flip ? T(-b[i]) : b[i];
    basic[i] = n + i;
  }

  auto pivot = [&](std::size_t r, std::size_t col) {
    const T p = tab[r][col];
    for (auto& v : tab[r]) {
      if (v != zero) v = v / p;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || tab[i][col] == zero) continue;
      const T f = tab[i][col];
      for (std::size_t j = 0; j < cols; ++j) {
        if (tab[r][j] != zero) tab[i][j] = tab[i][j] - f * tab[r][j];
      }
    }
    basic[r] = col;
  };

  // Bland's rule: lowest-index entering column, lowest-index leaving basic
  // variable among ratio ties.
  auto run = [&](const std::vector<T>& cost, std::size_t allowed) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed; ++j) {
        T d = cost[j];
        for (std::size_t i = 0; i < m; ++i) {
          if (tab[i][j] != zero && cost[basic[i]] != zero) d = d - cost[basic[i]] * tab[i][j];
        }
        if (d < zero) {
          enter = j;
          break;
        }
      }
      if (!enter) return;
      std::optional<std::size_t> leave;
      T best = zero;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(tab[i][*enter] > zero)) continue;
        T ratio = tab[i][cols - 1] / tab[i][*enter];
        if (!leave || ratio < best || (ratio == best && basic[i] < basic[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) throw Error(ErrorKind::kInvariantViolation, "unbounded linear program");
      pivot(*leave, *enter);
    }
  };

  std::vector<T> phase1(n + m, zero);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = T(1);
  run(phase1, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    if (basic[i] >= n && tab[i][cols - 1] != zero) return std::nullopt;
  }
  // Drive zero-valued artificials out of the basis where possible; the
  // rest sit on redundant rows and never re-enter.
  for (std::size_t i = 0; i < m; ++i) {
    if (basic[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (tab[i][j] != zero) {
        pivot(i, j);
        break;
      }
    }
  }
  std::vector<T> phase2(n + m, zero);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  run(phase2, n);

  LpResult<T> res{zero, std::vector<T>(n, zero)};
  for (std::size_t i = 0; i < m; ++i) {
    if (basic[i] < n) res.x[basic[i]] = tab[i][cols - 1];
  }
  for (std::size_t j = 0; j < n; ++j) res.value = res.value + c[j] * res.x[j];
  return res;
}

/// An elementary difference v = a - b with its cost.
struct Molecule {
  Vector v;
  Rational cost;
};

namespace detail {

template <typename T, typename Conv>
std::optional<T> molecule_lp(const std::vector<Molecule>& molecules, const Vector& target, Conv conv) {
  std::vector<ElementId> coords;
  for (const auto& e : target) coords.push_back(e.basis);
  for (const auto& mol : molecules) {
    for (const auto& e : mol.v) coords.push_back(e.basis);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  auto row_of = [&](ElementId id) {
    return static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), id) - coords.begin());
  };
  const std::size_t m = coords.size();
  const std::size_t k = molecules.size();
  const T zero(0);
  std::vector<std::vector<T>> A(m, std::vector<T>(2 * k, zero));
  std::vector<T> b(m, zero), c(2 * k, zero);
  for (std::size_t j = 0; j < k; ++j) {
    for (const auto& e : molecules[j].v) {
      T v = conv(e.coef.to_rational());
      A[row_of(e.basis)][2 * j] = v;
      A[row_of(e.basis)][2 * j + 1] = T(-v);
    }
    c[2 * j] = c[2 * j + 1] = conv(molecules[j].cost);
  }
  for (const auto& e : target) b[row_of(e.basis)] = conv(e.coef.to_rational());
  auto res = solve_lp<T>(A, b, c);
  if (!res) return std::nullopt;
  return res->value;
}

}  // namespace detail

/// min sum |beta_j| cost_j subject to sum beta_j v_j = target.
/// Throws kInfeasible when target is outside the span of the molecules.
inline Rational solve_molecule_lp(const std::vector<Molecule>& molecules, const Vector& target) {
  std::optional<Rational> out;
  try {
    out = detail::molecule_lp<Rational>(molecules, target, [](const Rational& r) { return r; });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kOverflow) throw;
    auto big = detail::molecule_lp<BigRational>(molecules, target,
                                                [](const Rational& r) { return to_big(r); });
    if (big) out = from_big(*big);
  }
  if (!out) throw Error(ErrorKind::kInfeasible, "target is not a combination of elementary differences");
  return *out;
}

}  // namespace ubg
