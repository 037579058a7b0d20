#pragma once

// Executable checks of conditions (1)-(6) and of bi-invariance over built
// stages. Every check reads sealed tables only. Quantifiers larger than the
// budget are sampled with a recorded seed; the bi-invariance checks are
// always exhaustive.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/construction.hpp"
#include "ubg/norm_ext.hpp"
#include "ubg/report.hpp"
#include "ubg/scaled.hpp"
#include "ubg/stages.hpp"
#include "ubg/word_space.hpp"

namespace ubg {

namespace detail {

/// A table of rationals as exact int64 multiples of 1/scale.
struct ScaledTable {
  std::int64_t scale = 1;
  std::vector<std::int64_t> v;
};

inline ScaledTable scaled_table(const std::vector<Rational>& values) {
  ScaledTable t;
  std::vector<Rational> distinct = values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  t.scale = common_scale(distinct) >> kScaleBits;
  t.v.reserve(values.size());
  for (const auto& r : values) t.v.push_back(to_scaled(r, t.scale));
  return t;
}

/// Runs f(i) for every i < count, or for `budget` uniform samples when the
/// quantifier is larger than the budget.
template <typename F>
void quantify(VerificationReport& rep, std::uint64_t count, std::uint64_t budget, std::uint64_t seed, F&& f) {
  if (count <= budget) {
    for (std::uint64_t i = 0; i < count; ++i) f(i);
    return;
  }
  rep.sampled = true;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < budget; ++s) f(rng() % count);
}

/// Stage positions (i, j, k) with members[i] * members[j] = members[k].
struct ProductTriple {
  std::uint32_t a, b, ab;
};

inline WordSpace stage_words(ElementStore& store, const Stage& s) {
  int len = 0;
  for (auto id : s.members) len = std::max(len, static_cast<int>(store.letters_of(id).size()));
  WordSpace ws(store, s.generators, len, s.size() + 1);
  for (std::uint32_t i = 0; i < s.size(); ++i) {
    if (ws.id(i) != s.members[i]) throw Error(ErrorKind::kInvariantViolation, "stage is not a full word ball");
  }
  return ws;
}

inline std::vector<ProductTriple> product_triples(const WordSpace& ws) {
  std::vector<ProductTriple> out;
  for (std::uint32_t i = 0; i < ws.size(); ++i) {
    for (std::uint32_t j = 0; j < ws.size(); ++j) {
      auto k = ws.product(i, j);
      if (k >= 0) out.push_back({i, j, static_cast<std::uint32_t>(k)});
    }
  }
  return out;
}

inline std::string rho_str(const ElementStore& store, const Stage& s, std::size_t i, std::size_t j) {
  return "rho_" + std::to_string(s.index) + "(" + store.render(s.members[i]) + ", " +
         store.render(s.members[j]) + ") = " + s.rho_at(i, j).str();
}

}  // namespace detail

// ---- individual conditions -------------------------------------------------------

/// (1) rho_n symmetric and zero exactly on the diagonal; ||a||_n = 0 iff a = e.
inline VerificationReport check_condition1(const ElementStore& store, const Stage& s) {
  VerificationReport rep;
  rep.suite = "condition (1) on X_" + std::to_string(s.index);
  const std::size_t n = s.size();
  if (s.is_word()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& r = s.rho_at(i, j);
        rep.check(r == s.rho_at(j, i) && r.sign() >= 0 && ((r.sign() == 0) == (i == j)), "(1)",
                  {s.members[i], s.members[j]}, [&] {
                    return detail::rho_str(store, s, i, j) + " but " + detail::rho_str(store, s, j, i);
                  });
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const Rational& v = s.norm[i];
      rep.check(v.sign() >= 0 && ((v.sign() == 0) == (s.members[i] == kUnit)), "(1)", {s.members[i]}, [&] {
        return "norm of " + store.render(s.members[i]) + " = " + v.str();
      });
    }
  }
  return rep;
}

/// (3) rho(ab, cd) <= rho(a, c) + rho(b, d) whenever a, b, c, d, ab, cd lie
/// in the stage, and rho(a, b) = rho(a^{-1}, b^{-1}).
inline VerificationReport check_condition3(ElementStore& store, const Stage& s, std::uint64_t budget,
                                           std::uint64_t seed) {
  VerificationReport rep;
  rep.suite = "condition (3) on X_" + std::to_string(s.index);
  auto ws = detail::stage_words(store, s);
  auto rho = detail::scaled_table(s.rho);
  const std::size_t n = s.size();
  const auto P = detail::product_triples(ws);
  const std::uint64_t m = P.size();
  detail::quantify(rep, m * m, budget, seed, [&](std::uint64_t q) {
    const auto& l = P[q / m];
    const auto& r = P[q % m];
    const std::int64_t lhs = rho.v[l.ab * n + r.ab];
    const std::int64_t rhs = rho.v[l.a * n + r.a] + rho.v[l.b * n + r.b];
    rep.check(lhs <= rhs, "(3)", {s.members[l.a], s.members[l.b], s.members[r.a], s.members[r.b]}, [&] {
      return detail::rho_str(store, s, l.ab, r.ab) + " exceeds " + detail::rho_str(store, s, l.a, r.a) + " + " +
             detail::rho_str(store, s, l.b, r.b);
    });
  });
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const auto ii = ws.inverse(i), jj = ws.inverse(j);
      rep.check(rho.v[i * n + j] == rho.v[ii * n + jj], "(3) inverse", {s.members[i], s.members[j]}, [&] {
        return detail::rho_str(store, s, i, j) + " but " + detail::rho_str(store, s, ii, jj);
      });
    }
  }
  return rep;
}

/// (4) and the odd clause of (6): rho(a, b) <= sum alpha_i rho(a, c_i) for
/// b = sum alpha_i c_i convex, and with c_i^{-1} for b = (sum alpha_i c_i)^{-1}.
inline VerificationReport check_convexity_metric(ElementStore& store, const Stage& s, bool inverse) {
  VerificationReport rep;
  const std::string clause = inverse ? "(6)" : "(4)";
  rep.suite = "condition " + clause + " on X_" + std::to_string(s.index);
  std::uint64_t skipped = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const ElementId b = s.members[j];
    std::optional<Vector> conv;
    if (inverse) {
      if (auto base = store.inverse_convex_base(b)) conv = store.convex_decomposition(*base);
    } else {
      conv = store.convex_decomposition(b);
    }
    if (!conv) continue;
    std::vector<std::pair<Rational, std::size_t>> terms;
    for (const auto& e : *conv) {
      const ElementId c = inverse ? store.inv(e.basis) : e.basis;
      if (!s.contains(c)) break;
      terms.emplace_back(e.coef.to_rational(), s.pos(c));
    }
    if (terms.size() != conv->size()) {
      ++skipped;
      continue;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      Rational rhs;
      for (const auto& [alpha, c] : terms) rhs += alpha * s.rho_at(i, c);
      rep.check(s.rho_at(i, j) <= rhs, clause.c_str(), {s.members[i], b}, [&] {
        return detail::rho_str(store, s, i, j) + " exceeds the convex bound " + rhs.str();
      });
    }
  }
  if (skipped) rep.notes.push_back(std::to_string(skipped) + " decompositions leave the stage");
  return rep;
}

/// (5) ||alpha a|| = |alpha| ||a|| and ||a + b|| <= ||a|| + ||b|| in stage.
inline VerificationReport check_condition5(const ElementStore& store, const Stage& s,
                                           const std::vector<Dyadic>& scalars, std::uint64_t budget,
                                           std::uint64_t seed) {
  VerificationReport rep;
  rep.suite = "condition (5) on X_" + std::to_string(s.index);
  VectorCoords coords(store, s, scalars);
  const std::size_t n = s.size();
  for (const auto& alpha : rule_multipliers(coords.scalars())) {
    const auto table = coords.combine_table(alpha, Dyadic(0));
    const Rational a = abs(alpha.to_rational());
    for (std::size_t u = 0; u < n; ++u) {
      auto w = coords.combine(table, u, u);
      if (w < 0) continue;
      rep.check(s.norm[w] == a * s.norm[u], "(5) homogeneity", {s.members[u]}, [&] {
        return "norm of " + alpha.str() + " * " + store.render(s.members[u]) + " is " + s.norm[w].str() +
               ", expected " + (a * s.norm[u]).str();
      });
    }
  }
  const auto plus = coords.combine_table(Dyadic(1), Dyadic(1));
  auto norm = detail::scaled_table(s.norm);
  detail::quantify(rep, static_cast<std::uint64_t>(n) * n, budget, seed, [&](std::uint64_t q) {
    const std::size_t u = q / n, v = q % n;
    auto w = coords.combine(plus, u, v);
    if (w < 0) return;
    rep.check(norm.v[w] <= norm.v[u] + norm.v[v], "(5) subadditivity", {s.members[u], s.members[v]}, [&] {
      return "norm of " + store.render(s.members[w]) + " = " + s.norm[w].str() + " exceeds " +
             s.norm[u].str() + " + " + s.norm[v].str();
    });
  });
  return rep;
}

/// Even clause of (6): ||a - b|| <= sum alpha_i ||a - c_i^{-1}|| for b in
/// X_{n-1} with b = (sum alpha_i c_i)^{-1}, all differences in stage.
inline VerificationReport check_condition6_norm(ElementStore& store, const Stage& s, const Stage& prev,
                                                const std::vector<Dyadic>& scalars) {
  VerificationReport rep;
  rep.suite = "condition (6) on X_" + std::to_string(s.index);
  VectorCoords coords(store, s, scalars);
  for (auto b : prev.members) {
    auto base = store.inverse_convex_base(b);
    if (!base) continue;
    const int bslot = coords.slot_of(b);
    std::vector<std::pair<Rational, int>> terms;
    for (const auto& e : *store.convex_decomposition(*base)) {
      terms.emplace_back(e.coef.to_rational(), coords.slot_of(store.inv(e.basis)));
    }
    for (std::size_t a = 0; a < s.size(); ++a) {
      auto ab = coords.shift(a, bslot, Dyadic(-1));
      if (ab < 0) continue;
      Rational rhs;
      bool inside = true;
      for (const auto& [alpha, slot] : terms) {
        auto ac = slot < 0 ? -1 : coords.shift(a, slot, Dyadic(-1));
        if (ac < 0) {
          inside = false;
          break;
        }
        rhs += alpha * s.norm[ac];
      }
      if (!inside) continue;
      rep.check(s.norm[ab] <= rhs, "(6)", {s.members[a], b}, [&] {
        return "norm of " + store.render(s.members[ab]) + " = " + s.norm[ab].str() + " exceeds " + rhs.str();
      });
    }
  }
  return rep;
}

// ---- bi-invariance ----------------------------------------------------------------

/// The Fact inequality rho(xy, vw) <= rho(x, v) + rho(y, w) over all in-stage
/// quadruples, the triangle inequality, and left/right translation
/// invariance on in-stage instances. Exhaustive.
inline VerificationReport check_biinvariance(ElementStore& store, const Stage& s) {
  VerificationReport rep;
  rep.suite = "bi-invariance on X_" + std::to_string(s.index);
  auto ws = detail::stage_words(store, s);
  auto rho = detail::scaled_table(s.rho);
  const std::size_t n = s.size();
  const auto P = detail::product_triples(ws);
  const std::int64_t* R = rho.v.data();

  auto bulk = [&](std::uint64_t count, std::uint64_t bad, const char* clause, std::vector<ElementId> ids,
                  const std::string& detail) {
    rep.attempted += count;
    rep.failed += bad;
    if (bad && rep.counterexamples.size() < VerificationReport::kMaxKept) {
      rep.counterexamples.push_back({clause, std::move(ids), detail});
    }
  };

  // Fact inequality, row by row so the first failure of each row is kept.
  for (const auto& l : P) {
    const std::int64_t* rab = R + static_cast<std::size_t>(l.ab) * n;
    const std::int64_t* ra = R + static_cast<std::size_t>(l.a) * n;
    const std::int64_t* rb = R + static_cast<std::size_t>(l.b) * n;
    std::uint64_t bad = 0;
    const detail::ProductTriple* first = nullptr;
    for (const auto& r : P) {
      if (rab[r.ab] > ra[r.a] + rb[r.b]) {
        if (!bad) first = &r;
        ++bad;
      }
    }
    if (bad) {
      bulk(P.size(), bad, "Fact", {s.members[l.a], s.members[l.b], s.members[first->a], s.members[first->b]},
           detail::rho_str(store, s, l.ab, first->ab) + " exceeds " + detail::rho_str(store, s, l.a, first->a) +
               " + " + detail::rho_str(store, s, l.b, first->b));
    } else {
      rep.attempted += P.size();
    }
  }

  // Triangle inequality.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::int64_t ab = R[a * n + b];
      const std::int64_t* rb = R + b * n;
      const std::int64_t* ra = R + a * n;
      std::uint64_t bad = 0;
      std::size_t first = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (ra[c] > ab + rb[c]) {
          if (!bad) first = c;
          ++bad;
        }
      }
      if (bad) {
        bulk(n, bad, "triangle", {s.members[a], s.members[b], s.members[first]},
             detail::rho_str(store, s, a, first) + " exceeds " + detail::rho_str(store, s, a, b) + " + " +
                 detail::rho_str(store, s, b, first));
      } else {
        rep.attempted += n;
      }
    }
  }

  // rho(ga, gb) = rho(a, b) = rho(ag, bg) when all products stay in stage.
  for (std::uint32_t g = 1; g < n; ++g) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> left, right;
    for (std::uint32_t a = 0; a < n; ++a) {
      if (auto k = ws.product(g, a); k >= 0) left.emplace_back(a, static_cast<std::uint32_t>(k));
      if (auto k = ws.product(a, g); k >= 0) right.emplace_back(a, static_cast<std::uint32_t>(k));
    }
    for (const auto* side : {&left, &right}) {
      const char* clause = side == &left ? "left invariance" : "right invariance";
      for (const auto& [a, ga] : *side) {
        for (const auto& [b, gb] : *side) {
          rep.check(R[a * n + b] == R[ga * n + gb], clause, {s.members[g], s.members[a], s.members[b]}, [&] {
            return detail::rho_str(store, s, a, b) + " but " + detail::rho_str(store, s, ga, gb);
          });
        }
      }
    }
  }
  return rep;
}

// ---- suites -----------------------------------------------------------------------

/// Conditions (1)-(6) over every built stage; clauses with no stage in
/// their scope are reported as vacuous.
inline std::vector<VerificationReport> check_conditions(Construction& c) {
  std::vector<VerificationReport> out;
  const auto& cfg = c.cfg;
  bool seen2 = false, seen4 = false, seen6 = false;
  for (std::size_t n = 1; n < c.stages.size(); ++n) {
    const Stage& s = c.stages[n];
    const Stage& prev = c.stages[n - 1];
    out.push_back(check_condition1(c.store, s));
    if (s.is_word()) {
      if (n >= 3) {
        out.push_back(check_extension_metric(c.store, s, prev));
        seen2 = true;
      }
      out.push_back(check_condition3(c.store, s, cfg.check_budget, cfg.seed));
      if (n >= 3) {
        out.push_back(check_convexity_metric(c.store, s, false));
        out.push_back(check_convexity_metric(c.store, s, true));
        seen4 = seen6 = true;
      }
    } else {
      out.push_back(check_extension_norm(c.store, s, prev));
      seen2 = true;
      const auto scalars = cfg.scalars_for(s.index / 2);
      out.push_back(check_condition5(c.store, s, scalars, cfg.check_budget, cfg.seed));
      out.push_back(check_condition6_norm(c.store, s, prev, scalars));
      seen6 = true;
    }
  }
  auto vacuous = [&](const char* clause) {
    VerificationReport r;
    r.suite = std::string("condition ") + clause;
    r.notes.push_back("vacuous: no built stage in scope");
    out.push_back(r);
  };
  if (!seen2) vacuous("(2)");
  if (!seen4) vacuous("(4)");
  if (!seen6) vacuous("(6)");
  return out;
}

inline std::vector<VerificationReport> check_biinvariance_all(Construction& c) {
  std::vector<VerificationReport> out;
  for (const auto& s : c.stages) {
    if (s.is_word()) out.push_back(check_biinvariance(c.store, s));
  }
  return out;
}

inline VerificationReport summarize(const std::string& name, const std::vector<VerificationReport>& parts) {
  VerificationReport total;
  total.suite = name;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace ubg
