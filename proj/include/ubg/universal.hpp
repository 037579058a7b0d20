#pragma once

// The operation-preserving map phi' from X into a commutative Banach group
// R^d (group operation = addition) sending x to y, and the checks that it
// is bounded by ||y||: ||phi'(z)|| <= ||y|| ||z|| on vector stages and
// sigma(a, b) = ||phi'(a) - phi'(b)|| <= ||y|| rho(a, b) on word stages.
// Euclidean norms are compared through their squares.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/config.hpp"
#include "ubg/construction.hpp"
#include "ubg/rational.hpp"
#include "ubg/report.hpp"
#include "ubg/stages.hpp"

namespace ubg {

using TargetVector = std::vector<Rational>;

inline TargetVector operator+(TargetVector a, const TargetVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline TargetVector operator-(TargetVector a, const TargetVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline TargetVector operator*(const Rational& s, TargetVector a) {
  for (auto& v : a) v *= s;
  return a;
}

inline std::string target_str(const TargetVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].str();
  return out + ")";
}

/// ||v||^2 in the target norm (exact for every kind).
inline Rational norm_squared(const TargetSpace& t, const TargetVector& v) {
  Rational out;
  for (const auto& c : v) {
    if (t.kind == NormKind::kEuclidean) {
      out += c * c;
    } else {
      Rational a = abs(c);
      if (t.kind == NormKind::kMax) {
        if (out < a * a) out = a * a;
      } else {
        out += a;
      }
    }
  }
  if (t.kind == NormKind::kAbs) out = out * out;
  return out;
}

/// ||v|| where it is rational (always for abs and max).
inline std::optional<Rational> target_norm(const TargetSpace& t, const TargetVector& v) {
  if (t.kind == NormKind::kEuclidean) {
    if (v.size() == 1) return abs(v[0]);
    return std::nullopt;
  }
  Rational out;
  for (const auto& c : v) {
    if (t.kind == NormKind::kMax) {
      if (out < abs(c)) out = abs(c);
    } else {
      out += abs(c);
    }
  }
  return out;
}

/// phi' by structural recursion on canonical forms, memoized per element.
class Morphism {
 public:
  Morphism(const ElementStore& store, TargetSpace target) : store_(&store), target_(std::move(target)) {}

  const TargetSpace& target() const { return target_; }
  std::size_t dim() const { return target_.dimension(); }

  TargetVector operator()(ElementId z) {
    if (memo_.size() <= z) memo_.resize(static_cast<std::size_t>(z) + 1);
    if (memo_[z]) return *memo_[z];
    const auto& t = store_->term(z);
    TargetVector v(dim());
    switch (t.kind) {
      case TermKind::kUnit: break;
      case TermKind::kGen:
        if (t.gen != 0) throw Error(ErrorKind::kConfig, "only the generator x has a prescribed image");
        v = target_.image;
        break;
      case TermKind::kWord:
        for (const auto& l : t.letters) {
          const TargetVector f = (*this)(l.base);
          v = l.sign > 0 ? v + f : v - f;
        }
        break;
      case TermKind::kCombo:
        for (const auto& e : t.combo) v = v + e.coef.to_rational() * (*this)(e.basis);
        break;
    }
    memo_[z] = std::move(v);
    return *memo_[z];
  }

 private:
  const ElementStore* store_;
  TargetSpace target_;
  std::vector<std::optional<TargetVector>> memo_;
};

namespace detail {

/// Tracks the worst ratio ||phi'||^2 / (||y||^2 value^2) seen.
struct Worst {
  std::optional<Rational> ratio_sq;
  void see(const Rational& lhs_sq, const Rational& rhs_sq) {
    if (rhs_sq.sign() == 0) return;
    Rational r = lhs_sq / rhs_sq;
    if (!ratio_sq || *ratio_sq < r) ratio_sq = r;
  }
  std::string str() const {
    if (!ratio_sq) return "n/a";
    auto root = [](std::int64_t v) -> std::optional<std::int64_t> {
      auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
      for (std::int64_t k = std::max<std::int64_t>(r - 1, 0); k <= r + 1; ++k) {
        if (k * k == v) return k;
      }
      return std::nullopt;
    };
    auto n = root(ratio_sq->num()), d = root(ratio_sq->den());
    if (n && d) return Rational(*n, *d).str();
    return "sqrt(" + ratio_sq->str() + ")";
  }
};

}  // namespace detail

/// ||phi'(z)|| <= ||y|| ||z|| on vector stages and sigma <= ||y|| rho on word
/// stages, for every built stage; equality at z = x where x has a value.
inline VerificationReport check_morphism_bound(const Construction& c, const TargetSpace& target) {
  VerificationReport rep;
  rep.suite = "universal bound, target " + target.str();
  Morphism phi(c.store, target);
  const Rational y_sq = norm_squared(target, target.image);
  detail::Worst worst;
  for (const auto& s : c.stages) {
    if (s.index == 0) continue;
    const std::size_t n = s.size();
    if (s.is_word()) {
      for (std::size_t i = 0; i < n; ++i) {
        const TargetVector fi = phi(s.members[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
          const Rational& r = s.rho_at(i, j);
          const Rational lhs = norm_squared(target, fi - phi(s.members[j]));
          const Rational rhs = y_sq * r * r;
          worst.see(lhs, rhs);
          rep.check(lhs <= rhs, "sigma <= rho", {s.members[i], s.members[j]}, [&] {
            return "sigma_" + std::to_string(s.index) + "(" + c.store.render(s.members[i]) + ", " +
                   c.store.render(s.members[j]) + ")^2 = " + lhs.str() + " exceeds (||y|| rho)^2 = " + rhs.str();
          });
        }
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const Rational lhs = norm_squared(target, phi(s.members[i]));
        const Rational rhs = y_sq * s.norm[i] * s.norm[i];
        worst.see(lhs, rhs);
        rep.check(lhs <= rhs, "pseudonorm <= norm", {s.members[i]}, [&] {
          return "||phi'(" + c.store.render(s.members[i]) + ")||^2 = " + lhs.str() + " exceeds " + rhs.str();
        });
      }
    }
  }
  // Tightness at the generator.
  const ElementId x = *c.store.find(ElementTerm::generator(0));
  const Rational x_sq = norm_squared(target, phi(x));
  for (const auto& s : c.stages) {
    if (!s.contains(x) || s.index == 0) continue;
    const Rational v = s.is_word() ? s.metric(x, kUnit) : s.norm_of(x);
    rep.check(x_sq == y_sq * v * v, "tight at x", {x}, [&] {
      return "stage " + std::to_string(s.index) + ": ||phi'(x)||^2 = " + x_sq.str() + ", ||y||^2 ||x||^2 = " +
             (y_sq * v * v).str();
    });
  }
  rep.notes.push_back("worst ratio " + worst.str());
  return rep;
}

/// phi' preserves products, inverses and the dyadic combinations that stay
/// in a built stage, sigma obeys the triangle inequality, and scaling y by
/// 2 or 1/2 scales phi'. Sampled beyond the budget.
inline VerificationReport check_morphism_operations(const Construction& c, const TargetSpace& target) {
  VerificationReport rep;
  rep.suite = "universal operations, target " + target.str();
  const auto& store = c.store;
  Morphism phi(c.store, target);
  const std::uint64_t budget = c.cfg.check_budget;
  std::mt19937_64 rng(c.cfg.seed);
  for (const auto& s : c.stages) {
    if (s.index == 0) continue;
    const std::uint64_t n = s.size();
    const bool sample = n * n > budget;
    if (sample) {
      rep.sampled = true;
      rep.seed = c.cfg.seed;
    }
    const std::uint64_t count = sample ? budget : n * n;
    for (std::uint64_t q = 0; q < count; ++q) {
      const std::uint64_t pick = sample ? rng() % (n * n) : q;
      const ElementId a = s.members[pick / n], b = s.members[pick % n];
      if (s.is_word()) {
        auto ab = store.find(store.group_mul(a, b));
        if (!ab || !s.contains(*ab)) continue;
        rep.check(phi(*ab) == phi(a) + phi(b), "product", {a, b}, [&] {
          return "phi'(" + store.render(*ab) + ") = " + target_str(phi(*ab)) + " differs from the sum";
        });
        const ElementId m = s.members[rng() % n];
        auto sigma = [&](ElementId u, ElementId v) { return target_norm(target, phi(u) - phi(v)); };
        if (auto am = sigma(a, m), ab_ = sigma(a, b), bm = sigma(b, m); am && ab_ && bm) {
          rep.check(*am <= *ab_ + *bm, "sigma triangle", {a, b, m}, [&] {
            return "sigma(" + store.render(a) + ", " + store.render(m) + ") = " + am->str() + " exceeds " +
                   ab_->str() + " + " + bm->str();
          });
        }
      } else {
        std::pair<Dyadic, ElementId> t[2] = {{Dyadic(1, 1), a}, {Dyadic(-1), b}};
        auto comb = store.find(store.linear_combination(t));
        if (!comb || !s.contains(*comb)) continue;
        rep.check(phi(*comb) == Rational(1, 2) * phi(a) - phi(b), "combination", {a, b}, [&] {
          return "phi'(" + store.render(*comb) + ") = " + target_str(phi(*comb)) + " is not (1/2)a - b";
        });
      }
    }
    if (s.is_word()) {
      for (auto a : s.members) {
        auto ai = store.find(store.group_inv(a));
        if (!ai) continue;
        rep.check(phi(*ai) == Rational(-1) * phi(a), "inverse", {a}, [&] {
          return "phi'(" + store.render(*ai) + ") = " + target_str(phi(*ai));
        });
      }
    }
  }
  for (const Rational& lambda : {Rational(2), Rational(1, 2)}) {
    TargetSpace scaled = target;
    scaled.image = lambda * target.image;
    Morphism psi(c.store, scaled);
    for (auto a : c.top().members) {
      rep.check(psi(a) == lambda * phi(a), "scaling", {a}, [&] {
        return "image of " + store.render(a) + " does not scale by " + lambda.str();
      });
    }
  }
  return rep;
}

/// sigma_n as a table over a word stage (squared for Euclidean targets).
inline std::vector<Rational> sigma_table(const Construction& c, const Stage& s, const TargetSpace& target) {
  Morphism phi(c.store, target);
  const std::size_t n = s.size();
  std::vector<Rational> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const TargetVector d = phi(s.members[i]) - phi(s.members[j]);
      auto v = target_norm(target, d);
      out[i * n + j] = v ? *v : norm_squared(target, d);
    }
  }
  return out;
}

inline std::vector<VerificationReport> check_universal(const Construction& c) {
  std::vector<VerificationReport> out;
  for (const auto& t : c.cfg.targets) {
    out.push_back(check_morphism_bound(c, t));
    out.push_back(check_morphism_operations(c, t));
  }
  return out;
}

}  // namespace ubg
