#pragma once

// Expression language for naming elements of X.
//
//   expr   := sum
//   sum    := prod (('+' | '-') prod)*
//   prod   := factor ('.' factor)*
//   factor := scalar? (atom | 'inv(' expr ')' | '(' expr ')')
//   scalar := ['-'] integer ['/' power-of-two]
//   atom   := 'x' | 'e'
//
// A scalar scales the factor it precedes. '.' is group multiplication and
// '+' formal addition. A sum term that is a single scaled factor merges
// into the enclosing sum, so "1/2 x + 1/2 inv(x)" is one two-term Sum.

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/construction.hpp"
#include "ubg/error.hpp"
#include "ubg/rational.hpp"

namespace ubg {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { kX, kE, kInv, kProd, kSum };

  Kind kind = Kind::kE;
  ExprPtr lhs, rhs;                               // kInv uses lhs; kProd both
  std::vector<std::pair<Dyadic, ExprPtr>> terms;  // kSum

  static ExprPtr x() { return std::make_shared<Expr>(Expr{Kind::kX, nullptr, nullptr, {}}); }
  static ExprPtr e() { return std::make_shared<Expr>(Expr{Kind::kE, nullptr, nullptr, {}}); }
  static ExprPtr inv(ExprPtr a) { return std::make_shared<Expr>(Expr{Kind::kInv, std::move(a), nullptr, {}}); }
  static ExprPtr prod(ExprPtr a, ExprPtr b) {
    return std::make_shared<Expr>(Expr{Kind::kProd, std::move(a), std::move(b), {}});
  }
  static ExprPtr sum(std::vector<std::pair<Dyadic, ExprPtr>> t) {
    return std::make_shared<Expr>(Expr{Kind::kSum, nullptr, nullptr, std::move(t)});
  }
};

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::kX:
    case Expr::Kind::kE: return true;
    case Expr::Kind::kInv: return *a.lhs == *b.lhs;
    case Expr::Kind::kProd: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
    case Expr::Kind::kSum:
      if (a.terms.size() != b.terms.size()) return false;
      for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (a.terms[i].first != b.terms[i].first || !(*a.terms[i].second == *b.terms[i].second)) return false;
      }
      return true;
  }
  return false;
}

// ---- rendering --------------------------------------------------------------------

inline std::string render_expr(const Expr& e);

namespace detail {

/// Operand of a scalar or of '.': parenthesized unless it is an atom or inv().
inline std::string render_operand(const Expr& e) {
  if (e.kind == Expr::Kind::kX || e.kind == Expr::Kind::kE || e.kind == Expr::Kind::kInv) return render_expr(e);
  return "(" + render_expr(e) + ")";
}

}  // namespace detail

inline std::string render_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kX: return "x";
    case Expr::Kind::kE: return "e";
    case Expr::Kind::kInv: return "inv(" + render_expr(*e.lhs) + ")";
    case Expr::Kind::kProd: {
      const bool left_plain = e.lhs->kind == Expr::Kind::kProd;
      return (left_plain ? render_expr(*e.lhs) : detail::render_operand(*e.lhs)) + " . " +
             detail::render_operand(*e.rhs);
    }
    case Expr::Kind::kSum: {
      std::string out;
      for (std::size_t i = 0; i < e.terms.size(); ++i) {
        const auto& [c, t] = e.terms[i];
        if (i == 0) {
          out += c.str();
        } else {
          out += c.sign() < 0 ? " - " : " + ";
          out += abs(c).str();
        }
        out += " " + detail::render_operand(*t);
      }
      return out;
    }
  }
  return "";
}

// ---- parsing ----------------------------------------------------------------------

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  ExprPtr parse() {
    auto e = sum();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::kSyntax, what + " at offset " + std::to_string(i_));
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  bool at_digit() {
    skip();
    return i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]));
  }

  std::int64_t integer() {
    if (!at_digit()) fail("expected a number");
    std::int64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      if (v > (INT64_MAX - 9) / 10) fail("number too large");
      v = v * 10 + (s_[i_++] - '0');
    }
    return v;
  }

  std::optional<Dyadic> scalar(bool allow_sign) {
    const std::size_t start = i_;
    bool neg = false;
    if (allow_sign && peek('-')) {
      ++i_;
      neg = true;
      if (!at_digit()) {
        i_ = start;
        return std::nullopt;
      }
    }
    if (!at_digit()) return std::nullopt;
    std::int64_t num = integer();
    int k = 0;
    if (peek('/')) {
      ++i_;
      const std::size_t at = i_;
      std::int64_t den = integer();
      if (den <= 0 || (den & (den - 1)) != 0) {
        throw Error(ErrorKind::kScalarDomain,
                    "denominator " + std::to_string(den) + " is not a power of two at offset " + std::to_string(at));
      }
      while ((std::int64_t{1} << k) != den) ++k;
    }
    return Dyadic(neg ? -num : num, k);
  }

  ExprPtr sum() {
    std::vector<std::pair<Dyadic, ExprPtr>> terms;
    auto add = [&](Dyadic sign, ExprPtr p) {
      if (p->kind == Expr::Kind::kSum && p->terms.size() == 1) {
        terms.emplace_back(sign * p->terms[0].first, p->terms[0].second);
      } else {
        terms.emplace_back(sign, std::move(p));
      }
    };
    ExprPtr first = prod(true);
    bool more = false;
    for (;;) {
      Dyadic sign;
      if (peek('+')) {
        sign = Dyadic(1);
      } else if (peek('-')) {
        sign = Dyadic(-1);
      } else {
        break;
      }
      ++i_;
      if (!more) add(Dyadic(1), first);
      more = true;
      add(sign, prod(false));
    }
    return more ? Expr::sum(std::move(terms)) : first;
  }

  ExprPtr prod(bool allow_sign) {
    ExprPtr e = factor(allow_sign);
    while (peek('.')) {
      ++i_;
      e = Expr::prod(e, factor(true));
    }
    return e;
  }

  ExprPtr factor(bool allow_sign) {
    auto c = scalar(allow_sign);
    ExprPtr base;
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    if (s_.compare(i_, 3, "inv") == 0) {
      i_ += 3;
      expect('(');
      base = Expr::inv(sum());
      expect(')');
    } else if (s_[i_] == '(') {
      ++i_;
      base = sum();
      expect(')');
    } else if (s_[i_] == 'x') {
      ++i_;
      base = Expr::x();
    } else if (s_[i_] == 'e') {
      ++i_;
      base = Expr::e();
    } else {
      fail("unexpected '" + std::string(1, s_[i_]) + "'");
    }
    if (c) return Expr::sum({{*c, base}});
    return base;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

inline ExprPtr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

// ---- evaluation -------------------------------------------------------------------

/// Element named by an expression, computed with the algebra operations.
/// Intermediate values may leave the built stages; the result may not.
inline ElementId eval_expr(const Expr& e, Construction& c) {
  auto& store = c.store;
  std::function<ElementId(const Expr&)> ev = [&](const Expr& n) -> ElementId {
    switch (n.kind) {
      case Expr::Kind::kX: return store.intern(ElementTerm::generator(0));
      case Expr::Kind::kE: return kUnit;
      case Expr::Kind::kInv: return store.inv(ev(*n.lhs));
      case Expr::Kind::kProd: {
        const ElementId a = ev(*n.lhs);
        return store.mul(a, ev(*n.rhs));
      }
      case Expr::Kind::kSum: {
        std::vector<std::pair<Dyadic, ElementId>> t;
        for (const auto& [k, sub] : n.terms) t.emplace_back(k, ev(*sub));
        return store.combine(t);
      }
    }
    return kUnit;
  };
  const ElementId id = ev(e);
  if (!c.top().contains(id)) {
    throw Error(ErrorKind::kOutOfUniverse, store.render(id) + " is outside X_" + std::to_string(c.top_index()) +
                                               "; first missing stage is X_" + std::to_string(c.top_index() + 1));
  }
  return id;
}

inline ElementId eval_text(std::string_view text, Construction& c) { return eval_expr(*parse_expr(text), c); }

}  // namespace ubg
