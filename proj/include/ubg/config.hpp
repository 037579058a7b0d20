#pragma once

// Desk-scale parameters of the construction and their key/value file form.
//
//   # comment
//   stage_count       = 3
//   scalar_set        = -1, -1/2, 0, 1/2, 1     (or "literal" for D_n)
//   word_cap          = 2                       (or "literal" for 2n+1)
//   decomp_cap        = 6
//   sum_cap           = 4
//   ambient_expansion = 1
//   member_budget     = 250000
//   sweep_cap_factor  = 10
//   check_budget      = 10000000
//   seed              = 1
//   targets           = abs:1; abs:3/2; max:1,-1/2

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ubg/error.hpp"
#include "ubg/rational.hpp"

namespace ubg {

enum class NormKind { kAbs, kEuclidean, kMax };

/// A commutative Banach space R^d with an exact norm, and the image of x.
struct TargetSpace {
  NormKind kind = NormKind::kAbs;
  std::vector<Rational> image;

  std::size_t dimension() const { return image.size(); }

  std::string str() const {
    std::string out = kind == NormKind::kAbs ? "abs:" : kind == NormKind::kMax ? "max:" : "euclid:";
    for (std::size_t i = 0; i < image.size(); ++i) out += (i ? "," : "") + image[i].str();
    return out;
  }

  static TargetSpace parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, "target needs kind:values, got '" + std::string(text) + "'");
    }
    std::string kind(text.substr(0, colon));
    kind.erase(std::remove_if(kind.begin(), kind.end(), ::isspace), kind.end());
    TargetSpace t;
    if (kind == "abs") t.kind = NormKind::kAbs;
    else if (kind == "max") t.kind = NormKind::kMax;
    else if (kind == "euclid") t.kind = NormKind::kEuclidean;
    else throw Error(ErrorKind::kConfig, "unknown target kind '" + kind + "'");
    std::string rest(text.substr(colon + 1));
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) t.image.push_back(parse_rational(item));
    if (t.image.empty()) throw Error(ErrorKind::kConfig, "target without image vector");
    if (t.kind == NormKind::kAbs && t.image.size() != 1) {
      throw Error(ErrorKind::kConfig, "abs target must be one-dimensional");
    }
    return t;
  }
};

struct Config {
  int stage_count = 3;
  bool literal_scalars = false;
  std::vector<Dyadic> scalar_set = {Dyadic(-1), Dyadic(-1, 1), Dyadic(0), Dyadic(1, 1), Dyadic(1)};
  bool literal_word_cap = false;
  int word_cap = 2;
  int decomp_cap = 6;
  int sum_cap = 4;
  int ambient_expansion = 1;
  std::uint64_t member_budget = 250000;
  int sweep_cap_factor = 10;
  std::uint64_t check_budget = 10'000'000;
  std::uint64_t seed = 1;
  std::vector<TargetSpace> targets = {TargetSpace::parse("abs:1"), TargetSpace::parse("abs:3/2"),
                                      TargetSpace::parse("max:1,-1/2")};

  /// Literal parameters through X_2 (D_1 scalars, W_1 at stage one).
  static Config literal(int stage_count = 2) {
    Config c;
    c.stage_count = stage_count;
    c.literal_scalars = true;
    c.literal_word_cap = true;
    return c;
  }

  /// D_n = { a / 2^n : a in [-2^{2n}, 2^{2n}] }.
  static std::vector<Dyadic> literal_scalar_set(int n) {
    std::vector<Dyadic> out;
    std::int64_t lim = std::int64_t{1} << (2 * n);
    for (std::int64_t a = -lim; a <= lim; ++a) out.emplace_back(a, n);
    return out;
  }

  /// Scalars used at vector stage 2n, sorted ascending.
  std::vector<Dyadic> scalars_for(int n) const {
    auto s = literal_scalars ? literal_scalar_set(n) : scalar_set;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  /// Word-length cap at word stage 2n+1. The full cap is 2n+1; a numeric
  /// word_cap is applied as min(2n+1, word_cap), so stage one is always W_1.
  int word_cap_for(int n) const {
    int full_cap = 2 * n + 1;
    return literal_word_cap ? full_cap : std::min(full_cap, word_cap);
  }

  void validate() const {
    if (stage_count < 1) throw Error(ErrorKind::kConfig, "stage_count must be >= 1");
    if (!literal_scalars) {
      auto has = [&](const Dyadic& d) {
        return std::find(scalar_set.begin(), scalar_set.end(), d) != scalar_set.end();
      };
      if (!has(Dyadic(0)) || !has(Dyadic(1)) || !has(Dyadic(-1))) {
        throw Error(ErrorKind::kConfig, "scalar_set must contain -1, 0 and 1");
      }
      for (const auto& d : scalar_set) {
        if (!has(-d)) throw Error(ErrorKind::kConfig, "scalar_set must be symmetric under negation");
      }
    }
    if (!literal_word_cap && word_cap < 1) throw Error(ErrorKind::kConfig, "word_cap must be >= 1");
    if (decomp_cap < 2 || sum_cap < 2) throw Error(ErrorKind::kConfig, "caps must be >= 2");
    if (ambient_expansion < 1) throw Error(ErrorKind::kConfig, "ambient_expansion must be >= 1");
    if (sweep_cap_factor < 1) throw Error(ErrorKind::kConfig, "sweep_cap_factor must be >= 1");
  }

  static Config parse(std::string_view text) {
    Config c;
    std::stringstream ss{std::string(text)};
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto as_int = [](const std::string& key, const std::string& v) -> std::int64_t {
      Rational r = parse_rational(v);
      if (!r.is_integer()) throw Error(ErrorKind::kConfig, key + " must be an integer");
      return r.num();
    };
    while (std::getline(ss, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorKind::kConfig, "line " + std::to_string(lineno) + ": expected key = value");
      }
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key == "stage_count") {
        c.stage_count = static_cast<int>(as_int(key, value));
      } else if (key == "scalar_set") {
        if (value == "literal") {
          c.literal_scalars = true;
        } else {
          c.literal_scalars = false;
          c.scalar_set.clear();
          std::stringstream vs(value);
          std::string item;
          while (std::getline(vs, item, ',')) {
            c.scalar_set.push_back(Dyadic::from_rational(parse_rational(item)));
          }
        }
      } else if (key == "word_cap") {
        if (value == "literal") {
          c.literal_word_cap = true;
        } else {
          c.literal_word_cap = false;
          c.word_cap = static_cast<int>(as_int(key, value));
        }
      } else if (key == "decomp_cap") {
        c.decomp_cap = static_cast<int>(as_int(key, value));
      } else if (key == "sum_cap") {
        c.sum_cap = static_cast<int>(as_int(key, value));
      } else if (key == "ambient_expansion") {
        c.ambient_expansion = static_cast<int>(as_int(key, value));
      } else if (key == "member_budget") {
        c.member_budget = static_cast<std::uint64_t>(as_int(key, value));
      } else if (key == "sweep_cap_factor") {
        c.sweep_cap_factor = static_cast<int>(as_int(key, value));
      } else if (key == "check_budget") {
        c.check_budget = static_cast<std::uint64_t>(as_int(key, value));
      } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(as_int(key, value));
      } else if (key == "targets") {
        c.targets.clear();
        std::stringstream vs(value);
        std::string item;
        while (std::getline(vs, item, ';')) {
          item = trim(item);
          if (!item.empty()) c.targets.push_back(TargetSpace::parse(item));
        }
      } else {
        throw Error(ErrorKind::kConfig, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
    }
    c.validate();
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIo, "cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  /// Canonical key/value rendering (echoed into exports).
  std::string str() const {
    std::ostringstream os;
    os << "stage_count = " << stage_count << "\n";
    os << "scalar_set = ";
    if (literal_scalars) {
      os << "literal";
    } else {
      auto s = scalars_for(0);
      for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ", " : "") << s[i];
    }
    os << "\nword_cap = " << (literal_word_cap ? std::string("literal") : std::to_string(word_cap)) << "\n";
    os << "decomp_cap = " << decomp_cap << "\nsum_cap = " << sum_cap
       << "\nambient_expansion = " << ambient_expansion << "\nmember_budget = " << member_budget
       << "\nsweep_cap_factor = " << sweep_cap_factor << "\ncheck_budget = " << check_budget
       << "\nseed = " << seed << "\ntargets = ";
    for (std::size_t i = 0; i < targets.size(); ++i) os << (i ? "; " : "") << targets[i].str();
    os << "\n";
    return os.str();
  }
};

}  // namespace ubg
