#pragma once

// rho_{n+1} on a word stage X_{n+1} from ||.||_n on the vector stage X_n:
// the auxiliary function delta, then the greatest function below delta
// satisfying the metric rules (a)-(e) and the triangle inequality, computed
// by relaxation over an ambient set of reduced words.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/config.hpp"
#include "ubg/error.hpp"
#include "ubg/rational.hpp"
#include "ubg/relax.hpp"
#include "ubg/report.hpp"
#include "ubg/scaled.hpp"
#include "ubg/stages.hpp"
#include "ubg/word_space.hpp"

namespace ubg {

/// ||a - b||_n when a, b and a - b all lie in the vector stage.
class NormDiff {
 public:
  NormDiff(const ElementStore& store, const Stage& stage) : store_(&store), stage_(&stage) {}

  std::optional<ElementId> diff_id(ElementId a, ElementId b) const {
    if (!stage_->contains(a) || !stage_->contains(b)) return std::nullopt;
    std::pair<Dyadic, ElementId> t[2] = {{Dyadic(1), a}, {Dyadic(-1), b}};
    auto id = store_->find(store_->linear_combination(t));
    if (!id || !stage_->contains(*id)) return std::nullopt;
    return id;
  }

  std::optional<Rational> operator()(ElementId a, ElementId b) const {
    auto id = diff_id(a, b);
    if (!id) return std::nullopt;
    return stage_->norm_of(*id);
  }

 private:
  const ElementStore* store_;
  const Stage* stage_;
};

/// Scale for relaxing a table whose inputs are the given stage values.
inline std::int64_t metric_scale(const Stage& prev) { return common_scale(prev.norm); }

// ---- delta ----------------------------------------------------------------------

/// delta on the first `stage_size` words of the ambient space (row-major
/// over the whole ambient space, +infinity outside the stage). Rank-0
/// pairs use a shortest-path search over pairs of partial products
/// ((a_1...a_k)', (b_1...b_k)') inside the ambient space; positive ranks
/// follow the case table and the convex recursions.
inline std::vector<std::int64_t> compute_delta(ElementStore& store, const WordSpace& ws,
                                               std::size_t stage_size, const Stage& prev,
                                               std::int64_t scale) {
  const std::size_t N = ws.size();
  const NormDiff norm_diff(store, prev);

  // Pieces (a, b) with a, b, a - b in X_n.
  struct Piece {
    std::uint32_t a, b;  // slots in prev.members
    std::int64_t cost;
  };
  std::vector<Piece> pieces;
  std::vector<std::uint32_t> factor_index;  // ambient index of each X_n member
  for (auto id : prev.members) {
    auto i = ws.index_of(id);
    if (i < 0) throw Error(ErrorKind::kInvariantViolation, "X_n member missing from the word stage");
    factor_index.push_back(static_cast<std::uint32_t>(i));
  }
  for (std::size_t i = 0; i < prev.size(); ++i) {
    for (std::size_t j = 0; j < prev.size(); ++j) {
      if (auto c = norm_diff(prev.members[i], prev.members[j])) {
        pieces.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), to_scaled(*c, scale)});
      }
    }
  }
  // Right multiplication table: word P times factor a.
  std::vector<std::int32_t> right(N * prev.size());
  for (std::uint32_t p = 0; p < N; ++p) {
    for (std::size_t k = 0; k < factor_index.size(); ++k) right[p * prev.size() + k] = ws.product(p, factor_index[k]);
  }

  std::vector<std::int64_t> dist(N * N, kInfScaled);
  using Item = std::pair<std::int64_t, std::uint64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[0] = 0;
  heap.emplace(0, 0);
  while (!heap.empty()) {
    auto [d, state] = heap.top();
    heap.pop();
    if (d != dist[state]) continue;
    const std::uint64_t P = state / N, Q = state % N;
    for (const auto& pc : pieces) {
      auto np = right[P * prev.size() + pc.a];
      auto nq = right[Q * prev.size() + pc.b];
      if (np < 0 || nq < 0) continue;
      std::uint64_t ns = static_cast<std::uint64_t>(np) * N + static_cast<std::uint64_t>(nq);
      std::int64_t nd = d + pc.cost;
      if (nd < dist[ns]) {
        dist[ns] = nd;
        heap.emplace(nd, ns);
      }
    }
  }

  std::vector<std::int64_t> delta(N * N, kInfScaled);
  std::vector<char> known(stage_size * stage_size, 0);
  std::vector<int> rank(stage_size);
  for (std::size_t i = 0; i < stage_size; ++i) rank[i] = store.rank(ws.id(i));

  // z with z and z^{-1} in X_n.
  std::vector<ElementId> two_sided;
  for (auto id : prev.members) {
    auto inv = ws.inverse(static_cast<std::uint32_t>(ws.index_of(id)));
    if (prev.contains(ws.id(inv))) two_sided.push_back(id);
  }
  auto nd_scaled = [&](ElementId a, ElementId b) -> std::int64_t {
    auto v = norm_diff(a, b);
    return v ? to_scaled(*v, scale) : kInfScaled;
  };
  auto inv_id = [&](ElementId a) { return ws.id(ws.inverse(static_cast<std::uint32_t>(ws.index_of(a)))); };

  auto both_positive = [&](ElementId x, ElementId y) -> std::int64_t {
    const ElementId xi = inv_id(x), yi = inv_id(y);
    const bool x_in = prev.contains(x), y_in = prev.contains(y);
    const bool xi_in = prev.contains(xi), yi_in = prev.contains(yi);
    if (!x_in && !xi_in) {
      throw Error(ErrorKind::kInvariantViolation,
                  "element " + std::to_string(x) + " has positive rank but neither it nor its inverse is in X_n");
    }
    if (!y_in && !yi_in) {
      throw Error(ErrorKind::kInvariantViolation,
                  "element " + std::to_string(y) + " has positive rank but neither it nor its inverse is in X_n");
    }
    std::int64_t best = kInfScaled;
    if (x_in && y_in) best = std::min(best, nd_scaled(x, y));
    if (xi_in && yi_in) best = std::min(best, nd_scaled(xi, yi));
    if (x_in && yi_in) {
      for (auto z : two_sided) {
        auto a = nd_scaled(x, z), b = nd_scaled(inv_id(z), yi);
        if (a < kInfScaled && b < kInfScaled) best = std::min(best, a + b);
      }
    }
    if (xi_in && y_in) {
      for (auto z : two_sided) {
        auto a = nd_scaled(xi, inv_id(z)), b = nd_scaled(z, y);
        if (a < kInfScaled && b < kInfScaled) best = std::min(best, a + b);
      }
    }
    return best;
  };

  std::function<std::int64_t(std::uint32_t, std::uint32_t)> get = [&](std::uint32_t i,
                                                                      std::uint32_t j) -> std::int64_t {
    if (known[i * stage_size + j]) return delta[i * N + j];
    std::int64_t v;
    if (rank[i] == 0 && rank[j] == 0) {
      v = std::min(dist[i * N + j], dist[j * N + i]);
    } else if (rank[i] > 0 && rank[j] > 0) {
      v = std::min(both_positive(ws.id(i), ws.id(j)), both_positive(ws.id(j), ws.id(i)));
    } else {
      const std::uint32_t x = rank[i] == 0 ? i : j;
      const std::uint32_t y = rank[i] == 0 ? j : i;
      const ElementId yid = ws.id(y);
      std::optional<ScaledConvex> conv = scaled_convex(store, yid);
      bool inverted = false;
      if (!conv) {
        auto base = store.inverse_convex_base(yid);
        if (!base) throw Error(ErrorKind::kInvariantViolation, "positive rank without a convex form");
        conv = scaled_convex(store, *base);
        inverted = true;
      }
      v = conv->apply([&](ElementId z) {
        auto zi = ws.index_of(inverted ? inv_id(z) : z);
        if (zi < 0 || static_cast<std::size_t>(zi) >= stage_size) {
          throw Error(ErrorKind::kInvariantViolation, "convex support outside the word stage");
        }
        return get(x, static_cast<std::uint32_t>(zi));
      });
    }
    delta[i * N + j] = delta[j * N + i] = v;
    known[i * stage_size + j] = known[j * stage_size + i] = 1;
    return v;
  };
  for (std::uint32_t i = 0; i < stage_size; ++i) {
    for (std::uint32_t j = 0; j < stage_size; ++j) get(i, j);
  }
  return delta;
}

// ---- relaxation system -------------------------------------------------------------

class MetricSystem {
 public:
  using value_type = std::int64_t;

  MetricSystem(const ElementStore& store, const WordSpace& ws, std::vector<std::int64_t> init,
               bool fast_kernel)
      : ws_(&ws), N_(ws.size()), init_(std::move(init)), fast_(fast_kernel && ws.max_len() == 2) {
    splits_ = ws.splits();
    for (std::uint32_t y = 0; y < N_; ++y) {
      const ElementId id = ws.id(y);
      bool inverted = false;
      auto conv = scaled_convex(store, id);
      if (!conv) {
        if (auto base = store.inverse_convex_base(id)) {
          conv = scaled_convex(store, *base);
          inverted = true;
        }
      }
      if (!conv) continue;
      ConvexRule rule{y, conv->shift, {}};
      bool inside = true;
      for (const auto& [num, z] : conv->terms) {
        auto zi = ws.index_of(z);
        if (zi >= 0 && inverted) zi = static_cast<std::int32_t>(ws.inverse(static_cast<std::uint32_t>(zi)));
        if (zi < 0) inside = false;
        rule.terms.emplace_back(num, static_cast<std::uint32_t>(std::max(zi, 0)));
      }
      if (inside) convex_.push_back(std::move(rule));
    }
    if (fast_) prepare_fast();
  }

  bool fast() const { return fast_; }
  std::vector<std::int64_t> initial() const { return init_; }

  void sweep(const std::vector<std::int64_t>& cur, std::vector<std::int64_t>& next) {
    const std::size_t N = N_;
    // (b) simultaneous inversion
    for (std::uint32_t u = 0; u < N; ++u) {
      const std::size_t iu = ws_->inverse(u);
      for (std::uint32_t v = 0; v < N; ++v) {
        next[u * N + v] = std::min(next[u * N + v], cur[iu * N + ws_->inverse(v)]);
      }
    }
    // (c) splitting
    if (fast_) {
      split_fast(cur, next);
    } else {
      for (std::uint32_t u = 0; u < N; ++u) {
        for (std::uint32_t v = u; v < N; ++v) split_generic(cur, next, u, v);
      }
    }
    // (d), (e) convexity and inverse convexity
    for (const auto& rule : convex_) {
      for (std::uint32_t x = 0; x < N; ++x) {
        detail::i128 sum = 0;
        bool finite = true;
        for (const auto& [num, z] : rule.terms) {
          std::int64_t v = cur[x * N + z];
          if (v >= kInfScaled) {
            finite = false;
            break;
          }
          sum += static_cast<detail::i128>(num) * v;
        }
        if (!finite) continue;
        if ((sum & ((detail::i128{1} << rule.shift) - 1)) != 0) {
          throw Error(ErrorKind::kScaleExhausted, "convexity rule needs a finer scale");
        }
        auto val = static_cast<std::int64_t>(sum >> rule.shift);
        auto& a = next[x * N + rule.y];
        auto& b = next[static_cast<std::size_t>(rule.y) * N + x];
        a = std::min(a, val);
        b = std::min(b, val);
      }
    }
    // (f) triangle inequality, closed in place
    triangle_closure(next);
  }

  /// Floyd-Warshall over the table in blocks of pivot rows. Every update
  /// is a genuine path bound, so the in-place order only affects how many
  /// sweeps the closure takes, never soundness.
  void triangle_closure(std::vector<std::int64_t>& d) const {
    const std::size_t N = N_;
    constexpr std::size_t kBlock = 64;
    for (std::size_t k0 = 0; k0 < N; k0 += kBlock) {
      const std::size_t k1 = std::min(N, k0 + kBlock);
      for (std::size_t i = 0; i < N; ++i) {
        std::int64_t* __restrict ri = &d[i * N];
        for (std::size_t k = k0; k < k1; ++k) {
          const std::int64_t a = ri[k];
          if (a >= kInfScaled) continue;
          const std::int64_t* __restrict rk = &d[k * N];
          for (std::size_t j = 0; j < N; ++j) ri[j] = std::min(ri[j], a + rk[j]);
        }
      }
    }
  }

 private:
  struct ConvexRule {
    std::uint32_t y;
    int shift;
    std::vector<std::pair<std::int64_t, std::uint32_t>> terms;
  };

  void split_generic(const std::vector<std::int64_t>& cur, std::vector<std::int64_t>& next,
                     std::uint32_t u, std::uint32_t v) const {
    const std::size_t N = N_;
    std::int64_t best = kInfScaled;
    for (const auto& [a, b] : splits_[u]) {
      const std::int64_t* ra = &cur[a * N];
      const std::int64_t* rb = &cur[b * N];
      for (const auto& [c, d] : splits_[v]) best = std::min(best, ra[c] + rb[d]);
    }
    best = std::min(best, kInfScaled);
    next[u * N + v] = std::min(next[u * N + v], best);
    next[v * N + u] = std::min(next[v * N + u], best);
  }

  // Words of length <= 2: every split of pq is (pt, t^{-1}q) for t empty or
  // a letter, and f(t^{-1}q, t'^{-1}s) = f(q^{-1}t, s^{-1}t'), so with
  // K_{pr}[t][t'] = f(pt, rt') the split bound for (pq, rs) is
  // min over (t, t') of K_{pr} + K_{q^{-1}s^{-1}}.
  void prepare_fast() {
    L_ = ws_->alphabet();
    T_ = L_ + 1;
    stride_ = (T_ * T_ + 7) / 8 * 8;
    H_.assign(static_cast<std::size_t>(L_) * T_, 0);
    W2_.assign(static_cast<std::size_t>(L_) * L_, -1);
    for (int p = 0; p < L_; ++p) {
      const auto pw = static_cast<std::uint32_t>(ws_->letter_word(static_cast<WordSpace::Code>(p)));
      H_[p * T_] = pw;
      for (int t = 0; t < L_; ++t) {
        const auto tw = static_cast<std::uint32_t>(ws_->letter_word(static_cast<WordSpace::Code>(t)));
        H_[p * T_ + 1 + t] = static_cast<std::uint32_t>(ws_->product(pw, tw));
        if (t != (p ^ 1)) W2_[p * L_ + t] = ws_->product(pw, tw);
      }
    }
    for (std::uint32_t u = 0; u < N_; ++u) {
      if (ws_->letters(u).size() <= 1) short_.push_back(u);
    }
    K_.assign(static_cast<std::size_t>(L_) * L_ * stride_, kInfScaled);
    changed_.assign(static_cast<std::size_t>(L_) * L_, 1);
    first_round_ = true;
  }

  void split_fast(const std::vector<std::int64_t>& cur, std::vector<std::int64_t>& next) {
    const std::size_t N = N_;
    // Rows with a short word on either side go through the split lists.
    for (auto u : short_) {
      for (std::uint32_t v = 0; v < N; ++v) split_generic(cur, next, u, v);
    }
    // Refresh the K blocks and note which ones moved.
    const std::size_t blocks = static_cast<std::size_t>(L_) * L_;
    std::vector<std::int64_t> row(stride_, kInfScaled);
    for (int p = 0; p < L_; ++p) {
      for (int r = 0; r < L_; ++r) {
        const std::size_t blk = static_cast<std::size_t>(p) * L_ + r;
        for (int t = 0; t < T_; ++t) {
          const std::int64_t* src = &cur[static_cast<std::size_t>(H_[p * T_ + t]) * N];
          for (int s = 0; s < T_; ++s) row[t * T_ + s] = src[H_[r * T_ + s]];
        }
        std::int64_t* dst = &K_[blk * stride_];
        changed_[blk] = first_round_ || !std::equal(row.begin(), row.end(), dst);
        std::copy(row.begin(), row.end(), dst);
      }
    }
    first_round_ = false;
    constexpr std::size_t kTile = 32;
    for (std::size_t b0 = 0; b0 < blocks; b0 += kTile) {
      const std::size_t b1 = std::min(blocks, b0 + kTile);
      for (std::size_t c0 = 0; c0 < blocks; c0 += kTile) {
        const std::size_t c1 = std::min(blocks, c0 + kTile);
        for (std::size_t b = b0; b < b1; ++b) {
          const int p = static_cast<int>(b / L_), r = static_cast<int>(b % L_);
          const std::int64_t* __restrict kb = &K_[b * stride_];
          for (std::size_t c = c0; c < c1; ++c) {
            if (!changed_[b] && !changed_[c]) continue;
            const int qb = static_cast<int>(c / L_), sb = static_cast<int>(c % L_);
            const std::int32_t u = W2_[p * L_ + (qb ^ 1)];
            const std::int32_t v = W2_[r * L_ + (sb ^ 1)];
            if (u < 0 || v < 0) continue;
            const std::int64_t* __restrict kc = &K_[c * stride_];
            std::int64_t best = kInfScaled;
            for (int k = 0; k < stride_; ++k) best = std::min(best, kb[k] + kc[k]);
            auto& slot = next[static_cast<std::size_t>(u) * N + static_cast<std::size_t>(v)];
            slot = std::min(slot, best);
          }
        }
      }
    }
  }

  const WordSpace* ws_;
  std::size_t N_;
  std::vector<std::int64_t> init_;
  bool fast_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> splits_;
  std::vector<ConvexRule> convex_;

  int L_ = 0, T_ = 0, stride_ = 0;
  std::vector<std::uint32_t> H_;
  std::vector<std::int32_t> W2_;
  std::vector<std::uint32_t> short_;
  std::vector<std::int64_t> K_;
  std::vector<char> changed_;
  bool first_round_ = true;
};

// ---- stage tables ----------------------------------------------------------------

struct MetricBuildInfo {
  std::size_t ambient_size = 0;
  std::size_t sweeps = 0;
  std::int64_t scale = 1;
  bool fast_kernel = false;
  double seconds = 0;
};

struct MetricOptions {
  bool fast_kernel = true;
};

/// Attaches rho to the word stage `stage` (= X_{n+1}) given the sealed
/// vector stage `prev` (= X_n). For X_1 the base values rho(x,e) =
/// rho(x^{-1},e) = 1 seed the same relaxation.
inline MetricBuildInfo rho_extend(ElementStore& store, Stage& stage, const Stage& prev,
                                  const Config& cfg, MetricOptions opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  if (!stage.is_word() || prev.is_word() || prev.index + 1 != stage.index || !prev.sealed) {
    throw Error(ErrorKind::kConfig, "rho_extend needs a word stage and its sealed predecessor");
  }
  const int cap = cfg.word_cap_for((stage.index - 1) / 2);
  WordSpace ws(store, stage.generators, cap * cfg.ambient_expansion, cfg.member_budget);
  const std::size_t n = stage.size(), N = ws.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (ws.id(static_cast<std::uint32_t>(i)) != stage.members[i]) {
      throw Error(ErrorKind::kInvariantViolation, "ambient words do not extend the stage");
    }
  }

  MetricBuildInfo info;
  info.ambient_size = N;
  info.scale = metric_scale(prev);
  std::vector<std::int64_t> init;
  if (stage.index == 1) {
    init.assign(N * N, kInfScaled);
    for (std::uint32_t i = 0; i < N; ++i) {
      if (ws.letters(i).size() == 1) {
        init[i * N] = init[i] = info.scale;
      }
    }
  } else {
    init = compute_delta(store, ws, n, prev, info.scale);
    // (a) rho(x,y) <= ||x - y||_n
    const NormDiff norm_diff(store, prev);
    for (auto a : prev.members) {
      for (auto b : prev.members) {
        if (auto v = norm_diff(a, b)) {
          auto& slot = init[stage.pos(a) * N + stage.pos(b)];
          slot = std::min(slot, to_scaled(*v, info.scale));
        }
      }
    }
  }
  for (std::size_t i = 0; i < N; ++i) init[i * N + i] = 0;

  MetricSystem sys(store, ws, std::move(init), opt.fast_kernel);
  info.fast_kernel = sys.fast();
  auto out = relax_fixpoint_generic(sys, default_sweep_cap(N * N, cfg.sweep_cap_factor));
  info.sweeps = out.sweeps;

  stage.rho.assign(n * n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t v = out.values[i * N + j];
      if (v >= kInfScaled) {
        throw Error(ErrorKind::kInvariantViolation,
                    "rho_" + std::to_string(stage.index) + " left unconstrained at (" +
                        store.render(stage.members[i]) + ", " + store.render(stage.members[j]) + ")");
      }
      if (v != out.values[j * N + i]) throw Error(ErrorKind::kInvariantViolation, "rho is not symmetric");
      if ((v == 0) != (i == j)) {
        throw Error(ErrorKind::kInvariantViolation,
                    "rho_" + std::to_string(stage.index) + " is zero off the diagonal at (" +
                        store.render(stage.members[i]) + ", " + store.render(stage.members[j]) + ")");
      }
      stage.rho[i * n + j] = Rational(v, info.scale);
    }
  }
  stage.sealed = true;
  info.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return info;
}

/// rho_{n+1}(a,b) = ||a - b||_n for all a, b in X_n with a - b in X_n.
inline VerificationReport check_extension_metric(const ElementStore& store, const Stage& stage,
                                                 const Stage& prev) {
  VerificationReport rep;
  rep.suite = "extension rho_" + std::to_string(stage.index) + " / norm_" + std::to_string(prev.index);
  const NormDiff norm_diff(store, prev);
  for (auto a : prev.members) {
    for (auto b : prev.members) {
      auto v = norm_diff(a, b);
      if (!v) continue;
      const Rational& r = stage.metric(a, b);
      rep.check(r == *v, "(2)", {a, b}, [&] {
        return "rho = " + r.str() + " but norm of difference = " + v->str() + " for " + store.render(a) +
               " , " + store.render(b);
      });
    }
  }
  return rep;
}

}  // namespace ubg
