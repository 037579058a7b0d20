#pragma once

// Tables under relaxation are kept as int64 multiples of 1/scale, with a
// large sentinel for +infinity. All rule coefficients are dyadic, so a
// common scale with enough factors of two keeps every update exact; an
// update that would need a finer scale throws kScaleExhausted.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ubg/algebra.hpp"
#include "ubg/error.hpp"
#include "ubg/rational.hpp"

namespace ubg {

inline constexpr std::int64_t kInfScaled = INT64_MAX / 4;
inline constexpr int kScaleBits = 20;

/// lcm of the denominators, times 2^kScaleBits.
inline std::int64_t common_scale(const std::vector<Rational>& values) {
  std::int64_t l = 1;
  for (const auto& v : values) {
    l = detail::narrow(static_cast<detail::i128>(l / std::gcd(l, v.den())) * v.den(), "scale lcm");
  }
  return detail::narrow(static_cast<detail::i128>(l) << kScaleBits, "scale");
}

inline std::int64_t to_scaled(const Rational& r, std::int64_t scale) {
  if (scale % r.den() != 0) throw Error(ErrorKind::kScaleExhausted, "value " + r.str() + " is off-scale");
  detail::i128 v = static_cast<detail::i128>(r.num()) * (scale / r.den());
  if (v >= kInfScaled / 4 || v <= -kInfScaled / 4) {
    throw Error(ErrorKind::kOverflow, "value " + r.str() + " too large for the scaled table");
  }
  return static_cast<std::int64_t>(v);
}

inline Bound from_scaled(std::int64_t v, std::int64_t scale) {
  if (v >= kInfScaled) return std::nullopt;
  return Rational(v, scale);
}

/// y = sum (num_k / 2^shift) z_k with every coefficient positive, sum 1.
struct ScaledConvex {
  int shift = 0;
  std::vector<std::pair<std::int64_t, ElementId>> terms;

  /// sum_k (num_k / 2^shift) v_k, or kInfScaled if some v_k is infinite.
  template <typename Get>
  std::int64_t apply(Get&& get) const {
    detail::i128 sum = 0;
    for (const auto& [num, z] : terms) {
      std::int64_t v = get(z);
      if (v >= kInfScaled) return kInfScaled;
      sum += static_cast<detail::i128>(num) * v;
    }
    detail::i128 mask = (detail::i128{1} << shift) - 1;
    if ((sum & mask) != 0) {
      throw Error(ErrorKind::kScaleExhausted,
                  "convex combination needs a finer scale than 2^" + std::to_string(kScaleBits));
    }
    return static_cast<std::int64_t>(sum >> shift);
  }
};

inline std::optional<ScaledConvex> scaled_convex(const ElementStore& store, ElementId y) {
  auto conv = store.convex_decomposition(y);
  if (!conv) return std::nullopt;
  ScaledConvex out;
  for (const auto& e : *conv) out.shift = std::max(out.shift, e.coef.log2den());
  for (const auto& e : *conv) out.terms.emplace_back(e.coef.num() << (out.shift - e.coef.log2den()), e.basis);
  return out;
}

}  // namespace ubg
