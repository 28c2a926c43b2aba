#pragma once

#include <cstdint>
#include <vector>

#include "movekit/cost.hpp"
#include "movekit/error.hpp"

namespace movekit {

// Cost table over all subsets of a k-element ground set.
struct SubsetFunction {
  int k = 0;
  std::vector<Cost> values;  // 2^k entries

  static SubsetFunction filled(int k, Cost value) {
    SubsetFunction f;
    f.k = k;
    f.values.assign(std::size_t(1) << k, value);
    return f;
  }

  // identity of the min-sum semiring: 0 on the empty set, inf elsewhere
  static SubsetFunction unit(int k) {
    SubsetFunction f = filled(k, Cost::inf());
    f.values[0] = Cost::zero();
    return f;
  }
};

// h(S) = min over T subseteq S of f(T) + g(S \ T), by direct enumeration.
inline SubsetFunction conv_naive(const SubsetFunction& f, const SubsetFunction& g) {
  if (f.k != g.k) throw Error(ErrorKind::Validation, "subset convolution needs equal k");
  SubsetFunction h = SubsetFunction::filled(f.k, Cost::inf());
  std::size_t full = std::size_t(1) << f.k;
  for (std::size_t S = 0; S < full; ++S) {
    Cost best = f.values[S] + g.values[0];
    for (std::size_t T = (S - 1) & S; T; T = (T - 1) & S) {
      Cost c = f.values[T] + g.values[S ^ T];
      if (c < best) best = c;
    }
    if (S) {
      Cost c = f.values[0] + g.values[S];
      if (c < best) best = c;
    }
    h.values[S] = best;
  }
  return h;
}

// Same result through ranked zeta transforms over indicator polynomials:
// a value w becomes the monomial x^w, pointwise degree-truncated products
// replace the min-sum, ranked Moebius inversion restores disjointness, and
// h(S) is the least degree with a positive coefficient. Coefficients are
// subset-pair counts, at most 4^k, exact in 64-bit for k <= 24.
inline SubsetFunction conv_fast(const SubsetFunction& f, const SubsetFunction& g,
                                std::int64_t M) {
  if (f.k != g.k) throw Error(ErrorKind::Validation, "subset convolution needs equal k");
  if (M < 0) throw Error(ErrorKind::Validation, "M must be nonnegative");
  int k = f.k;
  if (k > 24) throw Error(ErrorKind::TooLarge, "conv_fast supports k <= 24");
  for (const auto& fn : {&f, &g})
    for (Cost c : fn->values)
      if (c.is_finite() && c.value() > M)
        throw Error(ErrorKind::ValueOverM, "finite value exceeds declared M");

  std::size_t full = std::size_t(1) << k;
  std::size_t poly_len = static_cast<std::size_t>(2 * M + 1);
  double mem = double(k + 1) * double(full) * double(poly_len) * 8.0 * 2.0;
  if (mem > 512.0 * 1024 * 1024)
    throw Error(ErrorKind::TooLarge, "conv_fast table would exceed the memory limit");

  auto ranked_zeta = [&](const SubsetFunction& fn) {
    // zf[r][S] = sum over T subseteq S with |T| = r of x^{fn(T)}
    std::vector<std::vector<std::uint64_t>> zf(k + 1,
                                               std::vector<std::uint64_t>(full * poly_len, 0));
    for (std::size_t S = 0; S < full; ++S) {
      if (!fn.values[S].is_finite()) continue;
      int r = __builtin_popcountll(S);
      zf[r][S * poly_len + fn.values[S].value()] = 1;
    }
    for (int r = 0; r <= k; ++r) {
      auto& layer = zf[r];
      for (int d = 0; d < k; ++d)
        for (std::size_t S = 0; S < full; ++S)
          if (S & (std::size_t(1) << d)) {
            const std::uint64_t* src = &layer[(S ^ (std::size_t(1) << d)) * poly_len];
            std::uint64_t* dst = &layer[S * poly_len];
            for (std::size_t i = 0; i < poly_len; ++i) dst[i] += src[i];
          }
    }
    return zf;
  };

  auto zf = ranked_zeta(f);
  auto zg = ranked_zeta(g);

  SubsetFunction h = SubsetFunction::filled(k, Cost::inf());
  std::vector<std::uint64_t> layer(full * poly_len);
  for (int t = 0; t <= k; ++t) {
    std::fill(layer.begin(), layer.end(), 0);
    for (std::size_t S = 0; S < full; ++S) {
      std::uint64_t* dst = &layer[S * poly_len];
      for (int r = 0; r <= t; ++r) {
        const std::uint64_t* a = &zf[r][S * poly_len];
        const std::uint64_t* b = &zg[t - r][S * poly_len];
        for (std::size_t i = 0; i < poly_len; ++i) {
          if (!a[i]) continue;
          std::uint64_t ai = a[i];
          std::size_t jmax = poly_len - i;
          for (std::size_t j = 0; j < jmax; ++j)
            if (b[j]) dst[i + j] += ai * b[j];
        }
      }
    }
    // ranked Moebius inversion of this total-rank slice
    for (int d = 0; d < k; ++d)
      for (std::size_t S = 0; S < full; ++S)
        if (S & (std::size_t(1) << d)) {
          const std::uint64_t* src = &layer[(S ^ (std::size_t(1) << d)) * poly_len];
          std::uint64_t* dst = &layer[S * poly_len];
          for (std::size_t i = 0; i < poly_len; ++i) dst[i] -= src[i];
        }
    for (std::size_t S = 0; S < full; ++S) {
      if (__builtin_popcountll(S) != t) continue;
      const std::uint64_t* poly = &layer[S * poly_len];
      for (std::size_t d = 0; d < poly_len; ++d)
        if (poly[d]) {
          h.values[S] = Cost(static_cast<std::int64_t>(d));
          break;
        }
    }
  }
  return h;
}

}  // namespace movekit
