#pragma once

// Stability verifiers. Every verifier returns the same verdict as
// verify_brute; witnesses may differ between verifiers but are always
// genuine blocking pairs of the input market.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/geometry.hpp"
#include "smatch/prefs.hpp"
#include "smatch/timing.hpp"

namespace smatch {

struct BlockingPair {
  std::size_t man = 0;
  std::size_t woman = 0;
  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

struct VerifyReport {
  bool stable = true;
  std::optional<BlockingPair> witness;
  std::uint64_t comparisons = 0;
  std::uint64_t runtime_nanos = 0;
  std::string algorithm;
};

namespace detail {

inline VerifyReport finish(VerifyReport r, std::optional<BlockingPair> witness,
                           const Stopwatch& clock) {
  r.witness = witness;
  r.stable = !witness.has_value();
  r.runtime_nanos = clock.nanos();
  return r;
}

}  // namespace detail

/// Scans all n^2 pairs in (man, woman) order; the witness is the
/// lexicographically smallest blocking pair.
template <MarketModel M>
VerifyReport verify_brute(const M& market, const Matching& mu) {
  Stopwatch clock;
  const std::size_t n = market.n();
  validate_matching(mu, n);
  const auto inv = mu.inverse();
  VerifyReport r;
  r.algorithm = "brute";
  if constexpr (CardinalModel<M>) {
    // Same computed values as prefers(), with the partners' values cached.
    std::vector<double> man_cur(n), woman_cur(n);
    for (std::size_t m = 0; m < n; ++m) man_cur[m] = value(market, Side::men, m, mu.pairs[m]);
    for (std::size_t w = 0; w < n; ++w) woman_cur[w] = value(market, Side::women, w, inv[w]);
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t w = 0; w < n; ++w) {
        ++r.comparisons;
        if (value(market, Side::men, m, w) > man_cur[m] &&
            value(market, Side::women, w, m) > woman_cur[w]) {
          return detail::finish(r, BlockingPair{m, w}, clock);
        }
      }
    }
  } else {
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t w = 0; w < n; ++w) {
        ++r.comparisons;
        if (is_blocking(market, mu, inv, m, w)) return detail::finish(r, BlockingPair{m, w}, clock);
      }
    }
  }
  return detail::finish(r, std::nullopt, clock);
}

inline VerifyReport verify_brute(const Market& market, const Matching& mu) {
  return std::visit([&](const auto& m) { return verify_brute(m, mu); }, market);
}

namespace detail {

// Women are grouped by (d', s): d' is the 1-based position of the last
// nonzero weight and s its sign. Within a class the weights are scaled so
// that the d'-th weight is s. A woman w of class (d', s) is represented by
//   P(w) = (A(w), b_1..b_{d'-1}, z)        b = scaled weights, z = scaled val_w(mu(w))
// and man m blocks with her exactly when P(w) lies in
//   H1(m): <alpha(m), A(w)> > val_m(mu(m))
//   H2(m): sum_{i<d'} A_i(m) b_i - z > -s A_{d'}(m).
// Scaling changes rounding, so the halfspaces are widened by a small slack
// and every candidate is confirmed with the exact predicate `blocks`.
template <class Blocks>
VerifyReport verify_attribute_impl(const AttributeMarket& am, const Matching& mu, Blocks&& blocks,
                                   bool widen_h1, const char* name) {
  Stopwatch clock;
  const std::size_t n = am.n(), d = am.d();
  validate_matching(mu, n);
  const auto inv = mu.inverse();
  VerifyReport r;
  r.algorithm = name;

  struct Class {
    std::vector<std::size_t> women;
    RangeEmptinessIndex index;
    std::vector<double> max_abs;  // per coordinate of P, for the slack
  };
  // classes[(dp - 1) * 2 + (s > 0)]
  std::vector<Class> classes(2 * d);
  std::vector<double> scaled;
  for (std::size_t w = 0; w < n; ++w) {
    auto alpha = am.women_weights().row(w);
    std::size_t dp = d;
    while (dp > 0 && alpha[dp - 1] == 0.0) --dp;
    if (dp == 0) continue;  // indifferent to every man
    classes[(dp - 1) * 2 + (alpha[dp - 1] > 0.0 ? 1 : 0)].women.push_back(w);
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    auto& cls = classes[c];
    if (cls.women.empty()) continue;
    const std::size_t dp = c / 2 + 1;
    const std::size_t k = d + dp;
    Matrix pts(cls.women.size(), k);
    cls.max_abs.assign(k, 0.0);
    for (std::size_t i = 0; i < cls.women.size(); ++i) {
      const std::size_t w = cls.women[i];
      auto alpha = am.women_weights().row(w);
      const double scale = std::fabs(alpha[dp - 1]);
      for (std::size_t j = 0; j < d; ++j) pts(i, j) = am.women_attrs()(w, j);
      for (std::size_t j = 0; j + 1 < dp; ++j) pts(i, d + j) = alpha[j] / scale;
      pts(i, k - 1) = dot(alpha, am.men_attrs().row(inv[w])) / scale;
      for (std::size_t j = 0; j < k; ++j) cls.max_abs[j] = std::max(cls.max_abs[j], std::fabs(pts(i, j)));
    }
    cls.index = RangeEmptinessIndex(pts);
  }

  constexpr double rel_slack = 1e-9;
  for (std::size_t m = 0; m < n; ++m) {
    const double val_m = dot(am.men_weights().row(m), am.women_attrs().row(mu.pairs[m]));
    auto a_m = am.men_attrs().row(m);
    auto alpha_m = am.men_weights().row(m);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto& cls = classes[c];
      if (cls.women.empty()) continue;
      const std::size_t dp = c / 2 + 1;
      const std::size_t k = d + dp;
      const double s = (c % 2 == 1) ? 1.0 : -1.0;

      Halfspace h1{std::vector<double>(k, 0.0), val_m};
      double mag1 = std::fabs(val_m);
      for (std::size_t j = 0; j < d; ++j) {
        h1.normal[j] = alpha_m[j];
        mag1 += std::fabs(alpha_m[j]) * cls.max_abs[j];
      }
      if (widen_h1) h1.threshold -= rel_slack * (1.0 + mag1);

      Halfspace h2{std::vector<double>(k, 0.0), -s * a_m[dp - 1]};
      double mag2 = std::fabs(a_m[dp - 1]) + cls.max_abs[k - 1];
      for (std::size_t j = 0; j + 1 < dp; ++j) {
        h2.normal[d + j] = a_m[j];
        mag2 += std::fabs(a_m[j]) * cls.max_abs[d + j];
      }
      h2.normal[k - 1] = -1.0;
      h2.threshold -= rel_slack * (1.0 + mag2);

      QueryTrace trace;
      auto hit = cls.index.find_if(
          h1, h2, [&](std::size_t i) { return blocks(m, cls.women[i]); }, &trace);
      r.comparisons += trace.nodes_visited + trace.points_scanned;
      if (hit) return finish(r, BlockingPair{m, cls.women[*hit]}, clock);
    }
  }
  return finish(r, std::nullopt, clock);
}

}  // namespace detail

/// Stability check by two-halfspace emptiness queries, one index per class
/// of women.
inline VerifyReport verify_attribute(const AttributeMarket& am, const Matching& mu) {
  std::vector<std::size_t> inv;
  if (mu.size() == am.n() && detail::is_permutation_of_n(mu.pairs, am.n())) inv = mu.inverse();
  return detail::verify_attribute_impl(
      am, mu, [&](std::size_t m, std::size_t w) { return is_blocking(am, mu, inv, m, w); }, false,
      "attribute");
}

/// Geometric markets are verified on their lifted attribute market, with
/// candidates confirmed against the geometric comparison itself.
inline VerifyReport verify_geometric(const GeometricMarket& gm, const Matching& mu) {
  std::vector<std::size_t> inv;
  if (mu.size() == gm.n() && detail::is_permutation_of_n(mu.pairs, gm.n())) inv = mu.inverse();
  const AttributeMarket lifted = lift_geometric(gm);
  return detail::verify_attribute_impl(
      lifted, mu, [&](std::size_t m, std::size_t w) { return is_blocking(gm, mu, inv, m, w); },
      true, "geometric");
}

/// Sweep over every pair (i, j) of a men's list and a women's list. The men
/// using pi_i are walked in sigma_j order and the women using sigma_j in
/// pi_i order; the pointer that cannot be part of a blocking pair advances.
/// Comparisons are non-strict so that a matched pair is never reported.
inline VerifyReport verify_list(const ListMarket& lm, const Matching& mu) {
  Stopwatch clock;
  const std::size_t n = lm.n(), d = lm.d();
  validate_matching(mu, n);
  const auto inv = mu.inverse();
  VerifyReport r;
  r.algorithm = "list";

  // Bucket (i, j) holds the women using sigma_j in pi_i order and the men using
  // pi_i in sigma_j order. Each entry is its own position in that order and its
  // partner's rank in its own list, so the merge reads sequentially. Every
  // random access in the construction is a write.
  struct Entry {
    std::uint32_t pos, partner_rank;
  };
  struct Info {
    std::uint32_t choice, partner_rank;
  };
  auto fill = [&](const std::vector<std::size_t>& choice, bool women) {
    auto own_rank = [&](std::size_t x, std::size_t k) {
      return women ? lm.woman_rank(x, k) : lm.man_rank(x, k);
    };
    auto partner_side_rank = [&](std::size_t y, std::size_t k) {
      return women ? lm.man_rank(y, k) : lm.woman_rank(y, k);
    };
    // partner_rank[x]: rank of x's partner in the list x uses.
    std::vector<std::uint32_t> partner_rank(n);
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t x = women ? mu.pairs[y] : inv[y];
      partner_rank[x] = partner_side_rank(y, choice[x]);
    }
    std::vector<std::size_t> count(d, 0);
    for (std::size_t x = 0; x < n; ++x) ++count[choice[x]];
    std::vector<std::size_t> start(d * d + 1, 0);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t c = 0; c < d; ++c) start[(women ? k * d + c : c * d + k) + 1] = count[c];
    }
    for (std::size_t b = 0; b < d * d; ++b) start[b + 1] += start[b];
    std::vector<Entry> entries(d * n);
    std::vector<std::size_t> next(start.begin(), start.end() - 1);
    std::vector<Info> by_pos(n);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t c = choice[x];
        by_pos[own_rank(x, k)] = {static_cast<std::uint32_t>(c), partner_rank[x]};
      }
      for (std::size_t pos = 0; pos < n; ++pos) {
        const Info in = by_pos[pos];
        const std::size_t bucket = women ? k * d + in.choice : in.choice * d + k;
        entries[next[bucket]++] = {static_cast<std::uint32_t>(pos), in.partner_rank};
      }
    }
    return std::pair{std::move(entries), std::move(start)};
  };
  const auto [ws, wstart] = fill(lm.women_choice(), true);
  const auto [ms, mstart] = fill(lm.men_choice(), false);

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t bucket = i * d + j;
      std::size_t a = mstart[bucket], b = wstart[bucket];
      const std::size_t a_end = mstart[bucket + 1], b_end = wstart[bucket + 1];
      while (a < a_end && b < b_end) {
        ++r.comparisons;
        if (ws[b].pos >= ms[a].partner_rank) {
          ++a;  // m does not strictly prefer w to his partner
        } else if (ms[a].pos >= ws[b].partner_rank) {
          ++b;  // w does not strictly prefer m to her partner
        } else {
          const std::size_t m = lm.men_orders()[j][ms[a].pos], w = lm.women_orders()[i][ws[b].pos];
          return detail::finish(r, BlockingPair{m, w}, clock);
        }
      }
    }
  }
  return detail::finish(r, std::nullopt, clock);
}

/// Closed index range of candidates that `chooser` strictly prefers to
/// `partner`, or nothing if there are none. Candidates are indexed in
/// position order, so the range is contiguous and adjacent to `partner`.
inline std::optional<std::pair<std::size_t, std::size_t>> strict_preference_interval(
    const SinglePeakedMarket& spm, Side side, std::size_t chooser, std::size_t partner,
    std::uint64_t* comparisons = nullptr) {
  const std::size_t n = spm.n();
  auto better = [&](std::size_t c) {
    if (comparisons) ++*comparisons;
    return prefers(spm, side, chooser, c, partner);
  };
  if (partner + 1 < n && better(partner + 1)) {
    // Last better candidate in (partner, n): the predicate is a prefix there.
    // The answer stays in [base, base + len); no data-dependent branches.
    std::size_t base = partner + 1, len = n - base;
    while (len > 1) {
      const std::size_t half = len / 2;
      base += better(base + half) ? half : 0;
      len -= half;
    }
    return std::pair{partner + 1, base};
  }
  if (partner > 0 && better(partner - 1)) {
    // First better candidate in [0, partner): the predicate is a suffix there.
    std::size_t base = 0, len = partner;
    while (len > 1) {
      const std::size_t half = len / 2;
      base += better(base + half - 1) ? 0 : half;
      len -= half;
    }
    return std::pair{base, partner - 1};
  }
  return std::nullopt;
}

/// Left-to-right sweep over the women, keeping the set of men who strictly
/// prefer the current woman to their partner.
namespace detail {

/// Subset of 0..n-1 with insert, erase and successor over a 64-ary bit tree.
class SuccessorSet {
 public:
  static constexpr std::size_t none = SIZE_MAX;

  explicit SuccessorSet(std::size_t n) {
    std::size_t words = n;
    do {
      words = (words + 63) / 64;
      levels_.emplace_back(words, 0);
    } while (words > 1);
  }

  void insert(std::size_t x) {
    for (auto& level : levels_) {
      level[x >> 6] |= std::uint64_t{1} << (x & 63);
      x >>= 6;
    }
  }

  void erase(std::size_t x) {
    for (auto& level : levels_) {
      level[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
      if (level[x >> 6] != 0) return;
      x >>= 6;
    }
  }

  /// Smallest member >= x, or `none`.
  std::size_t successor(std::size_t x) const {
    std::size_t lvl = 0;
    while (true) {
      const std::size_t wi = x >> 6;
      if (wi >= levels_[lvl].size()) return none;
      const std::uint64_t w = levels_[lvl][wi] & (~std::uint64_t{0} << (x & 63));
      if (w != 0) {
        x = (wi << 6) | static_cast<std::size_t>(std::countr_zero(w));
        break;
      }
      if (++lvl == levels_.size()) return none;
      x = wi + 1;
    }
    while (lvl-- > 0) x = (x << 6) | static_cast<std::size_t>(std::countr_zero(levels_[lvl][x]));
    return x;
  }

 private:
  std::vector<std::vector<std::uint64_t>> levels_;
};

}  // namespace detail

inline VerifyReport verify_single_peaked(const SinglePeakedMarket& spm, const Matching& mu) {
  Stopwatch clock;
  const std::size_t n = spm.n();
  validate_matching(mu, n);
  const auto inv = mu.inverse();
  VerifyReport r;
  r.algorithm = "single-peaked";

  // Each man's interval of strictly preferred women, bucketed by both ends.
  std::vector<std::pair<std::size_t, std::size_t>> iv(n, {n, n});
  std::vector<std::size_t> begin_at(n + 1, 0), end_at(n + 1, 0);
  for (std::size_t m = 0; m < n; ++m) {
    if (auto x = strict_preference_interval(spm, Side::men, m, mu.pairs[m], &r.comparisons)) {
      iv[m] = *x;
      ++begin_at[x->first + 1];
      ++end_at[x->second + 1];
    }
  }
  for (std::size_t w = 0; w < n; ++w) {
    begin_at[w + 1] += begin_at[w];
    end_at[w + 1] += end_at[w];
  }
  std::vector<std::size_t> begins(begin_at[n]), ends(end_at[n]);
  {
    auto bnext = begin_at, enext = end_at;
    for (std::size_t m = 0; m < n; ++m) {
      if (iv[m].first == n) continue;
      begins[bnext[iv[m].first]++] = m;
      ends[enext[iv[m].second]++] = m;
    }
  }

  detail::SuccessorSet active(n);
  std::size_t live = 0;
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t k = begin_at[w]; k < begin_at[w + 1]; ++k) active.insert(begins[k]);
    live += begin_at[w + 1] - begin_at[w];
    if (live > 0) {
      if (auto x = strict_preference_interval(spm, Side::women, w, inv[w], &r.comparisons)) {
        const std::size_t m = active.successor(x->first);
        ++r.comparisons;
        if (m != detail::SuccessorSet::none && m <= x->second) {
          return detail::finish(r, BlockingPair{m, w}, clock);
        }
      }
    }
    for (std::size_t k = end_at[w]; k < end_at[w + 1]; ++k) active.erase(ends[k]);
    live -= end_at[w + 1] - end_at[w];
  }
  return detail::finish(r, std::nullopt, clock);
}

namespace detail {

struct BitRows {
  std::size_t words = 0;
  std::vector<std::uint64_t> bits;

  BitRows(const Matrix& m, const char* name) : words((m.cols() + 63) / 64) {
    bits.assign(m.rows() * words, 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const double x = m(r, c);
        require(x == 0.0 || x == 1.0, Errc::non_boolean_entry,
                std::string(name) + "[" + std::to_string(r) + "][" + std::to_string(c) +
                    "] is not 0 or 1");
        if (x == 1.0) bits[r * words + c / 64] |= std::uint64_t{1} << (c % 64);
      }
    }
  }

  const std::uint64_t* row(std::size_t r) const noexcept { return bits.data() + r * words; }
};

inline std::uint32_t and_popcount(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) noexcept {
  std::uint32_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += static_cast<std::uint32_t>(std::popcount(a[i] & b[i]));
  return c;
}

}  // namespace detail

inline constexpr std::size_t max_bitset_dimension = 4096;

/// Boolean attribute markets: vectors packed into 64-bit words, each pair
/// checked with two AND-popcount threshold tests.
inline VerifyReport verify_boolean_bitset(const AttributeMarket& am, const Matching& mu) {
  Stopwatch clock;
  const std::size_t n = am.n();
  require(am.d() <= max_bitset_dimension, Errc::too_large,
          "boolean verifier supports d <= " + std::to_string(max_bitset_dimension));
  validate_matching(mu, n);
  const detail::BitRows ma(am.men_attrs(), "men_attrs"), mw(am.men_weights(), "men_weights");
  const detail::BitRows wa(am.women_attrs(), "women_attrs"), ww(am.women_weights(), "women_weights");
  const std::size_t words = ma.words;
  const auto inv = mu.inverse();
  VerifyReport r;
  r.algorithm = "boolean-bitset";
  std::vector<std::uint32_t> man_cur(n), woman_cur(n);
  for (std::size_t m = 0; m < n; ++m) man_cur[m] = detail::and_popcount(mw.row(m), wa.row(mu.pairs[m]), words);
  for (std::size_t w = 0; w < n; ++w) woman_cur[w] = detail::and_popcount(ww.row(w), ma.row(inv[w]), words);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t w = 0; w < n; ++w) {
      ++r.comparisons;
      if (detail::and_popcount(mw.row(m), wa.row(w), words) > man_cur[m] &&
          detail::and_popcount(ww.row(w), ma.row(m), words) > woman_cur[w]) {
        return detail::finish(r, BlockingPair{m, w}, clock);
      }
    }
  }
  return detail::finish(r, std::nullopt, clock);
}

}  // namespace smatch
