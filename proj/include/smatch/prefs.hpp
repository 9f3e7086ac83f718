#pragma once

// Preference models for two-sided matching markets with n men and n women.
//
// Every model answers the same two questions: a cardinal value (for models
// that have one) and a strict comparison `prefers`. Ties never count as a
// strict preference, which is what makes stability "weak" throughout the
// library. When a total order is needed, ties are broken by ascending
// candidate index.
//
// Values are doubles compared exactly. Integer-valued data (booleans, small
// constants, dyadic rationals) therefore compare exactly; arbitrary real
// input may contain ties or near-ties that are an artifact of rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/matrix.hpp"

namespace smatch {

enum class Side { men, women };

constexpr Side other(Side s) noexcept { return s == Side::men ? Side::women : Side::men; }

constexpr std::string_view to_string(Side s) noexcept {
  return s == Side::men ? "men" : "women";
}

namespace detail {

inline void check_shape(const Matrix& m, std::size_t n, std::size_t d, const char* name) {
  require(m.rows() == n && m.cols() == d, Errc::dimension_mismatch,
          std::string(name) + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
              ", expected " + std::to_string(n) + "x" + std::to_string(d));
}

inline bool is_permutation_of_n(const std::vector<std::size_t>& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (std::size_t x : p) {
    if (x >= n || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

}  // namespace detail

/// Perfect matching; `pairs[m]` is the woman matched to man m.
struct Matching {
  std::vector<std::size_t> pairs;

  std::size_t size() const noexcept { return pairs.size(); }

  /// `result[w]` is the man matched to woman w. Assumes a valid matching.
  std::vector<std::size_t> inverse() const {
    std::vector<std::size_t> inv(pairs.size());
    for (std::size_t m = 0; m < pairs.size(); ++m) inv[pairs[m]] = m;
    return inv;
  }

  static Matching identity(std::size_t n) {
    Matching mu;
    mu.pairs.resize(n);
    std::iota(mu.pairs.begin(), mu.pairs.end(), std::size_t{0});
    return mu;
  }

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;
};

inline void validate_matching(const Matching& mu, std::size_t n) {
  require(mu.pairs.size() == n, Errc::malformed_matching,
          "matching has " + std::to_string(mu.pairs.size()) + " entries for n = " +
              std::to_string(n));
  require(detail::is_permutation_of_n(mu.pairs, n), Errc::malformed_matching,
          "pairs is not a permutation of 0..n-1");
}

/// Both sides have d attributes and d weights; val_m(w) = <weights(m), attrs(w)>.
class AttributeMarket {
 public:
  AttributeMarket(Matrix men_attrs, Matrix men_weights, Matrix women_attrs, Matrix women_weights,
                  std::string provenance = {})
      : men_attrs_(std::move(men_attrs)),
        men_weights_(std::move(men_weights)),
        women_attrs_(std::move(women_attrs)),
        women_weights_(std::move(women_weights)),
        provenance_(std::move(provenance)) {
    n_ = men_attrs_.rows();
    d_ = men_attrs_.cols();
    require(n_ >= 1 && d_ >= 1, Errc::invalid_market, "attribute market needs n >= 1 and d >= 1");
    detail::check_shape(men_weights_, n_, d_, "men_weights");
    detail::check_shape(women_attrs_, n_, d_, "women_attrs");
    detail::check_shape(women_weights_, n_, d_, "women_weights");
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  const Matrix& men_attrs() const noexcept { return men_attrs_; }
  const Matrix& men_weights() const noexcept { return men_weights_; }
  const Matrix& women_attrs() const noexcept { return women_attrs_; }
  const Matrix& women_weights() const noexcept { return women_weights_; }
  const std::string& provenance() const noexcept { return provenance_; }

  const Matrix& attrs(Side s) const noexcept { return s == Side::men ? men_attrs_ : women_attrs_; }
  const Matrix& weights(Side s) const noexcept {
    return s == Side::men ? men_weights_ : women_weights_;
  }

 private:
  std::size_t n_ = 0, d_ = 0;
  Matrix men_attrs_, men_weights_, women_attrs_, women_weights_;
  std::string provenance_;
};

/// Women carry d attributes, men carry d weights over them; men carry one
/// scalar attribute and each woman weighs it with +1 or -1.
class OneSidedMarket {
 public:
  OneSidedMarket(Matrix women_attrs, Matrix men_weights, std::vector<double> men_attr,
                 std::vector<int> women_sign, std::string provenance = {})
      : women_attrs_(std::move(women_attrs)),
        men_weights_(std::move(men_weights)),
        men_attr_(std::move(men_attr)),
        women_sign_(std::move(women_sign)),
        provenance_(std::move(provenance)) {
    n_ = women_attrs_.rows();
    d_ = women_attrs_.cols();
    require(n_ >= 1 && d_ >= 1, Errc::invalid_market, "one-sided market needs n >= 1 and d >= 1");
    detail::check_shape(men_weights_, n_, d_, "men_weights");
    require(men_attr_.size() == n_, Errc::dimension_mismatch, "men_attr must have n entries");
    require(women_sign_.size() == n_, Errc::dimension_mismatch, "women_sign must have n entries");
    for (int s : women_sign_) {
      require(s == 1 || s == -1, Errc::invalid_market, "women_sign entries must be +1 or -1");
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  const Matrix& women_attrs() const noexcept { return women_attrs_; }
  const Matrix& men_weights() const noexcept { return men_weights_; }
  const std::vector<double>& men_attr() const noexcept { return men_attr_; }
  const std::vector<int>& women_sign() const noexcept { return women_sign_; }
  const std::string& provenance() const noexcept { return provenance_; }

 private:
  std::size_t n_ = 0, d_ = 0;
  Matrix women_attrs_, men_weights_;
  std::vector<double> men_attr_;
  std::vector<int> women_sign_;
  std::string provenance_;
};

/// d global orders per side; each participant adopts one of them.
/// `women_orders[i]` is an order over women (best first) used by the men whose
/// `men_choice` is i; `men_orders[j]` likewise for the women.
class ListMarket {
 public:
  using Order = std::vector<std::size_t>;

  ListMarket(std::vector<Order> women_orders, std::vector<Order> men_orders,
             std::vector<std::size_t> men_choice, std::vector<std::size_t> women_choice,
             std::string provenance = {})
      : women_orders_(std::move(women_orders)),
        men_orders_(std::move(men_orders)),
        men_choice_(std::move(men_choice)),
        women_choice_(std::move(women_choice)),
        provenance_(std::move(provenance)) {
    d_ = women_orders_.size();
    n_ = men_choice_.size();
    require(n_ >= 1 && d_ >= 1, Errc::invalid_market, "list market needs n >= 1 and d >= 1");
    require(men_orders_.size() == d_, Errc::dimension_mismatch,
            "men_orders and women_orders must both hold d orders");
    require(women_choice_.size() == n_, Errc::dimension_mismatch,
            "women_choice must have n entries");
    women_rank_.assign(d_ * n_, 0);
    men_rank_.assign(d_ * n_, 0);
    for (std::size_t i = 0; i < d_; ++i) {
      require(detail::is_permutation_of_n(women_orders_[i], n_), Errc::invalid_market,
              "women_orders[" + std::to_string(i) + "] is not a permutation");
      require(detail::is_permutation_of_n(men_orders_[i], n_), Errc::invalid_market,
              "men_orders[" + std::to_string(i) + "] is not a permutation");
      for (std::size_t pos = 0; pos < n_; ++pos) {
        women_rank_[i * n_ + women_orders_[i][pos]] = static_cast<std::uint32_t>(pos);
        men_rank_[i * n_ + men_orders_[i][pos]] = static_cast<std::uint32_t>(pos);
      }
    }
    for (std::size_t c : men_choice_) {
      require(c < d_, Errc::invalid_market, "men_choice entry out of [0, d)");
    }
    for (std::size_t c : women_choice_) {
      require(c < d_, Errc::invalid_market, "women_choice entry out of [0, d)");
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  const std::vector<Order>& women_orders() const noexcept { return women_orders_; }
  const std::vector<Order>& men_orders() const noexcept { return men_orders_; }
  const std::vector<std::size_t>& men_choice() const noexcept { return men_choice_; }
  const std::vector<std::size_t>& women_choice() const noexcept { return women_choice_; }
  const std::string& provenance() const noexcept { return provenance_; }

  /// Position of woman w in order i over women (0 = best).
  std::uint32_t woman_rank(std::size_t w, std::size_t i) const noexcept {
    return women_rank_[i * n_ + w];
  }
  /// Position of man m in order j over men.
  std::uint32_t man_rank(std::size_t m, std::size_t j) const noexcept {
    return men_rank_[j * n_ + m];
  }

 private:
  std::size_t n_ = 0, d_ = 0;
  std::vector<Order> women_orders_, men_orders_;
  std::vector<std::size_t> men_choice_, women_choice_;
  std::vector<std::uint32_t> women_rank_, men_rank_;
  std::string provenance_;
};

enum class PeakRelation { distance, custom };

/// Participants sit on a line in index order (positions strictly increasing).
/// Each chooser has an ideal point; with `distance` the closer candidate wins,
/// with `custom` each chooser supplies a strict ranking that must fall off
/// monotonically on both sides of the ideal.
class SinglePeakedMarket {
 public:
  SinglePeakedMarket(std::vector<double> women_pos, std::vector<double> men_pos,
                     std::vector<double> men_ideal, std::vector<double> women_ideal,
                     std::string provenance = {})
      : SinglePeakedMarket(std::move(women_pos), std::move(men_pos), std::move(men_ideal),
                           std::move(women_ideal), PeakRelation::distance, {}, {},
                           std::move(provenance)) {}

  /// `men_rank[m][w]` is w's position in m's order (0 = best); custom only.
  SinglePeakedMarket(std::vector<double> women_pos, std::vector<double> men_pos,
                     std::vector<double> men_ideal, std::vector<double> women_ideal,
                     PeakRelation relation, std::vector<std::vector<std::size_t>> men_rank,
                     std::vector<std::vector<std::size_t>> women_rank,
                     std::string provenance = {})
      : women_pos_(std::move(women_pos)),
        men_pos_(std::move(men_pos)),
        men_ideal_(std::move(men_ideal)),
        women_ideal_(std::move(women_ideal)),
        relation_(relation),
        provenance_(std::move(provenance)) {
    n_ = women_pos_.size();
    require(n_ >= 1, Errc::invalid_market, "single-peaked market needs n >= 1");
    require(men_pos_.size() == n_ && men_ideal_.size() == n_ && women_ideal_.size() == n_,
            Errc::dimension_mismatch, "single-peaked arrays must all have n entries");
    for (std::size_t i = 1; i < n_; ++i) {
      require(women_pos_[i - 1] < women_pos_[i], Errc::invalid_market,
              "women_pos must be strictly increasing");
      require(men_pos_[i - 1] < men_pos_[i], Errc::invalid_market,
              "men_pos must be strictly increasing");
    }
    if (relation_ == PeakRelation::custom) {
      men_rank_ = flatten_ranks(men_rank, "men_rank");
      women_rank_ = flatten_ranks(women_rank, "women_rank");
      check_peaks(men_rank_, women_pos_, men_ideal_, "man");
      check_peaks(women_rank_, men_pos_, women_ideal_, "woman");
    }
  }

  std::size_t n() const noexcept { return n_; }
  PeakRelation relation() const noexcept { return relation_; }
  const std::vector<double>& women_pos() const noexcept { return women_pos_; }
  const std::vector<double>& men_pos() const noexcept { return men_pos_; }
  const std::vector<double>& men_ideal() const noexcept { return men_ideal_; }
  const std::vector<double>& women_ideal() const noexcept { return women_ideal_; }
  const std::string& provenance() const noexcept { return provenance_; }

  const std::vector<double>& positions(Side s) const noexcept {
    return s == Side::men ? men_pos_ : women_pos_;
  }
  const std::vector<double>& ideals(Side s) const noexcept {
    return s == Side::men ? men_ideal_ : women_ideal_;
  }

  /// Custom relation only: candidate's position in the chooser's order.
  std::uint32_t custom_rank(Side chooser_side, std::size_t chooser,
                            std::size_t candidate) const noexcept {
    const auto& r = chooser_side == Side::men ? men_rank_ : women_rank_;
    return r[chooser * n_ + candidate];
  }

  std::vector<std::vector<std::size_t>> custom_ranks(Side chooser_side) const {
    const auto& r = chooser_side == Side::men ? men_rank_ : women_rank_;
    std::vector<std::vector<std::size_t>> out(r.empty() ? 0 : n_, std::vector<std::size_t>(n_));
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = r[i * n_ + j];
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> flatten_ranks(const std::vector<std::vector<std::size_t>>& ranks,
                                           const char* name) const {
    require(ranks.size() == n_, Errc::dimension_mismatch,
            std::string(name) + " must have n rows");
    std::vector<std::uint32_t> flat(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      require(detail::is_permutation_of_n(ranks[i], n_), Errc::invalid_market,
              std::string(name) + " row " + std::to_string(i) + " is not a permutation");
      for (std::size_t j = 0; j < n_; ++j) flat[i * n_ + j] = static_cast<std::uint32_t>(ranks[i][j]);
    }
    return flat;
  }

  // Adjacent-pair form of the peak condition; transitivity covers all pairs.
  void check_peaks(const std::vector<std::uint32_t>& rank, const std::vector<double>& cand_pos,
                   const std::vector<double>& ideal, const char* who) const {
    for (std::size_t c = 0; c < n_; ++c) {
      const std::uint32_t* row = rank.data() + c * n_;
      for (std::size_t i = 0; i + 1 < n_; ++i) {
        const bool left_of_peak = cand_pos[i + 1] <= ideal[c];
        const bool right_of_peak = cand_pos[i] >= ideal[c];
        if ((left_of_peak && row[i + 1] > row[i]) || (right_of_peak && row[i] > row[i + 1])) {
          throw Error(Errc::invalid_market, std::string("custom ranking of ") + who + " " +
                                                std::to_string(c) +
                                                " is not single-peaked around its ideal");
        }
      }
    }
  }

  std::size_t n_ = 0;
  std::vector<double> women_pos_, men_pos_, men_ideal_, women_ideal_;
  PeakRelation relation_ = PeakRelation::distance;
  std::vector<std::uint32_t> men_rank_, women_rank_;
  std::string provenance_;
};

/// Every participant has a location and an ideal point in R^d; a chooser
/// prefers candidates whose location is closer to the chooser's ideal.
class GeometricMarket {
 public:
  GeometricMarket(Matrix men_loc, Matrix men_ideal, Matrix women_loc, Matrix women_ideal,
                  std::string provenance = {})
      : men_loc_(std::move(men_loc)),
        men_ideal_(std::move(men_ideal)),
        women_loc_(std::move(women_loc)),
        women_ideal_(std::move(women_ideal)),
        provenance_(std::move(provenance)) {
    n_ = men_loc_.rows();
    d_ = men_loc_.cols();
    require(n_ >= 1 && d_ >= 1, Errc::invalid_market, "geometric market needs n >= 1 and d >= 1");
    detail::check_shape(men_ideal_, n_, d_, "men_ideal");
    detail::check_shape(women_loc_, n_, d_, "women_loc");
    detail::check_shape(women_ideal_, n_, d_, "women_ideal");
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  const Matrix& men_loc() const noexcept { return men_loc_; }
  const Matrix& men_ideal() const noexcept { return men_ideal_; }
  const Matrix& women_loc() const noexcept { return women_loc_; }
  const Matrix& women_ideal() const noexcept { return women_ideal_; }
  const std::string& provenance() const noexcept { return provenance_; }

  const Matrix& loc(Side s) const noexcept { return s == Side::men ? men_loc_ : women_loc_; }
  const Matrix& ideal(Side s) const noexcept { return s == Side::men ? men_ideal_ : women_ideal_; }

 private:
  std::size_t n_ = 0, d_ = 0;
  Matrix men_loc_, men_ideal_, women_loc_, women_ideal_;
  std::string provenance_;
};

/// General preferences as full rank matrices.
class ExplicitMarket {
 public:
  ExplicitMarket(const std::vector<std::vector<std::size_t>>& men_rank,
                 const std::vector<std::vector<std::size_t>>& women_rank,
                 std::string provenance = {})
      : provenance_(std::move(provenance)) {
    n_ = men_rank.size();
    require(n_ >= 1, Errc::invalid_market, "explicit market needs n >= 1");
    require(women_rank.size() == n_, Errc::dimension_mismatch,
            "men_rank and women_rank must both have n rows");
    men_rank_ = flatten(men_rank, "men_rank");
    women_rank_ = flatten(women_rank, "women_rank");
  }

  std::size_t n() const noexcept { return n_; }
  const std::string& provenance() const noexcept { return provenance_; }

  std::uint32_t rank(Side chooser_side, std::size_t chooser, std::size_t candidate) const noexcept {
    const auto& r = chooser_side == Side::men ? men_rank_ : women_rank_;
    return r[chooser * n_ + candidate];
  }

  std::vector<std::vector<std::size_t>> ranks(Side chooser_side) const {
    const auto& r = chooser_side == Side::men ? men_rank_ : women_rank_;
    std::vector<std::vector<std::size_t>> out(n_, std::vector<std::size_t>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = r[i * n_ + j];
    }
    return out;
  }

  /// Candidates of `chooser` from best to worst.
  std::vector<std::size_t> order(Side chooser_side, std::size_t chooser) const {
    std::vector<std::size_t> out(n_);
    for (std::size_t c = 0; c < n_; ++c) out[rank(chooser_side, chooser, c)] = c;
    return out;
  }

 private:
  std::vector<std::uint32_t> flatten(const std::vector<std::vector<std::size_t>>& rows,
                                     const char* name) const {
    std::vector<std::uint32_t> flat(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      require(detail::is_permutation_of_n(rows[i], n_), Errc::invalid_market,
              std::string(name) + " row " + std::to_string(i) + " is not a permutation");
      for (std::size_t j = 0; j < n_; ++j) flat[i * n_ + j] = static_cast<std::uint32_t>(rows[i][j]);
    }
    return flat;
  }

  std::size_t n_ = 0;
  std::vector<std::uint32_t> men_rank_, women_rank_;
  std::string provenance_;
};

using Market = std::variant<AttributeMarket, OneSidedMarket, ListMarket, SinglePeakedMarket,
                            GeometricMarket, ExplicitMarket>;

template <class M>
concept CardinalModel = std::same_as<M, AttributeMarket> || std::same_as<M, OneSidedMarket> ||
                        std::same_as<M, GeometricMarket>;

template <class M>
concept MarketModel = CardinalModel<M> || std::same_as<M, ListMarket> ||
                      std::same_as<M, SinglePeakedMarket> || std::same_as<M, ExplicitMarket>;

inline std::string_view model_name(const AttributeMarket&) noexcept { return "attribute"; }
inline std::string_view model_name(const OneSidedMarket&) noexcept { return "one_sided"; }
inline std::string_view model_name(const ListMarket&) noexcept { return "list"; }
inline std::string_view model_name(const SinglePeakedMarket&) noexcept { return "single_peaked"; }
inline std::string_view model_name(const GeometricMarket&) noexcept { return "geometric"; }
inline std::string_view model_name(const ExplicitMarket&) noexcept { return "explicit"; }

inline std::string_view model_name(const Market& market) noexcept {
  return std::visit([](const auto& m) { return model_name(m); }, market);
}

inline std::size_t market_size(const Market& market) noexcept {
  return std::visit([](const auto& m) { return m.n(); }, market);
}

inline const std::string& provenance(const Market& market) noexcept {
  return std::visit([](const auto& m) -> const std::string& { return m.provenance(); }, market);
}

// ---------------------------------------------------------------------------
// Values

inline double value(const AttributeMarket& am, Side side, std::size_t chooser,
                    std::size_t candidate) {
  detail::check_index(chooser, am.n(), "chooser");
  detail::check_index(candidate, am.n(), "candidate");
  return dot(am.weights(side).row(chooser), am.attrs(other(side)).row(candidate));
}

inline double value(const OneSidedMarket& osm, Side side, std::size_t chooser,
                    std::size_t candidate) {
  detail::check_index(chooser, osm.n(), "chooser");
  detail::check_index(candidate, osm.n(), "candidate");
  if (side == Side::men) return dot(osm.men_weights().row(chooser), osm.women_attrs().row(candidate));
  return static_cast<double>(osm.women_sign()[chooser]) * osm.men_attr()[candidate];
}

/// Negated squared distance between the chooser's ideal and the candidate's
/// location, so that larger is better.
inline double value(const GeometricMarket& gm, Side side, std::size_t chooser,
                    std::size_t candidate) {
  detail::check_index(chooser, gm.n(), "chooser");
  detail::check_index(candidate, gm.n(), "candidate");
  auto q = gm.ideal(side).row(chooser);
  auto p = gm.loc(other(side)).row(candidate);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double diff = q[i] - p[i];
    s += diff * diff;
  }
  return -s;
}

inline double value(const Market& market, Side side, std::size_t chooser, std::size_t candidate) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (CardinalModel<M>) {
          return value(m, side, chooser, candidate);
        } else {
          throw Error(Errc::ordinal_model,
                      std::string(model_name(m)) + " markets have no cardinal values");
        }
      },
      market);
}

// ---------------------------------------------------------------------------
// Strict comparisons

template <CardinalModel M>
bool prefers(const M& market, Side side, std::size_t chooser, std::size_t a, std::size_t b) {
  detail::check_index(b, market.n(), "candidate");
  return value(market, side, chooser, a) > value(market, side, chooser, b);
}

inline bool prefers(const ListMarket& lm, Side side, std::size_t chooser, std::size_t a,
                    std::size_t b) {
  detail::check_index(chooser, lm.n(), "chooser");
  detail::check_index(a, lm.n(), "candidate");
  detail::check_index(b, lm.n(), "candidate");
  if (side == Side::men) {
    const std::size_t i = lm.men_choice()[chooser];
    return lm.woman_rank(a, i) < lm.woman_rank(b, i);
  }
  const std::size_t j = lm.women_choice()[chooser];
  return lm.man_rank(a, j) < lm.man_rank(b, j);
}

inline bool prefers(const SinglePeakedMarket& spm, Side side, std::size_t chooser, std::size_t a,
                    std::size_t b) {
  detail::check_index(chooser, spm.n(), "chooser");
  detail::check_index(a, spm.n(), "candidate");
  detail::check_index(b, spm.n(), "candidate");
  if (spm.relation() == PeakRelation::custom) {
    return spm.custom_rank(side, chooser, a) < spm.custom_rank(side, chooser, b);
  }
  const double q = spm.ideals(side)[chooser];
  const auto& pos = spm.positions(other(side));
  return std::fabs(q - pos[a]) < std::fabs(q - pos[b]);
}

inline bool prefers(const ExplicitMarket& em, Side side, std::size_t chooser, std::size_t a,
                    std::size_t b) {
  detail::check_index(chooser, em.n(), "chooser");
  detail::check_index(a, em.n(), "candidate");
  detail::check_index(b, em.n(), "candidate");
  return em.rank(side, chooser, a) < em.rank(side, chooser, b);
}

inline bool prefers(const Market& market, Side side, std::size_t chooser, std::size_t a,
                    std::size_t b) {
  return std::visit([&](const auto& m) { return prefers(m, side, chooser, a, b); }, market);
}

/// True when neither candidate is strictly preferred.
template <class M>
bool indifferent(const M& market, Side side, std::size_t chooser, std::size_t a, std::size_t b) {
  return !prefers(market, side, chooser, a, b) && !prefers(market, side, chooser, b, a);
}

/// Strict blocking-pair predicate: both strictly prefer each other to their
/// partners under `mu` (given together with its inverse).
template <class M>
bool is_blocking(const M& market, const Matching& mu, const std::vector<std::size_t>& mu_inv,
                 std::size_t man, std::size_t woman) {
  return prefers(market, Side::men, man, woman, mu.pairs[man]) &&
         prefers(market, Side::women, woman, man, mu_inv[woman]);
}

// ---------------------------------------------------------------------------
// Total orders and conversions

/// Candidates of `chooser` from best to worst, ties by ascending index.
template <MarketModel M>
std::vector<std::size_t> preference_order(const M& market, Side side, std::size_t chooser) {
  detail::check_index(chooser, market.n(), "chooser");
  const std::size_t n = market.n();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if constexpr (std::same_as<M, ExplicitMarket>) {
    return market.order(side, chooser);
  } else if constexpr (CardinalModel<M>) {
    std::vector<double> v(n);
    for (std::size_t c = 0; c < n; ++c) v[c] = value(market, side, chooser, c);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return prefers(market, side, chooser, a, b);
    });
  }
  return order;
}

template <MarketModel M>
ExplicitMarket materialize(const M& market) {
  const std::size_t n = market.n();
  std::vector<std::vector<std::size_t>> men(n, std::vector<std::size_t>(n));
  std::vector<std::vector<std::size_t>> women(n, std::vector<std::size_t>(n));
  for (std::size_t c = 0; c < n; ++c) {
    const auto om = preference_order(market, Side::men, c);
    const auto ow = preference_order(market, Side::women, c);
    for (std::size_t pos = 0; pos < n; ++pos) {
      men[c][om[pos]] = pos;
      women[c][ow[pos]] = pos;
    }
  }
  std::string prov = "materialize(" + std::string(model_name(market));
  if (!market.provenance().empty()) prov += ":" + market.provenance();
  prov += ")";
  return ExplicitMarket(men, women, std::move(prov));
}

inline ExplicitMarket materialize(const Market& market) {
  return std::visit([](const auto& m) { return materialize(m); }, market);
}

/// Maps a geometric market to an attribute market with d+1 coordinates:
/// ideal q becomes the weight vector (2q, -1) and location a becomes the
/// attribute vector (a, |a|^2). The resulting value 2<q,a> - |a|^2 equals
/// |q|^2 - |q-a|^2, so every chooser keeps the same order.
inline AttributeMarket lift_geometric(const GeometricMarket& gm) {
  const std::size_t n = gm.n(), d = gm.d();
  auto lift_ideal = [&](const Matrix& ideal) {
    Matrix out(n, d + 1);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < d; ++i) out(r, i) = 2.0 * ideal(r, i);
      out(r, d) = -1.0;
    }
    return out;
  };
  auto lift_loc = [&](const Matrix& loc) {
    Matrix out(n, d + 1);
    for (std::size_t r = 0; r < n; ++r) {
      double sq = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        out(r, i) = loc(r, i);
        sq += loc(r, i) * loc(r, i);
      }
      out(r, d) = sq;
    }
    return out;
  };
  std::string prov = "lift_geometric(" + (gm.provenance().empty() ? std::string("geometric")
                                                                   : gm.provenance()) + ")";
  return AttributeMarket(lift_loc(gm.men_loc()), lift_ideal(gm.men_ideal()),
                         lift_loc(gm.women_loc()), lift_ideal(gm.women_ideal()), std::move(prov));
}

/// Rank matrices that keep ties: rank = number of strictly preferred candidates.
struct RankTable {
  std::size_t n = 0;
  std::vector<std::uint32_t> men;    // men[m * n + w]
  std::vector<std::uint32_t> women;  // women[w * n + m]

  bool man_prefers(std::size_t m, std::size_t a, std::size_t b) const noexcept {
    return men[m * n + a] < men[m * n + b];
  }
  bool woman_prefers(std::size_t w, std::size_t a, std::size_t b) const noexcept {
    return women[w * n + a] < women[w * n + b];
  }
};

template <MarketModel M>
RankTable rank_table(const M& market) {
  RankTable t;
  t.n = market.n();
  t.men.resize(t.n * t.n);
  t.women.resize(t.n * t.n);
  for (Side side : {Side::men, Side::women}) {
    auto& out = side == Side::men ? t.men : t.women;
    for (std::size_t c = 0; c < t.n; ++c) {
      const auto order = preference_order(market, side, c);
      std::uint32_t rank = 0;
      for (std::size_t pos = 0; pos < t.n; ++pos) {
        if (pos > 0 && prefers(market, side, c, order[pos - 1], order[pos])) {
          rank = static_cast<std::uint32_t>(pos);
        }
        out[c * t.n + order[pos]] = rank;
      }
    }
  }
  return t;
}

inline RankTable rank_table(const Market& market) {
  return std::visit([](const auto& m) { return rank_table(m); }, market);
}

}  // namespace smatch
