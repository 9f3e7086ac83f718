#pragma once

// Exact point indexes used by the solvers and verifiers.
//
// HalfspaceMaxIndex answers "which live point has the largest inner product
// with this direction" and supports deletions. RangeEmptinessIndex answers
// "is there a point strictly inside both of these halfspaces". Both are kd-trees
// (median split, axes taken in rotation, tight bounding box per node) searched
// by branch and bound. They are exact: every answer equals a linear scan that
// computes the same left-to-right dot products. Box bounds are computed with
// the same summation order, and because IEEE rounding is monotone a box bound
// is never below the computed product of any point inside the box.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/matrix.hpp"

namespace smatch {

/// Search statistics; with `collect_pruned` set, the live points of every
/// skipped subtree are recorded so tests can check that skipping was sound.
struct QueryTrace {
  bool collect_pruned = false;
  std::size_t nodes_visited = 0;
  std::size_t points_scanned = 0;
  std::vector<std::size_t> pruned_points;
};

namespace detail {

// Static kd-tree skeleton shared by both indexes. Points are copied into
// tree order; `order[pos]` is the original index of the point at `pos`.
class KdTree {
 public:
  static constexpr std::size_t leaf_size = 8;
  static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t begin = 0, end = 0;
    std::uint32_t left = none, right = none, parent = none;
    std::size_t min_index = 0;
  };

  KdTree() = default;

  explicit KdTree(const Matrix& points) : m_(points.rows()), d_(points.cols()) {
    order.resize(m_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (m_ == 0) return;
    nodes.reserve(2 * (m_ / leaf_size + 1));
    build(points, 0, static_cast<std::uint32_t>(m_), 0, none);
    coords.resize(m_ * d_);
    for (std::size_t pos = 0; pos < m_; ++pos) {
      auto src = points.row(order[pos]);
      std::copy(src.begin(), src.end(), coords.begin() + static_cast<std::ptrdiff_t>(pos * d_));
    }
    leaf_of.assign(m_, none);
    for (std::uint32_t id = 0; id < nodes.size(); ++id) {
      if (nodes[id].left == none) {
        for (std::uint32_t pos = nodes[id].begin; pos < nodes[id].end; ++pos) leaf_of[pos] = id;
      }
    }
  }

  std::size_t size() const noexcept { return m_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const double> point(std::size_t pos) const noexcept {
    return {coords.data() + pos * d_, d_};
  }
  const double* lo(std::uint32_t node) const noexcept { return box_lo.data() + node * d_; }
  const double* hi(std::uint32_t node) const noexcept { return box_hi.data() + node * d_; }

  /// Largest computed dot product any point in the box can have.
  double upper(std::uint32_t node, std::span<const double> dir) const noexcept {
    const double* l = lo(node);
    const double* h = hi(node);
    double s = 0.0;
    for (std::size_t i = 0; i < d_; ++i) s += std::max(dir[i] * l[i], dir[i] * h[i]);
    return s;
  }

  double lower(std::uint32_t node, std::span<const double> dir) const noexcept {
    const double* l = lo(node);
    const double* h = hi(node);
    double s = 0.0;
    for (std::size_t i = 0; i < d_; ++i) s += std::min(dir[i] * l[i], dir[i] * h[i]);
    return s;
  }

  std::vector<Node> nodes;
  std::vector<std::size_t> order;
  std::vector<double> coords;
  std::vector<double> box_lo, box_hi;
  std::vector<std::uint32_t> leaf_of;  // by position

 private:
  std::uint32_t build(const Matrix& points, std::uint32_t begin, std::uint32_t end,
                      std::size_t depth, std::uint32_t parent) {
    const auto id = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back(Node{begin, end, none, none, parent, 0});
    box_lo.resize(box_lo.size() + d_, std::numeric_limits<double>::infinity());
    box_hi.resize(box_hi.size() + d_, -std::numeric_limits<double>::infinity());
    std::size_t min_index = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t pos = begin; pos < end; ++pos) {
      auto p = points.row(order[pos]);
      min_index = std::min(min_index, order[pos]);
      for (std::size_t i = 0; i < d_; ++i) {
        box_lo[id * d_ + i] = std::min(box_lo[id * d_ + i], p[i]);
        box_hi[id * d_ + i] = std::max(box_hi[id * d_ + i], p[i]);
      }
    }
    nodes[id].min_index = min_index;
    if (end - begin <= leaf_size) return id;
    const std::size_t axis = depth % d_;
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                       const double pa = points(a, axis), pb = points(b, axis);
                       return pa < pb || (pa == pb && a < b);
                     });
    const std::uint32_t l = build(points, begin, mid, depth + 1, id);
    const std::uint32_t r = build(points, mid, end, depth + 1, id);
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }

  std::size_t m_ = 0, d_ = 0;
};

}  // namespace detail

/// Argmax of <direction, point> over live points, with deletions.
/// Ties go to the smallest point index.
class HalfspaceMaxIndex {
 public:
  HalfspaceMaxIndex() = default;

  explicit HalfspaceMaxIndex(const Matrix& points)
      : m_(points.rows()), d_(points.cols()), live_(points.rows(), 1), live_count_(points.rows()) {
    if (d_ == 1) {
      build_line(points);
    } else {
      tree_ = detail::KdTree(points);
      pos_of_.resize(m_);
      for (std::size_t pos = 0; pos < m_; ++pos) pos_of_[tree_.order[pos]] = pos;
      node_live_.resize(tree_.nodes.size());
      for (std::size_t id = 0; id < tree_.nodes.size(); ++id) {
        node_live_[id] = tree_.nodes[id].end - tree_.nodes[id].begin;
      }
    }
  }

  static HalfspaceMaxIndex from_rows(const std::vector<std::vector<double>>& rows) {
    return HalfspaceMaxIndex(Matrix::from_rows(rows));
  }

  std::size_t size() const noexcept { return m_; }
  std::size_t dim() const noexcept { return d_; }
  std::size_t live_count() const noexcept { return live_count_; }
  bool is_live(std::size_t p) const {
    detail::check_index(p, m_, "point");
    return live_[p] != 0;
  }

  /// Empty optional when no live point remains.
  std::optional<std::size_t> query_max(std::span<const double> direction,
                                       QueryTrace* trace = nullptr) const {
    require(direction.size() == d_ || m_ == 0, Errc::dimension_mismatch,
            "direction has " + std::to_string(direction.size()) + " coordinates, index has " +
                std::to_string(d_));
    if (live_count_ == 0) return std::nullopt;
    if (d_ == 1) return query_line(direction[0], trace);
    return query_tree(direction, trace);
  }

  std::optional<std::size_t> query_max(const std::vector<double>& direction,
                                       QueryTrace* trace = nullptr) const {
    return query_max(std::span<const double>(direction), trace);
  }

  void erase(std::size_t p) {
    detail::check_index(p, m_, "point");
    require(live_[p] != 0, Errc::already_deleted, "point " + std::to_string(p) + " already deleted");
    live_[p] = 0;
    --live_count_;
    if (d_ == 1) {
      line_live_.erase(line_pos_of_[p]);
      live_ids_.erase(p);
      return;
    }
    for (std::uint32_t id = tree_.leaf_of[pos_of_[p]]; id != detail::KdTree::none;
         id = tree_.nodes[id].parent) {
      --node_live_[id];
    }
  }

 private:
  void better(double v, std::size_t idx, double& best, std::size_t& best_idx) const {
    if (v > best || (v == best && idx < best_idx)) {
      best = v;
      best_idx = idx;
    }
  }

  void collect_live(std::uint32_t node, QueryTrace* trace) const {
    if (!trace || !trace->collect_pruned) return;
    const auto& nd = tree_.nodes[node];
    for (std::uint32_t pos = nd.begin; pos < nd.end; ++pos) {
      if (live_[tree_.order[pos]]) trace->pruned_points.push_back(tree_.order[pos]);
    }
  }

  std::optional<std::size_t> query_tree(std::span<const double> dir, QueryTrace* trace) const {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = std::numeric_limits<std::size_t>::max();
    bool found = false;
    std::vector<std::pair<std::uint32_t, double>> stack;
    stack.emplace_back(0, tree_.upper(0, dir));
    while (!stack.empty()) {
      const auto [id, bound] = stack.back();
      stack.pop_back();
      const auto& nd = tree_.nodes[id];
      if (node_live_[id] == 0) continue;
      if (found && (bound < best || (bound == best && nd.min_index > best_idx))) {
        collect_live(id, trace);
        continue;
      }
      if (trace) ++trace->nodes_visited;
      if (nd.left == detail::KdTree::none) {
        for (std::uint32_t pos = nd.begin; pos < nd.end; ++pos) {
          const std::size_t idx = tree_.order[pos];
          if (!live_[idx]) continue;
          if (trace) ++trace->points_scanned;
          better(dot(dir, tree_.point(pos)), idx, best, best_idx);
          found = true;
        }
        continue;
      }
      const double bl = tree_.upper(nd.left, dir);
      const double br = tree_.upper(nd.right, dir);
      // Push the weaker child first so the stronger one is explored first.
      if (bl >= br) {
        stack.emplace_back(nd.right, br);
        stack.emplace_back(nd.left, bl);
      } else {
        stack.emplace_back(nd.left, bl);
        stack.emplace_back(nd.right, br);
      }
    }
    return best_idx;
  }

  // One-dimensional case: points sorted by (coordinate, index); the best
  // point for a positive direction is at the top end, for a negative one at
  // the bottom. Products are monotone in the coordinate, so equal products
  // form a contiguous run that is walked to find the smallest index.
  void build_line(const Matrix& points) {
    line_order_.resize(m_);
    std::iota(line_order_.begin(), line_order_.end(), std::size_t{0});
    std::sort(line_order_.begin(), line_order_.end(), [&](std::size_t a, std::size_t b) {
      const double pa = points(a, 0), pb = points(b, 0);
      return pa < pb || (pa == pb && a < b);
    });
    line_pos_of_.resize(m_);
    line_x_.resize(m_);
    for (std::size_t pos = 0; pos < m_; ++pos) {
      line_pos_of_[line_order_[pos]] = pos;
      line_x_[pos] = points(line_order_[pos], 0);
      line_live_.insert(line_live_.end(), pos);
      live_ids_.insert(live_ids_.end(), pos);
    }
  }

  std::optional<std::size_t> query_line(double dir, QueryTrace* trace) const {
    if (dir == 0.0) return *live_ids_.begin();
    auto product = [&](std::size_t pos) { return dir * line_x_[pos]; };
    std::size_t best_idx;
    if (dir > 0.0) {
      auto it = std::prev(line_live_.end());
      const double best = product(*it);
      best_idx = line_order_[*it];
      while (it != line_live_.begin()) {
        --it;
        if (product(*it) != best) break;
        if (trace) ++trace->points_scanned;
        best_idx = std::min(best_idx, line_order_[*it]);
      }
    } else {
      auto it = line_live_.begin();
      const double best = product(*it);
      best_idx = line_order_[*it];
      for (++it; it != line_live_.end() && product(*it) == best; ++it) {
        if (trace) ++trace->points_scanned;
        best_idx = std::min(best_idx, line_order_[*it]);
      }
    }
    return best_idx;
  }

  std::size_t m_ = 0, d_ = 0;
  std::vector<char> live_;
  std::size_t live_count_ = 0;

  detail::KdTree tree_;
  std::vector<std::size_t> pos_of_;
  std::vector<std::size_t> node_live_;

  std::vector<std::size_t> line_order_, line_pos_of_;
  std::vector<double> line_x_;
  std::set<std::size_t> line_live_;  // live positions in coordinate order
  std::set<std::size_t> live_ids_;
};

/// Open halfspace { x : <normal, x> > threshold }.
struct Halfspace {
  std::vector<double> normal;
  double threshold = 0.0;

  bool contains(std::span<const double> x) const noexcept { return dot(normal, x) > threshold; }
};

/// Static index for "some point strictly inside two halfspaces".
class RangeEmptinessIndex {
 public:
  RangeEmptinessIndex() = default;
  explicit RangeEmptinessIndex(const Matrix& points) : tree_(points) {}

  static RangeEmptinessIndex from_rows(const std::vector<std::vector<double>>& rows) {
    return RangeEmptinessIndex(Matrix::from_rows(rows));
  }

  std::size_t size() const noexcept { return tree_.size(); }
  std::size_t dim() const noexcept { return tree_.dim(); }

  /// First point (in traversal order) inside both halfspaces for which
  /// `accept(index)` holds.
  template <class Accept>
  std::optional<std::size_t> find_if(const Halfspace& h1, const Halfspace& h2, Accept&& accept,
                                     QueryTrace* trace = nullptr) const {
    check(h1);
    check(h2);
    std::optional<std::size_t> hit;
    if (tree_.size() == 0) return hit;
    visit(h1, h2, trace, [&](std::size_t idx) {
      if (!accept(idx)) return false;
      hit = idx;
      return true;
    });
    return hit;
  }

  std::optional<std::size_t> find_first(const Halfspace& h1, const Halfspace& h2,
                                        QueryTrace* trace = nullptr) const {
    return find_if(h1, h2, [](std::size_t) { return true; }, trace);
  }

  bool exists(const Halfspace& h1, const Halfspace& h2) const {
    return find_first(h1, h2).has_value();
  }

  /// Number of points inside both halfspaces (debugging aid).
  std::size_t count(const Halfspace& h1, const Halfspace& h2) const {
    check(h1);
    check(h2);
    std::size_t c = 0;
    if (tree_.size() == 0) return c;
    visit(h1, h2, nullptr, [&](std::size_t) {
      ++c;
      return false;
    });
    return c;
  }

 private:
  void check(const Halfspace& h) const {
    require(h.normal.size() == tree_.dim() || tree_.size() == 0, Errc::dimension_mismatch,
            "halfspace normal has " + std::to_string(h.normal.size()) +
                " coordinates, index has " + std::to_string(tree_.dim()));
  }

  // Calls `emit` on qualifying points until it returns true.
  template <class Emit>
  void visit(const Halfspace& h1, const Halfspace& h2, QueryTrace* trace, Emit&& emit) const {
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
      const std::uint32_t id = stack.back();
      stack.pop_back();
      const auto& nd = tree_.nodes[id];
      if (tree_.upper(id, h1.normal) <= h1.threshold ||
          tree_.upper(id, h2.normal) <= h2.threshold) {
        if (trace && trace->collect_pruned) {
          for (std::uint32_t pos = nd.begin; pos < nd.end; ++pos) {
            trace->pruned_points.push_back(tree_.order[pos]);
          }
        }
        continue;
      }
      if (trace) ++trace->nodes_visited;
      const bool all_inside = tree_.lower(id, h1.normal) > h1.threshold &&
                              tree_.lower(id, h2.normal) > h2.threshold;
      if (all_inside || nd.left == detail::KdTree::none) {
        for (std::uint32_t pos = nd.begin; pos < nd.end; ++pos) {
          if (trace) ++trace->points_scanned;
          if (!all_inside && !(h1.contains(tree_.point(pos)) && h2.contains(tree_.point(pos)))) {
            continue;
          }
          if (emit(tree_.order[pos])) return;
        }
        continue;
      }
      stack.push_back(nd.right);
      stack.push_back(nd.left);
    }
  }

  detail::KdTree tree_;
};

}  // namespace smatch
