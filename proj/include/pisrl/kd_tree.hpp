#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace pisrl {

// Exact nearest-neighbor index over points in R^n with incremental insert.
// Ties on squared distance are broken by the smallest tie_key, so answers are
// identical to a linear scan that prefers the oldest point. Inserting along a
// correlated trajectory degrades balance, so the tree rebuilds itself once
// the number of points doubles since the last bulk build.
class KdTree {
 public:
  struct Item {
    std::vector<double> point;
    std::size_t payload;    // caller-side index
    std::uint64_t tie_key;  // lower wins on distance ties
  };

  struct Result {
    std::size_t payload = 0;
    double distance_sq = std::numeric_limits<double>::infinity();
    std::uint64_t tie_key = 0;
    bool found = false;
  };

  explicit KdTree(std::size_t dims) : dims_(dims) {}

  std::size_t size() const { return items_.size(); }

  void clear() {
    items_.clear();
    root_.reset();
    built_size_ = 0;
  }

  void insert(std::vector<double> point, std::size_t payload, std::uint64_t tie_key) {
    items_.push_back(Item{std::move(point), payload, tie_key});
    if (items_.size() > 2 * built_size_ + 64) {
      rebuild();
      return;
    }
    insert_node(items_.size() - 1);
  }

  // Replace the whole point set (bulk load, balanced).
  void assign(std::vector<Item> items) {
    items_ = std::move(items);
    rebuild();
  }

  Result nearest(const std::vector<double>& query) const {
    Result best;
    if (root_) search(root_.get(), query, best);
    return best;
  }

 private:
  struct Node {
    std::size_t item;
    int axis;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
  };

  void insert_node(std::size_t item_index) {
    const auto& p = items_[item_index].point;
    if (!root_) {
      root_ = std::make_unique<Node>(Node{item_index, 0, nullptr, nullptr});
      return;
    }
    Node* node = root_.get();
    int depth = 0;
    for (;;) {
      const int axis = node->axis;
      auto& child = p[static_cast<std::size_t>(axis)] <
                            items_[node->item].point[static_cast<std::size_t>(axis)]
                        ? node->left
                        : node->right;
      if (!child) {
        child = std::make_unique<Node>(
            Node{item_index, static_cast<int>((depth + 1) % static_cast<int>(dims_)),
                 nullptr, nullptr});
        return;
      }
      node = child.get();
      ++depth;
    }
  }

  void rebuild() {
    root_.reset();
    if (!items_.empty()) {
      std::vector<std::size_t> order(items_.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      root_ = build(order.begin(), order.end(), 0);
    }
    built_size_ = items_.size();
  }

  using Iter = std::vector<std::size_t>::iterator;

  std::unique_ptr<Node> build(Iter first, Iter last, int depth);

  double distance_sq(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dims_; ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return s;
  }

  void search(const Node* node, const std::vector<double>& query, Result& best) const {
    const Item& it = items_[node->item];
    const double d2 = distance_sq(query, it.point);
    if (!best.found || d2 < best.distance_sq ||
        (d2 == best.distance_sq && it.tie_key < best.tie_key)) {
      best = Result{it.payload, d2, it.tie_key, true};
    }
    const std::size_t axis = static_cast<std::size_t>(node->axis);
    const double diff = query[axis] - it.point[axis];
    const Node* near = diff < 0.0 ? node->left.get() : node->right.get();
    const Node* far = diff < 0.0 ? node->right.get() : node->left.get();
    if (near) search(near, query, best);
    // Equal squared distance on the splitting plane may still hide a
    // lower-tie-key point, so only a strictly larger gap prunes.
    if (far && diff * diff <= best.distance_sq) search(far, query, best);
  }

  std::size_t dims_;
  std::vector<Item> items_;
  std::unique_ptr<Node> root_;
  std::size_t built_size_ = 0;
};

}  // namespace pisrl
