#include "pisrl/kd_tree.hpp"

#include <algorithm>

namespace pisrl {

std::unique_ptr<KdTree::Node> KdTree::build(Iter first, Iter last, int depth) {
  if (first == last) return nullptr;
  const int axis = depth % static_cast<int>(dims_);
  Iter mid = first + (last - first) / 2;
  std::nth_element(first, mid, last, [&](std::size_t a, std::size_t b) {
    const double pa = items_[a].point[static_cast<std::size_t>(axis)];
    const double pb = items_[b].point[static_cast<std::size_t>(axis)];
    if (pa != pb) return pa < pb;
    return items_[a].tie_key < items_[b].tie_key;
  });
  auto node = std::make_unique<Node>(Node{*mid, axis, nullptr, nullptr});
  node->left = build(first, mid, depth + 1);
  node->right = build(mid + 1, last, depth + 1);
  return node;
}

}  // namespace pisrl
