#pragma once

#include <algorithm>
#include <vector>

#include "stylex/core/types.hpp"
#include "stylex/error.hpp"

namespace stylex {

struct TreeOrder {
  std::vector<ElementId> preorder;
  std::vector<std::int64_t> depth;
  std::vector<ElementId> parent;  // parent[root] == root
};

// Walks the adjacency from the root and rejects anything that is not a single
// rooted tree covering every element.
inline TreeOrder validate_tree(const DomSnapshot& snapshot) {
  const std::size_t n = snapshot.elements.size();
  if (n == 0) throw MalformedSnapshotError("snapshot has no elements");
  if (snapshot.children.size() != n)
    throw MalformedSnapshotError("adjacency size does not match element count");
  if (snapshot.root >= n) throw MalformedSnapshotError("root id out of range");
  for (std::size_t i = 0; i < n; ++i)
    if (snapshot.elements[i].element_id != i)
      throw MalformedSnapshotError("element at position " + std::to_string(i) +
                                   " has id " +
                                   std::to_string(snapshot.elements[i].element_id));

  TreeOrder order;
  order.depth.assign(n, -1);
  order.parent.assign(n, n);
  order.preorder.reserve(n);

  std::vector<ElementId> stack{snapshot.root};
  order.depth[snapshot.root] = 0;
  order.parent[snapshot.root] = snapshot.root;
  while (!stack.empty()) {
    ElementId id = stack.back();
    stack.pop_back();
    order.preorder.push_back(id);
    const auto& kids = snapshot.children[id];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      ElementId c = *it;
      if (c >= n) throw MalformedSnapshotError("child id " + std::to_string(c) + " out of range");
      if (order.depth[c] != -1)
        throw MalformedSnapshotError("element " + std::to_string(c) +
                                     " reached twice (cycle or shared child)");
      order.depth[c] = order.depth[id] + 1;
      order.parent[c] = id;
      stack.push_back(c);
    }
  }
  if (order.preorder.size() != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (order.depth[i] == -1)
        throw MalformedSnapshotError("orphan element " + std::to_string(i));
  }
  return order;
}

// Recomputes dom_depth, descendant_count and subtree_height from the adjacency.
inline DomSnapshot recompute_structural(DomSnapshot snapshot) {
  const TreeOrder order = validate_tree(snapshot);
  const std::size_t n = snapshot.elements.size();
  std::vector<std::int64_t> descendants(n, 0);
  std::vector<std::int64_t> height(n, 0);
  for (auto it = order.preorder.rbegin(); it != order.preorder.rend(); ++it) {
    ElementId id = *it;
    for (ElementId c : snapshot.children[id]) {
      descendants[id] += descendants[c] + 1;
      height[id] = std::max(height[id], height[c] + 1);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& f = snapshot.elements[i].features;
    f.dom_depth = order.depth[i];
    f.descendant_count = descendants[i];
    f.subtree_height = height[i];
  }
  return snapshot;
}

}  // namespace stylex
