#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stylex/core/structure.hpp"
#include "stylex/core/types.hpp"
#include "stylex/features/extract.hpp"
#include "stylex/util/text.hpp"

namespace stylex {

// Hyperlinks with an href, buttons, and inputs of type button/submit/image.
inline bool is_default_actionable(std::string_view tag_name,
                                  const std::map<std::string, std::string>& attributes) {
  const std::string tag = util::to_lower(tag_name);
  if (tag == "a") return attributes.contains("href");
  if (tag == "button") return true;
  if (tag == "input") {
    auto it = attributes.find("type");
    if (it == attributes.end()) return false;
    const std::string type = util::to_lower(util::trim(it->second));
    return type == "button" || type == "submit" || type == "image";
  }
  return false;
}

inline DomSnapshot mark_default_actionables(DomSnapshot snapshot) {
  for (auto& e : snapshot.elements)
    e.is_default_actionable = is_default_actionable(e.tag_name, e.attributes);
  return snapshot;
}

// Every listener bubbles: an element inherits the direct listeners of all its
// ancestors. Default actionables also get click. Existing effective labels are
// kept, so the operation is monotone and idempotent.
inline DomSnapshot propagate_labels(DomSnapshot snapshot) {
  const TreeOrder order = validate_tree(snapshot);
  std::vector<EventSet> inherited(snapshot.size());
  for (ElementId id : order.preorder) {
    auto& e = snapshot.elements[id];
    EventSet from_above =
        id == snapshot.root ? EventSet{} : inherited[order.parent[id]];
    inherited[id] = from_above | e.direct_listeners;
    e.effective_labels |= inherited[id];
    if (e.is_default_actionable) e.effective_labels.insert(EventType::click);
  }
  return snapshot;
}

// One element as reported by a page, in preorder. parent is empty for the
// root and must otherwise reference an earlier element.
struct ObservedElement {
  RawElementObservation observation;
  std::optional<ElementId> parent;
  EventSet direct_listeners;
  bool listeners_known = true;
};

// Assembles a labeled snapshot: adjacency from parent links, structural
// features from the tree, style features from the observations, default
// actionables from tag metadata. Effective labels are left empty.
inline DomSnapshot build_snapshot(std::string snapshot_id,
                                  const std::vector<ObservedElement>& elements,
                                  std::string serialized_dom, const std::string& site_id,
                                  const ExtractionOptions& options = {}) {
  if (elements.empty()) throw MalformedSnapshotError("page has no elements");
  DomSnapshot snap;
  snap.snapshot_id = std::move(snapshot_id);
  snap.serialized_dom = std::string(util::trim(serialized_dom));
  snap.children.resize(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& p = elements[i].parent;
    if (i == 0) {
      if (p) throw MalformedSnapshotError("first element must be the root");
      continue;
    }
    if (!p || *p >= i)
      throw MalformedSnapshotError("element " + std::to_string(i) +
                                   " does not reference an earlier parent");
    snap.children[*p].push_back(i);
  }
  snap.elements.resize(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    auto& e = snap.elements[i];
    e.element_id = i;
    e.site_id = site_id;
    e.snapshot_id = snap.snapshot_id;
    e.tag_name = util::to_lower(elements[i].observation.tag_name);
    for (const char* key : {"href", "type"}) {
      auto it = elements[i].observation.attributes.find(key);
      if (it != elements[i].observation.attributes.end()) e.attributes.emplace(key, it->second);
    }
    e.direct_listeners = elements[i].direct_listeners;
    e.listeners_known = elements[i].listeners_known;
  }
  snap = recompute_structural(std::move(snap));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    auto& e = snap.elements[i];
    StructuralPosition pos{e.features.dom_depth, e.features.descendant_count,
                           e.features.subtree_height};
    e.features = extract_features(elements[i].observation, pos, options);
  }
  return mark_default_actionables(std::move(snap));
}

// Removes anything a crawl strategy must not see.
inline DomSnapshot strip_ground_truth(DomSnapshot snapshot) {
  for (auto& e : snapshot.elements) {
    e.direct_listeners = {};
    e.effective_labels = {};
  }
  return snapshot;
}

}  // namespace stylex
