#pragma once

#include "stylex/core/types.hpp"
#include "stylex/crawl/coverage.hpp"

namespace stylex {

struct EventPayload {
  // Mouse button for mousedown: 0 main, 1 auxiliary, 2 secondary.
  int button = 0;

  bool operator==(const EventPayload&) const = default;
};

// What the crawl engine drives. Snapshots returned here never carry listener
// ground truth; implementations throw BackendError subclasses on failure and
// StaleElementError when the addressed element has disappeared.
class Backend {
 public:
  virtual ~Backend() = default;

  // Loads the initial page and returns its settled snapshot.
  virtual DomSnapshot reset() = 0;

  virtual DomSnapshot fire(ElementId element, EventType event, const EventPayload& payload) = 0;

  // Cumulative coverage since the backend was created.
  virtual CoverageLedger coverage() = 0;
};

}  // namespace stylex
