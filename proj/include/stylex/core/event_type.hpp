#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stylex {

// Declaration order is the popularity order used to sequence several events
// predicted on one element (lower = fired first).
enum class EventType : std::uint8_t { click = 0, mouseover, mouseout, mousedown, touchstart };

inline constexpr std::size_t kEventTypeCount = 5;

inline constexpr std::array<EventType, kEventTypeCount> kAllEventTypes = {
    EventType::click, EventType::mouseover, EventType::mouseout, EventType::mousedown,
    EventType::touchstart};

constexpr std::string_view to_string(EventType e) noexcept {
  switch (e) {
    case EventType::click: return "click";
    case EventType::mouseover: return "mouseover";
    case EventType::mouseout: return "mouseout";
    case EventType::mousedown: return "mousedown";
    case EventType::touchstart: return "touchstart";
  }
  return "click";
}

inline std::optional<EventType> parse_event_type(std::string_view name) noexcept {
  for (EventType e : kAllEventTypes)
    if (to_string(e) == name) return e;
  return std::nullopt;
}

constexpr int popularity_rank(EventType e) noexcept { return static_cast<int>(e); }

// Small value-type set of EventType backed by a bitmask.
class EventSet {
 public:
  constexpr EventSet() = default;
  constexpr EventSet(std::initializer_list<EventType> events) {
    for (EventType e : events) insert(e);
  }

  static constexpr EventSet from_bits(std::uint8_t bits) noexcept {
    EventSet s;
    s.bits_ = bits & 0x1F;
    return s;
  }

  constexpr void insert(EventType e) noexcept { bits_ |= bit(e); }
  constexpr void erase(EventType e) noexcept { bits_ &= static_cast<std::uint8_t>(~bit(e)); }
  constexpr bool contains(EventType e) const noexcept { return (bits_ & bit(e)) != 0; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint8_t bits() const noexcept { return bits_; }

  constexpr std::size_t size() const noexcept {
    std::size_t n = 0;
    for (std::uint8_t b = bits_; b; b &= static_cast<std::uint8_t>(b - 1)) ++n;
    return n;
  }

  constexpr bool is_subset_of(EventSet other) const noexcept {
    return (bits_ & ~other.bits_) == 0;
  }

  constexpr EventSet operator|(EventSet o) const noexcept { return from_bits(bits_ | o.bits_); }
  constexpr EventSet& operator|=(EventSet o) noexcept {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr bool operator==(const EventSet&) const noexcept = default;

  // Members in popularity order.
  std::vector<EventType> to_vector() const {
    std::vector<EventType> out;
    for (EventType e : kAllEventTypes)
      if (contains(e)) out.push_back(e);
    return out;
  }

 private:
  static constexpr std::uint8_t bit(EventType e) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(e));
  }
  std::uint8_t bits_ = 0;
};

}  // namespace stylex
