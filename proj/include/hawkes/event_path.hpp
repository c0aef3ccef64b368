#pragma once

#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

namespace hawkes {

enum class EventTag : unsigned char { spontaneous, excited, enforced };

[[nodiscard]] std::string_view tag_name(EventTag tag) noexcept;

/// One jump of a (possibly shifted) Hawkes path.
struct Event {
    double time;
    EventTag tag;
    /// Lambda(time-), the intensity just before the jump.
    double intensity;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Strictly increasing jump times in (0, T] with their tags.
struct EventPath {
    std::vector<Event> events;

    [[nodiscard]] std::size_t size() const noexcept { return events.size(); }
    [[nodiscard]] bool empty() const noexcept { return events.empty(); }
    [[nodiscard]] std::vector<double> times() const;
    /// Number of jumps at times <= t.
    [[nodiscard]] std::size_t count_until(double t) const noexcept;
    [[nodiscard]] std::size_t count(EventTag tag) const noexcept;
    /// Events strictly before t.
    [[nodiscard]] EventPath prefix_before(double t) const;

    friend bool operator==(const EventPath&, const EventPath&) = default;
};

/// Writes "path_id,time,tag,intensity_left_limit" rows (no header).
void write_csv_rows(std::ostream& os, std::size_t path_id, const EventPath& path);
inline constexpr std::string_view kPathCsvHeader = "path_id,time,tag,intensity_left_limit";

}  // namespace hawkes
