#include "hawkes/event_path.hpp"

#include <algorithm>
#include <iomanip>

namespace hawkes {

std::string_view tag_name(EventTag tag) noexcept {
    switch (tag) {
        case EventTag::spontaneous: return "spontaneous";
        case EventTag::excited: return "excited";
        case EventTag::enforced: return "enforced";
    }
    return "unknown";
}

std::vector<double> EventPath::times() const {
    std::vector<double> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.time);
    return out;
}

std::size_t EventPath::count_until(double t) const noexcept {
    auto it = std::upper_bound(events.begin(), events.end(), t,
                               [](double x, const Event& e) { return x < e.time; });
    return static_cast<std::size_t>(it - events.begin());
}

std::size_t EventPath::count(EventTag tag) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [tag](const Event& e) { return e.tag == tag; }));
}

EventPath EventPath::prefix_before(double t) const {
    EventPath out;
    for (const auto& e : events) {
        if (e.time >= t) break;
        out.events.push_back(e);
    }
    return out;
}

void write_csv_rows(std::ostream& os, std::size_t path_id, const EventPath& path) {
    const auto old = os.precision(17);
    for (const auto& e : path.events)
        os << path_id << ',' << e.time << ',' << tag_name(e.tag) << ',' << e.intensity << '\n';
    os.precision(old);
}

}  // namespace hawkes
