#ifndef MOTO_TELECOM_HPP
#define MOTO_TELECOM_HPP

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moto/geo.hpp"
#include "moto/strings.hpp"

namespace moto::telecom {

/// One inbound text message on the simulated GSM channel.
struct SmsMessage {
    std::string sender;
    std::string body;
    std::int64_t received_at = 0; // simulated ms

    bool operator==(const SmsMessage&) const = default;
};

enum class Command {
    Ignite,
    Locate,
    Unknown,
};

/// Maps a message onto the owner-command grammar. Only the owner's number
/// may command the system; bodies are trimmed and matched case-insensitively
/// against the configured keywords. Anything else is Unknown.
inline Command parse_command(const SmsMessage& msg, std::string_view owner_number,
                             std::string_view ignite_kw, std::string_view locate_kw) {
    if (msg.sender != owner_number) return Command::Unknown;
    std::string_view body = trim(msg.body);
    if (iequals(body, ignite_kw)) return Command::Ignite;
    if (iequals(body, locate_kw)) return Command::Locate;
    return Command::Unknown;
}

/// Bounded FIFO modeling the SIM message store. Overflow rejects the
/// newest message and reports it through the push flag.
struct Inbox {
    std::size_t capacity = 10;
    std::deque<SmsMessage> queue;

    bool operator==(const Inbox&) const = default;
};

inline std::pair<Inbox, bool> inbox_push(Inbox ib, SmsMessage msg) {
    if (ib.queue.size() >= ib.capacity) return {std::move(ib), false};
    ib.queue.push_back(std::move(msg));
    return {std::move(ib), true};
}

/// Removes and returns every stored message in arrival order, leaving the
/// inbox empty.
inline std::pair<Inbox, std::vector<SmsMessage>> inbox_drain(Inbox ib) {
    std::vector<SmsMessage> messages(ib.queue.begin(), ib.queue.end());
    ib.queue.clear();
    return {std::move(ib), std::move(messages)};
}

/// "LOC lat=<lat> lon=<lon> https://maps.google.com/?q=<lat>,<lon>",
/// coordinates fixed-point with 6 decimals.
inline std::string format_location_reply(const geo::GeoFix& fix) {
    std::string lat = format_fixed(fix.lat, 6);
    std::string lon = format_fixed(fix.lon, 6);
    return "LOC lat=" + lat + " lon=" + lon + " https://maps.google.com/?q=" + lat + "," + lon;
}

/// "THEFT moved=<d>m lat=<lat> lon=<lon>", displacement at 1 decimal.
inline std::string format_theft_alert(const geo::GeoFix& fix, double displacement_m) {
    return "THEFT moved=" + format_fixed(displacement_m, 1) + "m lat=" +
           format_fixed(fix.lat, 6) + " lon=" + format_fixed(fix.lon, 6);
}

/// "INTRUDER attempt - photo: <url>"
inline std::string format_intruder_alert(std::string_view url) {
    return "INTRUDER attempt - photo: " + std::string(url);
}

} // namespace moto::telecom

#endif // MOTO_TELECOM_HPP
