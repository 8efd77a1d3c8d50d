#ifndef MOTO_GEO_HPP
#define MOTO_GEO_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moto/error.hpp"

namespace moto::geo {

constexpr double kEarthRadiusM = 6'371'000.0;

/// A timestamped position as parsed from a GPS sentence.
/// quality 0 means the receiver reports no valid fix.
struct GeoFix {
    double lat = 0.0;     // degrees, north positive
    double lon = 0.0;     // degrees, east positive
    int quality = 0;
    std::string time_tag; // time field as carried by the sentence

    bool operator==(const GeoFix&) const = default;
};

/// XOR checksum over the sentence payload (between '$' and '*'),
/// rendered as two uppercase hex digits.
inline std::string nmea_checksum(std::string_view payload) {
    unsigned char sum = 0;
    for (char c : payload) sum ^= static_cast<unsigned char>(c);
    static const char* hex = "0123456789ABCDEF";
    return std::string{hex[sum >> 4], hex[sum & 0xF]};
}

/// Converts an NMEA "ddmm.mmmm" / "dddmm.mmmm" field plus hemisphere
/// letter into signed decimal degrees.
inline double ddmm_to_degrees(std::string_view field, char hemi) {
    if (hemi != 'N' && hemi != 'S' && hemi != 'E' && hemi != 'W')
        throw Error(errc::malformed_coordinate, std::string("bad hemisphere '") + hemi + "'");

    std::size_t dot = field.find('.');
    std::string_view int_part = (dot == std::string_view::npos) ? field : field.substr(0, dot);
    std::string_view frac_part = (dot == std::string_view::npos) ? "" : field.substr(dot + 1);
    if (int_part.size() < 3)
        throw Error(errc::malformed_coordinate,
                    "coordinate '" + std::string(field) + "' needs >= 3 integer digits");
    for (char c : int_part)
        if (c < '0' || c > '9')
            throw Error(errc::malformed_coordinate, "non-numeric coordinate");
    for (char c : frac_part)
        if (c < '0' || c > '9')
            throw Error(errc::malformed_coordinate, "non-numeric coordinate");

    double degrees = 0.0;
    for (char c : int_part.substr(0, int_part.size() - 2)) degrees = degrees * 10 + (c - '0');
    double minutes = 10.0 * (int_part[int_part.size() - 2] - '0') +
                     (int_part[int_part.size() - 1] - '0');
    double scale = 0.1;
    for (char c : frac_part) {
        minutes += (c - '0') * scale;
        scale *= 0.1;
    }
    if (minutes >= 60.0)
        throw Error(errc::minutes_out_of_range, "minutes must be < 60");

    double value = degrees + minutes / 60.0;
    return (hemi == 'S' || hemi == 'W') ? -value : value;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view payload) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = payload.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(payload.substr(start));
            break;
        }
        fields.push_back(payload.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline bool hex_equal(std::string_view a, std::string_view b) {
    auto up = [](char c) { return (c >= 'a' && c <= 'f') ? char(c - 'a' + 'A') : c; };
    return a.size() == 2 && b.size() == 2 && up(a[0]) == up(b[0]) && up(a[1]) == up(b[1]);
}

} // namespace detail

/// Parses a GGA or RMC sentence ('$' + payload + '*' + checksum, optional
/// trailing CR/LF) into a GeoFix.
inline GeoFix parse_nmea(std::string_view sentence) {
    while (!sentence.empty() && (sentence.back() == '\r' || sentence.back() == '\n'))
        sentence.remove_suffix(1);
    if (sentence.empty() || sentence.front() != '$')
        throw Error(errc::malformed_sentence, "sentence must start with '$'");
    std::size_t star = sentence.rfind('*');
    if (star == std::string_view::npos || sentence.size() - star != 3)
        throw Error(errc::malformed_sentence, "sentence must end with '*' + 2 hex digits");

    std::string_view payload = sentence.substr(1, star - 1);
    if (!detail::hex_equal(nmea_checksum(payload), sentence.substr(star + 1)))
        throw Error(errc::bad_checksum, "checksum mismatch");

    auto fields = detail::split_fields(payload);
    std::string_view type = fields[0];
    bool is_gga = type.size() >= 3 && type.substr(type.size() - 3) == "GGA";
    bool is_rmc = type.size() >= 3 && type.substr(type.size() - 3) == "RMC";
    if (!is_gga && !is_rmc)
        throw Error(errc::unsupported_sentence, "unsupported sentence '" + std::string(type) + "'");

    // GGA: time, lat, N/S, lon, E/W, quality at fields 1..6
    // RMC: time, status(A/V), lat, N/S, lon, E/W at fields 1..6
    if (fields.size() < 7)
        throw Error(errc::malformed_sentence, "too few fields");

    std::size_t lat_idx = is_gga ? 2 : 3;
    std::string_view lat_f = fields[lat_idx];
    std::string_view lat_h = fields[lat_idx + 1];
    std::string_view lon_f = fields[lat_idx + 2];
    std::string_view lon_h = fields[lat_idx + 3];
    if (lat_f.empty() || lon_f.empty())
        throw Error(errc::empty_fix_fields, "blank latitude/longitude fields");
    if (lat_h.size() != 1 || lon_h.size() != 1)
        throw Error(errc::malformed_coordinate, "bad hemisphere field");

    GeoFix fix;
    fix.lat = ddmm_to_degrees(lat_f, lat_h[0]);
    fix.lon = ddmm_to_degrees(lon_f, lon_h[0]);
    if (fix.lat < -90.0 || fix.lat > 90.0 || fix.lon < -180.0 || fix.lon > 180.0)
        throw Error(errc::malformed_coordinate, "coordinate out of range");
    fix.time_tag = std::string(fields[1]);

    if (is_gga) {
        std::string_view q = fields[6];
        int quality = 0;
        for (char c : q) {
            if (c < '0' || c > '9')
                throw Error(errc::malformed_sentence, "bad quality field");
            quality = quality * 10 + (c - '0');
        }
        fix.quality = quality;
    } else {
        fix.quality = (fields[2] == "A") ? 1 : 0;
    }
    return fix;
}

/// Great-circle distance in meters on a spherical Earth (R = 6371 km).
inline double haversine_m(const GeoFix& a, const GeoFix& b) {
    constexpr double rad = std::numbers::pi / 180.0;
    double phi1 = a.lat * rad;
    double phi2 = b.lat * rad;
    double dphi = (b.lat - a.lat) * rad;
    double dlambda = (b.lon - a.lon) * rad;
    double s1 = std::sin(dphi / 2.0);
    double s2 = std::sin(dlambda / 2.0);
    double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    if (h > 1.0) h = 1.0;
    if (h < 0.0) h = 0.0;
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

/// Watches for displacement from an anchor position while the vehicle
/// should be stationary. The anchor is pinned at the first valid fix and
/// never moved by alerts, so repeated alerts reference the original spot.
struct MovementMonitor {
    std::optional<GeoFix> anchor;
    double threshold_m = 5.0;
    std::int64_t cooldown_ms = 60'000;
    std::optional<std::int64_t> last_alert_time;

    bool operator==(const MovementMonitor&) const = default;
};

/// Feeds one fix to the monitor. Returns the updated monitor and, when
/// the fix is beyond the threshold and outside the cooldown window, the
/// displacement in meters. Quality-0 fixes are ignored.
inline std::pair<MovementMonitor, std::optional<double>>
monitor_update(MovementMonitor m, const GeoFix& fix, std::int64_t now_ms) {
    if (fix.quality == 0) return {std::move(m), std::nullopt};
    if (!m.anchor) {
        m.anchor = fix;
        return {std::move(m), std::nullopt};
    }
    double displacement = haversine_m(*m.anchor, fix);
    bool beyond = displacement > m.threshold_m;
    bool cooled = !m.last_alert_time || now_ms - *m.last_alert_time >= m.cooldown_ms;
    if (beyond && cooled) {
        m.last_alert_time = now_ms;
        return {std::move(m), displacement};
    }
    return {std::move(m), std::nullopt};
}

} // namespace moto::geo

#endif // MOTO_GEO_HPP
