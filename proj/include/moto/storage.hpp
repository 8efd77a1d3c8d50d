#ifndef MOTO_STORAGE_HPP
#define MOTO_STORAGE_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moto/controller.hpp"
#include "moto/error.hpp"
#include "moto/facerec.hpp"
#include "moto/strings.hpp"

namespace moto::storage {

namespace detail {

inline double parse_number(std::string_view tok, int line_no, errc code = errc::malformed_number) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw Error(code, "bad number '" + std::string(tok) + "'", line_no);
    return v;
}

inline long parse_int(std::string_view tok, int line_no, errc code = errc::malformed_number) {
    long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw Error(code, "bad integer '" + std::string(tok) + "'", line_no);
    return v;
}

} // namespace detail

/// Serializes the face database:
///   FACEDB v1
///   TEMPLATE <label> 8 8 256
///   <64 lines of 256 bin values, 9 significant digits>
inline std::vector<std::uint8_t> save_facedb(const facerec::FaceDb& db) {
    std::string out = "FACEDB v1\n";
    char buf[32];
    for (const auto& tpl : db.templates) {
        out += "TEMPLATE " + tpl.label + " " + std::to_string(facerec::kGridCells) + " " +
               std::to_string(facerec::kGridCells) + " " +
               std::to_string(facerec::kHistogramBins) + "\n";
        for (const auto& hist : tpl.grid) {
            for (std::size_t i = 0; i < hist.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.9g", hist[i]);
                if (i) out += ' ';
                out += buf;
            }
            out += '\n';
        }
    }
    return std::vector<std::uint8_t>(out.begin(), out.end());
}

inline facerec::FaceDb load_facedb(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "FACEDB v1")
        throw Error(errc::bad_header, "expected 'FACEDB v1' header");

    facerec::FaceDb db;
    std::size_t i = 1;
    while (i < lines.size()) {
        if (trim(lines[i]).empty()) { ++i; continue; }
        int line_no = static_cast<int>(i) + 1;
        auto tokens = split_ws(lines[i]);
        if (tokens.size() != 5 || tokens[0] != "TEMPLATE")
            throw Error(errc::malformed_number, "expected TEMPLATE line", line_no);
        std::string label(tokens[1]);
        long gw = detail::parse_int(tokens[2], line_no);
        long gh = detail::parse_int(tokens[3], line_no);
        long bins = detail::parse_int(tokens[4], line_no);
        if (gw != facerec::kGridCells || gh != facerec::kGridCells ||
            bins != facerec::kHistogramBins)
            throw Error(errc::dimension_mismatch, "template dimensions must be 8 8 256",
                        line_no);
        for (const auto& existing : db.templates)
            if (existing.label == label)
                throw Error(errc::duplicate_label, "duplicate label '" + label + "'", line_no);

        facerec::FaceTemplate tpl;
        tpl.label = std::move(label);
        ++i;
        for (int cell = 0; cell < facerec::kGridCells * facerec::kGridCells; ++cell, ++i) {
            if (i >= lines.size())
                throw Error(errc::malformed_number, "unexpected end of template data",
                            static_cast<int>(i));
            auto values = split_ws(lines[i]);
            if (values.size() != static_cast<std::size_t>(facerec::kHistogramBins))
                throw Error(errc::dimension_mismatch,
                            "expected 256 bins, got " + std::to_string(values.size()),
                            static_cast<int>(i) + 1);
            facerec::Histogram hist;
            hist.reserve(values.size());
            for (auto tok : values) {
                double v = detail::parse_number(tok, static_cast<int>(i) + 1);
                if (v < 0.0)
                    throw Error(errc::malformed_number, "negative bin value",
                                static_cast<int>(i) + 1);
                hist.push_back(v);
            }
            tpl.grid.push_back(std::move(hist));
        }
        db.templates.push_back(std::move(tpl));
    }
    return db;
}

inline facerec::FaceDb load_facedb(std::span<const std::uint8_t> bytes) {
    return load_facedb(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                        bytes.size()));
}

/// Parses key=value controller configuration. '#' comments and blank lines
/// are skipped; unknown keys are rejected; unset optional keys keep their
/// defaults.
inline controller::ControllerConfig load_config(std::string_view text) {
    controller::ControllerConfig cfg;
    bool have_owner = false;
    bool have_passcode = false;

    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        int line_no = static_cast<int>(i) + 1;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(errc::malformed_value, "expected key=value", line_no);
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));

        if (key == "owner_number") {
            if (value.empty())
                throw Error(errc::malformed_value, "owner_number must be non-empty", line_no);
            cfg.owner_number = value;
            have_owner = true;
        } else if (key == "passcode") {
            if (value.empty())
                throw Error(errc::malformed_value, "passcode must be non-empty", line_no);
            for (char c : value)
                if (c < '0' || c > '9')
                    throw Error(errc::malformed_value, "passcode must be digits only", line_no);
            cfg.passcode = value;
            have_passcode = true;
        } else if (key == "ignite_kw") {
            if (value.empty())
                throw Error(errc::malformed_value, "ignite_kw must be non-empty", line_no);
            cfg.ignite_kw = value;
        } else if (key == "locate_kw") {
            if (value.empty())
                throw Error(errc::malformed_value, "locate_kw must be non-empty", line_no);
            cfg.locate_kw = value;
        } else if (key == "face_threshold") {
            cfg.face_threshold = detail::parse_number(value, line_no, errc::malformed_value);
            if (cfg.face_threshold <= 0.0)
                throw Error(errc::malformed_value, "face_threshold must be > 0", line_no);
        } else if (key == "move_threshold_m") {
            cfg.move_threshold_m = detail::parse_number(value, line_no, errc::malformed_value);
            if (cfg.move_threshold_m <= 0.0)
                throw Error(errc::malformed_value, "move_threshold_m must be > 0", line_no);
        } else if (key == "alert_cooldown_ms") {
            cfg.alert_cooldown_ms = detail::parse_int(value, line_no, errc::malformed_value);
            if (cfg.alert_cooldown_ms < 0)
                throw Error(errc::malformed_value, "alert_cooldown_ms must be >= 0", line_no);
        } else if (key == "max_keypad_attempts") {
            cfg.max_keypad_attempts =
                static_cast<int>(detail::parse_int(value, line_no, errc::malformed_value));
            if (cfg.max_keypad_attempts < 1)
                throw Error(errc::malformed_value, "max_keypad_attempts must be >= 1", line_no);
        } else {
            throw Error(errc::unknown_key, "unknown key '" + key + "'", line_no);
        }
    }
    if (!have_owner) throw Error(errc::missing_required_key, "missing owner_number");
    if (!have_passcode) throw Error(errc::missing_required_key, "missing passcode");
    return cfg;
}

inline controller::ControllerConfig load_config(std::span<const std::uint8_t> bytes) {
    return load_config(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                        bytes.size()));
}

} // namespace moto::storage

#endif // MOTO_STORAGE_HPP
