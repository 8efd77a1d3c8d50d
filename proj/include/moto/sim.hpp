#ifndef MOTO_SIM_HPP
#define MOTO_SIM_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moto/controller.hpp"
#include "moto/error.hpp"
#include "moto/facerec.hpp"
#include "moto/imaging.hpp"
#include "moto/storage.hpp"
#include "moto/strings.hpp"

namespace moto::sim {

// --- deterministic upload stub ----------------------------------------------

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Stand-in for image hosting: a URL derived from the content hash, so the
/// same picture always "uploads" to the same place.
inline std::string upload_stub(std::span<const std::uint8_t> image_bytes) {
    std::uint64_t h = fnv1a64(image_bytes);
    static const char* hex = "0123456789abcdef";
    std::string digits(16, '0');
    for (int i = 15; i >= 0; --i) {
        digits[static_cast<std::size_t>(i)] = hex[h & 0xF];
        h >>= 4;
    }
    return "https://sim.local/img/" + digits;
}

// --- scenario files -----------------------------------------------------------

struct CameraEvent { std::string image_path; };
struct KeyEvent { std::string key; }; // "0".."9" or "ENTER"
struct SmsEvent {
    std::string sender;
    std::string body;
};
struct NmeaEvent { std::string sentence; };
struct EngineOffEvent {};

/// One line of a scenario file: a timestamp plus the simulated input.
struct ScenarioEvent {
    std::int64_t t = 0;
    std::variant<CameraEvent, KeyEvent, SmsEvent, NmeaEvent, EngineOffEvent> payload;
};

/// Parses the scenario line grammar:
///   <t_ms> CAMERA <pgm-path>
///   <t_ms> KEY <0-9|ENTER>
///   <t_ms> SMS <sender> <body...>
///   <t_ms> NMEA <sentence>
///   <t_ms> ENGINE_OFF
/// '#' comments and blank lines are skipped. Events come back ordered by
/// timestamp; lines sharing a timestamp keep file order.
inline std::vector<ScenarioEvent> parse_scenario(std::string_view text) {
    std::vector<ScenarioEvent> events;
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        int line_no = static_cast<int>(i) + 1;
        std::string_view line = trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;

        std::size_t sp1 = line.find_first_of(" \t");
        if (sp1 == std::string_view::npos)
            throw Error(errc::malformed_line, "expected '<t_ms> <kind> ...'", line_no);
        std::string_view t_tok = line.substr(0, sp1);
        std::int64_t t = 0;
        for (char c : t_tok) {
            if (c < '0' || c > '9')
                throw Error(errc::malformed_line, "bad timestamp '" + std::string(t_tok) + "'",
                            line_no);
            t = t * 10 + (c - '0');
        }

        std::string_view rest = trim(line.substr(sp1));
        std::size_t sp2 = rest.find_first_of(" \t");
        std::string_view kind = (sp2 == std::string_view::npos) ? rest : rest.substr(0, sp2);
        std::string_view payload =
            (sp2 == std::string_view::npos) ? std::string_view{} : trim(rest.substr(sp2));

        if (kind == "CAMERA") {
            if (payload.empty())
                throw Error(errc::malformed_line, "CAMERA needs an image path", line_no);
            events.push_back({t, CameraEvent{std::string(payload)}});
        } else if (kind == "KEY") {
            bool digit = payload.size() == 1 && payload[0] >= '0' && payload[0] <= '9';
            if (!digit && payload != "ENTER")
                throw Error(errc::malformed_line, "KEY payload must be 0-9 or ENTER", line_no);
            events.push_back({t, KeyEvent{std::string(payload)}});
        } else if (kind == "SMS") {
            std::size_t sp3 = payload.find_first_of(" \t");
            std::string_view sender =
                (sp3 == std::string_view::npos) ? payload : payload.substr(0, sp3);
            if (sender.empty())
                throw Error(errc::malformed_line, "SMS needs a sender", line_no);
            std::string_view body =
                (sp3 == std::string_view::npos) ? std::string_view{} : trim(payload.substr(sp3));
            events.push_back({t, SmsEvent{std::string(sender), std::string(body)}});
        } else if (kind == "NMEA") {
            if (payload.empty())
                throw Error(errc::malformed_line, "NMEA needs a sentence", line_no);
            events.push_back({t, NmeaEvent{std::string(payload)}});
        } else if (kind == "ENGINE_OFF") {
            if (!payload.empty())
                throw Error(errc::malformed_line, "ENGINE_OFF takes no payload", line_no);
            events.push_back({t, EngineOffEvent{}});
        } else {
            throw Error(errc::malformed_line, "unknown event kind '" + std::string(kind) + "'",
                        line_no);
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.t < b.t; });
    return events;
}

// --- trace output ---------------------------------------------------------------

enum class TraceTag { Event, SmsOut, Ignite, Stop, Ready, Error };

struct TraceLine {
    std::int64_t t = 0;
    TraceTag tag = TraceTag::Event;
    std::string detail;

    bool operator==(const TraceLine&) const = default;
};

inline std::string_view tag_name(TraceTag tag) {
    switch (tag) {
    case TraceTag::Event: return "EVENT";
    case TraceTag::SmsOut: return "SMS_OUT";
    case TraceTag::Ignite: return "IGNITE";
    case TraceTag::Stop: return "STOP";
    case TraceTag::Ready: return "READY";
    case TraceTag::Error: return "ERROR";
    }
    return "?";
}

inline std::string render_trace(const std::vector<TraceLine>& trace) {
    std::string out;
    for (const auto& line : trace) {
        out += std::to_string(line.t);
        out += ' ';
        out += tag_name(line.tag);
        if (!line.detail.empty()) {
            out += ' ';
            out += line.detail;
        }
        out += '\n';
    }
    return out;
}

inline std::optional<std::vector<std::uint8_t>> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) return std::nullopt;
    return bytes;
}

inline bool write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return out.good();
}

// --- scenario runner ---------------------------------------------------------

namespace detail {

struct EventRenderer {
    std::string operator()(const CameraEvent& e) const { return "CAMERA " + e.image_path; }
    std::string operator()(const KeyEvent& e) const { return "KEY " + e.key; }
    std::string operator()(const SmsEvent& e) const { return "SMS " + e.sender + " " + e.body; }
    std::string operator()(const NmeaEvent& e) const { return "NMEA " + e.sentence; }
    std::string operator()(const EngineOffEvent&) const { return "ENGINE_OFF"; }
};

} // namespace detail

/// Replays a scenario against the controller and renders every input and
/// action as trace lines. Deterministic: identical inputs (including the
/// referenced image files) give byte-identical traces. File and parse
/// problems become ERROR lines; the run continues.
inline std::vector<TraceLine> run_scenario(const std::vector<ScenarioEvent>& scenario,
                                           const controller::ControllerConfig& config,
                                           const facerec::FaceDb& facedb) {
    std::vector<TraceLine> trace;
    controller::Uploader uploader = [](const imaging::GrayImage& img) {
        return upload_stub(imaging::save_pgm(img));
    };

    controller::ControllerState state;
    try {
        std::vector<controller::Action> boot;
        std::tie(state, boot) = controller::init(config);
        for (const auto& action : boot)
            if (std::holds_alternative<controller::ReadyIndicator>(action))
                trace.push_back({0, TraceTag::Ready, ""});
    } catch (const Error& e) {
        trace.push_back({0, TraceTag::Error, e.what()});
        return trace;
    }

    for (const auto& ev : scenario) {
        trace.push_back({ev.t, TraceTag::Event, std::visit(detail::EventRenderer{}, ev.payload)});

        std::optional<controller::Event> input;
        if (const auto* cam = std::get_if<CameraEvent>(&ev.payload)) {
            auto bytes = read_file(cam->image_path);
            if (!bytes) {
                trace.push_back({ev.t, TraceTag::Error, "cannot read " + cam->image_path});
                continue;
            }
            try {
                input = controller::FaceCaptured{imaging::load_pgm(*bytes)};
            } catch (const Error& e) {
                trace.push_back({ev.t, TraceTag::Error,
                                 cam->image_path + ": " + std::string(e.what())});
                continue;
            }
        } else if (const auto* key = std::get_if<KeyEvent>(&ev.payload)) {
            if (key->key == "ENTER")
                input = controller::KeypadSubmit{};
            else
                input = controller::KeypadDigit{key->key[0]};
        } else if (const auto* sms = std::get_if<SmsEvent>(&ev.payload)) {
            input = controller::SmsArrived{telecom::SmsMessage{sms->sender, sms->body, ev.t}};
        } else if (const auto* nmea = std::get_if<NmeaEvent>(&ev.payload)) {
            input = controller::NmeaSentence{nmea->sentence};
        } else {
            input = controller::EngineOff{};
        }

        std::vector<controller::Action> actions;
        std::tie(state, actions) =
            controller::step(std::move(state), *input, config, facedb, ev.t, uploader);

        for (const auto& action : actions) {
            if (std::holds_alternative<controller::IgniteEngine>(action)) {
                trace.push_back({ev.t, TraceTag::Ignite, ""});
            } else if (std::holds_alternative<controller::StopEngine>(action)) {
                trace.push_back({ev.t, TraceTag::Stop, ""});
            } else if (const auto* out = std::get_if<controller::SendSms>(&action)) {
                trace.push_back({ev.t, TraceTag::SmsOut, out->to + " " + out->body});
            } else if (const auto* up = std::get_if<controller::CaptureAndUpload>(&action)) {
                trace.push_back({ev.t, TraceTag::Event,
                                 "UPLOAD " + upload_stub(imaging::save_pgm(up->image))});
            } else if (std::holds_alternative<controller::ReadyIndicator>(action)) {
                trace.push_back({ev.t, TraceTag::Ready, ""});
            } else if (const auto* err = std::get_if<controller::LogError>(&action)) {
                trace.push_back({ev.t, TraceTag::Error, err->message});
            }
        }
    }
    return trace;
}

} // namespace moto::sim

#endif // MOTO_SIM_HPP
