#ifndef MOTO_CONTROLLER_HPP
#define MOTO_CONTROLLER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "moto/error.hpp"
#include "moto/facerec.hpp"
#include "moto/geo.hpp"
#include "moto/imaging.hpp"
#include "moto/telecom.hpp"

namespace moto::controller {

constexpr std::size_t kKeypadBufferMax = 16;

struct ControllerConfig {
    std::string owner_number;
    std::string passcode;
    std::string ignite_kw = "IGNITE";
    std::string locate_kw = "LOCATE";
    double face_threshold = 1.0;
    double move_threshold_m = 5.0;
    std::int64_t alert_cooldown_ms = 60'000;
    int max_keypad_attempts = 3;
};

inline void validate(const ControllerConfig& cfg) {
    if (cfg.owner_number.empty())
        throw Error(errc::invalid_config, "owner_number must be non-empty");
    if (cfg.passcode.empty())
        throw Error(errc::invalid_config, "passcode must be non-empty");
    for (char c : cfg.passcode)
        if (c < '0' || c > '9')
            throw Error(errc::invalid_config, "passcode must be digits only");
    if (cfg.ignite_kw.empty() || cfg.locate_kw.empty())
        throw Error(errc::invalid_config, "keywords must be non-empty");
    if (cfg.face_threshold <= 0.0)
        throw Error(errc::invalid_config, "face_threshold must be > 0");
    if (cfg.move_threshold_m <= 0.0)
        throw Error(errc::invalid_config, "move_threshold_m must be > 0");
    if (cfg.alert_cooldown_ms < 0)
        throw Error(errc::invalid_config, "alert_cooldown_ms must be >= 0");
    if (cfg.max_keypad_attempts < 1)
        throw Error(errc::invalid_config, "max_keypad_attempts must be >= 1");
}

// --- input events ---------------------------------------------------------

struct FaceCaptured { imaging::GrayImage image; };
struct KeypadDigit { char digit = '0'; };
struct KeypadSubmit {};
struct SmsArrived { telecom::SmsMessage message; };
struct NmeaSentence { std::string sentence; };
struct EngineOff {};
struct Tick {};

using Event = std::variant<FaceCaptured, KeypadDigit, KeypadSubmit, SmsArrived,
                           NmeaSentence, EngineOff, Tick>;

// --- emitted side-effect requests ------------------------------------------

struct IgniteEngine {};
struct StopEngine {};
struct SendSms {
    std::string to;
    std::string body;
};
struct CaptureAndUpload { imaging::GrayImage image; };
struct ReadyIndicator {};
struct LogError { std::string message; };

using Action = std::variant<IgniteEngine, StopEngine, SendSms, CaptureAndUpload,
                            ReadyIndicator, LogError>;

// --- state ------------------------------------------------------------------

enum class Mode { Armed, Running };

struct ControllerState {
    Mode mode = Mode::Armed;
    std::string keypad_buffer;
    int keypad_attempts = 0;
    geo::MovementMonitor monitor;
    telecom::Inbox inbox;
    std::optional<geo::GeoFix> last_fix;

    bool operator==(const ControllerState&) const = default;
};

/// Resolves a captured frame into a hosted-image URL. The harness supplies
/// a deterministic stub; the resolution happens synchronously inside step
/// so traces stay single-threaded and reproducible.
using Uploader = std::function<std::string(const imaging::GrayImage&)>;

/// Initial state plus the one-time ready indicator.
inline std::pair<ControllerState, std::vector<Action>> init(const ControllerConfig& cfg) {
    validate(cfg);
    ControllerState state;
    state.monitor.threshold_m = cfg.move_threshold_m;
    state.monitor.cooldown_ms = cfg.alert_cooldown_ms;
    return {std::move(state), {ReadyIndicator{}}};
}

namespace detail {

// Entering Running disarms movement monitoring.
inline void ignite(ControllerState& state, std::vector<Action>& actions) {
    state.mode = Mode::Running;
    state.monitor.anchor.reset();
    state.monitor.last_alert_time.reset();
    actions.push_back(IgniteEngine{});
}

} // namespace detail

/// Advances the state machine by one event. Pure: the returned state and
/// actions depend only on the arguments. Failures never throw; they surface
/// as LogError actions.
inline std::pair<ControllerState, std::vector<Action>>
step(ControllerState state, const Event& event, const ControllerConfig& cfg,
     const facerec::FaceDb& facedb, std::int64_t now_ms, const Uploader& uploader) {
    std::vector<Action> actions;
    bool armed = state.mode == Mode::Armed;

    if (const auto* face = std::get_if<FaceCaptured>(&event)) {
        if (armed) {
            facerec::MatchResult match =
                facerec::identify(facedb, face->image, cfg.face_threshold);
            if (match.matched) {
                detail::ignite(state, actions);
            } else {
                std::string url = uploader ? uploader(face->image) : "";
                actions.push_back(CaptureAndUpload{face->image});
                actions.push_back(
                    SendSms{cfg.owner_number, telecom::format_intruder_alert(url)});
            }
        }
    } else if (const auto* key = std::get_if<KeypadDigit>(&event)) {
        if (armed && state.keypad_buffer.size() < kKeypadBufferMax)
            state.keypad_buffer.push_back(key->digit);
    } else if (std::get_if<KeypadSubmit>(&event)) {
        if (armed) {
            if (state.keypad_buffer == cfg.passcode) {
                state.keypad_buffer.clear();
                state.keypad_attempts = 0;
                detail::ignite(state, actions);
            } else {
                state.keypad_buffer.clear();
                if (++state.keypad_attempts >= cfg.max_keypad_attempts) {
                    actions.push_back(SendSms{cfg.owner_number, "INTRUDER attempt - keypad"});
                    state.keypad_attempts = 0;
                }
            }
        }
    } else if (const auto* sms = std::get_if<SmsArrived>(&event)) {
        bool accepted = false;
        std::tie(state.inbox, accepted) = telecom::inbox_push(std::move(state.inbox),
                                                              sms->message);
        if (!accepted)
            actions.push_back(LogError{"inbox full, message from " + sms->message.sender +
                                       " dropped"});
        // Received messages are always consumed in full so the SIM store
        // never fills up across steps.
        std::vector<telecom::SmsMessage> pending;
        std::tie(state.inbox, pending) = telecom::inbox_drain(std::move(state.inbox));
        for (const auto& msg : pending) {
            switch (telecom::parse_command(msg, cfg.owner_number, cfg.ignite_kw,
                                           cfg.locate_kw)) {
            case telecom::Command::Ignite:
                if (state.mode == Mode::Armed) detail::ignite(state, actions);
                break;
            case telecom::Command::Locate:
                if (state.last_fix)
                    actions.push_back(SendSms{
                        cfg.owner_number, telecom::format_location_reply(*state.last_fix)});
                else
                    actions.push_back(LogError{"no fix"});
                break;
            case telecom::Command::Unknown:
                break;
            }
        }
    } else if (const auto* nmea = std::get_if<NmeaSentence>(&event)) {
        try {
            geo::GeoFix fix = geo::parse_nmea(nmea->sentence);
            state.last_fix = fix;
            if (armed) {
                std::optional<double> displacement;
                std::tie(state.monitor, displacement) =
                    geo::monitor_update(std::move(state.monitor), fix, now_ms);
                if (displacement)
                    actions.push_back(SendSms{
                        cfg.owner_number, telecom::format_theft_alert(fix, *displacement)});
            }
        } catch (const Error& e) {
            actions.push_back(LogError{e.what()});
        }
    } else if (std::get_if<EngineOff>(&event)) {
        if (state.mode == Mode::Running) {
            state.mode = Mode::Armed;
            state.monitor = geo::MovementMonitor{state.last_fix, cfg.move_threshold_m,
                                                 cfg.alert_cooldown_ms, std::nullopt};
            actions.push_back(StopEngine{});
        }
    } else {
        // Tick: simulated time passes; cooldown bookkeeping happens against
        // the timestamps alerts were issued at, so nothing to do here.
    }

    return {std::move(state), std::move(actions)};
}

} // namespace moto::controller

#endif // MOTO_CONTROLLER_HPP
