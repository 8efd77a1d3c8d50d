#ifndef MOTO_ERROR_HPP
#define MOTO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace moto {

/// Error categories raised across the library. Each decoder/parser throws
/// Error with the code that names the violated contract.
enum class errc {
    // imaging
    unknown_magic,
    unsupported_maxval,
    truncated,
    malformed_header,
    malformed_value,
    zero_dimension,
    // facerec
    empty_label,
    duplicate_label,
    length_mismatch,
    // geo
    malformed_coordinate,
    minutes_out_of_range,
    bad_checksum,
    unsupported_sentence,
    empty_fix_fields,
    malformed_sentence,
    // storage
    bad_header,
    dimension_mismatch,
    malformed_number,
    missing_required_key,
    unknown_key,
    invalid_config,
    // scenario files
    malformed_line,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Error(errc code, const std::string& message, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          code_(code), line_(line) {}

    errc code() const noexcept { return code_; }

    /// 1-based input line for file-level parse errors, -1 otherwise.
    int line() const noexcept { return line_; }

private:
    errc code_;
    int line_ = -1;
};

} // namespace moto

#endif // MOTO_ERROR_HPP
