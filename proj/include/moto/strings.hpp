#ifndef MOTO_STRINGS_HPP
#define MOTO_STRINGS_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace moto {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

/// Splits on '\n', dropping a trailing '\r' from each line. The final
/// fragment is kept only when non-empty, so "a\nb\n" gives {"a", "b"}.
inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

/// Fixed-point rendering with decimal round-half-up at `places`.
/// Works on the shortest decimal form of the value so that e.g. 5.05
/// rounds to "5.1" the way the printed number reads, not the way its
/// binary approximation falls.
inline std::string format_fixed(double value, int places) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(value),
                             std::chars_format::fixed);
    std::string digits(buf, res.ptr);

    std::string int_part = digits;
    std::string frac;
    if (auto dot = digits.find('.'); dot != std::string::npos) {
        int_part = digits.substr(0, dot);
        frac = digits.substr(dot + 1);
    }

    bool round_up = false;
    if (static_cast<int>(frac.size()) > places) {
        round_up = frac[static_cast<std::size_t>(places)] >= '5';
        frac.resize(static_cast<std::size_t>(places));
    } else {
        frac.append(static_cast<std::size_t>(places) - frac.size(), '0');
    }
    if (round_up) {
        std::string all = int_part + frac;
        int i = static_cast<int>(all.size()) - 1;
        for (; i >= 0; --i) {
            if (all[static_cast<std::size_t>(i)] != '9') {
                ++all[static_cast<std::size_t>(i)];
                break;
            }
            all[static_cast<std::size_t>(i)] = '0';
        }
        if (i < 0) all.insert(all.begin(), '1');
        std::size_t frac_len = frac.size();
        int_part = all.substr(0, all.size() - frac_len);
        frac = all.substr(all.size() - frac_len);
    }

    std::string out;
    if (value < 0) out += '-';
    out += int_part;
    if (places > 0) {
        out += '.';
        out += frac;
    }
    return out;
}

} // namespace moto

#endif // MOTO_STRINGS_HPP
