#ifndef MOTO_IMAGING_HPP
#define MOTO_IMAGING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moto/error.hpp"

namespace moto::imaging {

/// 8-bit single-channel raster, row-major. The unit of all vision work.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // width * height samples

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    bool operator==(const GrayImage&) const = default;
};

/// 8-bit RGB raster, row-major interleaved triples.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // 3 * width * height samples

    bool operator==(const RgbImage&) const = default;
};

namespace detail {

// Scans netpbm header/ASCII tokens; '#' starts a comment running to end of line.
class TokenScanner {
public:
    explicit TokenScanner(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::optional<std::string> next() {
        skip_separators();
        if (pos_ >= bytes_.size()) return std::nullopt;
        std::string tok;
        while (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#')
            tok.push_back(static_cast<char>(bytes_[pos_++]));
        return tok;
    }

    // Positions the cursor on the first raw payload byte: exactly one
    // whitespace byte separates the maxval token from binary samples.
    std::size_t payload_offset() {
        if (pos_ < bytes_.size() && is_space(bytes_[pos_])) ++pos_;
        return pos_;
    }

private:
    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
    }

    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

inline long parse_header_int(const std::optional<std::string>& tok) {
    if (!tok || tok->empty()) throw Error(errc::malformed_header, "missing header field");
    long v = 0;
    for (char c : *tok) {
        if (c < '0' || c > '9')
            throw Error(errc::malformed_header, "non-numeric header field '" + *tok + "'");
        v = v * 10 + (c - '0');
        if (v > 1'000'000'000) throw Error(errc::malformed_header, "header field out of range");
    }
    return v;
}

struct PnmHeader {
    bool binary = false;
    int width = 0;
    int height = 0;
};

inline PnmHeader read_header(TokenScanner& scan, std::string_view ascii_magic,
                             std::string_view binary_magic) {
    auto magic = scan.next();
    if (!magic) throw Error(errc::malformed_header, "empty input");
    if (*magic != ascii_magic && *magic != binary_magic)
        throw Error(errc::unknown_magic, "unsupported magic '" + *magic + "'");

    PnmHeader h;
    h.binary = (*magic == binary_magic);
    h.width = static_cast<int>(parse_header_int(scan.next()));
    h.height = static_cast<int>(parse_header_int(scan.next()));
    if (h.width < 1 || h.height < 1)
        throw Error(errc::malformed_header, "image dimensions must be >= 1");
    long maxval = parse_header_int(scan.next());
    if (maxval != 255)
        throw Error(errc::unsupported_maxval,
                    "maxval " + std::to_string(maxval) + " (only 255 supported)");
    return h;
}

inline std::vector<std::uint8_t> read_samples(TokenScanner& scan,
                                              std::span<const std::uint8_t> bytes,
                                              const PnmHeader& h, std::size_t count) {
    std::vector<std::uint8_t> out;
    out.reserve(count);
    if (h.binary) {
        std::size_t start = scan.payload_offset();
        if (bytes.size() - start < count)
            throw Error(errc::truncated,
                        "expected " + std::to_string(count) + " samples, got " +
                            std::to_string(bytes.size() - start));
        out.assign(bytes.begin() + start, bytes.begin() + start + count);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            auto tok = scan.next();
            if (!tok)
                throw Error(errc::truncated,
                            "expected " + std::to_string(count) + " samples, got " +
                                std::to_string(i));
            long v = 0;
            for (char c : *tok) {
                if (c < '0' || c > '9')
                    throw Error(errc::malformed_value, "bad sample '" + *tok + "'");
                v = v * 10 + (c - '0');
                if (v > 255) throw Error(errc::malformed_value, "sample exceeds maxval");
            }
            out.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return out;
}

} // namespace detail

/// Decodes a P2 (ASCII) or P5 (binary) PGM with maxval 255.
inline GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    detail::TokenScanner scan(bytes);
    auto h = detail::read_header(scan, "P2", "P5");
    std::size_t count = static_cast<std::size_t>(h.width) * h.height;
    return GrayImage{h.width, h.height, detail::read_samples(scan, bytes, h, count)};
}

inline GrayImage load_pgm(std::string_view text) {
    return load_pgm(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// Encodes as binary P5; load_pgm(save_pgm(img)) == img.
inline std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
    std::string header = "P5\n" + std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.data.begin(), img.data.end());
    return out;
}

/// Decodes a P3 (ASCII) or P6 (binary) PPM with maxval 255.
inline RgbImage load_ppm(std::span<const std::uint8_t> bytes) {
    detail::TokenScanner scan(bytes);
    auto h = detail::read_header(scan, "P3", "P6");
    std::size_t count = 3u * static_cast<std::size_t>(h.width) * h.height;
    return RgbImage{h.width, h.height, detail::read_samples(scan, bytes, h, count)};
}

inline RgbImage load_ppm(std::string_view text) {
    return load_ppm(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// BT.601 luma, rounded half-up: gray = round(0.299 R + 0.587 G + 0.114 B).
inline GrayImage rgb_to_gray(const RgbImage& img) {
    GrayImage out{img.width, img.height, {}};
    out.data.reserve(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i + 3 <= img.data.size(); i += 3) {
        double luma = 0.299 * img.data[i] + 0.587 * img.data[i + 1] + 0.114 * img.data[i + 2];
        int v = static_cast<int>(luma + 0.5);
        if (v < 0) v = 0;
        if (v > 255) v = 255;
        out.data.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

/// Nearest-neighbor scale; source index = floor(dst_index * src_dim / dst_dim).
inline GrayImage resize_nearest(const GrayImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1)
        throw Error(errc::zero_dimension, "target dimensions must be >= 1");
    GrayImage out{out_w, out_h, {}};
    out.data.resize(static_cast<std::size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; ++y) {
        int sy = static_cast<int>(static_cast<std::int64_t>(y) * img.height / out_h);
        for (int x = 0; x < out_w; ++x) {
            int sx = static_cast<int>(static_cast<std::int64_t>(x) * img.width / out_w);
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

} // namespace moto::imaging

#endif // MOTO_IMAGING_HPP
