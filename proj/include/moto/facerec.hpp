#ifndef MOTO_FACEREC_HPP
#define MOTO_FACEREC_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moto/error.hpp"
#include "moto/imaging.hpp"

namespace moto::facerec {

constexpr int kFaceSize = 128;      // normalized face crop edge
constexpr int kGridCells = 8;       // histogram grid is kGridCells x kGridCells
constexpr int kCellSize = kFaceSize / kGridCells;
constexpr int kHistogramBins = 256; // one bin per LBP code

/// Axis-aligned face region, top-left origin.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const Rect&) const = default;
};

/// Per-pixel 8-bit LBP codes; same dimensions as the source image.
struct LbpImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> codes;

    std::uint8_t at(int x, int y) const {
        return codes[static_cast<std::size_t>(y) * width + x];
    }

    bool operator==(const LbpImage&) const = default;
};

/// Normalized 256-bin LBP code histogram.
using Histogram = std::vector<double>;

/// One enrolled identity: an 8x8 grid of per-cell histograms, row-major.
struct FaceTemplate {
    std::string label;
    std::vector<Histogram> grid; // kGridCells * kGridCells entries
};

/// The enrolled face database. Labels are unique; order is enrollment order.
struct FaceDb {
    std::vector<FaceTemplate> templates;
};

/// Outcome of matching a probe image against the database.
struct MatchResult {
    bool matched = false;
    std::string label;               // set when matched
    std::optional<double> distance;  // match distance, or best distance seen
};

/// Face region selection. The default picks the whole frame; a real
/// detector can be plugged in behind this interface.
class FaceDetector {
public:
    virtual ~FaceDetector() = default;
    virtual Rect detect(const imaging::GrayImage& img) const = 0;
};

class WholeFrameDetector final : public FaceDetector {
public:
    Rect detect(const imaging::GrayImage& img) const override {
        return Rect{0, 0, img.width, img.height};
    }
};

inline const FaceDetector& default_detector() {
    static const WholeFrameDetector detector;
    return detector;
}

/// Default face localization: the whole frame.
inline Rect detect_face(const imaging::GrayImage& img) {
    return default_detector().detect(img);
}

/// 8-neighbor LBP with clamp-to-edge borders. Bits run clockwise from the
/// top-left neighbor, top-left as the most significant: a neighbor >= the
/// center pixel sets its bit.
inline LbpImage lbp_map(const imaging::GrayImage& img) {
    // (dy, dx, bit), clockwise from top-left
    static constexpr int kNeighbors[8][3] = {
        {-1, -1, 7}, {-1, 0, 6}, {-1, 1, 5}, {0, 1, 4},
        {1, 1, 3},   {1, 0, 2},  {1, -1, 1}, {0, -1, 0},
    };
    LbpImage out{img.width, img.height, {}};
    out.codes.resize(static_cast<std::size_t>(img.width) * img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            std::uint8_t center = img.at(x, y);
            unsigned code = 0;
            for (const auto& n : kNeighbors) {
                int ny = std::clamp(y + n[0], 0, img.height - 1);
                int nx = std::clamp(x + n[1], 0, img.width - 1);
                if (img.at(nx, ny) >= center) code |= 1u << n[2];
            }
            out.codes[static_cast<std::size_t>(y) * img.width + x] =
                static_cast<std::uint8_t>(code);
        }
    }
    return out;
}

namespace detail {

inline imaging::GrayImage crop(const imaging::GrayImage& img, const Rect& r) {
    imaging::GrayImage out{r.w, r.h, {}};
    out.data.reserve(static_cast<std::size_t>(r.w) * r.h);
    for (int y = 0; y < r.h; ++y)
        for (int x = 0; x < r.w; ++x)
            out.data.push_back(img.at(r.x + x, r.y + y));
    return out;
}

} // namespace detail

/// Builds an identity template: crop to the face rect, normalize to
/// 128x128, compute the LBP map, and histogram each 16x16 grid cell
/// (256 bins, normalized to sum 1).
inline FaceTemplate extract_template(const imaging::GrayImage& img, const Rect& face,
                                     const std::string& label) {
    if (label.empty()) throw Error(errc::empty_label, "template label must be non-empty");

    imaging::GrayImage normalized =
        imaging::resize_nearest(detail::crop(img, face), kFaceSize, kFaceSize);
    LbpImage lbp = lbp_map(normalized);

    FaceTemplate tpl;
    tpl.label = label;
    tpl.grid.reserve(kGridCells * kGridCells);
    for (int gy = 0; gy < kGridCells; ++gy) {
        for (int gx = 0; gx < kGridCells; ++gx) {
            Histogram hist(kHistogramBins, 0.0);
            for (int y = gy * kCellSize; y < (gy + 1) * kCellSize; ++y)
                for (int x = gx * kCellSize; x < (gx + 1) * kCellSize; ++x)
                    hist[lbp.at(x, y)] += 1.0;
            for (double& bin : hist) bin /= kCellSize * kCellSize;
            tpl.grid.push_back(std::move(hist));
        }
    }
    return tpl;
}

/// Chi-square histogram distance: sum of (a-b)^2 / (a+b) over bins,
/// skipping bins that are zero in both.
inline double chi_square(const Histogram& a, const Histogram& b) {
    if (a.size() != b.size())
        throw Error(errc::length_mismatch, "histogram lengths differ");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double sum = a[i] + b[i];
        if (sum == 0.0) continue;
        double diff = a[i] - b[i];
        total += diff * diff / sum;
    }
    return total;
}

/// Sum of per-cell chi-square distances over the 8x8 grid.
inline double template_distance(const FaceTemplate& a, const FaceTemplate& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.grid.size() && i < b.grid.size(); ++i)
        total += chi_square(a.grid[i], b.grid[i]);
    return total;
}

/// Adds a new identity; the database value is returned, the input left as-is.
inline FaceDb enroll(const FaceDb& db, const std::string& label,
                     const imaging::GrayImage& img,
                     const FaceDetector& detector = default_detector()) {
    for (const auto& tpl : db.templates)
        if (tpl.label == label)
            throw Error(errc::duplicate_label, "label '" + label + "' already enrolled");
    FaceDb out = db;
    out.templates.push_back(extract_template(img, detector.detect(img), label));
    return out;
}

/// Nearest-neighbor match of a probe image against the database; a match
/// requires the best distance to be within `threshold`. Ties keep the
/// earliest enrolled template.
inline MatchResult identify(const FaceDb& db, const imaging::GrayImage& img,
                            double threshold,
                            const FaceDetector& detector = default_detector()) {
    if (db.templates.empty()) return MatchResult{};

    FaceTemplate probe = extract_template(img, detector.detect(img), "?");
    double best = -1.0;
    const FaceTemplate* best_tpl = nullptr;
    for (const auto& tpl : db.templates) {
        double d = template_distance(probe, tpl);
        if (best_tpl == nullptr || d < best) {
            best = d;
            best_tpl = &tpl;
        }
    }
    if (best <= threshold) return MatchResult{true, best_tpl->label, best};
    return MatchResult{false, "", best};
}

} // namespace moto::facerec

#endif // MOTO_FACEREC_HPP
