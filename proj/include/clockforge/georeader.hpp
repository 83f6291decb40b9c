#pragma once

// Classical geometry-based reader: Sobel edges, a Hough line transform and
// a cluster-and-measure hand heuristic.

#include "clockforge/image.hpp"
#include "clockforge/time.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace clockforge {

class ImageTooSmall : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NoCircleSupport : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientHands : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EdgeMap {
    ScalarMap magnitude;    // hypot(gx, gy)
    ScalarMap orientation;  // atan2(gy, gx), y pointing down
};

/// 3x3 Sobel on luma; borders replicate. Throws ImageTooSmall below 8x8.
EdgeMap sobel_edges(const Image& img);
EdgeMap sobel_edges(const ScalarMap& gray);

struct LineDetection {
    double rho = 0.0;    // px from the image center
    double theta = 0.0;  // normal direction, radians in [0, pi)
    int votes = 0;
};

struct HoughParams {
    int n_theta = 360;
    int n_rho = 0;  // 0 means one bin per pixel of the image diagonal
    // Pixels vote when their magnitude reaches this fraction of the maximum.
    double edge_fraction = 0.25;
};

/// Lines x cos(theta) + y sin(theta) = rho in center-relative pixel
/// coordinates, after 3x3 non-maximum suppression; sorted by votes.
std::vector<LineDetection> hough_lines(const EdgeMap& edges, int vote_threshold, const HoughParams& params = {});

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

/// Best circle by edge support near the image center. Throws
/// NoCircleSupport when nothing clears `min_score`.
Circle detect_center(const Image& img, double min_score = 0.12);
Circle detect_center(const EdgeMap& edges, double min_score = 0.12);

/// detect_center, falling back to the image center and 0.4 min(w, h).
Circle locate_face(const EdgeMap& edges);

struct HandEstimate {
    double angle = 0.0;   // degrees clockwise from 12, [0, 360)
    double length = 0.0;  // px from the center
    double thickness_score = 0.0;
};

struct HandPair {
    HandEstimate hour;
    HandEstimate minute;
    bool overlapping = false;  // both hands were read from one ray
};

/// Throws InsufficientHands when no hand-like ray passes near the center.
HandPair extract_hands(const std::vector<LineDetection>& lines, const Circle& face, const Image& img);

struct Candidate {
    TimeClass time;
    double score = 0.0;
};

struct ReadResult {
    std::vector<Candidate> candidates;  // at most 3, scores non-increasing
    std::optional<HandPair> hands;
    std::optional<Circle> face;

    [[nodiscard]] bool empty() const noexcept { return candidates.empty(); }
    [[nodiscard]] const Candidate& top() const { return candidates.front(); }
};

/// Ranked candidates from measured hand angles: direct, swapped, then
/// direct with the minute nudged toward the angle residual.
std::vector<Candidate> rank_candidates(const HandPair& hands);

/// Empty result when no hands are found.
ReadResult read_time(const Image& img);

}  // namespace clockforge
