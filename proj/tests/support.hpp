#pragma once

// Shared brute-force oracles for the test suites. These stay independent of
// the library's implementation paths: the hull oracle is gift wrapping, the
// area/IoU oracles are Monte Carlo, and the KNN oracle is a full scan.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "aigas/common.hpp"
#include "aigas/geometry.hpp"

namespace testsupport {

// Gift-wrapping (Jarvis march) convex hull area.
inline double hull_area_oracle(const std::vector<aigas::Vec2>& pts) {
    const std::size_t n = pts.size();
    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (pts[i].x < pts[start].x || (pts[i].x == pts[start].x && pts[i].y < pts[start].y)) {
            start = i;
        }
    }
    std::vector<aigas::Vec2> hull;
    std::size_t cur = start;
    do {
        hull.push_back(pts[cur]);
        std::size_t next = (cur + 1) % n;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = aigas::cross(pts[cur], pts[next], pts[i]);
            if (c < 0.0 ||
                (c == 0.0 && aigas::vdist(pts[cur], pts[i]) > aigas::vdist(pts[cur], pts[next]))) {
                next = i;
            }
        }
        cur = next;
    } while (cur != start && hull.size() <= n);

    double s = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * std::abs(s);
}

inline bool point_in_triangle(const aigas::Vec2& p, const std::array<aigas::Vec2, 3>& t) {
    const double d1 = aigas::cross(t[0], t[1], p);
    const double d2 = aigas::cross(t[1], t[2], p);
    const double d3 = aigas::cross(t[2], t[0], p);
    const bool has_neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
    const bool has_pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
    return !(has_neg && has_pos);
}

inline bool point_in_shape(const aigas::Vec2& p, const aigas::AlphaShape& s) {
    for (const auto& t : s.triangles) {
        if (point_in_triangle(p, t)) return true;
    }
    return false;
}

struct BBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

inline BBox shape_bbox(const aigas::AlphaShape& a, const aigas::AlphaShape& b) {
    BBox box{1e300, 1e300, -1e300, -1e300};
    auto grow = [&box](const aigas::AlphaShape& s) {
        for (const auto& t : s.triangles) {
            for (const auto& v : t) {
                box.min_x = std::min(box.min_x, v.x);
                box.min_y = std::min(box.min_y, v.y);
                box.max_x = std::max(box.max_x, v.x);
                box.max_y = std::max(box.max_y, v.y);
            }
        }
    };
    grow(a);
    grow(b);
    return box;
}

// Monte-Carlo area estimate over the shape's own bounding box.
inline double mc_area_oracle(const aigas::AlphaShape& s, std::size_t samples, uint64_t seed) {
    if (s.triangles.empty()) return 0.0;
    const BBox box = shape_bbox(s, s);
    const double w = box.max_x - box.min_x;
    const double h = box.max_y - box.min_y;
    aigas::Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const aigas::Vec2 p{box.min_x + w * rng.uniform(), box.min_y + h * rng.uniform()};
        if (point_in_shape(p, s)) ++hits;
    }
    return w * h * static_cast<double>(hits) / static_cast<double>(samples);
}

// Monte-Carlo IoU estimate over the joint bounding box.
inline double mc_iou_oracle(const aigas::AlphaShape& a, const aigas::AlphaShape& b,
                            std::size_t samples, uint64_t seed) {
    if (a.triangles.empty() && b.triangles.empty()) return 0.0;
    const BBox box = shape_bbox(a, b);
    const double w = box.max_x - box.min_x;
    const double h = box.max_y - box.min_y;
    aigas::Rng rng(seed);
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const aigas::Vec2 p{box.min_x + w * rng.uniform(), box.min_y + h * rng.uniform()};
        const bool in_a = point_in_shape(p, a);
        const bool in_b = point_in_shape(p, b);
        if (in_a && in_b) ++inter;
        if (in_a || in_b) ++uni;
    }
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Exhaustive KNN scan with the same tie-break contract as the library:
// distance ties by lower index, vote ties by smallest class id.
inline int knn_oracle(const aigas::Point& query, const aigas::PointList& ref,
                      const std::vector<int>& labels, int k) {
    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) d.emplace_back(aigas::sq_dist(query, ref[i]), i);
    std::sort(d.begin(), d.end());
    const std::size_t kk = std::min<std::size_t>(k, d.size());
    std::vector<std::pair<int, int>> votes;  // (count, label)
    for (std::size_t i = 0; i < kk; ++i) {
        const int lab = labels[d[i].second];
        bool found = false;
        for (auto& v : votes) {
            if (v.second == lab) {
                ++v.first;
                found = true;
            }
        }
        if (!found) votes.emplace_back(1, lab);
    }
    int best_label = votes[0].second, best_count = votes[0].first;
    for (const auto& v : votes) {
        if (v.first > best_count || (v.first == best_count && v.second < best_label)) {
            best_count = v.first;
            best_label = v.second;
        }
    }
    return best_label;
}

inline std::vector<aigas::Vec2> random_cloud(std::size_t n, uint64_t seed, double scale = 1.0,
                                             double offset = 0.0) {
    aigas::Rng rng(seed);
    std::vector<aigas::Vec2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({offset + scale * rng.uniform(), offset + scale * rng.uniform()});
    }
    return pts;
}

}  // namespace testsupport
