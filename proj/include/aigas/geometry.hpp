#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "aigas/common.hpp"

namespace aigas {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double vdist(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Delaunay triangulation of a deduplicated 2-D point set. Triangles are
// index triples into `points`, counter-clockwise.
struct Triangulation {
    std::vector<Vec2> points;
    std::vector<std::array<int, 3>> triangles;
};

// Subset of a Delaunay triangulation whose triangles have circumradius
// <= alpha. Triangles are stored by coordinates so shapes stay valid after
// the generating triangulation is gone.
struct AlphaShape {
    std::vector<std::array<Vec2, 3>> triangles;
    double alpha = 0.0;
};

inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * std::abs(cross(a, b, c));
}

// Circumradius from side lengths, R = abc / (4A). Degenerate -> +inf.
inline double circumradius(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double la = vdist(b, c);
    const double lb = vdist(a, c);
    const double lc = vdist(a, b);
    const double area = triangle_area(a, b, c);
    if (area <= 0.0) return std::numeric_limits<double>::infinity();
    return la * lb * lc / (4.0 * area);
}

namespace detail {

// In-circumcircle predicate for a CCW triangle (a, b, c). Strictly-inside
// only: points on the circle (cocircular inputs) are treated as outside so
// either diagonal of a cocircular quad yields a valid triangulation.
inline bool in_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
    const double ax = a.x - p.x, ay = a.y - p.y;
    const double bx = b.x - p.x, by = b.y - p.y;
    const double cx = c.x - p.x, cy = c.y - p.y;
    const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                       (bx * bx + by * by) * (ax * cy - cx * ay) +
                       (cx * cx + cy * cy) * (ax * by - bx * ay);
    return det > 1e-12;
}

}  // namespace detail

// Bowyer-Watson on coordinates pre-scaled to the bounding box, so the 1e-9
// tolerances behave uniformly regardless of the data's units. Duplicates
// are removed at tolerance 1e-9 (scaled); collinear sets are rejected.
inline Triangulation delaunay_triangulate(const std::vector<Vec2>& input) {
    if (input.size() < 3) {
        throw DegenerateInput("delaunay: need at least 3 points");
    }

    double min_x = input[0].x, max_x = input[0].x;
    double min_y = input[0].y, max_y = input[0].y;
    for (const Vec2& p : input) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double extent = std::max({max_x - min_x, max_y - min_y, 1e-300});

    std::vector<Vec2> scaled;       // deduplicated, bbox-normalized
    std::vector<int> orig_index;    // scaled index -> input index
    scaled.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        const Vec2 q{(input[i].x - min_x) / extent, (input[i].y - min_y) / extent};
        bool dup = false;
        for (const Vec2& r : scaled) {
            if (std::abs(q.x - r.x) <= 1e-9 && std::abs(q.y - r.y) <= 1e-9) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            scaled.push_back(q);
            orig_index.push_back(static_cast<int>(i));
        }
    }
    if (scaled.size() < 3) {
        throw DegenerateInput("delaunay: fewer than 3 distinct points");
    }

    bool collinear = true;
    for (std::size_t i = 2; i < scaled.size() && collinear; ++i) {
        if (std::abs(cross(scaled[0], scaled[1], scaled[i])) > 1e-9) collinear = false;
    }
    if (collinear) {
        throw DegenerateInput("delaunay: all points collinear");
    }

    // Super-triangle far outside the unit box; its circumcircle interactions
    // stay well-conditioned in double precision at this scale.
    const int n = static_cast<int>(scaled.size());
    std::vector<Vec2> pts = scaled;
    pts.push_back({-1e3, -1e3});
    pts.push_back({1e3 + 1.0, -1e3});
    pts.push_back({0.5, 1e3});

    struct Tri {
        int a, b, c;
    };
    auto make_ccw = [&pts](int a, int b, int c) {
        if (cross(pts[a], pts[b], pts[c]) < 0.0) std::swap(b, c);
        return Tri{a, b, c};
    };

    std::vector<Tri> tris{make_ccw(n, n + 1, n + 2)};
    for (int pi = 0; pi < n; ++pi) {
        const Vec2& p = pts[pi];

        std::vector<Tri> keep;
        keep.reserve(tris.size());
        std::map<std::pair<int, int>, int> edge_count;
        for (const Tri& t : tris) {
            if (detail::in_circumcircle(pts[t.a], pts[t.b], pts[t.c], p)) {
                const std::array<std::pair<int, int>, 3> edges = {
                    std::minmax(t.a, t.b), std::minmax(t.b, t.c), std::minmax(t.c, t.a)};
                for (const auto& e : edges) ++edge_count[e];
            } else {
                keep.push_back(t);
            }
        }
        // Edges of the cavity (shared by exactly one removed triangle) are
        // re-joined to the new point.
        for (const auto& [edge, count] : edge_count) {
            if (count == 1) keep.push_back(make_ccw(edge.first, edge.second, pi));
        }
        tris = std::move(keep);
    }

    Triangulation out;
    out.points = input;
    // Keep point indices aligned with the caller's list; map triangles back
    // through the deduplication.
    for (const Tri& t : tris) {
        if (t.a >= n || t.b >= n || t.c >= n) continue;  // touches super-triangle
        out.triangles.push_back({orig_index[t.a], orig_index[t.b], orig_index[t.c]});
    }
    if (out.triangles.empty()) {
        throw DegenerateInput("delaunay: no finite triangles");
    }
    return out;
}

// Keep exactly the triangles with circumradius <= alpha.
inline AlphaShape alpha_complex(const Triangulation& tri, double alpha) {
    if (alpha < 0.0) throw InvalidParams("alpha_complex: alpha must be >= 0");
    AlphaShape shape;
    shape.alpha = alpha;
    const double slack = 1e-12 * std::max(1.0, alpha);
    for (const auto& t : tri.triangles) {
        const Vec2& a = tri.points[t[0]];
        const Vec2& b = tri.points[t[1]];
        const Vec2& c = tri.points[t[2]];
        if (circumradius(a, b, c) <= alpha + slack) {
            shape.triangles.push_back({a, b, c});
        }
    }
    return shape;
}

// Alpha selection rule: 2x the mean length of the (unique) Delaunay edges.
// Scale-adaptive and deterministic for a fixed point set.
inline double select_alpha(const std::vector<Vec2>& points) {
    const Triangulation tri = delaunay_triangulate(points);
    std::set<std::pair<int, int>> edges;
    for (const auto& t : tri.triangles) {
        edges.insert(std::minmax(t[0], t[1]));
        edges.insert(std::minmax(t[1], t[2]));
        edges.insert(std::minmax(t[2], t[0]));
    }
    double total = 0.0;
    for (const auto& [i, j] : edges) total += vdist(tri.points[i], tri.points[j]);
    return 2.0 * total / static_cast<double>(edges.size());
}

inline AlphaShape alpha_shape_of(const std::vector<Vec2>& points) {
    return alpha_complex(delaunay_triangulate(points), select_alpha(points));
}

// Triangles of one shape never overlap, so the area is a plain sum.
inline double shape_area(const AlphaShape& shape) {
    double a = 0.0;
    for (const auto& t : shape.triangles) a += triangle_area(t[0], t[1], t[2]);
    return a;
}

namespace detail {

// Sutherland-Hodgman clip of a convex polygon against the half-plane left
// of (c0, c1).
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& c0,
                                        const Vec2& c1) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& cur = poly[i];
        const Vec2& nxt = poly[(i + 1) % n];
        const double dc = cross(c0, c1, cur);
        const double dn = cross(c0, c1, nxt);
        if (dc >= 0.0) out.push_back(cur);
        if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
            const double t = dc / (dc - dn);
            out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
        }
    }
    return out;
}

inline double polygon_area(const std::vector<Vec2>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * std::abs(s);
}

inline std::array<Vec2, 3> ccw(const std::array<Vec2, 3>& t) {
    if (cross(t[0], t[1], t[2]) < 0.0) return {t[0], t[2], t[1]};
    return t;
}

// Exact area of the intersection of two triangles (convex clipping).
inline double tri_tri_intersection_area(const std::array<Vec2, 3>& ta,
                                        const std::array<Vec2, 3>& tb) {
    const auto a = ccw(ta);
    const auto b = ccw(tb);
    std::vector<Vec2> poly{a[0], a[1], a[2]};
    for (int i = 0; i < 3 && !poly.empty(); ++i) {
        poly = clip_halfplane(poly, b[i], b[(i + 1) % 3]);
    }
    if (poly.size() < 3) return 0.0;
    return polygon_area(poly);
}

}  // namespace detail

// Intersection over union of two alpha shapes. Intersection is summed over
// triangle pairs, valid because each shape's triangles are disjoint.
inline double iou(const AlphaShape& a, const AlphaShape& b) {
    const double area_a = shape_area(a);
    const double area_b = shape_area(b);
    if (area_a <= 0.0 && area_b <= 0.0) return 0.0;
    double inter = 0.0;
    for (const auto& ta : a.triangles) {
        for (const auto& tb : b.triangles) {
            inter += detail::tri_tri_intersection_area(ta, tb);
        }
    }
    const double uni = area_a + area_b - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

inline std::vector<Vec2> to_vec2(const PointList& pts) {
    std::vector<Vec2> out;
    out.reserve(pts.size());
    for (const Point& p : pts) {
        if (p.size() != 2) throw DimensionMismatch("to_vec2: expected 2-D points");
        out.push_back({p[0], p[1]});
    }
    return out;
}

}  // namespace aigas
