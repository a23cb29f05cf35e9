#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "aigas/common.hpp"

namespace aigas {

// A labeled centroid summarizing one concept/class region.
struct Prototype {
    Point centroid;
    int label = 0;
};

struct LabeledPointSet {
    PointList points;
    std::vector<int> labels;

    std::size_t size() const { return points.size(); }
};

namespace detail {

inline std::size_t count_distinct(const PointList& instances) {
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i && !seen; ++j) {
            seen = instances[i] == instances[j];
        }
        if (!seen) ++distinct;
    }
    return distinct;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding. Deterministic for a fixed seed;
// empty clusters are re-seeded at the instance farthest from its assigned
// centroid. Optionally records the objective after every iteration.
inline PointList kmeans(const PointList& instances, int k, uint64_t seed,
                        std::vector<double>* objective_trace = nullptr) {
    if (k < 1) throw InvalidParams("kmeans: k must be >= 1");
    const std::size_t n = instances.size();
    if (n < static_cast<std::size_t>(k) ||
        detail::count_distinct(instances) < static_cast<std::size_t>(k)) {
        throw InsufficientData("kmeans: fewer than k distinct instances");
    }

    Rng rng(seed);
    PointList centroids;
    centroids.reserve(k);

    // k-means++: first centroid uniform, the rest D^2-weighted.
    centroids.push_back(instances[rng.below(n)]);
    std::vector<double> d2(n);
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (const Point& c : centroids) best = std::min(best, sq_dist(instances[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.below(n);
        }
        centroids.push_back(instances[pick]);
    }

    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            int arg = 0;
            for (int c = 0; c < k; ++c) {
                const double d = sq_dist(instances[i], centroids[c]);
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            assign[i] = arg;
        }

        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            // re-seed at the instance farthest from its assigned centroid
            double worst = -1.0;
            std::size_t far = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = sq_dist(instances[i], centroids[assign[i]]);
                if (d > worst && counts[assign[i]] > 1) {
                    worst = d;
                    far = i;
                }
            }
            --counts[assign[far]];
            assign[far] = c;
            counts[c] = 1;
        }

        const std::size_t dim = instances.front().size();
        PointList next(k, Point(dim, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dim; ++d) next[assign[i]][d] += instances[i][d];
        }
        double shift = 0.0;
        for (int c = 0; c < k; ++c) {
            for (std::size_t d = 0; d < dim; ++d) next[c][d] /= counts[c];
            shift = std::max(shift, dist(next[c], centroids[c]));
        }
        centroids = std::move(next);

        if (objective_trace) {
            double obj = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::max();
                for (int c = 0; c < k; ++c) best = std::min(best, sq_dist(instances[i], centroids[c]));
                obj += best;
            }
            objective_trace->push_back(obj);
        }
        if (shift < 1e-6) break;
    }
    return centroids;
}

// Majority label among the K nearest references. Distance ties break toward
// the lower reference index, vote ties toward the smallest class id.
inline int knn_classify(const Point& query, const LabeledPointSet& reference, int k) {
    if (reference.points.empty()) throw EmptyReference("knn_classify: empty reference");
    if (k < 1) throw InvalidParams("knn_classify: K must be >= 1");
    const std::size_t n = reference.points.size();
    const std::size_t kk = std::min<std::size_t>(k, n);

    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(n);
    for (std::size_t i = 0; i < n; ++i) d.emplace_back(sq_dist(query, reference.points[i]), i);
    std::partial_sort(d.begin(), d.begin() + kk, d.end());

    std::map<int, int> votes;
    for (std::size_t i = 0; i < kk; ++i) ++votes[reference.labels[d[i].second]];
    int best_label = votes.begin()->first;
    int best_count = votes.begin()->second;
    for (const auto& [label, count] : votes) {
        if (count > best_count) {
            best_count = count;
            best_label = label;
        }
    }
    return best_label;
}

// K-means prototypes over the raw batch, annotated against the reference
// node set (normally the previous batch's labeled GNG nodes).
inline std::vector<Prototype> extract_prototypes(const PointList& batch, int protos_per_class,
                                                 int class_count,
                                                 const LabeledPointSet& reference, int k,
                                                 uint64_t seed) {
    if (protos_per_class < 1 || class_count < 1) {
        throw InvalidParams("extract_prototypes: counts must be >= 1");
    }
    const int rho = protos_per_class * class_count;
    const PointList centroids = kmeans(batch, rho, seed);
    std::vector<Prototype> out;
    out.reserve(rho);
    for (const Point& c : centroids) {
        out.push_back({c, knn_classify(c, reference, k)});
    }
    return out;
}

}  // namespace aigas
