#pragma once

#include <optional>
#include <vector>

#include "aigas/geometry.hpp"
#include "aigas/models.hpp"

namespace aigas {

// One stored distribution of concepts: labeled prototypes plus the labeled
// GNG nodes that characterized the batch when it was stored.
struct ConceptModel {
    std::vector<Prototype> prototypes;
    LabeledPointSet nodes;
    long batch_index_created = 0;
};

// Append-only memory of past concept models. Entry 0 is always the initial
// supervised model.
class Memory {
  public:
    Memory() = default;
    explicit Memory(ConceptModel initial) { models_.push_back(std::move(initial)); }

    std::size_t size() const { return models_.size(); }
    bool empty() const { return models_.empty(); }
    const ConceptModel& at(std::size_t i) const { return models_.at(i); }
    const std::vector<ConceptModel>& models() const { return models_; }

    void store(ConceptModel model) { models_.push_back(std::move(model)); }

  private:
    std::vector<ConceptModel> models_;
};

struct Retrieval {
    std::size_t index = 0;
    ConceptModel model;  // by value: retrieval never aliases the memory
};

namespace detail {

inline double min_distance_to_centroids(const Point& c, const ConceptModel& model) {
    double best = std::numeric_limits<double>::max();
    for (const Prototype& p : model.prototypes) {
        best = std::min(best, dist(c, p.centroid));
    }
    return best;
}

}  // namespace detail

// Two-step recurrence check over the stored models, oldest first; the first
// model passing both steps wins.
//   step 1: every current centroid lies within eps_r of some stored centroid
//   step 2: IoU between the alpha shapes of the batch instances and of the
//           stored GNG nodes exceeds gamma
// Streams with more than 2 features skip step 2 (the shape machinery is
// 2-D); step 1 alone decides there.
inline std::optional<Retrieval> try_retrieve(const Memory& mem,
                                             const std::vector<Prototype>& current_prototypes,
                                             const PointList& batch_points, double eps_r,
                                             double gamma) {
    if (eps_r <= 0.0) throw InvalidParams("try_retrieve: eps_r must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParams("try_retrieve: gamma in (0, 1]");
    if (current_prototypes.empty() || mem.empty()) return std::nullopt;

    const bool planar = current_prototypes.front().centroid.size() == 2;

    // The batch shape does not depend on the candidate model; build it once.
    std::optional<AlphaShape> batch_shape;
    bool batch_shape_failed = false;

    for (std::size_t i = 0; i < mem.size(); ++i) {
        const ConceptModel& model = mem.at(i);

        bool centroids_match = true;
        for (const Prototype& cur : current_prototypes) {
            if (detail::min_distance_to_centroids(cur.centroid, model) > eps_r) {
                centroids_match = false;
                break;
            }
        }
        if (!centroids_match) continue;

        if (!planar) return Retrieval{i, model};

        if (batch_shape_failed) continue;
        try {
            if (!batch_shape) batch_shape = alpha_shape_of(to_vec2(batch_points));
        } catch (const DegenerateInput&) {
            batch_shape_failed = true;  // no model can pass step 2
            continue;
        }
        try {
            const AlphaShape stored_shape = alpha_shape_of(to_vec2(model.nodes.points));
            if (iou(*batch_shape, stored_shape) > gamma) return Retrieval{i, model};
        } catch (const DegenerateInput&) {
            // this model cannot be shaped; treat as non-matching
        }
    }
    return std::nullopt;
}

// Storage criterion: some current prototype sits farther than eps_d from
// every centroid of the most recently stored model.
inline bool should_store(const Memory& mem, const std::vector<Prototype>& current_prototypes,
                         double eps_d) {
    if (mem.empty()) throw EmptyInput("should_store: memory not seeded");
    const ConceptModel& last = mem.at(mem.size() - 1);
    for (const Prototype& cur : current_prototypes) {
        if (detail::min_distance_to_centroids(cur.centroid, last) > eps_d) return true;
    }
    return false;
}

}  // namespace aigas
