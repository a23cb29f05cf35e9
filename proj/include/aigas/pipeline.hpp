#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aigas/datasets.hpp"
#include "aigas/eval.hpp"
#include "aigas/gng.hpp"
#include "aigas/memory.hpp"
#include "aigas/models.hpp"
#include "aigas/transform.hpp"

namespace aigas {

struct RunConfig {
    std::string name;            // dataset label for reports
    int batch_size = 0;
    long t_s = 0;                // supervised prefix length
    double gamma = 0.6;          // IoU threshold (retrieve)
    double eps_retrieve = 0.2;   // centroid distance threshold (retrieve)
    double eps_store = 4.0;      // centroid distance threshold (store)
    int k_annotate = 5;          // KNN K for node/prototype annotation
    int protos_per_class = 1;
    GngParams gng;               // gng.max_nodes <= 0 resolves per fit
    bool memory_enabled = true;
    uint64_t seed = 0;
};

// Throws InvalidParams naming the offending field.
inline void validate(const RunConfig& cfg) {
    if (cfg.batch_size < 1) throw InvalidParams("batch_size must be >= 1");
    if (cfg.t_s < 1) throw InvalidParams("t_s must be >= 1");
    if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw InvalidParams("gamma must be in (0, 1]");
    if (cfg.eps_retrieve <= 0.0) throw InvalidParams("eps_retrieve must be > 0");
    if (cfg.eps_store <= 0.0) throw InvalidParams("eps_store must be > 0");
    if (cfg.k_annotate < 1) throw InvalidParams("k_annotate must be >= 1");
    if (cfg.protos_per_class < 1) throw InvalidParams("protos_per_class must be >= 1");
    GngParams probe = cfg.gng;
    probe.max_nodes = probe.max_nodes <= 0 ? 0 : probe.max_nodes;
    validate(probe);
}

struct PipelineState {
    LabeledPointSet reference_nodes;            // annotated nodes carried from b-1
    std::vector<Prototype> reference_prototypes;
    Memory memory;
    long batch_counter = 0;
    int class_count = 0;
    std::size_t dim = 0;
};

struct BatchResult {
    std::vector<int> predictions;
    std::optional<std::size_t> retrieved_model_index;
    bool stored = false;
    long error_count = -1;  // filled by run(), which owns the eval track
};

namespace detail {

inline std::vector<Prototype> majority_prototypes(const Stream& prefix, const PointList& centroids) {
    // label each k-means cluster by the majority true label of its members,
    // ties toward the smallest class id
    std::vector<std::map<int, int>> tallies(centroids.size());
    for (const StreamInstance& inst : prefix) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::max();
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            const double d = sq_dist(inst.features, centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        ++tallies[best][inst.label];
    }
    std::vector<Prototype> out;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        int label = 0, count = -1;
        for (const auto& [cls, n] : tallies[c]) {
            if (n > count) {
                count = n;
                label = cls;
            }
        }
        out.push_back({centroids[c], label});
    }
    return out;
}

inline LabeledPointSet prototypes_as_reference(const std::vector<Prototype>& protos) {
    LabeledPointSet ref;
    for (const Prototype& p : protos) {
        ref.points.push_back(p.centroid);
        ref.labels.push_back(p.label);
    }
    return ref;
}

// Per-class rigid transforms from the reference nodes onto the current
// batch nodes. A class with a degenerate correspondence set falls back to
// the pooled all-class transform, then to the identity.
inline std::map<int, EuclideanTransform> estimate_projections(const LabeledPointSet& reference,
                                                              const LabeledPointSet& current,
                                                              int dim) {
    const Correspondences per_class = match_correspondences(reference, current);
    std::vector<std::pair<Point, Point>> pooled;
    for (const auto& [cls, pairs] : per_class.by_class) {
        pooled.insert(pooled.end(), pairs.begin(), pairs.end());
    }
    EuclideanTransform fallback = EuclideanTransform::identity(dim);
    try {
        fallback = estimate_rigid(pooled);
    } catch (const DegenerateConfiguration&) {
    }

    std::map<int, EuclideanTransform> out;
    std::set<int> classes(reference.labels.begin(), reference.labels.end());
    for (const int cls : classes) {
        const auto it = per_class.by_class.find(cls);
        if (it == per_class.by_class.end()) {
            out.emplace(cls, fallback);
            continue;
        }
        try {
            out.emplace(cls, estimate_rigid(it->second));
        } catch (const DegenerateConfiguration&) {
            out.emplace(cls, fallback);
        }
    }
    return out;
}

inline LabeledPointSet project_nodes(const LabeledPointSet& nodes,
                                     const std::map<int, EuclideanTransform>& proj, int dim) {
    LabeledPointSet out;
    const EuclideanTransform id = EuclideanTransform::identity(dim);
    for (std::size_t i = 0; i < nodes.points.size(); ++i) {
        const auto it = proj.find(nodes.labels[i]);
        out.points.push_back(apply_transform(it == proj.end() ? id : it->second, nodes.points[i]));
        out.labels.push_back(nodes.labels[i]);
    }
    return out;
}

inline std::vector<Prototype> project_prototypes(const std::vector<Prototype>& protos,
                                                 const std::map<int, EuclideanTransform>& proj,
                                                 int dim) {
    std::vector<Prototype> out;
    const EuclideanTransform id = EuclideanTransform::identity(dim);
    for (const Prototype& p : protos) {
        const auto it = proj.find(p.label);
        out.push_back({apply_transform(it == proj.end() ? id : it->second, p.centroid), p.label});
    }
    return out;
}

}  // namespace detail

// Supervised initialization: prototypes and GNG nodes from the labeled
// prefix, the node labels predicted by KNN against the prefix itself, and
// the memory seeded with the resulting concept model.
inline PipelineState init(const Stream& supervised, const RunConfig& cfg,
                          int expected_class_count) {
    validate(cfg);
    if (supervised.empty()) throw InsufficientData("init: empty supervised prefix");

    PipelineState state;
    state.dim = supervised.front().features.size();

    std::set<int> classes;
    for (const StreamInstance& inst : supervised) classes.insert(inst.label);
    if (static_cast<int>(classes.size()) < expected_class_count) {
        throw MissingClass("init: supervised prefix does not cover every class");
    }
    state.class_count = expected_class_count;
    if (static_cast<long>(supervised.size()) < state.class_count) {
        throw InvalidParams("t_s must be >= class_count");
    }

    PointList prefix_points;
    LabeledPointSet prefix_ref;
    for (const StreamInstance& inst : supervised) {
        prefix_points.push_back(inst.features);
        prefix_ref.points.push_back(inst.features);
        prefix_ref.labels.push_back(inst.label);
    }

    const int rho = state.class_count * cfg.protos_per_class;
    const PointList centroids =
        kmeans(prefix_points, rho, derive_seed(cfg.seed, 0xC0, 0));
    state.reference_prototypes = detail::majority_prototypes(supervised, centroids);

    GngParams gp = cfg.gng;
    gp.seed = derive_seed(cfg.seed, 0x61, 0);
    const GngGraph graph = gng_fit(prefix_points, gp);
    for (const GngNode& node : graph.nodes) {
        state.reference_nodes.points.push_back(node.position);
        state.reference_nodes.labels.push_back(
            knn_classify(node.position, prefix_ref, cfg.k_annotate));
    }

    state.memory = Memory({state.reference_prototypes, state.reference_nodes, 0});
    state.batch_counter = 0;
    return state;
}

// One pass of the per-batch loop: characterize, retrieve, predict, store.
inline BatchResult process_batch(PipelineState& state, const PointList& batch,
                                 const RunConfig& cfg) {
    if (batch.empty()) throw EmptyInput("process_batch: empty batch");
    for (const Point& x : batch) {
        if (x.size() != state.dim) throw DimensionMismatch("process_batch: dimensionality");
    }
    const long b = ++state.batch_counter;
    BatchResult result;

    if (batch.size() < 2) {
        // too small to characterize; predict from the carried reference
        const LabeledPointSet ref = detail::prototypes_as_reference(state.reference_prototypes);
        for (const Point& x : batch) result.predictions.push_back(knn_classify(x, ref, 1));
        return result;
    }

    // characterize: GNG nodes of the batch, annotated against the carried
    // reference nodes
    GngParams gp = cfg.gng;
    gp.seed = derive_seed(cfg.seed, 0x62, static_cast<uint64_t>(b));
    const GngGraph graph = gng_fit(batch, gp);
    LabeledPointSet nodes;
    for (const GngNode& node : graph.nodes) {
        nodes.points.push_back(node.position);
        nodes.labels.push_back(
            knn_classify(node.position, state.reference_nodes, cfg.k_annotate));
    }

    // prototypes of the batch, annotated the same way; short batches fall
    // back to per-class means of the annotated nodes
    const int rho = state.class_count * cfg.protos_per_class;
    std::vector<Prototype> prototypes;
    if (static_cast<int>(batch.size()) >= rho) {
        prototypes = extract_prototypes(batch, cfg.protos_per_class, state.class_count,
                                        state.reference_nodes, cfg.k_annotate,
                                        derive_seed(cfg.seed, 0x6B, static_cast<uint64_t>(b)));
    } else {
        std::map<int, std::pair<Point, int>> sums;
        for (std::size_t i = 0; i < nodes.points.size(); ++i) {
            auto& [sum, count] = sums.try_emplace(nodes.labels[i], Point(state.dim, 0.0), 0).first->second;
            for (std::size_t d = 0; d < state.dim; ++d) sum[d] += nodes.points[i][d];
            ++count;
        }
        for (auto& [cls, entry] : sums) {
            Point mean = entry.first;
            for (double& v : mean) v /= entry.second;
            prototypes.push_back({mean, cls});
        }
    }

    // estimate the drift projection reference -> current and carry the
    // previous prototypes/nodes into the current frame
    const auto projections =
        detail::estimate_projections(state.reference_nodes, nodes, static_cast<int>(state.dim));
    std::vector<Prototype> projected_prototypes =
        detail::project_prototypes(state.reference_prototypes, projections,
                                   static_cast<int>(state.dim));
    LabeledPointSet projected_nodes =
        detail::project_nodes(state.reference_nodes, projections, static_cast<int>(state.dim));

    // retrieve: replace the projected reference with a stored concept model
    // when the current batch matches one
    std::optional<Retrieval> hit;
    if (cfg.memory_enabled) {
        hit = try_retrieve(state.memory, prototypes, batch, cfg.eps_retrieve, cfg.gamma);
        if (hit) {
            result.retrieved_model_index = hit->index;
            projected_prototypes = hit->model.prototypes;
            projected_nodes = hit->model.nodes;
        }
    }

    // predict: 1-NN against the projected (or retrieved) prototypes
    const LabeledPointSet prediction_ref = detail::prototypes_as_reference(projected_prototypes);
    result.predictions.reserve(batch.size());
    for (const Point& x : batch) {
        result.predictions.push_back(knn_classify(x, prediction_ref, 1));
    }

    // store: append the current (unprojected) model when it drifted far
    // enough from the last stored one
    if (cfg.memory_enabled && should_store(state.memory, prototypes, cfg.eps_store)) {
        state.memory.store({prototypes, nodes, b});
        result.stored = true;
    }

    // the current batch's annotated model (or the retrieved one) becomes the
    // next batch's reference
    if (hit) {
        state.reference_nodes = hit->model.nodes;
        state.reference_prototypes = hit->model.prototypes;
    } else {
        state.reference_nodes = nodes;
        state.reference_prototypes = prototypes;
    }
    return result;
}

struct RunReport {
    RunConfig config;
    std::vector<BatchResult> batches;
    std::vector<int> predictions;            // unsupervised portion, in order
    std::vector<int> truths;                 // eval track
    std::vector<double> batch_prequential;   // running P_e at each batch end
    std::vector<std::size_t> memory_sizes;   // after each batch
    double final_error_fraction = 0.0;
    double final_error_percent = 0.0;
    double macro_f1_score = 0.0;
    double wall_seconds = 0.0;
};

// Run output: the scored report plus the final memory for snapshot export.
struct RunOutput {
    RunReport report;
    Memory memory;
};

// Full run: split the stream, initialize on the prefix, process every batch,
// and score the unsupervised portion. Ground-truth labels are consumed only
// through the eval track.
inline RunOutput run_with_memory(const Stream& stream, const RunConfig& cfg) {
    validate(cfg);
    if (static_cast<long>(stream.size()) < cfg.t_s + cfg.batch_size) {
        throw OutOfRange("run: stream shorter than prefix plus one batch");
    }
    const auto t0 = std::chrono::steady_clock::now();

    std::set<int> classes;
    for (const StreamInstance& inst : stream) classes.insert(inst.label);
    const BatchifyResult split = batchify(stream, cfg.batch_size, cfg.t_s);
    PipelineState state = init(split.prefix, cfg, static_cast<int>(classes.size()));

    RunReport report;
    report.config = cfg;
    std::vector<int> errors;
    for (std::size_t b = 0; b < split.batches.size(); ++b) {
        BatchResult res = process_batch(state, split.batches[b], cfg);
        const std::vector<int> batch_errors = zero_one_errors(split.truths[b], res.predictions);
        res.error_count = 0;
        for (const int e : batch_errors) res.error_count += e;
        errors.insert(errors.end(), batch_errors.begin(), batch_errors.end());
        report.predictions.insert(report.predictions.end(), res.predictions.begin(),
                                  res.predictions.end());
        report.truths.insert(report.truths.end(), split.truths[b].begin(),
                             split.truths[b].end());
        report.memory_sizes.push_back(state.memory.size());
        report.batches.push_back(std::move(res));
    }

    const std::vector<double> trace = prequential(errors);
    for (std::size_t b = 0, idx = 0; b < report.batches.size(); ++b) {
        idx += report.batches[b].predictions.size();
        report.batch_prequential.push_back(trace[idx - 1]);
    }
    report.final_error_fraction = trace.back();
    report.final_error_percent = 100.0 * trace.back();
    report.macro_f1_score = macro_f1(report.truths, report.predictions);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(report), std::move(state.memory)};
}

inline RunReport run(const Stream& stream, const RunConfig& cfg) {
    return run_with_memory(stream, cfg).report;
}

}  // namespace aigas
