#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aigas/common.hpp"

namespace aigas {

// One stream element. The label is ground truth; after the supervised
// prefix it is visible to the evaluation track only, never to the learner.
struct StreamInstance {
    Point features;
    int label = 0;
};

using Stream = std::vector<StreamInstance>;

// Benchmark row: stream sizes plus the per-dataset thresholds.
struct DatasetSpec {
    std::string name;
    int classes = 0;
    int features = 0;
    long instances = 0;
    int batches = 0;
    long t_s = 0;
    double gamma = 0.0;
    double eps_r = 0.0;
    double eps_d = 0.0;
};

inline const std::vector<DatasetSpec>& benchmark_specs() {
    static const std::vector<DatasetSpec> specs = {
        {"1CDT", 2, 2, 16000, 100, 800, 0.6, 0.2, 4.0},
        {"1CHT", 2, 2, 16000, 100, 800, 0.6, 0.2, 4.0},
        {"2CDT", 2, 2, 16000, 100, 800, 0.6, 0.2, 4.0},
        {"2CHT", 2, 2, 16000, 100, 800, 0.6, 0.2, 4.0},
        {"5CVT", 5, 2, 24000, 200, 1000, 0.6, 0.2, 1.5},
        {"1CSURR", 2, 2, 55283, 300, 920, 0.2, 0.2, 2.0},
        {"MG2C2D", 2, 2, 200000, 200, 5000, 0.4, 0.2, 2.5},
        {"FG2C2D", 2, 2, 200000, 200, 5000, 0.6, 0.2, 1.5},
        {"GEARS", 2, 2, 200000, 1095, 910, 0.6, 0.2, 1.5},
        {"4CRT", 4, 2, 144400, 100, 7220, 0.6, 0.1, 1.5},
        {"4CRE-V1", 4, 2, 125000, 500, 1250, 0.7, 0.1, 4.0},
        {"4CRE-V2", 4, 2, 183000, 800, 1140, 0.7, 0.1, 4.0},
        {"UG2C2D", 2, 2, 100000, 200, 2500, 0.7, 0.1, 4.0},
        {"UG2C3D", 2, 3, 200000, 200, 2000, 0.7, 0.1, 4.0},
        {"UG2C5D", 2, 5, 200000, 500, 2000, 0.7, 0.1, 4.0},
        {"4CE1CF", 5, 2, 173250, 200, 4330, 0.7, 0.1, 4.0},
        {"1CDT-RCD", 2, 2, 20000, 100, 1000, 0.6, 0.2, 4.0},
        {"1CHT-RCD", 2, 2, 20000, 100, 1000, 0.6, 0.2, 4.0},
        {"2CDT-RCD", 2, 2, 20000, 100, 1000, 0.6, 0.2, 4.0},
        {"2CHT-RCD", 2, 2, 20000, 100, 1000, 0.6, 0.2, 4.0},
        {"5CVT-RCD", 5, 2, 30000, 200, 750, 0.3, 0.2, 1.5},
        {"1CSURR-RCD", 2, 2, 60000, 300, 1000, 0.2, 0.3, 2.0},
        {"MG2C2D-RCD", 2, 2, 218900, 200, 5500, 0.4, 0.2, 2.5},
        {"FG2C2D-RCD", 2, 2, 220000, 200, 5500, 0.6, 0.2, 1.5},
        {"GEARS-RCD", 2, 2, 220000, 1095, 1000, 0.6, 0.2, 1.5},
    };
    return specs;
}

inline const DatasetSpec& benchmark_spec(const std::string& name) {
    for (const DatasetSpec& s : benchmark_specs()) {
        if (s.name == name) return s;
    }
    throw InvalidParams("unknown benchmark dataset: " + name);
}

// Batch size is derived, not stored: the benchmark reports
// instances / batch count / prefix length triples.
inline int derived_batch_size(const DatasetSpec& spec) {
    return static_cast<int>((spec.instances - spec.t_s) / spec.batches);
}

namespace detail {

inline double parse_double(const std::string& tok, std::size_t row) {
    double v = 0.0;
    const char* begin = tok.data();
    const char* end = tok.data() + tok.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ParseError("row " + std::to_string(row) + ": bad number '" + tok + "'");
    }
    return v;
}

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// CSV rows are d feature columns followed by one label token, no header.
// Labels are remapped to 0..C-1 in first-appearance order.
inline Stream load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    Stream stream;
    std::map<long, int> label_map;
    std::string line;
    std::size_t row = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> tokens;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) tokens.push_back(tok);
        if (tokens.size() < 2) {
            throw ParseError("row " + std::to_string(row) + ": need features and a label");
        }

        StreamInstance inst;
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            inst.features.push_back(detail::parse_double(tokens[i], row));
        }
        const double raw_label = detail::parse_double(tokens.back(), row);
        const long label_key = std::lround(raw_label);

        if (dim == 0) {
            dim = inst.features.size();
        } else if (inst.features.size() != dim) {
            throw DimensionMismatch("row " + std::to_string(row) + ": expected " +
                                    std::to_string(dim) + " features");
        }
        const auto [it, inserted] =
            label_map.emplace(label_key, static_cast<int>(label_map.size()));
        inst.label = it->second;
        stream.push_back(std::move(inst));
    }
    if (stream.empty()) throw ParseError("empty stream file: " + path);
    return stream;
}

inline void save_csv(const std::string& path, const Stream& stream) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (const StreamInstance& inst : stream) {
        for (const double v : inst.features) out << detail::format_double(v) << ',';
        out << inst.label << '\n';
    }
}

// Induce an abrupt recurrent drift: append a verbatim copy of the window
// [source_start, source_start + append_count) to the end of the stream.
inline Stream induce_rcd(const Stream& stream, long append_count, long source_start) {
    if (append_count < 0 || source_start < 0 ||
        source_start + append_count > static_cast<long>(stream.size())) {
        throw OutOfRange("induce_rcd: window outside the stream");
    }
    Stream out = stream;
    out.insert(out.end(), stream.begin() + source_start,
               stream.begin() + source_start + append_count);
    return out;
}

struct BatchifyResult {
    Stream prefix;                        // labeled supervised prefix
    std::vector<PointList> batches;       // label-stripped batches
    std::vector<std::vector<int>> truths;  // parallel ground truth, eval only
};

inline BatchifyResult batchify(const Stream& stream, int batch_size, long t_s) {
    if (batch_size < 1) throw InvalidParams("batchify: batch_size must be >= 1");
    if (t_s < 0 || t_s >= static_cast<long>(stream.size())) {
        throw OutOfRange("batchify: prefix length outside the stream");
    }
    BatchifyResult out;
    out.prefix.assign(stream.begin(), stream.begin() + t_s);
    for (std::size_t i = t_s; i < stream.size(); i += batch_size) {
        const std::size_t end = std::min(stream.size(), i + batch_size);
        PointList batch;
        std::vector<int> truth;
        for (std::size_t j = i; j < end; ++j) {
            batch.push_back(stream[j].features);
            truth.push_back(stream[j].label);
        }
        out.batches.push_back(std::move(batch));
        out.truths.push_back(std::move(truth));
    }
    return out;
}

enum class SyntheticKind {
    kTranslatingGaussians,
    kRotatingGaussians,
    kRecurrentTranslating,
};

inline SyntheticKind synthetic_kind_from_name(const std::string& name) {
    if (name == "translating-gaussians") return SyntheticKind::kTranslatingGaussians;
    if (name == "rotating-gaussians") return SyntheticKind::kRotatingGaussians;
    if (name == "recurrent-translating") return SyntheticKind::kRecurrentTranslating;
    throw InvalidParams("unknown synthetic kind: " + name);
}

struct SyntheticParams {
    long count = 10000;
    int classes = 2;
    double sigma = 0.25;          // class-conditional noise
    double separation = 2.0;      // spacing of class start means along +y
    double span = 8.0;            // total drift along +y (or turn radius angle span)
    long hold = 500;              // instances before the drift begins
    long jump_at = -1;            // recurrent-translating: jump instant
    double truncate_sigmas = 0.0; // > 0: resample noise beyond this radius
    double x_offset = 0.0;        // start mean x for all classes
};

inline void validate(const SyntheticParams& p, SyntheticKind kind) {
    if (p.count < 1) throw InvalidParams("synthetic: count must be >= 1");
    if (p.classes < 1) throw InvalidParams("synthetic: classes must be >= 1");
    if (p.sigma <= 0.0) throw InvalidParams("synthetic: sigma must be > 0");
    if (p.hold < 0 || p.hold >= p.count) throw InvalidParams("synthetic: hold out of range");
    if (kind == SyntheticKind::kRecurrentTranslating &&
        (p.jump_at <= p.hold || p.jump_at >= p.count)) {
        throw InvalidParams("synthetic: jump_at must lie in (hold, count)");
    }
}

namespace detail {

inline Point gaussian_noise(Rng& rng, double sigma, double truncate_sigmas) {
    double zx = rng.normal();
    double zy = rng.normal();
    if (truncate_sigmas > 0.0) {
        while (zx * zx + zy * zy > truncate_sigmas * truncate_sigmas) {
            zx = rng.normal();
            zy = rng.normal();
        }
    }
    return {sigma * zx, sigma * zy};
}

}  // namespace detail

// Deterministic labeled streams: class-conditional Gaussians whose means
// follow a scripted trajectory. Classes cycle round-robin so every batch
// stays balanced.
inline Stream generate_synthetic(SyntheticKind kind, const SyntheticParams& p, uint64_t seed) {
    validate(p, kind);
    Rng rng(seed);
    Stream stream;
    stream.reserve(p.count);

    const double drift_len = static_cast<double>(
        (kind == SyntheticKind::kRecurrentTranslating ? p.jump_at : p.count) - p.hold);

    for (long i = 0; i < p.count; ++i) {
        const int cls = static_cast<int>(i % p.classes);

        double u = 0.0;
        if (i >= p.hold) {
            if (kind == SyntheticKind::kRecurrentTranslating && i >= p.jump_at) {
                u = static_cast<double>(i - p.jump_at) / drift_len;  // replay from the start
            } else {
                u = static_cast<double>(i - p.hold) / drift_len;
            }
            u = std::min(u, 1.0);
        }

        Point mean{p.x_offset, p.separation * cls};
        if (kind == SyntheticKind::kRotatingGaussians) {
            const double theta = 2.0 * M_PI * p.span * u;
            const double cy = p.separation * cls;
            mean = {p.x_offset + cy * std::sin(theta), cy * std::cos(theta)};
        } else {
            mean[1] += p.span * u;
        }

        const Point noise = detail::gaussian_noise(rng, p.sigma, p.truncate_sigmas);
        stream.push_back({{mean[0] + noise[0], mean[1] + noise[1]}, cls});
    }
    return stream;
}

// Desk-scale reproductions of the benchmark streams used by the harness
// when the originals are not on disk. Shapes and thresholds follow the
// benchmark table; trajectories keep the same character (one or both
// classes translating, well separated vs. overlapping).
inline Stream generate_preset(const std::string& name, uint64_t seed) {
    if (name == "1cdt") {
        // class 0 fixed at the origin, class 1 translating away
        SyntheticParams p;
        p.count = 16000;
        p.classes = 2;
        p.sigma = 0.3;
        p.separation = 0.0;
        p.span = 10.0;
        p.hold = 1000;
        p.truncate_sigmas = 2.5;
        Rng rng(seed);
        Stream stream;
        stream.reserve(p.count);
        for (long i = 0; i < p.count; ++i) {
            const int cls = static_cast<int>(i % 2);
            const double u =
                i < p.hold ? 0.0
                           : static_cast<double>(i - p.hold) / static_cast<double>(p.count - p.hold);
            const Point noise = detail::gaussian_noise(rng, p.sigma, p.truncate_sigmas);
            const double mx = cls == 0 ? 0.0 : 4.0;
            const double my = cls == 0 ? 0.0 : p.span * u;
            stream.push_back({{mx + noise[0], my + noise[1]}, cls});
        }
        return stream;
    }
    if (name == "2cdt") {
        // both classes translating along the axis that separates them
        SyntheticParams p;
        p.count = 16000;
        p.classes = 2;
        p.sigma = 0.36;
        p.separation = 1.7;
        p.span = 8.0;
        p.hold = 1000;
        p.truncate_sigmas = 2.5;
        return generate_synthetic(SyntheticKind::kTranslatingGaussians, p, seed);
    }
    if (name == "rc10k") {
        // recurrent-translating desk stream: scripted jump at instance 6000
        SyntheticParams p;
        p.count = 10000;
        p.classes = 2;
        p.sigma = 0.25;
        p.separation = 2.0;
        p.span = 8.0;
        p.hold = 500;
        p.jump_at = 6000;
        p.truncate_sigmas = 2.5;
        return generate_synthetic(SyntheticKind::kRecurrentTranslating, p, seed);
    }
    throw InvalidParams("unknown preset: " + name);
}

}  // namespace aigas
