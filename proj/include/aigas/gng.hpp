#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "aigas/common.hpp"

namespace aigas {

struct GngParams {
    int max_nodes = 60;   // <= 0 means auto: min(60, n/5), at least 2
    int lambda = 100;     // insertion interval, in adaptation steps
    double eps_b = 0.2;   // winner learning rate
    double eps_n = 0.006; // neighbor learning rate
    double alpha_split = 0.5;
    double d_decay = 0.995;
    int a_max = 50;
    int epochs = 3;
    uint64_t seed = 0;
};

inline void validate(const GngParams& p) {
    if (!(p.eps_n > 0.0 && p.eps_n <= p.eps_b && p.eps_b < 1.0)) {
        throw InvalidParams("gng: require 0 < eps_n <= eps_b < 1");
    }
    if (!(p.alpha_split > 0.0 && p.alpha_split < 1.0)) {
        throw InvalidParams("gng: require 0 < alpha_split < 1");
    }
    if (!(p.d_decay > 0.0 && p.d_decay < 1.0)) {
        throw InvalidParams("gng: require 0 < d_decay < 1");
    }
    if (p.max_nodes != 0 && p.max_nodes < 2) throw InvalidParams("gng: max_nodes must be >= 2");
    if (p.lambda < 1) throw InvalidParams("gng: lambda must be >= 1");
    if (p.a_max < 1) throw InvalidParams("gng: a_max must be >= 1");
    if (p.epochs < 1) throw InvalidParams("gng: epochs must be >= 1");
}

inline int resolve_max_nodes(const GngParams& p, std::size_t n_instances) {
    if (p.max_nodes > 0) return p.max_nodes;
    return std::max<int>(2, std::min<int>(60, static_cast<int>(n_instances / 5)));
}

struct GngNode {
    Point position;
    double accumulated_error = 0.0;
};

struct GngEdge {
    int a = 0;
    int b = 0;
    int age = 0;
};

struct GngGraph {
    std::vector<GngNode> nodes;
    std::vector<GngEdge> edges;

    PointList positions() const {
        PointList out;
        out.reserve(nodes.size());
        for (const GngNode& n : nodes) out.push_back(n.position);
        return out;
    }
};

// Batch-trained Growing Neural Gas (competitive Hebbian learning). The fit
// is re-run per batch from a cold start; fixed (instances, params, seed)
// reproduce the graph bit for bit.
inline GngGraph gng_fit(const PointList& instances, const GngParams& params) {
    validate(params);
    const std::size_t n = instances.size();
    if (n < 2) throw InsufficientData("gng_fit: need at least 2 instances");
    const std::size_t dim = instances.front().size();
    for (const Point& x : instances) {
        if (x.size() != dim) throw DimensionMismatch("gng_fit: mixed dimensionality");
    }
    const int max_nodes = resolve_max_nodes(params, n);

    Rng rng(params.seed);

    // slot-based storage; slots stay stable while nodes come and go
    std::vector<Point> pos;
    std::vector<double> err;
    std::vector<bool> alive;
    std::vector<std::map<int, int>> adj;  // neighbor slot -> age
    int alive_count = 0;

    auto add_node = [&](const Point& p, double e) {
        pos.push_back(p);
        err.push_back(e);
        alive.push_back(true);
        adj.emplace_back();
        ++alive_count;
        return static_cast<int>(pos.size() - 1);
    };

    const std::size_t first = rng.below(n);
    std::size_t second = n;
    const std::size_t probe = rng.below(n);
    for (std::size_t off = 0; off < n; ++off) {
        const std::size_t j = (probe + off) % n;
        if (instances[j] != instances[first]) {
            second = j;
            break;
        }
    }
    if (second == n) throw InsufficientData("gng_fit: need 2 distinct instances");
    add_node(instances[first], 0.0);
    add_node(instances[second], 0.0);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    long step = 0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        for (const std::size_t idx : order) {
            const Point& x = instances[idx];

            // winner and runner-up (ties toward the lower slot)
            int s1 = -1, s2 = -1;
            double d1 = std::numeric_limits<double>::max();
            double d2 = std::numeric_limits<double>::max();
            for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
                if (!alive[i]) continue;
                const double d = sq_dist(x, pos[i]);
                if (d < d1) {
                    d2 = d1;
                    s2 = s1;
                    d1 = d;
                    s1 = i;
                } else if (d < d2) {
                    d2 = d;
                    s2 = i;
                }
            }

            for (auto& [nb, age] : adj[s1]) {
                ++age;
                ++adj[nb][s1];
            }
            err[s1] += d1;
            for (std::size_t d = 0; d < dim; ++d) {
                pos[s1][d] += params.eps_b * (x[d] - pos[s1][d]);
            }
            for (const auto& [nb, age] : adj[s1]) {
                for (std::size_t d = 0; d < dim; ++d) {
                    pos[nb][d] += params.eps_n * (x[d] - pos[nb][d]);
                }
            }
            adj[s1][s2] = 0;
            adj[s2][s1] = 0;

            // drop over-aged edges around the winner, then any node left
            // isolated (never below 2 nodes total)
            std::vector<int> stale;
            for (const auto& [nb, age] : adj[s1]) {
                if (age > params.a_max) stale.push_back(nb);
            }
            for (const int nb : stale) {
                adj[s1].erase(nb);
                adj[nb].erase(s1);
            }
            for (const int cand : stale) {
                if (adj[cand].empty() && alive_count > 2 && alive[cand]) {
                    alive[cand] = false;
                    --alive_count;
                }
            }
            // s1 itself cannot be isolated here: the (s1, s2) edge is fresh.

            ++step;
            if (step % params.lambda == 0 && alive_count < max_nodes) {
                int q = -1;
                double worst = -1.0;
                for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
                    if (alive[i] && err[i] > worst) {
                        worst = err[i];
                        q = i;
                    }
                }
                int f = -1;
                double worst_nb = -1.0;
                for (const auto& [nb, age] : adj[q]) {
                    if (err[nb] > worst_nb) {
                        worst_nb = err[nb];
                        f = nb;
                    }
                }
                if (f >= 0) {
                    Point mid(dim);
                    for (std::size_t d = 0; d < dim; ++d) mid[d] = 0.5 * (pos[q][d] + pos[f][d]);
                    err[q] *= params.alpha_split;
                    err[f] *= params.alpha_split;
                    const int r = add_node(mid, err[q]);
                    adj[q].erase(f);
                    adj[f].erase(q);
                    adj[q][r] = 0;
                    adj[r][q] = 0;
                    adj[f][r] = 0;
                    adj[r][f] = 0;
                }
            }

            for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
                if (alive[i]) err[i] *= params.d_decay;
            }
        }
    }

    GngGraph out;
    std::vector<int> remap(pos.size(), -1);
    for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
        if (!alive[i]) continue;
        remap[i] = static_cast<int>(out.nodes.size());
        out.nodes.push_back({pos[i], err[i]});
    }
    for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
        if (!alive[i]) continue;
        for (const auto& [nb, age] : adj[i]) {
            if (nb > i && alive[nb]) out.edges.push_back({remap[i], remap[nb], age});
        }
    }
    return out;
}

}  // namespace aigas
