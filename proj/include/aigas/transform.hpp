#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "aigas/common.hpp"
#include "aigas/models.hpp"

namespace aigas {

// Rotation + translation (no reflection: det(R) = +1).
struct EuclideanTransform {
    Eigen::MatrixXd rotation;
    Eigen::VectorXd translation;

    static EuclideanTransform identity(int dim) {
        return {Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)};
    }
};

// One (source, target) pair list per class id.
struct Correspondences {
    std::map<int, std::vector<std::pair<Point, Point>>> by_class;
};

// Greedy mutual-nearest matching, per class: repeatedly pair the globally
// closest unmatched source/target nodes of that class until one side runs
// out. Classes absent on either side produce no pairs.
inline Correspondences match_correspondences(const LabeledPointSet& source,
                                             const LabeledPointSet& target) {
    Correspondences out;
    std::map<int, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> members;
    for (std::size_t i = 0; i < source.labels.size(); ++i) {
        members[source.labels[i]].first.push_back(i);
    }
    for (std::size_t j = 0; j < target.labels.size(); ++j) {
        members[target.labels[j]].second.push_back(j);
    }

    for (const auto& [cls, lists] : members) {
        const auto& src = lists.first;
        const auto& tgt = lists.second;
        if (src.empty() || tgt.empty()) continue;

        struct Cand {
            double d2;
            std::size_t si, ti;
        };
        std::vector<Cand> cands;
        cands.reserve(src.size() * tgt.size());
        for (std::size_t a = 0; a < src.size(); ++a) {
            for (std::size_t b = 0; b < tgt.size(); ++b) {
                cands.push_back({sq_dist(source.points[src[a]], target.points[tgt[b]]),
                                 src[a], tgt[b]});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
            return std::tie(x.d2, x.si, x.ti) < std::tie(y.d2, y.si, y.ti);
        });

        std::vector<bool> used_s(source.points.size(), false);
        std::vector<bool> used_t(target.points.size(), false);
        auto& pairs = out.by_class[cls];
        const std::size_t want = std::min(src.size(), tgt.size());
        for (const Cand& c : cands) {
            if (pairs.size() == want) break;
            if (used_s[c.si] || used_t[c.ti]) continue;
            used_s[c.si] = true;
            used_t[c.ti] = true;
            pairs.emplace_back(source.points[c.si], target.points[c.ti]);
        }
    }
    return out;
}

// Kabsch: least-squares rotation + translation mapping sources onto targets.
// The SVD sign correction keeps det(R) = +1 (reflections are not allowed).
inline EuclideanTransform estimate_rigid(const std::vector<std::pair<Point, Point>>& pairs) {
    if (pairs.empty()) throw DegenerateConfiguration("estimate_rigid: no pairs");
    const int dim = static_cast<int>(pairs.front().first.size());
    const int n = static_cast<int>(pairs.size());
    if (n < dim) {
        throw DegenerateConfiguration("estimate_rigid: need at least d pairs");
    }

    Eigen::MatrixXd src(dim, n), tgt(dim, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(pairs[i].first.size()) != dim ||
            static_cast<int>(pairs[i].second.size()) != dim) {
            throw DimensionMismatch("estimate_rigid: mixed dimensionality");
        }
        for (int k = 0; k < dim; ++k) {
            src(k, i) = pairs[i].first[k];
            tgt(k, i) = pairs[i].second[k];
        }
    }

    const Eigen::VectorXd src_mean = src.rowwise().mean();
    const Eigen::VectorXd tgt_mean = tgt.rowwise().mean();
    const Eigen::MatrixXd src_c = src.colwise() - src_mean;
    const Eigen::MatrixXd tgt_c = tgt.colwise() - tgt_mean;

    if (src_c.colwise().norm().maxCoeff() < 1e-12) {
        throw DegenerateConfiguration("estimate_rigid: coincident source points");
    }

    const Eigen::MatrixXd cov = src_c * tgt_c.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd& u = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();
    Eigen::VectorXd signs = Eigen::VectorXd::Ones(dim);
    if ((v * u.transpose()).determinant() < 0.0) signs(dim - 1) = -1.0;

    EuclideanTransform t;
    t.rotation = v * signs.asDiagonal() * u.transpose();
    t.translation = tgt_mean - t.rotation * src_mean;
    return t;
}

inline Point apply_transform(const EuclideanTransform& t, const Point& p) {
    const int dim = static_cast<int>(t.translation.size());
    if (static_cast<int>(p.size()) != dim) {
        throw DimensionMismatch("apply_transform: dimensionality mismatch");
    }
    Eigen::VectorXd x(dim);
    for (int k = 0; k < dim; ++k) x(k) = p[k];
    const Eigen::VectorXd y = t.rotation * x + t.translation;
    Point out(dim);
    for (int k = 0; k < dim; ++k) out[k] = y(k);
    return out;
}

inline PointList apply_transform(const EuclideanTransform& t, const PointList& pts) {
    PointList out;
    out.reserve(pts.size());
    for (const Point& p : pts) out.push_back(apply_transform(t, p));
    return out;
}

}  // namespace aigas
