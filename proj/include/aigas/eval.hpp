#pragma once

#include <map>
#include <set>
#include <vector>

#include "aigas/common.hpp"

namespace aigas {

inline std::vector<int> zero_one_errors(const std::vector<int>& truth,
                                        const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) {
        throw LengthMismatch("zero_one_errors: length mismatch");
    }
    std::vector<int> e(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) e[i] = truth[i] == predicted[i] ? 0 : 1;
    return e;
}

// Running prequential error, P_e(i) = (1/i) * sum_{k<=i} e_k, computed via
// the incremental recurrence P_e(i) = P_e(i-1) + (e_i - P_e(i-1)) / i.
inline std::vector<double> prequential(const std::vector<int>& errors) {
    if (errors.empty()) throw EmptyInput("prequential: empty error sequence");
    std::vector<double> out(errors.size());
    double p = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        p += (static_cast<double>(errors[i]) - p) / static_cast<double>(i + 1);
        out[i] = p;
    }
    return out;
}

// Unweighted mean of per-class F1. Classes absent from both truth and
// prediction are excluded; a class with P + R = 0 contributes 0.
inline double macro_f1(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) throw LengthMismatch("macro_f1: length mismatch");
    if (truth.empty()) throw EmptyInput("macro_f1: empty inputs");

    std::set<int> classes(truth.begin(), truth.end());
    classes.insert(predicted.begin(), predicted.end());

    std::map<int, long> tp, fp, fn;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == predicted[i]) {
            ++tp[truth[i]];
        } else {
            ++fp[predicted[i]];
            ++fn[truth[i]];
        }
    }

    double total = 0.0;
    for (const int c : classes) {
        const double tpc = static_cast<double>(tp[c]);
        const double fpc = static_cast<double>(fp[c]);
        const double fnc = static_cast<double>(fn[c]);
        const double precision = tpc + fpc > 0 ? tpc / (tpc + fpc) : 0.0;
        const double recall = tpc + fnc > 0 ? tpc / (tpc + fnc) : 0.0;
        const double f1 = precision + recall > 0 ? 2.0 * precision * recall / (precision + recall)
                                                 : 0.0;
        total += f1;
    }
    return total / static_cast<double>(classes.size());
}

}  // namespace aigas
