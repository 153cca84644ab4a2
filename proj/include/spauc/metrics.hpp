// Copyright 2026 The SPAUC Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "spauc/common.hpp"
#include "spauc/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace spauc {

namespace detail {

inline void check_scored(std::span<const real_type> scores, std::span<const int> labels, std::uint64_t &n_pos, std::uint64_t &n_neg) {
    if (scores.size() != labels.size()) {
        throw invalid_parameter{ "scores and labels must have the same length" };
    }
    n_pos = 0;
    n_neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (std::isnan(scores[i])) {
            throw invalid_parameter{ "scores must not be NaN" };
        }
        if (labels[i] == 1) {
            ++n_pos;
        } else if (labels[i] == -1) {
            ++n_neg;
        } else {
            throw invalid_parameter{ "labels must be +1 or -1" };
        }
    }
    if (n_pos == 0 || n_neg == 0) {
        throw data_error{ "AUC is undefined unless both classes are present" };
    }
}

}  // namespace detail

/**
 * @brief Empirical AUC; a tied (positive, negative) pair counts one half.
 *
 * Mann-Whitney form: one sort, tie groups get the average rank. Ranks are kept doubled so that the statistic
 * is an exact integer before the final division.
 */
[[nodiscard]] inline real_type auc(std::span<const real_type> scores, std::span<const int> labels) {
    std::uint64_t n_pos = 0;
    std::uint64_t n_neg = 0;
    detail::check_scored(scores, labels, n_pos, n_neg);

    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{ 0 });
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // sum over positives of 2 * (1-based average rank)
    std::uint64_t rank_sum_x2 = 0;
    std::size_t begin = 0;
    while (begin < n) {
        std::size_t end = begin + 1;
        while (end < n && scores[order[end]] == scores[order[begin]]) {
            ++end;
        }
        // ranks begin+1 .. end average to (begin + 1 + end) / 2
        const std::uint64_t twice_rank = begin + 1 + end;
        for (std::size_t k = begin; k < end; ++k) {
            if (labels[order[k]] == 1) {
                rank_sum_x2 += twice_rank;
            }
        }
        begin = end;
    }
    const std::uint64_t u_x2 = rank_sum_x2 - n_pos * (n_pos + 1);
    return static_cast<real_type>(u_x2) / (2.0 * static_cast<real_type>(n_pos) * static_cast<real_type>(n_neg));
}

/// O(n^2) pair counting with the same tie convention as auc().
[[nodiscard]] inline real_type auc_bruteforce(std::span<const real_type> scores, std::span<const int> labels) {
    std::uint64_t n_pos = 0;
    std::uint64_t n_neg = 0;
    detail::check_scored(scores, labels, n_pos, n_neg);
    std::uint64_t wins_x2 = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) {
            continue;
        }
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != -1) {
                continue;
            }
            if (scores[i] > scores[j]) {
                wins_x2 += 2;
            } else if (scores[i] == scores[j]) {
                wins_x2 += 1;
            }
        }
    }
    return static_cast<real_type>(wins_x2) / (2.0 * static_cast<real_type>(n_pos) * static_cast<real_type>(n_neg));
}

/// AUC of the linear scorer x -> w'x on @p data.
[[nodiscard]] inline real_type auc(std::span<const real_type> w, const dataset &data) {
    std::vector<real_type> scores;
    std::vector<int> labels;
    scores.reserve(data.size());
    labels.reserve(data.size());
    for (const example &z : data.examples()) {
        scores.push_back(dot(w, z.features));
        labels.push_back(z.label);
    }
    return auc(scores, labels);
}

}  // namespace spauc
