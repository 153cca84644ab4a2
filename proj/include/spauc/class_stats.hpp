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

#include <cstddef>
#include <string>

namespace spauc {

/// Class prior and class-conditional means. Unready snapshots (a class not yet seen) are representable.
struct stats_snapshot {
    real_type p{ 0.0 };
    dense_vector u{};  // mean of positive examples
    dense_vector v{};  // mean of negative examples
    bool ready{ false };

    void require_ready(const char *who) const {
        if (!ready) {
            throw data_error{ std::string{ who } + ": class statistics are not ready (both classes must have been observed)" };
        }
    }
};

/**
 * @brief Running class statistics over a prefix of the stream.
 *
 * Sums are stored rather than means so that a snapshot after t examples is the from-scratch value up to
 * rounding in the sums alone.
 */
class class_stats {
  public:
    class_stats() = default;

    explicit class_stats(std::size_t dim) :
        sum_pos_(dim, 0.0),
        sum_neg_(dim, 0.0) {}

    void update(const example &z) {
        dense_vector &sum = z.positive() ? sum_pos_ : sum_neg_;
        for (const feature &f : z.features) {
            if (f.index >= sum.size()) {
                throw invalid_parameter{ "feature index " + std::to_string(f.index) + " exceeds the statistics dimension " + std::to_string(sum.size()) };
            }
        }
        axpy(1.0, z.features, sum);
        ++t_;
        if (z.positive()) {
            ++n_pos_;
        }
    }

    [[nodiscard]] std::size_t t() const noexcept { return t_; }
    [[nodiscard]] std::size_t n_pos() const noexcept { return n_pos_; }
    [[nodiscard]] std::size_t n_neg() const noexcept { return t_ - n_pos_; }
    [[nodiscard]] std::size_t dim() const noexcept { return sum_pos_.size(); }
    [[nodiscard]] bool ready() const noexcept { return n_pos_ >= 1 && n_neg() >= 1; }
    [[nodiscard]] const dense_vector &sum_pos() const noexcept { return sum_pos_; }
    [[nodiscard]] const dense_vector &sum_neg() const noexcept { return sum_neg_; }

    /// Writes the snapshot into @p out, reusing its storage. O(d).
    void snapshot_into(stats_snapshot &out) const {
        const std::size_t d = dim();
        out.p = t_ == 0 ? 0.0 : static_cast<real_type>(n_pos_) / static_cast<real_type>(t_);
        out.ready = ready();
        out.u.assign(d, 0.0);
        out.v.assign(d, 0.0);
        if (n_pos_ > 0) {
            const real_type inv = 1.0 / static_cast<real_type>(n_pos_);
            for (std::size_t j = 0; j < d; ++j) {
                out.u[j] = sum_pos_[j] * inv;
            }
        }
        if (n_neg() > 0) {
            const real_type inv = 1.0 / static_cast<real_type>(n_neg());
            for (std::size_t j = 0; j < d; ++j) {
                out.v[j] = sum_neg_[j] * inv;
            }
        }
    }

    [[nodiscard]] stats_snapshot snapshot() const {
        stats_snapshot out;
        snapshot_into(out);
        return out;
    }

  private:
    std::size_t t_{ 0 };
    std::size_t n_pos_{ 0 };
    dense_vector sum_pos_{};
    dense_vector sum_neg_{};
};

/// Moments over a whole dataset.
[[nodiscard]] inline stats_snapshot exact_snapshot(const dataset &data) {
    require_both_classes(data, "exact_snapshot");
    class_stats stats{ data.dim() };
    for (const example &z : data.examples()) {
        stats.update(z);
    }
    return stats.snapshot();
}

/// max{1, max_i ||x_i||_2}
[[nodiscard]] inline real_type kappa_of(const dataset &data) noexcept {
    real_type best = 1.0;
    for (const example &z : data.examples()) {
        best = std::max(best, std::sqrt(squared_norm(z.features)));
    }
    return best;
}

}  // namespace spauc
