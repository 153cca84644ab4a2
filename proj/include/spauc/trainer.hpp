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

/**
 * @file
 * @brief Stochastic proximal AUC maximization over a stream of examples, and the shared streaming driver
 *        used by every algorithm in the library.
 */

#pragma once

#include "spauc/class_stats.hpp"
#include "spauc/common.hpp"
#include "spauc/data_io.hpp"
#include "spauc/metrics.hpp"
#include "spauc/objective.hpp"
#include "spauc/regularizers.hpp"
#include "spauc/schedules.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spauc {

class diverged_error : public error {
  public:
    diverged_error(std::int64_t iteration, dense_vector last_finite_w) :
        error("training diverged at iteration " + std::to_string(iteration) + " (non-finite gradient or weight)"),
        iteration_{ iteration },
        last_w_{ std::move(last_finite_w) } {}

    [[nodiscard]] std::int64_t iteration() const noexcept { return iteration_; }
    [[nodiscard]] const dense_vector &last_finite_weights() const noexcept { return last_w_; }

  private:
    std::int64_t iteration_;
    dense_vector last_w_;
};

enum class averaging { last, avg1, avg2 };

[[nodiscard]] inline std::string_view to_string(averaging a) noexcept {
    switch (a) {
        case averaging::last:
            return "last";
        case averaging::avg1:
            return "avg1";
        case averaging::avg2:
            return "avg2";
    }
    return "last";
}

[[nodiscard]] inline averaging averaging_from_string(std::string_view s) {
    if (s == "last") {
        return averaging::last;
    }
    if (s == "avg1") {
        return averaging::avg1;
    }
    if (s == "avg2") {
        return averaging::avg2;
    }
    throw invalid_parameter{ "unknown averaging '" + std::string{ s } + "' (expected last, avg1 or avg2)" };
}

struct train_config {
    regularizer reg{};
    schedule sched{ schedule::practical(1e-2) };
    int epochs{ 1 };
    std::uint64_t seed{ 0 };
    averaging average{ averaging::last };
    std::int64_t eval_every{ 1000 };
    /// Offset in the avg2 weights k + t1 + 1. Unset: the fastrate schedule's t1, otherwise 0.
    std::optional<real_type> t1{};

    [[nodiscard]] real_type avg2_offset() const noexcept {
        if (t1.has_value()) {
            return *t1;
        }
        return sched.kind() == schedule::kind_type::fastrate ? sched.t1() : 0.0;
    }

    void validate() const {
        if (epochs < 1) {
            throw invalid_parameter{ "epochs must be >= 1" };
        }
        if (eval_every < 1) {
            throw invalid_parameter{ "eval_every must be >= 1" };
        }
    }
};

/**
 * @brief Running weighted averages of the iterates w_1, w_2, ... at which steps were taken.
 *
 *   avg1 = sum_k eta_k w_k / sum_k eta_k
 *   avg2 = sum_k (k + t1 + 1) w_k / sum_k (k + t1 + 1)
 */
struct iterate_averages {
    dense_vector avg1_num{};
    real_type avg1_den{ 0.0 };
    dense_vector avg2_num{};
    real_type avg2_den{ 0.0 };

    explicit iterate_averages(std::size_t dim = 0) :
        avg1_num(dim, 0.0),
        avg2_num(dim, 0.0) {}

    /// Accounts for step @p k (1-based) taken from iterate @p w with step size @p eta.
    void add(std::span<const real_type> w, std::int64_t k, real_type eta, real_type t1) noexcept {
        const real_type weight2 = static_cast<real_type>(k) + t1 + 1.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            avg1_num[j] += eta * w[j];
            avg2_num[j] += weight2 * w[j];
        }
        avg1_den += eta;
        avg2_den += weight2;
    }

    [[nodiscard]] dense_vector avg1() const { return divided(avg1_num, avg1_den); }
    [[nodiscard]] dense_vector avg2() const { return divided(avg2_num, avg2_den); }

  private:
    static dense_vector divided(const dense_vector &num, real_type den) {
        dense_vector out(num.size(), 0.0);
        if (den > 0.0) {
            for (std::size_t j = 0; j < num.size(); ++j) {
                out[j] = num[j] / den;
            }
        }
        return out;
    }
};

/// Iterate selected by @p which; averages with no steps behind them fall back to the current iterate.
[[nodiscard]] inline dense_vector select_iterate(const dense_vector &w, const iterate_averages &avg, averaging which) {
    switch (which) {
        case averaging::last:
            return w;
        case averaging::avg1:
            return avg.avg1_den > 0.0 ? avg.avg1() : w;
        case averaging::avg2:
            return avg.avg2_den > 0.0 ? avg.avg2() : w;
    }
    return w;
}

/// Learner state. w starts at 0.
struct trainer_state {
    dense_vector w{};
    std::int64_t t{ 0 };
    class_stats stats{};
    iterate_averages averages{};

    // scratch, reused across steps
    stats_snapshot snap{};
    dense_vector grad{};
    dense_vector next{};

    trainer_state() = default;

    explicit trainer_state(std::size_t dim) :
        w(dim, 0.0),
        stats(dim),
        averages(dim),
        grad(dim, 0.0),
        next(dim, 0.0) {}

    [[nodiscard]] std::size_t dim() const noexcept { return w.size(); }
    [[nodiscard]] std::int64_t steps() const noexcept { return t; }
    [[nodiscard]] dense_vector model(averaging which) const { return select_iterate(w, averages, which); }
};

/**
 * @brief One arrival of the stream.
 *
 * Until both classes have been seen the example only feeds the statistics. Otherwise the gradient is taken
 * against the statistics of the strictly earlier examples, a proximal step is made, and only then is the
 * example absorbed.
 */
inline void spauc_step(trainer_state &state, const example &z, const train_config &config) {
    if (!state.stats.ready()) {
        state.stats.update(z);
        return;
    }
    const std::int64_t k = state.t + 1;
    const real_type eta = config.sched.step_size(k);

    state.stats.snapshot_into(state.snap);
    surrogate_grad(state.w, z, state.snap, state.grad);
    if (!all_finite(state.grad)) {
        throw diverged_error{ k, state.w };
    }
    const std::size_t d = state.dim();
    for (std::size_t j = 0; j < d; ++j) {
        state.next[j] = state.w[j] - eta * state.grad[j];
    }
    config.reg.prox_in_place(state.next, eta);
    if (!all_finite(state.next)) {
        throw diverged_error{ k, state.w };
    }

    state.averages.add(state.w, k, eta, config.avg2_offset());
    std::swap(state.w, state.next);
    state.stats.update(z);
    state.t = k;
}

//*************************************************************************************************************************************//
//                                                          streaming driver                                                           //
//*************************************************************************************************************************************//

struct trace_record {
    std::int64_t iter{ 0 };
    double elapsed_sec{ 0.0 };
    std::optional<double> test_auc{};
    std::optional<double> objective{};

    friend bool operator==(const trace_record &, const trace_record &) = default;
};

/// What to evaluate at each trace point. Evaluation time is excluded from elapsed_sec.
struct trace_options {
    const dataset *test{ nullptr };
    const dataset *objective_data{ nullptr };
};

struct train_result {
    dense_vector model{};
    std::vector<trace_record> trace{};
    std::int64_t steps{ 0 };
    double elapsed_sec{ 0.0 };        // algorithm time including preprocessing
    double preprocessing_sec{ 0.0 };  // e.g. a full-data moment pass
};

namespace detail {

inline trace_record evaluate_point(std::int64_t iter, double elapsed, const dense_vector &model, const trace_options &opts) {
    trace_record rec{ iter, elapsed, std::nullopt, std::nullopt };
    if (opts.test != nullptr && opts.test->has_both_classes()) {
        rec.test_auc = auc(model, *opts.test);
    }
    if (opts.objective_data != nullptr && opts.objective_data->has_both_classes()) {
        rec.objective = pairwise_objective_fast(model, *opts.objective_data);
    }
    return rec;
}

}  // namespace detail

/**
 * @brief Streams config.epochs passes over @p data through @p step.
 *
 * State must expose steps() and model(averaging). A trace row is written at iteration 0, every eval_every
 * steps and after the final step. The clock starts before @p prepare runs so its cost is part of the curve.
 */
template <typename State, typename Prepare, typename Step>
[[nodiscard]] train_result run_stream(const dataset &data, const train_config &config, const trace_options &opts, Prepare &&prepare, Step &&step) {
    using clock = std::chrono::steady_clock;
    config.validate();
    require_both_classes(data, "train");

    const auto start = clock::now();
    State state = prepare();
    const double prep = std::chrono::duration<double>(clock::now() - start).count();

    // time spent in evaluation is subtracted from the elapsed column
    double excluded = 0.0;
    const auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count() - excluded; };

    train_result result;
    result.preprocessing_sec = prep;
    const auto record = [&](std::int64_t iter) {
        const double at = elapsed();
        const auto eval_start = clock::now();
        result.trace.push_back(detail::evaluate_point(iter, at, state.model(config.average), opts));
        excluded += std::chrono::duration<double>(clock::now() - eval_start).count();
    };

    record(0);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (const std::size_t i : stream_order(data, static_cast<std::uint64_t>(epoch), config.seed)) {
            const std::int64_t before = state.steps();
            step(state, data[i]);
            if (state.steps() != before && state.steps() % config.eval_every == 0) {
                record(state.steps());
            }
        }
    }
    if (result.trace.back().iter != state.steps()) {
        record(state.steps());
    }
    result.elapsed_sec = elapsed();
    result.steps = state.steps();
    result.model = state.model(config.average);
    return result;
}

/// Runs SPAUC on @p data and returns the iterate chosen by config.average with its trace.
[[nodiscard]] inline train_result train(const dataset &data, const train_config &config, const trace_options &opts = {}) {
    return run_stream<trainer_state>(
        data, config, opts, [&] { return trainer_state{ data.dim() }; }, [&](trainer_state &s, const example &z) { spauc_step(s, z, config); });
}

}  // namespace spauc
