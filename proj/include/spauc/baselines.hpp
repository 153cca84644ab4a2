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
 * @brief Comparison learners built on the saddle-point form of the objective.
 *
 * spam   proximal SGD with (a, b, alpha) at their closed-form optima a = w'u, b = w'v, alpha = b - a,
 *        using class moments computed from the full training set before streaming starts.
 * solam  primal-dual SGD: descent on (w, a, b), ascent on alpha, with w kept in an l2 ball of radius R.
 *        a and b are kept in [-kappa R, kappa R] and alpha in [-2 kappa R, 2 kappa R], since
 *        |w'E[x|y]| <= kappa ||w|| at the optimum. Primal and dual share one step size.
 */

#pragma once

#include "spauc/class_stats.hpp"
#include "spauc/common.hpp"
#include "spauc/data_io.hpp"
#include "spauc/objective.hpp"
#include "spauc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

namespace spauc {

struct spam_state {
    dense_vector w{};
    std::int64_t t{ 0 };
    stats_snapshot moments{};
    iterate_averages averages{};

    saddle_gradient grad{};
    dense_vector next{};

    spam_state() = default;

    explicit spam_state(stats_snapshot exact) :
        w(exact.u.size(), 0.0),
        moments{ std::move(exact) },
        averages(moments.u.size()),
        next(moments.u.size(), 0.0) {
        moments.require_ready("spam_state");
    }

    [[nodiscard]] std::size_t dim() const noexcept { return w.size(); }
    [[nodiscard]] std::int64_t steps() const noexcept { return t; }
    [[nodiscard]] dense_vector model(averaging which) const { return select_iterate(w, averages, which); }
};

inline void spam_step(spam_state &state, const example &z, const regularizer &reg, const schedule &sched, real_type avg2_offset = 0.0) {
    const std::int64_t k = state.t + 1;
    const real_type eta = sched.step_size(k);
    const real_type a = dot(state.w, state.moments.u);
    const real_type b = dot(state.w, state.moments.v);
    saddle_grad(state.w, a, b, b - a, z, state.moments, state.grad);
    if (!all_finite(state.grad.gw)) {
        throw diverged_error{ k, state.w };
    }
    for (std::size_t j = 0; j < state.dim(); ++j) {
        state.next[j] = state.w[j] - eta * state.grad.gw[j];
    }
    reg.prox_in_place(state.next, eta);
    if (!all_finite(state.next)) {
        throw diverged_error{ k, state.w };
    }
    state.averages.add(state.w, k, eta, avg2_offset);
    std::swap(state.w, state.next);
    state.t = k;
}

struct solam_state {
    dense_vector w{};
    real_type a{ 0.0 };
    real_type b{ 0.0 };
    real_type alpha{ 0.0 };
    std::int64_t t{ 0 };
    class_stats stats{};
    real_type radius{ std::numeric_limits<real_type>::infinity() };
    real_type kappa{ 1.0 };
    iterate_averages averages{};

    stats_snapshot snap{};
    saddle_gradient grad{};

    solam_state() = default;

    solam_state(std::size_t dim, real_type radius_, real_type kappa_) :
        w(dim, 0.0),
        stats(dim),
        radius{ radius_ },
        kappa{ kappa_ },
        averages(dim) {
        if (!(radius > 0.0)) {
            throw invalid_parameter{ "SOLAM radius must be positive" };
        }
        if (!(kappa >= 1.0)) {
            throw invalid_parameter{ "kappa must be >= 1" };
        }
    }

    [[nodiscard]] std::size_t dim() const noexcept { return w.size(); }
    [[nodiscard]] std::int64_t steps() const noexcept { return t; }
    [[nodiscard]] dense_vector model(averaging which) const { return select_iterate(w, averages, which); }
};

/// Euclidean projection onto the ball of radius r; a no-op for r = inf.
inline void project_l2_ball(std::span<real_type> w, real_type r) noexcept {
    if (!std::isfinite(r)) {
        return;
    }
    const real_type norm = std::sqrt(squared_norm(std::span<const real_type>{ w }));
    if (norm > r) {
        const real_type scale = r / norm;
        for (real_type &x : w) {
            x *= scale;
        }
    }
}

/// Same warm-up policy as SPAUC: no step until both classes have been observed.
inline void solam_step(solam_state &state, const example &z, const schedule &sched, real_type avg2_offset = 0.0) {
    if (!state.stats.ready()) {
        state.stats.update(z);
        return;
    }
    const std::int64_t k = state.t + 1;
    const real_type eta = sched.step_size(k);

    // only p enters the saddle gradient
    state.snap.p = static_cast<real_type>(state.stats.n_pos()) / static_cast<real_type>(state.stats.t());
    state.snap.ready = true;
    saddle_grad(state.w, state.a, state.b, state.alpha, z, state.snap, state.grad);
    if (!all_finite(state.grad.gw) || !std::isfinite(state.grad.ga) || !std::isfinite(state.grad.gb) || !std::isfinite(state.grad.galpha)) {
        throw diverged_error{ k, state.w };
    }
    state.averages.add(state.w, k, eta, avg2_offset);

    axpy(-eta, std::span<const real_type>{ state.grad.gw }, state.w);
    project_l2_ball(state.w, state.radius);
    const real_type ab_bound = state.kappa * state.radius;
    state.a = std::clamp(state.a - eta * state.grad.ga, -ab_bound, ab_bound);
    state.b = std::clamp(state.b - eta * state.grad.gb, -ab_bound, ab_bound);
    state.alpha = std::clamp(state.alpha + eta * state.grad.galpha, -2.0 * ab_bound, 2.0 * ab_bound);
    if (!all_finite(state.w) || !std::isfinite(state.a) || !std::isfinite(state.b) || !std::isfinite(state.alpha)) {
        throw diverged_error{ k, state.w };
    }
    state.stats.update(z);
    state.t = k;
}

enum class algorithm { spauc, spam, solam };

[[nodiscard]] inline std::string_view to_string(algorithm a) noexcept {
    switch (a) {
        case algorithm::spauc:
            return "spauc";
        case algorithm::spam:
            return "spam";
        case algorithm::solam:
            return "solam";
    }
    return "spauc";
}

/// Parses an algorithm name. Names of known but unavailable methods get a dedicated message.
[[nodiscard]] inline algorithm algorithm_from_string(std::string_view s) {
    if (s == "spauc") {
        return algorithm::spauc;
    }
    if (s == "spam") {
        return algorithm::spam;
    }
    if (s == "solam") {
        return algorithm::solam;
    }
    if (s == "opauc" || s == "oam" || s == "oam_gra" || s == "fsauc") {
        throw invalid_parameter{ "algorithm '" + std::string{ s } + "' is a known comparison method but is not implemented; available: spauc, spam, solam" };
    }
    throw invalid_parameter{ "unknown algorithm '" + std::string{ s } + "'; available: spauc, spam, solam (opauc, oam, fsauc are not implemented)" };
}

struct solam_options {
    real_type radius{ std::numeric_limits<real_type>::infinity() };
};

/// SPAM timing includes the full-data moment pass.
[[nodiscard]] inline train_result run_baseline(algorithm algo, const dataset &data, const train_config &config, const trace_options &opts = {}, const solam_options &solam = {}) {
    const real_type offset = config.avg2_offset();
    switch (algo) {
        case algorithm::spauc:
            return train(data, config, opts);
        case algorithm::spam:
            return run_stream<spam_state>(
                data, config, opts, [&] { return spam_state{ exact_snapshot(data) }; },
                [&](spam_state &s, const example &z) { spam_step(s, z, config.reg, config.sched, offset); });
        case algorithm::solam: {
            const real_type kappa = kappa_of(data);
            return run_stream<solam_state>(
                data, config, opts, [&] { return solam_state{ data.dim(), solam.radius, kappa }; },
                [&](solam_state &s, const example &z) { solam_step(s, z, config.sched, offset); });
        }
    }
    throw invalid_parameter{ "unknown algorithm" };
}

}  // namespace spauc
