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
 * @brief The least-squares pairwise AUC surrogate: per-sample convex estimator and its gradient, the
 *        saddle-point form used by the baselines, and two evaluators of the empirical pairwise objective.
 *
 * For a snapshot (p, u, v) and an example z = (x, y), the per-sample surrogate is
 *
 *     F(w; z) = (1-p) (w'(x-u))^2 [y=1] + p (w'(x-v))^2 [y=-1]
 *             + 2p(1-p) w'(v-u) + p(1-p) (w'(v-u))^2 + p(1-p).
 *
 * With the running snapshot it is the streaming estimator; with exact moments its mean over the
 * distribution is the pairwise objective f(w) = p(1-p) E[(1 - w'(x - x'))^2 | y=1, y'=-1].
 *
 * All gradients are formed from inner products and scaled vector additions. Nothing d x d is built.
 */

#pragma once

#include "spauc/class_stats.hpp"
#include "spauc/common.hpp"
#include "spauc/data_io.hpp"

#include <span>
#include <vector>

namespace spauc {

namespace detail {

struct surrogate_terms {
    real_type wx;
    real_type wu;
    real_type wv;
};

[[nodiscard]] inline surrogate_terms inner_products(std::span<const real_type> w, const example &z, const stats_snapshot &s) noexcept {
    return { dot(w, z.features), dot(w, s.u), dot(w, s.v) };
}

}  // namespace detail

[[nodiscard]] inline real_type surrogate_value(std::span<const real_type> w, const example &z, const stats_snapshot &s) {
    s.require_ready("surrogate_value");
    const auto [wx, wu, wv] = detail::inner_products(w, z, s);
    const real_type p = s.p;
    const real_type q = p * (1.0 - p);
    const real_type margin = wv - wu;
    const real_type own = z.positive() ? (1.0 - p) * (wx - wu) * (wx - wu) : p * (wx - wv) * (wx - wv);
    return own + 2.0 * q * margin + q * margin * margin + q;
}

/// Same formula as surrogate_value. Named separately for call sites that pass exact moments.
[[nodiscard]] inline real_type tilde_value(std::span<const real_type> w, const example &z, const stats_snapshot &exact) {
    return surrogate_value(w, z, exact);
}

/// Gradient of surrogate_value with respect to w, written into @p out (size d). O(d + nnz(x)).
inline void surrogate_grad(std::span<const real_type> w, const example &z, const stats_snapshot &s, std::span<real_type> out) {
    s.require_ready("surrogate_grad");
    const auto [wx, wu, wv] = detail::inner_products(w, z, s);
    const real_type p = s.p;
    const real_type q = p * (1.0 - p);
    const std::size_t d = out.size();

    // own-class term: c (x - m) with m the mean of z's class
    const real_type c = z.positive() ? 2.0 * (1.0 - p) * (wx - wu) : 2.0 * p * (wx - wv);
    const dense_vector &m = z.positive() ? s.u : s.v;
    // cross term: e (v - u)
    const real_type e = 2.0 * q * (1.0 + (wv - wu));
    for (std::size_t j = 0; j < d; ++j) {
        out[j] = -c * m[j] + e * (s.v[j] - s.u[j]);
    }
    axpy(c, z.features, out);
}

[[nodiscard]] inline dense_vector surrogate_grad(std::span<const real_type> w, const example &z, const stats_snapshot &s) {
    dense_vector g(w.size(), 0.0);
    surrogate_grad(w, z, s, g);
    return g;
}

//*************************************************************************************************************************************//
//                                                      empirical pairwise objective                                                   //
//*************************************************************************************************************************************//

/// p(1-p) times the mean over all (positive, negative) pairs of (1 - w'(x_i - x_j))^2. O(n+ n- + n nnz).
[[nodiscard]] inline real_type pairwise_objective_bruteforce(std::span<const real_type> w, const dataset &data) {
    require_both_classes(data, "pairwise_objective_bruteforce");
    std::vector<real_type> pos;
    std::vector<real_type> neg;
    for (const example &z : data.examples()) {
        (z.positive() ? pos : neg).push_back(dot(w, z.features));
    }
    real_type total = 0.0;
    for (const real_type a : pos) {
        for (const real_type b : neg) {
            const real_type r = 1.0 - (a - b);
            total += r * r;
        }
    }
    const auto n = static_cast<real_type>(data.size());
    const real_type p = static_cast<real_type>(pos.size()) / n;
    return p * (1.0 - p) * total / (static_cast<real_type>(pos.size()) * static_cast<real_type>(neg.size()));
}

/// Same value as the brute-force evaluator, from per-class first and second moments of the scores. O(n nnz).
[[nodiscard]] inline real_type pairwise_objective_fast(std::span<const real_type> w, const dataset &data) {
    require_both_classes(data, "pairwise_objective_fast");
    real_type s_pos = 0.0;
    real_type s2_pos = 0.0;
    real_type s_neg = 0.0;
    real_type s2_neg = 0.0;
    for (const example &z : data.examples()) {
        const real_type s = dot(w, z.features);
        if (z.positive()) {
            s_pos += s;
            s2_pos += s * s;
        } else {
            s_neg += s;
            s2_neg += s * s;
        }
    }
    const auto np = static_cast<real_type>(data.n_pos());
    const auto nn = static_cast<real_type>(data.n_neg());
    const real_type mu_pos = s_pos / np;
    const real_type mu_neg = s_neg / nn;
    const real_type m_pos = s2_pos / np;
    const real_type m_neg = s2_neg / nn;
    const real_type p = np / (np + nn);
    return p * (1.0 - p) * (1.0 - 2.0 * (mu_pos - mu_neg) + m_pos - 2.0 * mu_pos * mu_neg + m_neg);
}

//*************************************************************************************************************************************//
//                                                          saddle-point form                                                          //
//*************************************************************************************************************************************//

/**
 * F(w, a, b, alpha; z) = p(1-p) + (1-p)(w'x - a)^2 [y=1] + p(w'x - b)^2 [y=-1]
 *                      + 2(1 + alpha) w'x (p[y=-1] - (1-p)[y=1]) - p(1-p) alpha^2
 */
[[nodiscard]] inline real_type saddle_value(std::span<const real_type> w, real_type a, real_type b, real_type alpha, const example &z, const stats_snapshot &s) {
    s.require_ready("saddle_value");
    const real_type p = s.p;
    const real_type wx = dot(w, z.features);
    const real_type sign = z.positive() ? -(1.0 - p) : p;
    const real_type own = z.positive() ? (1.0 - p) * (wx - a) * (wx - a) : p * (wx - b) * (wx - b);
    return p * (1.0 - p) + own + 2.0 * (1.0 + alpha) * wx * sign - p * (1.0 - p) * alpha * alpha;
}

struct saddle_gradient {
    dense_vector gw;
    real_type ga{ 0.0 };
    real_type gb{ 0.0 };
    real_type galpha{ 0.0 };
};

inline void saddle_grad(std::span<const real_type> w, real_type a, real_type b, real_type alpha, const example &z, const stats_snapshot &s, saddle_gradient &out) {
    s.require_ready("saddle_grad");
    const real_type p = s.p;
    const real_type wx = dot(w, z.features);
    const real_type sign = z.positive() ? -(1.0 - p) : p;
    real_type coef = 2.0 * (1.0 + alpha) * sign;
    out.ga = 0.0;
    out.gb = 0.0;
    if (z.positive()) {
        coef += 2.0 * (1.0 - p) * (wx - a);
        out.ga = -2.0 * (1.0 - p) * (wx - a);
    } else {
        coef += 2.0 * p * (wx - b);
        out.gb = -2.0 * p * (wx - b);
    }
    out.galpha = 2.0 * wx * sign - 2.0 * p * (1.0 - p) * alpha;
    out.gw.assign(w.size(), 0.0);
    axpy(coef, z.features, out.gw);
}

[[nodiscard]] inline saddle_gradient saddle_grad(std::span<const real_type> w, real_type a, real_type b, real_type alpha, const example &z, const stats_snapshot &s) {
    saddle_gradient out;
    saddle_grad(w, a, b, alpha, z, s, out);
    return out;
}

}  // namespace spauc
