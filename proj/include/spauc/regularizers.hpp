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

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace spauc {

/**
 * @brief Penalty term with its proximal map and self-bounding constants.
 *
 * The L2 penalty is lambda * ||w||_2^2 with no 1/2 factor, so that ||grad||^2 = 4 lambda Omega(w).
 * A penalty written as lambda/2 ||w||^2 corresponds to l2(lambda / 2).
 */
class regularizer {
  public:
    enum class kind_type { none, l2, l1 };

    regularizer() = default;

    [[nodiscard]] static regularizer none() noexcept { return {}; }
    [[nodiscard]] static regularizer l2(real_type lambda) { return { kind_type::l2, checked(lambda) }; }
    [[nodiscard]] static regularizer l1(real_type lambda) { return { kind_type::l1, checked(lambda) }; }

    [[nodiscard]] kind_type kind() const noexcept { return kind_; }
    [[nodiscard]] real_type lambda() const noexcept { return lambda_; }

    // constants of ||Omega'(w)||^2 <= A1 Omega(w) + A2
    [[nodiscard]] real_type a1() const noexcept { return kind_ == kind_type::l2 ? 4.0 * lambda_ : 0.0; }
    /// For l1 the subgradient lambda sign(w) has squared norm lambda^2 ||w||_0, so A2 grows with the dimension.
    [[nodiscard]] real_type a2(std::size_t dim = 1) const noexcept { return kind_ == kind_type::l1 ? static_cast<real_type>(dim) * lambda_ * lambda_ : 0.0; }
    /// strong-convexity modulus
    [[nodiscard]] real_type sigma_omega() const noexcept { return kind_ == kind_type::l2 ? 2.0 * lambda_ : 0.0; }

    [[nodiscard]] real_type value(std::span<const real_type> w) const noexcept {
        real_type s = 0.0;
        switch (kind_) {
            case kind_type::none:
                return 0.0;
            case kind_type::l2:
                for (const real_type x : w) {
                    s += x * x;
                }
                return lambda_ * s;
            case kind_type::l1:
                for (const real_type x : w) {
                    s += std::abs(x);
                }
                return lambda_ * s;
        }
        return 0.0;
    }

    /// sign(0) = 0 for L1.
    void subgradient(std::span<const real_type> w, std::span<real_type> out) const noexcept {
        for (std::size_t j = 0; j < w.size(); ++j) {
            switch (kind_) {
                case kind_type::none:
                    out[j] = 0.0;
                    break;
                case kind_type::l2:
                    out[j] = 2.0 * lambda_ * w[j];
                    break;
                case kind_type::l1:
                    out[j] = w[j] > 0.0 ? lambda_ : (w[j] < 0.0 ? -lambda_ : 0.0);
                    break;
            }
        }
    }

    [[nodiscard]] dense_vector subgradient(std::span<const real_type> w) const {
        dense_vector out(w.size());
        subgradient(w, out);
        return out;
    }

    /// In place: v <- argmin_x eta Omega(x) + 1/2 ||x - v||^2
    void prox_in_place(std::span<real_type> v, real_type eta) const {
        if (!(eta > 0.0)) {
            throw invalid_parameter{ "proximal step size must be positive" };
        }
        switch (kind_) {
            case kind_type::none:
                return;
            case kind_type::l2: {
                const real_type scale = 1.0 / (1.0 + 2.0 * eta * lambda_);
                for (real_type &x : v) {
                    x *= scale;
                }
                return;
            }
            case kind_type::l1: {
                const real_type thr = eta * lambda_;
                for (real_type &x : v) {
                    const real_type mag = std::abs(x) - thr;
                    x = mag > 0.0 ? std::copysign(mag, x) : 0.0;
                }
                return;
            }
        }
    }

    [[nodiscard]] dense_vector prox(std::span<const real_type> v, real_type eta) const {
        dense_vector out(v.begin(), v.end());
        prox_in_place(out, eta);
        return out;
    }

    [[nodiscard]] std::string name() const {
        switch (kind_) {
            case kind_type::none:
                return "none";
            case kind_type::l2:
                return "l2";
            case kind_type::l1:
                return "l1";
        }
        return "none";
    }

    /// Builds a regularizer from its CLI spelling. Lambda is ignored for "none".
    [[nodiscard]] static regularizer from_name(std::string_view name, real_type lambda) {
        if (name == "none") {
            return none();
        }
        if (name == "l2") {
            return l2(lambda);
        }
        if (name == "l1") {
            return l1(lambda);
        }
        throw invalid_parameter{ "unknown regularizer '" + std::string{ name } + "' (expected none, l2 or l1)" };
    }

  private:
    regularizer(kind_type kind, real_type lambda) noexcept :
        kind_{ kind },
        lambda_{ lambda } {}

    static real_type checked(real_type lambda) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw invalid_parameter{ "regularization parameter lambda must be positive and finite" };
        }
        return lambda;
    }

    kind_type kind_{ kind_type::none };
    real_type lambda_{ 0.0 };
};

}  // namespace spauc
