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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace spauc {

/**
 * @brief Step-size sequences, evaluated at a 1-based iteration index.
 *
 *   poly       eta1 * t^-theta                                 theta in (1/2, 1]
 *   logdamped  eta1 * (t * ln(e t)^beta)^-1/2                  beta > 2
 *   fastrate   2 / (sigma_phi t + 2 sigma_f + sigma_phi t1)
 *   practical  2 / (mu t + 1)
 *
 * Every kind is non-increasing in t. An optional cap bounds all values from above.
 */
class schedule {
  public:
    enum class kind_type { poly, logdamped, fastrate, practical };

    [[nodiscard]] static schedule poly(real_type eta1, real_type theta) {
        require(eta1 > 0.0 && std::isfinite(eta1), "poly schedule needs eta1 > 0");
        require(theta > 0.5 && theta <= 1.0, "poly schedule needs theta in (1/2, 1]");
        schedule s{ kind_type::poly };
        s.eta1_ = eta1;
        s.theta_ = theta;
        return s;
    }

    [[nodiscard]] static schedule logdamped(real_type eta1, real_type beta) {
        require(eta1 > 0.0 && std::isfinite(eta1), "logdamped schedule needs eta1 > 0");
        require(beta > 2.0 && std::isfinite(beta), "logdamped schedule needs beta > 2");
        schedule s{ kind_type::logdamped };
        s.eta1_ = eta1;
        s.beta_ = beta;
        return s;
    }

    [[nodiscard]] static schedule fastrate(real_type sigma_phi, real_type sigma_f, real_type t1) {
        require(sigma_phi > 0.0 && std::isfinite(sigma_phi), "fastrate schedule needs sigma_phi > 0");
        require(sigma_f >= 0.0 && std::isfinite(sigma_f), "fastrate schedule needs sigma_f >= 0");
        require(t1 >= 0.0 && std::isfinite(t1), "fastrate schedule needs t1 >= 0");
        schedule s{ kind_type::fastrate };
        s.sigma_phi_ = sigma_phi;
        s.sigma_f_ = sigma_f;
        s.t1_ = t1;
        return s;
    }

    [[nodiscard]] static schedule practical(real_type mu) {
        require(mu > 0.0 && std::isfinite(mu), "practical schedule needs mu > 0");
        schedule s{ kind_type::practical };
        s.mu_ = mu;
        return s;
    }

    [[nodiscard]] real_type step_size(std::int64_t t) const {
        if (t < 1) {
            throw invalid_parameter{ "step index must be >= 1" };
        }
        const auto tt = static_cast<real_type>(t);
        real_type eta = 0.0;
        switch (kind_) {
            case kind_type::poly:
                eta = eta1_ * std::pow(tt, -theta_);
                break;
            case kind_type::logdamped:
                eta = eta1_ / std::sqrt(tt * std::pow(std::log(std::exp(1.0) * tt), beta_));
                break;
            case kind_type::fastrate:
                eta = 2.0 / (sigma_phi_ * tt + 2.0 * sigma_f_ + sigma_phi_ * t1_);
                break;
            case kind_type::practical:
                eta = 2.0 / (mu_ * tt + 1.0);
                break;
        }
        return std::min(eta, cap_);
    }

    /**
     * @brief Bounds the schedule by 1 / (2 max{A1, 16 kappa^2}).
     *
     * Poly and logdamped lower eta1 (their value at t = 1); the other kinds get a cap on every value.
     * Schedules already below the bound come back unchanged.
     */
    [[nodiscard]] schedule clamp_for_theory(real_type a1, real_type kappa) const {
        if (!(kappa >= 1.0)) {
            throw invalid_parameter{ "kappa must be >= 1" };
        }
        const real_type bound = theory_step_bound(a1, kappa);
        schedule out = *this;
        switch (kind_) {
            case kind_type::poly:
            case kind_type::logdamped:
                out.eta1_ = std::min(eta1_, bound);
                break;
            case kind_type::fastrate:
            case kind_type::practical:
                out.cap_ = std::min(cap_, bound);
                break;
        }
        return out;
    }

    /// Copy with every value bounded by @p cap.
    [[nodiscard]] schedule with_cap(real_type cap) const {
        require(cap > 0.0, "step-size cap must be positive");
        schedule out = *this;
        out.cap_ = std::min(cap_, cap);
        return out;
    }

    [[nodiscard]] static real_type theory_step_bound(real_type a1, real_type kappa) noexcept {
        return 1.0 / (2.0 * std::max(a1, 16.0 * kappa * kappa));
    }

    /// t1 >= 32 C1 / sigma_phi * log(2T / delta), rounded up.
    [[nodiscard]] static real_type default_t1(real_type a1, real_type kappa, real_type sigma_phi, std::int64_t planned_steps, real_type delta = 0.01) {
        require(sigma_phi > 0.0, "sigma_phi must be positive");
        require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
        require(planned_steps >= 1, "planned number of steps must be >= 1");
        const real_type c1 = std::max(a1, 16.0 * kappa * kappa);
        return std::ceil(32.0 * c1 / sigma_phi * std::log(2.0 * static_cast<real_type>(planned_steps) / delta));
    }

    [[nodiscard]] kind_type kind() const noexcept { return kind_; }
    [[nodiscard]] real_type eta1() const noexcept { return eta1_; }
    [[nodiscard]] real_type theta() const noexcept { return theta_; }
    [[nodiscard]] real_type beta() const noexcept { return beta_; }
    [[nodiscard]] real_type sigma_phi() const noexcept { return sigma_phi_; }
    [[nodiscard]] real_type sigma_f() const noexcept { return sigma_f_; }
    [[nodiscard]] real_type t1() const noexcept { return t1_; }
    [[nodiscard]] real_type mu() const noexcept { return mu_; }
    [[nodiscard]] real_type cap() const noexcept { return cap_; }

    [[nodiscard]] std::string name() const {
        switch (kind_) {
            case kind_type::poly:
                return "poly";
            case kind_type::logdamped:
                return "logdamped";
            case kind_type::fastrate:
                return "fastrate";
            case kind_type::practical:
                return "practical";
        }
        return "practical";
    }

    friend bool operator==(const schedule &, const schedule &) = default;

  private:
    explicit schedule(kind_type kind) noexcept :
        kind_{ kind } {}

    static void require(bool ok, const char *what) {
        if (!ok) {
            throw invalid_parameter{ what };
        }
    }

    kind_type kind_;
    real_type eta1_{ 0.0 };
    real_type theta_{ 0.0 };
    real_type beta_{ 0.0 };
    real_type sigma_phi_{ 0.0 };
    real_type sigma_f_{ 0.0 };
    real_type t1_{ 0.0 };
    real_type mu_{ 0.0 };
    real_type cap_{ std::numeric_limits<real_type>::infinity() };
};

}  // namespace spauc
