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
#include <random>
#include <vector>

namespace spauc {

struct gaussian_task {
    std::size_t n{ 10000 };
    std::size_t dim{ 20 };
    double positive_fraction{ 0.3 };
    double mean_shift{ 0.6 };  // positives centered at +shift * 1, negatives at -shift * 1
    std::uint64_t seed{ 0 };
};

/// Two isotropic unit-variance Gaussian classes. Exactly round(n * positive_fraction) positives, shuffled.
[[nodiscard]] inline dataset make_two_gaussians(const gaussian_task &task) {
    if (task.n == 0 || task.dim == 0) {
        throw invalid_parameter{ "synthetic task needs n > 0 and dim > 0" };
    }
    if (!(task.positive_fraction >= 0.0 && task.positive_fraction <= 1.0)) {
        throw invalid_parameter{ "positive fraction must lie in [0, 1]" };
    }
    std::mt19937_64 rng{ task.seed };
    std::normal_distribution<double> normal{ 0.0, 1.0 };
    const auto n_pos = static_cast<std::size_t>(std::llround(task.positive_fraction * static_cast<double>(task.n)));

    std::vector<example> out;
    out.reserve(task.n);
    for (std::size_t i = 0; i < task.n; ++i) {
        example ex;
        ex.label = i < n_pos ? 1 : -1;
        ex.features.reserve(task.dim);
        const double center = ex.label * task.mean_shift;
        for (std::size_t j = 0; j < task.dim; ++j) {
            ex.features.push_back({ static_cast<std::uint32_t>(j), center + normal(rng) });
        }
        out.push_back(std::move(ex));
    }
    std::shuffle(out.begin(), out.end(), rng);
    return dataset{ std::move(out), task.dim };
}

}  // namespace spauc
