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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spauc {

using real_type = double;
using dense_vector = std::vector<real_type>;

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on a function argument was violated.
class invalid_parameter : public error {
  public:
    using error::error;
};

/// The data does not support the requested computation (e.g. only one class present).
class data_error : public error {
  public:
    using error::error;
};

class parse_error : public data_error {
  public:
    parse_error(std::size_t line, const std::string &what) :
        data_error("line " + std::to_string(line) + ": " + what),
        line_{ line } {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// One non-zero entry of a sparse vector. Indices are 0-based.
struct feature {
    std::uint32_t index;
    real_type value;

    friend bool operator==(const feature &, const feature &) = default;
};

/// Sparse vector with strictly increasing indices.
using sparse_vector = std::vector<feature>;

[[nodiscard]] inline real_type dot(std::span<const real_type> w, const sparse_vector &x) noexcept {
    real_type s = 0.0;
    for (const feature &f : x) {
        if (f.index < w.size()) {
            s += w[f.index] * f.value;
        }
    }
    return s;
}

[[nodiscard]] inline real_type dot(std::span<const real_type> a, std::span<const real_type> b) noexcept {
    real_type s = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

// y += alpha * x
inline void axpy(real_type alpha, const sparse_vector &x, std::span<real_type> y) noexcept {
    for (const feature &f : x) {
        y[f.index] += alpha * f.value;
    }
}

inline void axpy(real_type alpha, std::span<const real_type> x, std::span<real_type> y) noexcept {
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

[[nodiscard]] inline real_type squared_norm(const sparse_vector &x) noexcept {
    real_type s = 0.0;
    for (const feature &f : x) {
        s += f.value * f.value;
    }
    return s;
}

[[nodiscard]] inline real_type squared_norm(std::span<const real_type> x) noexcept {
    return dot(x, x);
}

[[nodiscard]] inline bool all_finite(std::span<const real_type> x) noexcept {
    for (const real_type v : x) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

[[nodiscard]] inline dense_vector to_dense(const sparse_vector &x, std::size_t dim) {
    dense_vector out(dim, 0.0);
    for (const feature &f : x) {
        out[f.index] = f.value;
    }
    return out;
}

}  // namespace spauc
