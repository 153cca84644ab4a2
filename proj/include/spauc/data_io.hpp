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
 * @brief LIBSVM/SVMlight reading and writing, label binarization, train/test splitting and stream ordering.
 *
 * Feature indices are 1-based in files and 0-based in memory. No scaling is applied to feature values.
 */

#pragma once

#include "spauc/common.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spauc {

struct example {
    sparse_vector features;
    int label{ 1 };  // +1 or -1

    [[nodiscard]] bool positive() const noexcept { return label == 1; }

    friend bool operator==(const example &, const example &) = default;
};

class dataset {
  public:
    dataset() = default;

    /// @p min_dim lets subsets keep the dimension of the dataset they were drawn from.
    explicit dataset(std::vector<example> examples, std::size_t min_dim = 0) :
        examples_{ std::move(examples) },
        dim_{ min_dim } {
        for (const example &ex : examples_) {
            if (ex.label != 1 && ex.label != -1) {
                throw invalid_parameter{ "example label must be +1 or -1, got " + std::to_string(ex.label) };
            }
            (ex.label == 1 ? n_pos_ : n_neg_) += 1;
            for (std::size_t j = 0; j < ex.features.size(); ++j) {
                const feature &f = ex.features[j];
                if (!std::isfinite(f.value)) {
                    throw invalid_parameter{ "feature values must be finite" };
                }
                if (j > 0 && ex.features[j - 1].index >= f.index) {
                    throw invalid_parameter{ "feature indices must be strictly increasing" };
                }
            }
            if (!ex.features.empty()) {
                dim_ = std::max<std::size_t>(dim_, ex.features.back().index + std::size_t{ 1 });
            }
        }
    }

    [[nodiscard]] const std::vector<example> &examples() const noexcept { return examples_; }
    [[nodiscard]] const example &operator[](std::size_t i) const noexcept { return examples_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return examples_.size(); }
    [[nodiscard]] bool empty() const noexcept { return examples_.empty(); }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t n_pos() const noexcept { return n_pos_; }
    [[nodiscard]] std::size_t n_neg() const noexcept { return n_neg_; }
    [[nodiscard]] bool has_both_classes() const noexcept { return n_pos_ > 0 && n_neg_ > 0; }

    [[nodiscard]] dataset subset(std::span<const std::size_t> indices) const {
        std::vector<example> out;
        out.reserve(indices.size());
        for (const std::size_t i : indices) {
            out.push_back(examples_[i]);
        }
        return dataset{ std::move(out), dim_ };
    }

    friend bool operator==(const dataset &, const dataset &) = default;

  private:
    std::vector<example> examples_{};
    std::size_t dim_{ 0 };
    std::size_t n_pos_{ 0 };
    std::size_t n_neg_{ 0 };
};

inline void require_both_classes(const dataset &data, const char *who) {
    if (!data.has_both_classes()) {
        throw data_error{ std::string{ who } + ": dataset must contain at least one positive and one negative example" };
    }
}

//*************************************************************************************************************************************//
//                                                         label binarization                                                          //
//*************************************************************************************************************************************//

struct binarize_rule {
    enum class kind_type { identity,  // labels already +1/-1
                           zero_one,  // {0,1} -> {-1,+1}
                           threshold  // label <= k -> +1, otherwise -1
    };

    kind_type kind{ kind_type::identity };
    long long k{ 0 };

    [[nodiscard]] static binarize_rule identity() noexcept { return {}; }
    [[nodiscard]] static binarize_rule zero_one() noexcept { return { kind_type::zero_one, 0 }; }
    [[nodiscard]] static binarize_rule threshold(long long k) noexcept { return { kind_type::threshold, k }; }

    /**
     * @brief Picks a rule from the set of labels present: identity for {-1,+1}, zero_one for {0,1}, and
     *        otherwise threshold at the ceil(m/2)-th smallest of the m distinct labels, which sends the first
     *        half of the sorted label alphabet to the positive class.
     */
    [[nodiscard]] static binarize_rule detect(const std::set<long long> &labels) {
        if (labels.empty()) {
            throw data_error{ "cannot detect a binarization rule without labels" };
        }
        const auto subset_of = [&](std::initializer_list<long long> allowed) {
            return std::all_of(labels.begin(), labels.end(), [&](long long l) { return std::find(allowed.begin(), allowed.end(), l) != allowed.end(); });
        };
        if (subset_of({ -1, 1 })) {
            return identity();
        }
        if (subset_of({ 0, 1 })) {
            return zero_one();
        }
        const std::size_t half = (labels.size() + 1) / 2;
        return threshold(*std::next(labels.begin(), static_cast<std::ptrdiff_t>(half - 1)));
    }
};

[[nodiscard]] inline int binarize(long long raw_label, const binarize_rule &rule) {
    switch (rule.kind) {
        case binarize_rule::kind_type::identity:
            if (raw_label == 1 || raw_label == -1) {
                return static_cast<int>(raw_label);
            }
            break;
        case binarize_rule::kind_type::zero_one:
            if (raw_label == 0 || raw_label == 1) {
                return raw_label == 1 ? 1 : -1;
            }
            break;
        case binarize_rule::kind_type::threshold:
            return raw_label <= rule.k ? 1 : -1;
    }
    throw data_error{ "label " + std::to_string(raw_label) + " is outside the domain of the binarization rule" };
}

//*************************************************************************************************************************************//
//                                                             parsing                                                                 //
//*************************************************************************************************************************************//

namespace detail {

[[nodiscard]] inline std::string_view trim(std::string_view s) noexcept {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T>
[[nodiscard]] bool parse_number(std::string_view token, T &out) noexcept {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    if (token.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

struct raw_example {
    sparse_vector features;
    long long label;
};

[[nodiscard]] inline std::vector<raw_example> parse_raw(std::istream &in) {
    std::vector<raw_example> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view{ line };
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }

        raw_example row{};
        bool first = true;
        while (!view.empty()) {
            std::size_t end = view.find_first_of(" \t");
            const std::string_view token = view.substr(0, end);
            view = end == std::string_view::npos ? std::string_view{} : trim(view.substr(end));

            if (first) {
                first = false;
                double label = 0.0;
                if (!parse_number(token, label) || !std::isfinite(label) || label != std::floor(label)) {
                    throw parse_error{ line_no, "invalid label '" + std::string{ token } + "'" };
                }
                row.label = static_cast<long long>(label);
                continue;
            }
            if (token.starts_with("qid:")) {
                continue;
            }
            const std::size_t colon = token.find(':');
            if (colon == std::string_view::npos) {
                throw parse_error{ line_no, "expected 'index:value', got '" + std::string{ token } + "'" };
            }
            std::uint64_t index = 0;
            double value = 0.0;
            if (!parse_number(token.substr(0, colon), index) || index == 0 || index > UINT32_MAX) {
                throw parse_error{ line_no, "invalid feature index in '" + std::string{ token } + "'" };
            }
            if (!parse_number(token.substr(colon + 1), value) || !std::isfinite(value)) {
                throw parse_error{ line_no, "invalid feature value in '" + std::string{ token } + "'" };
            }
            const auto zero_based = static_cast<std::uint32_t>(index - 1);
            if (!row.features.empty() && row.features.back().index >= zero_based) {
                throw parse_error{ line_no, "feature indices must be strictly increasing" };
            }
            row.features.push_back({ zero_based, value });
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw data_error{ "input contains no examples" };
    }
    return rows;
}

}  // namespace detail

/// Parses LIBSVM text; when @p rule is empty the rule is detected from the label alphabet.
[[nodiscard]] inline dataset parse_libsvm(std::istream &in, std::optional<binarize_rule> rule = std::nullopt) {
    std::vector<detail::raw_example> rows = detail::parse_raw(in);
    if (!rule.has_value()) {
        std::set<long long> labels;
        for (const auto &r : rows) {
            labels.insert(r.label);
        }
        rule = binarize_rule::detect(labels);
    }
    std::vector<example> out;
    out.reserve(rows.size());
    for (auto &r : rows) {
        out.push_back({ std::move(r.features), binarize(r.label, *rule) });
    }
    return dataset{ std::move(out) };
}

[[nodiscard]] inline dataset parse_libsvm_string(const std::string &text, std::optional<binarize_rule> rule = std::nullopt) {
    std::istringstream in{ text };
    return parse_libsvm(in, rule);
}

[[nodiscard]] inline dataset load_libsvm(const std::string &path, std::optional<binarize_rule> rule = std::nullopt) {
    std::ifstream in{ path };
    if (!in) {
        throw data_error{ "cannot open data file '" + path + "'" };
    }
    return parse_libsvm(in, rule);
}

inline void write_libsvm(std::ostream &out, const dataset &data) {
    char buf[64];
    for (const example &ex : data.examples()) {
        out << (ex.label == 1 ? "+1" : "-1");
        for (const feature &f : ex.features) {
            std::snprintf(buf, sizeof(buf), " %u:%.17g", f.index + 1, f.value);
            out << buf;
        }
        out << '\n';
    }
}

//*************************************************************************************************************************************//
//                                                       splitting and ordering                                                        //
//*************************************************************************************************************************************//

/// Deterministic permutation of [0, n) for the given epoch and seed.
[[nodiscard]] inline std::vector<std::size_t> stream_order(std::size_t n, std::uint64_t epoch, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{ 0 });
    std::seed_seq seq{ static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32), 0x5eedu };
    std::mt19937_64 rng{ seq };
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

[[nodiscard]] inline std::vector<std::size_t> stream_order(const dataset &data, std::uint64_t epoch, std::uint64_t seed) {
    return stream_order(data.size(), epoch, seed);
}

struct train_test_split {
    dataset train;
    dataset test;
};

/// Shuffles once, then puts the first ceil((1-f)n) examples into train and the remaining floor(f n) into test.
[[nodiscard]] inline train_test_split split(const dataset &data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw invalid_parameter{ "test fraction must lie in (0, 1)" };
    }
    if (data.empty()) {
        throw data_error{ "cannot split an empty dataset" };
    }
    const std::size_t n = data.size();
    const auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n)));
    std::seed_seq seq{ static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5b117u };
    std::mt19937_64 rng{ seq };
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{ 0 });
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::span<const std::size_t> all{ perm };
    return { data.subset(all.first(n - n_test)), data.subset(all.subspan(n - n_test)) };
}

}  // namespace spauc
