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
 * @brief Experiment harness: trace CSVs, mean/std reports, grid-sampled K-fold tuning and repeated benchmarks.
 */

#pragma once

#include "spauc/baselines.hpp"
#include "spauc/common.hpp"
#include "spauc/data_io.hpp"
#include "spauc/metrics.hpp"
#include "spauc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace spauc {

//*************************************************************************************************************************************//
//                                                              traces                                                                 //
//*************************************************************************************************************************************//

inline constexpr const char *trace_csv_header = "iter,elapsed_sec,test_auc,objective";
inline constexpr const char *report_csv_header = "algo,dataset,auc_mean,auc_std,time_per_pass_mean,time_per_pass_std";

namespace detail {

[[nodiscard]] inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

[[nodiscard]] inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in{ line };
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

[[nodiscard]] inline double parse_real_cell(const std::string &cell, std::size_t line_no) {
    double value = 0.0;
    if (!parse_number(std::string_view{ cell }, value)) {
        throw parse_error{ line_no, "invalid number '" + cell + "'" };
    }
    return value;
}

}  // namespace detail

/// Missing optional values are written as empty cells. Reals use 17 significant digits.
inline void write_trace_csv(std::ostream &out, const std::vector<trace_record> &trace) {
    out << trace_csv_header << '\n';
    for (const trace_record &r : trace) {
        out << r.iter << ',' << detail::format_real(r.elapsed_sec) << ',';
        if (r.test_auc) {
            out << detail::format_real(*r.test_auc);
        }
        out << ',';
        if (r.objective) {
            out << detail::format_real(*r.objective);
        }
        out << '\n';
    }
}

[[nodiscard]] inline std::vector<trace_record> read_trace_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != trace_csv_header) {
        throw parse_error{ 1, std::string{ "expected trace header '" } + trace_csv_header + "'" };
    }
    std::vector<trace_record> trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = detail::split_csv_line(std::string{ detail::trim(line) });
        if (cells.size() != 4) {
            throw parse_error{ line_no, "expected 4 columns" };
        }
        trace_record r;
        long long iter = 0;
        if (!detail::parse_number(std::string_view{ cells[0] }, iter)) {
            throw parse_error{ line_no, "invalid iteration '" + cells[0] + "'" };
        }
        r.iter = iter;
        r.elapsed_sec = detail::parse_real_cell(cells[1], line_no);
        if (!cells[2].empty()) {
            r.test_auc = detail::parse_real_cell(cells[2], line_no);
        }
        if (!cells[3].empty()) {
            r.objective = detail::parse_real_cell(cells[3], line_no);
        }
        trace.push_back(r);
    }
    return trace;
}

inline void save_trace_csv(const std::string &path, const std::vector<trace_record> &trace) {
    std::ofstream out{ path };
    if (!out) {
        throw data_error{ "cannot write trace file '" + path + "'" };
    }
    write_trace_csv(out, trace);
}

[[nodiscard]] inline std::vector<trace_record> load_trace_csv(const std::string &path) {
    std::ifstream in{ path };
    if (!in) {
        throw data_error{ "cannot open trace file '" + path + "'" };
    }
    return read_trace_csv(in);
}

//*************************************************************************************************************************************//
//                                                              reports                                                                //
//*************************************************************************************************************************************//

struct run_summary {
    std::string algo;
    std::string dataset_name;
    double final_auc{ std::numeric_limits<double>::quiet_NaN() };
    double time_per_pass{ 0.0 };
};

/// Final test AUC and elapsed time per pass, read from the last row of a trace.
[[nodiscard]] inline run_summary summarize_trace(const std::vector<trace_record> &trace, int epochs, std::string algo, std::string dataset_name) {
    if (trace.empty()) {
        throw data_error{ "cannot summarize an empty trace" };
    }
    if (epochs < 1) {
        throw invalid_parameter{ "epochs must be >= 1" };
    }
    const trace_record &last = trace.back();
    return { std::move(algo), std::move(dataset_name), last.test_auc.value_or(std::numeric_limits<double>::quiet_NaN()), last.elapsed_sec / epochs };
}

struct report_row {
    std::string algo;
    std::string dataset_name;
    double auc_mean{ 0.0 };
    double auc_std{ 0.0 };
    double time_per_pass_mean{ 0.0 };
    double time_per_pass_std{ 0.0 };
    std::size_t repeats{ 0 };
};

struct mean_std {
    double mean;
    double std;  // sample standard deviation, 0 for a single value
};

[[nodiscard]] inline mean_std sample_mean_std(const std::vector<double> &xs) {
    if (xs.empty()) {
        throw invalid_parameter{ "mean of an empty sample" };
    }
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() == 1) {
        return { mean, 0.0 };
    }
    double ss = 0.0;
    for (const double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return { mean, std::sqrt(ss / (n - 1.0)) };
}

/// One row per (algo, dataset) in order of first appearance.
[[nodiscard]] inline std::vector<report_row> aggregate(const std::vector<run_summary> &runs) {
    std::vector<std::pair<std::string, std::string>> keys;
    for (const run_summary &r : runs) {
        const auto key = std::make_pair(r.algo, r.dataset_name);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            keys.push_back(key);
        }
    }
    std::vector<report_row> rows;
    for (const auto &[algo, name] : keys) {
        std::vector<double> aucs;
        std::vector<double> times;
        for (const run_summary &r : runs) {
            if (r.algo == algo && r.dataset_name == name) {
                aucs.push_back(r.final_auc);
                times.push_back(r.time_per_pass);
            }
        }
        const mean_std a = sample_mean_std(aucs);
        const mean_std t = sample_mean_std(times);
        rows.push_back({ algo, name, a.mean, a.std, t.mean, t.std, aucs.size() });
    }
    return rows;
}

inline void write_report_csv(std::ostream &out, const std::vector<report_row> &rows) {
    out << report_csv_header << '\n';
    for (const report_row &r : rows) {
        out << r.algo << ',' << r.dataset_name << ',' << detail::format_real(r.auc_mean) << ',' << detail::format_real(r.auc_std) << ','
            << detail::format_real(r.time_per_pass_mean) << ',' << detail::format_real(r.time_per_pass_std) << '\n';
    }
}

//*************************************************************************************************************************************//
//                                                              tuning                                                                 //
//*************************************************************************************************************************************//

using grid_point = std::map<std::string, double>;

/**
 * @brief Named candidate lists; the grid is their Cartesian product.
 *
 * pair_sample_size points are drawn from the product without replacement and scored by K-fold CV.
 */
struct tune_grid {
    std::vector<std::pair<std::string, std::vector<double>>> params{};
    std::size_t pair_sample_size{ 15 };
    int folds{ 5 };

    [[nodiscard]] std::size_t product_size() const noexcept {
        std::size_t n = 1;
        for (const auto &p : params) {
            n *= p.second.size();
        }
        return params.empty() ? 0 : n;
    }

    void validate() const {
        if (params.empty()) {
            throw invalid_parameter{ "tuning grid is empty" };
        }
        for (const auto &[name, values] : params) {
            if (values.empty()) {
                throw invalid_parameter{ "tuning grid parameter '" + name + "' has no candidates" };
            }
        }
        if (folds < 2) {
            throw invalid_parameter{ "cross-validation needs at least 2 folds" };
        }
        if (pair_sample_size < 1 || pair_sample_size > product_size()) {
            throw invalid_parameter{ "pair_sample_size must lie in [1, " + std::to_string(product_size()) + "]" };
        }
    }

    /// All points in row-major order (the last parameter varies fastest).
    [[nodiscard]] std::vector<grid_point> enumerate() const {
        std::vector<grid_point> points{ grid_point{} };
        for (const auto &[name, values] : params) {
            std::vector<grid_point> next;
            next.reserve(points.size() * values.size());
            for (const grid_point &p : points) {
                for (const double v : values) {
                    grid_point q = p;
                    q[name] = v;
                    next.push_back(std::move(q));
                }
            }
            points = std::move(next);
        }
        return points;
    }

    /// Seeded sample without replacement, in evaluation order.
    [[nodiscard]] std::vector<grid_point> sample(std::uint64_t seed) const {
        validate();
        std::vector<grid_point> points = enumerate();
        std::mt19937_64 rng{ seed ^ 0x79e0ull };
        std::shuffle(points.begin(), points.end(), rng);
        points.resize(pair_sample_size);
        return points;
    }
};

/// log10 exponents lo, lo + step, ..., hi mapped to 10^e.
[[nodiscard]] inline std::vector<double> log10_range(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) {
        throw invalid_parameter{ "log10 range needs lo <= hi and step > 0" };
    }
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(std::pow(10.0, lo + static_cast<double>(i) * step));
    }
    return out;
}

/// Applies mu / lambda / eta1 / radius entries of @p point on top of a base configuration.
/// A step-size cap on the base schedule (e.g. from clamp_for_theory) carries over to the tuned one.
inline void apply_point(const grid_point &point, train_config &config, solam_options &solam) {
    const real_type cap = config.sched.cap();
    for (const auto &[name, value] : point) {
        if (name == "mu") {
            config.sched = schedule::practical(value);
        } else if (name == "lambda") {
            config.reg = regularizer::from_name(config.reg.kind() == regularizer::kind_type::none ? "l2" : config.reg.name(), value);
        } else if (name == "eta1") {
            config.sched = config.sched.kind() == schedule::kind_type::logdamped ? schedule::logdamped(value, config.sched.beta())
                                                                                 : schedule::poly(value, config.sched.kind() == schedule::kind_type::poly ? config.sched.theta() : 1.0);
        } else if (name == "radius" || name == "R") {
            solam.radius = value;
        } else {
            throw invalid_parameter{ "unknown tuning parameter '" + name + "' (expected mu, lambda, eta1 or radius)" };
        }
    }
    if (std::isfinite(cap)) {
        config.sched = config.sched.with_cap(cap);
    }
}

/// Stratified K-fold assignment: positives and negatives are dealt round-robin after a seeded shuffle.
[[nodiscard]] inline std::vector<std::vector<std::size_t>> stratified_folds(const dataset &data, int folds, std::uint64_t seed) {
    if (folds < 2) {
        throw invalid_parameter{ "cross-validation needs at least 2 folds" };
    }
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(folds));
    std::size_t next_pos = 0;
    std::size_t next_neg = 0;
    for (const std::size_t i : stream_order(data, 0xf01d, seed)) {
        std::size_t &slot = data[i].positive() ? next_pos : next_neg;
        out[slot % out.size()].push_back(i);
        ++slot;
    }
    for (auto &f : out) {
        std::sort(f.begin(), f.end());
    }
    return out;
}

struct cv_row {
    grid_point point;
    double mean_auc{ std::numeric_limits<double>::quiet_NaN() };  // NaN when a fold diverged
    std::vector<double> fold_auc;
};

struct tune_result {
    grid_point best;
    double best_auc{ std::numeric_limits<double>::quiet_NaN() };
    std::vector<cv_row> table;
};

/// Mean held-out AUC of the configured iterate over the folds of @p data; NaN if any fold diverges.
[[nodiscard]] inline cv_row cross_validate(algorithm algo, const dataset &data, const train_config &config, const solam_options &solam, const std::vector<std::vector<std::size_t>> &folds) {
    cv_row row;
    double total = 0.0;
    for (std::size_t k = 0; k < folds.size(); ++k) {
        std::vector<std::size_t> train_idx;
        for (std::size_t m = 0; m < folds.size(); ++m) {
            if (m != k) {
                train_idx.insert(train_idx.end(), folds[m].begin(), folds[m].end());
            }
        }
        std::sort(train_idx.begin(), train_idx.end());
        const dataset train_fold = data.subset(train_idx);
        const dataset test_fold = data.subset(folds[k]);
        if (!train_fold.has_both_classes() || !test_fold.has_both_classes()) {
            throw data_error{ "a cross-validation fold lacks one of the classes; use fewer folds" };
        }
        try {
            const train_result res = run_baseline(algo, train_fold, config, {}, solam);
            const double a = auc(res.model, test_fold);
            row.fold_auc.push_back(a);
            total += a;
        } catch (const diverged_error &) {
            row.fold_auc.push_back(std::numeric_limits<double>::quiet_NaN());
            total = std::numeric_limits<double>::quiet_NaN();
        }
    }
    row.mean_auc = total / static_cast<double>(folds.size());
    return row;
}

/// Highest CV mean AUC wins; ties go to the earlier point in evaluation order.
[[nodiscard]] inline tune_result tune(algorithm algo, const dataset &data, const train_config &base, const solam_options &base_solam, const tune_grid &grid, std::uint64_t seed) {
    grid.validate();
    const auto folds = stratified_folds(data, grid.folds, seed);
    tune_result result;
    for (const grid_point &point : grid.sample(seed)) {
        train_config config = base;
        solam_options solam = base_solam;
        apply_point(point, config, solam);
        cv_row row = cross_validate(algo, data, config, solam, folds);
        row.point = point;
        if (std::isfinite(row.mean_auc) && (!std::isfinite(result.best_auc) || row.mean_auc > result.best_auc)) {
            result.best_auc = row.mean_auc;
            result.best = point;
        }
        result.table.push_back(std::move(row));
    }
    if (!std::isfinite(result.best_auc)) {
        throw data_error{ "every sampled grid point diverged during cross-validation" };
    }
    return result;
}

inline void write_cv_table_csv(std::ostream &out, const tune_result &result) {
    std::vector<std::string> names;
    if (!result.table.empty()) {
        for (const auto &[name, value] : result.table.front().point) {
            names.push_back(name);
        }
    }
    for (const std::string &n : names) {
        out << n << ',';
    }
    out << "cv_auc_mean,selected\n";
    for (const cv_row &row : result.table) {
        for (const std::string &n : names) {
            out << detail::format_real(row.point.at(n)) << ',';
        }
        out << (std::isfinite(row.mean_auc) ? detail::format_real(row.mean_auc) : std::string{ "nan" }) << ',' << (row.point == result.best ? 1 : 0) << '\n';
    }
}

//*************************************************************************************************************************************//
//                                                             benchmark                                                               //
//*************************************************************************************************************************************//

struct algorithm_setup {
    algorithm algo{ algorithm::spauc };
    train_config config{};
    solam_options solam{};
    std::optional<tune_grid> grid{};  // tuned per repeat on the training split when set
};

struct benchmark_options {
    std::string dataset_name{ "data" };
    std::vector<algorithm_setup> algorithms{};
    int repeats{ 1 };
    std::uint64_t base_seed{ 0 };
    double test_fraction{ 0.2 };
    std::size_t objective_cap{ 5000 };
    bool serial{ false };
    /// Directory receiving one trace CSV per (algorithm, repeat); empty to skip writing.
    std::string trace_dir{};
};

struct benchmark_run {
    run_summary summary;
    std::vector<trace_record> trace;
    grid_point tuned{};
    std::string trace_path{};
};

struct benchmark_report {
    std::vector<benchmark_run> runs;
    std::vector<report_row> rows;
};

[[nodiscard]] inline std::string trace_file_name(const std::string &dataset_name, algorithm algo, int repeat) {
    return dataset_name + "_" + std::string{ to_string(algo) } + "_r" + std::to_string(repeat) + ".csv";
}

/**
 * @brief Repeat r splits with seed base_seed + r, optionally tunes on the training split, trains each
 *        algorithm and traces test AUC and the pairwise objective on a capped training subsample.
 */
[[nodiscard]] inline benchmark_report run_benchmark(const dataset &data, const benchmark_options &opts) {
    if (opts.repeats < 1) {
        throw invalid_parameter{ "repeats must be >= 1" };
    }
    if (opts.algorithms.empty()) {
        throw invalid_parameter{ "no algorithms selected" };
    }

    const auto one_repeat = [&](int r) {
        const std::uint64_t seed = opts.base_seed + static_cast<std::uint64_t>(r);
        const train_test_split parts = split(data, opts.test_fraction, seed);
        require_both_classes(parts.train, "benchmark (training split)");
        require_both_classes(parts.test, "benchmark (test split)");
        std::vector<std::size_t> head(std::min(opts.objective_cap, parts.train.size()));
        std::iota(head.begin(), head.end(), std::size_t{ 0 });
        const dataset objective_data = parts.train.subset(head);
        const trace_options trace_opts{ &parts.test, &objective_data };

        std::vector<benchmark_run> runs;
        for (const algorithm_setup &setup : opts.algorithms) {
            train_config config = setup.config;
            config.seed = seed;
            solam_options solam = setup.solam;
            benchmark_run run;
            if (setup.grid.has_value()) {
                run.tuned = tune(setup.algo, parts.train, config, solam, *setup.grid, seed).best;
                apply_point(run.tuned, config, solam);
            }
            train_result res = run_baseline(setup.algo, parts.train, config, trace_opts, solam);
            run.trace = std::move(res.trace);
            if (!opts.trace_dir.empty()) {
                run.trace_path = opts.trace_dir + "/" + trace_file_name(opts.dataset_name, setup.algo, r);
                save_trace_csv(run.trace_path, run.trace);
            }
            run.summary = summarize_trace(run.trace, config.epochs, std::string{ to_string(setup.algo) }, opts.dataset_name);
            runs.push_back(std::move(run));
        }
        return runs;
    };

    std::vector<std::vector<benchmark_run>> per_repeat(static_cast<std::size_t>(opts.repeats));
    if (opts.serial || opts.repeats == 1) {
        for (int r = 0; r < opts.repeats; ++r) {
            per_repeat[static_cast<std::size_t>(r)] = one_repeat(r);
        }
    } else {
        std::vector<std::future<std::vector<benchmark_run>>> futures;
        for (int r = 0; r < opts.repeats; ++r) {
            futures.push_back(std::async(std::launch::async, one_repeat, r));
        }
        for (int r = 0; r < opts.repeats; ++r) {
            per_repeat[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
        }
    }

    benchmark_report report;
    std::vector<run_summary> summaries;
    for (auto &runs : per_repeat) {
        for (auto &run : runs) {
            summaries.push_back(run.summary);
            report.runs.push_back(std::move(run));
        }
    }
    report.rows = aggregate(summaries);
    return report;
}

}  // namespace spauc
