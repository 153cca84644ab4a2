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

// spauc: train / eval / benchmark / tune / synth

#include "spauc/spauc.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace spauc;

class usage_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct data_flags {
    std::string data;
    std::string test;
    std::optional<double> split_fraction;
    std::string binarize{ "auto" };
    std::optional<long long> threshold;
};

struct learner_flags {
    std::string algo{ "spauc" };
    std::string reg{ "none" };
    std::optional<double> lambda;
    std::string schedule{ "practical" };
    std::optional<double> mu;
    std::optional<double> eta1;
    double theta{ 1.0 };
    double beta{ 3.0 };
    std::optional<double> sigma_phi;
    std::optional<double> sigma_f;
    std::optional<double> t1;
    std::optional<double> avg_t1;
    std::optional<long long> planned_steps;
    bool clamp_theory{ false };
    int epochs{ 15 };
    std::uint64_t seed{ 0 };
    std::string average{ "last" };
    std::optional<long long> eval_every;
    double radius{ std::numeric_limits<double>::infinity() };
    std::size_t objective_cap{ 5000 };
};

void add_data_flags(CLI::App &cmd, data_flags &f, bool with_test) {
    cmd.add_option("--data", f.data, "LIBSVM/SVMlight data file")->required();
    cmd.add_option("--binarize", f.binarize, "label rule: auto, identity, zero_one or threshold")->check(CLI::IsMember({ "auto", "identity", "zero_one", "threshold" }));
    cmd.add_option("--threshold", f.threshold, "k for the threshold rule (label <= k is positive)");
    if (with_test) {
        cmd.add_option("--test", f.test, "separate test file");
        cmd.add_option("--split", f.split_fraction, "hold out this fraction of --data for testing");
    }
}

void add_learner_flags(CLI::App &cmd, learner_flags &f) {
    cmd.add_option("--algo", f.algo, "spauc, spam or solam");
    cmd.add_option("--reg", f.reg, "none, l2 or l1")->check(CLI::IsMember({ "none", "l2", "l1" }));
    cmd.add_option("--lambda", f.lambda, "regularization parameter (required for l2 and l1)");
    cmd.add_option("--schedule", f.schedule, "poly, logdamped, fastrate or practical")->check(CLI::IsMember({ "poly", "logdamped", "fastrate", "practical" }));
    cmd.add_option("--mu", f.mu, "practical: eta_t = 2 / (mu t + 1)");
    cmd.add_option("--eta1", f.eta1, "poly / logdamped initial step");
    cmd.add_option("--theta", f.theta, "poly exponent in (1/2, 1]");
    cmd.add_option("--beta", f.beta, "logdamped exponent > 2");
    cmd.add_option("--sigma-phi", f.sigma_phi, "fastrate: quadratic growth constant of the objective");
    cmd.add_option("--sigma-f", f.sigma_f, "fastrate: defaults to max(0, sigma_phi - sigma_omega)");
    cmd.add_option("--t1", f.t1, "fastrate offset; defaults to 32 C1 / sigma_phi log(2T / 0.01)");
    cmd.add_option("--avg-t1", f.avg_t1, "offset in the avg2 weights (default: the fastrate t1, else 0)");
    cmd.add_option("--planned-steps", f.planned_steps, "T used for the default t1 (default: epochs * n)");
    cmd.add_flag("--clamp-theory", f.clamp_theory, "cap steps at 1 / (2 max{A1, 16 kappa^2})");
    cmd.add_option("--epochs", f.epochs, "passes over the training data")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", f.seed, "random seed");
    cmd.add_option("--average", f.average, "returned iterate: last, avg1 or avg2")->check(CLI::IsMember({ "last", "avg1", "avg2" }));
    cmd.add_option("--eval-every", f.eval_every, "steps between trace rows (default: n / 10)")->check(CLI::PositiveNumber);
    cmd.add_option("--radius", f.radius, "solam: radius of the l2 ball");
    cmd.add_option("--objective-cap", f.objective_cap, "training examples used for the objective column");
}

std::optional<binarize_rule> rule_of(const data_flags &f) {
    if (f.binarize == "auto") {
        return std::nullopt;
    }
    if (f.binarize == "identity") {
        return binarize_rule::identity();
    }
    if (f.binarize == "zero_one") {
        return binarize_rule::zero_one();
    }
    if (!f.threshold) {
        throw usage_error{ "--binarize threshold requires --threshold" };
    }
    return binarize_rule::threshold(*f.threshold);
}

struct loaded_data {
    dataset train;
    std::optional<dataset> test;
};

loaded_data load(const data_flags &f, std::uint64_t seed) {
    if (!f.test.empty() && f.split_fraction) {
        throw usage_error{ "--test and --split are mutually exclusive" };
    }
    const auto rule = rule_of(f);
    dataset data = load_libsvm(f.data, rule);
    if (!f.test.empty()) {
        dataset test = load_libsvm(f.test, rule);
        const std::size_t dim = std::max(data.dim(), test.dim());
        return { dataset{ data.examples(), dim }, dataset{ test.examples(), dim } };
    }
    if (f.split_fraction) {
        train_test_split parts = split(data, *f.split_fraction, seed);
        return { std::move(parts.train), std::move(parts.test) };
    }
    return { std::move(data), std::nullopt };
}

/// Builds the configuration; with @p tuned_mu the practical schedule may come from a grid instead of --mu.
train_config make_config(const learner_flags &f, const dataset &train, bool mu_from_grid = false, bool lambda_from_grid = false) {
    train_config c;
    if (f.reg != "none" && !f.lambda && !lambda_from_grid) {
        throw usage_error{ "--reg " + f.reg + " requires --lambda" };
    }
    c.reg = regularizer::from_name(f.reg, f.lambda.value_or(1.0));

    const auto required = [](const std::optional<double> &v, const char *flag, const std::string &kind) {
        if (!v) {
            throw usage_error{ "--schedule " + kind + " requires " + flag };
        }
        return *v;
    };
    const real_type kappa = kappa_of(train);
    if (f.schedule == "practical") {
        c.sched = schedule::practical(mu_from_grid ? f.mu.value_or(1.0) : required(f.mu, "--mu", f.schedule));
    } else if (f.schedule == "poly") {
        c.sched = schedule::poly(required(f.eta1, "--eta1", f.schedule), f.theta);
    } else if (f.schedule == "logdamped") {
        c.sched = schedule::logdamped(required(f.eta1, "--eta1", f.schedule), f.beta);
    } else {
        const double sigma_phi = required(f.sigma_phi, "--sigma-phi", f.schedule);
        const double sigma_f = f.sigma_f.value_or(std::max(0.0, sigma_phi - c.reg.sigma_omega()));
        const long long planned = f.planned_steps.value_or(static_cast<long long>(f.epochs) * static_cast<long long>(train.size()));
        const double t1 = f.t1.value_or(schedule::default_t1(c.reg.a1(), kappa, sigma_phi, planned));
        c.sched = schedule::fastrate(sigma_phi, sigma_f, t1);
    }
    if (f.clamp_theory) {
        c.sched = c.sched.clamp_for_theory(c.reg.a1(), kappa);
    }
    c.epochs = f.epochs;
    c.seed = f.seed;
    c.average = averaging_from_string(f.average);
    c.eval_every = f.eval_every.value_or(std::max<long long>(1, static_cast<long long>(train.size()) / 10));
    c.t1 = f.avg_t1;
    return c;
}

dataset head_of(const dataset &data, std::size_t cap) {
    std::vector<std::size_t> idx(std::min(cap, data.size()));
    std::iota(idx.begin(), idx.end(), std::size_t{ 0 });
    return data.subset(idx);
}

/// "log:lo:hi:step" gives 10^lo .. 10^hi; otherwise a comma-separated list.
std::vector<double> parse_grid(const std::string &spec, const char *flag) {
    try {
        if (spec.rfind("log:", 0) == 0) {
            std::vector<double> parts;
            std::stringstream in{ spec.substr(4) };
            std::string cell;
            while (std::getline(in, cell, ':')) {
                parts.push_back(std::stod(cell));
            }
            if (parts.size() != 3) {
                throw usage_error{ std::string{ flag } + ": expected log:lo:hi:step" };
            }
            return log10_range(parts[0], parts[1], parts[2]);
        }
        std::vector<double> out;
        std::stringstream in{ spec };
        std::string cell;
        while (std::getline(in, cell, ',')) {
            out.push_back(std::stod(cell));
        }
        if (out.empty()) {
            throw usage_error{ std::string{ flag } + ": empty candidate list" };
        }
        return out;
    } catch (const std::logic_error &) {
        throw usage_error{ std::string{ flag } + ": cannot parse '" + spec + "'" };
    }
}

struct grid_flags {
    std::string mu{ "log:-7:-2.5:0.5" };
    std::string lambda{ "log:-5:0:1" };
    std::string radius{ "log:-1:5:1" };
    std::string eta1{};
    std::size_t pairs{ 15 };
    int folds{ 5 };
};

void add_grid_flags(CLI::App &cmd, grid_flags &g) {
    cmd.add_option("--mu-grid", g.mu, "candidates for mu (list or log:lo:hi:step)");
    cmd.add_option("--lambda-grid", g.lambda, "candidates for lambda, used when --reg is not none");
    cmd.add_option("--radius-grid", g.radius, "candidates for the solam radius");
    cmd.add_option("--eta1-grid", g.eta1, "candidates for eta1 (poly / logdamped schedules)");
    cmd.add_option("--pairs", g.pairs, "grid points sampled without replacement (capped at the grid size)");
    cmd.add_option("--folds", g.folds, "cross-validation folds");
}

/// mu (or eta1) always; lambda with a regularizer (spauc, spam); radius for solam.
tune_grid make_grid(const grid_flags &g, const learner_flags &f, algorithm algo) {
    tune_grid grid;
    if (f.schedule == "practical") {
        grid.params.emplace_back("mu", parse_grid(g.mu, "--mu-grid"));
    } else if ((f.schedule == "poly" || f.schedule == "logdamped") && !g.eta1.empty()) {
        grid.params.emplace_back("eta1", parse_grid(g.eta1, "--eta1-grid"));
    }
    if (algo != algorithm::solam && f.reg != "none") {
        grid.params.emplace_back("lambda", parse_grid(g.lambda, "--lambda-grid"));
    }
    if (algo == algorithm::solam) {
        grid.params.emplace_back("radius", parse_grid(g.radius, "--radius-grid"));
    }
    if (grid.params.empty()) {
        throw usage_error{ "nothing to tune for this schedule; use --schedule practical or give --eta1-grid" };
    }
    grid.folds = g.folds;
    grid.pair_sample_size = std::min(g.pairs, grid.product_size());
    return grid;
}

std::string format_point(const grid_point &p) {
    std::string out;
    for (const auto &[k, v] : p) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s%s=%.6g", out.empty() ? "" : " ", k.c_str(), v);
        out += buf;
    }
    return out;
}

/// key=value lines become --key=value arguments placed before the command-line ones, so flags win.
std::vector<std::string> config_args(const std::string &path) {
    std::ifstream in{ path };
    if (!in) {
        throw usage_error{ "cannot open config file '" + path + "'" };
    }
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view view = spauc::detail::trim(line);
        if (view.empty() || view.front() == '#') {
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw usage_error{ "config line without '=': " + std::string{ view } };
        }
        out.push_back("--" + std::string{ spauc::detail::trim(view.substr(0, eq)) } + "=" + std::string{ spauc::detail::trim(view.substr(eq + 1)) });
    }
    return out;
}

int run(int argc, char **argv) {
    // expand --config FILE in place (after the verb)
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        std::size_t consumed = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            consumed = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            consumed = 1;
        }
        if (consumed > 0) {
            std::vector<std::string> extra = config_args(path);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
            const std::size_t at = args.empty() ? 0 : 1;  // keep the verb first
            args.insert(args.begin() + static_cast<std::ptrdiff_t>(std::min(at, args.size())), extra.begin(), extra.end());
            break;
        }
    }

    CLI::App app{ "Streaming AUC maximization" };
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    std::string config_placeholder;
    app.add_option("--config", config_placeholder, "key=value file; command-line flags take precedence");

    // train
    data_flags train_data;
    learner_flags train_learner;
    std::string model_out;
    std::string trace_out;
    CLI::App *train_cmd = app.add_subcommand("train", "train a model");
    add_data_flags(*train_cmd, train_data, true);
    add_learner_flags(*train_cmd, train_learner);
    train_cmd->add_option("--out", model_out, "model file to write");
    train_cmd->add_option("--trace", trace_out, "trace CSV to write");

    // eval
    data_flags eval_data;
    std::string model_in;
    CLI::App *eval_cmd = app.add_subcommand("eval", "print the AUC of a model on a dataset");
    add_data_flags(*eval_cmd, eval_data, false);
    eval_cmd->add_option("--model", model_in, "model file")->required();

    // benchmark
    data_flags bench_data;
    learner_flags bench_learner;
    grid_flags bench_grid;
    std::string algos{ "spauc,spam,solam" };
    int repeats{ 20 };
    bool bench_tune{ false };
    bool serial{ false };
    std::string out_dir{ "." };
    std::string report_path;
    std::string dataset_name;
    double bench_split{ 0.2 };
    CLI::App *bench_cmd = app.add_subcommand("benchmark", "repeated split / (tune) / train runs with AUC-vs-time traces");
    add_data_flags(*bench_cmd, bench_data, false);
    add_learner_flags(*bench_cmd, bench_learner);
    add_grid_flags(*bench_cmd, bench_grid);
    bench_cmd->add_option("--algos", algos, "comma-separated list of spauc, spam, solam");
    bench_cmd->add_option("--repeats", repeats, "number of repeats")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--split", bench_split, "test fraction per repeat");
    bench_cmd->add_flag("--tune", bench_tune, "tune each algorithm by cross-validation on every training split");
    bench_cmd->add_flag("--serial", serial, "run repeats sequentially");
    bench_cmd->add_option("--out-dir", out_dir, "directory for trace CSVs");
    bench_cmd->add_option("--report", report_path, "report CSV (default: <out-dir>/report.csv)");
    bench_cmd->add_option("--name", dataset_name, "dataset name used in the report (default: file stem)");

    // tune
    data_flags tune_data;
    learner_flags tune_learner;
    grid_flags tune_grid_flags;
    std::string table_out;
    CLI::App *tune_cmd = app.add_subcommand("tune", "sampled grid search scored by K-fold cross-validated AUC");
    add_data_flags(*tune_cmd, tune_data, false);
    add_learner_flags(*tune_cmd, tune_learner);
    add_grid_flags(*tune_cmd, tune_grid_flags);
    tune_cmd->add_option("--table", table_out, "CV table CSV to write");

    // synth
    gaussian_task task;
    std::string synth_out;
    CLI::App *synth_cmd = app.add_subcommand("synth", "write a two-Gaussian LIBSVM dataset");
    synth_cmd->add_option("--n", task.n, "number of examples");
    synth_cmd->add_option("--dim", task.dim, "dimension");
    synth_cmd->add_option("--positive-fraction", task.positive_fraction, "fraction of positives");
    synth_cmd->add_option("--shift", task.mean_shift, "per-coordinate class mean offset");
    synth_cmd->add_option("--seed", task.seed, "random seed");
    synth_cmd->add_option("--out", synth_out, "output file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (train_cmd->parsed()) {
        loaded_data data = load(train_data, train_learner.seed);
        const train_config config = make_config(train_learner, data.train);
        const algorithm algo = algorithm_from_string(train_learner.algo);
        const dataset objective_data = head_of(data.train, train_learner.objective_cap);
        const trace_options opts{ data.test ? &*data.test : nullptr, &objective_data };
        const train_result res = run_baseline(algo, data.train, config, opts, { train_learner.radius });
        if (!model_out.empty()) {
            save_model(model_out, { res.model, algo, config, { train_learner.radius } });
        }
        if (!trace_out.empty()) {
            save_trace_csv(trace_out, res.trace);
        }
        std::printf("steps %lld elapsed_sec %.4f\n", static_cast<long long>(res.steps), res.elapsed_sec);
        if (data.test) {
            std::printf("test_auc %.4f\n", auc(res.model, *data.test));
        }
        return 0;
    }
    if (eval_cmd->parsed()) {
        const model_document model = load_model(model_in);
        const dataset data = load_libsvm(eval_data.data, rule_of(eval_data));
        if (data.dim() > model.dim()) {
            throw data_error{ "data has feature index " + std::to_string(data.dim()) + " but the model has only " + std::to_string(model.dim()) + " weights" };
        }
        std::printf("%.4f\n", auc(model.weights, data));
        return 0;
    }
    if (bench_cmd->parsed()) {
        const dataset data = load_libsvm(bench_data.data, rule_of(bench_data));
        benchmark_options opts;
        opts.dataset_name = dataset_name;
        if (opts.dataset_name.empty()) {
            const std::string &p = bench_data.data;
            const std::size_t slash = p.find_last_of('/');
            std::string stem = slash == std::string::npos ? p : p.substr(slash + 1);
            opts.dataset_name = stem.substr(0, stem.find('.'));
        }
        opts.repeats = repeats;
        opts.base_seed = bench_learner.seed;
        opts.test_fraction = bench_split;
        opts.objective_cap = bench_learner.objective_cap;
        opts.serial = serial;
        std::filesystem::create_directories(out_dir);
        opts.trace_dir = out_dir;
        // parameters are sized on one training split; every repeat has the same split size
        const dataset sizing = split(data, bench_split, bench_learner.seed).train;
        std::stringstream names{ algos };
        std::string name;
        while (std::getline(names, name, ',')) {
            algorithm_setup setup;
            setup.algo = algorithm_from_string(name);
            setup.config = make_config(bench_learner, sizing, bench_tune, bench_tune);
            setup.solam.radius = bench_learner.radius;
            if (bench_tune) {
                setup.grid = make_grid(bench_grid, bench_learner, setup.algo);
            }
            opts.algorithms.push_back(std::move(setup));
        }
        const benchmark_report report = run_benchmark(data, opts);
        const std::string path = report_path.empty() ? out_dir + "/report.csv" : report_path;
        std::ofstream out{ path };
        if (!out) {
            throw data_error{ "cannot write report '" + path + "'" };
        }
        write_report_csv(out, report.rows);
        write_report_csv(std::cout, report.rows);
        return 0;
    }
    if (tune_cmd->parsed()) {
        const dataset data = load_libsvm(tune_data.data, rule_of(tune_data));
        const algorithm algo = algorithm_from_string(tune_learner.algo);
        const train_config base = make_config(tune_learner, data, true, true);
        const tune_grid grid = make_grid(tune_grid_flags, tune_learner, algo);
        const tune_result result = tune(algo, data, base, { tune_learner.radius }, grid, tune_learner.seed);
        if (!table_out.empty()) {
            std::ofstream out{ table_out };
            if (!out) {
                throw data_error{ "cannot write table '" + table_out + "'" };
            }
            write_cv_table_csv(out, result);
        }
        std::printf("best %s cv_auc %.4f\n", format_point(result.best).c_str(), result.best_auc);
        return 0;
    }
    if (synth_cmd->parsed()) {
        std::ofstream out{ synth_out };
        if (!out) {
            throw data_error{ "cannot write '" + synth_out + "'" };
        }
        write_libsvm(out, make_two_gaussians(task));
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const usage_error &e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const spauc::invalid_parameter &e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const spauc::diverged_error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const spauc::error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::filesystem::filesystem_error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
