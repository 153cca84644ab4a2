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
 * @brief Model documents: a versioned JSON file holding the weights and an echo of the training setup.
 *
 *     {
 *       "format_version": 1,
 *       "d": <number of weights>,
 *       "weights": [w_0, ..., w_{d-1}],
 *       "training_config": {
 *         "algorithm": "spauc" | "spam" | "solam",
 *         "regularizer": { "kind": "none" | "l2" | "l1", "lambda": <number> },
 *         "schedule": { "kind": ..., "eta1", "theta", "beta", "sigma_phi", "sigma_f", "t1", "mu", "cap"? },
 *         "epochs", "seed", "average": "last" | "avg1" | "avg2", "eval_every",
 *         "t1"? , "radius"?
 *       }
 *     }
 *
 * Optional keys are omitted when unset or infinite.
 */

#pragma once

#include "spauc/baselines.hpp"
#include "spauc/common.hpp"
#include "spauc/regularizers.hpp"
#include "spauc/schedules.hpp"
#include "spauc/trainer.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace spauc {

inline constexpr int model_format_version = 1;

struct model_document {
    dense_vector weights{};
    algorithm algo{ algorithm::spauc };
    train_config config{};
    solam_options solam{};

    [[nodiscard]] std::size_t dim() const noexcept { return weights.size(); }
};

[[nodiscard]] inline nlohmann::json schedule_to_json(const schedule &s) {
    nlohmann::json j = {
        { "kind", s.name() }, { "eta1", s.eta1() }, { "theta", s.theta() }, { "beta", s.beta() }, { "sigma_phi", s.sigma_phi() },
        { "sigma_f", s.sigma_f() }, { "t1", s.t1() }, { "mu", s.mu() },
    };
    if (std::isfinite(s.cap())) {
        j["cap"] = s.cap();
    }
    return j;
}

[[nodiscard]] inline schedule schedule_from_json(const nlohmann::json &j) {
    const std::string kind = j.at("kind").get<std::string>();
    schedule s = schedule::practical(1.0);
    if (kind == "poly") {
        s = schedule::poly(j.at("eta1").get<double>(), j.at("theta").get<double>());
    } else if (kind == "logdamped") {
        s = schedule::logdamped(j.at("eta1").get<double>(), j.at("beta").get<double>());
    } else if (kind == "fastrate") {
        s = schedule::fastrate(j.at("sigma_phi").get<double>(), j.at("sigma_f").get<double>(), j.at("t1").get<double>());
    } else if (kind == "practical") {
        s = schedule::practical(j.at("mu").get<double>());
    } else {
        throw data_error{ "unknown schedule kind '" + kind + "' in model document" };
    }
    if (j.contains("cap")) {
        s = s.with_cap(j.at("cap").get<double>());
    }
    return s;
}

[[nodiscard]] inline nlohmann::json to_json(const model_document &m) {
    nlohmann::json cfg = {
        { "algorithm", std::string{ to_string(m.algo) } },
        { "regularizer", { { "kind", m.config.reg.name() }, { "lambda", m.config.reg.lambda() } } },
        { "schedule", schedule_to_json(m.config.sched) },
        { "epochs", m.config.epochs },
        { "seed", m.config.seed },
        { "average", std::string{ to_string(m.config.average) } },
        { "eval_every", m.config.eval_every },
    };
    if (m.config.t1.has_value()) {
        cfg["t1"] = *m.config.t1;
    }
    if (std::isfinite(m.solam.radius)) {
        cfg["radius"] = m.solam.radius;
    }
    return { { "format_version", model_format_version }, { "d", m.weights.size() }, { "weights", m.weights }, { "training_config", cfg } };
}

[[nodiscard]] inline model_document model_from_json(const nlohmann::json &j) {
    try {
        const int version = j.at("format_version").get<int>();
        if (version != model_format_version) {
            throw data_error{ "unsupported model format_version " + std::to_string(version) };
        }
        model_document m;
        m.weights = j.at("weights").get<dense_vector>();
        if (j.at("d").get<std::size_t>() != m.weights.size()) {
            throw data_error{ "model document: 'd' does not match the number of weights" };
        }
        const nlohmann::json &cfg = j.at("training_config");
        m.algo = algorithm_from_string(cfg.at("algorithm").get<std::string>());
        const nlohmann::json &reg = cfg.at("regularizer");
        m.config.reg = regularizer::from_name(reg.at("kind").get<std::string>(), reg.at("lambda").get<double>());
        m.config.sched = schedule_from_json(cfg.at("schedule"));
        m.config.epochs = cfg.at("epochs").get<int>();
        m.config.seed = cfg.at("seed").get<std::uint64_t>();
        m.config.average = averaging_from_string(cfg.at("average").get<std::string>());
        m.config.eval_every = cfg.at("eval_every").get<std::int64_t>();
        if (cfg.contains("t1")) {
            m.config.t1 = cfg.at("t1").get<double>();
        }
        if (cfg.contains("radius")) {
            m.solam.radius = cfg.at("radius").get<double>();
        }
        return m;
    } catch (const nlohmann::json::exception &e) {
        throw data_error{ std::string{ "malformed model document: " } + e.what() };
    } catch (const invalid_parameter &e) {
        throw data_error{ std::string{ "malformed model document: " } + e.what() };
    }
}

inline void write_model(std::ostream &out, const model_document &m) {
    out << to_json(m).dump(2) << '\n';
}

[[nodiscard]] inline model_document read_model(std::istream &in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw data_error{ std::string{ "model document is not valid JSON: " } + e.what() };
    }
    return model_from_json(j);
}

inline void save_model(const std::string &path, const model_document &m) {
    std::ofstream out{ path };
    if (!out) {
        throw data_error{ "cannot write model file '" + path + "'" };
    }
    write_model(out, m);
}

[[nodiscard]] inline model_document load_model(const std::string &path) {
    std::ifstream in{ path };
    if (!in) {
        throw data_error{ "cannot open model file '" + path + "'" };
    }
    return read_model(in);
}

}  // namespace spauc
