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

#include "spauc/baselines.hpp"
#include "spauc/bench.hpp"
#include "spauc/class_stats.hpp"
#include "spauc/common.hpp"
#include "spauc/data_io.hpp"
#include "spauc/metrics.hpp"
#include "spauc/model_io.hpp"
#include "spauc/objective.hpp"
#include "spauc/regularizers.hpp"
#include "spauc/schedules.hpp"
#include "spauc/synthetic.hpp"
#include "spauc/trainer.hpp"
