#pragma once

#include "bshrink/block_scheme.hpp"
#include "bshrink/errors.hpp"
#include "bshrink/estimators.hpp"
#include "bshrink/function_space.hpp"
#include "bshrink/harness/experiment.hpp"
#include "bshrink/io/csv.hpp"
#include "bshrink/io/scenario_json.hpp"
#include "bshrink/risk_eval.hpp"
#include "bshrink/sim_models/difficulty.hpp"
#include "bshrink/sim_models/sampling.hpp"
#include "bshrink/sim_models/scenarios.hpp"
