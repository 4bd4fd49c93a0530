#pragma once

// Umbrella header: parsers, engines and the offline pipeline. The HTTP
// provider lives in pipeline/live_provider.hpp and is not included here.

#include "core_ir.hpp"
#include "csp_engine.hpp"
#include "csp_model.hpp"
#include "fol/cnf.hpp"
#include "fol/models.hpp"
#include "fol/resolution.hpp"
#include "fol/unify.hpp"
#include "fol_problem.hpp"
#include "lp_engine.hpp"
#include "lp_program.hpp"
#include "parse_support.hpp"
#include "pipeline/eval.hpp"
#include "pipeline/interpret.hpp"
#include "pipeline/pipeline.hpp"
#include "pipeline/problem.hpp"
#include "pipeline/prompt.hpp"
#include "pipeline/provider.hpp"
