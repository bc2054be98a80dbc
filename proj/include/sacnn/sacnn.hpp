#pragma once

// Umbrella header.

#include "sacnn/annealer.hpp"
#include "sacnn/corpus.hpp"
#include "sacnn/error.hpp"
#include "sacnn/evaluator.hpp"
#include "sacnn/flops.hpp"
#include "sacnn/pareto.hpp"
#include "sacnn/random.hpp"
#include "sacnn/report.hpp"
#include "sacnn/run_config.hpp"
#include "sacnn/search_space.hpp"
#include "sacnn/synthetic.hpp"
#include "sacnn/textcnn.hpp"
