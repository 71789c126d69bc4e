#pragma once

#include "napt/constants.hpp"
#include "napt/energy.hpp"
#include "napt/engines.hpp"
#include "napt/estimates.hpp"
#include "napt/graph.hpp"
#include "napt/graph_engine.hpp"
#include "napt/io.hpp"
#include "napt/model_algebra.hpp"
#include "napt/pl_metric.hpp"
#include "napt/rational.hpp"
#include "napt/sampling.hpp"
#include "napt/svg.hpp"
#include "napt/toric.hpp"
#include "napt/toric_envelope.hpp"
#include "napt/toric_solver.hpp"
