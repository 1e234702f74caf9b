#pragma once

#include "spinex/baselines.hpp"
#include "spinex/bench.hpp"
#include "spinex/core.hpp"
#include "spinex/diagnostics.hpp"
#include "spinex/dynamic_parameters.hpp"
#include "spinex/engine.hpp"
#include "spinex/error.hpp"
#include "spinex/forecaster.hpp"
#include "spinex/metrics.hpp"
#include "spinex/report.hpp"
#include "spinex/seasonality.hpp"
#include "spinex/segmentation.hpp"
#include "spinex/similarity.hpp"
#include "spinex/stats.hpp"
