#pragma once
// Convenience umbrella for the whole library.

#include "influence/bda.hpp"
#include "influence/common.hpp"
#include "influence/dataset.hpp"
#include "influence/discretize.hpp"
#include "influence/metrics.hpp"
#include "influence/pipeline.hpp"
#include "influence/predictor.hpp"
#include "influence/score.hpp"
#include "influence/simulate.hpp"
