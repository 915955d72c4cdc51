#pragma once

// Convenience include for the whole library.

#include "ocq/bench.hpp"
#include "ocq/calibrated.hpp"
#include "ocq/dataset.hpp"
#include "ocq/error.hpp"
#include "ocq/estimators.hpp"
#include "ocq/mahalanobis.hpp"
#include "ocq/matrix.hpp"
#include "ocq/metrics.hpp"
#include "ocq/model_io.hpp"
#include "ocq/odin.hpp"
#include "ocq/region_search.hpp"
#include "ocq/reports.hpp"
#include "ocq/rng.hpp"
#include "ocq/threshold_quant.hpp"
