#pragma once

// Umbrella header: block-sparse multivariate autoregression for 5-minute
// average speed forecasting across sensor links.

#include "speedcast/errors.hpp"
#include "speedcast/time.hpp"
#include "speedcast/series.hpp"
#include "speedcast/normalizer.hpp"
#include "speedcast/layout.hpp"
#include "speedcast/regression.hpp"
#include "speedcast/solvers.hpp"
#include "speedcast/metrics.hpp"
#include "speedcast/ingest.hpp"
#include "speedcast/forecast.hpp"
#include "speedcast/svg.hpp"
