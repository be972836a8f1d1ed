#pragma once

// Umbrella header: the full feature-extraction / clustering / validation
// toolkit for time-series collections.

#include "polyclust/clustering.hpp"
#include "polyclust/errors.hpp"
#include "polyclust/features.hpp"
#include "polyclust/io.hpp"
#include "polyclust/metrics.hpp"
#include "polyclust/parallel.hpp"
#include "polyclust/pipeline.hpp"
#include "polyclust/polyspectra.hpp"
#include "polyclust/rng.hpp"
#include "polyclust/series.hpp"
#include "polyclust/simulate.hpp"
#include "polyclust/validation.hpp"
#include "polyclust/version.hpp"
#include "polyclust/weights.hpp"
