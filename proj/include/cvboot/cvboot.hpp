#pragma once

#include "cvboot/core.hpp"
#include "cvboot/engine.hpp"
#include "cvboot/error.hpp"
#include "cvboot/io.hpp"
#include "cvboot/learners.hpp"
#include "cvboot/metrics.hpp"
#include "cvboot/resampling.hpp"
#include "cvboot/rng.hpp"
#include "cvboot/sim.hpp"
#include "cvboot/variance.hpp"
