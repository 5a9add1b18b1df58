#pragma once

// Umbrella header for the pure-state reconstruction library.
#include "pio/catalog.hpp"
#include "pio/hilbert.hpp"
#include "pio/imposition.hpp"
#include "pio/metrics.hpp"
#include "pio/rng.hpp"
#include "pio/serialize.hpp"
#include "pio/solver.hpp"
#include "pio/tolerances.hpp"
