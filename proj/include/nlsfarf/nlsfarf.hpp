#pragma once
// Convenience umbrella: pulls in the whole library.

#include "nlsfarf/bogoliubov.hpp"
#include "nlsfarf/config.hpp"
#include "nlsfarf/cutoffs.hpp"
#include "nlsfarf/energy.hpp"
#include "nlsfarf/experiments.hpp"
#include "nlsfarf/field.hpp"
#include "nlsfarf/grid.hpp"
#include "nlsfarf/initial_data.hpp"
#include "nlsfarf/metrics.hpp"
#include "nlsfarf/nonlinearity.hpp"
#include "nlsfarf/parallel.hpp"
#include "nlsfarf/potential_analysis.hpp"
#include "nlsfarf/quadrature.hpp"
#include "nlsfarf/rng.hpp"
#include "nlsfarf/snapshot.hpp"
#include "nlsfarf/solver.hpp"
#include "nlsfarf/spectral.hpp"
