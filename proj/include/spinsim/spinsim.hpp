#pragma once

// Umbrella header for the spinsim library: mean-field dynamics of a 1D
// spin-1 condensate in a harmonic trap with a removable gaussian barrier.

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/evolution.hpp"
#include "spinsim/fft.hpp"
#include "spinsim/grid.hpp"
#include "spinsim/groundstate.hpp"
#include "spinsim/hamiltonian.hpp"
#include "spinsim/io.hpp"
#include "spinsim/observables.hpp"
#include "spinsim/run_config.hpp"
#include "spinsim/runner.hpp"
#include "spinsim/scenarios.hpp"
#include "spinsim/spectral.hpp"
#include "spinsim/state.hpp"
#include "spinsim/units.hpp"
