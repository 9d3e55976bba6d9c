#pragma once

// Wavepacket interferometry for the two-tube electric Aharonov-Bohm setup:
// split-operator spectral propagation of the branch wavefunctions, with and
// without the image charge induced on the tube walls.

#include "abtube/analytic.hpp"
#include "abtube/config_io.hpp"
#include "abtube/errors.hpp"
#include "abtube/fft.hpp"
#include "abtube/fringes.hpp"
#include "abtube/grid.hpp"
#include "abtube/hamiltonian.hpp"
#include "abtube/potentials.hpp"
#include "abtube/probes.hpp"
#include "abtube/propagator.hpp"
#include "abtube/report_io.hpp"
#include "abtube/run_config.hpp"
#include "abtube/scenarios.hpp"
