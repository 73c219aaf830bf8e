#pragma once

// Umbrella header: pulse-level simulator, gate-to-pulse compiler and
// Mz-detection tomography toolkit for a quadrupolar spin-3/2 nucleus treated
// as two fictitious qubits.

#include "quartit/common.hpp"
#include "quartit/compile.hpp"
#include "quartit/dynamics.hpp"
#include "quartit/fit.hpp"
#include "quartit/gates.hpp"
#include "quartit/io.hpp"
#include "quartit/linalg.hpp"
#include "quartit/program.hpp"
#include "quartit/random_states.hpp"
#include "quartit/spin.hpp"
#include "quartit/stateprep.hpp"
#include "quartit/system.hpp"
#include "quartit/tomography.hpp"
