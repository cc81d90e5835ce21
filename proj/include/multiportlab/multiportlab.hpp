#pragma once

// Umbrella header for the multiportlab library: directionally-unbiased
// multiport coins, scattering-network derivations, reversed-evolution
// Hamiltonians, ladder-lattice band structure, SU(2)/SU(3) decompositions,
// preparation/measurement utilities, and the network description format.

#include "core.hpp"
#include "format.hpp"
#include "multiport.hpp"
#include "scattering.hpp"
#include "hamiltonian.hpp"
#include "chain.hpp"
#include "su3.hpp"
#include "experiment.hpp"
#include "netspec.hpp"
