#pragma once

// Umbrella header for the closed-form library. The number-basis reference
// implementation lives separately in branchspan/fock_oracle.hpp.

#include "branchspan/errors.hpp"
#include "branchspan/linalg.hpp"
#include "branchspan/gaussian.hpp"
#include "branchspan/manifold.hpp"
#include "branchspan/diagnostics.hpp"
#include "branchspan/entanglement.hpp"
