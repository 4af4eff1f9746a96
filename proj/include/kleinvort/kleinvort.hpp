#pragma once

#include "theta.hpp"
#include "state.hpp"
#include "hamiltonian.hpp"
#include "dynamics.hpp"
#include "integrator.hpp"
#include "reduction.hpp"
#include "sampling.hpp"
#include "selftest.hpp"
