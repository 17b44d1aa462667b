#pragma once

// Umbrella header for the stochastic Fredholm / covering-constant toolkit.

#include "stochfred/basis.hpp"
#include "stochfred/config.hpp"
#include "stochfred/covering_rate.hpp"
#include "stochfred/dense.hpp"
#include "stochfred/diagnostics.hpp"
#include "stochfred/diagonal.hpp"
#include "stochfred/errors.hpp"
#include "stochfred/expr.hpp"
#include "stochfred/grid_function.hpp"
#include "stochfred/kernel.hpp"
#include "stochfred/lp_matrix.hpp"
#include "stochfred/quadrature.hpp"
#include "stochfred/report.hpp"
#include "stochfred/reproduce.hpp"
#include "stochfred/runner.hpp"
#include "stochfred/solvers.hpp"
#include "stochfred/verification.hpp"
