#pragma once

#include "steinchi/coefficients.hpp"
#include "steinchi/error.hpp"
#include "steinchi/gof.hpp"
#include "steinchi/moments.hpp"
#include "steinchi/philox.hpp"
#include "steinchi/polynomial.hpp"
#include "steinchi/scalar.hpp"
#include "steinchi/simulation.hpp"
#include "steinchi/stein_operator.hpp"
#include "steinchi/test_function.hpp"
#include "steinchi/weight_spec.hpp"
