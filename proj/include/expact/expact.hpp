#pragma once

// Umbrella header: the full functional-construction toolkit.

#include "activation.hpp"
#include "errors.hpp"
#include "functional.hpp"
#include "io.hpp"
#include "oracles.hpp"
#include "quadrature.hpp"
#include "simulate.hpp"
#include "specfun.hpp"
#include "trajectory.hpp"
#include "verify.hpp"
#include "version.hpp"
