#pragma once

// Umbrella header.

#include "nnrad/ad.hpp"
#include "nnrad/analysis.hpp"
#include "nnrad/errors.hpp"
#include "nnrad/jacobian_check.hpp"
#include "nnrad/linalg.hpp"
#include "nnrad/models/oscillators.hpp"
#include "nnrad/models/rotor.hpp"
#include "nnrad/models/sfd.hpp"
#include "nnrad/newmark.hpp"
#include "nnrad/quadrature.hpp"
#include "nnrad/rk4.hpp"
#include "nnrad/system.hpp"
#include "nnrad/trajectory.hpp"
