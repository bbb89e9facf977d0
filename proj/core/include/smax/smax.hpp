#pragma once

#include "smax/ensemble.hpp"
#include "smax/fixed_point.hpp"
#include "smax/matrix_game.hpp"
#include "smax/property_checks.hpp"
#include "smax/random.hpp"
#include "smax/score_dynamics.hpp"
#include "smax/softmax.hpp"
#include "smax/types.hpp"
