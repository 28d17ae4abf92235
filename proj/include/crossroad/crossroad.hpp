#pragma once

#include "crossroad/errors.hpp"
#include "crossroad/quadrature.hpp"
#include "crossroad/geometry.hpp"
#include "crossroad/laplace.hpp"
#include "crossroad/outage.hpp"
#include "crossroad/montecarlo.hpp"
#include "crossroad/experiments.hpp"
#include "crossroad/presets.hpp"
#include "crossroad/csv.hpp"
