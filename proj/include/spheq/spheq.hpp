#pragma once

// Umbrella header.

#include "appell.hpp"
#include "axis_field.hpp"
#include "cap_exceptional.hpp"
#include "cap_measure.hpp"
#include "cap_riesz.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "point_field.hpp"
#include "quadrature.hpp"
#include "scenario.hpp"
#include "specfun.hpp"
#include "sphere.hpp"
