#pragma once

#include "slicescale/blockmin.hpp"
#include "slicescale/blockvector.hpp"
#include "slicescale/bridge.hpp"
#include "slicescale/error.hpp"
#include "slicescale/feasibility.hpp"
#include "slicescale/numerics.hpp"
#include "slicescale/quadratic.hpp"
#include "slicescale/scaler.hpp"
#include "slicescale/scaling_objective.hpp"
#include "slicescale/tensor.hpp"
