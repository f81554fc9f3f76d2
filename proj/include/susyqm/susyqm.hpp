#pragma once

#include "analytic.hpp"
#include "eth.hpp"
#include "io.hpp"
#include "matrix.hpp"
#include "numerics.hpp"
#include "random.hpp"
#include "susy.hpp"
#include "swkb.hpp"
