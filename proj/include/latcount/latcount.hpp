#pragma once

// Umbrella header.

#include "latcount/arith.hpp"
#include "latcount/counting.hpp"
#include "latcount/genfun.hpp"
#include "latcount/linalg.hpp"
#include "latcount/matrix.hpp"
#include "latcount/parametric.hpp"
#include "latcount/polyhedron.hpp"
#include "latcount/problem_io.hpp"
#include "latcount/snf.hpp"
