#pragma once

// Solver and verifier for the fractional nonlocal thermistor problem.

#include "fractherm/gamma.hpp"
#include "fractherm/mesh.hpp"
#include "fractherm/weights.hpp"
#include "fractherm/fractional.hpp"
#include "fractherm/model.hpp"
#include "fractherm/fixed_point_map.hpp"
#include "fractherm/solver.hpp"
#include "fractherm/verify.hpp"
#include "fractherm/io.hpp"
