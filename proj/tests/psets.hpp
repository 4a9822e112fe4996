/*
 * Parameter sets used across the test suite.
 */
#pragma once

#include "shiftwave/model.hpp"
#include "shiftwave/shift.hpp"

namespace swtest {

// equal invasion speeds (r2(1-h) = r3(a-1)), weak predation
inline shiftwave::ModelParams pset_a() {
    return {1.0, 1.0, 2.0, 1.0, 2.0, 0.1, 0.5, 1.5, false};
}

// faster strong prey, used for waves invading the weak-prey + predator state
inline shiftwave::ModelParams pset_b() {
    return {1.0, 1.0, 3.0, 1.0, 2.0, 0.1, 0.5, 1.5, false};
}

// efficient predator with weak predation, used for the stable-state chain
inline shiftwave::ModelParams pset_c() {
    return {1.0, 1.0, 1.0, 1.0, 3.0, 0.02, 0.5, 1.5, false};
}

inline shiftwave::ShiftProfile default_shift(double rho = 0.5) {
    return shiftwave::make_sigmoid(2.0, rho);
}

} // namespace swtest
