#pragma once

#include "critwave/types.hpp"

namespace critwave {

/// (a W_lambda chi, 0) where chi = 1 on [0, R_c] and falls to 0 at 2 R_c
/// (quintic smoothstep). R_c = 0 leaves W untruncated.
WaveState scaled_ground_state(const RadialGrid& grid, double a, double lambda, double truncation_radius);

/// Support radius of scaled_ground_state: 2 R_c (infinite when untruncated).
double scaled_ground_state_support(double truncation_radius);

/// (A exp(-((r - c)/w)^2), 0), set to zero beyond c + 6 w.
WaveState gaussian_bump(const RadialGrid& grid, double amplitude, double center, double width);

double gaussian_bump_support(double center, double width);

}  // namespace critwave
