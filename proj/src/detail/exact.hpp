#pragma once

#include <span>

#include "rbp/geometry.hpp"

namespace rbp::detail
{

// Exact evaluation over big integers. Every finite double is a dyadic
// rational, so scaling all inputs by a common power of two yields integers.

//! Exact sign of the (d+1)x(d+1) augmented orientation determinant.
int exact_orientation_sign(std::span<Coords const> simplex);

//! Exact rank of the difference vectors p_i - p_0 (the affine dimension).
int exact_affine_rank(std::span<Coords const> points);

}  // namespace rbp::detail
