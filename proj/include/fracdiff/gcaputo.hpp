#pragma once

#include <cstddef>
#include <span>

#include "fracdiff/kernel.hpp"
#include "fracdiff/time_grid.hpp"

namespace fracdiff {

// Product-integration approximation of D_(g)u(t_n) on the uniform grid:
//   sum_{j=0}^{n-1} W_{n,j} (u_{j+1} - u_j) / dt,
// i.e. exact integration of g against the piecewise-linear interpolant of u.
// n = 0 is rejected: the scheme does not define a derivative at t = 0.
double apply_derivative(const MemoryKernel& kernel, std::span<const double> samples,
                        const TimeGrid& grid, std::size_t n);

} // namespace fracdiff
