#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracdiff/kernel.hpp"
#include "fracdiff/special.hpp"
#include "fracdiff/time_grid.hpp"

namespace fracdiff {

// Startup handling for the implicit product-integration steppers. Solutions
// of the relaxation equation leave t = 0 with unbounded slope, so a plain
// uniform first-order scheme loses 1e-2 of absolute accuracy at the first
// few nodes. Auto inserts extra internal nodes there (graded band plus a
// geometric tail matched to the relaxation time scale) and reports values
// at the uniform output nodes only. None steps on the bare uniform grid,
// where the discrete equation holds exactly at the output nodes.
enum class Refinement { Auto, None };

struct RelaxationSolution {
    TimeGrid grid;
    std::vector<double> values; // w at the uniform nodes, length N+1
    double lambda;
    MemoryKernel kernel;
};

// Homogeneous relaxation D_(g)w + lambda w = 0, w(0) = 1, implicit stepping.
RelaxationSolution solve_relaxation(const MemoryKernel& kernel, double lambda,
                                    const TimeGrid& grid,
                                    Refinement refine = Refinement::Auto);

// Inhomogeneous scalar problem D_(g)w + lambda w = f, w(0) = w0.
RelaxationSolution solve_scalar_ivp(const MemoryKernel& kernel, double lambda,
                                    std::span<const double> f_samples, double w0,
                                    const TimeGrid& grid,
                                    Refinement refine = Refinement::Auto);

// Zero-initial-data solution from the convolution representation
//   u(t) = -(1/lambda) int_0^t f(s) w'(t-s) ds,
// with w' replaced by first differences of the discrete homogeneous solution
// and f averaged per cell (trapezoid).
std::vector<double> duhamel(const RelaxationSolution& homog,
                            std::span<const double> f_samples, double lambda);

namespace detail {

// Internal solver mesh: the uniform output nodes, a polynomially graded band
// across the first uniform cells, and a geometric tail below the band when
// the relaxation time scale (1+lambda)^(-1/alpha) is still unresolved.
struct SolverMesh {
    std::vector<double> t;        // strictly increasing, t[0] = 0
    std::vector<std::size_t> out; // out[j] = mesh index of uniform node j
    std::size_t uniform_from;     // from this index on, spacing is exactly dt
    double dt;
};

SolverMesh build_solver_mesh(const TimeGrid& grid, double alpha_max, double lambda_max,
                             Refinement refine);

// One implicit product-integration run of D_(g)w + lam(t) w = f(t), w(0) = w0
// on the mesh; lam and f are sampled at the mesh nodes. lam must be
// nonnegative at every node.
std::vector<double> step_ivp(const MemoryKernel& kernel, const SolverMesh& mesh,
                             std::span<const double> lam_nodes,
                             std::span<const double> f_nodes, double w0);

// piecewise-linear resampling of uniform-grid samples onto the mesh nodes;
// exact at the output nodes
std::vector<double> resample_to_mesh(std::span<const double> uniform_samples,
                                     const SolverMesh& mesh);

} // namespace detail
} // namespace fracdiff
