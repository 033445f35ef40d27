#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fracdiff/kernel.hpp"
#include "fracdiff/relaxation.hpp"
#include "fracdiff/spectrum.hpp"
#include "fracdiff/time_grid.hpp"

namespace fracdiff {

// Time-dependent scalar coefficients a(t), b(t) sampled at the uniform
// nodes, together with their range. Both must be nonnegative throughout.
struct CoefficientPath {
    std::vector<double> a;
    std::vector<double> b;
    double a_min = 0.0;
    double a_max = 0.0;
    double b_min = 0.0;
    double b_max = 0.0;

    static CoefficientPath from_samples(std::vector<double> a_samples,
                                        std::vector<double> b_samples);
    static CoefficientPath constant(double a_value, double b_value, std::size_t count);
};

// Mode-space description of
//   D_(g) u + a(t) L^s u + b(t) u = f,  u(0) = u0.
// initial holds the mode coefficients of u0; source holds the coefficients
// of f at every uniform node (empty for a homogeneous problem).
struct DiffusionProblem {
    SpectralModel model;
    MemoryKernel kernel;
    double s;
    CoefficientPath coeffs;
    std::vector<std::complex<double>> initial;
    std::vector<std::vector<std::complex<double>>> source;
    TimeGrid grid;
    Refinement refine = Refinement::Auto;
};

struct SolutionTrajectory {
    TimeGrid grid;
    std::vector<std::vector<std::complex<double>>> mode_series; // [mode][node]
};

struct PicardResult {
    std::vector<std::complex<double>> values;
    int iterations = 0;
};

// Implicit product-integration stepping of a single mode. Real and
// imaginary parts decouple and are stepped independently.
std::vector<std::complex<double>> solve_mode(const DiffusionProblem& problem,
                                             std::size_t mode_index);

// All modes; with threads > 1 the modes are distributed round-robin over
// worker threads writing disjoint slots, so results do not depend on the
// thread count.
SolutionTrajectory solve(const DiffusionProblem& problem, int threads = 1);

// Independent solution route for the same mode: relaxation with the
// coefficients frozen at their upper range, then Picard iteration feeding
// the coefficient remainder back through the memory convolution.
PicardResult picard_solve_mode(const DiffusionProblem& problem, std::size_t mode_index,
                               int max_iterations = 50, double tolerance = 1e-10);

// Mode coefficients of f(t_n) - (a(t_n) L^s + b(t_n)) u(t_n), the value the
// memory derivative of the solution must take at node n.
std::vector<std::complex<double>> apply_generator(const DiffusionProblem& problem,
                                                  const SolutionTrajectory& trajectory,
                                                  std::size_t n);

// Largest absolute defect of the superposition u = (homogeneous part) +
// (zero-initial-data part) over all modes and nodes.
double splitting_residual(const DiffusionProblem& problem, int threads = 1);

} // namespace fracdiff
