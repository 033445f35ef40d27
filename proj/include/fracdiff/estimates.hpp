#pragma once

#include <span>
#include <string>
#include <vector>

#include "fracdiff/diffusion.hpp"

namespace fracdiff {

enum class CheckVerdict { Pass, Fail, Vacuous };

std::string to_string(CheckVerdict verdict);

// One verified inequality: the measured ratio, the bound it must respect,
// and the tolerance granted to the scheme. Names are drawn from the closed
// set MI01..MI04, I01..I04, MAXPRIN, SIGNPRES, GAP.
struct CheckResult {
    std::string name;
    double ratio = 0.0;
    double bound = 0.0;
    double tol = 0.0;
    CheckVerdict verdict = CheckVerdict::Pass;
};

// Slack granted on top of each asserted bound. `exact` covers inequalities
// the theory gives with constant exactly one (roundoff only), `scheme`
// covers bounds that inherit the discretization error of the solver.
struct CheckTolerances {
    double exact = 1e-8;
    double scheme = 5e-3;
};

// Decay estimates for a homogeneous trajectory:
//   MI01  sup_n |u(t_n)|_0 / |u0|_0                    <= 1
//   MI02  the same ratio in the gamma norm, per gamma   <= 1
//   MI03  sup_n |(a L^s + b) u(t_n)|_0 / |u0|_{s nu}    <= 2 max(a_max, b_max)
//   MI04  the gamma-shifted version, per gamma          <= 2 max(a_max, b_max)
std::vector<CheckResult> check_homogeneous(const DiffusionProblem& problem,
                                           const SolutionTrajectory& trajectory,
                                           std::span<const double> gammas,
                                           const CheckTolerances& tols = {});

// Uniform bounds for the zero-initial-data part of a sourced problem, driven
// by lambda_min = b_min, or a_min gap^s + b_min when the spectral gap is
// taken into account:
//   I01   sup_n |u(t_n)|_0 / sup_n |f(t_n)|_0           <= 1 / lambda_min
//   I02   the same ratio in the gamma norm, per gamma   <= 1 / lambda_min
//   I03   sup_n |Dg u(t_n)|_0 / sup_n |f(t_n)|_{s nu}   <= 1 + 2 max(a_max, b_max) / lambda_min
//   I04   the gamma-shifted version, per gamma          <= 1 + 2 max(a_max, b_max) / lambda_min
// With use_gap set, a GAP entry reporting the spectral gap is appended.
std::vector<CheckResult> check_inhomogeneous(const DiffusionProblem& problem,
                                             std::span<const double> gammas, bool use_gap,
                                             int threads = 1, const CheckTolerances& tols = {});

// Memory-derivative sign test at the latest interior extremum of a sampled
// path: at the last argmax the derivative must not be significantly
// negative, at the last argmin not significantly positive. The scheme
// tolerance scales with the path size and the kernel mass up to that node.
CheckResult check_maximum_principle(const MemoryKernel& kernel, std::span<const double> values,
                                    const TimeGrid& grid);

// Solves one mode with one-signed real data and verifies the solution keeps
// that sign. Data of mixed sign is rejected.
CheckResult check_sign_preservation(const MemoryKernel& kernel, double eigenvalue, double s,
                                    const CoefficientPath& coeffs,
                                    std::span<const double> f_mode, double u0_mode,
                                    const TimeGrid& grid);

} // namespace fracdiff
