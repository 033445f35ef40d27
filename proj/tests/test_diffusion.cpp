#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "fracdiff/diffusion.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/gcaputo.hpp"

using fracdiff::CoefficientPath;
using fracdiff::DiffusionProblem;
using fracdiff::MemoryKernel;
using fracdiff::Mode;
using fracdiff::Refinement;
using fracdiff::solve;
using fracdiff::solve_mode;
using fracdiff::SpectralModel;
using fracdiff::TimeGrid;

namespace {

using complexd = std::complex<double>;

DiffusionProblem single_mode_problem(double eigenvalue, double s, CoefficientPath coeffs,
                                     complexd u0, const TimeGrid& grid,
                                     Refinement refine = Refinement::Auto) {
    return DiffusionProblem{SpectralModel({Mode{0, eigenvalue, 1.0}}, 2.0, "probe"),
                            MemoryKernel::caputo_power(0.5),
                            s,
                            std::move(coeffs),
                            {u0},
                            {},
                            grid,
                            refine};
}

} // namespace

TEST_CASE("unit coefficients reduce a torus mode to scalar relaxation") {
    const TimeGrid grid(1.0, 256);
    const auto model = SpectralModel::torus_laplacian(1, 1, 8);
    const double eig = model.modes()[5].eigenvalue; // xi = +1

    DiffusionProblem problem{model,
                             MemoryKernel::caputo_power(0.5),
                             1.0,
                             CoefficientPath::constant(1.0, 0.0, grid.steps() + 1),
                             std::vector<complexd>(model.mode_count(), {0.0, 0.0}),
                             {},
                             grid,
                             Refinement::Auto};
    problem.initial[5] = 1.0;

    const auto series = solve_mode(problem, 5);
    const auto scalar = fracdiff::solve_relaxation(problem.kernel, eig, grid);
    for (std::size_t n = 0; n < series.size(); ++n) {
        CHECK(series[n].real() == scalar.values[n]);
        CHECK(series[n].imag() == 0.0);
    }
}

TEST_CASE("mode decay matches the mittag-leffler solution") {
    const TimeGrid grid(1.0, 512);
    const auto problem = single_mode_problem(
        2.0, 1.0, CoefficientPath::constant(1.0, 0.0, grid.steps() + 1), {1.0, 0.0}, grid);
    const auto series = solve_mode(problem, 0);

    double worst = 0.0;
    for (std::size_t n = 1; n < series.size(); ++n) {
        const double exact =
            fracdiff::mittag_leffler(0.5, -2.0 * std::sqrt(grid.node(n)));
        worst = std::max(worst, std::abs(series[n].real() - exact));
    }
    CHECK(worst < 1e-3);
    CHECK(std::abs(series[512].real() - 0.25539567631050574387) < 1e-3);
}

TEST_CASE("zero eigenvalue leaves only the zero-order term") {
    const TimeGrid grid(1.0, 128);
    const auto problem = single_mode_problem(
        0.0, 0.5, CoefficientPath::constant(0.0, 0.5, grid.steps() + 1), {1.0, 0.0}, grid);
    const auto series = solve_mode(problem, 0);
    const auto scalar = fracdiff::solve_relaxation(problem.kernel, 0.5, grid);
    for (std::size_t n = 0; n < series.size(); ++n)
        CHECK(series[n].real() == scalar.values[n]);
}

TEST_CASE("zero data gives the zero trajectory") {
    const TimeGrid grid(1.0, 64);
    const auto model = SpectralModel::torus_laplacian(1, 1, 8);
    DiffusionProblem problem{model,
                             MemoryKernel::caputo_power(0.5),
                             1.0,
                             CoefficientPath::constant(1.0, 0.5, grid.steps() + 1),
                             std::vector<complexd>(model.mode_count(), {0.0, 0.0}),
                             {},
                             grid,
                             Refinement::Auto};
    const auto trajectory = solve(problem);
    for (const auto& series : trajectory.mode_series)
        for (const auto& z : series) CHECK(z == complexd{0.0, 0.0});
}

TEST_CASE("single nonzero mode stays single") {
    const TimeGrid grid(1.0, 64);
    const auto model = SpectralModel::torus_laplacian(1, 1, 8);
    DiffusionProblem problem{model,
                             MemoryKernel::caputo_power(0.5),
                             1.0,
                             CoefficientPath::constant(1.0, 0.5, grid.steps() + 1),
                             std::vector<complexd>(model.mode_count(), {0.0, 0.0}),
                             {},
                             grid,
                             Refinement::Auto};
    problem.initial[2] = {0.7, -0.1};
    const auto trajectory = solve(problem);
    for (std::size_t i = 0; i < trajectory.mode_series.size(); ++i)
        for (const auto& z : trajectory.mode_series[i]) {
            if (i == 2) continue;
            CHECK(z == complexd{0.0, 0.0});
        }
    CHECK(trajectory.mode_series[2][0] == complexd{0.7, -0.1});
}

TEST_CASE("homogeneous solves contract the initial data") {
    const TimeGrid grid(1.0, 256);
    const auto model = SpectralModel::torus_laplacian(1, 1, 16);
    std::vector<complexd> u0(model.mode_count());
    std::mt19937_64 rng(11);
    const auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (auto& c : u0) c = {2.0 * u01() - 1.0, 2.0 * u01() - 1.0};

    std::vector<double> a(grid.steps() + 1);
    std::vector<double> b(grid.steps() + 1);
    for (std::size_t n = 0; n <= grid.steps(); ++n) {
        a[n] = 1.0 + 0.5 * grid.node(n);
        b[n] = 0.3;
    }
    DiffusionProblem problem{model,
                             MemoryKernel::caputo_power(0.5),
                             0.7,
                             CoefficientPath::from_samples(a, b),
                             u0,
                             {},
                             grid,
                             Refinement::Auto};
    const auto trajectory = solve(problem);
    for (std::size_t i = 0; i < model.mode_count(); ++i)
        for (const auto& z : trajectory.mode_series[i])
            CHECK(std::abs(z) <= std::abs(u0[i]) + 1e-10);
}

TEST_CASE("one-signed data keeps its sign") {
    const TimeGrid grid(1.0, 256);
    DiffusionProblem problem = single_mode_problem(
        1.5, 0.8, CoefficientPath::constant(1.0, 0.2, grid.steps() + 1), {1.0, 0.0}, grid);
    problem.source.assign(grid.steps() + 1, {complexd{0.0, 0.0}});
    for (std::size_t n = 0; n <= grid.steps(); ++n)
        problem.source[n][0] = 0.5 + 0.5 * std::cos(4.0 * grid.node(n));
    const auto series = solve_mode(problem, 0);
    for (const auto& z : series) CHECK(z.real() >= -1e-10);
}

TEST_CASE("lower frozen coefficients dominate the variable solution") {
    const TimeGrid grid(1.0, 256);
    std::vector<double> a(grid.steps() + 1, 0.5);
    std::vector<double> b(grid.steps() + 1);
    for (std::size_t n = 0; n <= grid.steps(); ++n) b[n] = 1.0 + grid.node(n);

    const auto varying = solve_mode(
        single_mode_problem(1.0, 1.0, CoefficientPath::from_samples(a, b), {1.0, 0.0}, grid,
                            Refinement::None),
        0);
    const auto frozen = solve_mode(
        single_mode_problem(1.0, 1.0, CoefficientPath::constant(0.5, 1.0, grid.steps() + 1),
                            {1.0, 0.0}, grid, Refinement::None),
        0);
    for (std::size_t n = 0; n < varying.size(); ++n) {
        CHECK(varying[n].real() >= -1e-12);
        CHECK(varying[n].real() <= frozen[n].real() + 1e-12);
    }
}

TEST_CASE("picard on constant coefficients settles immediately") {
    const TimeGrid grid(1.0, 256);
    const auto problem = single_mode_problem(
        1.0, 1.0, CoefficientPath::constant(1.0, 0.5, grid.steps() + 1), {1.0, 0.0}, grid);
    const auto result = fracdiff::picard_solve_mode(problem, 0);
    CHECK(result.iterations == 1);

    const auto stepped = solve_mode(problem, 0);
    double worst = 0.0;
    for (std::size_t n = 0; n < stepped.size(); ++n)
        worst = std::max(worst, std::abs(result.values[n] - stepped[n]));
    CHECK(worst < 5e-3);
}

TEST_CASE("picard agrees with stepping for drifting coefficients") {
    const TimeGrid grid(1.0, 2048);
    std::vector<double> a(grid.steps() + 1);
    std::vector<double> b(grid.steps() + 1, 0.5);
    for (std::size_t n = 0; n <= grid.steps(); ++n) a[n] = 1.0 + 0.5 * grid.node(n);

    const auto problem = single_mode_problem(1.0, 1.0, CoefficientPath::from_samples(a, b),
                                             {1.0, 0.0}, grid);
    const auto result = fracdiff::picard_solve_mode(problem, 0);
    CHECK(result.iterations >= 2);
    CHECK(result.iterations <= 30);

    const auto stepped = solve_mode(problem, 0);
    double worst = 0.0;
    for (std::size_t n = 0; n < stepped.size(); ++n)
        worst = std::max(worst, std::abs(result.values[n] - stepped[n]));
    CHECK(worst < 5e-3);
}

TEST_CASE("picard reports non-convergence") {
    const TimeGrid grid(1.0, 128);
    std::vector<double> a(grid.steps() + 1);
    std::vector<double> b(grid.steps() + 1, 0.5);
    for (std::size_t n = 0; n <= grid.steps(); ++n) a[n] = 1.0 + grid.node(n);
    const auto problem = single_mode_problem(2.0, 1.0, CoefficientPath::from_samples(a, b),
                                             {1.0, 0.0}, grid);
    CHECK_THROWS_AS(fracdiff::picard_solve_mode(problem, 0, 1, 1e-14),
                    fracdiff::convergence_error);
}

TEST_CASE("generator application closes the discrete equation") {
    const TimeGrid grid(1.0, 128);
    const auto problem = single_mode_problem(
        2.0, 1.0, CoefficientPath::constant(1.0, 0.5, grid.steps() + 1), {1.0, 0.0}, grid,
        Refinement::None);
    const auto trajectory = solve(problem);

    std::vector<double> samples(grid.steps() + 1);
    for (std::size_t n = 0; n <= grid.steps(); ++n)
        samples[n] = trajectory.mode_series[0][n].real();

    for (std::size_t n : {std::size_t{1}, std::size_t{64}, std::size_t{128}}) {
        const auto rhs = fracdiff::apply_generator(problem, trajectory, n);
        const double derivative = fracdiff::apply_derivative(problem.kernel, samples, grid, n);
        CHECK(std::abs(derivative - rhs[0].real()) < 1e-10);
        CHECK(rhs[0].imag() == 0.0);
    }
    CHECK_THROWS_AS(fracdiff::apply_generator(problem, trajectory, 0), std::domain_error);
    CHECK_THROWS_AS(fracdiff::apply_generator(problem, trajectory, grid.steps() + 1),
                    std::domain_error);
}

TEST_CASE("superposition splits into data and source parts") {
    const TimeGrid grid(1.0, 512);
    const auto model = SpectralModel::torus_laplacian(1, 1, 8);
    DiffusionProblem problem{model,
                             MemoryKernel::caputo_power(0.5),
                             1.0,
                             CoefficientPath::constant(1.0, 0.5, grid.steps() + 1),
                             std::vector<complexd>(model.mode_count(), {0.3, -0.2}),
                             {},
                             grid,
                             Refinement::Auto};
    problem.source.assign(grid.steps() + 1,
                          std::vector<complexd>(model.mode_count(), {0.0, 0.0}));
    for (std::size_t n = 0; n <= grid.steps(); ++n)
        for (std::size_t i = 0; i < model.mode_count(); ++i)
            problem.source[n][i] = complexd{std::cos(3.0 * grid.node(n)), 0.1};
    CHECK(fracdiff::splitting_residual(problem) < 1e-12);
}

TEST_CASE("mode fan-out does not depend on the thread count") {
    const TimeGrid grid(1.0, 128);
    const auto model = SpectralModel::torus_laplacian(1, 1, 16);
    std::vector<complexd> u0(model.mode_count());
    for (std::size_t i = 0; i < u0.size(); ++i)
        u0[i] = {1.0 / (1.0 + static_cast<double>(i)), 0.25};
    DiffusionProblem problem{model,
                             MemoryKernel::caputo_power(0.5),
                             0.6,
                             CoefficientPath::constant(1.0, 0.5, grid.steps() + 1),
                             u0,
                             {},
                             grid,
                             Refinement::Auto};
    const auto serial = solve(problem, 1);
    const auto fanned = solve(problem, 4);
    for (std::size_t i = 0; i < model.mode_count(); ++i)
        for (std::size_t n = 0; n <= grid.steps(); ++n)
            CHECK(serial.mode_series[i][n] == fanned.mode_series[i][n]);
}

TEST_CASE("admissibility gates") {
    const TimeGrid grid(1.0, 64);
    // no coefficient bounded away from zero
    auto starved = single_mode_problem(1.0, 1.0,
                                       CoefficientPath::constant(0.0, 0.0, grid.steps() + 1),
                                       {1.0, 0.0}, grid);
    CHECK_THROWS_AS(solve_mode(starved, 0), fracdiff::config_error);

    // sourced zero mode needs b > 0: a > 0 does not help at eigenvalue 0
    auto pumped = single_mode_problem(0.0, 1.0,
                                      CoefficientPath::constant(1.0, 0.0, grid.steps() + 1),
                                      {0.0, 0.0}, grid);
    pumped.source.assign(grid.steps() + 1, {complexd{1.0, 0.0}});
    CHECK_THROWS_AS(solve_mode(pumped, 0), fracdiff::config_error);
}

TEST_CASE("problem validation") {
    const TimeGrid grid(1.0, 64);
    auto bad_s = single_mode_problem(1.0, 1.5,
                                     CoefficientPath::constant(1.0, 0.5, grid.steps() + 1),
                                     {1.0, 0.0}, grid);
    CHECK_THROWS_AS(solve_mode(bad_s, 0), std::invalid_argument);
    auto zero_s = single_mode_problem(1.0, 0.0,
                                      CoefficientPath::constant(1.0, 0.5, grid.steps() + 1),
                                      {1.0, 0.0}, grid);
    CHECK_THROWS_AS(solve_mode(zero_s, 0), std::invalid_argument);

    CHECK_THROWS_AS(CoefficientPath::from_samples({1.0, -0.1, 1.0}, {0.0, 0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CoefficientPath::from_samples({1.0, 1.0}, {0.0, 0.0, 0.0}),
                    std::invalid_argument);

    auto short_u0 = single_mode_problem(1.0, 1.0,
                                        CoefficientPath::constant(1.0, 0.5, grid.steps() + 1),
                                        {1.0, 0.0}, grid);
    short_u0.initial.clear();
    CHECK_THROWS_AS(solve_mode(short_u0, 0), std::invalid_argument);

    auto path = CoefficientPath::constant(0.25, 1.5, 65);
    CHECK(path.a_min == 0.25);
    CHECK(path.a_max == 0.25);
    CHECK(path.b_min == 1.5);
    CHECK(path.b_max == 1.5);
}
