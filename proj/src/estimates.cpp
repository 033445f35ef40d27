#include "fracdiff/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracdiff/errors.hpp"
#include "fracdiff/gcaputo.hpp"

namespace fracdiff {

namespace {

bool has_nonzero(const std::vector<std::vector<std::complex<double>>>& series) {
    for (const auto& row : series)
        for (const auto& value : row)
            if (value != std::complex<double>{0.0, 0.0}) return true;
    return false;
}

// weight_i (1 + eigenvalue_i)^(2 gamma / nu), the diagonal of the squared
// gamma norm
std::vector<double> norm_factors(const SpectralModel& model, double gamma) {
    const double expo = 2.0 * gamma / model.nu();
    std::vector<double> factors(model.mode_count());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& mode = model.modes()[i];
        factors[i] = mode.weight * std::pow(1.0 + mode.eigenvalue, expo);
    }
    return factors;
}

std::vector<double> fractional_eigenvalues(const SpectralModel& model, double s) {
    std::vector<double> mu(model.mode_count());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double eig = model.modes()[i].eigenvalue;
        mu[i] = eig == 0.0 ? 0.0 : std::pow(eig, s);
    }
    return mu;
}

double weighted_norm(std::span<const double> factors,
                     std::span<const std::complex<double>> coeffs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) sum += factors[i] * std::norm(coeffs[i]);
    return std::sqrt(sum);
}

CheckVerdict verdict_within(double ratio, double bound, double tol) {
    return ratio <= bound * (1.0 + tol) ? CheckVerdict::Pass : CheckVerdict::Fail;
}

CheckResult ratio_check(std::string name, double numerator, double denominator, double bound,
                        double tol) {
    CheckResult result;
    result.name = std::move(name);
    result.bound = bound;
    result.tol = tol;
    if (denominator == 0.0) {
        result.ratio = 0.0;
        result.verdict = CheckVerdict::Vacuous;
        return result;
    }
    result.ratio = numerator / denominator;
    result.verdict = verdict_within(result.ratio, bound, tol);
    return result;
}

struct TrajectoryNorms {
    double sup_plain = 0.0;     // sup_n of the gamma norm of u(t_n)
    double sup_generator = 0.0; // sup_n of the gamma norm of (a L^s + b) u(t_n)
};

TrajectoryNorms scan_trajectory(const DiffusionProblem& problem,
                                const SolutionTrajectory& trajectory,
                                std::span<const double> factors, std::span<const double> mu) {
    const std::size_t n_modes = problem.model.mode_count();
    const std::size_t n_nodes = problem.grid.steps() + 1;
    TrajectoryNorms norms;
    for (std::size_t n = 0; n < n_nodes; ++n) {
        double plain = 0.0;
        double gen = 0.0;
        for (std::size_t i = 0; i < n_modes; ++i) {
            const double lam = problem.coeffs.a[n] * mu[i] + problem.coeffs.b[n];
            const double mag = std::norm(trajectory.mode_series[i][n]);
            plain += factors[i] * mag;
            gen += factors[i] * lam * lam * mag;
        }
        norms.sup_plain = std::max(norms.sup_plain, std::sqrt(plain));
        norms.sup_generator = std::max(norms.sup_generator, std::sqrt(gen));
    }
    return norms;
}

double sup_source_norm(const DiffusionProblem& problem, std::span<const double> factors) {
    double sup = 0.0;
    for (const auto& row : problem.source) sup = std::max(sup, weighted_norm(factors, row));
    return sup;
}

// sup_n of the gamma norm of the discrete memory derivative
// f(t_n) - (a L^s + b) u(t_n)
double sup_derivative_norm(const DiffusionProblem& problem, const SolutionTrajectory& trajectory,
                           std::span<const double> factors, std::span<const double> mu) {
    const std::size_t n_modes = problem.model.mode_count();
    const std::size_t n_nodes = problem.grid.steps() + 1;
    double sup = 0.0;
    for (std::size_t n = 0; n < n_nodes; ++n) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n_modes; ++i) {
            const double lam = problem.coeffs.a[n] * mu[i] + problem.coeffs.b[n];
            const auto defect = problem.source[n][i] - lam * trajectory.mode_series[i][n];
            sum += factors[i] * std::norm(defect);
        }
        sup = std::max(sup, std::sqrt(sum));
    }
    return sup;
}

} // namespace

std::string to_string(CheckVerdict verdict) {
    switch (verdict) {
    case CheckVerdict::Pass: return "pass";
    case CheckVerdict::Fail: return "fail";
    case CheckVerdict::Vacuous: return "vacuous";
    }
    return "fail";
}

std::vector<CheckResult> check_homogeneous(const DiffusionProblem& problem,
                                           const SolutionTrajectory& trajectory,
                                           std::span<const double> gammas,
                                           const CheckTolerances& tols) {
    if (has_nonzero(problem.source))
        throw std::invalid_argument("check_homogeneous: problem carries a source term");
    const std::size_t n_modes = problem.model.mode_count();
    const std::size_t n_nodes = problem.grid.steps() + 1;
    if (trajectory.mode_series.size() != n_modes)
        throw std::invalid_argument("check_homogeneous: trajectory does not match the model");
    for (const auto& series : trajectory.mode_series)
        if (series.size() != n_nodes)
            throw std::invalid_argument("check_homogeneous: trajectory does not match the grid");

    const auto& model = problem.model;
    const auto mu = fractional_eigenvalues(model, problem.s);
    const double smoothing_bound = 2.0 * std::max(problem.coeffs.a_max, problem.coeffs.b_max);
    const double s_nu = problem.s * model.nu();

    std::vector<CheckResult> checks;
    const auto zero_factors = norm_factors(model, 0.0);
    const auto base = scan_trajectory(problem, trajectory, zero_factors, mu);
    checks.push_back(ratio_check("MI01", base.sup_plain,
                                 weighted_norm(zero_factors, problem.initial), 1.0, tols.exact));

    for (double gamma : gammas) {
        const auto factors = norm_factors(model, gamma);
        const auto norms = scan_trajectory(problem, trajectory, factors, mu);
        checks.push_back(ratio_check("MI02", norms.sup_plain,
                                     weighted_norm(factors, problem.initial), 1.0, tols.exact));
    }

    checks.push_back(ratio_check("MI03", base.sup_generator,
                                 weighted_norm(norm_factors(model, s_nu), problem.initial),
                                 smoothing_bound, tols.scheme));

    for (double gamma : gammas) {
        const auto norms = scan_trajectory(problem, trajectory, norm_factors(model, gamma), mu);
        checks.push_back(ratio_check(
            "MI04", norms.sup_generator,
            weighted_norm(norm_factors(model, gamma + s_nu), problem.initial), smoothing_bound,
            tols.scheme));
    }
    return checks;
}

std::vector<CheckResult> check_inhomogeneous(const DiffusionProblem& problem,
                                             std::span<const double> gammas, bool use_gap,
                                             int threads, const CheckTolerances& tols) {
    if (!has_nonzero(problem.source))
        throw std::invalid_argument("check_inhomogeneous: problem carries no source term");

    const auto& model = problem.model;
    // the override leans on every mode resisting through a L^s, so the
    // relevant gap is the infimum over all eigenvalues, zero mode included
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& mode : model.modes()) gap = std::min(gap, mode.eigenvalue);
    if (use_gap && !(gap > 0.0 && problem.coeffs.a_min > 0.0))
        throw config_error(
            "check_inhomogeneous: gap override requires a positive spectral gap and a > 0");
    if (!use_gap && !(problem.coeffs.b_min > 0.0))
        throw config_error(
            "check_inhomogeneous: needs b bounded below, or a spectral gap with a > 0");
    const double lambda_min = use_gap
                                  ? problem.coeffs.a_min * std::pow(gap, problem.s) +
                                        problem.coeffs.b_min
                                  : problem.coeffs.b_min;

    DiffusionProblem sourced = problem;
    sourced.initial.assign(model.mode_count(), {0.0, 0.0});
    const auto trajectory = solve(sourced, threads);

    const auto mu = fractional_eigenvalues(model, problem.s);
    const double c_ab = std::max(problem.coeffs.a_max, problem.coeffs.b_max);
    const double uniform_bound = 1.0 / lambda_min;
    const double derivative_bound = 1.0 + 2.0 * c_ab / lambda_min;
    const double s_nu = problem.s * model.nu();

    std::vector<CheckResult> checks;
    const auto zero_factors = norm_factors(model, 0.0);
    const auto base = scan_trajectory(sourced, trajectory, zero_factors, mu);
    checks.push_back(ratio_check("I01", base.sup_plain, sup_source_norm(problem, zero_factors),
                                 uniform_bound, tols.scheme));

    for (double gamma : gammas) {
        const auto factors = norm_factors(model, gamma);
        const auto norms = scan_trajectory(sourced, trajectory, factors, mu);
        checks.push_back(ratio_check("I02", norms.sup_plain, sup_source_norm(problem, factors),
                                     uniform_bound, tols.scheme));
    }

    checks.push_back(ratio_check("I03",
                                 sup_derivative_norm(sourced, trajectory, zero_factors, mu),
                                 sup_source_norm(problem, norm_factors(model, s_nu)),
                                 derivative_bound, tols.scheme));

    for (double gamma : gammas) {
        checks.push_back(
            ratio_check("I04",
                        sup_derivative_norm(sourced, trajectory, norm_factors(model, gamma), mu),
                        sup_source_norm(problem, norm_factors(model, gamma + s_nu)),
                        derivative_bound, tols.scheme));
    }

    if (use_gap) {
        CheckResult entry;
        entry.name = "GAP";
        entry.ratio = gap;
        entry.bound = 0.0;
        entry.tol = 0.0;
        entry.verdict = gap > 0.0 ? CheckVerdict::Pass : CheckVerdict::Fail;
        checks.push_back(entry);
    }
    return checks;
}

CheckResult check_maximum_principle(const MemoryKernel& kernel, std::span<const double> values,
                                    const TimeGrid& grid) {
    if (values.size() != grid.steps() + 1)
        throw std::invalid_argument("check_maximum_principle: values must cover every node");

    std::size_t last_max = 0;
    std::size_t last_min = 0;
    double scale = 0.0;
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (values[n] >= values[last_max]) last_max = n;
        if (values[n] <= values[last_min]) last_min = n;
        scale = std::max(scale, std::abs(values[n]));
    }

    CheckResult result;
    result.name = "MAXPRIN";
    result.bound = 0.0;
    result.tol = 0.0;
    if (last_max == 0 && last_min == 0) {
        result.verdict = CheckVerdict::Vacuous;
        return result;
    }

    double slack = std::numeric_limits<double>::infinity();
    if (last_max > 0) {
        const double deriv = apply_derivative(kernel, values, grid, last_max);
        const double allowance = 1e-2 * scale * kernel.cumulative_mass(grid.node(last_max));
        slack = std::min(slack, deriv + allowance);
    }
    if (last_min > 0) {
        const double deriv = apply_derivative(kernel, values, grid, last_min);
        const double allowance = 1e-2 * scale * kernel.cumulative_mass(grid.node(last_min));
        slack = std::min(slack, allowance - deriv);
    }
    result.ratio = slack;
    result.verdict = slack >= 0.0 ? CheckVerdict::Pass : CheckVerdict::Fail;
    return result;
}

CheckResult check_sign_preservation(const MemoryKernel& kernel, double eigenvalue, double s,
                                    const CoefficientPath& coeffs,
                                    std::span<const double> f_mode, double u0_mode,
                                    const TimeGrid& grid) {
    if (f_mode.size() != grid.steps() + 1)
        throw std::invalid_argument("check_sign_preservation: f_mode must cover every node");
    bool nonneg = u0_mode >= 0.0;
    bool nonpos = u0_mode <= 0.0;
    for (double v : f_mode) {
        nonneg = nonneg && v >= 0.0;
        nonpos = nonpos && v <= 0.0;
    }
    if (!nonneg && !nonpos)
        throw std::invalid_argument("check_sign_preservation: data must not mix signs");

    DiffusionProblem problem{SpectralModel({Mode{0, eigenvalue, 1.0}}, 2.0, "mode"),
                             kernel,
                             s,
                             coeffs,
                             {std::complex<double>(u0_mode, 0.0)},
                             {},
                             grid,
                             Refinement::Auto};
    problem.source.assign(grid.steps() + 1, {std::complex<double>(0.0, 0.0)});
    for (std::size_t n = 0; n < problem.source.size(); ++n) problem.source[n][0] = f_mode[n];

    const auto series = solve_mode(problem, 0);
    double worst = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (const auto& z : series) {
        const double v = z.real();
        worst = std::min(worst, nonneg ? v : -v);
        scale = std::max(scale, std::abs(v));
    }

    CheckResult result;
    result.name = "SIGNPRES";
    result.ratio = worst;
    result.bound = 0.0;
    result.tol = 1e-10 * scale;
    result.verdict = worst >= -result.tol ? CheckVerdict::Pass : CheckVerdict::Fail;
    return result;
}

} // namespace fracdiff
