#include "fracdiff/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fracdiff/errors.hpp"

namespace fracdiff {

namespace {

void validate_problem(const DiffusionProblem& problem) {
    const std::size_t n_modes = problem.model.mode_count();
    const std::size_t n_nodes = problem.grid.steps() + 1;
    if (!(problem.s > 0.0) || !(problem.s <= 1.0))
        throw std::invalid_argument("diffusion problem: s must lie in (0, 1]");
    if (problem.initial.size() != n_modes)
        throw std::invalid_argument("diffusion problem: initial data must have one entry per mode");
    if (problem.coeffs.a.size() != n_nodes || problem.coeffs.b.size() != n_nodes)
        throw std::invalid_argument("diffusion problem: coefficient samples must cover every node");
    if (!problem.source.empty()) {
        if (problem.source.size() != n_nodes)
            throw std::invalid_argument("diffusion problem: source must be sampled at every node");
        for (const auto& row : problem.source)
            if (row.size() != n_modes)
                throw std::invalid_argument(
                    "diffusion problem: source rows must have one entry per mode");
    }
}

bool mode_is_sourced(const DiffusionProblem& problem, std::size_t mode_index) {
    for (const auto& row : problem.source)
        if (row[mode_index] != std::complex<double>{0.0, 0.0}) return true;
    return false;
}

void require_mode_admissible(const DiffusionProblem& problem, double eigenvalue, bool sourced) {
    if (sourced) {
        if (problem.coeffs.b_min > 0.0) return;
        if (eigenvalue > 0.0 && problem.coeffs.a_min > 0.0) return;
        throw config_error(
            "solve_mode: a sourced mode needs b > 0, or a > 0 with a positive eigenvalue");
    }
    if (problem.coeffs.a_min > 0.0 || problem.coeffs.b_min > 0.0) return;
    throw config_error("solve_mode: needs a or b bounded away from zero");
}

double fractional_eigenvalue(double eigenvalue, double s) {
    return eigenvalue == 0.0 ? 0.0 : std::pow(eigenvalue, s);
}

std::vector<std::complex<double>> duhamel_complex(std::span<const double> homog,
                                                  std::span<const std::complex<double>> f,
                                                  double lambda) {
    const std::size_t count = homog.size();
    std::vector<double> dwh(count - 1);
    for (std::size_t m = 0; m + 1 < count; ++m) dwh[m] = homog[m + 1] - homog[m];

    std::vector<std::complex<double>> u(count, {0.0, 0.0});
    for (std::size_t n = 1; n < count; ++n) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const std::complex<double> fbar = 0.5 * (f[j] + f[j + 1]);
            acc += fbar * dwh[n - 1 - j];
        }
        u[n] = -acc / lambda;
    }
    return u;
}

std::vector<std::complex<double>> solve_mode_validated(const DiffusionProblem& problem,
                                                       std::size_t mode_index) {
    const std::size_t n_nodes = problem.grid.steps() + 1;
    const double eig = problem.model.modes()[mode_index].eigenvalue;
    const bool sourced = mode_is_sourced(problem, mode_index);
    require_mode_admissible(problem, eig, sourced);

    const std::complex<double> u0 = problem.initial[mode_index];
    if (!sourced && u0 == std::complex<double>{0.0, 0.0})
        return std::vector<std::complex<double>>(n_nodes, {0.0, 0.0});

    const double mu = fractional_eigenvalue(eig, problem.s);
    const double lam_max = problem.coeffs.a_max * mu + problem.coeffs.b_max;
    const auto mesh = detail::build_solver_mesh(problem.grid, problem.kernel.max_exponent(),
                                                lam_max, problem.refine);

    std::vector<double> lam_uniform(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n)
        lam_uniform[n] = problem.coeffs.a[n] * mu + problem.coeffs.b[n];
    const auto lam = detail::resample_to_mesh(lam_uniform, mesh);

    std::vector<double> f_re(n_nodes, 0.0);
    std::vector<double> f_im(n_nodes, 0.0);
    bool need_im = u0.imag() != 0.0;
    if (sourced) {
        for (std::size_t n = 0; n < n_nodes; ++n) {
            f_re[n] = problem.source[n][mode_index].real();
            f_im[n] = problem.source[n][mode_index].imag();
            need_im = need_im || f_im[n] != 0.0;
        }
    }

    const auto rhs_re = detail::resample_to_mesh(f_re, mesh);
    const auto w_re = detail::step_ivp(problem.kernel, mesh, lam, rhs_re, u0.real());

    std::vector<double> w_im;
    if (need_im) {
        const auto rhs_im = detail::resample_to_mesh(f_im, mesh);
        w_im = detail::step_ivp(problem.kernel, mesh, lam, rhs_im, u0.imag());
    }

    std::vector<std::complex<double>> series(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        const std::size_t at = mesh.out[j];
        series[j] = {w_re[at], need_im ? w_im[at] : 0.0};
    }
    return series;
}

} // namespace

CoefficientPath CoefficientPath::from_samples(std::vector<double> a_samples,
                                              std::vector<double> b_samples) {
    if (a_samples.size() != b_samples.size() || a_samples.empty())
        throw std::invalid_argument("coefficients: a and b need the same nonzero sample count");
    CoefficientPath path;
    path.a = std::move(a_samples);
    path.b = std::move(b_samples);
    path.a_min = *std::min_element(path.a.begin(), path.a.end());
    path.a_max = *std::max_element(path.a.begin(), path.a.end());
    path.b_min = *std::min_element(path.b.begin(), path.b.end());
    path.b_max = *std::max_element(path.b.begin(), path.b.end());
    if (!(path.a_min >= 0.0) || !(path.b_min >= 0.0))
        throw std::invalid_argument("coefficients: a and b must be nonnegative");
    for (double v : path.a)
        if (!std::isfinite(v)) throw std::invalid_argument("coefficients: a must be finite");
    for (double v : path.b)
        if (!std::isfinite(v)) throw std::invalid_argument("coefficients: b must be finite");
    return path;
}

CoefficientPath CoefficientPath::constant(double a_value, double b_value, std::size_t count) {
    return from_samples(std::vector<double>(count, a_value), std::vector<double>(count, b_value));
}

std::vector<std::complex<double>> solve_mode(const DiffusionProblem& problem,
                                             std::size_t mode_index) {
    validate_problem(problem);
    if (mode_index >= problem.model.mode_count())
        throw std::invalid_argument("solve_mode: mode index out of range");
    return solve_mode_validated(problem, mode_index);
}

SolutionTrajectory solve(const DiffusionProblem& problem, int threads) {
    validate_problem(problem);
    const std::size_t n_modes = problem.model.mode_count();

    SolutionTrajectory traj{problem.grid, {}};
    traj.mode_series.resize(n_modes);

    const std::size_t workers =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, n_modes);
    if (workers == 1) {
        for (std::size_t i = 0; i < n_modes; ++i)
            traj.mode_series[i] = solve_mode_validated(problem, i);
        return traj;
    }

    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t k = 0; k < workers; ++k) {
        pool.emplace_back([&, k] {
            try {
                for (std::size_t i = k; i < n_modes; i += workers)
                    traj.mode_series[i] = solve_mode_validated(problem, i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& worker : pool) worker.join();
    if (failure) std::rethrow_exception(failure);
    return traj;
}

PicardResult picard_solve_mode(const DiffusionProblem& problem, std::size_t mode_index,
                               int max_iterations, double tolerance) {
    validate_problem(problem);
    if (mode_index >= problem.model.mode_count())
        throw std::invalid_argument("picard_solve_mode: mode index out of range");
    if (max_iterations < 1)
        throw std::invalid_argument("picard_solve_mode: needs at least one iteration");

    const std::size_t n_nodes = problem.grid.steps() + 1;
    const double eig = problem.model.modes()[mode_index].eigenvalue;
    const bool sourced = mode_is_sourced(problem, mode_index);
    require_mode_admissible(problem, eig, sourced);

    const std::complex<double> u0 = problem.initial[mode_index];
    const double mu = fractional_eigenvalue(eig, problem.s);
    const double frozen = problem.coeffs.a_max * mu + problem.coeffs.b_max;
    if (frozen == 0.0) return {std::vector<std::complex<double>>(n_nodes, u0), 0};

    const auto relax = solve_relaxation(problem.kernel, frozen, problem.grid, problem.refine);
    const auto& w = relax.values;

    std::vector<std::complex<double>> f_hat(n_nodes, {0.0, 0.0});
    if (sourced)
        for (std::size_t n = 0; n < n_nodes; ++n) f_hat[n] = problem.source[n][mode_index];

    const auto with_homog = [&](std::vector<std::complex<double>> part) {
        for (std::size_t n = 0; n < n_nodes; ++n) part[n] += u0 * w[n];
        return part;
    };

    auto current = with_homog(duhamel_complex(w, f_hat, frozen));
    std::vector<std::complex<double>> h(n_nodes);
    double diff = 0.0;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        for (std::size_t n = 0; n < n_nodes; ++n) {
            const double slack = mu * (problem.coeffs.a_max - problem.coeffs.a[n]) +
                                 (problem.coeffs.b_max - problem.coeffs.b[n]);
            h[n] = f_hat[n] + slack * current[n];
        }
        auto next = with_homog(duhamel_complex(w, h, frozen));

        diff = 0.0;
        double scale = 0.0;
        for (std::size_t n = 0; n < n_nodes; ++n) {
            diff = std::max(diff, std::abs(next[n] - current[n]));
            scale = std::max(scale, std::abs(next[n]));
        }
        current = std::move(next);
        if (diff <= tolerance * (1.0 + scale)) return {std::move(current), iter};
    }
    throw convergence_error("picard_solve_mode: iteration did not converge", diff);
}

std::vector<std::complex<double>> apply_generator(const DiffusionProblem& problem,
                                                  const SolutionTrajectory& trajectory,
                                                  std::size_t n) {
    validate_problem(problem);
    const std::size_t n_modes = problem.model.mode_count();
    if (trajectory.mode_series.size() != n_modes)
        throw std::invalid_argument("apply_generator: trajectory does not match the model");
    if (n == 0 || n > problem.grid.steps())
        throw std::domain_error("apply_generator: node index must lie in 1..N");

    std::vector<std::complex<double>> out(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        const double mu = fractional_eigenvalue(problem.model.modes()[i].eigenvalue, problem.s);
        const double lam = problem.coeffs.a[n] * mu + problem.coeffs.b[n];
        const std::complex<double> f_hat =
            problem.source.empty() ? std::complex<double>{0.0, 0.0} : problem.source[n][i];
        out[i] = f_hat - lam * trajectory.mode_series[i][n];
    }
    return out;
}

double splitting_residual(const DiffusionProblem& problem, int threads) {
    validate_problem(problem);

    DiffusionProblem homog = problem;
    homog.source.clear();
    DiffusionProblem sourced = problem;
    sourced.initial.assign(problem.model.mode_count(), {0.0, 0.0});

    const auto full = solve(problem, threads);
    const auto part_h = solve(homog, threads);
    const auto part_s = solve(sourced, threads);

    double residual = 0.0;
    for (std::size_t i = 0; i < full.mode_series.size(); ++i)
        for (std::size_t n = 0; n < full.mode_series[i].size(); ++n) {
            const auto defect =
                full.mode_series[i][n] - part_h.mode_series[i][n] - part_s.mode_series[i][n];
            residual = std::max(residual, std::abs(defect));
        }
    return residual;
}

} // namespace fracdiff
