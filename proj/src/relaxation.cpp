#include "fracdiff/relaxation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "fracdiff/errors.hpp"

namespace fracdiff {
namespace detail {

SolverMesh build_solver_mesh(const TimeGrid& grid, double alpha_max, double lambda_max,
                             Refinement refine) {
    const std::size_t n_steps = grid.steps();
    SolverMesh mesh;
    mesh.dt = grid.dt();

    if (refine == Refinement::None) {
        mesh.t.resize(n_steps + 1);
        mesh.out.resize(n_steps + 1);
        for (std::size_t j = 0; j <= n_steps; ++j) {
            mesh.t[j] = grid.node(j);
            mesh.out[j] = j;
        }
        mesh.uniform_from = 0;
        return mesh;
    }

    const std::size_t band_cells = std::min<std::size_t>(32, n_steps);
    const std::size_t band_nodes = 4 * band_cells;
    const double band_end = static_cast<double>(band_cells) * mesh.dt;

    std::vector<double> nodes;
    nodes.reserve(n_steps + band_nodes + 81);
    for (std::size_t j = 0; j <= n_steps; ++j) nodes.push_back(grid.node(j));

    // cubically graded band across the first cells
    std::vector<double> graded;
    graded.reserve(band_nodes);
    for (std::size_t i = 1; i < band_nodes; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(band_nodes);
        graded.push_back(band_end * (frac * frac * frac));
    }

    // geometric tail below the band until the relaxation time scale of the
    // stiffest expected mode is resolved
    const double tau_star = std::pow(1.0 + lambda_max, -1.0 / alpha_max);
    double x = graded.front();
    for (int level = 0; x > 0.25 * tau_star && level < 80; ++level) {
        x *= 0.25;
        nodes.push_back(x);
    }
    nodes.insert(nodes.end(), graded.begin(), graded.end());

    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    mesh.t = std::move(nodes);

    mesh.out.resize(n_steps + 1);
    for (std::size_t j = 0; j <= n_steps; ++j) {
        const auto it = std::lower_bound(mesh.t.begin(), mesh.t.end(), grid.node(j));
        assert(it != mesh.t.end() && *it == grid.node(j));
        mesh.out[j] = static_cast<std::size_t>(it - mesh.t.begin());
    }
    mesh.uniform_from = mesh.out[band_cells];
    return mesh;
}

std::vector<double> step_ivp(const MemoryKernel& kernel, const SolverMesh& mesh,
                             std::span<const double> lam_nodes,
                             std::span<const double> f_nodes, double w0) {
    const std::size_t last = mesh.t.size() - 1;
    if (lam_nodes.size() != mesh.t.size() || f_nodes.size() != mesh.t.size())
        throw std::invalid_argument("step_ivp: node sample length must match the mesh");

    std::vector<double> dtau(last);
    for (std::size_t j = 0; j < last; ++j) dtau[j] = mesh.t[j + 1] - mesh.t[j];

    // Toeplitz weight table for the uniform portion of the mesh: the weight
    // for a cell at lag m depends only on m there, so each value is computed
    // once instead of per step.
    const std::size_t uf = mesh.uniform_from;
    std::vector<double> lag_mass;
    if (uf < last) {
        const std::size_t max_lag = last - uf;
        lag_mass.resize(max_lag + 1, 0.0);
        for (std::size_t m = 1; m <= max_lag; ++m)
            lag_mass[m] = kernel.mass_between(static_cast<double>(m - 1) * mesh.dt,
                                              static_cast<double>(m) * mesh.dt);
    }

    std::vector<double> w(last + 1);
    std::vector<double> dw(last);
    w[0] = w0;

    for (std::size_t n = 1; n <= last; ++n) {
        const double tn = mesh.t[n];

        double hist = 0.0;
        const std::size_t direct_end = std::min(n - 1, uf);
        for (std::size_t j = 0; j < direct_end; ++j) {
            const double cell = kernel.mass_between(tn - mesh.t[j + 1], tn - mesh.t[j]);
            hist += (cell / dtau[j]) * dw[j];
        }
        for (std::size_t j = uf; j + 1 < n; ++j)
            hist += (lag_mass[n - j] / dtau[j]) * dw[j];

        double c_last;
        if (n - 1 >= uf)
            c_last = lag_mass[1] / dtau[n - 1];
        else
            c_last = kernel.mass_between(0.0, tn - mesh.t[n - 1]) / dtau[n - 1];

        w[n] = (f_nodes[n] + c_last * w[n - 1] - hist) / (c_last + lam_nodes[n]);
        dw[n - 1] = w[n] - w[n - 1];
    }
    return w;
}

std::vector<double> resample_to_mesh(std::span<const double> uniform_samples,
                                     const SolverMesh& mesh) {
    assert(uniform_samples.size() == mesh.out.size());
    std::vector<double> v(mesh.t.size());
    for (std::size_t j = 0; j + 1 < mesh.out.size(); ++j) {
        const std::size_t a = mesh.out[j];
        const std::size_t b = mesh.out[j + 1];
        v[a] = uniform_samples[j];
        const double ta = mesh.t[a];
        const double width = mesh.t[b] - ta;
        for (std::size_t m = a + 1; m < b; ++m) {
            const double theta = (mesh.t[m] - ta) / width;
            v[m] = (1.0 - theta) * uniform_samples[j] + theta * uniform_samples[j + 1];
        }
    }
    v[mesh.out.back()] = uniform_samples[mesh.out.size() - 1];
    return v;
}

namespace {

std::vector<double> extract_output(const std::vector<double>& mesh_values,
                                   const SolverMesh& mesh) {
    std::vector<double> out(mesh.out.size());
    for (std::size_t j = 0; j < mesh.out.size(); ++j) out[j] = mesh_values[mesh.out[j]];
    return out;
}

void require_steppable(const MemoryKernel& kernel) {
    if (!kernel.admissible_variant())
        throw capability_error("relaxation stepping is not available for this kernel variant");
}

} // namespace
} // namespace detail

RelaxationSolution solve_relaxation(const MemoryKernel& kernel, double lambda,
                                    const TimeGrid& grid, Refinement refine) {
    if (!(lambda > 0.0))
        throw std::domain_error("solve_relaxation: lambda must be positive");
    detail::require_steppable(kernel);

    const auto mesh = detail::build_solver_mesh(grid, kernel.max_exponent(), lambda, refine);
    const std::vector<double> lam(mesh.t.size(), lambda);
    const std::vector<double> rhs(mesh.t.size(), 0.0);
    const auto w = detail::step_ivp(kernel, mesh, lam, rhs, 1.0);
    return RelaxationSolution{grid, detail::extract_output(w, mesh), lambda, kernel};
}

RelaxationSolution solve_scalar_ivp(const MemoryKernel& kernel, double lambda,
                                    std::span<const double> f_samples, double w0,
                                    const TimeGrid& grid, Refinement refine) {
    if (!(lambda > 0.0))
        throw std::domain_error("solve_scalar_ivp: lambda must be positive");
    if (f_samples.size() != grid.steps() + 1)
        throw std::invalid_argument("solve_scalar_ivp: f_samples length must be N + 1");
    detail::require_steppable(kernel);

    const auto mesh = detail::build_solver_mesh(grid, kernel.max_exponent(), lambda, refine);
    const std::vector<double> lam(mesh.t.size(), lambda);
    const auto rhs = detail::resample_to_mesh(f_samples, mesh);
    const auto w = detail::step_ivp(kernel, mesh, lam, rhs, w0);
    return RelaxationSolution{grid, detail::extract_output(w, mesh), lambda, kernel};
}

std::vector<double> duhamel(const RelaxationSolution& homog,
                            std::span<const double> f_samples, double lambda) {
    const std::size_t count = homog.values.size();
    if (f_samples.size() != count)
        throw std::invalid_argument("duhamel: f_samples length must match the solution grid");
    if (!(lambda > 0.0) || lambda != homog.lambda)
        throw std::invalid_argument("duhamel: lambda does not match the homogeneous solution");

    std::vector<double> dwh(count - 1);
    for (std::size_t m = 0; m + 1 < count; ++m) dwh[m] = homog.values[m + 1] - homog.values[m];

    std::vector<double> u(count, 0.0);
    for (std::size_t n = 1; n < count; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double fbar = 0.5 * (f_samples[j] + f_samples[j + 1]);
            acc += fbar * dwh[n - 1 - j];
        }
        u[n] = -acc / lambda;
    }
    return u;
}

} // namespace fracdiff
