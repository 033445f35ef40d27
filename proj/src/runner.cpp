#include "fracdiff/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracdiff/diffusion.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/estimates.hpp"
#include "fracdiff/gcaputo.hpp"
#include "fracdiff/kernel.hpp"
#include "fracdiff/relaxation.hpp"
#include "fracdiff/spectrum.hpp"

namespace fracdiff {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string fmt(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

// uniform draw in [0, 1) from the top 53 bits, so the stream does not depend
// on library distribution internals
double next_u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw config_error("config: out: cannot write " + path.string());
    return stream;
}

std::filesystem::path prepare_out_dir(const RunConfig& config) {
    std::filesystem::path dir(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw config_error("config: out: cannot create directory " + config.out_dir);
    return dir;
}

MemoryKernel make_kernel(const RunConfig& config) {
    if (config.kernel_variant == "caputo") return MemoryKernel::caputo_power(config.kernel_alpha);
    if (config.kernel_variant == "exponential")
        return MemoryKernel::exponential_nonadmissible(config.kernel_alpha);
    if (config.kernel_terms.empty())
        throw config_error("config: kernel.terms: required for the " + config.kernel_variant +
                           " variant");
    if (config.kernel_variant == "multiterm") return MemoryKernel::multi_term(config.kernel_terms);
    return MemoryKernel::distributed_order(config.kernel_terms);
}

TimeGrid make_grid(const RunConfig& config) {
    return TimeGrid(config.horizon, static_cast<std::size_t>(config.steps));
}

SpectralModel make_model(const RunConfig& config) {
    if (config.backend == "torus")
        return SpectralModel::torus_laplacian(config.dim, config.power, config.points);
    return SpectralModel::heisenberg_h1(config.m_max, config.band_min, config.band_max,
                                        config.band_nodes);
}

Refinement make_refinement(const RunConfig& config) {
    return config.refinement == "none" ? Refinement::None : Refinement::Auto;
}

std::vector<double> realize_coeff(const SpecEntry& spec, const std::string& key,
                                  const TimeGrid& grid) {
    const std::size_t count = grid.steps() + 1;
    if (spec.kind == "constant") return std::vector<double>(count, spec.numbers[0]);
    if (spec.kind == "linear") {
        std::vector<double> values(count);
        for (std::size_t n = 0; n < count; ++n)
            values[n] = spec.numbers[0] + spec.numbers[1] * grid.node(n);
        return values;
    }
    if (spec.numbers.size() != count)
        throw config_error("config: " + key + ": samples must provide N + 1 values");
    return spec.numbers;
}

// zero-frequency mode of the torus enumeration: xi = 0 on every axis
std::size_t torus_zero_mode(const SpectralModel& model) {
    std::size_t id = 0;
    for (int axis = 0; axis < model.dim(); ++axis)
        id = id * static_cast<std::size_t>(model.points_per_axis()) +
             static_cast<std::size_t>(model.points_per_axis() / 2);
    return id;
}

// mode of frequency (k, 0, ..., 0)
std::size_t torus_axis_mode(const SpectralModel& model, long freq) {
    const auto points = static_cast<std::size_t>(model.points_per_axis());
    std::size_t id = static_cast<std::size_t>(freq + model.points_per_axis() / 2);
    for (int axis = 1; axis < model.dim(); ++axis) id = id * points + points / 2;
    return id;
}

std::vector<std::complex<double>> realize_profile(const SpecEntry& spec, const std::string& key,
                                                  const SpectralModel& model) {
    std::vector<std::complex<double>> coeffs(model.mode_count(), {0.0, 0.0});
    if (spec.kind == "none") return coeffs;
    if (spec.kind == "constant") {
        if (model.tag() == "torus")
            coeffs[torus_zero_mode(model)] = spec.numbers[0];
        else
            coeffs.assign(model.mode_count(), std::complex<double>{spec.numbers[0], 0.0});
        return coeffs;
    }
    if (spec.kind == "cosine") {
        if (model.tag() != "torus")
            throw config_error("config: " + key + ": cosine needs the torus backend");
        for (double number : spec.numbers) {
            const auto freq = static_cast<long>(number);
            if (static_cast<double>(freq) != number)
                throw config_error("config: " + key + ": cosine frequency must be an integer");
            const long limit = model.points_per_axis() / 2;
            if (freq <= -limit || freq >= limit)
                throw config_error("config: " + key +
                                   ": cosine frequency outside the resolved band");
            if (freq == 0) {
                coeffs[torus_zero_mode(model)] += 1.0;
            } else {
                coeffs[torus_axis_mode(model, freq)] += 0.5;
                coeffs[torus_axis_mode(model, -freq)] += 0.5;
            }
        }
        return coeffs;
    }
    // random: independent complex coefficients, each component uniform in [-1, 1]
    std::mt19937_64 rng(spec.seed);
    for (auto& c : coeffs) {
        const double re = 2.0 * next_u01(rng) - 1.0;
        const double im = 2.0 * next_u01(rng) - 1.0;
        c = {re, im};
    }
    return coeffs;
}

std::vector<double> realize_modulation(const SpecEntry& spec, const TimeGrid& grid) {
    const std::size_t count = grid.steps() + 1;
    std::vector<double> values(count);
    for (std::size_t n = 0; n < count; ++n) {
        if (spec.kind == "constant")
            values[n] = spec.numbers[0];
        else
            values[n] = std::cos(spec.numbers[0] * grid.node(n));
    }
    return values;
}

std::vector<std::vector<std::complex<double>>> realize_source(const RunConfig& config,
                                                              const SpectralModel& model,
                                                              const TimeGrid& grid) {
    if (config.source.kind == "none") return {};
    const auto profile = realize_profile(config.source, "source", model);
    const auto modulation = realize_modulation(config.modulation, grid);
    std::vector<std::vector<std::complex<double>>> rows(grid.steps() + 1);
    for (std::size_t n = 0; n < rows.size(); ++n) {
        rows[n].resize(profile.size());
        for (std::size_t i = 0; i < profile.size(); ++i) rows[n][i] = modulation[n] * profile[i];
    }
    return rows;
}

DiffusionProblem build_problem(const RunConfig& config, bool with_source) {
    const auto grid = make_grid(config);
    auto model = make_model(config);
    auto coeffs = CoefficientPath::from_samples(realize_coeff(config.coeff_a, "coeff.a", grid),
                                                realize_coeff(config.coeff_b, "coeff.b", grid));
    auto initial = realize_profile(config.init, "init", model);
    auto source = with_source ? realize_source(config, model, grid)
                              : std::vector<std::vector<std::complex<double>>>{};
    return DiffusionProblem{std::move(model), make_kernel(config), config.s,
                            std::move(coeffs), std::move(initial), std::move(source),
                            grid,             make_refinement(config)};
}

std::string spec_string(const SpecEntry& spec) {
    if (spec.kind == "none") return "none";
    if (spec.kind == "random") return "random:" + std::to_string(spec.seed);
    std::string text = spec.kind + ":";
    for (std::size_t i = 0; i < spec.numbers.size(); ++i) {
        if (i > 0) text += ",";
        text += fmt(spec.numbers[i]);
    }
    return text;
}

ordered_json echo_config(const RunConfig& config) {
    ordered_json j;
    j["kernel"]["variant"] = config.kernel_variant;
    if (config.kernel_variant == "caputo" || config.kernel_variant == "exponential") {
        j["kernel"]["alpha"] = config.kernel_alpha;
    } else {
        ordered_json terms = ordered_json::array();
        for (const auto& [weight, alpha] : config.kernel_terms)
            terms.push_back({{"weight", weight}, {"alpha", alpha}});
        j["kernel"]["terms"] = terms;
    }
    j["grid"]["T"] = config.horizon;
    j["grid"]["N"] = config.steps;
    j["lambda"] = config.lambda;
    j["refinement"] = config.refinement;
    j["model"]["backend"] = config.backend;
    if (config.backend == "torus") {
        j["model"]["d"] = config.dim;
        j["model"]["k"] = config.power;
        j["model"]["M"] = config.points;
    } else {
        j["model"]["m_max"] = config.m_max;
        j["model"]["lambda_min"] = config.band_min;
        j["model"]["lambda_max"] = config.band_max;
        j["model"]["lambda_nodes"] = config.band_nodes;
    }
    j["s"] = config.s;
    j["coeff"]["a"] = spec_string(config.coeff_a);
    j["coeff"]["b"] = spec_string(config.coeff_b);
    j["init"] = spec_string(config.init);
    j["source"] = spec_string(config.source);
    j["source_modulation"] = spec_string(config.modulation);
    j["gamma"] = config.gammas;
    j["gap_override"] = config.gap_override;
    j["tol"]["exact"] = config.tol_exact;
    j["tol"]["scheme"] = config.tol_scheme;
    j["checks"] = config.checks;
    j["snapshots"] = config.snapshot_times;
    j["threads"] = config.threads;
    j["out"] = config.out_dir;
    return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& payload) {
    auto stream = open_output(path);
    stream << payload.dump(2) << "\n";
}

std::vector<CheckResult> maxprin_battery(const MemoryKernel& kernel, const TimeGrid& grid) {
    const std::size_t count = grid.steps() + 1;
    std::vector<std::vector<double>> paths;

    paths.emplace_back(count, 1.0); // constant
    std::vector<double> ramp(count);
    for (std::size_t n = 0; n < count; ++n) ramp[n] = grid.node(n);
    paths.push_back(ramp); // grows to the final node
    std::vector<double> arch(count);
    for (std::size_t n = 0; n < count; ++n)
        arch[n] = std::sin(kTwoPi / 2.0 * grid.node(n) / grid.horizon());
    paths.push_back(arch); // interior maximum

    for (unsigned long long seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::vector<double> noise(count);
        for (auto& v : noise) v = 2.0 * next_u01(rng) - 1.0;
        paths.push_back(std::move(noise));
    }

    std::vector<CheckResult> results;
    results.reserve(paths.size());
    for (const auto& path : paths)
        results.push_back(check_maximum_principle(kernel, path, grid));
    return results;
}

std::vector<CheckResult> signpres_battery(const MemoryKernel& kernel,
                                          const CoefficientPath& coeffs, double s,
                                          const TimeGrid& grid) {
    const std::size_t count = grid.steps() + 1;
    const double eigenvalue = 1.0;
    std::vector<CheckResult> results;

    const std::vector<double> zero(count, 0.0);
    results.push_back(check_sign_preservation(kernel, eigenvalue, s, coeffs, zero, 1.0, grid));

    const std::vector<double> one(count, 1.0);
    results.push_back(check_sign_preservation(kernel, eigenvalue, s, coeffs, one, 0.0, grid));

    std::vector<double> bump(count);
    for (std::size_t n = 0; n < count; ++n)
        bump[n] = 1.0 + std::cos(kTwoPi * grid.node(n) / grid.horizon());
    results.push_back(check_sign_preservation(kernel, eigenvalue, s, coeffs, bump, 0.5, grid));

    std::vector<double> sink(count);
    for (std::size_t n = 0; n < count; ++n)
        sink[n] = -(1.0 - 0.5 * grid.node(n) / grid.horizon());
    results.push_back(check_sign_preservation(kernel, eigenvalue, s, coeffs, sink, -1.0, grid));

    return results;
}

} // namespace

int run_relax(const RunConfig& config) {
    const auto dir = prepare_out_dir(config);
    const auto kernel = make_kernel(config);
    const auto grid = make_grid(config);
    const auto solution = solve_relaxation(kernel, config.lambda, grid, make_refinement(config));

    auto csv = open_output(dir / "relax.csv");
    csv << "t,w\n";
    for (std::size_t n = 0; n < solution.values.size(); ++n)
        csv << fmt(grid.node(n)) << "," << fmt(solution.values[n]) << "\n";
    return 0;
}

int run_solve(const RunConfig& config) {
    const auto dir = prepare_out_dir(config);
    const auto problem = build_problem(config, true);
    const auto trajectory = solve(problem, config.threads);
    const auto& grid = problem.grid;

    auto csv = open_output(dir / "modes.csv");
    csv << "mode_id,t,re,im\n";
    for (std::size_t i = 0; i < trajectory.mode_series.size(); ++i)
        for (std::size_t n = 0; n < trajectory.mode_series[i].size(); ++n) {
            const auto value = trajectory.mode_series[i][n];
            csv << i << "," << fmt(grid.node(n)) << "," << fmt(value.real()) << ","
                << fmt(value.imag()) << "\n";
        }

    for (double time : config.snapshot_times) {
        if (time > grid.horizon() * (1.0 + 1e-12))
            throw config_error("config: snapshots: time beyond the horizon");
        const auto index = static_cast<std::size_t>(
            std::min<long long>(std::llround(time / grid.dt()),
                                static_cast<long long>(grid.steps())));

        std::vector<std::complex<double>> coeffs(trajectory.mode_series.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            coeffs[i] = trajectory.mode_series[i][index];
        const auto field = synthesize(problem.model, coeffs);

        auto field_csv = open_output(dir / ("field_t" + std::to_string(index) + ".csv"));
        for (int axis = 1; axis <= field.dim; ++axis) field_csv << "x" << axis << ",";
        field_csv << "re,im\n";
        const auto points = static_cast<std::size_t>(field.points_per_axis);
        for (std::size_t flat = 0; flat < field.samples.size(); ++flat) {
            std::size_t rem = flat;
            std::vector<double> coords(static_cast<std::size_t>(field.dim));
            for (int axis = field.dim - 1; axis >= 0; --axis) {
                coords[static_cast<std::size_t>(axis)] =
                    static_cast<double>(rem % points) / static_cast<double>(points);
                rem /= points;
            }
            for (double c : coords) field_csv << fmt(c) << ",";
            field_csv << fmt(field.samples[flat].real()) << ","
                      << fmt(field.samples[flat].imag()) << "\n";
        }
    }

    ordered_json meta;
    meta["config"] = echo_config(config);
    meta["modes"] = problem.model.mode_count();
    meta["spectral_gap"] = problem.model.spectral_gap();
    meta["kernel"] = problem.kernel.describe();
    write_json(dir / "meta.json", meta);
    return 0;
}

int run_verify(const RunConfig& config) {
    const auto dir = prepare_out_dir(config);
    const CheckTolerances tols{config.tol_exact, config.tol_scheme};
    std::vector<CheckResult> checks;

    for (const auto& name : config.checks) {
        if (name == "homogeneous") {
            const auto problem = build_problem(config, false);
            const auto trajectory = solve(problem, config.threads);
            auto block = check_homogeneous(problem, trajectory, config.gammas, tols);
            checks.insert(checks.end(), block.begin(), block.end());
        } else if (name == "inhomogeneous") {
            if (config.source.kind == "none")
                throw config_error("config: checks: inhomogeneous requires a source");
            const auto problem = build_problem(config, true);
            auto block = check_inhomogeneous(problem, config.gammas, config.gap_override,
                                             config.threads, tols);
            checks.insert(checks.end(), block.begin(), block.end());
        } else if (name == "maxprin") {
            auto block = maxprin_battery(make_kernel(config), make_grid(config));
            checks.insert(checks.end(), block.begin(), block.end());
        } else {
            const auto grid = make_grid(config);
            const auto coeffs =
                CoefficientPath::from_samples(realize_coeff(config.coeff_a, "coeff.a", grid),
                                              realize_coeff(config.coeff_b, "coeff.b", grid));
            auto block = signpres_battery(make_kernel(config), coeffs, config.s, grid);
            checks.insert(checks.end(), block.begin(), block.end());
        }
    }

    bool all_good = true;
    for (const auto& check : checks)
        if (check.verdict == CheckVerdict::Fail) all_good = false;

    ordered_json report;
    report["config"] = echo_config(config);
    report["checks"] = ordered_json::array();
    for (const auto& check : checks) {
        ordered_json entry;
        entry["name"] = check.name;
        entry["ratio"] = check.ratio;
        entry["bound"] = check.bound;
        entry["tol"] = check.tol;
        entry["verdict"] = to_string(check.verdict);
        report["checks"].push_back(entry);
    }
    report["metadata"]["check_count"] = checks.size();
    report["metadata"]["overall"] = all_good ? "pass" : "fail";
    write_json(dir / "report.json", report);

    auto text = open_output(dir / "report.txt");
    for (const auto& check : checks)
        text << check.name << " ratio=" << fmt(check.ratio) << " bound=" << fmt(check.bound)
             << " tol=" << fmt(check.tol) << " verdict=" << to_string(check.verdict) << "\n";
    text << "overall: " << (all_good ? "pass" : "fail") << "\n";

    return all_good ? 0 : 1;
}

int run_admissible(const RunConfig& config) {
    const auto dir = prepare_out_dir(config);
    const auto kernel = make_kernel(config);
    const auto report = check_admissibility(kernel);

    const auto verdict_name = [](Verdict v) { return to_string(v); };
    ordered_json j;
    j["kernel"] = kernel.describe();
    j["conditions"]["laplace_defined"] = verdict_name(report.condition[0]);
    j["conditions"]["completely_monotone"] = verdict_name(report.condition[1]);
    j["conditions"]["limits_at_infinity"] = verdict_name(report.condition[2]);
    j["conditions"]["limits_at_zero"] = verdict_name(report.condition[3]);
    j["admissible"] = report.all_pass();
    write_json(dir / "admissible.json", j);
    std::cout << j.dump(2) << "\n";

    if (report.any_fail()) return 1;
    if (report.any_inconclusive())
        std::cerr << "warning: admissibility probe inconclusive for this kernel\n";
    return 0;
}

} // namespace fracdiff
