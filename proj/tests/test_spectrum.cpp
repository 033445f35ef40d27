#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "fracdiff/errors.hpp"
#include "fracdiff/spectrum.hpp"

using fracdiff::analyze;
using fracdiff::apply_fractional_power;
using fracdiff::Field;
using fracdiff::Mode;
using fracdiff::sobolev_norm;
using fracdiff::SpectralModel;
using fracdiff::synthesize;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Field random_field(int dim, int points, unsigned long long seed) {
    Field field;
    field.dim = dim;
    field.points_per_axis = points;
    std::size_t total = 1;
    for (int axis = 0; axis < dim; ++axis) total *= static_cast<std::size_t>(points);
    field.samples.resize(total);
    std::mt19937_64 rng(seed);
    const auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (auto& z : field.samples) z = {2.0 * u01() - 1.0, 2.0 * u01() - 1.0};
    return field;
}

} // namespace

TEST_CASE("torus mode enumeration") {
    const auto model = SpectralModel::torus_laplacian(1, 1, 8);
    REQUIRE(model.mode_count() == 8);
    CHECK(model.nu() == 2.0);
    CHECK(model.tag() == "torus");
    CHECK(model.can_synthesize());

    // frequencies -4..3 in order; eigenvalue 4 pi^2 xi^2
    const double four_pi_sq = kTwoPi * kTwoPi;
    for (std::size_t i = 0; i < 8; ++i) {
        const double xi = static_cast<double>(i) - 4.0;
        CHECK(model.modes()[i].id == i);
        CHECK(model.modes()[i].weight == 1.0);
        CHECK(std::abs(model.modes()[i].eigenvalue - four_pi_sq * xi * xi) <
              1e-12 * (1.0 + four_pi_sq * xi * xi));
    }
    CHECK(model.modes()[4].eigenvalue == 0.0);
    CHECK(std::abs(model.spectral_gap() - four_pi_sq) < 1e-12 * four_pi_sq);

    // quartic generator: same frequencies, squared eigenvalues
    const auto squared = SpectralModel::torus_laplacian(1, 2, 8);
    for (std::size_t i = 0; i < 8; ++i) {
        const double base = model.modes()[i].eigenvalue;
        CHECK(std::abs(squared.modes()[i].eigenvalue - base * base) <=
              1e-12 * (1.0 + base * base));
    }
}

TEST_CASE("single frequency synthesizes to a pure exponential") {
    const auto model = SpectralModel::torus_laplacian(1, 1, 8);
    std::vector<std::complex<double>> coeffs(8, {0.0, 0.0});
    coeffs[5] = 1.0; // xi = +1
    const auto field = synthesize(model, coeffs);
    REQUIRE(field.samples.size() == 8);
    for (std::size_t j = 0; j < 8; ++j) {
        const double x = static_cast<double>(j) / 8.0;
        const std::complex<double> want{std::cos(kTwoPi * x), std::sin(kTwoPi * x)};
        CHECK(std::abs(field.samples[j] - want) < 1e-12);
    }
}

TEST_CASE("analyze and synthesize invert each other") {
    const auto model = SpectralModel::torus_laplacian(2, 1, 8);
    const auto field = random_field(2, 8, 42);
    const auto coeffs = analyze(model, field);
    REQUIRE(coeffs.size() == model.mode_count());
    const auto back = synthesize(model, coeffs);
    double worst = 0.0;
    for (std::size_t j = 0; j < field.samples.size(); ++j)
        worst = std::max(worst, std::abs(back.samples[j] - field.samples[j]));
    CHECK(worst < 1e-10);
}

TEST_CASE("discrete plancherel identity") {
    const auto model = SpectralModel::torus_laplacian(2, 1, 8);
    const auto field = random_field(2, 8, 7);
    const auto coeffs = analyze(model, field);

    double field_sq = 0.0;
    for (const auto& z : field.samples) field_sq += std::norm(z);
    field_sq /= static_cast<double>(field.samples.size());

    const double coeff_norm = sobolev_norm(model, coeffs, 0.0);
    CHECK(std::abs(coeff_norm * coeff_norm - field_sq) < 1e-12 * field_sq);

    // gamma = 0 norm is the plain weighted l2 norm
    double plain = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        plain += model.modes()[i].weight * std::norm(coeffs[i]);
    CHECK(std::abs(coeff_norm - std::sqrt(plain)) < 1e-14 * std::sqrt(plain));
}

TEST_CASE("cosine data lands on the two conjugate modes") {
    const auto model = SpectralModel::torus_laplacian(1, 1, 16);
    Field field;
    field.dim = 1;
    field.points_per_axis = 16;
    field.samples.resize(16);
    for (std::size_t j = 0; j < 16; ++j)
        field.samples[j] = std::cos(kTwoPi * static_cast<double>(j) / 16.0);
    const auto coeffs = analyze(model, field);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double want = (i == 7 || i == 9) ? 0.5 : 0.0; // xi = -1 and +1
        CHECK(std::abs(coeffs[i] - want) < 1e-12);
    }
}

TEST_CASE("sobolev norm on a handmade mode set") {
    const SpectralModel model({Mode{0, 3.0, 1.0}}, 2.0, "probe");
    const std::vector<std::complex<double>> coeffs{{2.0, 0.0}};
    CHECK(sobolev_norm(model, coeffs, 0.0) == 2.0);
    // (1 + 3)^(2*1/2) |2|^2 = 16, root 4
    CHECK(std::abs(sobolev_norm(model, coeffs, 1.0) - 4.0) < 1e-14);
    CHECK_FALSE(model.can_synthesize());
    CHECK_THROWS_AS(synthesize(model, coeffs), fracdiff::capability_error);
    Field field;
    field.dim = 1;
    field.points_per_axis = 1;
    field.samples = {{1.0, 0.0}};
    CHECK_THROWS_AS(analyze(model, field), fracdiff::capability_error);
}

TEST_CASE("fractional powers compose") {
    const auto model = SpectralModel::torus_laplacian(1, 1, 16);
    std::vector<std::complex<double>> coeffs(model.mode_count());
    std::mt19937_64 rng(3);
    const auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (auto& c : coeffs) c = {u01(), u01()};

    const auto half = apply_fractional_power(model, coeffs, 0.5);
    const auto twice = apply_fractional_power(model, half, 0.5);
    const auto whole = apply_fractional_power(model, coeffs, 1.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        CHECK(std::abs(twice[i] - whole[i]) <= 1e-12 * (1.0 + std::abs(whole[i])));
        const double eig = model.modes()[i].eigenvalue;
        CHECK(std::abs(whole[i] - eig * coeffs[i]) <= 1e-12 * (1.0 + std::abs(eig * coeffs[i])));
    }
    // the zero mode is annihilated for every positive power
    const auto zero_mode = apply_fractional_power(model, coeffs, 0.25);
    CHECK(zero_mode[8] == coeffs[8] * 0.0);
}

TEST_CASE("heisenberg mode lattice") {
    const auto model = SpectralModel::heisenberg_h1(2, 0.5, 4.0, 16);
    REQUIRE(model.mode_count() == 48);
    CHECK(model.nu() == 2.0);
    CHECK(model.tag() == "heisenberg");
    CHECK_FALSE(model.can_synthesize());

    const double width = 3.5 / 16.0;
    // first band midpoint is exactly representable: 39/64
    CHECK(model.modes()[0].eigenvalue == 0.609375);
    CHECK(model.spectral_gap() == 0.609375);
    CHECK(model.modes()[16].eigenvalue == 3.0 * 0.609375); // m = 1, q = 0
    for (std::size_t q = 0; q < 16; ++q) {
        const double lam = 0.5 + (static_cast<double>(q) + 0.5) * width;
        CHECK(std::abs(model.modes()[q].eigenvalue - lam) < 1e-14);
        CHECK(std::abs(model.modes()[q].weight - lam * width) < 1e-14);
    }
}

TEST_CASE("model construction validation") {
    CHECK_THROWS_AS(SpectralModel::torus_laplacian(0, 1, 8), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::torus_laplacian(4, 1, 8), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::torus_laplacian(1, 0, 8), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::torus_laplacian(1, 1, 7), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::torus_laplacian(1, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::torus_laplacian(3, 1, 256), std::invalid_argument);

    CHECK_THROWS_AS(SpectralModel::heisenberg_h1(-1, 0.5, 4.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::heisenberg_h1(2, 0.0, 4.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::heisenberg_h1(2, 4.0, 0.5, 16), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::heisenberg_h1(2, 0.5, 4.0, 0), std::invalid_argument);

    CHECK_THROWS_AS(SpectralModel({}, 2.0, "x"), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel({Mode{0, -1.0, 1.0}}, 2.0, "x"), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel({Mode{0, 1.0, 0.0}}, 2.0, "x"), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel({Mode{0, 1.0, 1.0}}, 0.0, "x"), std::invalid_argument);
}

TEST_CASE("norm and power argument validation") {
    const auto model = SpectralModel::torus_laplacian(1, 1, 8);
    std::vector<std::complex<double>> coeffs(model.mode_count(), {1.0, 0.0});
    CHECK_THROWS_AS(sobolev_norm(model, coeffs, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(apply_fractional_power(model, coeffs, -0.5), std::invalid_argument);
    std::vector<std::complex<double>> wrong(3, {1.0, 0.0});
    CHECK_THROWS_AS(sobolev_norm(model, wrong, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(synthesize(model, wrong), std::invalid_argument);
    Field bad = random_field(1, 4, 1);
    CHECK_THROWS_AS(analyze(model, bad), std::invalid_argument);
}
