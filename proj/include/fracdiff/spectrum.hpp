#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fracdiff {

// One generalized Fourier mode of the spatial generator: an eigenvalue of L
// together with the Plancherel weight of the mode in the inversion formula.
struct Mode {
    std::size_t id;
    double eigenvalue;
    double weight;
};

// Spatial samples on the uniform periodic grid, row-major with the first
// axis slowest. Only models built from a concrete spatial grid can produce
// or consume fields.
struct Field {
    int dim = 0;
    int points_per_axis = 0;
    std::vector<std::complex<double>> samples;

    std::size_t size() const { return samples.size(); }
};

class SpectralModel {
public:
    SpectralModel(std::vector<Mode> modes, double nu, std::string tag);

    // (-Laplacian)^k on the d-torus with M points per axis. Frequencies run
    // over {-M/2, ..., M/2 - 1} per axis, enumerated lexicographically with
    // the first axis outermost; the mode id is that lexicographic index.
    static SpectralModel torus_laplacian(int d, int k, int M);

    // Sub-Laplacian model on the first Heisenberg group: oscillator levels
    // m = 0..m_max crossed with a midpoint discretization of the central
    // frequency band [lambda_min, lambda_max]. Mode (m, q) has eigenvalue
    // (2m + 1) lambda_q and carries the measure weight lambda_q dlambda.
    static SpectralModel heisenberg_h1(int m_max, double lambda_min, double lambda_max,
                                       int lambda_nodes);

    const std::vector<Mode>& modes() const { return modes_; }
    std::size_t mode_count() const { return modes_.size(); }
    double nu() const { return nu_; }
    const std::string& tag() const { return tag_; }

    bool can_synthesize() const { return dim_ > 0; }
    int dim() const { return dim_; }
    int points_per_axis() const { return points_; }

    // smallest positive eigenvalue, 0 when there is none
    double spectral_gap() const;

private:
    std::vector<Mode> modes_;
    double nu_;
    std::string tag_;
    int dim_ = 0;
    int points_ = 0;

    friend std::vector<std::complex<double>> analyze(const SpectralModel&, const Field&);
    friend Field synthesize(const SpectralModel&, std::span<const std::complex<double>>);
};

// forward transform: mode coefficients of a sampled field, normalized so
// that a pure exponential of frequency xi has coefficient 1 at mode xi
std::vector<std::complex<double>> analyze(const SpectralModel& model, const Field& field);

// inverse transform back to spatial samples
Field synthesize(const SpectralModel& model, std::span<const std::complex<double>> coefficients);

// discrete norm (sum_modes weight (1 + eigenvalue)^(2 gamma / nu) |c|^2)^(1/2)
double sobolev_norm(const SpectralModel& model, std::span<const std::complex<double>> coefficients,
                    double gamma);

// multiply each coefficient by eigenvalue^s, with 0^s = 0
std::vector<std::complex<double>> apply_fractional_power(
    const SpectralModel& model, std::span<const std::complex<double>> coefficients, double s);

} // namespace fracdiff
