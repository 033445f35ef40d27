#include "fracdiff/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "fracdiff/errors.hpp"

#ifdef FRACDIFF_HAVE_FFTW3
#include <fftw3.h>
#endif

namespace fracdiff {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::size_t checked_grid_size(int dim, int points) {
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) {
        if (total > (std::size_t{1} << 21) / static_cast<std::size_t>(points))
            throw std::invalid_argument("torus model: spatial grid is too large");
        total *= static_cast<std::size_t>(points);
    }
    return total;
}

// flat index into the transform array for a lexicographic mode id; per axis
// the mode value v = xi + M/2 maps to the DFT bin (xi + M) mod M
std::size_t fft_flat_index(std::size_t mode_id, int dim, int points) {
    const auto m = static_cast<std::size_t>(points);
    std::size_t rem = mode_id;
    std::size_t flat = 0;
    std::size_t stride = 1;
    for (int axis = 0; axis < dim; ++axis) {
        const std::size_t v = rem % m;
        rem /= m;
        const std::size_t bin = (v + m / 2) % m;
        flat += bin * stride;
        stride *= m;
    }
    return flat;
}

#ifdef FRACDIFF_HAVE_FFTW3

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

void transform(int dim, int points, std::vector<std::complex<double>>& data, int sign) {
    std::vector<int> n(static_cast<std::size_t>(dim), points);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft(dim, n.data(), ptr, ptr, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
}

#else

void transform(int dim, int points, std::vector<std::complex<double>>& data, int sign) {
    const std::size_t total = data.size();
    const auto m = static_cast<std::size_t>(points);

    std::vector<std::complex<double>> root(m);
    for (std::size_t r = 0; r < m; ++r) {
        const double ang = sign * kTwoPi * static_cast<double>(r) / static_cast<double>(points);
        root[r] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<std::size_t> digits(total * static_cast<std::size_t>(dim));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int axis = dim - 1; axis >= 0; --axis) {
            digits[idx * dim + axis] = rem % m;
            rem /= m;
        }
    }

    std::vector<std::complex<double>> out(total, {0.0, 0.0});
    for (std::size_t a = 0; a < total; ++a) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t b = 0; b < total; ++b) {
            std::size_t r = 0;
            for (int axis = 0; axis < dim; ++axis)
                r += digits[a * dim + axis] * digits[b * dim + axis] % m;
            acc += data[b] * root[r % m];
        }
        out[a] = acc;
    }
    data = std::move(out);
}

#endif

constexpr int kForward = -1;
constexpr int kBackward = 1;

} // namespace

SpectralModel::SpectralModel(std::vector<Mode> modes, double nu, std::string tag)
    : modes_(std::move(modes)), nu_(nu), tag_(std::move(tag)) {
    if (modes_.empty()) throw std::invalid_argument("spectral model: needs at least one mode");
    if (!(nu_ > 0.0)) throw std::invalid_argument("spectral model: nu must be positive");
    for (const auto& mode : modes_) {
        if (!(mode.eigenvalue >= 0.0) || !std::isfinite(mode.eigenvalue))
            throw std::invalid_argument("spectral model: eigenvalues must be nonnegative");
        if (!(mode.weight > 0.0) || !std::isfinite(mode.weight))
            throw std::invalid_argument("spectral model: mode weights must be positive");
    }
}

SpectralModel SpectralModel::torus_laplacian(int d, int k, int M) {
    if (d < 1 || d > 3) throw std::invalid_argument("torus model: d must be 1, 2 or 3");
    if (k < 1) throw std::invalid_argument("torus model: k must be at least 1");
    if (M < 2 || M % 2 != 0)
        throw std::invalid_argument("torus model: M must be an even number of points, at least 2");

    const std::size_t total = checked_grid_size(d, M);
    std::vector<Mode> modes;
    modes.reserve(total);
    const auto m = static_cast<std::size_t>(M);
    for (std::size_t id = 0; id < total; ++id) {
        std::size_t rem = id;
        double freq_sq = 0.0;
        for (int axis = 0; axis < d; ++axis) {
            const auto v = static_cast<long long>(rem % m);
            rem /= m;
            const double xi = static_cast<double>(v - M / 2);
            freq_sq += xi * xi;
        }
        const double base = kTwoPi * kTwoPi * freq_sq; // 4 pi^2 |xi|^2
        const double eig = freq_sq == 0.0 ? 0.0 : std::pow(base, static_cast<double>(k));
        modes.push_back(Mode{id, eig, 1.0});
    }
    SpectralModel model(std::move(modes), 2.0 * k, "torus");
    model.dim_ = d;
    model.points_ = M;
    return model;
}

SpectralModel SpectralModel::heisenberg_h1(int m_max, double lambda_min, double lambda_max,
                                           int lambda_nodes) {
    if (m_max < 0) throw std::invalid_argument("heisenberg model: m_max must be nonnegative");
    if (lambda_nodes < 1)
        throw std::invalid_argument("heisenberg model: needs at least one lambda node");
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
        throw std::invalid_argument("heisenberg model: needs 0 < lambda_min < lambda_max");

    const double width = (lambda_max - lambda_min) / lambda_nodes;
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(m_max + 1) * static_cast<std::size_t>(lambda_nodes));
    std::size_t id = 0;
    for (int m = 0; m <= m_max; ++m) {
        for (int q = 0; q < lambda_nodes; ++q) {
            const double lam = lambda_min + (q + 0.5) * width;
            modes.push_back(Mode{id++, (2.0 * m + 1.0) * lam, lam * width});
        }
    }
    return SpectralModel(std::move(modes), 2.0, "heisenberg");
}

double SpectralModel::spectral_gap() const {
    double gap = 0.0;
    for (const auto& mode : modes_)
        if (mode.eigenvalue > 0.0 && (gap == 0.0 || mode.eigenvalue < gap)) gap = mode.eigenvalue;
    return gap;
}

std::vector<std::complex<double>> analyze(const SpectralModel& model, const Field& field) {
    if (!model.can_synthesize()) throw capability_error("analysis unsupported for this backend");
    if (field.dim != model.dim_ || field.points_per_axis != model.points_)
        throw std::invalid_argument("analyze: field shape does not match the model grid");
    const std::size_t total = model.mode_count();
    if (field.samples.size() != total)
        throw std::invalid_argument("analyze: field sample count does not match the model grid");

    auto data = field.samples;
    transform(model.dim_, model.points_, data, kForward);

    const double scale = 1.0 / static_cast<double>(total);
    std::vector<std::complex<double>> coeffs(total);
    for (std::size_t id = 0; id < total; ++id)
        coeffs[id] = data[fft_flat_index(id, model.dim_, model.points_)] * scale;
    return coeffs;
}

Field synthesize(const SpectralModel& model, std::span<const std::complex<double>> coefficients) {
    if (!model.can_synthesize()) throw capability_error("synthesis unsupported for this backend");
    const std::size_t total = model.mode_count();
    if (coefficients.size() != total)
        throw std::invalid_argument("synthesize: coefficient count does not match the model");

    std::vector<std::complex<double>> data(total, {0.0, 0.0});
    for (std::size_t id = 0; id < total; ++id)
        data[fft_flat_index(id, model.dim_, model.points_)] = coefficients[id];
    transform(model.dim_, model.points_, data, kBackward);

    Field field;
    field.dim = model.dim_;
    field.points_per_axis = model.points_;
    field.samples = std::move(data);
    return field;
}

double sobolev_norm(const SpectralModel& model, std::span<const std::complex<double>> coefficients,
                    double gamma) {
    if (coefficients.size() != model.mode_count())
        throw std::invalid_argument("sobolev_norm: coefficient count does not match the model");
    if (!(gamma >= 0.0)) throw std::invalid_argument("sobolev_norm: gamma must be nonnegative");

    const double expo = 2.0 * gamma / model.nu();
    double sum = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const auto& mode = model.modes()[i];
        const double mag = std::norm(coefficients[i]);
        sum += mode.weight * std::pow(1.0 + mode.eigenvalue, expo) * mag;
    }
    return std::sqrt(sum);
}

std::vector<std::complex<double>> apply_fractional_power(
    const SpectralModel& model, std::span<const std::complex<double>> coefficients, double s) {
    if (coefficients.size() != model.mode_count())
        throw std::invalid_argument(
            "apply_fractional_power: coefficient count does not match the model");
    if (!(s >= 0.0)) throw std::invalid_argument("apply_fractional_power: s must be nonnegative");

    std::vector<std::complex<double>> out(coefficients.size());
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const double eig = model.modes()[i].eigenvalue;
        if (eig == 0.0)
            out[i] = s == 0.0 ? coefficients[i] : std::complex<double>{0.0, 0.0};
        else
            out[i] = coefficients[i] * std::pow(eig, s);
    }
    return out;
}

} // namespace fracdiff
