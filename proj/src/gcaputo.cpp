#include "fracdiff/gcaputo.hpp"

#include <stdexcept>

namespace fracdiff {

double apply_derivative(const MemoryKernel& kernel, std::span<const double> samples,
                        const TimeGrid& grid, std::size_t n) {
    if (samples.size() != grid.steps() + 1)
        throw std::invalid_argument("apply_derivative: samples length must be N+1");
    if (n == 0)
        throw std::domain_error("apply_derivative: undefined at t = 0");
    if (n > grid.steps())
        throw std::domain_error("apply_derivative: step index out of range");
    auto w = kernel_weights(kernel, grid, n);
    double dt = grid.dt();
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        acc += w[j] * (samples[j + 1] - samples[j]);
    return acc / dt;
}

} // namespace fracdiff
