#pragma once

#include <cstddef>
#include <stdexcept>

namespace fracdiff {

// Uniform partition of [0, T]: t_j = j T / N, j = 0..N.
class TimeGrid {
public:
    TimeGrid(double T, std::size_t N) : T_(T), N_(N) {
        if (!(T > 0.0))
            throw std::invalid_argument("TimeGrid: horizon T must be positive");
        if (N < 2)
            throw std::invalid_argument("TimeGrid: need at least 2 steps");
    }

    double horizon() const { return T_; }
    std::size_t steps() const { return N_; }
    double dt() const { return T_ / static_cast<double>(N_); }
    double node(std::size_t j) const { return j == N_ ? T_ : static_cast<double>(j) * dt(); }

    bool operator==(const TimeGrid& o) const { return T_ == o.T_ && N_ == o.N_; }

private:
    double T_;
    std::size_t N_;
};

} // namespace fracdiff
