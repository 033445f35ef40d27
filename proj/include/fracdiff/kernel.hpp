#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fracdiff/time_grid.hpp"

namespace fracdiff {

enum class KernelVariant {
    CaputoPower,
    MultiTerm,
    DistributedOrder,
    ExponentialNonAdmissible,
};

// Memory kernel g of the generalized fractional derivative
//   D_(g) u(t) = int_0^t g(t - tau) u'(tau) dtau.
// The three power-type families are admissible; the exponential variant is
// shipped only as a negative test case for the admissibility probes.
class MemoryKernel {
public:
    static MemoryKernel caputo_power(double alpha);
    static MemoryKernel multi_term(std::vector<std::pair<double, double>> weight_alpha);
    static MemoryKernel distributed_order(std::vector<std::pair<double, double>> weight_alpha);
    static MemoryKernel exponential_nonadmissible(double alpha);

    KernelVariant variant() const { return variant_; }
    bool admissible_variant() const { return variant_ != KernelVariant::ExponentialNonAdmissible; }

    // (weight, alpha) terms for the power-type variants; for the exponential
    // variant the single entry holds (1, alpha).
    const std::vector<std::pair<double, double>>& terms() const { return terms_; }

    // strongest singularity exponent; governs the startup time scale of solvers
    double max_exponent() const;

    double eval(double t) const;     // g(t), t > 0
    double laplace(double p) const;  // g~(p), p > 0

    // cumulative mass I(x) = int_0^x g(tau) dtau, closed form (admissible variants)
    double cumulative_mass(double x) const;
    // I(x) - I(y) for 0 <= y <= x, cancellation-safe when x - y << x
    double mass_between(double y, double x) const;

    std::string describe() const;

private:
    MemoryKernel(KernelVariant v, std::vector<std::pair<double, double>> terms)
        : variant_(v), terms_(std::move(terms)) {}

    KernelVariant variant_;
    std::vector<std::pair<double, double>> terms_;
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

// Numerical probe of the four kernel admissibility conditions:
//  (1) g~(p) defined for all p > 0,
//  (2) g~ is a Stieltjes function (tested through its complete-monotonicity
//      consequence on divided differences up to order 3),
//  (3) g~(p) -> 0 and p g~(p) -> inf as p -> inf,
//  (4) g~(p) -> inf and p g~(p) -> 0 as p -> 0.
// Limits are probed by trend over a geometric grid; a non-monotone or flat
// trend that is not clearly decisive yields Inconclusive.
struct AdmissibilityReport {
    Verdict condition[4];
    Verdict cm_proxy; // basis of condition (2)
    double gtilde_lo = 0, gtilde_hi = 0;    // g~ at the probe grid endpoints
    double pgtilde_lo = 0, pgtilde_hi = 0;  // p g~ at the endpoints
    bool all_pass() const;
    bool any_fail() const;
    bool any_inconclusive() const;
};

struct ProbeGrid {
    double lo = 1e-6;
    double hi = 1e6;
    std::size_t points = 61;
};

AdmissibilityReport check_admissibility(const MemoryKernel& kernel,
                                        const ProbeGrid& grid = ProbeGrid{});

// eval_kernel / laplace_transform free-function forms
double eval_kernel(const MemoryKernel& kernel, double t);
double laplace_transform(const MemoryKernel& kernel, double p);

// Product-integration weights on the uniform grid:
//   W_{n,j} = int_{t_j}^{t_{j+1}} g(t_n - tau) dtau,  j = 0..n-1.
// Only defined for admissible variants (the solver path).
std::vector<double> kernel_weights(const MemoryKernel& kernel, const TimeGrid& grid,
                                   std::size_t n);

} // namespace fracdiff
