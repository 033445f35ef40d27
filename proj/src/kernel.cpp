#include "fracdiff/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fracdiff/errors.hpp"
#include "fracdiff/special.hpp"

namespace fracdiff {

namespace {

void validate_terms(const std::vector<std::pair<double, double>>& terms) {
    if (terms.empty())
        throw std::invalid_argument("MemoryKernel: needs at least one term");
    for (const auto& [w, a] : terms) {
        if (!(w > 0.0))
            throw std::invalid_argument("MemoryKernel: term weights must be positive");
        if (!(a > 0.0) || !(a < 1.0))
            throw std::invalid_argument("MemoryKernel: exponents must lie strictly in (0,1)");
    }
}

} // namespace

MemoryKernel MemoryKernel::caputo_power(double alpha) {
    std::vector<std::pair<double, double>> t{{1.0, alpha}};
    validate_terms(t);
    return MemoryKernel(KernelVariant::CaputoPower, std::move(t));
}

MemoryKernel MemoryKernel::multi_term(std::vector<std::pair<double, double>> weight_alpha) {
    validate_terms(weight_alpha);
    return MemoryKernel(KernelVariant::MultiTerm, std::move(weight_alpha));
}

MemoryKernel MemoryKernel::distributed_order(std::vector<std::pair<double, double>> weight_alpha) {
    validate_terms(weight_alpha);
    return MemoryKernel(KernelVariant::DistributedOrder, std::move(weight_alpha));
}

MemoryKernel MemoryKernel::exponential_nonadmissible(double alpha) {
    std::vector<std::pair<double, double>> t{{1.0, alpha}};
    validate_terms(t);
    return MemoryKernel(KernelVariant::ExponentialNonAdmissible, std::move(t));
}

double MemoryKernel::max_exponent() const {
    double m = 0.0;
    for (const auto& [w, a] : terms_)
        m = std::max(m, a);
    return m;
}

double MemoryKernel::eval(double t) const {
    if (!(t > 0.0))
        throw std::domain_error("eval_kernel: t must be positive (kernel is singular at 0)");
    if (variant_ == KernelVariant::ExponentialNonAdmissible) {
        double a = terms_[0].second;
        return std::exp(-a * t / (1.0 - a)) / (1.0 - a);
    }
    double s = 0.0;
    for (const auto& [w, a] : terms_)
        s += w * std::pow(t, -a) * reciprocal_gamma(1.0 - a);
    return s;
}

double MemoryKernel::laplace(double p) const {
    if (!(p > 0.0))
        throw std::domain_error("laplace_transform: p must be positive");
    if (variant_ == KernelVariant::ExponentialNonAdmissible) {
        double a = terms_[0].second;
        return 1.0 / ((1.0 - a) * p + a);
    }
    double s = 0.0;
    for (const auto& [w, a] : terms_)
        s += w * std::pow(p, a - 1.0);
    return s;
}

double MemoryKernel::cumulative_mass(double x) const {
    if (variant_ == KernelVariant::ExponentialNonAdmissible)
        throw capability_error("cumulative mass is only provided for admissible kernel variants");
    if (x < 0.0)
        throw std::domain_error("cumulative_mass: negative argument");
    if (x == 0.0)
        return 0.0;
    double s = 0.0;
    for (const auto& [w, a] : terms_)
        s += w * std::pow(x, 1.0 - a) * reciprocal_gamma(2.0 - a);
    return s;
}

double MemoryKernel::mass_between(double y, double x) const {
    if (variant_ == KernelVariant::ExponentialNonAdmissible)
        throw capability_error("cumulative mass is only provided for admissible kernel variants");
    if (y < 0.0 || x < y)
        throw std::domain_error("mass_between: requires 0 <= y <= x");
    if (y == 0.0)
        return cumulative_mass(x);
    if (x == y)
        return 0.0;
    // x^b - y^b = y^b expm1(b log1p((x-y)/y)) stays accurate when the two
    // endpoints are close relative to their size.
    double s = 0.0;
    double r = (x - y) / y;
    for (const auto& [w, a] : terms_) {
        double b = 1.0 - a;
        s += w * std::pow(y, b) * std::expm1(b * std::log1p(r)) * reciprocal_gamma(2.0 - a);
    }
    return s;
}

std::string MemoryKernel::describe() const {
    std::ostringstream os;
    switch (variant_) {
    case KernelVariant::CaputoPower:
        os << "caputo(alpha=" << terms_[0].second << ")";
        break;
    case KernelVariant::MultiTerm:
    case KernelVariant::DistributedOrder:
        os << (variant_ == KernelVariant::MultiTerm ? "multiterm(" : "distributed(");
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) os << ", ";
            os << terms_[i].first << ":" << terms_[i].second;
        }
        os << ")";
        break;
    case KernelVariant::ExponentialNonAdmissible:
        os << "exponential(alpha=" << terms_[0].second << ")";
        break;
    }
    return os.str();
}

double eval_kernel(const MemoryKernel& kernel, double t) { return kernel.eval(t); }
double laplace_transform(const MemoryKernel& kernel, double p) { return kernel.laplace(p); }

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
    }
}

bool AdmissibilityReport::all_pass() const {
    for (auto v : condition)
        if (v != Verdict::Pass) return false;
    return true;
}

bool AdmissibilityReport::any_fail() const {
    for (auto v : condition)
        if (v == Verdict::Fail) return true;
    return false;
}

bool AdmissibilityReport::any_inconclusive() const {
    for (auto v : condition)
        if (v == Verdict::Inconclusive) return true;
    return false;
}

namespace {

// Trend of a positive quantity across two decades of the probe grid.
// ratio = value(outer) / value(two decades inward); "outer" is the extreme
// end being probed. Growth means ratio >= 1.2, clear flatness (a finite
// limit) means ratio <= 1.005.
enum class Trend { Grows, Decays, Flat, Unclear };

Trend classify(double outer, double inner) {
    if (!(outer > 0.0) || !(inner > 0.0) || !std::isfinite(outer) || !std::isfinite(inner))
        return Trend::Unclear;
    double ratio = outer / inner;
    if (ratio >= 1.2) return Trend::Grows;
    if (ratio <= 1.0 / 1.2) return Trend::Decays;
    if (ratio <= 1.005 && ratio >= 1.0 / 1.005) return Trend::Flat;
    return Trend::Unclear;
}

Verdict limit_verdict(Trend got, Trend want) {
    if (got == want) return Verdict::Pass;
    if (got == Trend::Unclear) return Verdict::Inconclusive;
    return Verdict::Fail;
}

Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Pass;
}

// Divided differences of g~ on the probe grid, orders 0..3, with signs
// required to alternate (+, -, +, -). A Stieltjes function is completely
// monotone, so violations beyond rounding slack disprove condition (2).
Verdict cm_proxy_verdict(const std::vector<double>& p, const std::vector<double>& f) {
    std::size_t n = p.size();
    std::vector<double> d = f;       // current divided differences
    std::vector<double> slack(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        slack[i] = 1e-12 * std::abs(f[i]);
    double want = 1.0; // required sign of current order: +, then -, +, -
    for (int order = 0; order <= 3; ++order) {
        for (std::size_t i = 0; i + order < n; ++i) {
            if (want * d[i] < -slack[i])
                return Verdict::Fail;
        }
        if (order == 3)
            break;
        std::vector<double> nd(n - order - 1), ns(n - order - 1);
        for (std::size_t i = 0; i + order + 1 < n; ++i) {
            double h = p[i + order + 1] - p[i];
            nd[i] = (d[i + 1] - d[i]) / h;
            ns[i] = (slack[i + 1] + slack[i]) / h;
        }
        d = std::move(nd);
        slack = std::move(ns);
        want = -want;
    }
    return Verdict::Pass;
}

} // namespace

AdmissibilityReport check_admissibility(const MemoryKernel& kernel, const ProbeGrid& grid) {
    if (!(grid.lo > 0.0) || !(grid.hi > grid.lo))
        throw std::invalid_argument("check_admissibility: probe grid bounds invalid");
    if (grid.lo > 1e-6 || grid.hi < 1e6)
        throw std::invalid_argument("check_admissibility: probe grid must span at least [1e-6, 1e6]");
    if (grid.points < 50)
        throw std::invalid_argument("check_admissibility: probe grid needs at least 50 points");

    std::size_t n = grid.points;
    std::vector<double> p(n), f(n);
    double loglo = std::log(grid.lo), loghi = std::log(grid.hi);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = std::exp(loglo + (loghi - loglo) * static_cast<double>(i) /
                        static_cast<double>(n - 1));
        f[i] = kernel.laplace(p[i]);
    }

    AdmissibilityReport rep;
    rep.gtilde_lo = f.front();
    rep.gtilde_hi = f.back();
    rep.pgtilde_lo = p.front() * f.front();
    rep.pgtilde_hi = p.back() * f.back();

    // (1): g~ exists (finite and positive) at every probe point
    bool defined = true;
    for (double v : f)
        if (!std::isfinite(v) || !(v > 0.0)) defined = false;
    rep.condition[0] = defined ? Verdict::Pass : Verdict::Fail;

    // (2): complete-monotonicity proxy
    rep.cm_proxy = cm_proxy_verdict(p, f);
    rep.condition[1] = rep.cm_proxy;

    // locate the index two decades inward from each end
    auto index_at = [&](double target) {
        std::size_t best = 0;
        double bestdiff = HUGE_VAL;
        for (std::size_t i = 0; i < n; ++i) {
            double diff = std::abs(std::log(p[i] / target));
            if (diff < bestdiff) { bestdiff = diff; best = i; }
        }
        return best;
    };
    std::size_t hi2 = index_at(grid.hi / 100.0);
    std::size_t lo2 = index_at(grid.lo * 100.0);

    // (3) at p -> inf: g~ decays to 0, p g~ grows without bound
    Verdict g_inf = limit_verdict(classify(f[n - 1], f[hi2]), Trend::Decays);
    Verdict pg_inf = limit_verdict(classify(p[n - 1] * f[n - 1], p[hi2] * f[hi2]), Trend::Grows);
    rep.condition[2] = combine(g_inf, pg_inf);

    // (4) at p -> 0: g~ grows without bound, p g~ decays to 0
    Verdict g_zero = limit_verdict(classify(f[0], f[lo2]), Trend::Grows);
    Verdict pg_zero = limit_verdict(classify(p[0] * f[0], p[lo2] * f[lo2]), Trend::Decays);
    rep.condition[3] = combine(g_zero, pg_zero);

    return rep;
}

std::vector<double> kernel_weights(const MemoryKernel& kernel, const TimeGrid& grid,
                                   std::size_t n) {
    if (!kernel.admissible_variant())
        throw capability_error("kernel_weights: not defined for non-admissible kernel variants");
    if (n < 1 || n > grid.steps())
        throw std::domain_error("kernel_weights: step index out of range");
    double tn = grid.node(n);
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j)
        w[j] = kernel.mass_between(tn - grid.node(j + 1), tn - grid.node(j));
    return w;
}

} // namespace fracdiff
