#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fracdiff {

// One "kind:parameters" value from a run configuration, e.g. coefficient
// paths ("constant:1", "linear:0.5,2", "samples:..."), data profiles
// ("cosine:1", "random:42") or time modulations.
struct SpecEntry {
    std::string kind;
    std::vector<double> numbers;
    unsigned long long seed = 0;
};

struct RunConfig {
    std::string kernel_variant = "caputo";
    double kernel_alpha = 0.5;
    std::vector<std::pair<double, double>> kernel_terms; // weight, alpha

    double horizon = 1.0;
    long steps = 256;

    double lambda = 1.0;
    std::string refinement = "auto";

    std::string backend = "torus";
    int dim = 1;
    int power = 1;
    int points = 32;
    int m_max = 3;
    double band_min = 0.5;
    double band_max = 4.0;
    int band_nodes = 16;

    double s = 1.0;
    SpecEntry coeff_a{"constant", {1.0}, 0};
    SpecEntry coeff_b{"constant", {0.0}, 0};
    SpecEntry init{"constant", {1.0}, 0};
    SpecEntry source{"none", {}, 0};
    SpecEntry modulation{"constant", {1.0}, 0};

    std::vector<double> gammas;
    bool gap_override = false;
    double tol_exact = 1e-8;
    double tol_scheme = 5e-3;
    std::vector<std::string> checks{"homogeneous", "inhomogeneous", "maxprin", "signpres"};
    std::vector<double> snapshot_times;
    int threads = 1;
    std::string out_dir = ".";
};

// Parses the flat "key = value" format ('#' starts a comment). Unknown and
// duplicate keys, malformed values and out-of-range settings raise
// config_error naming the offending key.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

} // namespace fracdiff
