#include "fracdiff/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fracdiff/errors.hpp"

namespace fracdiff {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
    throw config_error("config: " + key + ": " + why);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) bad_value(key, "expected a number, got '" + value + "'");
        return parsed;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, "expected a number, got '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long parsed = std::stol(value, &used);
        if (used != value.size()) bad_value(key, "expected an integer, got '" + value + "'");
        return parsed;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, "expected an integer, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const long parsed = parse_long(key, value);
    if (parsed < -1000000 || parsed > 1000000) bad_value(key, "integer out of range");
    return static_cast<int>(parsed);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    bad_value(key, "expected true or false, got '" + value + "'");
}

std::vector<std::string> split(const std::string& value, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream stream(value);
    while (std::getline(stream, item, sep)) parts.push_back(trim(item));
    return parts;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> numbers;
    for (const auto& part : split(value, ',')) {
        if (part.empty()) bad_value(key, "empty list entry");
        numbers.push_back(parse_double(key, part));
    }
    if (numbers.empty()) bad_value(key, "list must not be empty");
    return numbers;
}

std::vector<std::pair<double, double>> parse_terms(const std::string& key,
                                                   const std::string& value) {
    std::vector<std::pair<double, double>> terms;
    for (const auto& part : split(value, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) bad_value(key, "terms are weight:alpha pairs");
        const double weight = parse_double(key, trim(part.substr(0, colon)));
        const double alpha = parse_double(key, trim(part.substr(colon + 1)));
        terms.emplace_back(weight, alpha);
    }
    if (terms.empty()) bad_value(key, "needs at least one term");
    return terms;
}

SpecEntry parse_spec(const std::string& key, const std::string& value,
                     const std::set<std::string>& kinds) {
    SpecEntry entry;
    const auto colon = value.find(':');
    entry.kind = trim(value.substr(0, colon));
    if (kinds.find(entry.kind) == kinds.end()) bad_value(key, "unknown kind '" + entry.kind + "'");

    std::string params = colon == std::string::npos ? "" : trim(value.substr(colon + 1));
    if (entry.kind == "none") {
        if (!params.empty()) bad_value(key, "'none' takes no parameters");
        return entry;
    }
    if (params.empty()) bad_value(key, "'" + entry.kind + "' needs parameters");

    if (entry.kind == "random") {
        if (params.find_first_not_of("0123456789") != std::string::npos)
            bad_value(key, "seed must be a nonnegative integer");
        try {
            entry.seed = std::stoull(params);
        } catch (const std::exception&) {
            bad_value(key, "seed must be a nonnegative integer");
        }
        return entry;
    }

    entry.numbers = parse_double_list(key, params);
    if (entry.kind == "constant" && entry.numbers.size() != 1)
        bad_value(key, "'constant' takes exactly one value");
    if (entry.kind == "linear" && entry.numbers.size() != 2)
        bad_value(key, "'linear' takes exactly two values");
    return entry;
}

const std::set<std::string> kKnownKeys = {
    "kernel.variant",   "kernel.alpha",     "kernel.terms",     "grid.T",
    "grid.N",           "lambda",           "refinement",       "model.backend",
    "model.d",          "model.k",          "model.M",          "model.m_max",
    "model.lambda_min", "model.lambda_max", "model.lambda_nodes", "s",
    "coeff.a",          "coeff.b",          "init",             "source",
    "source.modulation", "gamma",           "gap_override",     "tol.exact",
    "tol.scheme",       "checks",           "snapshots",        "threads",
    "out"};

const std::set<std::string> kCoeffKinds = {"constant", "linear", "samples"};
const std::set<std::string> kInitKinds = {"constant", "cosine", "random"};
const std::set<std::string> kSourceKinds = {"none", "constant", "cosine", "random"};
const std::set<std::string> kModulationKinds = {"constant", "cosine"};
const std::set<std::string> kCheckNames = {"homogeneous", "inhomogeneous", "maxprin", "signpres"};

void apply_entry(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "kernel.variant") {
        if (value != "caputo" && value != "multiterm" && value != "distributed" &&
            value != "exponential")
            bad_value(key, "unknown variant '" + value + "'");
        config.kernel_variant = value;
    } else if (key == "kernel.alpha") {
        config.kernel_alpha = parse_double(key, value);
    } else if (key == "kernel.terms") {
        config.kernel_terms = parse_terms(key, value);
    } else if (key == "grid.T") {
        config.horizon = parse_double(key, value);
        if (!(config.horizon > 0.0)) bad_value(key, "horizon must be positive");
    } else if (key == "grid.N") {
        config.steps = parse_long(key, value);
        if (config.steps < 2 || config.steps > 1000000) bad_value(key, "needs 2 <= N <= 1000000");
    } else if (key == "lambda") {
        config.lambda = parse_double(key, value);
        if (!(config.lambda > 0.0)) bad_value(key, "lambda must be positive");
    } else if (key == "refinement") {
        if (value != "auto" && value != "none") bad_value(key, "expected auto or none");
        config.refinement = value;
    } else if (key == "model.backend") {
        if (value != "torus" && value != "heisenberg")
            bad_value(key, "expected torus or heisenberg");
        config.backend = value;
    } else if (key == "model.d") {
        config.dim = parse_int(key, value);
    } else if (key == "model.k") {
        config.power = parse_int(key, value);
    } else if (key == "model.M") {
        config.points = parse_int(key, value);
    } else if (key == "model.m_max") {
        config.m_max = parse_int(key, value);
    } else if (key == "model.lambda_min") {
        config.band_min = parse_double(key, value);
    } else if (key == "model.lambda_max") {
        config.band_max = parse_double(key, value);
    } else if (key == "model.lambda_nodes") {
        config.band_nodes = parse_int(key, value);
    } else if (key == "s") {
        config.s = parse_double(key, value);
        if (!(config.s > 0.0) || !(config.s <= 1.0)) bad_value(key, "s must lie in (0, 1]");
    } else if (key == "coeff.a") {
        config.coeff_a = parse_spec(key, value, kCoeffKinds);
    } else if (key == "coeff.b") {
        config.coeff_b = parse_spec(key, value, kCoeffKinds);
    } else if (key == "init") {
        config.init = parse_spec(key, value, kInitKinds);
    } else if (key == "source") {
        config.source = parse_spec(key, value, kSourceKinds);
    } else if (key == "source.modulation") {
        config.modulation = parse_spec(key, value, kModulationKinds);
        if (config.modulation.kind == "cosine" && config.modulation.numbers.size() != 1)
            bad_value(key, "cosine modulation takes exactly one frequency");
    } else if (key == "gamma") {
        config.gammas = parse_double_list(key, value);
        for (double g : config.gammas)
            if (!(g >= 0.0)) bad_value(key, "gamma values must be nonnegative");
    } else if (key == "gap_override") {
        config.gap_override = parse_bool(key, value);
    } else if (key == "tol.exact") {
        config.tol_exact = parse_double(key, value);
        if (!(config.tol_exact > 0.0)) bad_value(key, "tolerance must be positive");
    } else if (key == "tol.scheme") {
        config.tol_scheme = parse_double(key, value);
        if (!(config.tol_scheme > 0.0)) bad_value(key, "tolerance must be positive");
    } else if (key == "checks") {
        config.checks.clear();
        for (const auto& name : split(value, ',')) {
            if (name.empty()) bad_value(key, "empty check name");
            if (kCheckNames.find(name) == kCheckNames.end())
                bad_value(key, "unknown check '" + name + "'");
            config.checks.push_back(name);
        }
        if (config.checks.empty()) bad_value(key, "checks must not be empty");
    } else if (key == "snapshots") {
        config.snapshot_times = parse_double_list(key, value);
        for (double t : config.snapshot_times)
            if (!(t >= 0.0)) bad_value(key, "snapshot times must be nonnegative");
    } else if (key == "threads") {
        config.threads = parse_int(key, value);
        if (config.threads < 1 || config.threads > 256) bad_value(key, "needs 1 <= threads <= 256");
    } else if (key == "out") {
        if (value.empty()) bad_value(key, "output path must not be empty");
        config.out_dir = value;
    } else {
        throw config_error("config: unknown configuration key: " + key);
    }
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::set<std::string> seen;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;

        const auto equals = line.find('=');
        if (equals == std::string::npos)
            throw config_error("config: line " + std::to_string(line_no) +
                               ": expected 'key = value'");
        const std::string key = trim(line.substr(0, equals));
        const std::string value = trim(line.substr(equals + 1));
        if (key.empty())
            throw config_error("config: line " + std::to_string(line_no) + ": missing key");
        if (kKnownKeys.find(key) == kKnownKeys.end())
            throw config_error("config: unknown configuration key: " + key);
        if (!seen.insert(key).second)
            throw config_error("config: duplicate configuration key: " + key);
        if (value.empty() && key != "checks")
            throw config_error("config: " + key + ": missing value");
        apply_entry(config, key, value);
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw config_error("config: cannot open file: " + path);
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return parse_config(buffer.str());
}

} // namespace fracdiff
