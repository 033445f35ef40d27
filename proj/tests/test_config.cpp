#include <string>
#include <vector>

#include "doctest.h"

#include "fracdiff/config.hpp"
#include "fracdiff/errors.hpp"

using fracdiff::config_error;
using fracdiff::load_config;
using fracdiff::parse_config;
using fracdiff::RunConfig;

TEST_CASE("empty text yields the documented defaults") {
    const RunConfig config = parse_config("");
    CHECK(config.kernel_variant == "caputo");
    CHECK(config.kernel_alpha == 0.5);
    CHECK(config.kernel_terms.empty());
    CHECK(config.horizon == 1.0);
    CHECK(config.steps == 256);
    CHECK(config.lambda == 1.0);
    CHECK(config.refinement == "auto");
    CHECK(config.backend == "torus");
    CHECK(config.dim == 1);
    CHECK(config.power == 1);
    CHECK(config.points == 32);
    CHECK(config.s == 1.0);
    CHECK(config.coeff_a.kind == "constant");
    CHECK(config.coeff_a.numbers == std::vector<double>{1.0});
    CHECK(config.coeff_b.numbers == std::vector<double>{0.0});
    CHECK(config.init.kind == "constant");
    CHECK(config.source.kind == "none");
    CHECK(config.modulation.kind == "constant");
    CHECK(config.gammas.empty());
    CHECK_FALSE(config.gap_override);
    CHECK(config.tol_exact == 1e-8);
    CHECK(config.tol_scheme == 5e-3);
    CHECK(config.checks.size() == 4);
    CHECK(config.snapshot_times.empty());
    CHECK(config.threads == 1);
    CHECK(config.out_dir == ".");
}

TEST_CASE("keys map onto their fields") {
    const RunConfig config = parse_config(R"(# full run
kernel.variant = multiterm
kernel.terms = 0.4:0.2, 0.6:0.7
grid.T = 2.5
grid.N = 512
refinement = none
model.backend = heisenberg
model.m_max = 8
model.lambda_min = 0.5
model.lambda_max = 4
model.lambda_nodes = 16
s = 0.5
coeff.a = linear:1,0.5
coeff.b = constant:0.3
init = random:42
source = cosine:0,2
source.modulation = cosine:1
gamma = 0, 1, 2
gap_override = true
tol.exact = 1e-6
tol.scheme = 0.01
checks = inhomogeneous, maxprin
snapshots = 0.5, 1.0
threads = 4
out = run_dir # trailing comment
)");
    CHECK(config.kernel_variant == "multiterm");
    REQUIRE(config.kernel_terms.size() == 2);
    CHECK(config.kernel_terms[0] == std::pair<double, double>{0.4, 0.2});
    CHECK(config.kernel_terms[1] == std::pair<double, double>{0.6, 0.7});
    CHECK(config.horizon == 2.5);
    CHECK(config.steps == 512);
    CHECK(config.refinement == "none");
    CHECK(config.backend == "heisenberg");
    CHECK(config.m_max == 8);
    CHECK(config.band_min == 0.5);
    CHECK(config.band_max == 4.0);
    CHECK(config.band_nodes == 16);
    CHECK(config.s == 0.5);
    CHECK(config.coeff_a.kind == "linear");
    CHECK(config.coeff_a.numbers == std::vector<double>{1.0, 0.5});
    CHECK(config.coeff_b.numbers == std::vector<double>{0.3});
    CHECK(config.init.kind == "random");
    CHECK(config.init.seed == 42);
    CHECK(config.source.kind == "cosine");
    CHECK(config.source.numbers == std::vector<double>{0.0, 2.0});
    CHECK(config.modulation.numbers == std::vector<double>{1.0});
    CHECK(config.gammas == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(config.gap_override);
    CHECK(config.tol_exact == 1e-6);
    CHECK(config.tol_scheme == 0.01);
    CHECK(config.checks == std::vector<std::string>{"inhomogeneous", "maxprin"});
    CHECK(config.snapshot_times == std::vector<double>{0.5, 1.0});
    CHECK(config.threads == 4);
    CHECK(config.out_dir == "run_dir");
}

TEST_CASE("structure errors name the offender") {
    CHECK_THROWS_WITH_AS(parse_config("lambdas = 1"),
                         "config: unknown configuration key: lambdas", config_error);
    CHECK_THROWS_WITH_AS(parse_config("lambda = 1\nlambda = 2"),
                         "config: duplicate configuration key: lambda", config_error);
    CHECK_THROWS_WITH_AS(parse_config("just some words"),
                         "config: line 1: expected 'key = value'", config_error);
    CHECK_THROWS_WITH_AS(parse_config("\n\n= 3"), "config: line 3: missing key", config_error);
    CHECK_THROWS_WITH_AS(parse_config("lambda ="), "config: lambda: missing value", config_error);
}

TEST_CASE("value errors name the key") {
    CHECK_THROWS_WITH_AS(parse_config("lambda = -1"),
                         "config: lambda: lambda must be positive", config_error);
    CHECK_THROWS_WITH_AS(parse_config("lambda = 0"),
                         "config: lambda: lambda must be positive", config_error);
    CHECK_THROWS_WITH_AS(parse_config("grid.T = abc"),
                         "config: grid.T: expected a number, got 'abc'", config_error);
    CHECK_THROWS_WITH_AS(parse_config("grid.T = 0"),
                         "config: grid.T: horizon must be positive", config_error);
    CHECK_THROWS_WITH_AS(parse_config("grid.N = 1"),
                         "config: grid.N: needs 2 <= N <= 1000000", config_error);
    CHECK_THROWS_WITH_AS(parse_config("grid.N = 2000000"),
                         "config: grid.N: needs 2 <= N <= 1000000", config_error);
    CHECK_THROWS_AS(parse_config("s = 1.5"), config_error);
    CHECK_THROWS_AS(parse_config("s = 0"), config_error);
    CHECK_THROWS_AS(parse_config("refinement = fast"), config_error);
    CHECK_THROWS_AS(parse_config("model.backend = plane"), config_error);
    CHECK_THROWS_AS(parse_config("kernel.variant = riemann"), config_error);
    CHECK_THROWS_AS(parse_config("gap_override = yes"), config_error);
    CHECK_THROWS_AS(parse_config("threads = 0"), config_error);
    CHECK_THROWS_AS(parse_config("threads = 257"), config_error);
    CHECK_THROWS_AS(parse_config("tol.exact = 0"), config_error);
    CHECK_THROWS_AS(parse_config("tol.scheme = -0.1"), config_error);
    CHECK_THROWS_AS(parse_config("gamma = 0, -1"), config_error);
    CHECK_THROWS_AS(parse_config("snapshots = -0.5"), config_error);
    CHECK_THROWS_AS(parse_config("out ="), config_error);
}

TEST_CASE("path and profile specs are validated at parse time") {
    CHECK_THROWS_AS(parse_config("coeff.a = constant:1,2"), config_error);
    CHECK_THROWS_AS(parse_config("coeff.a = linear:1"), config_error);
    CHECK_THROWS_AS(parse_config("coeff.a = cosine:1"), config_error);
    CHECK_THROWS_AS(parse_config("coeff.a = samples:"), config_error);
    CHECK_THROWS_AS(parse_config("init = none"), config_error);
    CHECK_THROWS_AS(parse_config("init = random:-1"), config_error);
    CHECK_THROWS_AS(parse_config("init = random:1.5"), config_error);
    CHECK_THROWS_AS(parse_config("source = none:1"), config_error);
    CHECK_THROWS_AS(parse_config("source.modulation = cosine:1,2"), config_error);
    CHECK_THROWS_AS(parse_config("source.modulation = random:7"), config_error);
    CHECK_THROWS_AS(parse_config("checks = bogus"), config_error);
    CHECK_THROWS_AS(parse_config("checks ="), config_error);
    CHECK_THROWS_AS(parse_config("kernel.terms = 0.4"), config_error);

    const RunConfig samples = parse_config("coeff.b = samples:0, 0.5, 1");
    CHECK(samples.coeff_b.kind == "samples");
    CHECK(samples.coeff_b.numbers.size() == 3);
}

TEST_CASE("comments and blank lines are skipped") {
    const RunConfig config = parse_config("\n  # nothing here\n\n  lambda = 2.5  # tail\n");
    CHECK(config.lambda == 2.5);
}

TEST_CASE("missing files are reported") {
    CHECK_THROWS_AS(load_config("/nonexistent/fracdiff.conf"), config_error);
}
