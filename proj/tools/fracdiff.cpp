#include <algorithm>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "fracdiff/config.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/runner.hpp"

namespace {

int fail(const char* what, int code) {
    std::cerr << "error: " << what << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memory-kernel relaxation and diffusion toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = -1;

    const auto add_run = [&](const std::string& name, const std::string& description) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory, overrides the config");
        sub->add_option("--threads", threads, "worker threads, overrides the config (0 = auto)")
            ->check(CLI::Range(0, 256));
        return sub;
    };
    add_run("relax", "solve the scalar relaxation problem and write relax.csv");
    add_run("solve", "solve the mode-space diffusion problem");
    add_run("verify", "run the configured estimate checks and write a report");
    add_run("admissible", "probe the kernel admissibility conditions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string mode = app.get_subcommands().front()->get_name();
    try {
        fracdiff::RunConfig config = fracdiff::load_config(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (threads == 0)
            config.threads = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
        else if (threads > 0)
            config.threads = threads;

        if (mode == "relax") return fracdiff::run_relax(config);
        if (mode == "solve") return fracdiff::run_solve(config);
        if (mode == "verify") return fracdiff::run_verify(config);
        return fracdiff::run_admissible(config);
    } catch (const fracdiff::config_error& e) {
        return fail(e.what(), 2);
    } catch (const fracdiff::capability_error& e) {
        return fail(e.what(), 4);
    } catch (const fracdiff::convergence_error& e) {
        return fail(e.what(), 3);
    } catch (const std::invalid_argument& e) {
        return fail(e.what(), 2);
    } catch (const std::domain_error& e) {
        return fail(e.what(), 3);
    } catch (const std::exception& e) {
        return fail(e.what(), 2);
    }
}
