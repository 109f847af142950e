#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qotto/runner.hpp"
#include "qotto/version.hpp"

namespace {

void add_common(CLI::App* cmd, qotto::ExperimentConfig& cfg) {
    cmd->fallthrough();  // lets the top-level --config appear after the subcommand
    cmd->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "worker threads (output is thread-count invariant)")
        ->capture_default_str();
}

void add_stochastic(CLI::App* cmd, qotto::ExperimentConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "master seed (required; streams derive from it)");
    cmd->add_option("--mu", cfg.mu, "hot-reservoir qudit dimension")->capture_default_str();
    cmd->add_option("--alpha", cfg.alpha, "partial-swap angle in [0, pi/2]")
        ->capture_default_str();
    cmd->add_option("--bins", cfg.bins, "histogram bin count (0 = automatic)")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    qotto::ExperimentConfig cfg;

    CLI::App app{"collision-model quantum battery and Otto engine simulator"};
    app.set_version_flag("--version", std::string(qotto::kVersion));
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key = value file under a [battery]/[otto]/[ratio-pdf] section; "
                   "command-line flags win");
    app.allow_config_extras(CLI::config_extras_mode::error);

    CLI::App* battery =
        app.add_subcommand("battery", "alternating-collision charging, ergotropy statistics");
    add_common(battery, cfg);
    add_stochastic(battery, cfg);
    battery->add_option("--delta", cfg.delta, "battery qubit gap")->capture_default_str();
    battery->add_option("--collisions", cfg.collisions, "collisions per trajectory")
        ->capture_default_str();
    battery->add_option("--trajectories", cfg.trajectories, "ensemble size")
        ->capture_default_str();

    CLI::App* otto = app.add_subcommand("otto", "four-stroke engine, work/heat/efficiency statistics");
    add_common(otto, cfg);
    add_stochastic(otto, cfg);
    otto->add_option("--delta1", cfg.delta1, "gap during the hot stroke")->capture_default_str();
    otto->add_option("--delta2", cfg.delta2, "gap during the cold stroke")->capture_default_str();
    otto->add_option("--cycles", cfg.cycles, "retained cycles per chain")->capture_default_str();
    otto->add_option("--discard", cfg.discard, "leading cycles dropped per chain")
        ->capture_default_str();
    otto->add_option("--chains", cfg.chains, "independent chains")->capture_default_str();
    otto->add_option("--eta-bins", cfg.eta_bins, "bins of the central efficiency histogram")
        ->capture_default_str();
    otto->add_option("--eta-min", cfg.eta_min, "left edge of the central efficiency histogram")
        ->capture_default_str();
    otto->add_option("--eta-max", cfg.eta_max, "right edge of the central efficiency histogram")
        ->capture_default_str();
    otto->add_option("--tail-bins", cfg.tail_bins, "log-spaced bins per efficiency tail")
        ->capture_default_str();

    CLI::App* ratio = app.add_subcommand("ratio-pdf", "tabulate the Gaussian-ratio density");
    add_common(ratio, cfg);
    ratio->add_option("--mu-w", cfg.mu_w, "numerator mean")->capture_default_str();
    ratio->add_option("--sigma-w", cfg.sigma_w, "numerator standard deviation")
        ->capture_default_str();
    ratio->add_option("--mu-q", cfg.mu_q, "denominator mean")->capture_default_str();
    ratio->add_option("--sigma-q", cfg.sigma_q, "denominator standard deviation")
        ->capture_default_str();
    ratio->add_option("--eta-min", cfg.eta_min, "table range, left edge")->capture_default_str();
    ratio->add_option("--eta-max", cfg.eta_max, "table range, right edge")->capture_default_str();
    ratio->add_option("--points", cfg.points, "table size")->capture_default_str();
    ratio->add_flag("--wide-bracket", cfg.wide_bracket,
                    "also tabulate the non-normalized wide-bracket variant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (battery->parsed()) cfg.kind = qotto::ExperimentKind::Battery;
    if (otto->parsed()) cfg.kind = qotto::ExperimentKind::Otto;
    if (ratio->parsed()) cfg.kind = qotto::ExperimentKind::RatioPdfTable;

    try {
        const auto files = qotto::run_experiment(cfg);
        for (const auto& f : files) std::cout << f << '\n';
        return 0;
    } catch (const qotto::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qotto::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
