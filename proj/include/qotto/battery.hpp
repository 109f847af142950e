#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qotto/collision.hpp"
#include "qotto/density.hpp"
#include "qotto/ergotropy.hpp"
#include "qotto/haar.hpp"

namespace qotto {

struct BatteryRunConfig {
    std::size_t mu = 2;
    double alpha = 0.3141592653589793;  // pi/10
    double delta = 1.0;                 // charger-qubit splitting
    long long n_collisions = 100;
    long long n_trajectories = 1000;
    std::uint64_t master_seed = 0;
    std::optional<DensityOperator> initial_state;  // default: excited state

    std::vector<std::string> validate() const {
        constexpr double half_pi = 1.57079632679489661923132169163975144;
        std::vector<std::string> errs;
        if (mu < 2) errs.push_back("mu must be >= 2");
        if (!(alpha >= 0.0 && alpha <= half_pi)) errs.push_back("alpha must lie in [0, pi/2]");
        if (!(delta > 0.0)) errs.push_back("delta must be positive");
        if (n_collisions < 1) errs.push_back("n_collisions must be >= 1");
        if (n_trajectories < 1) errs.push_back("n_trajectories must be >= 1");
        if (initial_state && initial_state->dim() != 2)
            errs.push_back("initial state must be a qubit state");
        return errs;
    }
};

struct BatteryRun {
    BatteryRunConfig config;
    // ergotropy[t][k]: trajectory t after collision k (collision 0 is hot,
    // then hot and cold alternate)
    std::vector<std::vector<double>> ergotropy;
};

/// One trajectory of the collision battery: alternating hot/cold collisions
/// starting hot, recording the ergotropy after every collision. The
/// trajectory index selects the RNG stream.
inline std::vector<double> run_battery_trajectory(const BatteryRunConfig& cfg,
                                                  std::uint64_t trajectory) {
    const ReservoirSpec spec = ReservoirSpec::make(cfg.mu, cfg.alpha);
    HaarSampler sampler(2 * cfg.mu, cfg.master_seed, trajectory);
    DensityOperator rho = cfg.initial_state.value_or(DensityOperator::basis_state(2, 0));

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(cfg.n_collisions));
    for (long long k = 0; k < cfg.n_collisions; ++k) {
        rho = (k % 2 == 0) ? hot_collision(rho, spec, sampler) : cold_collision(rho, spec);
        out.push_back(ergotropy_qubit_bloch(bloch_from_density(rho), cfg.delta));
    }
    return out;
}

inline BatteryRun run_battery(const BatteryRunConfig& cfg) {
    const auto errs = cfg.validate();
    if (!errs.empty()) {
        std::string msg = "run_battery: invalid parameters";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw std::invalid_argument(msg);
    }
    BatteryRun run{cfg, {}};
    run.ergotropy.reserve(static_cast<std::size_t>(cfg.n_trajectories));
    for (long long t = 0; t < cfg.n_trajectories; ++t)
        run.ergotropy.push_back(run_battery_trajectory(cfg, static_cast<std::uint64_t>(t)));
    return run;
}

struct MeanStd {
    double mean;
    double stddev;  // unbiased across trajectories; 0 for a single trajectory
    double sem;
};

/// Ensemble mean/spread of the ergotropy at each collision index.
inline std::vector<MeanStd> mean_ergotropy_by_collision(const BatteryRun& run) {
    if (run.ergotropy.empty())
        throw std::invalid_argument("mean_ergotropy_by_collision: empty run");
    const std::size_t n_traj = run.ergotropy.size();
    const std::size_t n_coll = run.ergotropy.front().size();
    std::vector<MeanStd> out(n_coll);
    for (std::size_t k = 0; k < n_coll; ++k) {
        double sum = 0.0;
        for (const auto& traj : run.ergotropy) sum += traj[k];
        const double mean = sum / static_cast<double>(n_traj);
        double ss = 0.0;
        for (const auto& traj : run.ergotropy) {
            const double d = traj[k] - mean;
            ss += d * d;
        }
        const double var = n_traj > 1 ? ss / static_cast<double>(n_traj - 1) : 0.0;
        const double sd = std::sqrt(var);
        out[k] = MeanStd{mean, sd, sd / std::sqrt(static_cast<double>(n_traj))};
    }
    return out;
}

}  // namespace qotto
