#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qotto/collision.hpp"
#include "qotto/density.hpp"
#include "qotto/haar.hpp"

namespace qotto {

/// Below this input heat a cycle's efficiency is reported as undefined
/// instead of an overflowing ratio.
inline constexpr double kQinFloor = 1e-12;

struct OttoParams {
    double delta1 = 2.0;  // gap during the hot stroke
    double delta2 = 1.0;  // gap during the cold stroke
    std::size_t mu = 2;
    double alpha = 0.3141592653589793;  // pi/10
    long long n_cycles = 100000;        // retained cycles per chain
    long long n_discard = 10;           // extra leading cycles dropped per chain
    std::uint64_t master_seed = 0;
    long long n_chains = 1;

    std::vector<std::string> validate() const {
        constexpr double half_pi = 1.57079632679489661923132169163975144;
        std::vector<std::string> errs;
        if (!(delta1 > 0.0) || !(delta2 > 0.0) || !(delta1 > delta2))
            errs.push_back("gaps must satisfy delta1 > delta2 > 0, got delta1 = " +
                           std::to_string(delta1) + ", delta2 = " + std::to_string(delta2));
        if (mu < 2) errs.push_back("mu must be >= 2");
        if (!(alpha >= 0.0 && alpha <= half_pi)) errs.push_back("alpha must lie in [0, pi/2]");
        if (n_cycles < 1) errs.push_back("n_cycles must be >= 1");
        if (n_discard < 0) errs.push_back("n_discard must be >= 0");
        if (n_chains < 1) errs.push_back("n_chains must be >= 1");
        return errs;
    }
};

/// One cycle's bookkeeping. z / z' / z'' are the Bloch z components after the
/// previous cycle, after the hot stroke, and after the cold stroke. Sign
/// convention: q_in, w_out, q_out, w_in are energy changes of the working
/// medium during strokes A-D, w = w_in + w_out is the net extracted work
/// (positive when the engine outputs work).
struct CycleRecord {
    double z, z_prime, z_dprime;
    double q_in, w_out, q_out, w_in, w;
    double eta;       // NaN when eta_finite is false
    bool eta_finite;
};

/// Stroke A: isochoric contact with the hot reservoir at gap delta1.
template <typename Sampler>
std::pair<DensityOperator, double> stroke_a(const DensityOperator& rho, const ReservoirSpec& spec,
                                            Sampler& sampler, double delta1) {
    DensityOperator out = hot_collision(rho, spec, sampler);
    const double q_in = 0.5 * delta1 * (bloch_z(out) - bloch_z(rho));
    return {std::move(out), q_in};
}

/// Stroke B: adiabatic compression delta1 -> delta2; populations frozen.
inline double stroke_b(const DensityOperator& rho_prime, double delta1, double delta2) {
    return 0.5 * bloch_z(rho_prime) * (delta1 - delta2);
}

/// Stroke C: isochoric contact with the cold reservoir at gap delta2.
inline std::pair<DensityOperator, double> stroke_c(const DensityOperator& rho_prime,
                                                   const ReservoirSpec& spec, double delta2) {
    DensityOperator out = cold_collision(rho_prime, spec);
    const double q_out = 0.5 * delta2 * (bloch_z(out) - bloch_z(rho_prime));
    return {std::move(out), q_out};
}

/// Stroke D: adiabatic expansion delta2 -> delta1; populations frozen.
inline double stroke_d(const DensityOperator& rho_dprime, double delta1, double delta2) {
    return 0.5 * bloch_z(rho_dprime) * (delta2 - delta1);
}

inline std::optional<double> cycle_efficiency(double w, double q_in) {
    if (std::abs(q_in) < kQinFloor) return std::nullopt;
    return w / q_in;
}

inline std::optional<double> cycle_efficiency(const CycleRecord& rec) {
    return cycle_efficiency(rec.w, rec.q_in);
}

/// One chain of cycles starting from the ground state. Runs
/// n_discard + n_cycles cycles and returns the last n_cycles records.
/// The chain index selects the sampler's RNG stream, so chains are
/// independent and individually reproducible.
inline std::vector<CycleRecord> run_otto_chain(const OttoParams& p, std::uint64_t chain) {
    const ReservoirSpec spec = ReservoirSpec::make(p.mu, p.alpha);
    HaarSampler sampler(2 * p.mu, p.master_seed, chain);
    DensityOperator rho = DensityOperator::basis_state(2, 1);

    std::vector<CycleRecord> records;
    records.reserve(static_cast<std::size_t>(p.n_cycles));
    const long long total = p.n_discard + p.n_cycles;
    for (long long c = 0; c < total; ++c) {
        CycleRecord rec{};
        rec.z = bloch_z(rho);
        auto [rho_prime, q_in] = stroke_a(rho, spec, sampler, p.delta1);
        rec.z_prime = bloch_z(rho_prime);
        rec.q_in = q_in;
        rec.w_out = stroke_b(rho_prime, p.delta1, p.delta2);
        auto [rho_dprime, q_out] = stroke_c(rho_prime, spec, p.delta2);
        rec.z_dprime = bloch_z(rho_dprime);
        rec.q_out = q_out;
        rec.w_in = stroke_d(rho_dprime, p.delta1, p.delta2);
        rec.w = rec.w_in + rec.w_out;
        const auto eta = cycle_efficiency(rec.w, rec.q_in);
        rec.eta_finite = eta.has_value();
        rec.eta = eta.value_or(std::numeric_limits<double>::quiet_NaN());
        rho = std::move(rho_dprime);
        if (c >= p.n_discard) records.push_back(rec);
    }
    return records;
}

struct OttoRun {
    OttoParams params;
    std::vector<CycleRecord> records;  // chain-major

    std::vector<double> w_samples() const { return column(&CycleRecord::w); }
    std::vector<double> q_in_samples() const { return column(&CycleRecord::q_in); }

    std::vector<double> finite_eta_samples() const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records)
            if (r.eta_finite) out.push_back(r.eta);
        return out;
    }

    long long n_flagged() const {
        long long n = 0;
        for (const auto& r : records) n += r.eta_finite ? 0 : 1;
        return n;
    }

private:
    std::vector<double> column(double CycleRecord::* field) const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(r.*field);
        return out;
    }
};

inline OttoRun run_otto(const OttoParams& p) {
    const auto errs = p.validate();
    if (!errs.empty()) {
        std::string msg = "run_otto: invalid parameters";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw std::invalid_argument(msg);
    }
    OttoRun run{p, {}};
    run.records.reserve(static_cast<std::size_t>(p.n_cycles * p.n_chains));
    for (long long chain = 0; chain < p.n_chains; ++chain) {
        auto recs = run_otto_chain(p, static_cast<std::uint64_t>(chain));
        run.records.insert(run.records.end(), recs.begin(), recs.end());
    }
    return run;
}

/// Ensemble efficiency sum(W) / sum(Q_in) over retained cycles.
inline double macroscopic_efficiency(const std::vector<CycleRecord>& records) {
    if (records.empty())
        throw std::domain_error("macroscopic_efficiency: no cycle records");
    double sum_w = 0.0, sum_q = 0.0;
    for (const auto& r : records) {
        sum_w += r.w;
        sum_q += r.q_in;
    }
    if (sum_q == 0.0)
        throw std::domain_error("macroscopic_efficiency: total input heat is zero");
    return sum_w / sum_q;
}

}  // namespace qotto
