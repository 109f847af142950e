#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qotto/battery.hpp"
#include "qotto/otto.hpp"
#include "qotto/stats.hpp"
#include "qotto/version.hpp"

namespace qotto {

enum class ExperimentKind { Battery, Otto, RatioPdfTable };

inline const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Battery: return "battery";
        case ExperimentKind::Otto: return "otto";
        case ExperimentKind::RatioPdfTable: return "ratio-pdf";
    }
    return "?";
}

/// Union of the knobs of all three experiments; validate() checks only the
/// fields the selected kind uses.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Otto;

    std::size_t mu = 2;
    double alpha = 0.3141592653589793;  // pi/10
    double delta = 1.0;                 // battery gap
    double delta1 = 2.0, delta2 = 1.0;  // engine gaps

    long long cycles = 100000;
    long long discard = 10;
    long long chains = 1;
    long long collisions = 24;
    long long trajectories = 10000;
    std::optional<std::uint64_t> seed;  // mandatory for stochastic kinds

    // ratio-pdf table
    double mu_w = 0.0, sigma_w = 1.0;
    double mu_q = 0.0, sigma_q = 1.0;
    double eta_min = -10.0, eta_max = 10.0;
    long long points = 2001;
    bool wide_bracket = false;  // also tabulate the non-normalized bracket variant

    // histogram knobs (0 = automatic bin count)
    long long bins = 0;
    long long eta_bins = 200;
    long long tail_bins = 40;

    std::string out_dir = ".";
    int threads = 1;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All violated constraints, each prefixed with the offending field.
inline std::vector<std::string> validate_experiment_config(const ExperimentConfig& c) {
    constexpr double half_pi = 1.57079632679489661923132169163975144;
    std::vector<std::string> errs;
    const bool stochastic = c.kind != ExperimentKind::RatioPdfTable;

    if (stochastic && !c.seed)
        errs.push_back("seed: required, no implicit entropy source is used");
    if (stochastic) {
        if (c.mu < 2) errs.push_back("mu: must be >= 2");
        if (!(c.alpha >= 0.0 && c.alpha <= half_pi))
            errs.push_back("alpha: swap angle must lie in [0, pi/2]");
    }
    if (c.kind == ExperimentKind::Battery) {
        if (!(c.delta > 0.0)) errs.push_back("delta: gap must be positive");
        if (c.collisions < 1) errs.push_back("collisions: must be >= 1");
        if (c.trajectories < 1) errs.push_back("trajectories: must be >= 1");
    }
    if (c.kind == ExperimentKind::Otto) {
        if (!(c.delta1 > 0.0) || !(c.delta2 > 0.0) || !(c.delta1 > c.delta2))
            errs.push_back("delta1/delta2: gaps must satisfy delta1 > delta2 > 0");
        if (c.cycles < 1) errs.push_back("cycles: must be >= 1");
        if (c.discard < 0) errs.push_back("discard: must be >= 0");
        if (c.chains < 1) errs.push_back("chains: must be >= 1");
    }
    if (c.kind == ExperimentKind::RatioPdfTable) {
        if (!(c.sigma_w > 0.0)) errs.push_back("sigma-w: must be positive");
        if (!(c.sigma_q > 0.0)) errs.push_back("sigma-q: must be positive");
        if (!(c.eta_min < c.eta_max)) errs.push_back("eta-min/eta-max: need eta_min < eta_max");
        if (c.points < 2) errs.push_back("points: must be >= 2");
    }
    if (c.bins < 0) errs.push_back("bins: must be >= 0 (0 = automatic)");
    if (c.eta_bins < 1) errs.push_back("eta-bins: must be >= 1");
    if (c.tail_bins < 5) errs.push_back("tail-bins: must be >= 5");
    if (c.threads < 1) errs.push_back("threads: must be >= 1");
    if (c.out_dir.empty()) errs.push_back("out: output directory must be nonempty");
    return errs;
}

namespace detail {

/// Shortest round-trip decimal form, identical across runs and platforms.
inline std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_int(long long v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// RFC-4180 quoting; our numeric fields never trigger it, but headers could.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    q += '"';
    return q;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : path_(path), out_(path) {
        if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_field(fields[i]);
        }
        out_ << '\n';
        if (!out_) throw IoError("write failed on " + path_.string());
    }

    void close() {
        out_.close();
        if (!out_) throw IoError("close failed on " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

inline std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed on " + path.string());
}

inline void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
    CsvWriter csv(path);
    csv.row({"bin_left", "bin_right", "count", "density"});
    for (std::size_t i = 0; i < h.n_bins(); ++i)
        csv.row({fmt_double(h.edges[i]), fmt_double(h.edges[i + 1]), fmt_int(h.counts[i]),
                 fmt_double(h.density(i))});
    csv.close();
}

inline nlohmann::json histogram_meta(const Histogram& h) {
    return {{"bins", h.n_bins()},
            {"underflow", h.underflow},
            {"overflow", h.overflow},
            {"total", h.total}};
}

/// Runs fn(i) for i in [0, n) on the requested number of threads. Slot i of
/// the result vector always holds fn(i), so the merged output is identical
/// for any thread count.
template <typename T, typename Fn>
std::vector<T> indexed_parallel_map(long long n, int threads, Fn fn) {
    std::vector<T> out(static_cast<std::size_t>(n));
    const int n_workers = static_cast<int>(std::min<long long>(threads, n));
    if (n_workers <= 1) {
        for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            for (long long i = w; i < n; i += n_workers)
                out[static_cast<std::size_t>(i)] = fn(i);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

inline nlohmann::json gaussian_fit_json(const GaussianFit& f) {
    return {{"mean", f.mean}, {"stddev", f.stddev}, {"n", f.n}, {"degenerate", f.degenerate}};
}

struct ArtifactList {
    std::filesystem::path dir;
    std::string stem;
    std::vector<std::string> names;

    std::filesystem::path add(const std::string& suffix) {
        names.push_back(stem + "_" + suffix);
        return dir / names.back();
    }
};

inline nlohmann::json common_params(const ExperimentConfig& c) {
    nlohmann::json j{{"out", c.out_dir}, {"threads", c.threads}};
    if (c.seed) j["seed"] = *c.seed;
    return j;
}

inline void write_manifest(const std::filesystem::path& path, const ExperimentConfig& c,
                           nlohmann::json params, const std::vector<std::string>& artifacts) {
    nlohmann::json m{{"experiment", kind_name(c.kind)},
                     {"version", kVersion},
                     {"rng", kRngTag},
                     {"parameters", std::move(params)},
                     {"artifacts", artifacts},
                     // informational only; excluded from reproducibility comparisons
                     {"timestamp", iso8601_utc_now()}};
    write_json(path, m);
}

// ------------------------------------------------------------------ otto --

inline std::vector<std::string> run_otto_experiment(const ExperimentConfig& c) {
    OttoParams p;
    p.delta1 = c.delta1;
    p.delta2 = c.delta2;
    p.mu = c.mu;
    p.alpha = c.alpha;
    p.n_cycles = c.cycles;
    p.n_discard = c.discard;
    p.master_seed = *c.seed;
    p.n_chains = c.chains;

    const auto chains = indexed_parallel_map<std::vector<CycleRecord>>(
        c.chains, c.threads,
        [&](long long i) { return run_otto_chain(p, static_cast<std::uint64_t>(i)); });
    OttoRun run{p, {}};
    run.records.reserve(static_cast<std::size_t>(c.chains * c.cycles));
    for (const auto& recs : chains) run.records.insert(run.records.end(), recs.begin(), recs.end());

    ArtifactList art{std::filesystem::path(c.out_dir),
                     std::string(kind_name(c.kind)) + "_seed" + fmt_int(static_cast<long long>(*c.seed)),
                     {}};

    {
        CsvWriter csv(art.add("records.csv"));
        csv.row({"chain", "cycle", "z", "z_prime", "z_dprime", "q_in", "w_out", "q_out", "w_in",
                 "w", "eta", "eta_finite"});
        for (std::size_t i = 0; i < run.records.size(); ++i) {
            const auto& r = run.records[i];
            const long long chain = static_cast<long long>(i) / c.cycles;
            const long long cyc = static_cast<long long>(i) % c.cycles;
            csv.row({fmt_int(chain), fmt_int(cyc), fmt_double(r.z), fmt_double(r.z_prime),
                     fmt_double(r.z_dprime), fmt_double(r.q_in), fmt_double(r.w_out),
                     fmt_double(r.q_out), fmt_double(r.w_in), fmt_double(r.w),
                     r.eta_finite ? fmt_double(r.eta) : std::string(),
                     r.eta_finite ? "1" : "0"});
        }
        csv.close();
    }

    const auto w = run.w_samples();
    const auto q = run.q_in_samples();
    const auto eta = run.finite_eta_samples();

    nlohmann::json summary{{"n_records", run.records.size()}, {"n_chains", c.chains}};

    const auto bulk_spec = [&](const std::vector<double>& s) {
        return c.bins > 0 ? BinSpec::uniform(static_cast<std::size_t>(c.bins),
                                             *std::min_element(s.begin(), s.end()),
                                             *std::max_element(s.begin(), s.end()))
                          : BinSpec::freedman_diaconis();
    };

    const bool w_degenerate = *std::min_element(w.begin(), w.end()) ==
                              *std::max_element(w.begin(), w.end());
    const bool q_degenerate = *std::min_element(q.begin(), q.end()) ==
                              *std::max_element(q.begin(), q.end());
    if (!w_degenerate) {
        const Histogram hw = make_histogram(w, bulk_spec(w));
        write_histogram_csv(art.add("hist_w.csv"), hw);
        summary["hist_w"] = histogram_meta(hw);
    }
    if (!q_degenerate) {
        const Histogram hq = make_histogram(q, bulk_spec(q));
        write_histogram_csv(art.add("hist_qin.csv"), hq);
        summary["hist_qin"] = histogram_meta(hq);
    }

    if (w.size() >= 2) {
        summary["w"] = gaussian_fit_json(fit_gaussian(w));
        summary["q_in"] = gaussian_fit_json(fit_gaussian(q));
        try {
            summary["w_q_correlation"] = pearson_correlation(w, q);
        } catch (const std::domain_error&) {
            summary["w_q_correlation"] = nullptr;
        }
    }

    try {
        summary["macroscopic_efficiency"] = macroscopic_efficiency(run.records);
    } catch (const std::domain_error& e) {
        summary["macroscopic_efficiency"] = nullptr;
        summary["macroscopic_efficiency_error"] = e.what();
    }

    // eta: central histogram plus log-spaced one-sided tails
    nlohmann::json eta_json{{"n_finite", eta.size()}, {"n_flagged", run.n_flagged()}};
    if (!eta.empty()) {
        const Histogram he = make_histogram(
            eta, BinSpec::uniform(static_cast<std::size_t>(c.eta_bins), c.eta_min, c.eta_max));
        write_histogram_csv(art.add("hist_eta.csv"), he);
        eta_json["hist"] = histogram_meta(he);

        std::vector<double> abs_eta;
        abs_eta.reserve(eta.size());
        for (double e : eta) abs_eta.push_back(std::abs(e));
        const auto [tail_lo, tail_hi] = tail_fit_range(abs_eta);
        eta_json["tail_fit_range"] = {tail_lo, tail_hi};
        if (tail_lo > 0.0 && tail_lo < tail_hi) {
            std::vector<double> pos, neg;
            for (double e : eta) {
                if (e > 0.0) pos.push_back(e);
                if (e < 0.0) neg.push_back(-e);
            }
            const BinSpec tail_spec = BinSpec::log_uniform(
                static_cast<std::size_t>(c.tail_bins), tail_lo, tail_hi);
            for (auto [samples, side] : {std::pair{&pos, "pos"}, std::pair{&neg, "neg"}}) {
                if (samples->empty()) continue;
                const Histogram ht = make_histogram(*samples, tail_spec);
                write_histogram_csv(art.add(std::string("hist_eta_tail_") + side + ".csv"), ht);
                try {
                    const TailFit tf = tail_exponent_fit(ht, tail_lo, tail_hi);
                    eta_json[std::string("tail_fit_") + side] = {{"exponent", tf.exponent},
                                                                 {"std_error", tf.std_error},
                                                                 {"n_bins", tf.n_bins}};
                } catch (const std::exception& e) {
                    eta_json[std::string("tail_fit_") + side] = nullptr;
                    eta_json[std::string("tail_fit_") + side + "_error"] = e.what();
                }
            }
        } else {
            eta_json["tail_fit_error"] = "degenerate tail range";
        }
    }
    summary["eta"] = std::move(eta_json);

    {
        std::vector<double> zs, zpps;
        zs.reserve(run.records.size());
        zpps.reserve(run.records.size());
        for (const auto& r : run.records) {
            zs.push_back(r.z);
            zpps.push_back(r.z_dprime);
        }
        const double n = static_cast<double>(zs.size());
        nlohmann::json st{{"mean_z", mean(zs)}, {"mean_z_dprime", mean(zpps)}};
        if (zs.size() >= 2) {
            st["sem_z"] = stddev(zs) / std::sqrt(n);
            st["sem_z_dprime"] = stddev(zpps) / std::sqrt(n);
        }
        summary["stationarity"] = std::move(st);
    }

    write_json(art.add("summary.json"), summary);

    nlohmann::json params = common_params(c);
    params["mu"] = c.mu;
    params["alpha"] = c.alpha;
    params["delta1"] = c.delta1;
    params["delta2"] = c.delta2;
    params["cycles"] = c.cycles;
    params["discard"] = c.discard;
    params["chains"] = c.chains;
    params["bins"] = c.bins;
    params["eta_bins"] = c.eta_bins;
    params["eta_range"] = {c.eta_min, c.eta_max};
    params["tail_bins"] = c.tail_bins;
    write_manifest(art.dir / (art.stem + "_manifest.json"), c, std::move(params), art.names);
    return art.names;
}

// --------------------------------------------------------------- battery --

inline std::vector<std::string> run_battery_experiment(const ExperimentConfig& c) {
    BatteryRunConfig cfg;
    cfg.mu = c.mu;
    cfg.alpha = c.alpha;
    cfg.delta = c.delta;
    cfg.n_collisions = c.collisions;
    cfg.n_trajectories = c.trajectories;
    cfg.master_seed = *c.seed;

    BatteryRun run{cfg, indexed_parallel_map<std::vector<double>>(
                            c.trajectories, c.threads, [&](long long t) {
                                return run_battery_trajectory(cfg, static_cast<std::uint64_t>(t));
                            })};

    ArtifactList art{std::filesystem::path(c.out_dir),
                     std::string(kind_name(c.kind)) + "_seed" + fmt_int(static_cast<long long>(*c.seed)),
                     {}};

    {
        CsvWriter csv(art.add("records.csv"));
        csv.row({"trajectory", "collision", "reservoir", "ergotropy"});
        for (std::size_t t = 0; t < run.ergotropy.size(); ++t)
            for (std::size_t k = 0; k < run.ergotropy[t].size(); ++k)
                csv.row({fmt_int(static_cast<long long>(t)), fmt_int(static_cast<long long>(k)),
                         k % 2 == 0 ? "hot" : "cold",
                         fmt_double(run.ergotropy[t][k])});
        csv.close();
    }

    const auto by_collision = mean_ergotropy_by_collision(run);
    {
        CsvWriter csv(art.add("mean.csv"));
        csv.row({"collision", "reservoir", "mean_ergotropy", "stddev", "sem"});
        for (std::size_t k = 0; k < by_collision.size(); ++k)
            csv.row({fmt_int(static_cast<long long>(k)), k % 2 == 0 ? "hot" : "cold",
                     fmt_double(by_collision[k].mean), fmt_double(by_collision[k].stddev),
                     fmt_double(by_collision[k].sem)});
        csv.close();
    }

    // steady-state snapshots: the last hot-collision index and the last
    // cold-collision index
    const long long n = c.collisions;
    const long long last_hot = (n - 1) - ((n - 1) % 2 == 0 ? 0 : 1);
    const long long last_cold = n >= 2 ? ((n - 1) % 2 == 1 ? n - 1 : n - 2) : -1;

    nlohmann::json summary{{"n_trajectories", c.trajectories}, {"n_collisions", c.collisions}};
    const auto snapshot = [&](long long k, const char* label) {
        if (k < 0) return;
        std::vector<double> vals;
        vals.reserve(run.ergotropy.size());
        for (const auto& traj : run.ergotropy) vals.push_back(traj[static_cast<std::size_t>(k)]);
        const std::size_t n_bins = c.bins > 0 ? static_cast<std::size_t>(c.bins) : 60;
        const Histogram h = make_histogram(vals, BinSpec::uniform(n_bins, 0.0, c.delta));
        write_histogram_csv(art.add(std::string("hist_") + label + ".csv"), h);
        summary[label] = {{"collision", k},
                          {"mean", by_collision[static_cast<std::size_t>(k)].mean},
                          {"stddev", by_collision[static_cast<std::size_t>(k)].stddev},
                          {"sem", by_collision[static_cast<std::size_t>(k)].sem},
                          {"hist", histogram_meta(h)}};
    };
    snapshot(last_hot, "after_hot");
    snapshot(last_cold, "after_cold");

    write_json(art.add("summary.json"), summary);

    nlohmann::json params = common_params(c);
    params["mu"] = c.mu;
    params["alpha"] = c.alpha;
    params["delta"] = c.delta;
    params["collisions"] = c.collisions;
    params["trajectories"] = c.trajectories;
    params["bins"] = c.bins;
    write_manifest(art.dir / (art.stem + "_manifest.json"), c, std::move(params), art.names);
    return art.names;
}

// --------------------------------------------------------- ratio-pdf table --

inline std::vector<std::string> run_ratio_pdf_experiment(const ExperimentConfig& c) {
    const RatioPdfParams p{c.mu_w, c.sigma_w, c.mu_q, c.sigma_q};
    ArtifactList art{std::filesystem::path(c.out_dir), "ratio_pdf", {}};

    {
        CsvWriter csv(art.add("table.csv"));
        if (c.wide_bracket)
            csv.row({"eta", "pdf", "pdf_wide_bracket"});
        else
            csv.row({"eta", "pdf"});
        for (long long i = 0; i < c.points; ++i) {
            const double eta = c.eta_min + (c.eta_max - c.eta_min) * static_cast<double>(i) /
                                               static_cast<double>(c.points - 1);
            std::vector<std::string> row{fmt_double(eta), fmt_double(ratio_pdf(eta, p))};
            if (c.wide_bracket) row.push_back(fmt_double(ratio_pdf_wide_bracket(eta, p)));
            csv.row(row);
        }
        csv.close();
    }

    nlohmann::json params = common_params(c);
    params["mu_w"] = c.mu_w;
    params["sigma_w"] = c.sigma_w;
    params["mu_q"] = c.mu_q;
    params["sigma_q"] = c.sigma_q;
    params["eta_range"] = {c.eta_min, c.eta_max};
    params["points"] = c.points;
    params["wide_bracket"] = c.wide_bracket;
    write_manifest(art.dir / (art.stem + "_manifest.json"), c, std::move(params), art.names);
    return art.names;
}

}  // namespace detail

/// Validates, runs the selected experiment, writes all artifacts, returns
/// their file names. Throws ConfigError for constraint violations, IoError
/// for filesystem problems.
inline std::vector<std::string> run_experiment(const ExperimentConfig& c) {
    const auto errs = validate_experiment_config(c);
    if (!errs.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + c.out_dir + ": " + ec.message());

    switch (c.kind) {
        case ExperimentKind::Battery: return detail::run_battery_experiment(c);
        case ExperimentKind::Otto: return detail::run_otto_experiment(c);
        case ExperimentKind::RatioPdfTable: return detail::run_ratio_pdf_experiment(c);
    }
    throw std::logic_error("run_experiment: unknown experiment kind");
}

}  // namespace qotto
