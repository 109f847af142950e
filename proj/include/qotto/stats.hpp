#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qotto {

// ---------------------------------------------------------------- moments --

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Unbiased (n-1) standard deviation.
inline double stddev(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("stddev: need at least two samples");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Linear-interpolation quantile of an unsorted sample, p in [0, 1].
inline double quantile(std::vector<double> v, double p) {
    if (v.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

inline double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson_correlation: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("pearson_correlation: need >= 2 samples");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::domain_error("pearson_correlation: zero-variance input");
    return sxy / std::sqrt(sxx * syy);
}

// ------------------------------------------------------------- histograms --

/// Bins are left-closed right-open; the last bin also includes its right
/// edge. Out-of-range samples land in underflow/overflow. density() is
/// normalized against all offered samples (including out-of-range ones), so
/// it compares directly against a pdf of the full distribution.
struct Histogram {
    std::vector<double> edges;  // ascending, n_bins + 1 entries
    std::vector<long long> counts;
    long long underflow = 0;
    long long overflow = 0;
    long long total = 0;  // everything offered, including out-of-range

    std::size_t n_bins() const { return counts.size(); }
    double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
    double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }

    double density(std::size_t i) const {
        if (total == 0) return 0.0;
        return static_cast<double>(counts[i]) / (static_cast<double>(total) * width(i));
    }
};

struct BinSpec {
    enum class Kind { Uniform, LogUniform, Explicit, FreedmanDiaconis };

    Kind kind = Kind::FreedmanDiaconis;
    std::size_t n = 0;
    double lo = 0.0, hi = 0.0;
    std::vector<double> edges;

    static BinSpec uniform(std::size_t n_bins, double lo, double hi) {
        if (n_bins == 0 || !(lo < hi))
            throw std::invalid_argument("BinSpec::uniform: need n_bins >= 1 and lo < hi");
        return BinSpec{Kind::Uniform, n_bins, lo, hi, {}};
    }

    static BinSpec log_uniform(std::size_t n_bins, double lo, double hi) {
        if (n_bins == 0 || !(lo > 0.0) || !(lo < hi))
            throw std::invalid_argument("BinSpec::log_uniform: need n_bins >= 1 and 0 < lo < hi");
        return BinSpec{Kind::LogUniform, n_bins, lo, hi, {}};
    }

    static BinSpec explicit_edges(std::vector<double> e) {
        if (e.size() < 2 || !std::is_sorted(e.begin(), e.end()) ||
            std::adjacent_find(e.begin(), e.end()) != e.end())
            throw std::invalid_argument("BinSpec::explicit_edges: need >= 2 strictly ascending edges");
        return BinSpec{Kind::Explicit, e.size() - 1, e.front(), e.back(), std::move(e)};
    }

    static BinSpec freedman_diaconis() { return BinSpec{}; }
};

namespace detail {

inline std::vector<double> resolve_edges(const std::vector<double>& samples, const BinSpec& spec) {
    switch (spec.kind) {
        case BinSpec::Kind::Explicit:
            return spec.edges;
        case BinSpec::Kind::Uniform: {
            std::vector<double> e(spec.n + 1);
            for (std::size_t i = 0; i <= spec.n; ++i)
                e[i] = spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) /
                                     static_cast<double>(spec.n);
            e.back() = spec.hi;
            return e;
        }
        case BinSpec::Kind::LogUniform: {
            std::vector<double> e(spec.n + 1);
            const double llo = std::log(spec.lo), lhi = std::log(spec.hi);
            for (std::size_t i = 0; i <= spec.n; ++i)
                e[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                          static_cast<double>(spec.n));
            e.front() = spec.lo;
            e.back() = spec.hi;
            return e;
        }
        case BinSpec::Kind::FreedmanDiaconis: {
            if (samples.size() < 2)
                throw std::invalid_argument("make_histogram: Freedman-Diaconis needs >= 2 samples");
            std::vector<double> s(samples);
            std::sort(s.begin(), s.end());
            const double lo = s.front(), hi = s.back();
            if (!(lo < hi))
                throw std::invalid_argument("make_histogram: degenerate sample range");
            const double iqr = quantile(s, 0.75) - quantile(s, 0.25);
            std::size_t n_bins;
            if (iqr > 0.0) {
                const double h =
                    2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
                n_bins = static_cast<std::size_t>(std::ceil((hi - lo) / h));
            } else {
                n_bins = static_cast<std::size_t>(
                    std::ceil(std::log2(static_cast<double>(s.size())))) + 1;
            }
            n_bins = std::clamp<std::size_t>(n_bins, 1, 1000000);
            std::vector<double> e(n_bins + 1);
            for (std::size_t i = 0; i <= n_bins; ++i)
                e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
            e.back() = hi;
            return e;
        }
    }
    throw std::logic_error("make_histogram: unknown bin spec");
}

}  // namespace detail

inline Histogram make_histogram(const std::vector<double>& samples, const BinSpec& spec) {
    Histogram h;
    h.edges = detail::resolve_edges(samples, spec);
    h.counts.assign(h.edges.size() - 1, 0);
    for (double x : samples) {
        ++h.total;
        if (!(x >= h.edges.front())) {
            ++h.underflow;  // also catches NaN
            continue;
        }
        if (x > h.edges.back()) {
            ++h.overflow;
            continue;
        }
        if (x == h.edges.back()) {
            ++h.counts.back();
            continue;
        }
        const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
        ++h.counts[static_cast<std::size_t>(it - h.edges.begin()) - 1];
    }
    return h;
}

// ------------------------------------------------------------------- fits --

struct GaussianFit {
    double mean;
    double stddev;  // unbiased
    std::size_t n;
    bool degenerate;  // zero spread
};

inline GaussianFit fit_gaussian(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("fit_gaussian: need at least two samples");
    const double m = mean(samples);
    const double sd = stddev(samples);
    return GaussianFit{m, sd, samples.size(), sd == 0.0};
}

inline double normal_pdf(double x, double mu, double sigma) {
    constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934381868;
    const double z = (x - mu) / sigma;
    return inv_sqrt_2pi / sigma * std::exp(-0.5 * z * z);
}

inline double normal_cdf(double x, double mu = 0.0, double sigma = 1.0) {
    constexpr double inv_sqrt_2 = 0.707106781186547524400844362104849039;
    return 0.5 * std::erfc(-(x - mu) / sigma * inv_sqrt_2);
}

struct TailFit {
    double exponent;  // slope of log density vs log |eta|
    double std_error;
    std::size_t n_bins;
};

/// Power-law exponent of a histogram tail: least-squares slope of
/// log(density) against log(geometric bin center), over nonempty bins whose
/// geometric center lies in [lo, hi]. Needs positive left edges.
inline TailFit tail_exponent_fit(const Histogram& h, double lo, double hi) {
    if (!(lo > 0.0) || !(lo < hi))
        throw std::invalid_argument("tail_exponent_fit: need 0 < lo < hi");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < h.n_bins(); ++i) {
        if (h.counts[i] == 0 || !(h.edges[i] > 0.0)) continue;
        const double gc = std::sqrt(h.edges[i] * h.edges[i + 1]);
        if (gc < lo || gc > hi) continue;
        xs.push_back(std::log(gc));
        ys.push_back(std::log(h.density(i)));
    }
    const std::size_t m = xs.size();
    if (m < 5)
        throw std::invalid_argument("tail_exponent_fit: only " + std::to_string(m) +
                                    " usable bins in range, need >= 5");
    const double mx = mean(xs), my = mean(ys);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::domain_error("tail_exponent_fit: degenerate abscissae");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }
    const double se =
        m > 2 ? std::sqrt(ss_res / static_cast<double>(m - 2) / sxx) : 0.0;
    return TailFit{slope, se, m};
}

///// Default fit window for the |eta| tail: well past the bulk, short of the
/// extreme order statistics.
inline std::pair<double, double> tail_fit_range(const std::vector<double>& abs_eta) {
    if (abs_eta.empty()) throw std::invalid_argument("tail_fit_range: empty sample");
    const double lo = 5.0 * quantile(abs_eta, 0.5);
    const double hi = quantile(abs_eta, 0.99);
    return {lo, hi};
}

// -------------------------------------------------------------- ratio pdf --

struct RatioPdfParams {
    double mu_w, sigma_w;
    double mu_q, sigma_q;

    void check() const {
        if (!(sigma_w > 0.0) || !(sigma_q > 0.0))
            throw std::invalid_argument("RatioPdfParams: standard deviations must be positive");
    }
};

/// Density of eta = W / Q for independent W ~ N(mu_w, sigma_w^2),
/// Q ~ N(mu_q, sigma_q^2):
///   p(eta) = b d / (sqrt(2 pi) s_w s_q a^3) * erf(b / (sqrt(2) a))
///          + exp(-c / 2) / (pi s_w s_q a^2)
/// with a^2 = eta^2/s_w^2 + 1/s_q^2, b = mu_w eta/s_w^2 + mu_q/s_q^2,
/// c = mu_w^2/s_w^2 + mu_q^2/s_q^2, d = exp((b^2 - c a^2) / (2 a^2)).
/// b^2 <= c a^2 by Cauchy-Schwarz, so d never overflows.
inline double ratio_pdf(double eta, const RatioPdfParams& p) {
    p.check();
    if (!std::isfinite(eta))
        throw std::invalid_argument("ratio_pdf: query point must be finite");
    constexpr double pi = 3.14159265358979323846264338327950288;
    const double sw2 = p.sigma_w * p.sigma_w, sq2 = p.sigma_q * p.sigma_q;
    const double a2 = eta * eta / sw2 + 1.0 / sq2;
    const double a = std::sqrt(a2);
    const double b = p.mu_w * eta / sw2 + p.mu_q / sq2;
    const double c = p.mu_w * p.mu_w / sw2 + p.mu_q * p.mu_q / sq2;
    const double d = std::exp((b * b - c * a2) / (2.0 * a2));
    const double term1 = b * d / (std::sqrt(2.0 * pi) * p.sigma_w * p.sigma_q * a2 * a) *
                         std::erf(b / (std::sqrt(2.0) * a));
    const double term2 = std::exp(-0.5 * c) / (pi * p.sigma_w * p.sigma_q * a2);
    return term1 + term2;
}

/// Variant with the bracket 1 + erf(b / (sqrt(2) a)) in the first term,
/// kept for side-by-side comparison; it does not normalize to 1 for
/// off-center means.
inline double ratio_pdf_wide_bracket(double eta, const RatioPdfParams& p) {
    p.check();
    if (!std::isfinite(eta))
        throw std::invalid_argument("ratio_pdf_wide_bracket: query point must be finite");
    constexpr double pi = 3.14159265358979323846264338327950288;
    const double sw2 = p.sigma_w * p.sigma_w, sq2 = p.sigma_q * p.sigma_q;
    const double a2 = eta * eta / sw2 + 1.0 / sq2;
    const double a = std::sqrt(a2);
    const double b = p.mu_w * eta / sw2 + p.mu_q / sq2;
    const double c = p.mu_w * p.mu_w / sw2 + p.mu_q * p.mu_q / sq2;
    const double d = std::exp((b * b - c * a2) / (2.0 * a2));
    const double term1 = b * d / (std::sqrt(2.0 * pi) * p.sigma_w * p.sigma_q * a2 * a) *
                         (1.0 + std::erf(b / (std::sqrt(2.0) * a)));
    const double term2 = std::exp(-0.5 * c) / (pi * p.sigma_w * p.sigma_q * a2);
    return term1 + term2;
}

// ------------------------------------------------------------- quadrature --

namespace detail {

inline double simpson_estimate(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_estimate(a, m, fa, flm, fm);
    const double right = simpson_estimate(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
    if (!(a <= b)) throw std::invalid_argument("adaptive_simpson: need a <= b");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson_estimate(a, b, fa, fm, fb);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// CDF of the ratio density, evaluated by integrating over theta = atan(eta);
/// the substitution makes the integrand bounded on (-pi/2, pi/2). Queries in
/// ascending order reuse the previous endpoint, so a sorted KS sweep costs
/// one pass over the axis.
class RatioCdf {
public:
    explicit RatioCdf(const RatioPdfParams& p, double tol = 1e-10) : p_(p), tol_(tol) {
        p_.check();
        reset();
    }

    double operator()(double eta) const {
        if (std::isnan(eta)) throw std::invalid_argument("RatioCdf: NaN query");
        const double theta = std::clamp(std::atan(eta), theta_min_, theta_max_);
        if (theta < last_theta_) reset();
        if (theta > last_theta_) {
            last_cdf_ += adaptive_simpson(
                [this](double t) {
                    const double u = std::tan(t);
                    return ratio_pdf(u, p_) * (1.0 + u * u);
                },
                last_theta_, theta, tol_);
            last_theta_ = theta;
        }
        return std::clamp(last_cdf_, 0.0, 1.0);
    }

private:
    void reset() const {
        last_theta_ = theta_min_;
        last_cdf_ = 0.0;
    }

    static constexpr double theta_min_ = -1.570796325794897;  // -pi/2 + 1e-9
    static constexpr double theta_max_ = 1.570796325794897;

    RatioPdfParams p_;
    double tol_;
    mutable double last_theta_ = 0.0;
    mutable double last_cdf_ = 0.0;
};

// --------------------------------------------------------------------- KS --

/// Kolmogorov-Smirnov sup distance between the empirical CDF of the sample
/// and a model CDF. The model is queried at sorted points.
template <typename Cdf>
double ks_distance(std::vector<double> samples, const Cdf& model_cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = model_cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

}  // namespace qotto
