#ifndef HJORTIC_MONITOR_HPP
#define HJORTIC_MONITOR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjortic/argauss.hpp"
#include "hjortic/modelsel.hpp"
#include "hjortic/stats.hpp"

namespace hjortic {

constexpr double kBridgeBand95 = 1.358;

/// One-step prediction monitoring values m_t = Gamma_1(d_t^2), refitting on
/// the data before each monitored year.  Fit failures and masked responses
/// give masked cells.
inline Series prediction_monitor(const ArxSpec& spec, const Frame& frame, int start_year) {
    const Series& resp = frame.get(spec.response);
    const int n_out = frame.end_year() - start_year + 1;
    if (n_out < 1) throw std::invalid_argument("prediction_monitor: start_year past data");
    std::vector<double> vals(n_out, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> mask(n_out, 1);
    std::optional<std::vector<double>> warm;
    for (int t = start_year; t <= frame.end_year(); ++t) {
        if (!resp.observed_at(t)) continue;
        try {
            const Frame past = frame.truncated(t - 1);
            const ArxFit f = fit(spec, past, warm, false);
            warm = f.rho;
            const auto fc = forecast(f, past, 1);
            const double d = (resp.at(t) - fc[0].mean) / fc[0].sd;
            vals[t - start_year] = chisq1_cdf(d * d);
            mask[t - start_year] = 0;
        } catch (...) {
        }
    }
    return Series("m_t", start_year, std::move(vals), std::move(mask));
}

/// Mean absolute one-step errors: the refitted model against the trailing
/// w-year average of the response.
inline std::pair<double, double> mean_abs_error_compare(const ArxSpec& spec,
                                                        const Frame& frame,
                                                        int start_year, int naive_window) {
    if (naive_window < 1) throw std::invalid_argument("mean_abs_error_compare: window >= 1");
    const Series& resp = frame.get(spec.response);
    double model_sum = 0.0, naive_sum = 0.0;
    int n = 0;
    std::optional<std::vector<double>> warm;
    for (int t = start_year; t <= frame.end_year(); ++t) {
        if (!resp.observed_at(t)) continue;
        bool window_ok = true;
        double wsum = 0.0;
        for (int i = 1; i <= naive_window; ++i) {
            if (!resp.observed_at(t - i)) { window_ok = false; break; }
            wsum += resp.at(t - i);
        }
        if (!window_ok) continue;
        try {
            const Frame past = frame.truncated(t - 1);
            const ArxFit f = fit(spec, past, warm, false);
            warm = f.rho;
            const auto fc = forecast(f, past, 1);
            model_sum += std::abs(resp.at(t) - fc[0].mean);
            naive_sum += std::abs(resp.at(t) - wsum / naive_window);
            ++n;
        } catch (...) {
        }
    }
    if (n == 0) throw std::runtime_error("mean_abs_error_compare: no monitored years");
    return {model_sum / n, naive_sum / n};
}

struct BridgePath {
    std::vector<int> years;
    std::vector<double> values;  // B_{n,j}
    double a_hat = 0.0;
    double kappa_hat = 0.0;
    double band_95 = kBridgeBand95;
};

/// Likelihood monitoring bridge B_{n,j} = sqrt(n) {l_max,j / n - (j/n) a_hat}
/// / kappa_hat.  a_hat and kappa_hat come from the full-data fit; kappa_hat
/// is the root mean square of the centered per-year contributions.
inline BridgePath bridge(const ArxSpec& spec, const Frame& frame) {
    const ArxFit full = fit(spec, frame, std::nullopt, false);
    const int n = full.n_effective;
    const int p = spec.n_params();
    if (n <= p) throw std::invalid_argument("bridge: need more years than parameters");

    const auto contrib = loglik_contributions(full, frame);
    const double cbar = mean(contrib);
    double ss = 0.0;
    for (double c : contrib) ss += (c - cbar) * (c - cbar);
    const double kappa = std::sqrt(ss / contrib.size());
    if (!(kappa > 0.0)) throw std::runtime_error("bridge: degenerate kappa estimate");
    const double a_hat = full.loglik_max / n;

    BridgePath path;
    path.a_hat = a_hat;
    path.kappa_hat = kappa;
    // j counts effective observations; monitoring starts once p + 5 rows are in
    const int j_min = std::min(std::max(p + 5, p + spec.ar_order + 2), n);
    const int first_year = frame.end_year() - (n - j_min);
    std::optional<std::vector<double>> warm;
    for (int year = first_year; year <= frame.end_year(); ++year) {
        double lmax_j;
        int j;
        if (year == frame.end_year()) {
            lmax_j = full.loglik_max;
            j = n;
        } else {
            try {
                const ArxFit fj = fit(spec, frame.truncated(year), warm, false);
                warm = fj.rho;
                lmax_j = fj.loglik_max;
                j = fj.n_effective;
            } catch (const std::exception& e) {
                throw std::runtime_error("bridge: fit failed at year " + std::to_string(year) +
                                         ": " + e.what());
            }
        }
        path.years.push_back(year);
        path.values.push_back(std::sqrt(static_cast<double>(n)) *
                              (lmax_j / n - (static_cast<double>(j) / n) * a_hat) / kappa);
    }
    if (!path.values.empty()) path.values.back() = 0.0;  // B_{n,n} = 0 by construction
    return path;
}

struct BreakScan {
    bool exceeded = false;
    int year_at_max = 0;
    double max_abs = 0.0;
};

/// Locate the largest |B| and report whether it leaves the band.
inline BreakScan break_scan(const BridgePath& path, double level_band = kBridgeBand95) {
    if (path.values.empty()) throw std::invalid_argument("break_scan: empty path");
    BreakScan out;
    out.year_at_max = path.years.front();
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        const double a = std::abs(path.values[i]);
        if (a > out.max_abs) {
            out.max_abs = a;
            out.year_at_max = path.years[i];
        }
    }
    out.exceeded = out.max_abs > level_band;
    return out;
}

/// Gaussian-kernel-weighted local standard deviation about the local mean.
/// Bandwidth is the kernel sd in years; edges renormalize one-sided weights.
inline Series rolling_sd(const Series& s, double bandwidth) {
    if (bandwidth < 3.0) throw std::invalid_argument("rolling_sd: bandwidth must be >= 3");
    if (s.n_observed() < 3) throw std::invalid_argument("rolling_sd: series too short");
    const int n = s.size();
    std::vector<double> vals(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> mask(n, 1);
    for (int t = 0; t < n; ++t) {
        double wsum = 0.0, wx = 0.0;
        for (int u = 0; u < n; ++u) {
            if (s.missing[u]) continue;
            const double d = (u - t) / bandwidth;
            const double w = std::exp(-0.5 * d * d);
            wsum += w;
            wx += w * s.values[u];
        }
        if (wsum <= 0.0) continue;
        const double mu = wx / wsum;
        double wss = 0.0, w2 = 0.0;
        for (int u = 0; u < n; ++u) {
            if (s.missing[u]) continue;
            const double d = (u - t) / bandwidth;
            const double w = std::exp(-0.5 * d * d);
            wss += w * (s.values[u] - mu) * (s.values[u] - mu);
            w2 += w * w;
        }
        const double denom = wsum - w2 / wsum;  // effective dof correction
        if (denom <= 0.0) continue;
        vals[t] = std::sqrt(wss / denom);
        mask[t] = 0;
    }
    return Series(s.name + "_rollsd", s.start_year, std::move(vals), std::move(mask));
}

struct AdfResult {
    double statistic = 0.0;
    int lag_order = 0;
    std::string p_interval;
    bool reject_unit_root_at_1pct = false;
};

namespace detail {

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::MatrixXd vcov;
    double rss = 0.0;
    int n = 0;
};

inline OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    OlsFit f;
    f.n = static_cast<int>(y.size());
    const Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    f.beta = ldlt.solve(X.transpose() * y);
    f.rss = (y - X * f.beta).squaredNorm();
    const double s2 = f.rss / (f.n - X.cols());
    f.vcov = s2 * xtx.inverse();
    return f;
}

}  // namespace detail

/// Augmented Dickey-Fuller test with intercept.  The lag order is chosen by
/// AIC up to max_lag on a common estimation sample; the statistic is the
/// t-ratio on the lagged level.  Asymptotic critical values -3.43/-2.86/-2.57.
inline AdfResult adf_test(const Series& s, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("adf_test: max_lag must be >= 0");
    // longest contiguous unmasked block
    int best_lo = -1, best_len = 0, cur_lo = -1, cur_len = 0;
    for (int i = 0; i <= s.size(); ++i) {
        if (i < s.size() && !s.missing[i]) {
            if (cur_len == 0) cur_lo = i;
            ++cur_len;
        } else {
            if (cur_len > best_len) { best_len = cur_len; best_lo = cur_lo; }
            cur_len = 0;
        }
    }
    if (best_len < 20) throw std::invalid_argument("adf_test: need >= 20 consecutive values");
    const std::vector<double> z(s.values.begin() + best_lo,
                                s.values.begin() + best_lo + best_len);
    const int n = best_len;
    max_lag = std::min(max_lag, n / 3);

    std::vector<double> dz(n - 1);
    for (int i = 0; i + 1 < n; ++i) dz[i] = z[i + 1] - z[i];

    // common sample: rows t = max_lag+1 .. n-1 (indexing dz)
    const int t0 = max_lag;  // first usable index into dz
    const int m = static_cast<int>(dz.size()) - t0;
    if (m < max_lag + 5) throw std::invalid_argument("adf_test: series too short for max_lag");

    double best_aic = -std::numeric_limits<double>::infinity();
    AdfResult result;
    for (int q = 0; q <= max_lag; ++q) {
        const int ncol = 2 + q;  // intercept, lagged level, q lagged differences
        Eigen::MatrixXd X(m, ncol);
        Eigen::VectorXd y(m);
        for (int r = 0; r < m; ++r) {
            const int t = t0 + r;  // dz index
            y(r) = dz[t];
            X(r, 0) = 1.0;
            X(r, 1) = z[t];  // level preceding dz[t] = z[t+1]-z[t]
            for (int i = 1; i <= q; ++i) X(r, 2 + i - 1) = dz[t - i];
        }
        const auto f = detail::ols(X, y);
        const double s2 = f.rss / m;
        const double ll = -0.5 * m * (std::log(2.0 * M_PI) + std::log(s2) + 1.0);
        const double a = 2.0 * ll - 2.0 * (ncol + 1);
        if (a > best_aic) {
            best_aic = a;
            result.lag_order = q;
            result.statistic = f.beta(1) / std::sqrt(f.vcov(1, 1));
        }
    }
    const double t = result.statistic;
    if (t < -3.43) result.p_interval = "<0.01";
    else if (t < -2.86) result.p_interval = "0.01-0.05";
    else if (t < -2.57) result.p_interval = "0.05-0.10";
    else result.p_interval = ">0.10";
    result.reject_unit_root_at_1pct = t < -3.43;
    return result;
}

}  // namespace hjortic

#endif  // HJORTIC_MONITOR_HPP
