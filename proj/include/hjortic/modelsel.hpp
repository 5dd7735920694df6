#ifndef HJORTIC_MODELSEL_HPP
#define HJORTIC_MODELSEL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hjortic/argauss.hpp"
#include "hjortic/stats.hpp"

namespace hjortic {

inline double aic(const ArxFit& f) {
    return 2.0 * f.loglik_max - 2.0 * f.spec.n_params();
}

inline double bic(const ArxFit& f, int n) {
    if (n <= 0) throw std::invalid_argument("bic: n must be > 0");
    return 2.0 * f.loglik_max - f.spec.n_params() * std::log(static_cast<double>(n));
}

inline double bic(const ArxFit& f) { return bic(f, f.n_effective); }

/// AIC differences against a baseline, refitting on data up to each year.
/// result[i][j] = AIC(candidate j) - AIC(baseline) at year start_year + i.
/// Failed single-year fits are NaN cells, not errors.
struct SequentialScores {
    int start_year = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> diffs;  // [year][candidate]
};

namespace detail {

/// Mask the first `d` response values so a lower-order model conditions on
/// the same rows as the highest-order model in a score race.
inline Frame mask_leading_response(const Frame& frame, const std::string& response, int d) {
    if (d <= 0) return frame;
    Frame out;
    for (const auto& nm : frame.names()) {
        Series s = frame.get(nm);
        if (nm == response) {
            for (int i = 0; i < d && i < s.size(); ++i) {
                s.values[i] = std::numeric_limits<double>::quiet_NaN();
                s.missing[i] = 1;
            }
        }
        out.add(std::move(s));
    }
    return out;
}

}  // namespace detail

inline SequentialScores sequential_scores(const std::vector<ArxSpec>& candidates,
                                          const Frame& frame, const ArxSpec& baseline,
                                          int start_year) {
    SequentialScores out;
    out.start_year = start_year;
    // common conditioning sample: every model, whatever its AR order, starts
    // its likelihood at the row the largest order would; otherwise the AIC
    // differences mix likelihoods over different numbers of observations
    int max_order = baseline.ar_order;
    for (const auto& c : candidates) max_order = std::max(max_order, c.ar_order);
    for (const auto& c : candidates) {
        std::string lbl = c.response + "~ar" + std::to_string(c.ar_order);
        if (c.include_linear_trend) lbl += "+trend";
        for (const auto& r : c.regressors) lbl += "+" + r.name;
        out.labels.push_back(lbl);
    }
    std::vector<std::optional<std::vector<double>>> warm(candidates.size());
    std::optional<std::vector<double>> warm_base;
    for (int y = start_year; y <= frame.end_year(); ++y) {
        const Frame sub = frame.truncated(y);
        double base_aic = std::numeric_limits<double>::quiet_NaN();
        try {
            const Frame aligned = detail::mask_leading_response(
                sub, baseline.response, max_order - baseline.ar_order);
            const ArxFit bf = fit(baseline, aligned, warm_base, false);
            warm_base = bf.rho;
            base_aic = aic(bf);
        } catch (...) {
        }
        std::vector<double> row(candidates.size(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            if (!std::isfinite(base_aic)) continue;
            try {
                const Frame aligned = detail::mask_leading_response(
                    sub, candidates[j].response, max_order - candidates[j].ar_order);
                const ArxFit cf = fit(candidates[j], aligned, warm[j], false);
                warm[j] = cf.rho;
                row[j] = aic(cf) - base_aic;
            } catch (...) {
            }
        }
        out.diffs.push_back(std::move(row));
    }
    return out;
}

enum class FocusKind { prediction, slope_contrast, threshold_probability };

struct FocusSpec {
    FocusKind kind = FocusKind::prediction;
    int horizon = 1;                 // prediction
    int year_a = 0, year_b = 0;      // slope_contrast
    bool scale_by_sigma = true;      // slope_contrast
    double threshold = 0.0;          // threshold_probability
    std::vector<int> horizons;       // threshold_probability, years past frame end

    void validate() const {
        switch (kind) {
            case FocusKind::prediction:
                if (horizon < 1) throw std::invalid_argument("focus: horizon must be >= 1");
                break;
            case FocusKind::slope_contrast:
                if (year_a == year_b)
                    throw std::invalid_argument("focus: slope years must differ");
                break;
            case FocusKind::threshold_probability:
                if (horizons.empty())
                    throw std::invalid_argument("focus: empty horizon set");
                if (!std::isfinite(threshold))
                    throw std::invalid_argument("focus: non-finite threshold");
                break;
        }
    }

    std::string label() const {
        switch (kind) {
            case FocusKind::prediction: return "pred:" + std::to_string(horizon);
            case FocusKind::slope_contrast:
                return "slope:" + std::to_string(year_a) + "," + std::to_string(year_b);
            default: {
                std::string s = "thresh:" + detail::format_sig12(threshold) + ",";
                for (std::size_t i = 0; i < horizons.size(); ++i)
                    s += (i ? "+" : "") + std::to_string(horizons[i]);
                return s;
            }
        }
    }
};

namespace detail {

/// P(X_i < limit_i for all i) for a multivariate normal.  Exact quadrature
/// up to dimension 3 (conditioning plus Gauss-Legendre), Monte Carlo above.
inline double mvn_cdf_upper(const Eigen::VectorXd& limits, const Eigen::VectorXd& mu,
                            const Eigen::MatrixXd& cov, std::uint64_t seed = 20121231) {
    const int d = static_cast<int>(limits.size());
    if (d == 1) {
        const double sd = std::sqrt(cov(0, 0));
        if (!(sd > 0.0)) return limits(0) >= mu(0) ? 1.0 : 0.0;
        return norm_cdf((limits(0) - mu(0)) / sd);
    }
    if (d <= 3) {
        // integrate out the first coordinate; the remainder is conditional normal
        const double s1 = std::sqrt(cov(0, 0));
        const double lo = mu(0) - 8.5 * s1;
        const double hi = std::min(limits(0), mu(0) + 8.5 * s1);
        if (hi <= lo) return 0.0;
        // 96-point composite Gauss-Legendre (8 panels x 12 nodes)
        static const double gl_x[6] = {0.1252334085, 0.3678314990, 0.5873179543,
                                       0.7699026742, 0.9041172564, 0.9815606342};
        static const double gl_w[6] = {0.2491470458, 0.2334925365, 0.2031674267,
                                       0.1600783285, 0.1069393260, 0.0471753364};
        const Eigen::VectorXd c1 = cov.block(1, 0, d - 1, 1);
        const Eigen::MatrixXd schur =
            cov.block(1, 1, d - 1, d - 1) - c1 * c1.transpose() / cov(0, 0);
        double total = 0.0;
        const int panels = 8;
        for (int p = 0; p < panels; ++p) {
            const double a = lo + (hi - lo) * p / panels;
            const double b = lo + (hi - lo) * (p + 1) / panels;
            const double hw = 0.5 * (b - a), mid = 0.5 * (a + b);
            for (int i = 0; i < 6; ++i) {
                for (int sgn = -1; sgn <= 1; sgn += 2) {
                    const double x = mid + sgn * hw * gl_x[i];
                    const double zz = (x - mu(0)) / s1;
                    const double dens =
                        std::exp(-0.5 * zz * zz) / (s1 * std::sqrt(2.0 * M_PI));
                    const Eigen::VectorXd cmu =
                        mu.tail(d - 1) + c1 * ((x - mu(0)) / cov(0, 0));
                    total += hw * gl_w[i] *
                             dens * mvn_cdf_upper(limits.tail(d - 1), cmu, schur, seed);
                }
            }
        }
        return total;
    }
    // seeded Monte Carlo with a Cholesky draw
    Eigen::LLT<Eigen::MatrixXd> llt(cov +
                                    1e-12 * Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd L = llt.matrixL();
    Rng rng(seed);
    const int n = 100000;
    int hits = 0;
    Eigen::VectorXd z(d);
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < d; ++i) z(i) = rng.normal();
        const Eigen::VectorXd x = mu + L * z;
        bool ok = true;
        for (int i = 0; i < d && ok; ++i) ok = x(i) < limits(i);
        hits += ok;
    }
    return static_cast<double>(hits) / n;
}

}  // namespace detail

/// Scalar focus functional of a fitted model.
inline double focus_estimate(const ArxFit& f, const Frame& frame, const FocusSpec& focus) {
    focus.validate();
    switch (focus.kind) {
        case FocusKind::prediction:
            return forecast(f, frame, focus.horizon).back().mean;
        case FocusKind::slope_contrast: {
            const double xa = detail::mean_level_at(f, frame, focus.year_a, nullptr);
            const double xb = detail::mean_level_at(f, frame, focus.year_b, nullptr);
            const double num = xa - xb;
            return focus.scale_by_sigma ? num / f.sigma : num;
        }
        case FocusKind::threshold_probability: {
            if (!is_stationary(f.rho))
                throw std::invalid_argument("focus: non-stationary fit for predictive focus");
            if (!std::isfinite(focus.threshold))
                throw std::invalid_argument("focus: non-finite threshold");
            const int hmax = *std::max_element(focus.horizons.begin(), focus.horizons.end());
            const auto steps = forecast(f, frame, hmax);
            const Eigen::MatrixXd full_cov = forecast_covariance(f, hmax);
            const int d = static_cast<int>(focus.horizons.size());
            Eigen::VectorXd mu(d), lim(d);
            Eigen::MatrixXd cov(d, d);
            for (int i = 0; i < d; ++i) {
                mu(i) = steps[focus.horizons[i] - 1].mean;
                lim(i) = focus.threshold;
                for (int j = 0; j < d; ++j)
                    cov(i, j) = full_cov(focus.horizons[i] - 1, focus.horizons[j] - 1);
            }
            return detail::mvn_cdf_upper(lim, mu, cov);
        }
    }
    throw std::logic_error("focus_estimate: unreachable");
}

struct FicEntry {
    ArxSpec spec;
    std::string label;
    double focus_estimate = 0.0;
    double variance = 0.0;
    double sq_bias = 0.0;
    double fic_score = 0.0;
};

struct FicReport {
    std::string focus_label;
    std::string wide_label;
    std::vector<FicEntry> entries;  // sorted ascending by fic_score
};

namespace detail {

inline bool nested_in(const ArxSpec& cand, const ArxSpec& wide) {
    if (cand.ar_order > wide.ar_order) return false;
    if (cand.include_intercept && !wide.include_intercept) return false;
    if (cand.include_linear_trend && !wide.include_linear_trend) return false;
    for (const auto& r : cand.regressors) {
        bool found = false;
        for (const auto& w : wide.regressors)
            found = found || (w.name == r.name && w.lag == r.lag);
        if (!found) return false;
    }
    return true;
}

inline std::string spec_label(const ArxSpec& s) {
    std::string lbl = "ar" + std::to_string(s.ar_order);
    if (s.include_linear_trend) lbl += "+trend";
    for (const auto& r : s.regressors)
        lbl += "+" + r.name + (r.lag > 0 ? ":" + std::to_string(r.lag) : "");
    return lbl;
}

/// Delta-method variance of the focus under a fit: gradient by central
/// differences over (beta, rho, sigma), then g' vcov g.
inline double focus_delta_variance(const ArxFit& f, const Frame& frame,
                                   const FocusSpec& focus) {
    const int np = f.spec.n_params();
    if (f.vcov.rows() != np)
        throw std::invalid_argument("focus variance: fit carries no vcov");
    Eigen::VectorXd grad(np);
    const int nb = f.spec.n_beta();
    const int k = f.spec.ar_order;
    auto eval = [&](int idx, double delta) {
        ArxFit g = f;
        if (idx < nb) g.beta[idx] += delta;
        else if (idx < nb + k) g.rho[idx - nb] += delta;
        else g.sigma += delta;
        return focus_estimate(g, frame, focus);
    };
    for (int i = 0; i < np; ++i) {
        const double base = i < nb ? f.beta[i] : (i < nb + k ? f.rho[i - nb] : f.sigma);
        const double h = 1e-5 * std::max(1.0, std::abs(base));
        grad(i) = (eval(i, h) - eval(i, -h)) / (2.0 * h);
    }
    return grad.dot(f.vcov * grad);
}

}  // namespace detail

/// Focused information criterion: estimated root-mse of the focus under each
/// candidate, with the wide model as the bias reference.
inline FicReport fic(const std::vector<ArxSpec>& candidates, const ArxSpec& wide,
                     const Frame& frame, const FocusSpec& focus) {
    focus.validate();
    const ArxFit wide_fit = fit(wide, frame);
    const double mu_wide = focus_estimate(wide_fit, frame, focus);
    const double var_wide = detail::focus_delta_variance(wide_fit, frame, focus);

    FicReport report;
    report.focus_label = focus.label();
    report.wide_label = detail::spec_label(wide);
    for (const auto& cand : candidates) {
        if (!detail::nested_in(cand, wide))
            throw std::invalid_argument("fic: candidate " + detail::spec_label(cand) +
                                        " is not nested in the wide model");
        FicEntry e;
        e.spec = cand;
        e.label = detail::spec_label(cand);
        const bool is_wide = detail::spec_label(cand) == report.wide_label;
        const ArxFit cf = is_wide ? wide_fit : fit(cand, frame);
        e.focus_estimate = focus_estimate(cf, frame, focus);
        e.variance = detail::focus_delta_variance(cf, frame, focus);
        if (is_wide) {
            e.sq_bias = 0.0;
        } else {
            const double bias = mu_wide - e.focus_estimate;
            // truncated-at-zero unbiased estimate of the squared bias; the
            // variance of the difference is approximated by var_wide - var_j
            // (asymptotic nesting identity)
            const double diff_var = std::max(0.0, var_wide - e.variance);
            e.sq_bias = std::max(0.0, bias * bias - diff_var);
        }
        e.fic_score = std::sqrt(e.variance + e.sq_bias);
        report.entries.push_back(std::move(e));
    }
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const FicEntry& a, const FicEntry& b) {
                         return a.fic_score < b.fic_score;
                     });
    return report;
}

}  // namespace hjortic

#endif  // HJORTIC_MODELSEL_HPP
