#ifndef HJORTIC_ARGAUSS_HPP
#define HJORTIC_ARGAUSS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hjortic/series.hpp"
#include "hjortic/stats.hpp"

namespace hjortic {

constexpr int kMaxArOrder = 6;
constexpr double kStationarityMargin = 1e-10;
constexpr int kTrendOrigin = 1980;  // trend covariate is calendar year minus 1980

struct Regressor {
    std::string name;
    int lag = 0;
};

/// Model layout: response regressed on intercept, linear trend, and lagged
/// covariates, with AR(k) Gaussian noise fitted by conditional ML.
struct ArxSpec {
    std::string response;
    std::vector<Regressor> regressors;
    bool include_intercept = true;
    bool include_linear_trend = false;
    int ar_order = 0;

    int n_beta() const {
        return (include_intercept ? 1 : 0) + (include_linear_trend ? 1 : 0) +
               static_cast<int>(regressors.size());
    }
    /// All estimated parameters: betas, rhos, sigma.
    int n_params() const { return n_beta() + ar_order + 1; }

    std::vector<std::string> beta_names() const {
        std::vector<std::string> nm;
        if (include_intercept) nm.push_back("intercept");
        if (include_linear_trend) nm.push_back("trend");
        for (const auto& r : regressors)
            nm.push_back(r.name + (r.lag > 0 ? "_lag" + std::to_string(r.lag) : ""));
        return nm;
    }
};

/// True iff all roots of 1 - rho_1 z - ... - rho_k z^k lie strictly outside
/// the unit circle (modulus > 1 + margin).
inline bool is_stationary(const std::vector<double>& rho,
                          double margin = kStationarityMargin) {
    const int k = static_cast<int>(rho.size());
    if (k == 0) return true;
    // companion matrix of z^k - rho_1 z^{k-1} - ... - rho_k; its eigenvalues
    // are the reciprocals of the characteristic roots
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) comp(0, j) = rho[j];
    for (int i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < k; ++i)
        if (std::abs(es.eigenvalues()[i]) * (1.0 + margin) >= 1.0) return false;
    return true;
}

struct ArxFit {
    ArxSpec spec;
    std::vector<double> beta;
    std::vector<double> rho;
    double sigma = 0.0;
    double loglik_max = 0.0;
    Eigen::MatrixXd vcov;  // order: beta..., rho..., sigma
    int n_effective = 0;
};

namespace detail {

/// Response, regressor matrix and validity flags on the frame's year grid.
struct DesignData {
    int start_year = 0;
    std::vector<double> z;
    std::vector<std::vector<double>> x;  // x[t][j]
    std::vector<char> valid;             // response and all regressors observed
    int n_x = 0;
};

inline DesignData build_design(const ArxSpec& spec, const Frame& frame) {
    if (spec.ar_order < 0 || spec.ar_order > kMaxArOrder)
        throw std::invalid_argument("ArxSpec: ar_order must be in 0.." +
                                    std::to_string(kMaxArOrder));
    const Series& resp = frame.get(spec.response);
    DesignData d;
    d.start_year = frame.start_year();
    const int n = frame.length();
    d.n_x = spec.n_beta();
    d.z.assign(n, 0.0);
    d.x.assign(n, std::vector<double>(d.n_x, 0.0));
    d.valid.assign(n, 0);
    for (int t = 0; t < n; ++t) {
        const int year = d.start_year + t;
        bool ok = resp.observed_at(year);
        if (ok) d.z[t] = resp.at(year);
        int j = 0;
        if (spec.include_intercept) d.x[t][j++] = 1.0;
        if (spec.include_linear_trend) d.x[t][j++] = static_cast<double>(year - kTrendOrigin);
        for (const auto& r : spec.regressors) {
            const Series& cs = frame.get(r.name);
            const int sy = year - r.lag;
            if (cs.observed_at(sy)) d.x[t][j] = cs.at(sy);
            else ok = false;
            ++j;
        }
        d.valid[t] = ok ? 1 : 0;
    }
    return d;
}

/// Rows usable by the conditional likelihood: the row and its k predecessors
/// must all be complete.
inline std::vector<int> usable_rows(const DesignData& d, int k) {
    std::vector<int> rows;
    for (int t = k; t < static_cast<int>(d.z.size()); ++t) {
        bool ok = true;
        for (int i = 0; i <= k; ++i) ok = ok && d.valid[t - i];
        if (ok) rows.push_back(t);
    }
    return rows;
}

struct GlsResult {
    Eigen::VectorXd beta;
    double rss = 0.0;
    bool singular = false;
};

/// For fixed rho, quasi-difference the data and solve the OLS normal
/// equations; this concentrates beta (and sigma) out of the likelihood.
inline GlsResult gls_at_rho(const DesignData& d, const std::vector<int>& rows,
                            const std::vector<double>& rho) {
    const int k = static_cast<int>(rho.size());
    const int p = d.n_x;
    const int m = static_cast<int>(rows.size());
    GlsResult res;
    if (p == 0) {
        res.beta = Eigen::VectorXd::Zero(0);
        double rss = 0.0;
        for (int t : rows) {
            double zt = d.z[t];
            for (int i = 1; i <= k; ++i) zt -= rho[i - 1] * d.z[t - i];
            rss += zt * zt;
        }
        res.rss = rss;
        return res;
    }
    Eigen::MatrixXd X(m, p);
    Eigen::VectorXd y(m);
    for (int r = 0; r < m; ++r) {
        const int t = rows[r];
        double zt = d.z[t];
        for (int i = 1; i <= k; ++i) zt -= rho[i - 1] * d.z[t - i];
        y(r) = zt;
        for (int j = 0; j < p; ++j) {
            double xt = d.x[t][j];
            for (int i = 1; i <= k; ++i) xt -= rho[i - 1] * d.x[t - i][j];
            X(r, j) = xt;
        }
    }
    Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    if (ldlt.info() != Eigen::Success || (xtx.diagonal().array() <= 0).any()) {
        res.singular = true;
        return res;
    }
    // rank check via condition of the factorization
    Eigen::VectorXd diag = ldlt.vectorD();
    if (diag.minCoeff() <= 1e-12 * std::max(1.0, diag.maxCoeff())) {
        res.singular = true;
        return res;
    }
    res.beta = ldlt.solve(X.transpose() * y);
    res.rss = (y - X * res.beta).squaredNorm();
    return res;
}

/// Profile log-likelihood in rho (beta and sigma concentrated out).
inline double profile_loglik(const DesignData& d, const std::vector<int>& rows,
                             const std::vector<double>& rho) {
    if (!is_stationary(rho)) return -1e300;
    const auto g = gls_at_rho(d, rows, rho);
    if (g.singular) return -1e300;
    const double m = static_cast<double>(rows.size());
    const double s2 = g.rss / m;
    if (!(s2 > 0.0)) return -1e300;
    return -0.5 * m * (std::log(2.0 * M_PI) + std::log(s2) + 1.0);
}

/// Nelder-Mead maximization (small fixed dimension).
inline std::vector<double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step, int max_iter, double ftol) {
    const int n = static_cast<int>(x0.size());
    if (n == 0) return x0;
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (int i = 0; i <= n; ++i) fv[i] = f(simplex[i]);
    for (int iter = 0; iter < max_iter; ++iter) {
        // order: best first
        std::vector<int> idx(n + 1);
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] > fv[b]; });
        std::vector<std::vector<double>> sx(n + 1);
        std::vector<double> sf(n + 1);
        for (int i = 0; i <= n; ++i) { sx[i] = simplex[idx[i]]; sf[i] = fv[idx[i]]; }
        simplex = sx; fv = sf;
        if (std::abs(fv[0] - fv[n]) < ftol * (std::abs(fv[0]) + ftol)) break;
        std::vector<double> cen(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cen[j] += simplex[i][j] / n;
        auto combine = [&](double coef) {
            std::vector<double> p(n);
            for (int j = 0; j < n; ++j) p[j] = cen[j] + coef * (simplex[n][j] - cen[j]);
            return p;
        };
        auto xr = combine(-1.0);
        const double fr = f(xr);
        if (fr > fv[0]) {
            auto xe = combine(-2.0);
            const double fe = f(xe);
            if (fe > fr) { simplex[n] = xe; fv[n] = fe; }
            else { simplex[n] = xr; fv[n] = fr; }
        } else if (fr > fv[n - 1]) {
            simplex[n] = xr; fv[n] = fr;
        } else {
            auto xc = combine(0.5);
            const double fc = f(xc);
            if (fc > fv[n]) { simplex[n] = xc; fv[n] = fc; }
            else {
                for (int i = 1; i <= n; ++i) {
                    for (int j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= n; ++i) if (fv[i] > fv[best]) best = i;
    return simplex[best];
}

/// Yule-Walker AR coefficients from OLS residuals, used as optimizer start.
inline std::vector<double> yule_walker_start(const DesignData& d,
                                             const std::vector<int>& rows, int k) {
    std::vector<double> zero(k, 0.0);
    const auto g = gls_at_rho(d, rows, zero);
    if (g.singular) return zero;
    std::vector<double> resid;
    resid.reserve(rows.size());
    for (int t : rows) {
        double e = d.z[t];
        for (int j = 0; j < d.n_x; ++j) e -= g.beta(j) * d.x[t][j];
        resid.push_back(e);
    }
    const int m = static_cast<int>(resid.size());
    if (m < k + 2) return zero;
    std::vector<double> acov(k + 1, 0.0);
    const double rm = mean(resid);
    for (int h = 0; h <= k; ++h)
        for (int t = h; t < m; ++t)
            acov[h] += (resid[t] - rm) * (resid[t - h] - rm) / m;
    if (acov[0] <= 0.0) return zero;
    Eigen::MatrixXd R(k, k);
    Eigen::VectorXd r(k);
    for (int i = 0; i < k; ++i) {
        r(i) = acov[i + 1];
        for (int j = 0; j < k; ++j) R(i, j) = acov[std::abs(i - j)];
    }
    Eigen::VectorXd phi = R.ldlt().solve(r);
    std::vector<double> rho(phi.data(), phi.data() + k);
    if (!is_stationary(rho)) return zero;
    return rho;
}

}  // namespace detail

/// Conditional Gaussian log-likelihood at explicit parameter values.
inline double loglik(const std::vector<double>& beta, const std::vector<double>& rho,
                     double sigma, const ArxSpec& spec, const Frame& frame) {
    if (!(sigma > 0.0)) throw std::invalid_argument("loglik: sigma must be > 0");
    if (static_cast<int>(beta.size()) != spec.n_beta() ||
        static_cast<int>(rho.size()) != spec.ar_order)
        throw std::invalid_argument("loglik: parameter dimension mismatch");
    const auto d = detail::build_design(spec, frame);
    const auto rows = detail::usable_rows(d, spec.ar_order);
    if (rows.empty()) throw std::invalid_argument("loglik: no usable rows");
    auto eps = [&](int t) {
        double e = d.z[t];
        for (int j = 0; j < d.n_x; ++j) e -= beta[j] * d.x[t][j];
        return e;
    };
    double ll = 0.0;
    for (int t : rows) {
        double innov = eps(t);
        for (int i = 1; i <= spec.ar_order; ++i) innov -= rho[i - 1] * eps(t - i);
        ll += -0.5 * std::log(2.0 * M_PI) - std::log(sigma) -
              0.5 * innov * innov / (sigma * sigma);
    }
    return ll;
}

/// Conditional maximum-likelihood fit.  Beta and sigma have closed-form
/// solutions given rho, so the numerical search runs over rho only, started
/// from Yule-Walker values (optionally warm-started from a previous fit).
inline ArxFit fit(const ArxSpec& spec, const Frame& frame,
                  const std::optional<std::vector<double>>& warm_start_rho = std::nullopt,
                  bool compute_vcov = true) {
    const int k = spec.ar_order;
    const auto d = detail::build_design(spec, frame);
    const auto rows = detail::usable_rows(d, k);
    const int m = static_cast<int>(rows.size());
    if (m < spec.n_params() + k + 2)
        throw std::invalid_argument("fit: insufficient rows (" + std::to_string(m) + ")");

    std::vector<double> rho_hat(k, 0.0);
    if (k > 0) {
        std::vector<std::vector<double>> starts;
        starts.push_back(detail::yule_walker_start(d, rows, k));
        starts.emplace_back(k, 0.0);
        if (warm_start_rho && static_cast<int>(warm_start_rho->size()) == k &&
            is_stationary(*warm_start_rho))
            starts.insert(starts.begin(), *warm_start_rho);
        auto objective = [&](const std::vector<double>& rho) {
            return detail::profile_loglik(d, rows, rho);
        };
        double best = -1e300;
        for (const auto& s0 : starts) {
            auto sol = detail::nelder_mead(objective, s0, 0.08, 400, 1e-12);
            // polish with a smaller simplex around the found point
            sol = detail::nelder_mead(objective, sol, 0.01, 200, 1e-14);
            const double v = objective(sol);
            if (v > best) { best = v; rho_hat = sol; }
        }
        if (best <= -1e299)
            throw std::runtime_error("fit: optimizer failed to find a stationary optimum");
        if (!is_stationary(rho_hat))
            throw std::runtime_error("fit: estimate outside the stationary region");
    }

    const auto g = detail::gls_at_rho(d, rows, rho_hat);
    if (g.singular) throw std::runtime_error("fit: singular design matrix");
    ArxFit out;
    out.spec = spec;
    out.beta.assign(g.beta.data(), g.beta.data() + g.beta.size());
    out.rho = rho_hat;
    out.sigma = std::sqrt(g.rss / m);
    if (!(out.sigma > 0.0)) throw std::runtime_error("fit: degenerate innovation variance");
    out.n_effective = m;
    out.loglik_max = loglik(out.beta, out.rho, out.sigma, spec, frame);

    if (compute_vcov) {
        // observed information by central finite differences
        const int np = spec.n_params();
        std::vector<double> theta;
        theta.insert(theta.end(), out.beta.begin(), out.beta.end());
        theta.insert(theta.end(), out.rho.begin(), out.rho.end());
        theta.push_back(out.sigma);
        auto ll_at = [&](const std::vector<double>& th) {
            std::vector<double> b(th.begin(), th.begin() + spec.n_beta());
            std::vector<double> r(th.begin() + spec.n_beta(), th.begin() + spec.n_beta() + k);
            return loglik(b, r, th.back(), spec, frame);
        };
        Eigen::MatrixXd hess(np, np);
        std::vector<double> h(np);
        for (int i = 0; i < np; ++i) h[i] = 1e-5 * std::max(1.0, std::abs(theta[i]));
        for (int i = 0; i < np; ++i) {
            for (int j = i; j < np; ++j) {
                auto th = theta;
                double v;
                if (i == j) {
                    const double f0 = out.loglik_max;
                    th[i] = theta[i] + h[i];
                    const double fp = ll_at(th);
                    th[i] = theta[i] - h[i];
                    const double fm = ll_at(th);
                    v = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
                } else {
                    th = theta; th[i] += h[i]; th[j] += h[j]; const double fpp = ll_at(th);
                    th = theta; th[i] += h[i]; th[j] -= h[j]; const double fpm = ll_at(th);
                    th = theta; th[i] -= h[i]; th[j] += h[j]; const double fmp = ll_at(th);
                    th = theta; th[i] -= h[i]; th[j] -= h[j]; const double fmm = ll_at(th);
                    v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
                }
                hess(i, j) = v;
                hess(j, i) = v;
            }
        }
        Eigen::MatrixXd info = -hess;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
        if (lu.isInvertible()) {
            out.vcov = lu.inverse();
        } else {
            out.vcov = (info + 1e-8 * Eigen::MatrixXd::Identity(np, np)).inverse();
        }
        out.vcov = 0.5 * (out.vcov + out.vcov.transpose().eval());
    } else {
        out.vcov = Eigen::MatrixXd::Zero(0, 0);
    }
    return out;
}

inline double loglik(const ArxFit& f, const Frame& frame) {
    return loglik(f.beta, f.rho, f.sigma, f.spec, frame);
}

/// Per-row log-likelihood contributions at the fitted parameters (used by
/// the monitoring-bridge scale estimate).
inline std::vector<double> loglik_contributions(const ArxFit& f, const Frame& frame) {
    const auto d = detail::build_design(f.spec, frame);
    const auto rows = detail::usable_rows(d, f.spec.ar_order);
    auto eps = [&](int t) {
        double e = d.z[t];
        for (int j = 0; j < d.n_x; ++j) e -= f.beta[j] * d.x[t][j];
        return e;
    };
    std::vector<double> out;
    out.reserve(rows.size());
    for (int t : rows) {
        double innov = eps(t);
        for (int i = 1; i <= f.spec.ar_order; ++i) innov -= f.rho[i - 1] * eps(t - i);
        out.push_back(-0.5 * std::log(2.0 * M_PI) - std::log(f.sigma) -
                      0.5 * innov * innov / (f.sigma * f.sigma));
    }
    return out;
}

/// MA(infinity) weights psi_0..psi_{h-1} of the AR part.
inline std::vector<double> psi_weights(const std::vector<double>& rho, int h) {
    std::vector<double> psi(h, 0.0);
    if (h > 0) psi[0] = 1.0;
    const int k = static_cast<int>(rho.size());
    for (int j = 1; j < h; ++j)
        for (int i = 1; i <= std::min(j, k); ++i) psi[j] += rho[i - 1] * psi[j - i];
    return psi;
}

struct ForecastStep {
    double mean = 0.0;
    double sd = 0.0;
};

namespace detail {

/// Deterministic level x_y' beta at a given year; future covariates come
/// from `future` when supplied, else hold their last observed value.
inline double mean_level_at(const ArxFit& f, const Frame& frame, int year,
                            const Frame* future) {
    double v = 0.0;
    int j = 0;
    if (f.spec.include_intercept) v += f.beta[j++];
    if (f.spec.include_linear_trend) v += f.beta[j++] * (year - kTrendOrigin);
    for (const auto& r : f.spec.regressors) {
        const int sy = year - r.lag;
        double xv;
        const Series& cs = frame.get(r.name);
        if (cs.observed_at(sy)) {
            xv = cs.at(sy);
        } else if (future && future->has(r.name) && future->get(r.name).observed_at(sy)) {
            xv = future->get(r.name).at(sy);
        } else {
            // hold-last-value extension
            int y = std::min(sy, cs.end_year());
            while (y >= cs.start_year && !cs.observed_at(y)) --y;
            if (y < cs.start_year)
                throw std::invalid_argument("forecast: no covariate value for " + r.name);
            xv = cs.at(y);
        }
        v += f.beta[j++] * xv;
    }
    return v;
}

}  // namespace detail

/// Plug-in h-step forecast from the end of the frame.  Means follow the AR
/// recursion on residuals; sds accumulate innovation variance only.
inline std::vector<ForecastStep> forecast(const ArxFit& f, const Frame& frame, int horizon,
                                          const Frame* future_covariates = nullptr) {
    if (horizon < 1) throw std::invalid_argument("forecast: horizon must be >= 1");
    const int k = f.spec.ar_order;
    const int last = frame.end_year();
    // trailing residuals
    std::vector<double> eps(k, 0.0);
    for (int i = 1; i <= k; ++i) {
        const int y = last - k + i;
        const Series& resp = frame.get(f.spec.response);
        if (!resp.observed_at(y))
            throw std::invalid_argument("forecast: response masked at trailing year " +
                                        std::to_string(y));
        eps[i - 1] = resp.at(y) - detail::mean_level_at(f, frame, y, future_covariates);
    }
    const auto psi = psi_weights(f.rho, horizon);
    std::vector<ForecastStep> out(horizon);
    std::vector<double> eh = eps;  // residual path, extended
    double var_acc = 0.0;
    for (int h = 1; h <= horizon; ++h) {
        double e = 0.0;
        for (int i = 1; i <= k; ++i) e += f.rho[i - 1] * eh[eh.size() - i];
        eh.push_back(e);
        out[h - 1].mean =
            detail::mean_level_at(f, frame, last + h, future_covariates) + e;
        var_acc += psi[h - 1] * psi[h - 1];
        out[h - 1].sd = f.sigma * std::sqrt(var_acc);
    }
    return out;
}

/// Joint Gaussian predictive covariance of the next `horizon` responses.
inline Eigen::MatrixXd forecast_covariance(const ArxFit& f, int horizon) {
    const auto psi = psi_weights(f.rho, horizon);
    Eigen::MatrixXd cov(horizon, horizon);
    for (int a = 1; a <= horizon; ++a) {
        for (int b = a; b <= horizon; ++b) {
            double s = 0.0;
            for (int j = 0; j < a; ++j) s += psi[j] * psi[j + (b - a)];
            cov(a - 1, b - 1) = f.sigma * f.sigma * s;
            cov(b - 1, a - 1) = cov(a - 1, b - 1);
        }
    }
    return cov;
}

/// Simulate n years from the fitted model with 10*k burn-in.
inline Series simulate(const ArxFit& f, const Frame& frame, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
    const int k = f.spec.ar_order;
    if (!is_stationary(f.rho)) throw std::invalid_argument("simulate: non-stationary AR part");
    Rng rng(seed);
    const int burn = 10 * k;
    std::vector<double> eps(burn + n, 0.0);
    for (int t = 0; t < burn + n; ++t) {
        double e = f.sigma * rng.normal();
        for (int i = 1; i <= k; ++i)
            if (t - i >= 0) e += f.rho[i - 1] * eps[t - i];
        eps[t] = e;
    }
    const int start = frame.start_year();
    std::vector<double> vals(n);
    for (int t = 0; t < n; ++t)
        vals[t] = detail::mean_level_at(f, frame, start + t, nullptr) + eps[burn + t];
    return Series(f.spec.response + "_sim", start, std::move(vals));
}

/// Standardized one-step innovations; the first k usable entries and all
/// incomplete rows are masked.
inline Series residuals(const ArxFit& f, const Frame& frame) {
    const auto d = detail::build_design(f.spec, frame);
    const auto rows = detail::usable_rows(d, f.spec.ar_order);
    const int n = frame.length();
    std::vector<double> vals(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> mask(n, 1);
    auto eps = [&](int t) {
        double e = d.z[t];
        for (int j = 0; j < d.n_x; ++j) e -= f.beta[j] * d.x[t][j];
        return e;
    };
    for (int t : rows) {
        double innov = eps(t);
        for (int i = 1; i <= f.spec.ar_order; ++i) innov -= f.rho[i - 1] * eps(t - i);
        vals[t] = innov / f.sigma;
        mask[t] = 0;
    }
    return Series(f.spec.response + "_resid", frame.start_year(), std::move(vals),
                  std::move(mask));
}

/// Stationary autocovariances gamma_0..gamma_{max_lag} of the AR(k) part.
inline std::vector<double> ar_autocovariances(const std::vector<double>& rho, double sigma,
                                              int max_lag) {
    const int k = static_cast<int>(rho.size());
    if (k == 0) {
        std::vector<double> g(max_lag + 1, 0.0);
        g[0] = sigma * sigma;
        return g;
    }
    // solve the Yule-Walker system for gamma_0..gamma_k
    const int m = k + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    for (int j = 0; j <= k; ++j) {
        A(j, j) += 1.0;
        for (int i = 1; i <= k; ++i) {
            const int idx = std::abs(j - i);
            A(j, idx) -= rho[i - 1];
        }
    }
    b(0) = sigma * sigma;
    Eigen::VectorXd g0 = A.fullPivLu().solve(b);
    std::vector<double> g(std::max(max_lag + 1, m));
    for (int j = 0; j < m; ++j) g[j] = g0(j);
    for (int j = m; j <= max_lag; ++j) {
        double v = 0.0;
        for (int i = 1; i <= k; ++i) v += rho[i - 1] * g[j - i];
        g[j] = v;
    }
    g.resize(max_lag + 1);
    return g;
}

}  // namespace hjortic

#endif  // HJORTIC_ARGAUSS_HPP
