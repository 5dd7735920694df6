#ifndef HJORTIC_CONFID_HPP
#define HJORTIC_CONFID_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hjortic/argauss.hpp"
#include "hjortic/modelsel.hpp"
#include "hjortic/stats.hpp"

namespace hjortic {

/// Cumulative confidence function for a scalar focus.  All CDs produced here
/// are normal-family (center, spread); a monotone (theta, C) grid form is
/// accepted for externally supplied distributions.
struct ConfidenceDistribution {
    std::string focus_label;
    double center = 0.0;
    double spread = 1.0;
    bool is_grid = false;
    std::vector<double> grid_theta;
    std::vector<double> grid_c;

    double cdf(double theta) const {
        if (!is_grid) return norm_cdf((theta - center) / spread);
        if (theta <= grid_theta.front()) return grid_c.front();
        if (theta >= grid_theta.back()) return grid_c.back();
        const auto it = std::upper_bound(grid_theta.begin(), grid_theta.end(), theta);
        const std::size_t i = static_cast<std::size_t>(it - grid_theta.begin());
        const double t0 = grid_theta[i - 1], t1 = grid_theta[i];
        const double c0 = grid_c[i - 1], c1 = grid_c[i];
        return c0 + (c1 - c0) * (theta - t0) / (t1 - t0);
    }

    double quantile(double p) const {
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("CD quantile: p in (0,1)");
        if (!is_grid) return center + spread * norm_quantile(p);
        // bisection on the monotone grid interpolant
        double lo = grid_theta.front(), hi = grid_theta.back();
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (cdf(mid) < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
};

struct ConfidenceCurve {
    ConfidenceDistribution cd;
    double operator()(double theta) const { return std::abs(1.0 - 2.0 * cd.cdf(theta)); }
};

inline ConfidenceCurve confidence_curve(const ConfidenceDistribution& cd) {
    return ConfidenceCurve{cd};
}

/// Equal-tailed confidence interval at the given level.
inline std::pair<double, double> interval(const ConfidenceDistribution& cd, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("interval: level must be in (0,1)");
    return {cd.quantile(0.5 * (1.0 - level)), cd.quantile(0.5 * (1.0 + level))};
}

/// Normal-family CD for a focus under a fitted model.  Prediction foci add
/// the innovation-accumulation variance to the delta-method spread.
inline ConfidenceDistribution cd_from_fit(const ArxFit& f, const Frame& frame,
                                          const FocusSpec& focus) {
    ConfidenceDistribution cd;
    cd.focus_label = focus.label();
    cd.center = focus_estimate(f, frame, focus);
    double var = detail::focus_delta_variance(f, frame, focus);
    if (focus.kind == FocusKind::prediction) {
        const double fsd = forecast(f, frame, focus.horizon).back().sd;
        var += fsd * fsd;
    }
    if (!(var > 0.0)) throw std::invalid_argument("cd_from_fit: degenerate focus spread");
    cd.spread = std::sqrt(var);
    return cd;
}

/// Optimal combination across sources: each CD converts to the log-likelihood
/// -0.5 [Phi^{-1}(C(theta))]^2, the pieces are added, and the sum reverts to a
/// CD.  For normal-family inputs this is precision-weighted averaging.
inline ConfidenceDistribution combine(const std::vector<ConfidenceDistribution>& cds) {
    if (cds.size() < 2) throw std::invalid_argument("combine: need >= 2 CDs");
    for (const auto& c : cds)
        if (c.focus_label != cds.front().focus_label)
            throw std::invalid_argument("combine: mismatched focus labels");

    bool all_normal = true;
    for (const auto& c : cds) all_normal = all_normal && !c.is_grid;
    if (all_normal) {
        double wsum = 0.0, wc = 0.0;
        for (const auto& c : cds) {
            const double w = 1.0 / (c.spread * c.spread);
            wsum += w;
            wc += w * c.center;
        }
        ConfidenceDistribution out;
        out.focus_label = cds.front().focus_label;
        out.center = wc / wsum;
        out.spread = 1.0 / std::sqrt(wsum);
        return out;
    }

    // grid route: sum the converted log-likelihoods, revert by signed root
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : cds) {
        lo = std::min(lo, c.quantile(1e-6));
        hi = std::max(hi, c.quantile(1.0 - 1e-6));
    }
    const int n = 2001;
    std::vector<double> theta(n), ll(n, 0.0);
    for (int i = 0; i < n; ++i) {
        theta[i] = lo + (hi - lo) * i / (n - 1);
        for (const auto& c : cds) {
            double p = c.cdf(theta[i]);
            p = std::clamp(p, 1e-14, 1.0 - 1e-14);
            const double z = norm_quantile(p);
            ll[i] += -0.5 * z * z;
        }
    }
    const auto imax = std::max_element(ll.begin(), ll.end()) - ll.begin();
    ConfidenceDistribution out;
    out.focus_label = cds.front().focus_label;
    out.is_grid = true;
    out.grid_theta = theta;
    out.grid_c.resize(n);
    for (int i = 0; i < n; ++i) {
        const double dev = std::sqrt(std::max(0.0, 2.0 * (ll[imax] - ll[i])));
        out.grid_c[i] = norm_cdf(i < imax ? -dev : dev);
    }
    out.center = out.quantile(0.5);
    out.spread = 0.5 * (out.quantile(0.8413447461) - out.quantile(0.1586552539));
    return out;
}

struct Reconstruction {
    Series filled;
    std::vector<double> cond_sd;  // 0 for observed entries
};

/// Conditional-Gaussian reconstruction of masked entries under a fitted
/// covariate-free AR model.  Each contiguous gap is filled jointly from the
/// observed neighbours within +-(3k+10) years.
inline Reconstruction reconstruct_missing(const Series& s, const ArxFit& f) {
    if (!f.spec.regressors.empty())
        throw std::invalid_argument("reconstruct_missing: fit must be covariate-free");
    if (!is_stationary(f.rho))
        throw std::invalid_argument("reconstruct_missing: non-stationary fit");
    if (s.n_observed() == 0)
        throw std::invalid_argument("reconstruct_missing: all entries masked");

    const int n = s.size();
    const int k = f.spec.ar_order;
    const int window = 3 * k + 10;
    const auto acov = ar_autocovariances(f.rho, f.sigma, n);
    auto mean_at = [&](int idx) {
        double v = 0.0;
        int j = 0;
        if (f.spec.include_intercept) v += f.beta[j++];
        if (f.spec.include_linear_trend)
            v += f.beta[j++] * (s.start_year + idx - kTrendOrigin);
        return v;
    };

    Reconstruction out;
    out.filled = s;
    out.cond_sd.assign(n, 0.0);
    int i = 0;
    while (i < n) {
        if (!s.missing[i]) { ++i; continue; }
        int gap_end = i;
        while (gap_end + 1 < n && s.missing[gap_end + 1]) ++gap_end;
        // observed indices within the window around the gap
        std::vector<int> obs;
        for (int u = std::max(0, i - window); u <= std::min(n - 1, gap_end + window); ++u)
            if (!s.missing[u]) obs.push_back(u);
        const int gm = gap_end - i + 1;
        if (obs.empty()) {
            for (int g = 0; g < gm; ++g) {
                out.filled.values[i + g] = mean_at(i + g);
                out.filled.missing[i + g] = 0;
                out.cond_sd[i + g] = std::sqrt(acov[0]);
            }
            i = gap_end + 1;
            continue;
        }
        const int om = static_cast<int>(obs.size());
        Eigen::MatrixXd Soo(om, om), Sgo(gm, om), Sgg(gm, gm);
        Eigen::VectorXd r(om);
        for (int a = 0; a < om; ++a) {
            r(a) = s.values[obs[a]] - mean_at(obs[a]);
            for (int b = 0; b < om; ++b) Soo(a, b) = acov[std::abs(obs[a] - obs[b])];
        }
        for (int g = 0; g < gm; ++g)
            for (int a = 0; a < om; ++a) Sgo(g, a) = acov[std::abs(i + g - obs[a])];
        for (int g = 0; g < gm; ++g)
            for (int h = 0; h < gm; ++h) Sgg(g, h) = acov[std::abs(g - h)];
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(Soo);
        const Eigen::VectorXd w = ldlt.solve(r);
        const Eigen::MatrixXd SooInvSog = ldlt.solve(Sgo.transpose());
        const Eigen::MatrixXd cond_cov = Sgg - Sgo * SooInvSog;
        for (int g = 0; g < gm; ++g) {
            out.filled.values[i + g] = mean_at(i + g) + Sgo.row(g).dot(w);
            out.filled.missing[i + g] = 0;
            out.cond_sd[i + g] = std::sqrt(std::max(0.0, cond_cov(g, g)));
        }
        i = gap_end + 1;
    }
    return out;
}

}  // namespace hjortic

#endif  // HJORTIC_CONFID_HPP
