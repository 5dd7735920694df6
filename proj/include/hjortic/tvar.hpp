#ifndef HJORTIC_TVAR_HPP
#define HJORTIC_TVAR_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hjortic/argauss.hpp"
#include "hjortic/series.hpp"
#include "hjortic/stats.hpp"

namespace hjortic {

/// Time-varying AR(p): Y_i + sum_j alpha_j(u) Y_{i-j} = sigma(u) eps_i with
/// coefficient functions of rescaled time u in [0,1].
struct TvarSpec {
    int order = 1;
    std::vector<std::function<double(double)>> alpha_fns;
    std::function<double(double)> sigma_fn;

    void validate_at(double u) const {
        if (static_cast<int>(alpha_fns.size()) != order)
            throw std::invalid_argument("TvarSpec: need one alpha function per order");
        if (!(sigma_fn(u) > 0.0))
            throw std::invalid_argument("TvarSpec: sigma must be > 0 on [0,1]");
        // frozen-coefficient stationarity: alphas enter with a plus on the
        // left, so the equivalent AR coefficients are -alpha_j
        std::vector<double> rho(order);
        for (int j = 0; j < order; ++j) rho[j] = -alpha_fns[j](u);
        if (!is_stationary(rho))
            throw std::invalid_argument("TvarSpec: frozen coefficients non-stationary at u=" +
                                        std::to_string(u));
    }
};

/// Simulate n values with burn-in 10*p at frozen u=0 coefficients.
inline Series simulate_tvar(const TvarSpec& spec, int n, std::uint64_t seed,
                            int start_year = 1) {
    const int p = spec.order;
    if (n < 10 * p) throw std::invalid_argument("simulate_tvar: n must be >= 10*order");
    for (int t = 0; t <= 10; ++t) spec.validate_at(t / 10.0);
    Rng rng(seed);
    const int burn = 10 * p;
    std::vector<double> y(burn + n, 0.0);
    for (int t = 0; t < burn + n; ++t) {
        const double u = t < burn ? 0.0 : static_cast<double>(t - burn) / n;
        double v = spec.sigma_fn(u) * rng.normal();
        for (int j = 1; j <= p; ++j)
            if (t - j >= 0) v -= spec.alpha_fns[j - 1](u) * y[t - j];
        y[t] = v;
    }
    return Series("tvar_sim", start_year, std::vector<double>(y.begin() + burn, y.end()));
}

struct TvarLocalFit {
    std::vector<int> years;
    std::vector<std::vector<double>> alpha;     // [year][j]
    std::vector<std::vector<double>> alpha_se;  // pointwise standard errors
    std::vector<double> sigma;
    std::vector<double> sigma_se;
};

/// Kernel-weighted local conditional Gaussian fit at each year: weighted
/// regression of Y_t on its p predecessors plus a local intercept, Gaussian
/// kernel in rescaled time.
inline TvarLocalFit fit_tvar_local(const Series& s, int order, double bandwidth) {
    const int p = order;
    const int n = s.size();
    if (bandwidth * n < 5.0 * (p + 2))
        throw std::invalid_argument("fit_tvar_local: window too small");
    // rows t with t-p..t all observed
    std::vector<int> rows;
    for (int t = p; t < n; ++t) {
        bool ok = true;
        for (int i = 0; i <= p; ++i) ok = ok && !s.missing[t - i];
        if (ok) rows.push_back(t);
    }
    if (static_cast<int>(rows.size()) < 5 * (p + 2))
        throw std::invalid_argument("fit_tvar_local: too few complete rows");

    TvarLocalFit out;
    const int ncol = p + 1;  // intercept + p lags
    for (int t = 0; t < n; ++t) {
        const double u0 = static_cast<double>(t) / n;
        Eigen::MatrixXd xtwx = Eigen::MatrixXd::Zero(ncol, ncol);
        Eigen::VectorXd xtwy = Eigen::VectorXd::Zero(ncol);
        double wsum = 0.0;
        std::vector<double> w(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double du = (static_cast<double>(rows[r]) / n - u0) / bandwidth;
            w[r] = std::exp(-0.5 * du * du);
            wsum += w[r];
        }
        if (wsum < 5.0 * (p + 2) * 0.1) continue;  // effectively empty window
        Eigen::VectorXd xr(ncol);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const int tt = rows[r];
            xr(0) = 1.0;
            for (int j = 1; j <= p; ++j) xr(j) = s.values[tt - j];
            xtwx += w[r] * xr * xr.transpose();
            xtwy += w[r] * xr * s.values[tt];
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(xtwx);
        const Eigen::VectorXd beta = ldlt.solve(xtwy);
        double wrss = 0.0, w2 = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const int tt = rows[r];
            double pred = beta(0);
            for (int j = 1; j <= p; ++j) pred += beta(j) * s.values[tt - j];
            const double e = s.values[tt] - pred;
            wrss += w[r] * e * e;
            w2 += w[r] * w[r];
        }
        const double eff_n = wsum * wsum / w2;  // effective sample size
        const double dof = std::max(1.0, eff_n - ncol);
        const double s2 = wrss / (wsum * dof / eff_n);
        const Eigen::MatrixXd cov = s2 * ldlt.solve(Eigen::MatrixXd::Identity(ncol, ncol));
        out.years.push_back(s.start_year + t);
        std::vector<double> al(p), ase(p);
        for (int j = 1; j <= p; ++j) {
            al[j - 1] = -beta(j);  // sign convention: alphas enter with a plus
            ase[j - 1] = std::sqrt(std::max(0.0, cov(j, j)));
        }
        out.alpha.push_back(std::move(al));
        out.alpha_se.push_back(std::move(ase));
        out.sigma.push_back(std::sqrt(s2));
        out.sigma_se.push_back(std::sqrt(s2 / (2.0 * dof)));
    }
    return out;
}

}  // namespace hjortic

#endif  // HJORTIC_TVAR_HPP
