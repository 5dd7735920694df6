#ifndef HJORTIC_COPULA_HPP
#define HJORTIC_COPULA_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hjortic/stats.hpp"

namespace hjortic {

/// Per-specimen (liver weight, total weight) pairs, both in kg.
struct FishPairs {
    std::vector<double> liver_kg;
    std::vector<double> fish_kg;

    void validate() const {
        if (liver_kg.size() != fish_kg.size())
            throw std::invalid_argument("FishPairs: length mismatch");
        if (liver_kg.empty()) throw std::invalid_argument("FishPairs: empty");
        for (std::size_t i = 0; i < liver_kg.size(); ++i) {
            if (!(liver_kg[i] > 0.0) || !(fish_kg[i] > 0.0))
                throw std::invalid_argument("FishPairs: non-positive weight");
            if (!(liver_kg[i] < fish_kg[i]))
                throw std::invalid_argument("FishPairs: liver must weigh less than the fish");
        }
    }
};

/// Bulk index: 100 * total liver over total weight.
inline double hsi_bulk(const FishPairs& p) {
    p.validate();
    double lsum = 0.0, fsum = 0.0;
    for (std::size_t i = 0; i < p.liver_kg.size(); ++i) {
        lsum += p.liver_kg[i];
        fsum += p.fish_kg[i];
    }
    return 100.0 * lsum / fsum;
}

/// Individual index: 100 * mean of per-fish liver-to-weight ratios.
inline double hsi_ind(const FishPairs& p) {
    p.validate();
    double rsum = 0.0;
    for (std::size_t i = 0; i < p.liver_kg.size(); ++i)
        rsum += p.liver_kg[i] / p.fish_kg[i];
    return 100.0 * rsum / p.liver_kg.size();
}

/// Mixture identity: population index as the frequency-weighted sum of
/// per-stratum indices.
inline double hsi_stratified(const std::vector<double>& weights,
                             const std::vector<double>& indices) {
    if (weights.size() != indices.size() || weights.empty())
        throw std::invalid_argument("hsi_stratified: length mismatch");
    double wsum = 0.0, total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("hsi_stratified: negative weight");
        wsum += weights[i];
        total += weights[i] * indices[i];
    }
    if (std::abs(wsum - 1.0) > 1e-10)
        throw std::invalid_argument("hsi_stratified: weights must sum to 1");
    return total;
}

/// Gamma marginals (shape a, rate b) linked by a latent binormal pair with
/// correlation rho.  Margin 1 is liver weight, margin 2 total weight.
struct CopulaModel {
    double a1 = 1.0, b1 = 1.0;
    double a2 = 1.0, b2 = 1.0;
    double rho = 0.0;

    void validate() const {
        if (!(a1 > 0.0 && b1 > 0.0 && a2 > 0.0 && b2 > 0.0))
            throw std::invalid_argument("CopulaModel: shapes and rates must be > 0");
        if (!(std::abs(rho) < 1.0))
            throw std::invalid_argument("CopulaModel: |rho| must be < 1");
    }
};

namespace detail {

/// Gamma shape MLE by Newton iteration on log(a) - digamma(a) = s, with the
/// method-of-moments value as the start; the rate is profiled out.
inline std::pair<double, double> gamma_mle(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("gamma_mle: need >= 2 values");
    double m = 0.0, mlog = 0.0;
    for (double v : x) {
        if (!(v > 0.0)) throw std::invalid_argument("gamma_mle: non-positive value");
        m += v;
        mlog += std::log(v);
    }
    m /= x.size();
    mlog /= x.size();
    const double s = std::log(m) - mlog;
    if (!(s > 0.0)) throw std::runtime_error("gamma_mle: degenerate sample");
    double a = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int it = 0; it < 100; ++it) {
        const double f = std::log(a) - digamma(a) - s;
        const double fp = 1.0 / a - boost::math::trigamma(a);
        const double step = f / fp;
        a -= step;
        if (!(a > 0.0)) throw std::runtime_error("gamma_mle: iteration left the domain");
        if (std::abs(step) < 1e-12 * a) break;
    }
    return {a, a / m};
}

}  // namespace detail

/// Fit the bivariate gamma-copula model: per-margin gamma ML, then the
/// Pearson correlation of the fitted-margin normal scores.
inline CopulaModel fit_copula(const FishPairs& pairs) {
    pairs.validate();
    if (pairs.liver_kg.size() < 30)
        throw std::invalid_argument("fit_copula: need >= 30 pairs");
    CopulaModel m;
    std::tie(m.a1, m.b1) = detail::gamma_mle(pairs.liver_kg);
    std::tie(m.a2, m.b2) = detail::gamma_mle(pairs.fish_kg);
    const std::size_t n = pairs.liver_kg.size();
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p1 =
            std::clamp(gamma_cdf(pairs.liver_kg[i], m.a1, m.b1), 1e-12, 1.0 - 1e-12);
        const double p2 =
            std::clamp(gamma_cdf(pairs.fish_kg[i], m.a2, m.b2), 1e-12, 1.0 - 1e-12);
        u[i] = norm_quantile(p1);
        v[i] = norm_quantile(p2);
    }
    m.rho = pearson(u, v);
    m.validate();
    return m;
}

struct IndexPair {
    double hsi_ind = 0.0;
    double hsi_bulk = 0.0;
};

/// Draw one replicate of n_fish specimens from the copula model and return
/// its two indices.
inline IndexPair draw_indices(const CopulaModel& m, int n_fish, Rng& rng) {
    const double c = std::sqrt(1.0 - m.rho * m.rho);
    double lsum = 0.0, fsum = 0.0, rsum = 0.0;
    for (int i = 0; i < n_fish; ++i) {
        const double u = rng.normal();
        const double v = m.rho * u + c * rng.normal();
        const double x = gamma_quantile(norm_cdf(u), m.a1, m.b1);
        const double y = gamma_quantile(norm_cdf(v), m.a2, m.b2);
        lsum += x;
        fsum += y;
        rsum += x / y;
    }
    IndexPair out;
    out.hsi_ind = 100.0 * rsum / n_fish;
    out.hsi_bulk = 100.0 * lsum / fsum;
    return out;
}

/// Replicated sampling distributions of the two indices.  Replicates derive
/// their seeds as base seed + replicate index, so results are independent of
/// evaluation order.
inline std::vector<IndexPair> simulate_copula(const CopulaModel& m, int n_fish, int n_reps,
                                              std::uint64_t seed) {
    m.validate();
    if (n_fish < 1) throw std::invalid_argument("simulate_copula: n_fish must be >= 1");
    if (n_reps < 1) throw std::invalid_argument("simulate_copula: n_reps must be >= 1");
    std::vector<IndexPair> out(n_reps);
    for (int r = 0; r < n_reps; ++r) {
        Rng rng(seed + static_cast<std::uint64_t>(r));
        out[r] = draw_indices(m, n_fish, rng);
    }
    return out;
}

/// Bulk-on-individual least-squares line across simulated replicates.
inline std::pair<double, double> translation(const CopulaModel& m, int n_fish, int n_reps,
                                             std::uint64_t seed) {
    if (n_reps < 100) throw std::invalid_argument("translation: need >= 100 replicates");
    const auto reps = simulate_copula(m, n_fish, n_reps, seed);
    double mi = 0.0, mb = 0.0;
    for (const auto& r : reps) { mi += r.hsi_ind; mb += r.hsi_bulk; }
    mi /= n_reps;
    mb /= n_reps;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& r : reps) {
        sxx += (r.hsi_ind - mi) * (r.hsi_ind - mi);
        sxy += (r.hsi_ind - mi) * (r.hsi_bulk - mb);
    }
    if (!(sxx > 0.0)) throw std::runtime_error("translation: degenerate simulated variance");
    const double slope = sxy / sxx;
    return {mb - slope * mi, slope};
}

}  // namespace hjortic

#endif  // HJORTIC_COPULA_HPP
