#ifndef HJORTIC_STATS_HPP
#define HJORTIC_STATS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

namespace hjortic {

inline double norm_cdf(double x) {
    static const boost::math::normal_distribution<double> n01;
    return boost::math::cdf(n01, x);
}

inline double norm_quantile(double p) {
    static const boost::math::normal_distribution<double> n01;
    return boost::math::quantile(n01, p);
}

/// Distribution function of a chi-squared variable with one degree of freedom.
inline double chisq1_cdf(double x) {
    if (x <= 0.0) return 0.0;
    return 2.0 * norm_cdf(std::sqrt(x)) - 1.0;
}

inline double gamma_cdf(double x, double shape, double rate) {
    boost::math::gamma_distribution<double> g(shape, 1.0 / rate);
    return boost::math::cdf(g, x);
}

inline double gamma_quantile(double p, double shape, double rate) {
    boost::math::gamma_distribution<double> g(shape, 1.0 / rate);
    return boost::math::quantile(g, p);
}

inline double digamma(double x) { return boost::math::digamma(x); }

/// Deterministic random stream.  Normal deviates go through the inverse
/// transform so the byte stream depends only on the seed, not on the
/// standard library's normal_distribution implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        // top 53 bits -> (0,1), never exactly 0 or 1
        const std::uint64_t r = gen_();
        return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return norm_quantile(uniform()); }

    std::uint64_t next_u64() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("sd needs >= 2 values");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 3)
        throw std::invalid_argument("pearson needs >= 3 paired values");
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0)
        throw std::invalid_argument("pearson: zero variance");
    return sab / std::sqrt(saa * sbb);
}

}  // namespace hjortic

#endif  // HJORTIC_STATS_HPP
