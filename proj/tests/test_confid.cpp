#include <doctest.h>

#include <cmath>
#include <vector>

#include "hjortic/confid.hpp"
#include "hjortic/stats.hpp"

using namespace hjortic;

namespace {

ConfidenceDistribution normal_cd(double c, double s, std::string label = "f") {
    ConfidenceDistribution cd;
    cd.focus_label = std::move(label);
    cd.center = c;
    cd.spread = s;
    return cd;
}

/// Normal (c, s) whose equal-tailed 95% interval is [lo, hi].
ConfidenceDistribution cd_from_interval95(double lo, double hi) {
    const double z = norm_quantile(0.975);
    return normal_cd(0.5 * (lo + hi), (hi - lo) / (2.0 * z));
}

Frame ar1_frame(double beta0, double rho, double sigma, int n, std::uint64_t seed) {
    ArxFit gen;
    gen.spec.response = "z";
    gen.spec.ar_order = 1;
    gen.beta = {beta0};
    gen.rho = {rho};
    gen.sigma = sigma;
    Frame shell;
    shell.add(Series("z", 1900, {0.0}));
    Series s = simulate(gen, shell, n, seed);
    s.name = "z";
    Frame f;
    f.add(std::move(s));
    return f;
}

}  // namespace

TEST_CASE("confidence distribution basics") {
    const auto cd = normal_cd(3.0, 0.5);
    CHECK(cd.cdf(3.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(cd.quantile(0.5) == doctest::Approx(3.0).epsilon(1e-12));
    // 95% interval is center +- 1.95996 spread; 90% uses 1.6449
    auto [lo, hi] = interval(cd, 0.95);
    CHECK(lo == doctest::Approx(3.0 - 1.959964 * 0.5).epsilon(1e-6));
    CHECK(hi == doctest::Approx(3.0 + 1.959964 * 0.5).epsilon(1e-6));
    std::tie(lo, hi) = interval(cd, 0.90);
    CHECK(lo == doctest::Approx(3.0 - 1.644854 * 0.5).epsilon(1e-6));
    // level -> 0 collapses to the center
    std::tie(lo, hi) = interval(cd, 1e-12);
    CHECK(lo == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-6));
    CHECK_THROWS_AS(interval(cd, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(interval(cd, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cd.quantile(0.0), std::invalid_argument);
}

TEST_CASE("confidence curve identities") {
    const auto cd = normal_cd(-1.0, 2.0);
    const auto cc = confidence_curve(cd);
    CHECK(cc(cd.center) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(cc(cd.quantile(0.975)) == doctest::Approx(0.95).epsilon(1e-8));
    // cc at both endpoints of the level-gamma interval equals gamma
    for (double level : {0.5, 0.9, 0.95, 0.99}) {
        const auto [lo, hi] = interval(cd, level);
        CHECK(cc(lo) == doctest::Approx(level).epsilon(1e-8));
        CHECK(cc(hi) == doctest::Approx(level).epsilon(1e-8));
    }
    // tails approach 1
    CHECK(cc(cd.center - 12.0 * cd.spread) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cc(cd.center + 12.0 * cd.spread) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("combine: closed-form normal cases") {
    // two identical normals halve the variance
    const auto a = normal_cd(2.0, 0.6);
    const auto comb = combine({a, a});
    CHECK(comb.center == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(comb.spread == doctest::Approx(0.6 / std::sqrt(2.0)).epsilon(1e-12));

    // permutation invariance and associativity
    const auto b = normal_cd(3.0, 0.4);
    const auto c = normal_cd(2.5, 1.0);
    const auto abc = combine({a, b, c});
    const auto cba = combine({c, b, a});
    CHECK(abc.center == doctest::Approx(cba.center).epsilon(1e-10));
    CHECK(abc.spread == doctest::Approx(cba.spread).epsilon(1e-10));
    const auto nested = combine({combine({a, b}), c});
    CHECK(nested.center == doctest::Approx(abc.center).epsilon(1e-10));
    CHECK(nested.spread == doctest::Approx(abc.spread).epsilon(1e-10));

    // combined spread is smaller than every input spread
    CHECK(abc.spread < 0.4);

    // a dominant-precision input pins the center
    const auto sharp = normal_cd(7.0, 1e-6);
    CHECK(combine({a, sharp}).center == doctest::Approx(7.0).epsilon(1e-6));

    CHECK_THROWS_AS(combine({a}), std::invalid_argument);
    CHECK_THROWS_AS(combine({a, normal_cd(1.0, 1.0, "other")}), std::invalid_argument);
}

TEST_CASE("combine reproduces the four-source winter-temperature interval") {
    const std::vector<ConfidenceDistribution> sources = {
        cd_from_interval95(2.44, 5.06), cd_from_interval95(2.58, 5.16),
        cd_from_interval95(2.62, 5.29), cd_from_interval95(3.02, 5.64)};
    const auto comb = combine(sources);
    const auto [lo, hi] = interval(comb, 0.95);
    CHECK(std::abs(lo - 3.32) < 0.05);
    CHECK(std::abs(hi - 4.63) < 0.05);
    // and the combined interval is shorter than the shortest input interval
    CHECK(hi - lo < 5.06 - 2.44);
}

TEST_CASE("grid-route combination matches the normal closed form") {
    const auto a = normal_cd(1.0, 0.5);
    const auto b = normal_cd(1.8, 0.8);
    // re-express one input as a monotone (theta, C) grid
    ConfidenceDistribution g = a;
    g.is_grid = true;
    const int n = 4001;
    g.grid_theta.resize(n);
    g.grid_c.resize(n);
    for (int i = 0; i < n; ++i) {
        g.grid_theta[i] = a.center - 8 * a.spread + 16.0 * a.spread * i / (n - 1);
        g.grid_c[i] = a.cdf(g.grid_theta[i]);
    }
    const auto exact = combine({a, b});
    const auto via_grid = combine({g, b});
    CHECK(via_grid.center == doctest::Approx(exact.center).epsilon(1e-3));
    CHECK(via_grid.spread == doctest::Approx(exact.spread).epsilon(5e-3));
    const auto [lo_g, hi_g] = interval(via_grid, 0.95);
    const auto [lo_e, hi_e] = interval(exact, 0.95);
    CHECK(lo_g == doctest::Approx(lo_e).epsilon(5e-3));
    CHECK(hi_g == doctest::Approx(hi_e).epsilon(5e-3));
}

TEST_CASE("cd_from_fit: prediction CD covers the realized future value") {
    int covered = 0, done = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const Frame full = ar1_frame(1.0, 0.6, 1.0, 101, 7000 + rep);
        const Frame train = full.truncated(full.end_year() - 1);
        const double realized = full.get("z").at(full.end_year());
        FocusSpec pr;
        pr.kind = FocusKind::prediction;
        pr.horizon = 1;
        ArxSpec spec;
        spec.response = "z";
        spec.ar_order = 1;
        try {
            const ArxFit f = fit(spec, train);
            const auto cd = cd_from_fit(f, train, pr);
            const auto [lo, hi] = interval(cd, 0.90);
            covered += (realized >= lo && realized <= hi);
            ++done;
        } catch (const std::exception&) {
        }
    }
    REQUIRE(done >= 290);
    // 90% nominal; allow 3 percentage points of Monte-Carlo slack + asymptotics
    CHECK(static_cast<double>(covered) / done > 0.85);
    CHECK(static_cast<double>(covered) / done < 0.95);
}

TEST_CASE("reconstruct_missing leaves complete series untouched") {
    const Frame frame = ar1_frame(2.0, 0.5, 1.0, 60, 77);
    const ArxSpec spec = [] { ArxSpec s; s.response = "z"; s.ar_order = 1; return s; }();
    const ArxFit f = fit(spec, frame);
    const auto rec = reconstruct_missing(frame.get("z"), f);
    for (int i = 0; i < rec.filled.size(); ++i) {
        CHECK(rec.filled.values[i] == frame.get("z").values[i]);
        CHECK(rec.cond_sd[i] == 0.0);
    }
}

TEST_CASE("single-gap AR(1) reconstruction has the closed form") {
    // conditional mean given both neighbours: mu + rho((a-mu)+(b-mu))/(1+rho^2)
    const double mu = 2.0, rho = 0.6, sigma = 0.9;
    ArxFit f;
    f.spec.response = "z";
    f.spec.ar_order = 1;
    f.beta = {mu};
    f.rho = {rho};
    f.sigma = sigma;
    Rng rng(83);
    const int n = 41, hole = 20;
    std::vector<double> v(n);
    for (auto& x : v) x = mu + rng.normal();
    std::vector<char> mask(n, 0);
    mask[hole] = 1;
    const double a = v[hole - 1], b = v[hole + 1];
    v[hole] = std::numeric_limits<double>::quiet_NaN();
    const Series s("z", 1950, v, mask);
    const auto rec = reconstruct_missing(s, f);
    const double expect = mu + rho * ((a - mu) + (b - mu)) / (1.0 + rho * rho);
    CHECK(rec.filled.values[hole] == doctest::Approx(expect).epsilon(1e-8));
    // conditional sd of the Markov interpolation: sigma / sqrt(1 + rho^2)
    CHECK(rec.cond_sd[hole] ==
          doctest::Approx(sigma / std::sqrt(1.0 + rho * rho)).epsilon(1e-8));
    // observed cells untouched
    for (int i = 0; i < n; ++i)
        if (i != hole) CHECK(rec.filled.values[i] == v[i]);
}

TEST_CASE("reconstruction beats linear interpolation for a strongly autocorrelated AR(2)") {
    // oscillatory dynamics (complex AR roots) are where conditional-mean
    // interpolation clearly dominates a straight line through the gap
    ArxFit gen;
    gen.spec.response = "z";
    gen.spec.ar_order = 2;
    gen.beta = {0.0};
    gen.rho = {1.6, -0.9};
    gen.sigma = 1.0;
    Frame shell;
    shell.add(Series("z", 1900, {0.0}));
    int wins = 0;
    const int reps = 50;
    for (int rep = 0; rep < reps; ++rep) {
        Series truth = simulate(gen, shell, 80, 9000 + rep);
        truth.name = "z";
        Series gappy = truth;
        const int g0 = 35, g1 = 41;  // 7-year interior gap
        for (int i = g0; i <= g1; ++i) {
            gappy.values[i] = std::numeric_limits<double>::quiet_NaN();
            gappy.missing[i] = 1;
        }
        Frame train;
        train.add(gappy);
        const ArxSpec spec = [] { ArxSpec s; s.response = "z"; s.ar_order = 2;
                                  return s; }();
        const ArxFit f = fit(spec, train, std::nullopt, false);
        const auto rec = reconstruct_missing(gappy, f);
        double mse_rec = 0.0, mse_lin = 0.0;
        const double va = truth.values[g0 - 1], vb = truth.values[g1 + 1];
        for (int i = g0; i <= g1; ++i) {
            const double lin =
                va + (vb - va) * (i - (g0 - 1)) / static_cast<double>(g1 + 1 - (g0 - 1));
            mse_rec += std::pow(rec.filled.values[i] - truth.values[i], 2);
            mse_lin += std::pow(lin - truth.values[i], 2);
        }
        wins += mse_rec <= mse_lin;
    }
    CHECK(wins >= static_cast<int>(0.7 * reps));
}

TEST_CASE("reconstruct_missing rejects unusable fits") {
    const Frame frame = ar1_frame(0.0, 0.5, 1.0, 50, 91);
    ArxFit f;
    f.spec.response = "z";
    f.spec.ar_order = 1;
    f.beta = {0.0};
    f.rho = {1.2};
    f.sigma = 1.0;
    CHECK_THROWS_AS(reconstruct_missing(frame.get("z"), f), std::invalid_argument);
    f.rho = {0.5};
    f.spec.regressors.push_back({"x", 0});
    f.beta = {0.0, 1.0};
    CHECK_THROWS_AS(reconstruct_missing(frame.get("z"), f), std::invalid_argument);
}
