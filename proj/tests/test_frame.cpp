#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hjortic/series.hpp"

using namespace hjortic;

namespace {

std::string write_temp(const std::string& contents) {
    static int counter = 0;
    std::string path = "frame_test_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path);
    out << contents;
    return path;
}

}  // namespace

TEST_CASE("load_csv basic three-row file") {
    const auto path = write_temp("year,hsi\n2000,1.5\n2001,2.5\n2002,3.5\n");
    const Frame f = load_csv(path, "year", {"hsi"});
    const Series& s = f.get("hsi");
    CHECK(s.start_year == 2000);
    CHECK(s.size() == 3);
    CHECK(s.n_observed() == 3);
    CHECK(s.at(2001) == doctest::Approx(2.5));
    std::remove(path.c_str());
}

TEST_CASE("load_csv pads year gaps with masked rows") {
    const auto path = write_temp("year,hsi\n2000,1\n2002,3\n");
    const Frame f = load_csv(path, "year", {"hsi"});
    const Series& s = f.get("hsi");
    CHECK(s.size() == 3);
    CHECK(!s.observed_at(2001));
    CHECK(s.observed_at(2000));
    CHECK(s.observed_at(2002));
    std::remove(path.c_str());
}

TEST_CASE("load_csv NA sentinel masks the cell") {
    const auto path = write_temp("year,hsi\n2000,1\n2001,NA\n2002,3\n");
    const Frame f = load_csv(path, "year", {"hsi"});
    CHECK(!f.get("hsi").observed_at(2001));
    CHECK(f.get("hsi").observed_at(2002));
    std::remove(path.c_str());
}

TEST_CASE("load_csv errors") {
    CHECK_THROWS(load_csv("does_not_exist.csv", "year", {"hsi"}));
    const auto dup = write_temp("year,hsi\n2000,1\n2000,2\n");
    CHECK_THROWS(load_csv(dup, "year", {"hsi"}));
    std::remove(dup.c_str());
    const auto bad = write_temp("year,hsi\n2000,xyz\n");
    CHECK_THROWS(load_csv(bad, "year", {"hsi"}));
    std::remove(bad.c_str());
}

TEST_CASE("lag identity, shift and mask propagation") {
    Series s("x", 2000, {1.0, 2.0, 3.0});
    const Series l0 = lag(s, 0);
    CHECK(l0.at(2000) == 1.0);
    CHECK(l0.at(2002) == 3.0);

    const Series l1 = lag(s, 1);
    CHECK(!l1.observed_at(2000));
    CHECK(l1.at(2001) == 1.0);
    CHECK(l1.at(2002) == 2.0);

    Series masked("x", 2000, {1.0, 2.0, 3.0}, {0, 1, 0});
    const Series lm = lag(masked, 1);
    CHECK(!lm.observed_at(2002));  // masked input entry stays masked
    CHECK(lm.at(2001) == 1.0);

    CHECK_THROWS(lag(s, 3));
}

TEST_CASE("lag composes additively on unmasked entries") {
    Series s("x", 2000, {1, 2, 3, 4, 5, 6, 7, 8});
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; a + b <= 4; ++b) {
            const Series lhs = lag(lag(s, a), b);
            const Series rhs = lag(s, a + b);
            for (int y = 2000; y <= 2007; ++y) {
                REQUIRE(lhs.observed_at(y) == rhs.observed_at(y));
                if (lhs.observed_at(y)) REQUIRE(lhs.at(y) == rhs.at(y));
            }
        }
    }
}

TEST_CASE("standardize") {
    Series s("x", 2000, {1.0, 2.0, 3.0});
    const Series z = standardize(s);
    CHECK(z.at(2000) == doctest::Approx(-1.0));
    CHECK(z.at(2001) == doctest::Approx(0.0));
    CHECK(z.at(2002) == doctest::Approx(1.0));

    const Series zz = standardize(z);  // idempotent
    for (int y = 2000; y <= 2002; ++y) CHECK(zz.at(y) == doctest::Approx(z.at(y)).epsilon(1e-12));

    Series c("x", 2000, {5.0, 5.0, 5.0});
    CHECK_THROWS(standardize(c));
}

TEST_CASE("correlate basics and symmetry") {
    Series a("a", 2000, {1.0, 2.0, 4.0, 3.0, 5.0});
    Series b = a;
    b.name = "b";
    CHECK(correlate(a, b) == doctest::Approx(1.0));
    Series nb("nb", 2000, {-1.0, -2.0, -4.0, -3.0, -5.0});
    CHECK(correlate(a, nb) == doctest::Approx(-1.0));
    Series c("c", 2000, {2.0, 1.0, 2.5, 4.0, 0.5});
    CHECK(correlate(a, c) == correlate(c, a));
    Series tiny("t", 2000, {1.0, 2.0});
    CHECK_THROWS(correlate(a, tiny));
}

TEST_CASE("correlate on independent white noise is near zero") {
    // oracle: the defining sum formula computed by a separate scalar loop
    Rng rng(424242);
    const int n = 10000;
    std::vector<double> xv(n), yv(n);
    for (int i = 0; i < n; ++i) { xv[i] = rng.normal(); yv[i] = rng.normal(); }
    Series x("x", 1900, xv), y("y", 1900, yv);
    const double r = correlate(x, y);
    CHECK(std::abs(r) < 0.05);

    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) { mx += xv[i]; my += yv[i]; }
    mx /= n; my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxy += (xv[i] - mx) * (yv[i] - my);
        sxx += (xv[i] - mx) * (xv[i] - mx);
        syy += (yv[i] - my) * (yv[i] - my);
    }
    CHECK(r == doctest::Approx(sxy / std::sqrt(sxx * syy)).epsilon(1e-12));
}

TEST_CASE("standardize then correlate equals correlate on raw values") {
    Rng rng(7);
    std::vector<double> xv(50), yv(50);
    for (int i = 0; i < 50; ++i) {
        xv[i] = 3.0 + 2.0 * rng.normal();
        yv[i] = -1.0 + 0.5 * xv[i] + rng.normal();
    }
    Series x("x", 1900, xv), y("y", 1900, yv);
    CHECK(correlate(standardize(x), standardize(y)) ==
          doctest::Approx(correlate(x, y)).epsilon(1e-10));
}

TEST_CASE("csv round trip is bit-identical") {
    Rng rng(99);
    std::vector<double> v(40);
    std::vector<char> m(40, 0);
    for (int i = 0; i < 40; ++i) v[i] = rng.normal() * 1e3;
    m[5] = 1; m[17] = 1;
    Frame f;
    f.add(Series("a", 1950, v, m));
    write_csv(f, "roundtrip1.csv");
    const Frame g = load_csv("roundtrip1.csv", "year", {"a"});
    write_csv(g, "roundtrip2.csv");
    std::ifstream f1("roundtrip1.csv"), f2("roundtrip2.csv");
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    const Series& a = g.get("a");
    for (int i = 0; i < 40; ++i) {
        REQUIRE(static_cast<bool>(a.missing[i]) == static_cast<bool>(m[i]));
        if (!m[i]) REQUIRE(a.values[i] == doctest::Approx(v[i]).epsilon(1e-11));
    }
    std::remove("roundtrip1.csv");
    std::remove("roundtrip2.csv");
}

TEST_CASE("frame alignment and completeness") {
    Frame f;
    f.add(Series("a", 2000, {1, 2, 3}));
    f.add(Series("b", 2001, {5, 6, 7}));
    CHECK(f.start_year() == 2000);
    CHECK(f.end_year() == 2003);
    CHECK(!f.row_complete(2000));  // b missing
    CHECK(f.row_complete(2001));
    CHECK(f.row_complete(2002));
    CHECK(!f.row_complete(2003));  // a missing
}
