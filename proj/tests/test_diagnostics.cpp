#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracle_helpers.hpp"
#include "ppassoc/diagnostics.hpp"
#include "ppassoc/rng.hpp"

using namespace ppassoc;

TEST_CASE("ecdf_table: knots") {
    std::vector<double> one{0.5};
    auto t1 = ecdf_table(one);
    REQUIRE(t1.size() == 1);
    CHECK(t1[0].first == 0.5);
    CHECK(t1[0].second == 1.0);

    std::vector<double> two{0.25, 0.75};
    auto t2 = ecdf_table(two);
    REQUIRE(t2.size() == 2);
    CHECK(t2[0] == std::pair(0.25, 0.5));
    CHECK(t2[1] == std::pair(0.75, 1.0));

    std::vector<double> dup{0.3, 0.3, 0.9};
    auto t3 = ecdf_table(dup);
    REQUIRE(t3.size() == 2);
    CHECK(t3[0].second == doctest::Approx(2.0 / 3.0));

    std::vector<double> empty;
    CHECK_THROWS_AS(ecdf_table(empty), std::invalid_argument);
}

TEST_CASE("ecdf stays near the diagonal under the null") {
    auto engine = make_engine(RngSeed{211});
    const std::size_t n = 1000;
    int ok = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> u(n);
        for (double& x : u) x = uniform_open01(engine);
        if (ks_distance_uniform(u) < kolmogorov_critical(0.01, n)) ++ok;
    }
    CHECK(ok >= 95);  // 99% coverage per replicate
}

TEST_CASE("fisher_combine: chi-square tail against quadrature") {
    std::vector<double> u{std::exp(-0.5), std::exp(-0.5)};
    auto fr = fisher_combine(u);
    CHECK(fr.statistic == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fr.p_value == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-10));
    CHECK(fr.p_value == doctest::Approx(oracle::chi_square_survival_quadrature(4.0, 2.0)).epsilon(1e-10));

    std::vector<double> high{0.999, 0.9999, 0.99999};
    auto near_one = fisher_combine(high);
    CHECK(near_one.p_value > 0.999);

    std::vector<double> degenerate{0.5, 0.0};
    auto dg = fisher_combine(degenerate);
    CHECK(dg.degenerate);
    CHECK(dg.p_value == 0.0);
}

TEST_CASE("fisher_combine: uniform under the null") {
    auto engine = make_engine(RngSeed{223});
    std::vector<double> pvals;
    for (int rep = 0; rep < 400; ++rep) {
        std::vector<double> u(20);
        for (double& x : u) x = uniform_open01(engine);
        pvals.push_back(fisher_combine(u).p_value);
    }
    CHECK(ks_distance_uniform(pvals) < kolmogorov_critical(0.01, pvals.size()));
}

TEST_CASE("incomplete gamma matches quadrature to 1e-10") {
    struct Case {
        double df, x;
    };
    // quadrature handles bounded densities (df >= 2)
    for (Case c : {Case{2.0, 0.1}, Case{4.0, 2.0}, Case{10.0, 23.2}, Case{40.0, 55.8}, Case{100.0, 80.0}}) {
        double mine = chi_square_survival(c.df, c.x);
        double reference = oracle::chi_square_survival_quadrature(c.df, c.x);
        CHECK(std::abs(mine - reference) < 1e-10);
    }
    // df = 1 has a closed form through the normal tail
    for (double x : {0.3, 1.0, 4.2}) {
        CHECK(std::abs(chi_square_survival(1.0, x) - std::erfc(std::sqrt(0.5 * x))) < 1e-12);
    }
}

TEST_CASE("weighted_ks_plus: spec points") {
    KsConfig ks{0.01, 0.99};
    std::vector<double> empty_set{0.995};  // outside [gamma1, gamma2]
    CHECK(weighted_ks_plus(empty_set, ks) == 0.0);

    std::vector<double> half{0.5};
    CHECK(weighted_ks_plus(half, ks) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> diagonal;
    const std::size_t n = 50;
    for (std::size_t i = 1; i <= n; ++i) diagonal.push_back(static_cast<double>(i) / static_cast<double>(n));
    CHECK(weighted_ks_plus(diagonal, ks) == doctest::Approx(0.0));

    CHECK_THROWS_AS(weighted_ks_plus(half, KsConfig{0.0, 0.99}), std::invalid_argument);
}

TEST_CASE("restricted_statistic: spec points") {
    KsConfig ks{0.01, 0.99};
    std::vector<double> outside{0.995};
    CHECK(restricted_statistic(outside, ks) == 1.0);

    std::vector<double> half{0.5};
    CHECK(restricted_statistic(half, ks) == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<double> diagonal;
    const std::size_t n = 50;
    for (std::size_t i = 1; i <= n; ++i) diagonal.push_back(static_cast<double>(i) / static_cast<double>(n));
    CHECK(restricted_statistic(diagonal, ks) == doctest::Approx(1.0));
}

TEST_CASE("diagnostic statistics grow when evidence shifts the sample down") {
    auto engine = make_engine(RngSeed{227});
    KsConfig ks{0.01, 0.99};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> u(40);
        for (double& x : u) x = 0.05 + 0.9 * uniform_open01(engine);
        std::sort(u.begin(), u.end());
        std::vector<double> shifted = u;
        for (double& x : shifted) x *= 0.7;

        CHECK(weighted_ks_plus(shifted, ks) >= weighted_ks_plus(u, ks) - 1e-12);
        CHECK(restricted_statistic(shifted, ks) >= restricted_statistic(u, ks) - 1e-12);
    }
}

TEST_CASE("ks_two_sample: identical and disjoint samples") {
    std::vector<double> a{0.1, 0.2, 0.3};
    CHECK(ks_two_sample(a, a) == doctest::Approx(0.0));
    std::vector<double> b{1.1, 1.2, 1.3};
    CHECK(ks_two_sample(a, b) == doctest::Approx(1.0));
}

TEST_CASE("kolmogorov_critical: classic asymptotic constants") {
    CHECK(kolmogorov_critical(0.05, 10000) == doctest::Approx(1.3581 / 100.0).epsilon(1e-3));
    CHECK(kolmogorov_critical(0.01, 10000) == doctest::Approx(1.6276 / 100.0).epsilon(1e-3));
}
