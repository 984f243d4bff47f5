// Unit tests for the exponent/coupling closed forms.
//
// Oracle: the same closed forms evaluated in long double (extended
// precision), kept local to this file.  Frozen constants below were
// produced with 30-digit arithmetic from the λ/ε/μ definitions.

#include "pharmonic/spectral.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace pharmonic;

namespace {

struct OracleTriple {
    long double lambda, epsilon, mu;
};

// Extended-precision evaluation of the closed forms; independent of the
// library's double path only in precision, which is the point: it pins
// the rounding of the double result.
OracleTriple oracle_triple(long double p, long double n, long double k) {
    const long double disc =
        4.0L * k * k * (p - 1.0L) + n * n * (p - 2.0L) * (p - 2.0L);
    const long double lam = 0.5L * (std::sqrt(disc) - n * p);
    return {lam, (lam + n - k) / (lam + n + k), lam / (lam + n + k)};
}

}  // namespace

TEST_CASE("spectral_triple closed forms at p=2 collapse") {
    // p=2: discriminant root is 2k, so λ_k = k−n, ε_k = 0, μ_k = (k−n)/2k.
    auto t = spectral_triple({2.0, 1}, 2);
    CHECK(t.lambda == Catch::Approx(1.0).margin(1e-15));
    CHECK(t.epsilon == Catch::Approx(0.0).margin(1e-15));
    CHECK(t.mu == Catch::Approx(0.25).margin(1e-15));
}

TEST_CASE("spectral_triple against extended-precision oracle") {
    // 30-digit reference values for (p=3, n=1):
    //   λ_2 = 1.37228132326901432992530573411
    //   ε_2 = 0.0851457844873237800497961772604
    //   μ_2 = 0.313859338365492835037347132945
    //   λ_3 = 2.77200187265876558393582416312
    auto t2 = spectral_triple({3.0, 1}, 2);
    CHECK(t2.lambda == Catch::Approx(1.37228132326901433).epsilon(1e-15));
    CHECK(t2.epsilon == Catch::Approx(0.08514578448732378).epsilon(1e-14));
    CHECK(t2.mu == Catch::Approx(0.31385933836549284).epsilon(1e-14));

    auto t3 = spectral_triple({3.0, 1}, 3);
    CHECK(t3.lambda == Catch::Approx(2.77200187265876558).epsilon(1e-15));

    for (double p : {1.0001, 1.5, 2.0, 3.0, 9.52, 12.0, 20.0, 100.0, 200.0}) {
        for (int n : {1, 2, 3, 7, 50}) {
            for (int k : {0, 1, 5, 59}) {
                const int idx = n + 1 + k;
                auto got = spectral_triple({p, n}, idx);
                auto want = oracle_triple(p, n, idx);
                // λ is a difference of same-sign terms; its double rounding
                // scales with np, not with λ itself.
                const double lambda_tol = 4e-16 * (n * p + std::abs(double(want.lambda)));
                CHECK(got.lambda ==
                      Catch::Approx(static_cast<double>(want.lambda)).margin(lambda_tol));
                CHECK(got.epsilon ==
                      Catch::Approx(static_cast<double>(want.epsilon)).margin(1e-13));
                CHECK(got.mu ==
                      Catch::Approx(static_cast<double>(want.mu)).margin(1e-13));
            }
        }
    }
}

TEST_CASE("spectral_triple rejects bad inputs") {
    CHECK_THROWS_AS(spectral_triple({3.0, 1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(spectral_triple({3.0, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(spectral_triple({1.0, 1}, 2), std::invalid_argument);
    CHECK_THROWS_AS(spectral_triple({0.5, 1}, 2), std::invalid_argument);
    CHECK_THROWS_AS(spectral_triple({2.0, 0}, 2), std::invalid_argument);
}

TEST_CASE("exponent_ratio examples") {
    CHECK(exponent_ratio({2.0, 1}) == Catch::Approx(3.0).margin(1e-14));
    // oracle: (1 + λ_3)/λ_2 at p=3 = 2.74870888986027794518801484173
    CHECK(exponent_ratio({3.0, 1}) == Catch::Approx(2.74870888986027795).epsilon(1e-14));
    // oracle: λ_2 = ½(√208−10), λ_3 = ½(√388−10) at p=10 → 2.64522231198249718
    CHECK(exponent_ratio({10.0, 1}) == Catch::Approx(2.64522231198249718).epsilon(1e-14));
}

TEST_CASE("cubic_n1 root and values") {
    CHECK(std::abs(cubic_n1(1.0)) < 1e-12);
    CHECK(cubic_n1(2.0) == Catch::Approx(45.0).margin(1e-12));
    CHECK(cubic_n1(1.5) == Catch::Approx(18.5).margin(1e-12));
}

TEST_CASE("amvp_weights") {
    auto w2 = amvp_weights(2.0);
    CHECK(w2.first == Catch::Approx(0.0).margin(1e-15));
    CHECK(w2.second == Catch::Approx(1.0).margin(1e-15));

    auto w6 = amvp_weights(6.0);
    CHECK(w6.first == Catch::Approx(0.5).margin(1e-15));
    CHECK(w6.second == Catch::Approx(0.5).margin(1e-15));

    // p = 9.52: (7.52/11.52, 4/11.52)
    auto w = amvp_weights(9.52);
    CHECK(w.first == Catch::Approx(0.652777777777778).epsilon(1e-14));
    CHECK(w.second == Catch::Approx(0.347222222222222).epsilon(1e-14));

    CHECK_THROWS_AS(amvp_weights(1.0), std::invalid_argument);
}

TEST_CASE("epsilon_margin") {
    CHECK(epsilon_margin({2.0, 1}) == Catch::Approx(1.0 / 3.0).margin(1e-15));
    // oracle: 1/3 − ε_2(p=3) = 0.248187548846009553
    CHECK(epsilon_margin({3.0, 1}) == Catch::Approx(0.24818754884600955).epsilon(1e-13));
    CHECK(epsilon_margin({100.0, 2}) > 0.0);
}

TEST_CASE("bounds hold on a (p, n, k) sweep") {
    // p covers both the p→1⁺ and the large-p regimes: 1 + 199·t with t
    // log-spaced over [1e−6, 1].
    std::vector<double> ps;
    for (int i = 0; i < 40; ++i)
        ps.push_back(1.0 + 199.0 * std::pow(10.0, -6.0 + 6.0 * i / 39.0));
    for (double p : ps) {
        for (int n : {1, 2, 5, 17, 50}) {
            ProblemParams params{p, n};
            double prev_lambda = 0.0;
            for (int k = n + 1; k <= n + 60; ++k) {
                auto t = spectral_triple(params, k);
                const double nn = n;
                CAPTURE(p, n, k, t.lambda, t.epsilon, t.mu);
                REQUIRE(t.lambda > 0.0);
                REQUIRE(t.lambda < (static_cast<double>(k) * k - nn * nn) / nn);
                REQUIRE(std::abs(t.epsilon) < (k - nn) / (k + nn));
                REQUIRE(t.mu >= 0.0);
                REQUIRE(t.mu < 1.0 - nn / k);
                REQUIRE(t.lambda > prev_lambda);  // λ_k strictly increasing
                prev_lambda = t.lambda;
            }
            // slope floor: (λ_k − λ_{n+2})/(k−(n+2)) stays away from 0
            const double l2 = spectral_triple(params, n + 2).lambda;
            double min_slope = std::numeric_limits<double>::infinity();
            for (int k = n + 3; k <= n + 60; ++k) {
                const double lk = spectral_triple(params, k).lambda;
                min_slope = std::min(min_slope, (lk - l2) / (k - (n + 2)));
            }
            CAPTURE(p, n, min_slope);
            REQUIRE(min_slope > 0.0);

            REQUIRE(exponent_ratio(params) > 2.0);
            REQUIRE(epsilon_margin(params) > 0.0);
        }
        REQUIRE(cubic_n1(p) > 0.0);
        auto w = amvp_weights(p);
        REQUIRE(w.first + w.second == Catch::Approx(1.0).margin(1e-15));
        REQUIRE(w.second > 0.0);
    }
}
