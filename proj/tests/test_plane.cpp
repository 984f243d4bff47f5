// Unit tests for the physical-plane evaluations: u, ∇u, the normalized
// p-Laplacian residual, the leading profile 𝔘 and the singular gap.
//
// Oracles: pull-back consistency u(H(ξ)) = ũ(ξ), central finite
// differences for ∇u, Richardson slopes in the stencil step for the
// residual, and log-log decay fits for the gap.

#include "pharmonic/amvp.hpp"
#include "pharmonic/plane.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace pharmonic;

namespace {

HodographModel identity_model() {
    return make_model({{2.0, 1}, {{2, {1.0, 0.0}}}});
}

HodographModel p3_single() {
    return make_model({{3.0, 1}, {{2, {1.0, 0.0}}}});
}

HodographModel p3_two_term() {
    return make_model({{3.0, 1}, {{2, {1.0, 0.0}}, {3, {0.05, 0.0}}}});
}

}  // namespace

TEST_CASE("eval_u identity model is Re(z^2)") {
    auto m = identity_model();
    CHECK(eval_u(m, {0.0, 0.0}) == 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int i = 0; i < 50; ++i) {
        const Complex z{u(rng), u(rng)};
        CHECK(eval_u(m, z) ==
              Catch::Approx(std::real(z * z)).margin(1e-12));
    }
}

TEST_CASE("pull-back identity u(H(ξ)) = ũ(ξ)") {
    for (auto& m : {p3_single(), p3_two_term(),
                    make_model({{12.0, 2}, {{3, {0.6, -0.8}}, {5, {0.0, 0.05}}}})}) {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> ur(0.02, 0.9), ut(0.0, two_pi);
        for (int i = 0; i < 300; ++i) {
            const PolarPoint xi{ur(rng) * m.validity_radius, ut(rng)};
            const Complex z = eval_H(m, xi);
            const double want = eval_u_tilde(m, xi);
            CAPTURE(m.p(), m.n(), xi.r, xi.theta);
            REQUIRE(eval_u(m, z) == Catch::Approx(want).margin(1e-9 * (1.0 + std::abs(want))));
        }
    }
}

TEST_CASE("grad_u identity model and critical point") {
    auto m = identity_model();
    auto g0 = grad_u(m, {0.0, 0.0});
    CHECK(g0.first == 0.0);
    CHECK(g0.second == 0.0);
    for (Complex z : {Complex{0.3, 0.1}, Complex{-0.2, 0.4}, Complex{0.05, -0.3}}) {
        auto [gx, gy] = grad_u(m, z);
        CHECK(gx == Catch::Approx(2.0 * z.real()).margin(1e-12));
        CHECK(gy == Catch::Approx(-2.0 * z.imag()).margin(1e-12));
        CHECK(gx * gx + gy * gy > 0.0);
    }
}

TEST_CASE("grad_u matches central finite differences of eval_u") {
    for (auto& m : {p3_single(), p3_two_term()}) {
        const double zr = 0.3 * certified_plane_radius(m);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> ut(0.0, two_pi),
            us(0.3, 1.0);
        for (int i = 0; i < 30; ++i) {
            const Complex z = std::polar(zr * us(rng), ut(rng));
            const double h = 1e-5 * std::abs(z);
            const double fx = (eval_u(m, z + Complex{h, 0.0}) -
                               eval_u(m, z - Complex{h, 0.0})) / (2.0 * h);
            const double fy = (eval_u(m, z + Complex{0.0, h}) -
                               eval_u(m, z - Complex{0.0, h})) / (2.0 * h);
            auto [gx, gy] = grad_u(m, z);
            const double scale = std::hypot(gx, gy);
            CAPTURE(m.p(), z.real(), z.imag());
            REQUIRE(std::abs(fx - gx) < 1e-6 * scale);
            REQUIRE(std::abs(fy - gy) < 1e-6 * scale);
        }
    }
}

TEST_CASE("p-Laplacian residual vanishes on diagonals of Re(z^2) for any p") {
    // Δu = 0 and, on x = ±y, Δ_∞u = 8(x²−y²) = 0, so the bracket vanishes
    // for every p.
    auto m = identity_model();
    for (double p : {2.0, 3.0, 7.5}) {
        for (double t : {0.2, 0.35}) {
            const Complex z{t, t};
            const double res = plaplacian_residual(m, z, 1e-3 * t, p);
            CHECK(std::abs(res) < 1e-6);
        }
    }
}

TEST_CASE("p-Laplacian residual: Richardson slope ~ 2 for matching p") {
    for (auto& m : {p3_single(), p3_two_term(),
                    make_model({{1.5, 1}, {{2, {1.0, 0.0}}}})}) {
        const double zr = 0.3 * certified_plane_radius(m);
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> ut(0.0, two_pi);
        for (int i = 0; i < 4; ++i) {
            const Complex z = std::polar(zr, ut(rng));
            std::vector<double> hs, rs;
            for (double c : {1e-2, 5e-3, 2.5e-3}) {
                hs.push_back(c * std::abs(z));
                rs.push_back(std::abs(plaplacian_residual(m, z, hs.back())));
            }
            const DecayFit fit = decay_fit(hs, rs);
            CAPTURE(m.p(), z.real(), z.imag(), rs[0], rs[2]);
            REQUIRE(fit.slope >= 1.8);
        }
    }
}

TEST_CASE("p-Laplacian residual: wrong operator does not vanish") {
    auto m = p3_single();
    const double zr = 0.3 * certified_plane_radius(m);
    const Complex z = std::polar(zr, 0.9);
    std::vector<double> rs;
    for (double c : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
        rs.push_back(std::abs(plaplacian_residual(m, z, c * std::abs(z), 5.0)));
    }
    // residuals settle on a nonzero limit instead of decaying
    CHECK(rs.back() > 0.5 * rs.front());
    CHECK(rs.back() > 1e-3);
}

TEST_CASE("p-Laplacian residual input gates") {
    auto m = p3_single();
    CHECK_THROWS_AS(plaplacian_residual(m, {0.3, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(plaplacian_residual(m, {1e-4, 0.0}, 1e-3), std::domain_error);
}

TEST_CASE("eval_U basics") {
    auto id = identity_model();
    CHECK(eval_U(id, {0.0, 0.0}) == 0.0);
    for (Complex z : {Complex{0.25, 0.1}, Complex{-0.3, 0.2}}) {
        CHECK(eval_U(id, z) == Catch::Approx(std::real(z * z)).margin(1e-12));
    }
    // single-term model: u = 𝔘 pointwise
    auto m = p3_single();
    const double zr = 0.5 * certified_plane_radius(m);
    for (double th : {0.0, 0.8, 2.4, 4.1}) {
        const Complex z = std::polar(zr, th);
        CHECK(eval_U(m, z) == Catch::Approx(eval_u(m, z)).margin(1e-10));
    }
}

TEST_CASE("singular gap: single-term models collapse onto 𝔘") {
    auto m = p3_single();
    const double zr = 0.4 * certified_plane_radius(m);
    for (double th : {0.3, 1.9, 5.0}) {
        CHECK(singular_gap(m, std::polar(zr, th)) < 1e-10);
    }
}

TEST_CASE("singular gap decays at the spectral-gap rate") {
    struct Case {
        HodographModel m;
        double target;
    };
    // targets = (n + λ_{n+2})/λ_{n+1} from the closed forms
    std::vector<Case> cases;
    cases.push_back({make_model({{2.0, 1}, {{2, {1.0, 0.0}}, {3, {0.1, 0.0}}}}),
                     exponent_ratio({2.0, 1})});
    cases.push_back({p3_two_term(), exponent_ratio({3.0, 1})});
    for (auto& c : cases) {
        const double r0 = 0.3 * certified_plane_radius(c.m);
        std::vector<double> radii, gaps;
        for (int j = 0; j <= 8; ++j) {
            const double r = r0 * std::pow(2.0, -j);
            double g = 0.0;
            for (int a = 0; a < 16; ++a)
                g = std::max(g, singular_gap(c.m, std::polar(r, two_pi * a / 16.0)));
            radii.push_back(r);
            gaps.push_back(g);
        }
        const DecayFit fit = decay_fit(radii, gaps);
        CAPTURE(c.m.p(), c.target, fit.slope, fit.r_squared);
        REQUIRE(fit.slope >= c.target - 0.1);
        REQUIRE(fit.r_squared > 0.99);
    }
}

TEST_CASE("certified_plane_radius is inside the image") {
    auto m = p3_two_term();
    const double rz = certified_plane_radius(m);
    CHECK(rz > 0.0);
    // every point of the disc |z| ≤ rz must invert
    for (double f : {0.2, 0.7, 1.0}) {
        for (double th : {0.0, 1.1, 3.3, 5.2}) {
            const PolarPoint xi = invert_H(m, std::polar(rz * f, th));
            CHECK(xi.r <= m.validity_radius * (1.0 + 1e-9));
        }
    }
}
