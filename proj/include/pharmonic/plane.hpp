/*
 * plane.hpp — the p-harmonic function u in physical coordinates.
 *
 * With ξ = H⁻¹(z):
 *
 *   u(z)  = ũ(ξ),            u(0) = 0
 *   ∇u(z) = ( 2rⁿ cos nθ, −2rⁿ sin nθ ),   ξ = re^{iθ}
 *
 * so ∇u vanishes only at z = 0, a critical point of multiplicity n.  The
 * comparison function pushes the leading potential through the first-term
 * map instead:
 *
 *   𝔘(z) = 𝔘̃(𝔄⁻¹(z)),
 *
 * and singular_gap(z) = |u(z) − 𝔘(z)| measures how fast u collapses onto
 * its leading singular profile near the critical point.
 *
 * plaplacian_residual evaluates, by central finite differences of step h,
 * the normalized second-order combination
 *
 *   (p−2) Δ_∞u / |∇u|²  +  Δu,       Δ_∞u = Σ u_{x_i x_j} u_{x_i} u_{x_j},
 *
 * which vanishes exactly where u is p-harmonic and ∇u ≠ 0.  The |∇u|^{p−2}
 * prefactor is divided out so tolerances stay scale-free near the critical
 * point.
 */

#pragma once

#include "pharmonic/hodograph.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace pharmonic {

// u(z) = ũ(H⁻¹(z)); propagates inversion failures.
inline double eval_u(const HodographModel& model, Complex z) {
    if (z == Complex{0.0, 0.0}) return 0.0;
    return eval_u_tilde(model, invert_H(model, z));
}

// ∇u(z) from the hodographic coordinates of z.
inline std::pair<double, double> grad_u(const HodographModel& model, Complex z) {
    if (z == Complex{0.0, 0.0}) return {0.0, 0.0};
    const PolarPoint xi = invert_H(model, z);
    const double rn = 2.0 * std::pow(xi.r, model.n());
    return {rn * std::cos(model.n() * xi.theta),
            -rn * std::sin(model.n() * xi.theta)};
}

// 𝔘(z) = 𝔘̃(𝔄⁻¹(z)); total, since 𝔄 is a global homeomorphism.
inline double eval_U(const HodographModel& model, Complex z) {
    if (z == Complex{0.0, 0.0}) return 0.0;
    return eval_U_tilde(model, invert_A(model, z));
}

// |u(z) − 𝔘(z)|
inline double singular_gap(const HodographModel& model, Complex z) {
    return std::abs(eval_u(model, z) - eval_U(model, z));
}

// Normalized p-Laplacian residual (p−2)Δ_∞u/|∇u|² + Δu at z, second
// derivatives by central differences of step h, gradient analytic.  The
// 5-point stencil of radius h (2h on the diagonal pairs) must avoid the
// critical point, where u is only C^{1,α}.
inline double plaplacian_residual(const HodographModel& model, Complex z, double h,
                                  std::optional<double> p_operator = {}) {
    if (!(h > 0.0)) throw std::invalid_argument("plaplacian_residual: h must be > 0");
    if (std::abs(z) <= 2.0 * h * std::numbers::sqrt2)
        throw std::domain_error(
            "plaplacian_residual: stencil would straddle the critical point");
    const double p = p_operator.value_or(model.p());

    const auto [ux, uy] = grad_u(model, z);
    const double grad_sq = ux * ux + uy * uy;
    if (grad_sq == 0.0)
        throw std::domain_error("plaplacian_residual: gradient vanishes at z");

    const Complex ex{h, 0.0}, ey{0.0, h};
    const double u0 = eval_u(model, z);
    const double uxx = (eval_u(model, z + ex) - 2.0 * u0 + eval_u(model, z - ex)) /
                       (h * h);
    const double uyy = (eval_u(model, z + ey) - 2.0 * u0 + eval_u(model, z - ey)) /
                       (h * h);
    const double uxy = (eval_u(model, z + ex + ey) - eval_u(model, z + ex - ey) -
                        eval_u(model, z - ex + ey) + eval_u(model, z - ex - ey)) /
                       (4.0 * h * h);

    const double inf_lap = uxx * ux * ux + 2.0 * uxy * ux * uy + uyy * uy * uy;
    return (p - 2.0) * inf_lap / grad_sq + (uxx + uyy);
}

// Radius of a z-plane disc guaranteed inside the image of the certified
// hodographic region: min |H| over the boundary circle, with a safety
// factor.
inline double certified_plane_radius(const HodographModel& model,
                                     int angles = 1024, double safety = 0.95) {
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < angles; ++i) {
        const double th = two_pi * i / angles;
        min_abs = std::min(min_abs, std::abs(detail::eval_h_raw(
                                        model, model.validity_radius, th)));
    }
    return safety * min_abs;
}

}  // namespace pharmonic
