/*
 * hodograph.hpp — the hodographic series map H, its potential ũ, the
 * first-term map 𝔄, and their inverses.
 *
 * A finite coefficient list {A_k}, k ≥ n+1 with A_{n+1} ≠ 0, defines
 *
 *   H(re^{iθ})  = e^{−inθ} Σ_k r^{λ_k} ( A_k e^{ikθ} + ε_k Ā_k e^{−ikθ} )
 *   ũ(re^{iθ})  = 4 Σ_k μ_k r^{n+λ_k} Re( A_k e^{ikθ} )
 *
 * H maps the hodographic ξ-plane to the physical z-plane; ũ = u∘H is the
 * potential in hodographic coordinates, normalized by u(0) = 0.  The first
 * term of H,
 *
 *   𝔄(re^{iθ}) = r^λ ( A e^{iθ} + ε Ā e^{−i(2n+1)θ} ),   λ = λ_{n+1}, …
 *
 * is a global homeomorphism of the plane whenever |ε| < 1/(2n+1).  Writing
 * A = |A| e^{iφ}, the rotation identity
 *
 *   𝔄(ξ e^{−iφ/(n+1)}) = |A| e^{iφn/(n+1)} 𝔄₁(ξ)
 *
 * reduces inversion to the unit-coefficient map 𝔄₁, which in polar form is
 * r^λ m(θ) e^{i f(θ)} with
 *
 *   m(θ) = √(1 + ε² + 2ε cos 2(n+1)θ)
 *   f(θ) = θ + arg(1 + ε e^{−i2(n+1)θ}),   f(0) = 0, f(2π) = 2π.
 *
 * invert_A solves f(θ) = arg(w) by a precomputed 4096-point scan of f plus
 * bisection, then recovers r from r^λ m(θ) = |w|.  invert_H runs a damped
 * Newton iteration on (r, θ) seeded at 𝔄⁻¹(z).
 *
 * A model's validity_radius is calibrated by scanning a dense polar grid
 * for (a) positivity of the Jacobian of H and (b) first-term dominance
 *
 *   Σ_{k≥n+2} |A_k| r^{λ_k}  ≤  ½ |A_{n+1}| (1 − |ε_{n+1}|) r^{λ_{n+1}},
 *
 * which keeps the 𝔄⁻¹ Newton seed in the basin of attraction.
 */

#pragma once

#include "pharmonic/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pharmonic {

using Complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2π).
inline double reduce_angle(double theta) {
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    if (t == two_pi) t = 0.0;
    return t;
}

// Point of the hodographic plane, modulus + angle in [0, 2π).
struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;
};

inline PolarPoint to_polar(Complex xi) {
    const double r = std::abs(xi);
    return {r, r == 0.0 ? 0.0 : reduce_angle(std::arg(xi))};
}

inline Complex to_complex(const PolarPoint& pt) {
    return std::polar(pt.r, pt.theta);
}

struct Coefficient {
    int k = 0;
    Complex a{0.0, 0.0};
};

// Finite coefficient list defining one p-harmonic function.  Must contain
// the leading index k = n+1 with a nonzero coefficient.
struct CoefficientSet {
    ProblemParams params;
    std::vector<Coefficient> coeffs;

    void validate() const {
        params.validate();
        if (coeffs.empty())
            throw std::invalid_argument("CoefficientSet: empty coefficient list");
        bool lead_found = false;
        for (size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i].k < params.n + 1)
                throw std::invalid_argument("CoefficientSet: index k=" +
                                            std::to_string(coeffs[i].k) +
                                            " below n+1");
            for (size_t j = i + 1; j < coeffs.size(); ++j)
                if (coeffs[i].k == coeffs[j].k)
                    throw std::invalid_argument("CoefficientSet: duplicate index k=" +
                                                std::to_string(coeffs[i].k));
            if (coeffs[i].k == params.n + 1 && std::abs(coeffs[i].a) != 0.0)
                lead_found = true;
        }
        if (!lead_found)
            throw std::invalid_argument(
                "CoefficientSet: leading coefficient A_{n+1} missing or zero");
    }

    // Σ k |A_k|², recorded for diagnostics.
    double weighted_norm() const {
        double s = 0.0;
        for (const auto& c : coeffs) s += c.k * std::norm(c.a);
        return s;
    }
};

// Thrown when a series inversion fails; carries the last iterate.
struct InversionError : std::runtime_error {
    PolarPoint last_iterate;
    double residual = 0.0;
    bool outside_certified = false;

    InversionError(const std::string& what, PolarPoint last, double res, bool outside)
        : std::runtime_error(what), last_iterate(last), residual(res),
          outside_certified(outside) {}
};

namespace detail {
constexpr int kThetaScanPoints = 4096;   // f-scan resolution for 𝔄⁻¹
constexpr double kScanRadiusMax = 1.0;   // upper bound of the calibration scan
constexpr int kRadiiPerDecade = 64;
constexpr int kScanAngles = 512;
constexpr double kScanRadiusMin = 1e-6;
}  // namespace detail

// Immutable evaluation model: coefficient set, aligned spectral triples,
// certified radius, and the precomputed f-scan used by invert_A.
struct HodographModel {
    CoefficientSet cs;
    std::vector<SpectralTriple> spectral;  // aligned with cs.coeffs
    double validity_radius = 0.0;

    // first-term shortcuts (k = n+1)
    double lambda1 = 0.0, epsilon1 = 0.0, mu1 = 0.0;
    Complex a1{0.0, 0.0};

    // f(θ_i) on θ_i = 2πi/4096, i = 0..4096 (reduced frame)
    std::vector<double> f_table;

    int n() const { return cs.params.n; }
    double p() const { return cs.params.p; }
};

// m(θ) = |1 + ε e^{−i2(n+1)θ}|, reduced-frame modulus factor of 𝔄₁.
inline double m_theta(const HodographModel& model, double theta) {
    const double c = std::cos(2.0 * (model.n() + 1) * theta);
    const double e = model.epsilon1;
    return std::sqrt(1.0 + e * e + 2.0 * e * c);
}

// f(θ) = θ + arg(1 + ε e^{−i2(n+1)θ}), the argument of 𝔄₁(re^{iθ}).
// Strictly increasing when |ε| < 1/(2n+1); f(0) = 0, f(2π) = 2π.
inline double f_theta(const HodographModel& model, double theta) {
    const double psi = 2.0 * (model.n() + 1) * theta;
    const double e = model.epsilon1;
    return theta + std::atan2(-e * std::sin(psi), 1.0 + e * std::cos(psi));
}

// j(θ) = 1 − (2n+1)ε² − 2nε cos(2(n+1)θ), the angular Jacobian factor of
// 𝔄₁; positive whenever |ε| < 1/(2n+1).
inline double j_theta(const HodographModel& model, double theta) {
    const double e = model.epsilon1;
    const int n = model.n();
    return 1.0 - (2.0 * n + 1.0) * e * e -
           2.0 * n * e * std::cos(2.0 * (n + 1) * theta);
}

namespace detail {

// Series evaluation without the validity-radius gate; summation runs in
// ascending k so results are bit-reproducible.
inline Complex eval_h_raw(const HodographModel& m, double r, double theta) {
    if (r == 0.0) return {0.0, 0.0};
    Complex sum{0.0, 0.0};
    for (size_t i = 0; i < m.spectral.size(); ++i) {
        const auto& t = m.spectral[i];
        const Complex a = m.cs.coeffs[i].a;
        const Complex phi = a * std::polar(1.0, t.k * theta) +
                            t.epsilon * std::conj(a) * std::polar(1.0, -t.k * theta);
        sum += std::pow(r, t.lambda) * phi;
    }
    return std::polar(1.0, -m.n() * theta) * sum;
}

inline std::pair<Complex, Complex> eval_h_partials_raw(const HodographModel& m,
                                                       double r, double theta) {
    Complex dr{0.0, 0.0}, dt{0.0, 0.0};
    const int n = m.n();
    for (size_t i = 0; i < m.spectral.size(); ++i) {
        const auto& t = m.spectral[i];
        const Complex a = m.cs.coeffs[i].a;
        const Complex ep = std::polar(1.0, t.k * theta);
        const Complex term_pos = a * ep;
        const Complex term_neg = t.epsilon * std::conj(a) * std::conj(ep);
        dr += t.lambda * std::pow(r, t.lambda - 1.0) * (term_pos + term_neg);
        dt += std::pow(r, t.lambda) *
              (Complex(0.0, t.k - n) * term_pos - Complex(0.0, t.k + n) * term_neg);
    }
    const Complex rot = std::polar(1.0, -n * theta);
    return {rot * dr, rot * dt};
}

inline void check_radius(const HodographModel& m, double r, const char* who) {
    if (r > m.validity_radius * (1.0 + 1e-9))
        throw std::domain_error(std::string(who) + ": r=" + std::to_string(r) +
                                " outside certified radius " +
                                std::to_string(m.validity_radius));
}

}  // namespace detail

// H(ξ) for ξ inside the certified radius; H(0) = 0.
inline Complex eval_H(const HodographModel& model, const PolarPoint& xi) {
    detail::check_radius(model, xi.r, "eval_H");
    return detail::eval_h_raw(model, xi.r, xi.theta);
}

// (∂H/∂r, ∂H/∂θ) by term-wise differentiation; r = 0 is excluded because
// r^{λ−1} is singular when λ_{n+1} < 1.
inline std::pair<Complex, Complex> eval_H_partials(const HodographModel& model,
                                                   const PolarPoint& xi) {
    detail::check_radius(model, xi.r, "eval_H_partials");
    if (xi.r <= 0.0)
        throw std::domain_error("eval_H_partials: r must be positive");
    return detail::eval_h_partials_raw(model, xi.r, xi.theta);
}

// Determinant of the real differential of H at ξ (Cartesian ξ-coordinates):
// (1/r) Im( conj(H_r) H_θ ).
inline double jacobian_H(const HodographModel& model, const PolarPoint& xi) {
    auto [hr, ht] = eval_H_partials(model, xi);
    return std::imag(std::conj(hr) * ht) / xi.r;
}

// ũ(ξ) = 4 Σ μ_k r^{n+λ_k} Re(A_k e^{ikθ}); ũ(0) = 0.
inline double eval_u_tilde(const HodographModel& model, const PolarPoint& xi) {
    detail::check_radius(model, xi.r, "eval_u_tilde");
    if (xi.r == 0.0) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < model.spectral.size(); ++i) {
        const auto& t = model.spectral[i];
        const Complex a = model.cs.coeffs[i].a;
        sum += 4.0 * t.mu * std::pow(xi.r, model.n() + t.lambda) *
               std::real(a * std::polar(1.0, t.k * xi.theta));
    }
    return sum;
}

// First term of H: 𝔄(re^{iθ}) = r^λ ( A e^{iθ} + ε Ā e^{−i(2n+1)θ} ).
// Defined on the whole plane; 𝔄(0) = 0.
inline Complex eval_A(const HodographModel& model, const PolarPoint& xi) {
    if (xi.r == 0.0) return {0.0, 0.0};
    const int n = model.n();
    return std::pow(xi.r, model.lambda1) *
           (model.a1 * std::polar(1.0, xi.theta) +
            model.epsilon1 * std::conj(model.a1) *
                std::polar(1.0, -(2.0 * n + 1.0) * xi.theta));
}

// |Jacobian| of 𝔄: |A|² λ r^{2(λ−1)} j(θ + φ/(n+1)) with φ = arg A.
inline double jacobian_A(const HodographModel& model, const PolarPoint& xi) {
    const double lambda = model.lambda1;
    if (xi.r == 0.0 && lambda < 1.0)
        throw std::domain_error("jacobian_A: r = 0 is singular for lambda < 1");
    const double phase = std::arg(model.a1) / (model.n() + 1);
    return std::norm(model.a1) * lambda * std::pow(xi.r, 2.0 * (lambda - 1.0)) *
           j_theta(model, xi.theta + phase);
}

// 𝔘̃(ξ) = 4 μ |ξ|^{n+λ} Re( A (ξ/|ξ|)^{n+1} ), the first term of ũ.
inline double eval_U_tilde(const HodographModel& model, const PolarPoint& xi) {
    if (xi.r == 0.0) return 0.0;
    return 4.0 * model.mu1 * std::pow(xi.r, model.n() + model.lambda1) *
           std::real(model.a1 * std::polar(1.0, (model.n() + 1) * xi.theta));
}

// 𝔄⁻¹(w).  Reduces to the unit-coefficient frame, locates every bracket of
// f(θ) = arg(w) in the precomputed scan, bisects each, and keeps the root
// whose image lies closest to w.
inline PolarPoint invert_A(const HodographModel& model, Complex w) {
    if (w == Complex{0.0, 0.0}) return {0.0, 0.0};

    const int n = model.n();
    const double abs_a = std::abs(model.a1);
    const double phi = std::arg(model.a1);
    // reduced-frame target
    const Complex wr = w * std::polar(1.0 / abs_a, -phi * n / (n + 1.0));
    const double s = std::abs(wr);
    const double t = reduce_angle(std::arg(wr));

    const int N = detail::kThetaScanPoints;
    const double step = two_pi / N;
    std::vector<double> roots;
    for (double shift : {0.0, -two_pi, two_pi}) {
        const double target = t + shift;
        for (int i = 0; i < N; ++i) {
            const double ga = model.f_table[i] - target;
            const double gb = model.f_table[i + 1] - target;
            if (ga == 0.0) {
                roots.push_back(i * step);
                continue;
            }
            if (ga * gb < 0.0) {
                double lo = i * step, hi = (i + 1) * step;
                double glo = ga;
                for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = f_theta(model, mid) - target;
                    if (gm == 0.0) { lo = hi = mid; break; }
                    if (glo * gm < 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                        glo = gm;
                    }
                }
                roots.push_back(0.5 * (lo + hi));
            }
        }
        if (model.f_table[N] == t + shift) roots.push_back(two_pi);
    }
    if (roots.empty())
        throw InversionError("invert_A: no bracket found for target angle", {s, t},
                             s, false);

    PolarPoint best{0.0, 0.0};
    double best_err = std::numeric_limits<double>::infinity();
    for (double theta : roots) {
        const double r = std::pow(s / m_theta(model, theta), 1.0 / model.lambda1);
        PolarPoint cand{r, reduce_angle(theta - phi / (n + 1.0))};
        const double err = std::abs(eval_A(model, cand) - w);
        if (err < best_err) {
            best_err = err;
            best = cand;
        }
    }
    return best;
}

// H⁻¹(z) by damped Newton on (r, θ), seeded at 𝔄⁻¹(z).  Converges inside
// the certified region where first-term dominance holds; failure carries
// the last iterate.
inline PolarPoint invert_H(const HodographModel& model, Complex z) {
    if (z == Complex{0.0, 0.0}) return {0.0, 0.0};

    const PolarPoint seed = invert_A(model, z);
    const double tol = 1e-13 * std::max(std::abs(z), 1e-30);

    double r = seed.r, theta = seed.theta;
    Complex res = detail::eval_h_raw(model, r, theta) - z;
    double err = std::abs(res);
    constexpr int max_iters = 50;
    for (int iter = 0; iter < max_iters; ++iter) {
        if (err <= tol) {
            PolarPoint xi{r, reduce_angle(theta)};
            if (xi.r > model.validity_radius * (1.0 + 1e-9))
                throw InversionError("invert_H: preimage outside certified radius",
                                     xi, err, true);
            return xi;
        }
        auto [hr, ht] = detail::eval_h_partials_raw(model, r, theta);
        const double det = std::imag(std::conj(hr) * ht);
        const double det_scale = std::norm(hr) + std::norm(ht);
        if (!std::isfinite(det) || std::abs(det) <= 1e-14 * det_scale)
            throw InversionError("invert_H: near-singular differential",
                                 {r, reduce_angle(theta)}, err, true);
        // solve [Re hr, Re ht; Im hr, Im ht] (dr, dθ) = −res
        const double dr = -(std::real(res) * std::imag(ht) -
                            std::imag(res) * std::real(ht)) / det;
        const double dt = -(std::real(hr) * std::imag(res) -
                            std::imag(hr) * std::real(res)) / det;

        double step = 1.0;
        bool accepted = false;
        for (int halve = 0; halve < 40; ++halve) {
            const double rn = r + step * dr;
            const double tn = theta + step * dt;
            if (rn > 0.0) {
                const Complex rn_res = detail::eval_h_raw(model, rn, tn) - z;
                const double en = std::abs(rn_res);
                if (en < err) {
                    r = rn;
                    theta = tn;
                    res = rn_res;
                    err = en;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break;  // stagnated below damping resolution
    }
    if (err <= 1e-11 * std::max(std::abs(z), 1e-30)) {
        PolarPoint xi{r, reduce_angle(theta)};
        if (xi.r <= model.validity_radius * (1.0 + 1e-9)) return xi;
        throw InversionError("invert_H: preimage outside certified radius", xi, err,
                             true);
    }
    throw InversionError("invert_H: no convergence after max iterations",
                         {r, reduce_angle(theta)}, err, false);
}

namespace detail {

inline HodographModel build_uncalibrated(CoefficientSet cs) {
    cs.validate();
    std::sort(cs.coeffs.begin(), cs.coeffs.end(),
              [](const Coefficient& a, const Coefficient& b) { return a.k < b.k; });
    HodographModel m;
    m.cs = std::move(cs);
    for (const auto& c : m.cs.coeffs)
        m.spectral.push_back(spectral_triple(m.cs.params, c.k));
    const auto& lead = m.spectral.front();
    m.lambda1 = lead.lambda;
    m.epsilon1 = lead.epsilon;
    m.mu1 = lead.mu;
    m.a1 = m.cs.coeffs.front().a;
    m.validity_radius = kScanRadiusMax;

    m.f_table.resize(kThetaScanPoints + 1);
    for (int i = 0; i <= kThetaScanPoints; ++i)
        m.f_table[i] = f_theta(m, two_pi * i / kThetaScanPoints);
    m.f_table[kThetaScanPoints] = two_pi;  // exact by periodicity
    return m;
}

}  // namespace detail

// Largest scanned radius R such that on the whole grid {0 < r ≤ R} the
// Jacobian of H is positive and the k ≥ n+2 tail is dominated by half the
// worst-case first term.  Throws if even the smallest radius fails.
inline double calibrate_radius(const CoefficientSet& coeffset) {
    HodographModel m = detail::build_uncalibrated(coeffset);
    const double dom_rhs_factor = 0.5 * std::abs(m.a1) * (1.0 - std::abs(m.epsilon1));

    const int decades = static_cast<int>(std::round(
        std::log10(detail::kScanRadiusMax / detail::kScanRadiusMin)));
    const int nrad = decades * detail::kRadiiPerDecade;
    double certified = 0.0;
    for (int i = 0; i <= nrad; ++i) {
        const double r = detail::kScanRadiusMin *
                         std::pow(10.0, static_cast<double>(i) / detail::kRadiiPerDecade);
        double tail = 0.0;
        for (size_t j = 1; j < m.spectral.size(); ++j)
            tail += std::abs(m.cs.coeffs[j].a) * std::pow(r, m.spectral[j].lambda);
        if (tail > dom_rhs_factor * std::pow(r, m.lambda1)) break;

        bool jac_positive = true;
        for (int a = 0; a < detail::kScanAngles; ++a) {
            const double theta = two_pi * a / detail::kScanAngles;
            auto [hr, ht] = detail::eval_h_partials_raw(m, r, theta);
            if (!(std::imag(std::conj(hr) * ht) > 0.0)) {
                jac_positive = false;
                break;
            }
        }
        if (!jac_positive) break;
        certified = r;
    }
    if (certified == 0.0)
        throw std::runtime_error(
            "calibrate_radius: no admissible radius in the scan range");
    return certified;
}

// Build an immutable model; the certified radius comes from the scan unless
// an explicit override is supplied.
inline HodographModel make_model(CoefficientSet cs,
                                 std::optional<double> radius_override = {}) {
    HodographModel m = detail::build_uncalibrated(std::move(cs));
    m.validity_radius = radius_override ? *radius_override
                                        : calibrate_radius(m.cs);
    return m;
}

}  // namespace pharmonic
