/*
 * amvp.hpp — disc statistics, mean-value residuals, decay-order fitting,
 * and the exact hodographic-disc quadrature.
 *
 * The mean value combination under test, for a scalar field u and weight α:
 *
 *   residual(x, r) = α·½(sup_{D(x,r)} u + inf_{D(x,r)} u)
 *                  + (1−α)·⨍_{D(x,r)} u  −  u(x)
 *
 * Disc means use Gauss–Legendre in the radial variable (with the polar
 * area weight) tensored with the uniform trapezoid rule in angle; sup/inf
 * come from dense polar sampling followed by local grid refinement around
 * every candidate extremal cell.
 *
 * decay_fit turns a residual-vs-radius series into a log-log least-squares
 * slope, dropping rungs below a caller-supplied noise floor.
 *
 * For the leading profile 𝔘 the disc statistics over D_R are available in
 * closed pulled-back form on the hodographic disc
 *
 *   D̃_R = { re^{iθ} : r < (R/m(θ))^{1/λ} },
 *
 * where both sup+inf and the integral vanish identically:
 *
 *   ∫_{D_R} 𝔘 = 4μλ ∫₀^{2π}∫₀^{r(θ)} r^{n+3λ−1} cos((n+1)θ) j(θ) dr dθ = 0
 *
 * by the half-period antisymmetry cos((n+1)(θ+π/(n+1))) = −cos((n+1)θ)
 * against the π/(n+1)-periodic m and j.
 */

#pragma once

#include "pharmonic/hodograph.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pharmonic {

using ScalarField = std::function<double(Complex)>;

// sup / inf / mean of a scalar field over one disc.
struct DiscStats {
    Complex center{0.0, 0.0};
    double radius = 0.0;
    double sup = 0.0;
    double inf = 0.0;
    double mean = 0.0;
};

// Fitted log-log decay line.
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
};

// Polar description of 𝔄⁻¹(D_R) for the reduced first-term map.
struct HodographicDisc {
    double R = 0.0;
    double lambda = 0.0;
    double epsilon = 0.0;
    int n = 1;

    // r(θ) = (R/m(θ))^{1/λ}; positive and 2π-periodic.
    double boundary(double theta) const {
        const double c = std::cos(2.0 * (n + 1) * theta);
        const double m = std::sqrt(1.0 + epsilon * epsilon + 2.0 * epsilon * c);
        return std::pow(R / m, 1.0 / lambda);
    }
};

inline HodographicDisc make_hodographic_disc(const HodographModel& model, double R) {
    return {R, model.lambda1, model.epsilon1, model.n()};
}

namespace detail {

// Gauss–Legendre nodes and weights on [-1, 1], Newton on the three-term
// recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            deriv = n * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / deriv;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * deriv * deriv);
    }
}

struct GridSeed {
    int i = 0, j = 0;
    double value = 0.0;
};

// Local grid refinement of an extremum candidate: shrink a polar box
// around the seed by 4x per round, re-sampling a 17x17 grid.
inline double refine_extremum(const ScalarField& f, Complex center, double radius,
                              double r0, double dr, double phi0, double dphi,
                              double best, bool maximize, int rounds) {
    double cr = r0, cphi = phi0, hr = dr, hphi = dphi;
    for (int round = 0; round < rounds; ++round) {
        double round_best_r = cr, round_best_phi = cphi;
        for (int a = 0; a <= 16; ++a) {
            const double rr = std::clamp(cr - hr + 2.0 * hr * a / 16.0, 0.0, radius);
            for (int b = 0; b <= 16; ++b) {
                const double phi = cphi - hphi + 2.0 * hphi * b / 16.0;
                const double v = f(center + std::polar(rr, phi));
                if (maximize ? v > best : v < best) {
                    best = v;
                    round_best_r = rr;
                    round_best_phi = phi;
                }
            }
        }
        cr = round_best_r;
        cphi = round_best_phi;
        hr /= 4.0;
        hphi /= 4.0;
    }
    return best;
}

}  // namespace detail

// Disc statistics: mean by radial Gauss–Legendre x angular trapezoid with
// the polar area weight; sup/inf by dense sampling plus local refinement.
// Evaluation failures abort with the offending point in the message.
inline DiscStats disc_stats(const ScalarField& f, Complex center, double radius,
                            int resolution, int refine_rounds = 3) {
    if (resolution < 16)
        throw std::invalid_argument("disc_stats: resolution must be >= 16");
    if (!(radius > 0.0))
        throw std::invalid_argument("disc_stats: radius must be > 0");

    const int n_rad = resolution;
    const int n_ang = 4 * resolution;
    Complex fail_point{0.0, 0.0};
    try {
        // mean: ∫∫ f(c + s e^{iφ}) s ds dφ / (π R²)
        std::vector<double> gx, gw;
        detail::gauss_legendre(n_rad, gx, gw);
        double integral = 0.0;
        for (int a = 0; a < n_ang; ++a) {
            const double phi = two_pi * a / n_ang;
            double radial = 0.0;
            for (int j = 0; j < n_rad; ++j) {
                const double s = radius * 0.5 * (gx[j] + 1.0);
                fail_point = center + std::polar(s, phi);
                radial += gw[j] * radius * 0.5 * s * f(fail_point);
            }
            integral += radial;
        }
        integral *= two_pi / n_ang;
        const double mean = integral / (std::numbers::pi * radius * radius);

        // sup/inf: uniform polar grid, then refine every strong candidate
        // cell (extremal sets can be curves or symmetric lobes).
        const int m_rad = resolution;
        const int m_ang = 4 * resolution;
        std::vector<double> vals((m_rad + 1) * m_ang);
        for (int i = 0; i <= m_rad; ++i) {
            const double s = radius * i / m_rad;
            for (int a = 0; a < m_ang; ++a) {
                fail_point = center + std::polar(s, two_pi * a / m_ang);
                vals[i * m_ang + a] = f(fail_point);
            }
        }
        auto top_seeds = [&](bool maximize) {
            std::vector<detail::GridSeed> seeds;
            for (int i = 0; i <= m_rad; ++i)
                for (int a = 0; a < m_ang; ++a)
                    seeds.push_back({i, a, vals[i * m_ang + a]});
            std::sort(seeds.begin(), seeds.end(),
                      [&](const detail::GridSeed& x, const detail::GridSeed& y) {
                          return maximize ? x.value > y.value : x.value < y.value;
                      });
            std::vector<detail::GridSeed> kept;
            for (const auto& s : seeds) {
                bool close = false;
                for (const auto& k : kept) {
                    const int dj = std::abs(s.j - k.j);
                    if (std::abs(s.i - k.i) <= 2 &&
                        std::min(dj, m_ang - dj) <= 2) {
                        close = true;
                        break;
                    }
                }
                if (!close) kept.push_back(s);
                if (kept.size() >= 6) break;
            }
            return kept;
        };
        const double dr = radius / m_rad;
        const double dphi = two_pi / m_ang;
        double sup = -std::numeric_limits<double>::infinity();
        for (const auto& s : top_seeds(true))
            sup = std::max(sup, detail::refine_extremum(
                                    f, center, radius, radius * s.i / m_rad, dr,
                                    dphi * s.j, dphi, s.value, true, refine_rounds));
        double inf = std::numeric_limits<double>::infinity();
        for (const auto& s : top_seeds(false))
            inf = std::min(inf, detail::refine_extremum(
                                    f, center, radius, radius * s.i / m_rad, dr,
                                    dphi * s.j, dphi, s.value, false, refine_rounds));

        return {center, radius, sup, inf, mean};
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "disc_stats: field evaluation failed at z = (" << fail_point.real()
           << ", " << fail_point.imag() << "): " << e.what();
        throw std::runtime_error(os.str());
    }
}

inline double amvp_residual_from_stats(const DiscStats& stats, double alpha,
                                       double center_value) {
    return alpha * 0.5 * (stats.sup + stats.inf) + (1.0 - alpha) * stats.mean -
           center_value;
}

// α·(sup+inf)/2 + (1−α)·mean − f(center)
inline double amvp_residual(const ScalarField& f, Complex center, double radius,
                            double alpha, int resolution = 64) {
    return amvp_residual_from_stats(disc_stats(f, center, radius, resolution),
                                    alpha, f(center));
}

// Least-squares line through (log r, log v); rungs at or below the noise
// floor are dropped.  Radii must be strictly decreasing and positive.
inline DecayFit decay_fit(std::span<const double> radii,
                          std::span<const double> values,
                          double noise_floor = 0.0) {
    if (radii.size() != values.size())
        throw std::invalid_argument("decay_fit: radii/values size mismatch");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0))
            throw std::invalid_argument("decay_fit: radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw std::invalid_argument("decay_fit: radii must be strictly decreasing");
        if (values[i] < 0.0)
            throw std::invalid_argument("decay_fit: values must be nonnegative");
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < radii.size(); ++i) {
        if (values[i] > noise_floor && values[i] > 0.0) {
            lx.push_back(std::log(radii[i]));
            ly.push_back(std::log(values[i]));
        }
    }
    const int m = static_cast<int>(lx.size());
    if (m < 3)
        throw std::invalid_argument(
            "decay_fit: fewer than 3 usable points above the noise floor");

    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points_used = m;
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (int i = 0; i < m; ++i) {
            const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
            ss_res += e * e;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

namespace detail {

// 1D periodic maximizer: coarse scan, 4x grid refinement, final parabolic
// correction.  Good to ~1e−15 relative on smooth integrands.
inline double max_on_circle(const std::function<double(double)>& g, int coarse) {
    double best = -std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    for (int i = 0; i < coarse; ++i) {
        const double t = two_pi * i / coarse;
        const double v = g(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double h = two_pi / coarse;
    for (int round = 0; round < 8; ++round) {
        double rb = best, rt = best_t;
        for (int a = -8; a <= 8; ++a) {
            const double t = best_t + h * a / 8.0;
            const double v = g(t);
            if (v > rb) {
                rb = v;
                rt = t;
            }
        }
        best = rb;
        best_t = rt;
        h /= 4.0;
    }
    const double g0 = g(best_t), gm = g(best_t - h), gp = g(best_t + h);
    const double denom = gm - 2.0 * g0 + gp;
    if (denom < 0.0) {
        const double dt = 0.5 * h * (gm - gp) / denom;
        return std::max(g0, g(best_t + dt));
    }
    return best;
}

}  // namespace detail

// (sup + inf, ∫) of the leading profile 𝔘 over D_R via the pulled-back
// hodographic-disc form; both vanish in exact arithmetic.  Single-term
// (reduced frame) semantics.
inline std::pair<double, double> hodographic_su_mu(const HodographModel& model,
                                                   double R, int resolution) {
    if (!(R > 0.0))
        throw std::invalid_argument("hodographic_su_mu: R must be > 0");
    if (resolution < 16)
        throw std::invalid_argument("hodographic_su_mu: resolution must be >= 16");
    const HodographicDisc disc = make_hodographic_disc(model, R);
    const int n = model.n();
    const double lambda = model.lambda1;
    const double mu = model.mu1;

    // 𝔘̃ on the boundary curve r(θ): 4μ r(θ)^{n+λ} cos((n+1)θ)
    auto boundary_value = [&](double theta) {
        return 4.0 * mu * std::pow(disc.boundary(theta), n + lambda) *
               std::cos((n + 1) * theta);
    };
    const double sup = detail::max_on_circle(boundary_value, resolution);
    const double inf =
        -detail::max_on_circle([&](double t) { return -boundary_value(t); },
                               resolution);
    const double su = sup + inf;

    // ∫_{D_R} 𝔘 = (4μλ/(n+3λ)) R^{(n+3λ)/λ} ∫ m^{−(n+3λ)/λ} cos((n+1)θ) j dθ
    const int n_ang = 4 * resolution;
    const double expo = (n + 3.0 * lambda) / lambda;
    double integral = 0.0;
    for (int a = 0; a < n_ang; ++a) {
        const double theta = two_pi * a / n_ang;
        integral += std::pow(m_theta(model, theta), -expo) *
                    std::cos((n + 1) * theta) * j_theta(model, theta);
    }
    integral *= two_pi / n_ang;
    const double mu_int = 4.0 * mu * lambda / (n + 3.0 * lambda) *
                          std::pow(R, expo) * integral;
    return {su, mu_int};
}

}  // namespace pharmonic
