/*
 * crosscheck.hpp — independent confirmation by discrete energy
 * minimization.
 *
 * The p-harmonic functions produced by the series construction are also
 * the unique minimizers of the p-Dirichlet energy ∫|∇u|^p with their own
 * boundary data.  This module discretizes that energy on a square grid
 * (piecewise-linear gradients on a two-triangle split of each cell,
 * Σ|∇u|^p · area),
 * minimizes it with nonlinear conjugate gradients and Armijo backtracking,
 * and compares the interior solution against the series evaluation.
 *
 * For p < 2 the integrand's gradient is singular where ∇u = 0, so the
 * descent direction uses (|g|² + δ²)^{(p−2)/2} g with δ = 1e−10; reported
 * energies are unregularized.
 */

#pragma once

#include "pharmonic/plane.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pharmonic {

// Square-grid Dirichlet problem: (cells+1)² nodes over a square of
// half-width `side` centered at `center`; `boundary` is a full grid vector
// (row-major, x fastest) whose perimeter entries carry the data.
struct GridProblem {
    double side = 1.0;
    int cells = 16;
    double p = 2.0;
    Complex center{0.0, 0.0};
    std::vector<double> boundary;

    int nodes_per_side() const { return cells + 1; }
    double spacing() const { return 2.0 * side / cells; }
    Complex node(int i, int j) const {
        return center + Complex{-side + 2.0 * side * i / cells,
                                -side + 2.0 * side * j / cells};
    }
    bool is_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == cells || j == cells;
    }

    void validate() const {
        if (cells < 16)
            throw std::invalid_argument("GridProblem: cells must be >= 16");
        if (!(p > 1.0)) throw std::invalid_argument("GridProblem: p must be > 1");
        const size_t need = static_cast<size_t>(nodes_per_side()) * nodes_per_side();
        if (boundary.size() != need)
            throw std::invalid_argument("GridProblem: boundary grid size mismatch");
        for (int i = 0; i <= cells; ++i)
            for (int j = 0; j <= cells; ++j)
                if (is_boundary(i, j) &&
                    !std::isfinite(boundary[j * (cells + 1) + i]))
                    throw std::invalid_argument("GridProblem: non-finite boundary value");
    }
};

// Sample eval_u on the perimeter nodes.
inline GridProblem make_grid_problem(const HodographModel& model, Complex center,
                                     double side, int cells, double p) {
    GridProblem gp;
    gp.side = side;
    gp.cells = cells;
    gp.p = p;
    gp.center = center;
    gp.boundary.assign(static_cast<size_t>(cells + 1) * (cells + 1), 0.0);
    for (int j = 0; j <= cells; ++j)
        for (int i = 0; i <= cells; ++i)
            if (gp.is_boundary(i, j))
                gp.boundary[j * (cells + 1) + i] = eval_u(model, gp.node(i, j));
    gp.validate();
    return gp;
}

struct EnergySolveResult {
    std::vector<double> values;  // full grid, boundary included
    double energy = 0.0;         // unregularized final energy
    double grad_norm = 0.0;
    double initial_grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool energy_monotone = true;
};

namespace detail {

constexpr double kGradRegularization = 1e-10;

// Σ (|∇u|² [+ δ²])^{p/2} · area over the two-triangle split of every grid
// cell; piecewise-linear gradients are constant per triangle, so the
// discrete energy is coercive (no checkerboard null mode) and reduces to
// the five-point Laplacian energy at p = 2.
inline double grid_energy_impl(const GridProblem& gp, const std::vector<double>& u,
                               bool regularized) {
    const int np = gp.nodes_per_side();
    const double h = gp.spacing();
    const double d2 = regularized ? kGradRegularization * kGradRegularization : 0.0;
    const double half_area = 0.5 * h * h;
    double e = 0.0;
    for (int j = 0; j < gp.cells; ++j) {
        for (int i = 0; i < gp.cells; ++i) {
            const double u00 = u[j * np + i], u10 = u[j * np + i + 1];
            const double u01 = u[(j + 1) * np + i], u11 = u[(j + 1) * np + i + 1];
            const double ax = (u10 - u00) / h, ay = (u01 - u00) / h;
            const double bx = (u11 - u01) / h, by = (u11 - u10) / h;
            e += (std::pow(ax * ax + ay * ay + d2, gp.p / 2.0) +
                  std::pow(bx * bx + by * by + d2, gp.p / 2.0)) * half_area;
        }
    }
    return e;
}

inline void grid_energy_gradient(const GridProblem& gp, const std::vector<double>& u,
                                 std::vector<double>& grad) {
    const int np = gp.nodes_per_side();
    const double h = gp.spacing();
    const double d2 = kGradRegularization * kGradRegularization;
    const double half_area = 0.5 * h * h;
    grad.assign(u.size(), 0.0);
    for (int j = 0; j < gp.cells; ++j) {
        for (int i = 0; i < gp.cells; ++i) {
            const double u00 = u[j * np + i], u10 = u[j * np + i + 1];
            const double u01 = u[(j + 1) * np + i], u11 = u[(j + 1) * np + i + 1];
            const double ax = (u10 - u00) / h, ay = (u01 - u00) / h;
            const double bx = (u11 - u01) / h, by = (u11 - u10) / h;
            const double wa = gp.p * std::pow(ax * ax + ay * ay + d2,
                                              gp.p / 2.0 - 1.0) * half_area / h;
            const double wb = gp.p * std::pow(bx * bx + by * by + d2,
                                              gp.p / 2.0 - 1.0) * half_area / h;
            grad[j * np + i] += wa * (-ax - ay);
            grad[j * np + i + 1] += wa * ax - wb * by;
            grad[(j + 1) * np + i] += wa * ay - wb * bx;
            grad[(j + 1) * np + i + 1] += wb * (bx + by);
        }
    }
    // boundary nodes are fixed
    for (int j = 0; j <= gp.cells; ++j)
        for (int i = 0; i <= gp.cells; ++i)
            if (gp.is_boundary(i, j)) grad[j * np + i] = 0.0;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

// Unregularized discrete p-Dirichlet energy of a grid function.
inline double grid_energy(const GridProblem& gp, const std::vector<double>& u) {
    return detail::grid_energy_impl(gp, u, false);
}

// Minimize the discrete energy over interior nodes with Polak–Ribière
// conjugate gradients and Armijo backtracking; the energy never increases
// across accepted steps.  Converged when ‖∇E‖ ≤ tol·‖∇E₀‖.
inline EnergySolveResult minimize_energy(
    const GridProblem& gp, double tol, int max_iters,
    std::optional<std::vector<double>> initial = {}) {
    gp.validate();
    const int np = gp.nodes_per_side();

    std::vector<double> u;
    if (initial) {
        if (initial->size() != gp.boundary.size())
            throw std::invalid_argument("minimize_energy: initial guess size mismatch");
        u = *initial;
        for (int j = 0; j <= gp.cells; ++j)
            for (int i = 0; i <= gp.cells; ++i)
                if (gp.is_boundary(i, j)) u[j * np + i] = gp.boundary[j * np + i];
    } else {
        // bilinear interpolation of the four edges
        u = gp.boundary;
        for (int j = 1; j < gp.cells; ++j) {
            const double ty = static_cast<double>(j) / gp.cells;
            for (int i = 1; i < gp.cells; ++i) {
                const double tx = static_cast<double>(i) / gp.cells;
                const double ex = (1.0 - tx) * u[j * np] + tx * u[j * np + gp.cells];
                const double ey = (1.0 - ty) * u[i] + ty * u[gp.cells * np + i];
                const double corners =
                    (1.0 - tx) * (1.0 - ty) * u[0] + tx * (1.0 - ty) * u[gp.cells] +
                    (1.0 - tx) * ty * u[gp.cells * np] +
                    tx * ty * u[gp.cells * np + gp.cells];
                u[j * np + i] = ex + ey - corners;
            }
        }
    }

    EnergySolveResult res;
    std::vector<double> g, g_trial, d, trial(u.size());
    detail::grid_energy_gradient(gp, u, g);
    double gg = detail::dot(g, g);
    res.initial_grad_norm = std::sqrt(gg);
    const double target = tol * res.initial_grad_norm;

    d.assign(g.size(), 0.0);
    for (size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
    double energy = detail::grid_energy_impl(gp, u, true);
    double step = 1.0;

    auto fill_trial = [&](double t) {
        for (size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + t * d[i];
    };

    int iter = 0;
    for (; iter < max_iters; ++iter) {
        if (std::sqrt(gg) <= target) {
            res.converged = true;
            break;
        }
        double gd = detail::dot(g, d);
        if (gd >= 0.0) {  // lost descent: restart with steepest
            for (size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
            gd = -gg;
        }

        // Secant line search on φ'(t) = ∇E(u+td)·d; a single secant step is
        // the exact line minimizer for p = 2 and a close one otherwise.
        double t = step;
        for (int probe = 0; probe < 6; ++probe) {
            fill_trial(t);
            detail::grid_energy_gradient(gp, trial, g_trial);
            const double dphi = detail::dot(g_trial, d);
            if (std::abs(dphi) <= 0.1 * std::abs(gd)) break;
            if (dphi > gd) {
                t = std::clamp(t * gd / (gd - dphi), 1e-2 * t, 1e2 * t);
            } else {
                t *= 4.0;  // still descending at t: extend
            }
        }

        // Armijo acceptance with backtracking.  The rounding slack keeps
        // the search alive once decrements fall below the resolution of
        // the energy sum; the secant step still reduces the gradient.
        const double slack =
            16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(energy));
        bool accepted = false;
        double e_trial = 0.0;
        for (int halve = 0; halve < 60; ++halve) {
            fill_trial(t);
            e_trial = detail::grid_energy_impl(gp, trial, true);
            if (e_trial <= energy + 1e-4 * t * gd + slack) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // below line-search resolution
        if (e_trial > energy + slack) res.energy_monotone = false;
        u.swap(trial);
        energy = e_trial;
        step = t;
        detail::grid_energy_gradient(gp, u, g_trial);
        const double gg_new = detail::dot(g_trial, g_trial);
        const double beta =
            gg > 0.0 ? std::max(0.0, (gg_new - detail::dot(g_trial, g)) / gg) : 0.0;
        for (size_t i = 0; i < g.size(); ++i) d[i] = -g_trial[i] + beta * d[i];
        g.swap(g_trial);
        gg = gg_new;
    }
    res.values = std::move(u);
    res.energy = detail::grid_energy_impl(gp, res.values, false);
    res.grad_norm = std::sqrt(gg);
    res.iterations = iter;
    return res;
}

// Max over interior nodes of |solution − eval_u|.
inline double compare_fields(const GridProblem& gp,
                             const std::vector<double>& solution,
                             const HodographModel& model) {
    const int np = gp.nodes_per_side();
    double worst = 0.0;
    for (int j = 1; j < gp.cells; ++j)
        for (int i = 1; i < gp.cells; ++i)
            worst = std::max(worst, std::abs(solution[j * np + i] -
                                             eval_u(model, gp.node(i, j))));
    return worst;
}

}  // namespace pharmonic
