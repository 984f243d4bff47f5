/*
 * spectral.hpp — exponents and coupling factors of the planar p-harmonic
 * hodographic series.
 *
 * A p-harmonic function with a critical point of multiplicity n at the
 * origin is driven, in hodographic coordinates, by one triple per series
 * index k ≥ n+1:
 *
 *   λ_k = ½( √(4k²(p−1) + n²(p−2)²) − np )        growth exponent
 *   ε_k = (λ_k + n − k) / (λ_k + n + k)           conjugate coupling
 *   μ_k = λ_k / (λ_k + n + k)                     potential amplitude
 *
 * valid for p > 1, with the scalar bounds
 *
 *   0 < λ_k < (k² − n²)/n,   |ε_k| < (k−n)/(k+n),   0 ≤ μ_k < 1 − n/k,
 *   |ε_{n+1}| < 1/(2n+1).
 *
 * The mean value combination weights a disc midrange against a disc average:
 *   weights(p) = ( (p−2)/(p+2), 4/(p+2) ),  summing to 1.
 *
 * The decisive decay exponent for behaviour at the critical point is
 *   (n + λ_{n+2}) / λ_{n+1} > 2   for every p > 1, n ≥ 1;
 * for n = 1 its positivity reduces to the cubic 2p³ + 7p² + 10p − 19 > 0.
 */

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace pharmonic {

// Problem data: growth exponent p and critical-point multiplicity n.
struct ProblemParams {
    double p = 2.0;  // > 1, strict
    int n = 1;       // ≥ 1

    void validate() const {
        if (!(p > 1.0))
            throw std::invalid_argument("ProblemParams: p must be > 1, got " +
                                        std::to_string(p));
        if (n < 1)
            throw std::invalid_argument("ProblemParams: n must be >= 1, got " +
                                        std::to_string(n));
    }
};

// One series index worth of exponent data.
struct SpectralTriple {
    int k = 0;
    double lambda = 0.0;
    double epsilon = 0.0;
    double mu = 0.0;
};

// (λ_k, ε_k, μ_k) for k ≥ n+1.  The discriminant 4k²(p−1) + n²(p−2)² is a
// sum of nonnegative terms and is evaluated as written.
inline SpectralTriple spectral_triple(const ProblemParams& params, int k) {
    params.validate();
    if (k <= params.n)
        throw std::invalid_argument("spectral_triple: k must be >= n+1, got k=" +
                                    std::to_string(k));
    const double p = params.p;
    const double n = static_cast<double>(params.n);
    const double kk = static_cast<double>(k);
    const double disc = 4.0 * kk * kk * (p - 1.0) + n * n * (p - 2.0) * (p - 2.0);
    SpectralTriple t;
    t.k = k;
    t.lambda = 0.5 * (std::sqrt(disc) - n * p);
    t.epsilon = (t.lambda + n - kk) / (t.lambda + n + kk);
    t.mu = t.lambda / (t.lambda + n + kk);
    return t;
}

// (n + λ_{n+2}) / λ_{n+1}; strictly greater than 2 for all p > 1, n ≥ 1.
inline double exponent_ratio(const ProblemParams& params) {
    const SpectralTriple lo = spectral_triple(params, params.n + 1);
    const SpectralTriple hi = spectral_triple(params, params.n + 2);
    return (static_cast<double>(params.n) + hi.lambda) / lo.lambda;
}

// 2p³ + 7p² + 10p − 19; vanishes at p = 1 and is positive for p > 1.
inline double cubic_n1(double p) {
    return ((2.0 * p + 7.0) * p + 10.0) * p - 19.0;
}

// Midrange and mean weights ( (p−2)/(p+2), 4/(p+2) ); they sum to 1.
inline std::pair<double, double> amvp_weights(double p) {
    if (!(p > 1.0))
        throw std::invalid_argument("amvp_weights: p must be > 1");
    return {(p - 2.0) / (p + 2.0), 4.0 / (p + 2.0)};
}

// 1/(2n+1) − |ε_{n+1}|; strictly positive for p > 1.
inline double epsilon_margin(const ProblemParams& params) {
    const SpectralTriple t = spectral_triple(params, params.n + 1);
    return 1.0 / (2.0 * params.n + 1.0) - std::abs(t.epsilon);
}

}  // namespace pharmonic
