#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewave/group.hpp"

namespace liewave {

/// Values of the frequency-space kernels K0, K1 and their time derivatives at
/// one (t, λ²) point. The mode solution is û(t) = K0 û0 + K1 û1.
///
/// Away from the resonance (λ² ≠ 1):
///   K0 = (e^{-λ²t} - λ² e^{-t}) / (1 - λ²),   K1 = (e^{-λ²t} - e^{-t}) / (1 - λ²),
/// at λ² = 1 (double characteristic root):
///   K0 = (1+t) e^{-t},                        K1 = t e^{-t}.
/// Everywhere: K0 - K1 = e^{-t} and (K0, K1, K0', K1')(0) = (1, 0, 0, 1).
struct PropagatorValues {
    double k0 = 1.0;
    double k1 = 0.0;
    double dk0 = 0.0;
    double dk1 = 1.0;
};

/// Below this distance of λ² from 1, the quotient form loses about half the
/// significand to cancellation and the φ₁ form takes over.
inline constexpr double kResonanceSwitch = 1e-6;

namespace detail {

inline double phi1(double z) {  // (e^z - 1)/z, stable through z = 0
    if (z == 0.0) return 1.0;
    return std::expm1(z) / z;
}

inline void require_domain(double t, double lambda2) {
    if (t < 0.0) throw std::invalid_argument("propagator: t must be >= 0");
    if (lambda2 < 0.0) throw std::invalid_argument("propagator: eigenvalue must be >= 0");
}

/// Direct quotient form, valid for λ² away from 1.
inline PropagatorValues eval_generic(double t, double lambda2) {
    require_domain(t, lambda2);
    const double el = std::exp(-lambda2 * t);
    const double e = std::exp(-t);
    const double denom = 1.0 - lambda2;
    PropagatorValues v;
    v.k0 = (el - lambda2 * e) / denom;
    v.k1 = (el - e) / denom;
    v.dk0 = lambda2 * (e - el) / denom;
    v.dk1 = (e - lambda2 * el) / denom;
    return v;
}

/// Cancellation-free form around the resonance:
///   K1 = t e^{-t} φ₁(z), z = (1 - λ²) t;  K0 = K1 + e^{-t};
///   K0' = -λ² K1;  K1' = e^{-t} (e^z - t φ₁(z)).
/// Algebraically identical to the quotient form for every λ², and exact at
/// λ² = 1 where it reduces to the double-root kernels.
inline PropagatorValues eval_resonant_stable(double t, double lambda2) {
    require_domain(t, lambda2);
    const double e = std::exp(-t);
    const double z = (1.0 - lambda2) * t;
    const double p = phi1(z);
    PropagatorValues v;
    v.k1 = t * e * p;
    v.k0 = v.k1 + e;
    v.dk0 = -lambda2 * v.k1;
    v.dk1 = e * (std::exp(z) - t * p);
    return v;
}

}  // namespace detail

inline PropagatorValues eval_propagator(double t, double lambda2) {
    detail::require_domain(t, lambda2);
    if (std::abs(1.0 - lambda2) < kResonanceSwitch) return detail::eval_resonant_stable(t, lambda2);
    return detail::eval_generic(t, lambda2);
}

/// Exact-eigenvalue entry point: the λ² = 1 branch is selected by rational
/// equality, never by a floating comparison.
inline PropagatorValues eval_propagator(double t, const Rational& lambda2) {
    if (lambda2 == Rational(1)) {
        detail::require_domain(t, 1.0);
        const double e = std::exp(-t);
        return {(1.0 + t) * e, t * e, -t * e, (1.0 - t) * e};
    }
    return eval_propagator(t, lambda2.to_double());
}

// ---------------------------------------------------------------------------
// Empirical verification of the per-region kernel envelopes:
//   R1: |K| <= 1,  R2: |K| <= C e^{-δ₁ t},  R3: |K| <= C (1+t) e^{-t},
//   R4: |K| <= C e^{-t},
// with the matching envelopes for the time derivatives (R1 derivative decays
// like e^{-t} since K0' = 0 and K1' = e^{-t} there).
// ---------------------------------------------------------------------------

inline double region_envelope(Region region, const SpectralGaps& gaps, double t) {
    switch (region) {
        case Region::R1: return 1.0;
        case Region::R2: return std::exp(-gaps.delta1 * t);
        case Region::R3: return (1.0 + t) * std::exp(-t);
        case Region::R4: return std::exp(-t);
    }
    return 1.0;
}

inline double region_envelope_dt(Region region, const SpectralGaps& gaps, double t) {
    switch (region) {
        case Region::R1: return std::exp(-t);
        case Region::R2: return std::exp(-gaps.delta1 * t);
        case Region::R3: return (1.0 + t) * std::exp(-t);
        case Region::R4: return std::exp(-t);
    }
    return 1.0;
}

struct KernelEnvelopeStat {
    std::string kernel;        // "K0", "K1", "dK0", "dK1"
    double sup_ratio = 0.0;    // sup over the (t, λ²) grid of |K| / envelope
    double sup_refined = 0.0;  // same with the t grid doubled
    double growth = 0.0;       // sup_refined / sup_ratio - 1
    double t_at_sup = 0.0;
    double lambda2_at_sup = 0.0;
    bool pass = false;         // finite and refinement-stable (< 1% growth)
};

struct MultiplierBoundReport {
    Region region = Region::R1;
    std::vector<KernelEnvelopeStat> stats;
    bool pass = false;
};

/// Sweeps |kernel| / envelope over t_grid x samples; PASS per kernel when the
/// empirical constant is finite and grows by less than 1% under doubling of
/// the t grid. Samples must belong to the named region.
inline MultiplierBoundReport multiplier_bound_check(Region region, const SpectralGaps& gaps,
                                                    const std::vector<double>& t_grid,
                                                    const std::vector<Rational>& lambda2_samples) {
    if (t_grid.empty() || lambda2_samples.empty())
        throw std::invalid_argument("multiplier_bound_check: empty grid or sample set");
    for (const auto& l2 : lambda2_samples)
        if (region_of(l2) != region)
            throw std::invalid_argument("multiplier_bound_check: sample " + l2.to_string() +
                                        " is not in region " + region_name(region));

    std::vector<double> refined;
    refined.reserve(2 * t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        refined.push_back(t_grid[i]);
        if (i + 1 < t_grid.size()) refined.push_back(0.5 * (t_grid[i] + t_grid[i + 1]));
    }

    MultiplierBoundReport report;
    report.region = region;
    report.stats.resize(4);
    const char* names[4] = {"K0", "K1", "dK0", "dK1"};
    for (int k = 0; k < 4; ++k) report.stats[k].kernel = names[k];

    auto sweep = [&](const std::vector<double>& ts, bool record_argmax) {
        std::vector<double> sup(4, 0.0);
        for (const auto& l2 : lambda2_samples) {
            for (double t : ts) {
                const PropagatorValues v = eval_propagator(t, l2);
                const double env = region_envelope(region, gaps, t);
                const double env_dt = region_envelope_dt(region, gaps, t);
                const double ratios[4] = {std::abs(v.k0) / env, std::abs(v.k1) / env,
                                          std::abs(v.dk0) / env_dt, std::abs(v.dk1) / env_dt};
                for (int k = 0; k < 4; ++k) {
                    if (ratios[k] > sup[k]) {
                        sup[k] = ratios[k];
                        if (record_argmax) {
                            report.stats[k].t_at_sup = t;
                            report.stats[k].lambda2_at_sup = l2.to_double();
                        }
                    }
                }
            }
        }
        return sup;
    };

    const auto coarse = sweep(t_grid, true);
    const auto fine = sweep(refined, false);
    report.pass = true;
    for (int k = 0; k < 4; ++k) {
        auto& s = report.stats[k];
        s.sup_ratio = coarse[k];
        s.sup_refined = fine[k];
        s.growth = coarse[k] > 0.0 ? fine[k] / coarse[k] - 1.0 : 0.0;
        s.pass = std::isfinite(fine[k]) && s.growth < 0.01;
        report.pass = report.pass && s.pass;
    }
    return report;
}

}  // namespace liewave
