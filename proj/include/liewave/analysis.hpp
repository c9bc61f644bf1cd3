#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewave/evolution.hpp"
#include "liewave/presets.hpp"

namespace liewave {

/// Least-squares slope of log(values) over times in [t_lo, t_hi], with a
/// floor keeping log away from -inf once a series has fully decayed.
inline double fit_log_slope(const std::vector<double>& times, const std::vector<double>& values,
                            double t_lo, double t_hi, double floor = 1e-14) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        const double y = std::log(std::max(values[i], floor));
        sx += times[i];
        sy += y;
        sxx += times[i] * times[i];
        sxy += times[i] * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_log_slope: fewer than two samples in the window");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Canonical sampling of [0, 30]: dense through the calibration window [0, 1],
/// then coarsening. The default time grid of the linear experiments.
inline std::vector<double> default_decay_times() {
    std::vector<double> t;
    for (double x = 0.0; x <= 1.0 + 1e-12; x += 0.05) t.push_back(x);
    for (double x = 1.1; x <= 3.0 + 1e-12; x += 0.1) t.push_back(x);
    for (double x = 3.5; x <= 30.0 + 1e-12; x += 0.5) t.push_back(x);
    return t;
}

/// Weighted-ratio verification of the four linear decay estimates. For each
/// estimate the series r_i(t) = norm_i(t) (1+t)^{rate_i} / data_norm_i is
/// checked against the early-attained-supremum rule: beyond the calibration
/// window the ratio may not exceed the window maximum by more than the slack
/// factor, and the final sample must not exceed the first.
struct DecayReport {
    std::vector<double> times;
    std::array<std::vector<double>, 4> norms;
    std::array<std::vector<double>, 4> ratios;
    std::array<double, 4> rates{0.0, 0.5, 1.0, 1.5};
    std::array<double, 4> data_norms{};

    struct Verdict {
        double window_max = 0.0;     // sup of the ratio over the calibration window
        double overall_max = 0.0;    // sup over all samples (the empirical constant)
        bool early_sup_pass = false; // r(t) <= slack * window_max beyond the window
        bool trend_pass = false;     // final sample below the first (or fully decayed)
        bool pass = false;
    };
    std::array<Verdict, 4> verdicts;
    bool all_pass = false;
};

inline DecayReport verify_decay_bounds(const CauchyData& data, const std::vector<double>& times,
                                       double window_end = 1.0, double slack = 1.01) {
    if (times.empty()) throw std::invalid_argument("verify_decay_bounds: empty time list");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0) throw std::invalid_argument("verify_decay_bounds: negative time");
        if (i > 0 && times[i] < times[i - 1])
            throw std::invalid_argument("verify_decay_bounds: times must be sorted");
    }
    data.validate();

    DecayReport rep;
    rep.times = times;

    // right-hand-side data combinations of the four estimates
    SpectralField eu0 = data.u0, eu1 = data.u1;
    for (auto& block : eu0.coeffs)
        for (auto& z : block) z *= data.epsilon;
    for (auto& block : eu1.coeffs)
        for (auto& z : block) z *= data.epsilon;
    const double l2_u0 = plancherel_norm(eu0), l2_u1 = plancherel_norm(eu1);
    const double h1_u0 = h1_norm(eu0), h1_u1 = h1_norm(eu1);
    rep.data_norms = {l2_u0 + l2_u1, h1_u0 + l2_u1, h1_u0 + l2_u1, h1_u0 + h1_u1};

    for (int i = 0; i < 4; ++i) {
        rep.norms[i].resize(times.size());
        rep.ratios[i].resize(times.size());
    }
    std::vector<std::array<double, 4>> norms(times.size());
    parallel_for(times.size(), [&](std::size_t k) {
        norms[k] = energy_norms(evolve_homogeneous(data, times[k]));
    });
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (int i = 0; i < 4; ++i) {
            rep.norms[i][k] = norms[k][i];
            rep.ratios[i][k] = rep.data_norms[i] > 0.0
                                   ? norms[k][i] * std::pow(1.0 + times[k], rep.rates[i]) / rep.data_norms[i]
                                   : 0.0;
        }
    }

    rep.all_pass = true;
    for (int i = 0; i < 4; ++i) {
        auto& v = rep.verdicts[i];
        const auto& r = rep.ratios[i];
        for (std::size_t k = 0; k < times.size(); ++k) {
            v.overall_max = std::max(v.overall_max, r[k]);
            if (times[k] <= window_end) v.window_max = std::max(v.window_max, r[k]);
        }
        v.early_sup_pass = true;
        for (std::size_t k = 0; k < times.size(); ++k)
            if (times[k] > window_end && r[k] > slack * v.window_max + 1e-15) v.early_sup_pass = false;
        // a series that starts at exactly zero (say u1 = 0 makes r3(0) = 0)
        // cannot end below its first sample; fully decayed counts as passing
        v.trend_pass = r.back() <= r.front() || r.back() <= 1e-6 * v.window_max;
        v.pass = v.early_sup_pass && v.trend_pass;
        rep.all_pass = rep.all_pass && v.pass;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The zero-mode obstruction: L¹ data regularity buys no decay of ||u||_{L²}.
// Two homogeneous runs with equal L¹ data size, one with nonzero mean (the
// norm converges to |mean0 + mean1|) and one mean-zero (the norm decays
// exponentially at rate >= delta1), plus the ℓ∞(Ĝ) chain bound on the
// trivial-mode contribution with its explicit constant 2.
// ---------------------------------------------------------------------------

struct L1ExperimentReport {
    std::vector<double> times;
    std::vector<double> norm_nonzero_mean;
    std::vector<double> norm_mean_zero;
    double limit = 0.0;             // |û0(0) + û1(0)| of the nonzero-mean data
    double final_nonzero_mean = 0.0;
    double final_mean_zero = 0.0;
    double fitted_rate_mean_zero = 0.0;
    double delta1 = 0.0;
    bool no_decay_pass = false;     // ||u(t_max)|| within tolerance of the limit
    bool decay_pass = false;        // fitted rate <= -(delta1 - 0.05)
    double chain_max_ratio = 0.0;   // sup_t d0 |û(t,0)|² / (||u0||²_{L¹} + ||u1||²_{L¹})
    bool chain_pass = false;        // <= 2 up to roundoff slack
    bool pass = false;
};

inline L1ExperimentReport l1_no_improvement_experiment(const GroupSpec& spec, double t_max = 30.0,
                                                       double dt = 0.5, std::uint64_t chain_seed = 1,
                                                       int chain_trials = 50) {
    spec.validate();
    HarmonicPlan plan(make_grid(spec, 2.0));
    const auto& dual = plan.dual();
    std::size_t trivial = 0;
    for (std::size_t i = 0; i < dual.size(); ++i)
        if (dual[i].region == Region::R1) trivial = i;

    L1ExperimentReport rep;
    rep.delta1 = spectral_gaps(dual).delta1;

    // case A: u0 = u1 = 1 (unit L¹ mass, nonzero mean)
    CauchyData constant;
    constant.u0 = constant_field(spec);
    constant.u1 = constant_field(spec);

    // case B: mean-zero data of the same L¹ size, built from the character of
    // the first nontrivial representation
    std::vector<int> first_index;
    if (spec.kind == GroupKind::Torus) {
        first_index.assign(spec.dims, 0);
        first_index[0] = 1;
    } else {
        first_index = {1};
    }
    SpectralField mean_zero = single_mode_field(spec, first_index);
    const double l1_size = lq_norm(plan.inverse(mean_zero), 1.0);
    for (auto& block : mean_zero.coeffs)
        for (auto& z : block) z /= l1_size;
    CauchyData oscillating;
    oscillating.u0 = mean_zero;
    oscillating.u1 = zero_spectral_field(spec);

    for (double t = 0.0; t <= t_max + 1e-12; t += dt) rep.times.push_back(t);
    rep.norm_nonzero_mean.resize(rep.times.size());
    rep.norm_mean_zero.resize(rep.times.size());
    parallel_for(rep.times.size(), [&](std::size_t k) {
        rep.norm_nonzero_mean[k] = energy_norms(evolve_homogeneous(constant, rep.times[k]))[0];
        rep.norm_mean_zero[k] = energy_norms(evolve_homogeneous(oscillating, rep.times[k]))[0];
    });

    rep.limit = std::abs(constant.u0.coeffs[trivial][0] + constant.u1.coeffs[trivial][0]);
    rep.final_nonzero_mean = rep.norm_nonzero_mean.back();
    rep.final_mean_zero = rep.norm_mean_zero.back();
    rep.no_decay_pass = std::abs(rep.final_nonzero_mean - rep.limit) < 1e-8;
    // the non-trivial shells obey |û(t,ξ)| <= C (1+t) e^{-δ₁ t}; dividing out
    // the polynomial factor isolates the exponential rate for the fit
    // (resonant shells would otherwise bias the finite-window slope by ~1/t)
    std::vector<double> normalized(rep.norm_mean_zero.size());
    for (std::size_t k = 0; k < normalized.size(); ++k)
        normalized[k] = rep.norm_mean_zero[k] / (1.0 + rep.times[k]);
    rep.fitted_rate_mean_zero =
        fit_log_slope(rep.times, normalized, std::min(5.0, 0.5 * t_max), t_max);
    rep.decay_pass = rep.fitted_rate_mean_zero <= -(rep.delta1 - 0.05);

    // chain bound: sup_t |û(t,0)| = max(|û0(0)|, |û0(0)+û1(0)|) since the zero
    // mode moves linearly along û0 + (1-e^{-t}) û1
    for (int trial = 0; trial < chain_trials; ++trial) {
        auto u0 = random_field(plan, chain_seed + 2 * trial, false);
        auto u1 = random_field(plan, chain_seed + 2 * trial + 1, false);
        const double l1_sq = std::pow(lq_norm(plan.inverse(u0), 1.0), 2) +
                             std::pow(lq_norm(plan.inverse(u1), 1.0), 2);
        const Complex a = u0.coeffs[trivial][0], b = u1.coeffs[trivial][0];
        const double sup_sq = std::pow(std::max(std::abs(a), std::abs(a + b)), 2);
        rep.chain_max_ratio = std::max(rep.chain_max_ratio, sup_sq / l1_sq);
    }
    rep.chain_pass = rep.chain_max_ratio <= 2.0 * (1.0 + 1e-9);
    rep.pass = rep.no_decay_pass && rep.decay_pass && rep.chain_pass;
    return rep;
}

// ---------------------------------------------------------------------------
// Gagliardo-Nirenberg ratio: ρ(f) = ||f||_{L^q} / (||f||^θ_{H¹} ||f||^{1-θ}_{L²})
// with θ = n (1/2 - 1/q). The inequality guarantees a uniform bound; no
// absolute constant is claimed, so violations are only flagged relative to a
// corpus maximum.
// ---------------------------------------------------------------------------

struct GNRatioReport {
    double q = 0.0;
    double theta = 0.0;
    double lq = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
    double rho = 0.0;
};

inline double gn_theta(int n, double q) { return n * (0.5 - 1.0 / q); }

inline GNRatioReport gn_ratio_check(const GridField& f, const SpectralField& F, double q) {
    const GroupSpec& spec = f.grid.spec;
    const int n = spec.topological_dim();
    if (n < 3)
        throw std::invalid_argument("gn_ratio_check: requires topological dimension >= 3 (got n = " +
                                    std::to_string(n) + ")");
    const double q_max = 2.0 * n / (n - 2.0);
    if (q < 2.0 || q > q_max)
        throw std::invalid_argument("gn_ratio_check: q must lie in [2, 2n/(n-2)]");

    GNRatioReport rep;
    rep.q = q;
    rep.theta = gn_theta(n, q);
    rep.lq = lq_norm(f, q);
    rep.l2 = plancherel_norm(F);
    rep.h1 = h1_norm(F);
    const double denom = std::pow(rep.h1, rep.theta) * std::pow(rep.l2, 1.0 - rep.theta);
    rep.rho = denom > 0.0 ? rep.lq / denom : 0.0;
    return rep;
}

inline GNRatioReport gn_ratio_check(const GridField& f, double q) {
    return gn_ratio_check(f, forward_gft(f), q);
}

/// Corpus study: max ρ over random bandlimited fields at the given bandlimit.
struct GNCorpusReport {
    int bandlimit = 0;
    double q = 0.0;
    std::vector<double> rhos;
    double max_rho = 0.0;
};

inline GNCorpusReport gn_corpus_study(const GroupSpec& spec, double q, int corpus_size,
                                      std::uint64_t seed) {
    HarmonicPlan plan(make_grid(spec, 2.0));
    GNCorpusReport rep;
    rep.bandlimit = spec.bandlimit;
    rep.q = q;
    rep.rhos.resize(corpus_size);
    parallel_for(static_cast<std::size_t>(corpus_size), [&](std::size_t i) {
        auto F = random_field(plan, seed + i, true);
        rep.rhos[i] = gn_ratio_check(plan.inverse(F), F, q).rho;
    });
    for (double r : rep.rhos) rep.max_rho = std::max(rep.max_rho, r);
    return rep;
}

}  // namespace liewave
