#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewave/harmonic.hpp"
#include "liewave/propagator.hpp"

namespace liewave {

/// Initial data (u0, u1) with the small-data scale ε multiplying both.
struct CauchyData {
    SpectralField u0, u1;
    double epsilon = 1.0;

    void validate() const {
        if (!(u0.spec == u1.spec)) throw std::invalid_argument("CauchyData: u0/u1 spec mismatch");
        if (epsilon < 0.0) throw std::invalid_argument("CauchyData: epsilon must be >= 0");
    }
};

/// One time slice of the frequency-space solution and its time derivative.
struct EvolutionState {
    double t = 0.0;
    SpectralField u, du;
};

struct SemilinearConfig {
    double p = 2.0;
    double T = 0.5;
    int n_time_steps = 16;
    double picard_tol = 1e-10;
    int picard_max_iters = 50;
    double oversample = 2.0;
    double amplitude_ceiling = 1e6;

    friend bool operator==(const SemilinearConfig&, const SemilinearConfig&) = default;

    /// Throws on hard violations; returns warnings for the soft ones (the
    /// local-existence hypotheses n >= 3 and p <= n/(n-2) on tori).
    std::vector<std::string> validate(const GroupSpec& spec) const {
        if (p <= 1.0) throw std::invalid_argument("SemilinearConfig: p must be > 1");
        if (T <= 0.0) throw std::invalid_argument("SemilinearConfig: T must be > 0");
        if (n_time_steps < 1) throw std::invalid_argument("SemilinearConfig: n_time_steps must be >= 1");
        if (picard_tol <= 0.0) throw std::invalid_argument("SemilinearConfig: picard_tol must be > 0");
        if (picard_max_iters < 1) throw std::invalid_argument("SemilinearConfig: picard_max_iters must be >= 1");
        if (oversample < 2.0) throw std::invalid_argument("SemilinearConfig: oversample must be >= 2");
        std::vector<std::string> warnings;
        const int n = spec.topological_dim();
        if (spec.kind != GroupKind::Torus) {
            if (p > 3.0) throw std::invalid_argument("SemilinearConfig: p must be <= 3 on SU(2)/SO(3)");
        } else if (n < 3) {
            warnings.push_back("local-existence hypothesis n >= 3 not met on this torus (n = " +
                               std::to_string(n) + "); proceeding anyway");
        } else if (p > static_cast<double>(n) / (n - 2)) {
            warnings.push_back("exponent p exceeds n/(n-2); the contraction estimate is not covered");
        }
        return warnings;
    }
};

/// Exact frequency-space solution of the homogeneous problem: entrywise
/// û(t) = K0 û0 + K1 û1 and ∂ₜû = K0' û0 + K1' û1, with the ε scale applied.
inline EvolutionState evolve_homogeneous(const CauchyData& data, double t) {
    data.validate();
    if (t < 0.0) throw std::invalid_argument("evolve_homogeneous: t must be >= 0");
    auto dual = enumerate_dual(data.u0.spec);
    detail::check_aligned(data.u0, dual);
    detail::check_aligned(data.u1, dual);
    EvolutionState state;
    state.t = t;
    state.u = zero_spectral_field(data.u0.spec);
    state.du = zero_spectral_field(data.u0.spec);
    const double eps = data.epsilon;
    for (std::size_t i = 0; i < dual.size(); ++i) {
        const PropagatorValues k = eval_propagator(t, dual[i].eigenvalue);
        for (std::size_t e = 0; e < state.u.coeffs[i].size(); ++e) {
            const Complex a = eps * data.u0.coeffs[i][e];
            const Complex b = eps * data.u1.coeffs[i][e];
            state.u.coeffs[i][e] = k.k0 * a + k.k1 * b;
            state.du.coeffs[i][e] = k.dk0 * a + k.dk1 * b;
        }
    }
    return state;
}

/// The four energy quantities:
///   ||u||_{L²},  ||(-L)^{1/2} u||_{L²},  ||∂ₜu||_{L²},  ||∂ₜ(-L)^{1/2} u||_{L²}.
inline std::array<double, 4> energy_norms(const EvolutionState& state) {
    auto dual = enumerate_dual(state.u.spec);
    detail::check_aligned(state.u, dual);
    detail::check_aligned(state.du, dual);
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (std::size_t i = 0; i < dual.size(); ++i) {
        const double d = dual[i].dim;
        const double l2 = dual[i].eigenvalue_d();
        const double hu = detail::hs_norm_sq(state.u.coeffs[i]);
        const double hd = detail::hs_norm_sq(state.du.coeffs[i]);
        s0 += d * hu;
        s1 += d * l2 * hu;
        s2 += d * hd;
        s3 += d * l2 * hd;
    }
    return {std::sqrt(s0), std::sqrt(s1), std::sqrt(s2), std::sqrt(s3)};
}

/// sup over the supplied samples of the sum of the four energy norms.
inline double xT_norm(const std::vector<EvolutionState>& trajectory) {
    if (trajectory.empty()) throw std::invalid_argument("xT_norm: empty trajectory");
    double best = 0.0;
    for (const auto& s : trajectory) {
        const auto n = energy_norms(s);
        best = std::max(best, n[0] + n[1] + n[2] + n[3]);
    }
    return best;
}

/// Pseudo-spectral |u|^p: inverse transform, pointwise modulus power on the
/// (oversampled) grid, forward transform back to the truncated dual.
inline SpectralField apply_nonlinearity(const SpectralField& u, double p, const HarmonicPlan& plan) {
    if (!(u.spec == plan.spec())) throw std::invalid_argument("apply_nonlinearity: spec mismatch");
    GridField g = plan.inverse(u);
    for (auto& z : g.samples) z = Complex(std::pow(std::abs(z), p), 0.0);
    return plan.forward(g);
}

inline SpectralField apply_nonlinearity(const SpectralField& u, double p, const GridDescriptor& grid) {
    return apply_nonlinearity(u, p, HarmonicPlan(grid));
}

/// Forcing snapshots in frequency space, indexed by time. Consumers require
/// values at exactly the quadrature nodes they use.
class ForcingHistory {
public:
    ForcingHistory() = default;

    void add(double t, SpectralField F) {
        times_.push_back(t);
        fields_.push_back(std::move(F));
    }

    const std::vector<double>& times() const { return times_; }

    const SpectralField& at(double s, double tol = 1e-9) const {
        for (std::size_t i = 0; i < times_.size(); ++i)
            if (std::abs(times_[i] - s) <= tol) return fields_[i];
        throw std::invalid_argument("ForcingHistory: insufficient forcing samples (no snapshot at t = " +
                                    std::to_string(s) + ")");
    }

private:
    std::vector<double> times_;
    std::vector<SpectralField> fields_;
};

namespace detail {

struct PanelRule {
    std::vector<double> nodes;    // 4 Gauss-Legendre nodes on [-1, 1]
    std::vector<double> weights;  // matching weights, sum = 2
    PanelRule() { gauss_legendre(4, nodes, weights); }
};

inline const PanelRule& panel_rule() {
    static const PanelRule rule;
    return rule;
}

}  // namespace detail

/// Mild-solution evaluation at one time:
///   u(t) = K0(t) ε û0 + K1(t) ε û1 + ∫₀ᵗ K1(t-s) F̂(s) ds,
/// with the integral done by composite 4-node Gauss-Legendre over n_panels
/// equal panels of [0, t]. The forcing must be supplied at those nodes.
inline SpectralField duhamel_apply(const CauchyData& data, const ForcingHistory& forcing, double t,
                                   int n_panels) {
    data.validate();
    if (t < 0.0) throw std::invalid_argument("duhamel_apply: t must be >= 0");
    if (n_panels < 1) throw std::invalid_argument("duhamel_apply: n_panels must be >= 1");
    auto dual = enumerate_dual(data.u0.spec);
    detail::check_aligned(data.u0, dual);

    EvolutionState hom = evolve_homogeneous(data, t);
    SpectralField out = std::move(hom.u);
    if (t == 0.0) return out;

    const auto& rule = detail::panel_rule();
    const double h = t / n_panels;
    for (int panel = 0; panel < n_panels; ++panel) {
        const double a = h * panel;
        const double mid = a + 0.5 * h, half = 0.5 * h;
        for (int q = 0; q < 4; ++q) {
            const double s = mid + half * rule.nodes[q];
            const double w = half * rule.weights[q];
            const SpectralField& F = forcing.at(s);
            detail::check_aligned(F, dual);
            for (std::size_t i = 0; i < dual.size(); ++i) {
                const double k1 = eval_propagator(t - s, dual[i].eigenvalue).k1;
                for (std::size_t e = 0; e < out.coeffs[i].size(); ++e)
                    out.coeffs[i][e] += w * k1 * F.coeffs[i][e];
            }
        }
    }
    return out;
}

struct PicardReport {
    std::vector<EvolutionState> trajectory;  // converged iterate at all sample times
    std::vector<bool> is_panel_boundary;     // marks the n_time_steps+1 output times
    std::vector<double> diffs;               // successive X(T) distances
    double rho_hat = 0.0;                    // max ratio of successive differences
    double fixed_point_residual = 0.0;       // X(T) distance between u and N(u)
    int iterations = 0;
    bool converged = false;
    bool contraction_ok = false;
    bool blew_up = false;
    std::string diagnostic;

    bool success() const { return converged && contraction_ok && !blew_up; }
};

namespace detail {

/// Shared machinery for one Picard run: sample times are the panel boundaries
/// plus the 4 Gauss-Legendre nodes of each panel; evaluating the Duhamel
/// integral at a boundary touches only whole panels, while a node target adds
/// one partial panel whose forcing is interpolated by the cubic through the
/// panel's own 4 samples.
class PicardEngine {
public:
    PicardEngine(const CauchyData& data, const SemilinearConfig& cfg)
        : data_(data),
          cfg_(cfg),
          plan_(make_grid(data.u0.spec, cfg.oversample)),
          dual_(plan_.dual()) {
        const int n = cfg_.n_time_steps;
        const double h = cfg_.T / n;
        const auto& rule = panel_rule();
        for (int k = 0; k <= n; ++k) push_sample(h * k, -1, k);
        for (int k = 0; k < n; ++k)
            for (int q = 0; q < 4; ++q)
                push_sample(h * k + 0.5 * h * (1.0 + rule.nodes[q]), q, k);
        std::vector<std::size_t> order(samples_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return samples_[a].t < samples_[b].t; });
        std::vector<Sample> sorted;
        sorted.reserve(samples_.size());
        for (auto i : order) sorted.push_back(samples_[i]);
        samples_ = std::move(sorted);
        for (std::size_t i = 0; i < samples_.size(); ++i)
            if (samples_[i].gl_index >= 0) node_sample_[key(samples_[i].panel, samples_[i].gl_index)] = i;
    }

    const HarmonicPlan& plan() const { return plan_; }
    std::size_t sample_count() const { return samples_.size(); }
    double sample_time(std::size_t i) const { return samples_[i].t; }
    bool is_boundary(std::size_t i) const { return samples_[i].gl_index < 0; }

    std::vector<EvolutionState> homogeneous_trajectory() const {
        std::vector<EvolutionState> traj(samples_.size());
        parallel_for(samples_.size(), [&](std::size_t i) {
            traj[i] = evolve_homogeneous(data_, samples_[i].t);
        });
        return traj;
    }

    std::vector<SpectralField> forcing_of(const std::vector<EvolutionState>& traj) const {
        std::vector<SpectralField> F(traj.size());
        parallel_for(traj.size(), [&](std::size_t i) {
            F[i] = apply_nonlinearity(traj[i].u, cfg_.p, plan_);
        });
        return F;
    }

    /// One application of the mild-solution operator N to a stored forcing.
    std::vector<EvolutionState> apply_operator(const std::vector<SpectralField>& forcing) const {
        std::vector<EvolutionState> out(samples_.size());
        parallel_for(samples_.size(), [&](std::size_t i) { out[i] = evaluate_at(forcing, i); });
        return out;
    }

    double trajectory_distance(const std::vector<EvolutionState>& a,
                               const std::vector<EvolutionState>& b) const {
        double best = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            EvolutionState diff;
            diff.t = a[i].t;
            diff.u = a[i].u;
            diff.du = a[i].du;
            for (std::size_t r = 0; r < diff.u.coeffs.size(); ++r)
                for (std::size_t e = 0; e < diff.u.coeffs[r].size(); ++e) {
                    diff.u.coeffs[r][e] -= b[i].u.coeffs[r][e];
                    diff.du.coeffs[r][e] -= b[i].du.coeffs[r][e];
                }
            const auto n = energy_norms(diff);
            best = std::max(best, n[0] + n[1] + n[2] + n[3]);
        }
        return best;
    }

    bool exceeds_ceiling(const std::vector<EvolutionState>& traj) const {
        for (const auto& s : traj)
            for (const auto& block : s.u.coeffs)
                for (const auto& z : block) {
                    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return true;
                    if (std::abs(z) > cfg_.amplitude_ceiling) return true;
                }
        return false;
    }

private:
    struct Sample {
        double t;
        int gl_index;  // -1 for panel boundaries
        int panel;
    };

    static long key(int panel, int q) { return 8L * panel + q; }

    void push_sample(double t, int gl_index, int panel) { samples_.push_back({t, gl_index, panel}); }

    std::size_t node_sample(int panel, int q) const { return node_sample_.at(key(panel, q)); }

    EvolutionState evaluate_at(const std::vector<SpectralField>& forcing, std::size_t target) const {
        const double t = samples_[target].t;
        EvolutionState state = evolve_homogeneous(data_, t);

        const double h = cfg_.T / cfg_.n_time_steps;
        const auto& rule = panel_rule();
        // samples carry the panel they sit in (boundaries carry their index),
        // so panels 0 .. panel-1 lie entirely below t either way
        const int whole_panels = samples_[target].panel;
        for (int k = 0; k < whole_panels; ++k) {
            const double a = h * k, mid = a + 0.5 * h, half = 0.5 * h;
            for (int q = 0; q < 4; ++q) {
                const double s = mid + half * rule.nodes[q];
                const double w = half * rule.weights[q];
                accumulate(state, forcing[node_sample(k, q)], t, s, w);
            }
        }

        // partial panel [a, t] when t is an interior node
        if (samples_[target].gl_index >= 0) {
            const int k = samples_[target].panel;
            const double a = h * k;
            if (t > a) {
                const double mid = 0.5 * (a + t), half = 0.5 * (t - a);
                std::array<double, 4> panel_nodes;
                for (int q = 0; q < 4; ++q) panel_nodes[q] = a + h * 0.5 * (1.0 + rule.nodes[q]);
                for (int j = 0; j < 4; ++j) {
                    const double s = mid + half * rule.nodes[j];
                    const double w = half * rule.weights[j];
                    // cubic through the panel's 4 stored forcing samples
                    std::array<double, 4> lag;
                    for (int q = 0; q < 4; ++q) {
                        double num = 1.0, den = 1.0;
                        for (int r = 0; r < 4; ++r) {
                            if (r == q) continue;
                            num *= s - panel_nodes[r];
                            den *= panel_nodes[q] - panel_nodes[r];
                        }
                        lag[q] = num / den;
                    }
                    for (int q = 0; q < 4; ++q)
                        accumulate(state, forcing[node_sample(k, q)], t, s, w * lag[q]);
                }
            }
        }
        return state;
    }

    void accumulate(EvolutionState& state, const SpectralField& F, double t, double s, double w) const {
        for (std::size_t i = 0; i < dual_.size(); ++i) {
            const PropagatorValues k = eval_propagator(t - s, dual_[i].eigenvalue);
            for (std::size_t e = 0; e < state.u.coeffs[i].size(); ++e) {
                state.u.coeffs[i][e] += w * k.k1 * F.coeffs[i][e];
                state.du.coeffs[i][e] += w * k.dk1 * F.coeffs[i][e];
            }
        }
    }

    CauchyData data_;
    SemilinearConfig cfg_;
    HarmonicPlan plan_;
    const std::vector<Representation>& dual_;
    std::vector<Sample> samples_;
    std::map<long, std::size_t> node_sample_;
};

}  // namespace detail

/// Picard iteration on the mild-solution operator, starting from the
/// homogeneous solution. Stops when the successive X(T) distance drops below
/// picard_tol; reports the empirical contraction factor, divergence or
/// blow-up diagnostics, and the closing fixed-point residual.
inline PicardReport picard_solve(const CauchyData& data, const SemilinearConfig& cfg) {
    data.validate();
    cfg.validate(data.u0.spec);
    detail::PicardEngine engine(data, cfg);

    PicardReport report;
    std::vector<EvolutionState> current = engine.homogeneous_trajectory();
    // The homogeneous start is itself the first Picard step from the zero
    // guess (N applied to 0 gives exactly the homogeneous solution), so the
    // difference sequence opens with ||u⁽⁰⁾ - 0||.
    const double initial_step = xT_norm(current);

    for (int iter = 1; iter <= cfg.picard_max_iters; ++iter) {
        report.iterations = iter;
        auto forcing = engine.forcing_of(current);
        auto next = engine.apply_operator(forcing);
        if (engine.exceeds_ceiling(next)) {
            report.blew_up = true;
            report.diagnostic = "amplitude ceiling exceeded: possible blow-up, or T too large for this data";
            report.trajectory = std::move(current);
            break;
        }
        const double diff = engine.trajectory_distance(next, current);
        report.diffs.push_back(diff);
        current = std::move(next);
        if (diff < cfg.picard_tol) {
            report.converged = true;
            break;
        }
    }

    if (initial_step > 0.0 && !report.diffs.empty())
        report.rho_hat = report.diffs[0] / initial_step;
    for (std::size_t k = 1; k < report.diffs.size(); ++k)
        if (report.diffs[k - 1] > 0.0)
            report.rho_hat = std::max(report.rho_hat, report.diffs[k] / report.diffs[k - 1]);
    report.contraction_ok = report.rho_hat < 1.0;

    if (!report.blew_up) {
        if (!report.converged)
            report.diagnostic = report.contraction_ok
                                    ? "picard_max_iters exceeded before reaching picard_tol"
                                    : "iteration is not contracting (rho_hat >= 1): T too large for this data";
        report.trajectory = std::move(current);
        // one more operator application measures the closing residual
        auto residual_traj = engine.apply_operator(engine.forcing_of(report.trajectory));
        report.fixed_point_residual = engine.trajectory_distance(residual_traj, report.trajectory);
    }

    report.is_panel_boundary.resize(engine.sample_count());
    for (std::size_t i = 0; i < engine.sample_count(); ++i)
        report.is_panel_boundary[i] = engine.is_boundary(i);
    return report;
}

}  // namespace liewave
