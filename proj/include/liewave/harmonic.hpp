#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "liewave/group.hpp"
#include "liewave/parallel.hpp"
#include "liewave/wigner.hpp"

namespace liewave {

using Complex = std::complex<double>;

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

inline int ceil_count(double oversample, int base) {
    return static_cast<int>(std::ceil(oversample * base - 1e-9));
}

}  // namespace detail

/// Quadrature grid realizing the normalized Haar integral.
///
/// Tori: uniform product grid, >= ceil(oversample*(2B+1)) nodes per axis,
/// equal weights. SU(2)/SO(3): Euler angles, uniform in α over [0,4π)
/// (resp. [0,2π)) and γ over [0,2π), Gauss-Legendre in cos β with
/// >= ceil(oversample*(B+1)) nodes. Weights sum to 1.
struct GridDescriptor {
    GroupSpec spec;
    double oversample = 2.0;
    std::vector<std::vector<double>> axis_nodes;
    std::vector<std::vector<double>> axis_weights;
    std::vector<double> weights;  // flattened, row-major over axes

    std::size_t node_count() const { return weights.size(); }
};

inline GridDescriptor make_grid(const GroupSpec& spec, double oversample = 2.0) {
    spec.validate();
    if (oversample < 1.0) throw std::invalid_argument("make_grid: oversample must be >= 1");
    GridDescriptor g;
    g.spec = spec;
    g.oversample = oversample;
    const int B = spec.bandlimit;
    const double two_pi = 2.0 * std::numbers::pi;

    if (spec.kind == GroupKind::Torus) {
        for (int a = 0; a < spec.dims; ++a) {
            const int n = detail::ceil_count(oversample, 2 * B + 1);
            std::vector<double> nodes(n), w(n, 1.0 / n);
            for (int i = 0; i < n; ++i) nodes[i] = two_pi * i / n;
            g.axis_nodes.push_back(std::move(nodes));
            g.axis_weights.push_back(std::move(w));
        }
    } else {
        const double alpha_period = spec.kind == GroupKind::SU2 ? 2.0 * two_pi : two_pi;
        const int na = detail::ceil_count(oversample, 2 * B + 1);
        const int nb = detail::ceil_count(oversample, B + 1);
        const int ng = detail::ceil_count(oversample, 2 * B + 1);

        std::vector<double> alpha(na), aw(na, 1.0 / na);
        for (int i = 0; i < na; ++i) alpha[i] = alpha_period * i / na;

        std::vector<double> x, xw;
        detail::gauss_legendre(nb, x, xw);
        std::vector<double> beta(nb), bw(nb);
        for (int j = 0; j < nb; ++j) {
            beta[j] = std::acos(x[nb - 1 - j]);  // ascending in β
            bw[j] = 0.5 * xw[nb - 1 - j];
        }

        std::vector<double> gamma(ng), gw(ng, 1.0 / ng);
        for (int k = 0; k < ng; ++k) gamma[k] = two_pi * k / ng;

        g.axis_nodes = {std::move(alpha), std::move(beta), std::move(gamma)};
        g.axis_weights = {std::move(aw), std::move(bw), std::move(gw)};
    }

    std::size_t total = 1;
    for (const auto& nodes : g.axis_nodes) total *= nodes.size();
    g.weights.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        double w = 1.0;
        std::size_t rem = idx;
        for (std::size_t a = g.axis_nodes.size(); a-- > 0;) {
            std::size_t n = g.axis_nodes[a].size();
            w *= g.axis_weights[a][rem % n];
            rem /= n;
        }
        g.weights[idx] = w;
    }
    return g;
}

/// Samples of a function at the grid nodes, paired with the grid.
struct GridField {
    GridDescriptor grid;
    std::vector<Complex> samples;

    GridField() = default;
    GridField(GridDescriptor g, std::vector<Complex> s) : grid(std::move(g)), samples(std::move(s)) {
        if (samples.size() != grid.node_count())
            throw std::invalid_argument("GridField: sample count does not match grid");
    }
};

/// Fourier coefficients: one d_ξ x d_ξ block (row-major) per representation,
/// aligned with enumerate_dual(spec).
struct SpectralField {
    GroupSpec spec;
    std::vector<std::vector<Complex>> coeffs;
};

inline SpectralField zero_spectral_field(const GroupSpec& spec) {
    SpectralField F;
    F.spec = spec;
    for (const auto& rep : enumerate_dual(spec))
        F.coeffs.emplace_back(static_cast<std::size_t>(rep.dim) * rep.dim, Complex(0.0, 0.0));
    return F;
}

namespace detail {

inline void check_aligned(const SpectralField& F, const std::vector<Representation>& dual) {
    if (F.coeffs.size() != dual.size())
        throw std::invalid_argument("SpectralField: coefficient blocks do not match the dual");
    for (std::size_t i = 0; i < dual.size(); ++i)
        if (F.coeffs[i].size() != static_cast<std::size_t>(dual[i].dim) * dual[i].dim)
            throw std::invalid_argument("SpectralField: block shape mismatch");
}

inline double hs_norm_sq(const std::vector<Complex>& block) {
    double s = 0.0;
    for (const auto& z : block) s += std::norm(z);
    return s;
}

}  // namespace detail

/// Precomputed transform tables for one (spec, grid) pair. Forward and
/// inverse are exact (to roundoff) for fields supported within the bandlimit
/// when the grid satisfies its oversampling contract.
class HarmonicPlan {
public:
    explicit HarmonicPlan(GridDescriptor grid) : grid_(std::move(grid)), dual_(enumerate_dual(grid_.spec)) {
        if (grid_.spec.kind == GroupKind::Torus)
            build_torus_tables();
        else
            build_euler_tables();
    }

    const GroupSpec& spec() const { return grid_.spec; }
    const GridDescriptor& grid() const { return grid_; }
    const std::vector<Representation>& dual() const { return dual_; }

    SpectralField forward(const GridField& f) const {
        if (f.samples.size() != grid_.node_count())
            throw std::invalid_argument("forward_gft: sample/grid shape mismatch");
        return grid_.spec.kind == GroupKind::Torus ? forward_torus(f) : forward_euler(f);
    }

    GridField inverse(const SpectralField& F) const {
        if (!(F.spec == grid_.spec))
            throw std::invalid_argument("inverse_gft: field spec does not match plan");
        detail::check_aligned(F, dual_);
        return grid_.spec.kind == GroupKind::Torus ? inverse_torus(F) : inverse_euler(F);
    }

private:
    // ---- torus ----
    void build_torus_tables() {
        const int B = grid_.spec.bandlimit;
        const int n_modes = 2 * B + 1;
        torus_phase_.resize(grid_.axis_nodes.size());
        for (std::size_t a = 0; a < grid_.axis_nodes.size(); ++a) {
            const auto& nodes = grid_.axis_nodes[a];
            torus_phase_[a].resize(nodes.size() * n_modes);
            for (std::size_t i = 0; i < nodes.size(); ++i)
                for (int k = -B; k <= B; ++k)
                    torus_phase_[a][i * n_modes + (k + B)] = std::polar(1.0, -k * nodes[i]);
        }
    }

    SpectralField forward_torus(const GridField& f) const {
        const int B = grid_.spec.bandlimit;
        const int n_modes = 2 * B + 1;
        const std::size_t n_axes = grid_.axis_nodes.size();
        SpectralField F;
        F.spec = grid_.spec;
        F.coeffs.resize(dual_.size());
        parallel_for(dual_.size(), [&](std::size_t r) {
            const auto& k = dual_[r].index.components;
            Complex acc(0.0, 0.0);
            const std::size_t total = f.samples.size();
            for (std::size_t idx = 0; idx < total; ++idx) {
                Complex phase(1.0, 0.0);
                std::size_t rem = idx;
                for (std::size_t a = n_axes; a-- > 0;) {
                    const std::size_t n = grid_.axis_nodes[a].size();
                    phase *= torus_phase_[a][(rem % n) * n_modes + (k[a] + B)];
                    rem /= n;
                }
                acc += grid_.weights[idx] * f.samples[idx] * phase;
            }
            F.coeffs[r] = {acc};
        });
        return F;
    }

    GridField inverse_torus(const SpectralField& F) const {
        const int B = grid_.spec.bandlimit;
        const int n_modes = 2 * B + 1;
        const std::size_t n_axes = grid_.axis_nodes.size();
        GridField f;
        f.grid = grid_;
        f.samples.assign(grid_.node_count(), Complex(0.0, 0.0));
        parallel_for(f.samples.size(), [&](std::size_t idx) {
            Complex acc(0.0, 0.0);
            for (std::size_t r = 0; r < dual_.size(); ++r) {
                const auto& k = dual_[r].index.components;
                Complex phase(1.0, 0.0);
                std::size_t rem = idx;
                for (std::size_t a = n_axes; a-- > 0;) {
                    const std::size_t n = grid_.axis_nodes[a].size();
                    phase *= std::conj(torus_phase_[a][(rem % n) * n_modes + (k[a] + B)]);
                    rem /= n;
                }
                acc += F.coeffs[r][0] * phase;
            }
            f.samples[idx] = acc;
        });
        return f;
    }

    // ---- SU(2) / SO(3), separated over (γ, α, β) stages ----
    int rep_two_l(const Representation& rep) const {
        return grid_.spec.kind == GroupKind::SU2 ? rep.index.components[0] : 2 * rep.index.components[0];
    }

    void build_euler_tables() {
        two_l_max_ = 0;
        for (const auto& rep : dual_) two_l_max_ = std::max(two_l_max_, rep_two_l(rep));
        const auto& beta = grid_.axis_nodes[1];
        wigner_.reserve(beta.size());
        for (double b : beta) wigner_.emplace_back(two_l_max_, b);

        const int slots = 2 * two_l_max_ + 1;
        const auto& alpha = grid_.axis_nodes[0];
        const auto& gamma = grid_.axis_nodes[2];
        alpha_phase_.resize(alpha.size() * slots);
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (int tm = -two_l_max_; tm <= two_l_max_; ++tm)
                alpha_phase_[i * slots + (tm + two_l_max_)] = std::polar(1.0, -0.5 * tm * alpha[i]);
        gamma_phase_.resize(gamma.size() * slots);
        for (std::size_t k = 0; k < gamma.size(); ++k)
            for (int tn = -two_l_max_; tn <= two_l_max_; ++tn)
                gamma_phase_[k * slots + (tn + two_l_max_)] = std::polar(1.0, -0.5 * tn * gamma[k]);
    }

    SpectralField forward_euler(const GridField& f) const {
        const std::size_t na = grid_.axis_nodes[0].size();
        const std::size_t nb = grid_.axis_nodes[1].size();
        const std::size_t ng = grid_.axis_nodes[2].size();
        const int slots = 2 * two_l_max_ + 1;
        const auto& aw = grid_.axis_weights[0];
        const auto& bw = grid_.axis_weights[1];
        const auto& gw = grid_.axis_weights[2];

        // Stage 1: integrate out γ. A[i][j][n] = Σ_k gw_k e^{+i n γ_k} f(i,j,k)
        std::vector<Complex> A(na * nb * slots, Complex(0.0, 0.0));
        parallel_for(na, [&](std::size_t i) {
            for (std::size_t j = 0; j < nb; ++j) {
                const Complex* row = f.samples.data() + (i * nb + j) * ng;
                Complex* out = A.data() + (i * nb + j) * slots;
                for (std::size_t k = 0; k < ng; ++k) {
                    const Complex wf = gw[k] * row[k];
                    const Complex* ph = gamma_phase_.data() + k * slots;
                    for (int s = 0; s < slots; ++s) out[s] += wf * std::conj(ph[s]);
                }
            }
        });

        // Stage 2: integrate out α. Bv[m][j][n] = Σ_i aw_i e^{+i m α_i} A[i][j][n]
        std::vector<Complex> Bv(static_cast<std::size_t>(slots) * nb * slots, Complex(0.0, 0.0));
        parallel_for(static_cast<std::size_t>(slots), [&](std::size_t mi) {
            for (std::size_t i = 0; i < na; ++i) {
                const Complex phase = aw[i] * std::conj(alpha_phase_[i * slots + mi]);
                const Complex* src = A.data() + i * nb * slots;
                Complex* out = Bv.data() + mi * nb * slots;
                for (std::size_t jn = 0; jn < nb * static_cast<std::size_t>(slots); ++jn)
                    out[jn] += phase * src[jn];
            }
        });

        // Stage 3: β quadrature against the Wigner d entries.
        SpectralField F;
        F.spec = grid_.spec;
        F.coeffs.resize(dual_.size());
        parallel_for(dual_.size(), [&](std::size_t ri) {
            const int two_l = rep_two_l(dual_[ri]);
            const int d = dual_[ri].dim;
            std::vector<Complex> block(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
            for (std::size_t j = 0; j < nb; ++j) {
                const auto& dm = wigner_[j].matrix(two_l);
                for (int r = 0; r < d; ++r) {
                    const int n_slot = (two_l - 2 * r) + two_l_max_;  // column index r <-> n
                    for (int c = 0; c < d; ++c) {
                        const int m_slot = (two_l - 2 * c) + two_l_max_;  // row index c <-> m
                        block[static_cast<std::size_t>(r) * d + c] +=
                            bw[j] * dm[static_cast<std::size_t>(c) * d + r] *
                            Bv[(static_cast<std::size_t>(m_slot) * nb + j) * slots + n_slot];
                    }
                }
            }
            F.coeffs[ri] = std::move(block);
        });
        return F;
    }

    GridField inverse_euler(const SpectralField& F) const {
        const std::size_t na = grid_.axis_nodes[0].size();
        const std::size_t nb = grid_.axis_nodes[1].size();
        const std::size_t ng = grid_.axis_nodes[2].size();
        const int slots = 2 * two_l_max_ + 1;

        // Stage 1: H[m][j][n] = Σ_l d_l d^l_{mn}(β_j) F(l)_{nm}
        std::vector<Complex> H(static_cast<std::size_t>(slots) * nb * slots, Complex(0.0, 0.0));
        parallel_for(nb, [&](std::size_t j) {
            for (std::size_t ri = 0; ri < dual_.size(); ++ri) {
                const int two_l = rep_two_l(dual_[ri]);
                const int d = dual_[ri].dim;
                const auto& dm = wigner_[j].matrix(two_l);
                const auto& block = F.coeffs[ri];
                for (int a = 0; a < d; ++a) {
                    const int m_slot = (two_l - 2 * a) + two_l_max_;
                    for (int b = 0; b < d; ++b) {
                        const int n_slot = (two_l - 2 * b) + two_l_max_;
                        H[(static_cast<std::size_t>(m_slot) * nb + j) * slots + n_slot] +=
                            static_cast<double>(d) * dm[static_cast<std::size_t>(a) * d + b] *
                            block[static_cast<std::size_t>(b) * d + a];
                    }
                }
            }
        });

        // Stage 2: synthesize γ. P[m][j][k] = Σ_n e^{-i n γ_k} H[m][j][n]
        std::vector<Complex> P(static_cast<std::size_t>(slots) * nb * ng, Complex(0.0, 0.0));
        parallel_for(static_cast<std::size_t>(slots), [&](std::size_t mi) {
            for (std::size_t j = 0; j < nb; ++j) {
                const Complex* h = H.data() + (mi * nb + j) * slots;
                Complex* out = P.data() + (mi * nb + j) * ng;
                for (std::size_t k = 0; k < ng; ++k) {
                    const Complex* ph = gamma_phase_.data() + k * slots;
                    Complex acc(0.0, 0.0);
                    for (int s = 0; s < slots; ++s) acc += ph[s] * h[s];
                    out[k] = acc;
                }
            }
        });

        // Stage 3: synthesize α.
        GridField f;
        f.grid = grid_;
        f.samples.assign(grid_.node_count(), Complex(0.0, 0.0));
        parallel_for(na, [&](std::size_t i) {
            const Complex* ph = alpha_phase_.data() + i * slots;
            for (std::size_t j = 0; j < nb; ++j) {
                Complex* out = f.samples.data() + (i * nb + j) * ng;
                for (int s = 0; s < slots; ++s) {
                    const Complex phase = ph[s];
                    const Complex* p = P.data() + (static_cast<std::size_t>(s) * nb + j) * ng;
                    for (std::size_t k = 0; k < ng; ++k) out[k] += phase * p[k];
                }
            }
        });
        return f;
    }

    GridDescriptor grid_;
    std::vector<Representation> dual_;
    std::vector<std::vector<Complex>> torus_phase_;
    std::vector<WignerTable> wigner_;
    std::vector<Complex> alpha_phase_;
    std::vector<Complex> gamma_phase_;
    int two_l_max_ = 0;
};

inline SpectralField forward_gft(const GridField& f) { return HarmonicPlan(f.grid).forward(f); }

inline GridField inverse_gft(const SpectralField& F, const GridDescriptor& grid) {
    return HarmonicPlan(grid).inverse(F);
}

/// sqrt( Σ_ξ d_ξ ||F(ξ)||²_HS ), the spectral side of the Plancherel identity.
inline double plancherel_norm(const SpectralField& F) {
    auto dual = enumerate_dual(F.spec);
    detail::check_aligned(F, dual);
    double s = 0.0;
    for (std::size_t i = 0; i < dual.size(); ++i) s += dual[i].dim * detail::hs_norm_sq(F.coeffs[i]);
    return std::sqrt(s);
}

/// (-L)^{s/2}: multiplies the block at ξ by (λ_ξ²)^{s/2}. The trivial
/// representation is annihilated for s > 0 and untouched for s = 0.
inline SpectralField sobolev_apply(const SpectralField& F, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_apply: order must be >= 0");
    if (s == 0.0) return F;
    auto dual = enumerate_dual(F.spec);
    detail::check_aligned(F, dual);
    SpectralField out = F;
    for (std::size_t i = 0; i < dual.size(); ++i) {
        const double factor = std::pow(dual[i].eigenvalue_d(), 0.5 * s);
        for (auto& z : out.coeffs[i]) z *= factor;
    }
    return out;
}

/// sup_ξ d_ξ^{-1/2} ||F(ξ)||_HS, the ℓ∞ norm on the dual.
inline double linf_dual_norm(const SpectralField& F) {
    auto dual = enumerate_dual(F.spec);
    detail::check_aligned(F, dual);
    double best = 0.0;
    for (std::size_t i = 0; i < dual.size(); ++i) {
        double v = std::sqrt(detail::hs_norm_sq(F.coeffs[i]) / dual[i].dim);
        if (v > best) best = v;
    }
    return best;
}

/// Quadrature L^q norm, q in [1, ∞]; q = ∞ gives the max modulus.
inline double lq_norm(const GridField& f, double q) {
    if (std::isinf(q)) {
        double best = 0.0;
        for (const auto& z : f.samples) best = std::max(best, std::abs(z));
        return best;
    }
    if (q < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        s += f.grid.weights[i] * std::pow(std::abs(f.samples[i]), q);
    return std::pow(s, 1.0 / q);
}

/// ||f||_{L²} + ||(-L)^{1/2} f||_{L²}, evaluated spectrally in one pass.
inline double h1_norm(const SpectralField& F) {
    auto dual = enumerate_dual(F.spec);
    detail::check_aligned(F, dual);
    double l2 = 0.0, grad = 0.0;
    for (std::size_t i = 0; i < dual.size(); ++i) {
        const double hs = detail::hs_norm_sq(F.coeffs[i]);
        l2 += dual[i].dim * hs;
        grad += dual[i].dim * dual[i].eigenvalue_d() * hs;
    }
    return std::sqrt(l2) + std::sqrt(grad);
}

}  // namespace liewave
