#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewave/harmonic.hpp"

namespace liewave {

/// Seeded Gaussian source with a fully specified bit path (mt19937_64 plus an
/// explicit 53-bit uniform and Box-Muller), so identical seeds reproduce the
/// same stream on any standard library.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // in [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// f ≡ value: one coefficient at the trivial representation.
inline SpectralField constant_field(const GroupSpec& spec, Complex value = Complex(1.0, 0.0)) {
    SpectralField F = zero_spectral_field(spec);
    auto dual = enumerate_dual(spec);
    for (std::size_t i = 0; i < dual.size(); ++i)
        if (dual[i].region == Region::R1) F.coeffs[i][0] = value;
    return F;
}

/// Real single-frequency data of unit L² norm.
///
/// Tori: √2·cos(k·θ), i.e. coefficients 1/√2 at ±k (k = 0 gives the constant
/// 1). SU(2)/SO(3): the character of the indexed representation, whose
/// coefficient block is I/d (characters are orthonormal and real here).
inline SpectralField single_mode_field(const GroupSpec& spec, const std::vector<int>& index) {
    auto dual = enumerate_dual(spec);
    SpectralField F = zero_spectral_field(spec);
    if (spec.kind == GroupKind::Torus) {
        if (static_cast<int>(index.size()) != spec.dims)
            throw std::invalid_argument("single_mode: index rank does not match torus rank");
        bool zero = true;
        std::vector<int> neg(index.size());
        for (std::size_t j = 0; j < index.size(); ++j) {
            if (std::abs(index[j]) > spec.bandlimit)
                throw std::invalid_argument("single_mode: index outside the bandlimit");
            if (index[j] != 0) zero = false;
            neg[j] = -index[j];
        }
        const double amp = zero ? 1.0 : 1.0 / std::sqrt(2.0);
        bool placed = false;
        for (std::size_t i = 0; i < dual.size(); ++i) {
            if (dual[i].index.components == index || dual[i].index.components == neg) {
                F.coeffs[i][0] = Complex(amp, 0.0);
                placed = true;
            }
        }
        if (!placed) throw std::invalid_argument("single_mode: index not enumerated");
        return F;
    }
    if (index.size() != 1) throw std::invalid_argument("single_mode: one spin index expected");
    for (std::size_t i = 0; i < dual.size(); ++i) {
        if (dual[i].index.components == index) {
            const int d = dual[i].dim;
            for (int r = 0; r < d; ++r) F.coeffs[i][static_cast<std::size_t>(r) * d + r] = 1.0 / d;
            return F;
        }
    }
    throw std::invalid_argument("single_mode: index outside the bandlimit");
}

/// Random bandlimited field: independent complex Gaussian coefficients, then
/// (by default) projected to a real-valued function via Re on the grid, which
/// preserves the bandlimit. Deterministic in the seed.
inline SpectralField random_field(const HarmonicPlan& plan, std::uint64_t seed, bool real_valued = true) {
    DeterministicRng rng(seed);
    SpectralField F = zero_spectral_field(plan.spec());
    for (auto& block : F.coeffs)
        for (auto& z : block) {
            const double re = rng.gaussian();
            const double im = rng.gaussian();
            z = Complex(re, im) / std::sqrt(2.0);
        }
    if (!real_valued) return F;
    GridField g = plan.inverse(F);
    for (auto& z : g.samples) z = Complex(z.real(), 0.0);
    return plan.forward(g);
}

}  // namespace liewave
