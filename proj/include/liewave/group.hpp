#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewave/rational.hpp"

namespace liewave {

enum class GroupKind { Torus, SU2, SO3 };

/// Frequency regions of the unitary dual, split by the eigenvalue λ² of -L:
/// R1: λ² = 0 (trivial representation), R2: 0 < λ² < 1, R3: λ² = 1 (the
/// resonance of the two characteristic roots), R4: λ² > 1.
enum class Region { R1, R2, R3, R4 };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::R1: return "R1";
        case Region::R2: return "R2";
        case Region::R3: return "R3";
        case Region::R4: return "R4";
    }
    return "?";
}

/// Which group to work on, its metric scaling, and the spectral truncation.
///
/// Truncation convention: |k|_inf <= B on T^n, 2l <= B on SU(2) (doubled-spin
/// index m = 2l), l <= B on SO(3). Torus radii scale the metric so that
/// λ_k² = Σ k_j² / r_j²; that is the knob that populates region R2 on tori.
struct GroupSpec {
    GroupKind kind = GroupKind::Torus;
    int dims = 1;                  // torus rank n; fixed 3 for SU2/SO3
    std::vector<Rational> radii;   // torus only, one per axis
    int bandlimit = 1;

    static GroupSpec torus(std::vector<Rational> radii, int bandlimit) {
        GroupSpec s;
        s.kind = GroupKind::Torus;
        s.dims = static_cast<int>(radii.size());
        s.radii = std::move(radii);
        s.bandlimit = bandlimit;
        s.validate();
        return s;
    }
    static GroupSpec su2(int bandlimit) {
        GroupSpec s;
        s.kind = GroupKind::SU2;
        s.dims = 3;
        s.bandlimit = bandlimit;
        s.validate();
        return s;
    }
    static GroupSpec so3(int bandlimit) {
        GroupSpec s;
        s.kind = GroupKind::SO3;
        s.dims = 3;
        s.bandlimit = bandlimit;
        s.validate();
        return s;
    }

    int topological_dim() const { return kind == GroupKind::Torus ? dims : 3; }

    void validate() const {
        if (bandlimit < 1) throw std::invalid_argument("GroupSpec: bandlimit must be >= 1");
        if (kind == GroupKind::Torus) {
            if (dims < 1) throw std::invalid_argument("GroupSpec: torus rank must be >= 1");
            if (static_cast<int>(radii.size()) != dims)
                throw std::invalid_argument("GroupSpec: need one radius per torus axis");
            for (const auto& r : radii)
                if (!(Rational(0) < r)) throw std::invalid_argument("GroupSpec: radii must be positive");
        } else {
            if (!radii.empty()) throw std::invalid_argument("GroupSpec: radii only apply to tori");
        }
    }

    friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
        return a.kind == b.kind && a.dims == b.dims && a.radii == b.radii && a.bandlimit == b.bandlimit;
    }
};

/// One point of the unitary dual. Components hold the integer vector k for
/// tori, {m = 2l} for SU(2), {l} for SO(3).
struct RepIndex {
    std::vector<int> components;

    friend bool operator==(const RepIndex& a, const RepIndex& b) { return a.components == b.components; }
    friend bool operator<(const RepIndex& a, const RepIndex& b) {
        return std::lexicographical_compare(a.components.begin(), a.components.end(),
                                            b.components.begin(), b.components.end());
    }

    std::string label() const {
        std::string out;
        for (std::size_t i = 0; i < components.size(); ++i) {
            if (i) out += '_';
            out += std::to_string(components[i]);
        }
        return out;
    }
};

struct Representation {
    RepIndex index;
    int dim = 1;
    Rational eigenvalue;  // λ² of -L, exact
    Region region = Region::R1;

    double eigenvalue_d() const { return eigenvalue.to_double(); }
};

/// Exact region classification; no floating comparison against 1.
inline Region region_of(const Rational& lambda2) {
    const Rational zero(0), one(1);
    if (lambda2 < zero) throw std::invalid_argument("region_of: eigenvalue must be >= 0");
    if (lambda2 == zero) return Region::R1;
    if (lambda2 < one) return Region::R2;
    if (lambda2 == one) return Region::R3;
    return Region::R4;
}

namespace detail {

inline void enumerate_torus(const GroupSpec& spec, std::vector<Representation>& out) {
    const int n = spec.dims;
    const int B = spec.bandlimit;
    std::vector<Rational> inv_r2(n);
    for (int j = 0; j < n; ++j) inv_r2[j] = (spec.radii[j] * spec.radii[j]).reciprocal();

    std::vector<int> k(n, -B);
    while (true) {
        Rational lambda2(0);
        for (int j = 0; j < n; ++j) lambda2 = lambda2 + Rational(std::int64_t(k[j]) * k[j]) * inv_r2[j];
        Representation rep;
        rep.index.components = k;
        rep.dim = 1;
        rep.eigenvalue = lambda2;
        rep.region = region_of(lambda2);
        out.push_back(std::move(rep));
        // lexicographic odometer, last component fastest
        int j = n - 1;
        while (j >= 0 && k[j] == B) {
            k[j] = -B;
            --j;
        }
        if (j < 0) break;
        ++k[j];
    }
}

}  // namespace detail

/// Enumerates the truncated unitary dual in deterministic (lexicographic)
/// index order. Eigenvalues follow the Casimir conventions above.
inline std::vector<Representation> enumerate_dual(const GroupSpec& spec) {
    spec.validate();
    std::vector<Representation> out;
    switch (spec.kind) {
        case GroupKind::Torus:
            detail::enumerate_torus(spec, out);
            break;
        case GroupKind::SU2:
            for (int m = 0; m <= spec.bandlimit; ++m) {  // m = 2l
                Representation rep;
                rep.index.components = {m};
                rep.dim = m + 1;
                rep.eigenvalue = Rational(std::int64_t(m) * (m + 2), 4);  // l(l+1), l = m/2
                rep.region = region_of(rep.eigenvalue);
                out.push_back(std::move(rep));
            }
            break;
        case GroupKind::SO3:
            for (int l = 0; l <= spec.bandlimit; ++l) {
                Representation rep;
                rep.index.components = {l};
                rep.dim = 2 * l + 1;
                rep.eigenvalue = Rational(std::int64_t(l) * (l + 1));
                rep.region = region_of(rep.eigenvalue);
                out.push_back(std::move(rep));
            }
            break;
    }
    return out;
}

/// Spectral gap constants of the truncated dual:
///   delta1 = min over nonzero eigenvalues of min(λ², 1), in (0, 1];
///   delta2 = largest eigenvalue < 1 (absent when R2 is empty);
///   delta3 = least eigenvalue > 1 (absent when R4 is empty).
struct SpectralGaps {
    double delta1 = 1.0;
    std::optional<double> delta2;
    std::optional<double> delta3;
};

inline SpectralGaps spectral_gaps(const std::vector<Representation>& dual) {
    if (dual.empty()) throw std::invalid_argument("spectral_gaps: empty dual");
    const Rational one(1);
    std::optional<Rational> d1, d2, d3;
    for (const auto& rep : dual) {
        const Rational& ev = rep.eigenvalue;
        if (ev == Rational(0)) continue;
        Rational clamped = ev < one ? ev : one;
        if (!d1 || clamped < *d1) d1 = clamped;
        if (ev < one && (!d2 || *d2 < ev)) d2 = ev;
        if (one < ev && (!d3 || ev < *d3)) d3 = ev;
    }
    if (!d1)
        throw std::invalid_argument("spectral_gaps: only the trivial representation present, gaps undefined");
    SpectralGaps gaps;
    gaps.delta1 = d1->to_double();
    if (d2) gaps.delta2 = d2->to_double();
    if (d3) gaps.delta3 = d3->to_double();
    return gaps;
}

/// Peter-Weyl dimension accounting: number of retained basis functions.
inline std::size_t basis_function_count(const std::vector<Representation>& dual) {
    std::size_t total = 0;
    for (const auto& rep : dual) total += static_cast<std::size_t>(rep.dim) * rep.dim;
    return total;
}

}  // namespace liewave
