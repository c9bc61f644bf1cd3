#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace liewave {

/// Wigner d-matrices d^l_{mn}(β) for all l up to a cap, half-integer spins
/// included. Spins are carried as doubled integers (two_l, two_m, two_n) so
/// half-integers stay exact.
///
/// Layout: matrix for two_l is (two_l+1) x (two_l+1), row-major, with row
/// r <-> m = l - r and column c <-> n = l - c (m descending, the usual
/// ordering of matrix elements of a spin-l rotation).
///
/// Built by the three-term recurrence in l at fixed (m, n):
///   d^{J+1} = [ (2J+1)(J(J+1)x - mn) d^J
///               - (J+1)sqrt((J²-m²)(J²-n²)) d^{J-1} ]
///             / ( J sqrt(((J+1)²-m²)((J+1)²-n²)) ),  x = cos β,
/// seeded at J0 = max(|m|,|n|) with the boundary closed form
///   d^j_{m,j} = sqrt( (2j)! / ((j+m)!(j-m)!) ) cos^{j+m}(β/2) sin^{j-m}(β/2)
/// (log-space evaluation; the direct factorial form overflows beyond small l)
/// and the symmetries d_{a,b} = (-1)^{a-b} d_{b,a} = (-1)^{a-b} d_{-a,-b}.
class WignerTable {
public:
    WignerTable(int two_l_max, double beta) : two_l_max_(two_l_max) {
        if (two_l_max < 0) throw std::invalid_argument("WignerTable: negative spin cap");
        mats_.resize(static_cast<std::size_t>(two_l_max) + 1);
        for (int tl = 0; tl <= two_l_max; ++tl)
            mats_[tl].assign(static_cast<std::size_t>(tl + 1) * (tl + 1), 0.0);
        build(beta);
    }

    int two_l_max() const { return two_l_max_; }

    /// d^l_{mn}(β) with doubled arguments. two_m, two_n must match the parity
    /// of two_l and lie in [-two_l, two_l].
    double d(int two_l, int two_m, int two_n) const {
        const int r = (two_l - two_m) / 2;
        const int c = (two_l - two_n) / 2;
        return mats_[two_l][static_cast<std::size_t>(r) * (two_l + 1) + c];
    }

    /// Whole spin-l block, row-major as described above.
    const std::vector<double>& matrix(int two_l) const { return mats_[two_l]; }

private:
    // sqrt((2j)! / ((j+m)!(j-m)!)) * c^{j+m} * s^{j-m}, via logs; c,s >= 0.
    static double boundary(double j, double m, double c, double s) {
        const double a = j + m;  // exponent of c
        const double b = j - m;  // exponent of s
        if (c == 0.0 && a > 0.0) return 0.0;
        if (s == 0.0 && b > 0.0) return 0.0;
        double ln = 0.5 * (std::lgamma(2.0 * j + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0));
        if (a > 0.0) ln += a * std::log(c);
        if (b > 0.0) ln += b * std::log(s);
        return std::exp(ln);
    }

    // Seed d^{J0}_{mn} at J0 = max(|m|,|n|), reduced to the n = +J0 boundary
    // case through the symmetries noted above.
    static double seed(int two_m, int two_n, double c, double s) {
        const int two_j0 = std::abs(two_m) > std::abs(two_n) ? std::abs(two_m) : std::abs(two_n);
        const double j0 = 0.5 * two_j0;
        const double m = 0.5 * two_m;
        const double n = 0.5 * two_n;
        auto sign = [](int twice_exponent) { return (twice_exponent / 2) % 2 == 0 ? 1.0 : -1.0; };
        if (two_n == two_j0) return boundary(j0, m, c, s);
        if (two_n == -two_j0) return sign(two_m + two_j0) * boundary(j0, -m, c, s);
        if (two_m == two_j0) return sign(two_j0 - two_n) * boundary(j0, n, c, s);
        // two_m == -two_j0
        return boundary(j0, -n, c, s);
    }

    void build(double beta) {
        const double x = std::cos(beta);
        const double c = std::cos(0.5 * beta);
        const double s = std::sin(0.5 * beta);
        for (int two_m = -two_l_max_; two_m <= two_l_max_; ++two_m) {
            for (int two_n = -two_l_max_; two_n <= two_l_max_; ++two_n) {
                if (((two_m ^ two_n) & 1) != 0) continue;  // parity mismatch
                const int two_j0 = std::max(std::abs(two_m), std::abs(two_n));
                if (two_j0 > two_l_max_) continue;
                const double m = 0.5 * two_m;
                const double n = 0.5 * two_n;
                double prev = 0.0;  // d^{J-1}
                double cur = seed(two_m, two_n, c, s);
                store(two_j0, two_m, two_n, cur);
                for (int two_j = two_j0; two_j + 2 <= two_l_max_; two_j += 2) {
                    const double J = 0.5 * two_j;
                    const double Jp = J + 1.0;
                    const double denom = J * std::sqrt((Jp * Jp - m * m) * (Jp * Jp - n * n));
                    double next;
                    if (two_j == 0) {
                        // J = 0 only occurs with m = n = 0: d^1_{00} = x.
                        next = x;
                    } else {
                        const double an = (2.0 * J + 1.0) * (J * Jp * x - m * n);
                        const double bn = Jp * std::sqrt((J * J - m * m) * (J * J - n * n));
                        next = (an * cur - bn * prev) / denom;
                    }
                    prev = cur;
                    cur = next;
                    store(two_j + 2, two_m, two_n, cur);
                }
            }
        }
    }

    void store(int two_l, int two_m, int two_n, double value) {
        const int r = (two_l - two_m) / 2;
        const int col = (two_l - two_n) / 2;
        mats_[two_l][static_cast<std::size_t>(r) * (two_l + 1) + col] = value;
    }

    int two_l_max_;
    std::vector<std::vector<double>> mats_;
};

}  // namespace liewave
