#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace liewave {

/// Exact rational arithmetic for Laplace-Beltrami eigenvalues.
///
/// The frequency regions split on λ² = 0 and λ² = 1 exactly; a floating
/// comparison there would route resonant modes through the wrong propagator
/// branch. Eigenvalues therefore stay rational (k²/r² on tori, quarter
/// integers ℓ(ℓ+1) on SU(2)) until a numerical kernel needs a double.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value) : num_(value), den_(1) {}
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num_) * b.num_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational reciprocal() const {
        if (num_ == 0) throw std::domain_error("Rational: reciprocal of zero");
        return Rational(den_, num_);
    }

    std::string to_string() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Exact conversion of a finite double (every finite double is dyadic).
    /// Throws if the dyadic form does not fit in 64-bit num/den.
    static Rational from_double(double x) {
        if (!std::isfinite(x)) throw std::invalid_argument("Rational: non-finite value");
        if (x == 0.0) return Rational(0);
        int exp = 0;
        double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
        // 53 mantissa bits; strip trailing zeros first to keep magnitudes small.
        std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
        exp -= 53;
        while (mant != 0 && (mant % 2) == 0) {
            mant /= 2;
            ++exp;
        }
        if (exp >= 0) {
            if (exp > 62) throw std::invalid_argument("Rational: value too large for exact form");
            __int128 n = static_cast<__int128>(mant) << exp;
            return from_wide(n, 1);
        }
        if (-exp > 62) throw std::invalid_argument("Rational: value not representable exactly; use a p/q string");
        return Rational(mant, std::int64_t(1) << (-exp));
    }

    /// Parses "p/q", an integer, or a decimal literal (converted exactly).
    static Rational parse(const std::string& text) {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            std::size_t pos1 = 0, pos2 = 0;
            std::int64_t p = std::stoll(text.substr(0, slash), &pos1);
            std::int64_t q = std::stoll(text.substr(slash + 1), &pos2);
            if (pos1 != slash || pos2 != text.size() - slash - 1)
                throw std::invalid_argument("Rational: malformed fraction '" + text + "'");
            return Rational(p, q);
        }
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("Rational: malformed number '" + text + "'");
        return from_double(v);
    }

private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd_wide(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 kMax = INT64_MAX;
        if (n > kMax || n < -kMax || d > kMax)
            throw std::overflow_error("Rational: arithmetic overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }
    static __int128 gcd_wide(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
    void normalize() {
        Rational r = from_wide(num_, den_);
        num_ = r.num_;
        den_ = r.den_;
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace liewave
