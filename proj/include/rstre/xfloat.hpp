#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "rstre/errors.hpp"

namespace rstre {

// Wide-exponent float: value = frac * 2^exp2 with |frac| in [1,2) (or exactly
// zero). A double significand keeps full 53-bit relative accuracy while the
// 64-bit exponent absorbs any beta: exp(-beta*omega) never under- or
// overflows. Exponents beyond +-2^62 raise numeric_range_error.
struct XFloat {
    double frac = 0.0;
    std::int64_t exp2 = 0;

    static constexpr std::int64_t kExpBudget = std::int64_t(1) << 62;

    XFloat() = default;

    static XFloat zero() { return XFloat{}; }
    static XFloat one() { return XFloat{1.0, 0}; }

    static XFloat from_double(double x) {
        XFloat r;
        if (x == 0.0) return r;
        if (!std::isfinite(x)) throw numeric_range_error("XFloat: non-finite input");
        int e = 0;
        r.frac = 2.0 * std::frexp(x, &e);  // frexp gives [0.5,1); scale to [1,2)
        r.exp2 = e - 1;
        return r;
    }

    // exp(l) for a natural-log argument of any magnitude. l * log2(e) is done
    // in double-double so the split into integer exponent + fractional part
    // keeps ~1 ulp relative accuracy even for |l| ~ 1e9.
    static XFloat exp_of_log(double l) {
        if (l == -std::numeric_limits<double>::infinity()) return zero();
        if (!std::isfinite(l)) throw numeric_range_error("XFloat::exp_of_log: non-finite log");
        constexpr double kLog2eHi = 1.4426950408889634074;   // log2(e), head
        constexpr double kLog2eLo = 2.0355273740931033e-17;  // log2(e) - head
        const double hi = l * kLog2eHi;
        const double lo = std::fma(l, kLog2eHi, -hi) + l * kLog2eLo;
        double ip = std::floor(hi);
        double fp = (hi - ip) + lo;  // in (-eps, 1+eps)
        if (fp >= 1.0) { fp -= 1.0; ip += 1.0; }
        if (fp < 0.0) { fp += 1.0; ip -= 1.0; }
        if (std::abs(ip) >= static_cast<double>(kExpBudget))
            throw numeric_range_error("XFloat::exp_of_log: exponent budget exceeded");
        XFloat r;
        r.frac = std::exp2(fp);  // in [1,2)
        r.exp2 = static_cast<std::int64_t>(ip);
        if (r.frac >= 2.0) { r.frac *= 0.5; r.check_and_bump(1); }
        return r;
    }

    bool is_zero() const { return frac == 0.0; }
    bool negative() const { return frac < 0.0; }

    // Natural log of |value|; -inf for zero.
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(frac)) + static_cast<double>(exp2) * 0.6931471805599453094;
    }

    double to_double() const {  // saturates to 0 / +-inf outside double range
        if (is_zero()) return 0.0;
        if (exp2 > 1100) return frac > 0 ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
        if (exp2 < -1100) return frac > 0 ? 0.0 : -0.0;
        return std::ldexp(frac, static_cast<int>(exp2));
    }

    friend XFloat operator*(XFloat a, XFloat b) {
        if (a.is_zero() || b.is_zero()) return zero();
        XFloat r;
        r.frac = a.frac * b.frac;  // |.| in [1,4)
        r.exp2 = a.exp2 + b.exp2;
        if (std::abs(r.frac) >= 2.0) { r.frac *= 0.5; r.check_and_bump(1); }
        r.check_budget();
        return r;
    }

    friend XFloat operator/(XFloat a, XFloat b) {
        if (b.is_zero()) throw numeric_range_error("XFloat: division by zero");
        if (a.is_zero()) return zero();
        XFloat r;
        r.frac = a.frac / b.frac;  // |.| in (0.5,2)
        r.exp2 = a.exp2 - b.exp2;
        if (std::abs(r.frac) < 1.0) { r.frac *= 2.0; r.check_and_bump(-1); }
        r.check_budget();
        return r;
    }

    friend XFloat operator+(XFloat a, XFloat b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.exp2 < b.exp2) std::swap(a, b);
        const std::int64_t d = a.exp2 - b.exp2;
        if (d > 60) return a;  // b is below one ulp of a
        double sum = a.frac + std::ldexp(b.frac, -static_cast<int>(d));
        if (sum == 0.0) return zero();
        XFloat r;
        int e = 0;
        r.frac = 2.0 * std::frexp(sum, &e);
        r.exp2 = a.exp2 + e - 1;
        r.check_budget();
        return r;
    }

    friend XFloat operator-(XFloat a, XFloat b) { return a + (-b); }
    XFloat operator-() const { XFloat r{-frac, exp2}; if (frac == 0.0) r.exp2 = 0; return r; }

    XFloat& operator+=(const XFloat& o) { *this = *this + o; return *this; }
    XFloat& operator-=(const XFloat& o) { *this = *this - o; return *this; }
    XFloat& operator*=(const XFloat& o) { *this = *this * o; return *this; }
    XFloat& operator/=(const XFloat& o) { *this = *this / o; return *this; }

    XFloat abs() const { XFloat r{std::abs(frac), exp2}; return r; }

    // Compare |a| < |b|.
    static bool abs_less(const XFloat& a, const XFloat& b) {
        if (a.is_zero()) return !b.is_zero();
        if (b.is_zero()) return false;
        if (a.exp2 != b.exp2) return a.exp2 < b.exp2;
        return std::abs(a.frac) < std::abs(b.frac);
    }

    XFloat(double f, std::int64_t e) : frac(f), exp2(e) {}

private:
    void check_and_bump(std::int64_t d) {
        exp2 += d;
        check_budget();
    }
    void check_budget() const {
        if (exp2 >= kExpBudget || exp2 <= -kExpBudget)
            throw numeric_range_error("XFloat: exponent budget exceeded");
    }
};

}  // namespace rstre
