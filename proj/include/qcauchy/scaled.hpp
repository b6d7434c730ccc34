#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace qcauchy {

// Complex number stored as u * exp(lg) with |u| kept near 1. The kernel
// matrix elements combine factors like q^{-m^2/(2N)} whose magnitudes leave
// the double range long before the (bounded) conjugated products do, so all
// intermediate products are tracked in this form.
struct Scaled {
    double lg = -std::numeric_limits<double>::infinity();
    std::complex<double> u{0.0, 0.0};

    static Scaled from(std::complex<double> z) {
        if (z == std::complex<double>(0.0)) return {};
        Scaled s;
        s.lg = std::log(std::abs(z));
        s.u = z / std::abs(z);
        return s;
    }
    static Scaled from_log(double lg, std::complex<double> dir = {1.0, 0.0}) {
        Scaled s;
        s.lg = lg;
        s.u = dir;
        return s;
    }
    static Scaled one() { return from_log(0.0); }

    bool is_zero() const { return std::isinf(lg) && lg < 0; }

    void normalize() {
        double a = std::abs(u);
        if (a == 0.0) { lg = -std::numeric_limits<double>::infinity(); return; }
        if (a > 2.0 || a < 0.5) {
            lg += std::log(a);
            u /= a;
        }
    }

    Scaled& operator*=(const Scaled& o) {
        if (is_zero() || o.is_zero()) { *this = Scaled{}; return *this; }
        lg += o.lg;
        u *= o.u;
        normalize();
        return *this;
    }
    Scaled& operator*=(std::complex<double> z) { return *this *= from(z); }
    Scaled& operator/=(const Scaled& o) {
        if (is_zero()) return *this;
        lg -= o.lg;
        u /= o.u;
        normalize();
        return *this;
    }
    friend Scaled operator*(Scaled a, const Scaled& b) { a *= b; return a; }
    friend Scaled operator/(Scaled a, const Scaled& b) { a /= b; return a; }

    // Exports to a plain complex; underflows flush to 0, overflow to inf.
    std::complex<double> value() const {
        if (is_zero()) return {0.0, 0.0};
        return u * std::exp(lg);
    }
};

// log-sum-exp style accumulation of scaled terms.
inline Scaled scaled_sum(const std::vector<Scaled>& terms) {
    double m = -std::numeric_limits<double>::infinity();
    for (const Scaled& t : terms)
        if (!t.is_zero() && t.lg > m) m = t.lg;
    if (std::isinf(m)) return {};
    std::complex<double> acc{0.0, 0.0};
    for (const Scaled& t : terms)
        if (!t.is_zero()) acc += t.u * std::exp(t.lg - m);
    if (acc == std::complex<double>(0.0)) return {};
    Scaled s = Scaled::from(acc);
    s.lg += m;
    return s;
}

}  // namespace qcauchy
