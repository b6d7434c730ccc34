#pragma once

#include <complex>

namespace qcauchy {

using Complex = std::complex<double>;

// (a;q)_inf for |q| < 1. The product is truncated at
// J = ceil(log(tol*(1-|q|)/|a|)/log|q|), which bounds the log of the
// remaining tail by |a||q|^J/(1-|q|) <= tol.
Complex qpoch_inf(Complex a, double q, double tol = 1e-15);

// (a;q)_n for n in Z. Negative n follows the defining ratio
// (a;q)_n = (a;q)_inf/(a q^n;q)_inf, i.e. (a;q)_{-m} =
// 1/[(1-a/q)...(1-a/q^m)]; in particular 1/(q;q)_{-m} = 0.
Complex qpoch_n(Complex a, double q, long n);

// theta(x) = (x;q)_inf (q/x;q)_inf; rejects x = 0.
Complex theta(Complex x, double q);

// Closed form of sum_{n in Z} t q^n w^{-n} / (1 + t q^n) for |q|<|w|<1:
// theta(-w/t) (q;q)_inf^2 / (theta(-1/t) theta(w)).
Complex ramanujan_theta_ratio(Complex w, Complex t, double q);

// Constants (c1, c2) of the q-Pochhammer lower bounds, read off the proof:
// c1 = (q;q)_inf, c2 = 1/(2 log(1/q)).
struct PochhammerBoundConstants {
    double c1;
    double c2;
};
PochhammerBoundConstants pochhammer_lower_bound_constants(double q);

}  // namespace qcauchy
