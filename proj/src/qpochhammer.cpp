#include "qcauchy/qpochhammer.hpp"

#include <cmath>
#include <stdexcept>

namespace qcauchy {

Complex qpoch_inf(Complex a, double q, double tol) {
    if (std::abs(q) >= 1.0) throw std::domain_error("qpoch_inf: |q| must be < 1");
    if (a == Complex(0.0)) return {1.0, 0.0};
    double absq = std::abs(q);
    long J = 1;
    if (absq > 0.0) {
        double target = tol * (1.0 - absq) / std::abs(a);
        if (target < 1.0)
            J = static_cast<long>(std::ceil(std::log(target) / std::log(absq)));
        J = std::max<long>(J, 1);
    }
    Complex prod(1.0, 0.0);
    Complex aq = a;
    for (long j = 0; j < J; ++j) {
        prod *= (1.0 - aq);
        aq *= q;
    }
    return prod;
}

Complex qpoch_n(Complex a, double q, long n) {
    Complex prod(1.0, 0.0);
    if (n >= 0) {
        Complex aq = a;
        for (long j = 0; j < n; ++j) {
            prod *= (1.0 - aq);
            aq *= q;
        }
        return prod;
    }
    if (q == 0.0) throw std::domain_error("qpoch_n: q = 0 with negative n");
    // n = -m: (a;q)_{-m} = (a;q)_inf/(a q^{-m};q)_inf
    //                    = 1/[(1-a/q)(1-a/q^2)...(1-a/q^m)].
    Complex aq = a;
    for (long j = 1; j <= -n; ++j) {
        aq /= q;
        prod *= (1.0 - aq);
    }
    return 1.0 / prod;
}

Complex theta(Complex x, double q) {
    if (x == Complex(0.0)) throw std::domain_error("theta: x must be nonzero");
    return qpoch_inf(x, q) * qpoch_inf(Complex(q) / x, q);
}

Complex ramanujan_theta_ratio(Complex w, Complex t, double q) {
    if (t == Complex(0.0)) throw std::domain_error("ramanujan_theta_ratio: t = 0");
    double aw = std::abs(w);
    if (!(aw > q && aw < 1.0))
        throw std::domain_error("ramanujan_theta_ratio: need |q| < |w| < 1");
    Complex thw = theta(w, q);
    if (std::abs(thw) < 1e-300)
        throw std::domain_error("ramanujan_theta_ratio: theta(w) = 0 (w on the q-lattice)");
    Complex qq = qpoch_inf(Complex(q), q);
    return theta(-w / t, q) * qq * qq / (theta(-1.0 / t, q) * thw);
}

PochhammerBoundConstants pochhammer_lower_bound_constants(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("pochhammer_lower_bound_constants: q must be in (0,1)");
    double c1 = qpoch_inf(Complex(q), q).real();
    double c2 = 1.0 / (2.0 * std::log(1.0 / q));
    return {c1, c2};
}

}  // namespace qcauchy
