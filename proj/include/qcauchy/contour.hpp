#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace qcauchy {

struct ParamSet;

// Circular quadrature contour. Trapezoid nodes on a circle integrate
// analytic integrands with spectral accuracy, so `points` in the low
// hundreds certifies ~1e-12 here.
struct ContourSpec {
    std::complex<double> center{0.0, 0.0};
    double radius = 1.0;
    bool counterclockwise = true;
    int points = 256;

    std::complex<double> node(int j) const;
    // Quadrature of (1/2pi i) \oint h(z) dz; the 1/(2pi i) is implicit
    // throughout, matching the kernel formulas.
    template <class F>
    std::complex<double> integrate(F&& h) const {
        std::complex<double> acc{0.0, 0.0};
        for (int j = 0; j < points; ++j) {
            std::complex<double> z = node(j);
            acc += (z - center) * h(z);
        }
        acc /= static_cast<double>(points);
        return counterclockwise ? acc : -acc;
    }

    // The z-contour C: origin-centered circle with b_max < radius < 1/a_max
    // (geometric midpoint by default). Throws if the pole gap is empty.
    static ContourSpec default_C(const ParamSet& p, int points = 256);

    // The L-pair (C at radius r', Dbar at radius r) with
    // b_max < r', r < 1/a_max and 1 < r/r' < 1/q. Throws naming the violated
    // inequality.
    static std::pair<ContourSpec, ContourSpec> default_L_pair(const ParamSet& p,
                                                              int points = 256);
    static void validate_L_pair(const ParamSet& p, double r_inner, double r_outer);
};

}  // namespace qcauchy
