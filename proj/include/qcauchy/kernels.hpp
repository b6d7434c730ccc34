#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "qcauchy/contour.hpp"
#include "qcauchy/measures.hpp"
#include "qcauchy/scaled.hpp"

namespace qcauchy {

// Relabelling of the inverse poles: \tilde a_r = a_k q^u with r = uN + k,
// k in {1..N}, u >= 0. Strictly decreasing when the a's are distinct,
// descending and a_1/a_N < 1/q.
struct PoleIndex {
    long r;      // 1-based
    int k;       // 1-based variable index
    long u;      // q-power
    double value;  // a_k q^u
};
PoleIndex pole_index(const ParamSet& p, long r);

// f_zeta(m) = -zeta q^m / (1 - zeta q^m); rejects the pole zeta q^m = 1.
std::complex<double> f_zeta(long m, std::complex<double> zeta, double q);

// The Fermi factor f(m) = f_zeta(m) at zeta = -t q^{1/2+k}
//                       = t q^{1/2+k+m} / (1 + t q^{1/2+k+m}).
double fermi_f(long m, const ParamSet& p);

// Common integrand of every kernel here:
// g(z,w) = w^{m2}/z^{m1} * w/(z-w)
//          * prod_i (a_i z;q)_inf/(a_i w;q)_inf
//          * prod_j (b_j/w;q)_inf/(b_j/z;q)_inf.
std::complex<double> g_ab(std::complex<double> z, std::complex<double> w,
                          long m1, long m2, const ParamSet& p);

// Conjugation weights: tau(m) = a_1^{-m} q^{-m^2/(2N)-m/2+eps m} for m >= 0
// (1 below), sigma(r) = q^{-(1-omega)u}. Valid for eps in (0,1/2),
// omega in (0,1/2-eps).
struct ConjugatorConfig {
    double eps = 0.25;
    double omega = 0.1;
    void validate() const;
};
double log_tau(long m, const ParamSet& p, double eps);
double log_sigma(long r, const ParamSet& p, double omega);
double tau_weight(long m, const ParamSet& p, double eps);
double sigma_weight(long r, const ParamSet& p, double omega);

// Matrix elements. A(m;r) carries the multiplier (fermi_f by default, or
// f_zeta when zeta is supplied):
//   A(m;r) = f(m) \oint_C dz/z^{1+m} 1/(z - 1/\tilde a_r)
//             prod_i (a_i z;q)_inf / (b_i/z;q)_inf,
//   B(r;m) = \tilde a_r^{-m} Res_{w=1/\tilde a_r}
//             prod_i (b_i/w;q)_inf / (a_i w;q)_inf.
// The z-integrand has no pole at 1/\tilde a_r (the zero of (a_k z;q)_inf
// cancels it), so the contour radius is chosen per m to keep the quadrature
// terms the same size as the result; products are tracked in scaled form.
Scaled matrix_A_scaled(long m, long r, const ParamSet& p, int points,
                       std::optional<std::complex<double>> zeta = std::nullopt);
Scaled matrix_B_scaled(long r, long m, const ParamSet& p);
std::complex<double> matrix_A(long m, long r, const ParamSet& p, int points = 256);
std::complex<double> matrix_B(long r, long m, const ParamSet& p);

// Conjugated elements, bounded uniformly in (m, r); these are what the
// window determinants are built from.
std::complex<double> matrix_A_tilde(long m, long r, const ParamSet& p, int points,
                                    const ConjugatorConfig& cj,
                                    std::optional<std::complex<double>> zeta = std::nullopt);
std::complex<double> matrix_B_tilde(long r, long m, const ParamSet& p,
                                    const ConjugatorConfig& cj);

// K(m1,m2): z-quadrature over C times exact w-residues at w = 1/a_j.
std::complex<double> kernel_K(long m1, long m2, const ParamSet& p,
                              const ContourSpec& zquad);

// K_ell via the rank-N(ell+1) factorization sum_r A(m1;r) B(r;m2) / f(m1).
std::complex<double> kernel_K_ell(long m1, long m2, long ell, const ParamSet& p,
                                  int points = 256);

// K_inf: the r-sum continued until the geometric tail (ratio q^{1/2-eps} per
// u-block) is below tail_tol; throws if that never happens.
std::complex<double> kernel_K_inf(long m1, long m2, const ParamSet& p,
                                  double tail_tol = 1e-12, int points = 256,
                                  double eps = 0.25);

// L(m1,m2): double quadrature, z on quadC, w on quadDbar (which encloses C).
std::complex<double> kernel_L(long m1, long m2, const ParamSet& p,
                              const ContourSpec& quadC, const ContourSpec& quadDbar);

// Independent evaluation of K_ell by genuine w-quadrature on an explicit
// D_ell circle enclosing exactly the poles 1/(a_j q^i), i <= ell. Used to
// cross-check the residue factorization.
std::complex<double> kernel_K_ell_contour(long m1, long m2, long ell,
                                          const ParamSet& p, int points = 256);

namespace detail {

// prod over j in [j0, j1) of (1 - x q^j), scaled.
Scaled scaled_qpoch_range(std::complex<double> x, double q, long j0, long j1);
// (x;q)_inf, scaled, with certified truncation.
Scaled scaled_qpoch_inf(std::complex<double> x, double q, double tol = 1e-15);
Scaled scaled_theta(std::complex<double> x, double q);
// Residue at w = 1/\tilde a_r of prod_i (b_i/w;q)_inf/(a_i w;q)_inf, scaled.
Scaled residue_at_pole(const ParamSet& p, long r);
// Balanced z-contour radius for the A integral at row m.
double a_contour_radius(long m, const ParamSet& p);

}  // namespace detail

}  // namespace qcauchy
