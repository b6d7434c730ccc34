#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qcauchy/kernels.hpp"

namespace qcauchy {

// Integer window [lo, hi] of l^2(Z), both ends inclusive.
struct Window {
    long lo = -16;
    long hi = 16;
    long size() const { return hi - lo + 1; }
    Window doubled() const { return {2 * lo, 2 * hi}; }
};

// Default window [-8N, 8N + ceil(log_q tol)] sized so the uniform kernel
// envelope is below tol outside it.
Window default_window(const ParamSet& p, double tol = 1e-8);

enum class KernelKind { K, K_ell, K_inf, L };

struct DetOptions {
    int points = 256;          // quadrature nodes per contour
    long ell = 0;              // for K_ell
    double tail_tol = 1e-12;   // r-sum tail for K_inf
    ConjugatorConfig conj{};   // K-family conditioning
    std::optional<std::complex<double>> zeta;  // multiplier override for K-family
    bool estimate_drift = true;  // recompute on the doubled window
};

// Finite window of f*Kernel with (for the K family) the tau-conjugated
// entries actually stored; `conjugator` holds the tau weights used.
struct KernelMatrix {
    Window window;
    Eigen::MatrixXcd entries;
    std::vector<double> log_conjugator;  // log tau(m), empty for kind L
};

KernelMatrix assemble_fK_window(KernelKind kind, const ParamSet& p, Window w,
                                const DetOptions& opt);

struct DetResult {
    double value = 0.0;
    double imag = 0.0;    // imaginary part of the determinant, a noise gauge
    double drift = 0.0;   // |value - value on doubled window|, if estimated
    Window window;
};

// det(1 - f K)-type window determinant: minus sign for the K family,
// plus sign for L.
DetResult fredholm_det_window(KernelKind kind, const ParamSet& p, Window w,
                              const DetOptions& opt = {});

// F_ell as the rank-N(ell+1) determinant det(W) with
//   W_{n,n'} = Res_{w=1/\tilde a_n} prod_i (b_i/w;q)_inf/(a_i w;q)_inf
//     * \oint_{C_n} dz/z (-1)/(z - 1/\tilde a_{n'})
//       prod_i (a_i z;q)_inf/(b_i/z;q)_inf
//       * theta(-\tilde a_n z/(t q^{1/2+k})) (q;q)_inf^2
//         / (theta(-1/(t q^{1/2+k})) theta(\tilde a_n z)),
// C_n a circle with 1/\tilde a_n < |z| < 1/(q \tilde a_n). The Ramanujan
// closed form replaces the bilateral m-sum of (B A)_{n,n'}.
double fredholm_det_finite_rank(long ell, const ParamSet& p, int points = 256);

// Entry (n,n') of the W matrix above; exposed for the row-reduction tests.
std::complex<double> finite_rank_W_entry(long n, long np, long ell, const ParamSet& p,
                                         int points = 256);

// Raw (unconjugated, no Fermi factor) window of K_ell evaluated by genuine
// double quadrature: z on C, w on the union of per-u pole-ring circles. This
// is the independent route the residue factorization is tested against; it
// is well conditioned only when the window keeps w^{m2} and z^{-m1} bounded
// (m2 at most slightly positive).
Eigen::MatrixXcd kernel_K_ell_contour_window(const ParamSet& p, Window w, long ell,
                                             int points = 256);

struct Theorem31Report {
    ParamSet params;
    double eps = 0.25;
    bool section2_ok = false;
    bool section3_ok = false;
    std::string hypothesis_note;

    double F_window_K = 0.0;       // det(1 - f K), window route
    double F_window_K_drift = 0.0;
    std::vector<double> F_rank;    // finite-rank F_ell, ell = 0..ell_max
    std::vector<double> F_ell_window;  // window det of K_ell, same ells
    double F_K_inf = 0.0;          // window det of K_inf
    double F_L = 0.0;              // det(1 + f L), window route
    double F_L_drift = 0.0;

    double gap_K_vs_L = 0.0;
    double gap_rank_spread = 0.0;  // max - min over F_rank
    double gap_rank_vs_window = 0.0;
    bool pass = false;
};

Theorem31Report verify_theorem31(const ParamSet& p, Window w, int points,
                                 long ell_max, double tol);

}  // namespace qcauchy
