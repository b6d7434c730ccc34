#include "doctest.h"

#include <cmath>
#include <complex>

#include "qcauchy/fredholm.hpp"
#include "qcauchy/measures.hpp"

using namespace qcauchy;
using std::complex;

namespace {

ParamSet crit_params() {
    ParamSet p;
    p.a = {0.30, 0.28};
    p.b = {0.25, 0.20};
    p.q = 0.15;
    p.t = 1.0;
    p.k = 1;
    return p;
}

}  // namespace

TEST_CASE("default window") {
    ParamSet p = crit_params();
    Window w = default_window(p, 1e-8);
    CHECK(w.lo == -16);
    CHECK(w.hi >= 16 + 8);
    CHECK(w.doubled().lo == 2 * w.lo);
}

TEST_CASE("zeta = 0 gives the identity determinant") {
    ParamSet p = crit_params();
    DetOptions opt;
    opt.zeta = complex<double>(0.0, 0.0);
    opt.estimate_drift = false;
    auto d = fredholm_det_window(KernelKind::K, p, default_window(p, 1e-8), opt);
    CHECK(d.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Prop 2.2: det(1 - f_zeta K) equals the brute-force q-Laplace transform") {
    ParamSet p = crit_params();
    TruncationPolicy tr{16, 8, 1e-8};
    DetOptions opt;
    opt.estimate_drift = false;
    Window w = default_window(p, 1e-8);
    for (int k : {0, 2}) {
        ParamSet pk = p;
        pk.k = k;
        auto det = fredholm_det_window(KernelKind::K, pk, w, opt);
        auto lhs = qlaplace_lhs(pk, tr);
        CHECK(std::abs(det.value - lhs.value) < 1e-6 + lhs.residual);
        CHECK(std::abs(det.imag) < 1e-12);
    }
}

TEST_CASE("Prop 2.5: det(1 + f L) equals the brute-force shifted cdf") {
    ParamSet p = crit_params();
    TruncationPolicy tr{16, 8, 1e-8};
    DetOptions opt;
    opt.estimate_drift = false;
    Window w = default_window(p, 1e-8);
    auto det = fredholm_det_window(KernelKind::L, p, w, opt);
    auto cdf = lambda1_shift_cdf(p.k, p, tr);
    CHECK(std::abs(det.value - cdf.value) < 1e-6 + cdf.residual);
}

TEST_CASE("finite-rank route: constancy in ell and agreement with the window route") {
    ParamSet p = crit_params();
    Window w = default_window(p, 1e-8);
    DetOptions opt;
    opt.estimate_drift = false;
    double dK = fredholm_det_window(KernelKind::K, p, w, opt).value;
    double f0 = fredholm_det_finite_rank(0, p, 256);
    CHECK(std::abs(f0 - dK) < 1e-7);
    for (long ell : {1L, 2L, 3L}) {
        double fl = fredholm_det_finite_rank(ell, p, 256);
        CHECK(std::abs(fl - f0) < 1e-8);
    }
}

TEST_CASE("row reduction identity on the W matrix") {
    // The top row of W is delta plus a multiple of row N*ell, which is what
    // collapses det(W) from rank N(ell+1) to N*ell. The proportionality
    // constant, from the residue recursion and theta quasi-periodicity, is
    //   -t q^{k-1/2} prod_j 1/(1 - b_j a~_{N ell}) prod_i a~_n/(a~_n - a_i)
    // with a~_n = q a~_{N ell} the top pole.
    ParamSet p = crit_params();
    const long N = static_cast<long>(p.N());
    for (long ell : {1L, 2L}) {
        long top = N * (ell + 1);
        PoleIndex pi = pole_index(p, top);
        double prev_pole = pi.value / p.q;  // a~_{N ell}
        complex<double> factor = -p.t * std::pow(p.q, 0.5 + p.k) / p.q;
        for (std::size_t i = 0; i < p.N(); ++i)
            factor *= pi.value / (pi.value - p.a[i]);
        for (double bj : p.b) factor /= (1.0 - bj * prev_pole);
        for (long np = 1; np <= top; ++np) {
            complex<double> w_top = finite_rank_W_entry(top, np, ell, p, 512);
            if (np == top) w_top -= 1.0;  // W^{(1)} = delta_{n,n'}
            complex<double> w_prev = finite_rank_W_entry(N * ell, np, ell, p, 512);
            CHECK(std::abs(w_top - factor * w_prev) < 1e-9);
        }
    }
}

TEST_CASE("determinant is invariant under the tau conjugation") {
    ParamSet p = crit_params();
    Window w{-8, 8};
    DetOptions opt;
    opt.ell = 1;
    opt.estimate_drift = false;
    auto km = assemble_fK_window(KernelKind::K_ell, p, w, opt);
    // de-conjugate: raw fK = tau^{-1}(m1) M~ tau(m2)
    Eigen::MatrixXcd raw = km.entries;
    for (long i = 0; i < w.size(); ++i)
        for (long j = 0; j < w.size(); ++j)
            raw(i, j) *= std::exp(km.log_conjugator[static_cast<std::size_t>(j)] -
                                  km.log_conjugator[static_cast<std::size_t>(i)]);
    long W = w.size();
    complex<double> d1 = (Eigen::MatrixXcd::Identity(W, W) - km.entries).partialPivLu().determinant();
    complex<double> d2 = (Eigen::MatrixXcd::Identity(W, W) - raw).partialPivLu().determinant();
    CHECK(std::abs(d1 - d2) < 1e-10);
}

TEST_CASE("uniform bound (3-32) with constants fitted at ell=0 and frozen") {
    ParamSet p = crit_params();
    // Frozen from the dev fit: max ratio over ell <= 4 was 0.284 at d = q^eps.
    const double D = 0.31;
    const double d = std::pow(p.q, 0.25);
    Window w{-12, 16};
    DetOptions opt;
    opt.estimate_drift = false;
    for (long ell = 0; ell <= 4; ++ell) {
        DetOptions o2 = opt;
        o2.ell = ell;
        auto km = assemble_fK_window(KernelKind::K_ell, p, w, o2);
        for (long i = 0; i < w.size(); ++i)
            for (long j = 0; j < w.size(); ++j) {
                double env = D * std::pow(d, std::abs(w.lo + i) + std::abs(w.lo + j));
                CHECK(std::abs(km.entries(i, j)) <= env);
            }
    }
}

TEST_CASE("Hadamard bound on small determinant blocks") {
    ParamSet p = crit_params();
    const double D = 0.31;
    const double d = std::pow(p.q, 0.25);
    Window w{-12, 16};
    DetOptions opt;
    opt.ell = 1;
    opt.estimate_drift = false;
    auto km = assemble_fK_window(KernelKind::K_ell, p, w, opt);
    auto idx = [&](long m) { return m - w.lo; };
    std::vector<std::vector<long>> samples{{0},
                                           {-3, 2},
                                           {-5, 0, 4},
                                           {-8, -1, 6},
                                           {1, 2, 3}};
    for (const auto& ms : samples) {
        long n = static_cast<long>(ms.size());
        Eigen::MatrixXcd sub(n, n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                sub(i, j) = km.entries(idx(ms[static_cast<std::size_t>(i)]),
                                       idx(ms[static_cast<std::size_t>(j)]));
        double lhs = std::abs(sub.partialPivLu().determinant());
        double rhs = std::pow(D, static_cast<double>(n)) *
                     std::pow(static_cast<double>(n), 0.5 * static_cast<double>(n));
        for (long m : ms) rhs *= std::pow(d, std::abs(m));
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("window doubling stability") {
    ParamSet p = crit_params();
    Window w = default_window(p, 1e-8);
    DetOptions opt;  // estimate_drift on
    auto dK = fredholm_det_window(KernelKind::K, p, w, opt);
    CHECK(dK.drift < 1e-7);
    auto dL = fredholm_det_window(KernelKind::L, p, w, opt);
    CHECK(dL.drift < 1e-7);
    DetOptions oinf = opt;
    auto dI = fredholm_det_window(KernelKind::K_inf, p, w, oinf);
    CHECK(dI.drift < 1e-7);
}

TEST_CASE("quadrature node doubling stability of the determinants") {
    ParamSet p = crit_params();
    Window w = default_window(p, 1e-8);
    DetOptions o1, o2;
    o1.points = 128;
    o2.points = 256;
    o1.estimate_drift = o2.estimate_drift = false;
    CHECK(std::abs(fredholm_det_window(KernelKind::K, p, w, o1).value -
                   fredholm_det_window(KernelKind::K, p, w, o2).value) < 1e-9);
    CHECK(std::abs(fredholm_det_window(KernelKind::L, p, w, o1).value -
                   fredholm_det_window(KernelKind::L, p, w, o2).value) < 1e-9);
    CHECK(std::abs(fredholm_det_finite_rank(2, p, 128) -
                   fredholm_det_finite_rank(2, p, 256)) < 1e-9);
}

TEST_CASE("Theorem 3.1 report") {
    ParamSet p = crit_params();
    Window w = default_window(p, 1e-8);
    auto rep = verify_theorem31(p, w, 256, 3, 1e-6);
    CHECK(rep.pass);
    CHECK(rep.section2_ok);
    CHECK(rep.section3_ok);
    CHECK(rep.gap_K_vs_L < 1e-6);
    CHECK(rep.gap_rank_spread < 1e-8);
    CHECK(rep.gap_rank_vs_window < 1e-7);
    CHECK(rep.F_rank.size() == 4);
    // regression pin after the first verified run
    CHECK(rep.F_window_K == doctest::Approx(0.842431794087).epsilon(1e-9));
    // the window dets of K_ell all agree with F_inf at determinant level
    for (double f : rep.F_ell_window) CHECK(std::abs(f - rep.F_K_inf) < 1e-8);
}

TEST_CASE("verify_theorem31 rejects invalid section-3 parameters") {
    ParamSet p = crit_params();
    // satisfies Prop 2.2 (q a_max = 0.045 < 0.17) but a1/aN = 1.76 > q^{-1/4}
    p.a = {0.30, 0.17};
    Window w{-8, 8};
    CHECK_THROWS_WITH_AS(verify_theorem31(p, w, 128, 1, 1e-6),
                         doctest::Contains("a1/aN"), std::invalid_argument);
}
