#include "doctest.h"

#include <cmath>
#include <complex>

#include "qcauchy/kernels.hpp"
#include "qcauchy/qpochhammer.hpp"

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

TEST_CASE("pole relabelling") {
    ParamSet p = crit_params();
    auto p1 = pole_index(p, 1);
    CHECK(p1.k == 1);
    CHECK(p1.u == 0);
    CHECK(p1.value == doctest::Approx(0.30));
    auto p2 = pole_index(p, 2);
    CHECK(p2.k == 2);
    CHECK(p2.u == 0);
    auto p3 = pole_index(p, 3);
    CHECK(p3.k == 1);
    CHECK(p3.u == 1);
    CHECK(p3.value == doctest::Approx(0.30 * 0.15));
    // strictly decreasing sequence
    double prev = 1e9;
    for (long r = 1; r <= 12; ++r) {
        double v = pole_index(p, r).value;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("Fermi factor") {
    CHECK(f_zeta(0, {0.0, 0.0}, 0.5) == complex<double>(0.0, 0.0));
    // zeta = -1, q = 0.5, m = 0: -(-1)/(1-(-1)) = 1/2
    CHECK(f_zeta(0, {-1.0, 0.0}, 0.5).real() == doctest::Approx(0.5));
    CHECK_THROWS(f_zeta(0, {1.0, 0.0}, 0.5));

    ParamSet p = crit_params();
    // f(m) = f_zeta(m) at zeta = -t q^{1/2+k}
    for (long m = -30; m <= 30; m += 7) {
        complex<double> z = p.zeta_or_default();
        CHECK(fermi_f(m, p) == doctest::Approx(f_zeta(m, z, p.q).real()).epsilon(1e-12));
    }
    // monotone decay to 0 as m -> +infinity, to 1 as m -> -infinity
    double prev = 1.0;
    for (long m = 0; m <= 40; m += 5) {
        double f = fermi_f(m, p);
        CHECK(f < prev);
        CHECK(f > 0.0);
        prev = f;
    }
    CHECK(fermi_f(-200, p) == doctest::Approx(1.0));
    CHECK(fermi_f(200, p) == doctest::Approx(0.0));
}

TEST_CASE("integrand g basics") {
    ParamSet p = crit_params();
    complex<double> z{0.9, 0.1}, w{1.2, -0.3};
    CHECK_THROWS(g_ab(z, z, 0, 0, p));

    // empty products: a = b = 0 (tiny positives keep ParamSet valid)
    ParamSet p0 = p;
    p0.a = {1e-14, 2e-14};
    p0.b = {1e-14, 2e-14};
    complex<double> g = g_ab(z, w, 2, -1, p0);
    complex<double> expect = std::pow(w, -1.0) / std::pow(z, 2.0) * w / (z - w);
    CHECK(std::abs(g - expect) < 1e-10);

    // symmetric under permuting the a-list or the b-list
    ParamSet ps = p;
    std::swap(ps.a[0], ps.a[1]);
    CHECK(std::abs(g_ab(z, w, 1, 2, p) - g_ab(z, w, 1, 2, ps)) < 1e-14);
    std::swap(ps.b[0], ps.b[1]);
    CHECK(std::abs(g_ab(z, w, 1, 2, p) - g_ab(z, w, 1, 2, ps)) < 1e-14);

    // q = 0 collapse: products become single factors
    ParamSet pq0 = p;
    pq0.q = 0.0;
    complex<double> g0 = g_ab(z, w, 1, -2, pq0);
    complex<double> e0 = std::pow(w, -2.0) / z * w / (z - w);
    for (double ai : pq0.a) e0 *= (1.0 - ai * z) / (1.0 - ai * w);
    for (double bj : pq0.b) e0 *= (1.0 - bj / w) / (1.0 - bj / z);
    CHECK(std::abs(g0 - e0) < 1e-13);
}

TEST_CASE("kernel K: N=1 residue vs dense w-quadrature oracle") {
    ParamSet p;
    p.a = {0.3};
    p.b = {0.25};
    p.q = 0.2;
    p.t = 1.0;
    p.k = 0;
    ContourSpec C = ContourSpec::default_C(p, 512);
    // w-circle around 1/a_1 = 10/3, clearing both C and the next pole 1/(a q)
    ContourSpec D;
    D.center = {1.0 / 0.3, 0.0};
    D.radius = 0.5 * std::min(1.0 / 0.3 - C.radius,
                              1.0 / (0.3 * p.q) - 1.0 / 0.3);
    D.points = 512;
    for (auto [m1, m2] : {std::pair<long, long>{0, 0}, {-2, 1}, {1, -3}, {-4, -4}}) {
        complex<double> oracle = C.integrate([&](complex<double> z) {
            return D.integrate([&](complex<double> w) {
                return g_ab(z, w, m1, m2, p) / w;
            }) / z;
        });
        complex<double> val = kernel_K(m1, m2, p, C);
        CHECK(std::abs(val - oracle) < 1e-9);
    }
}

TEST_CASE("kernel K equals K_ell at ell=0 and the independent contour route") {
    ParamSet p = crit_params();
    ContourSpec C = ContourSpec::default_C(p, 256);
    for (long m1 = -6; m1 <= 2; m1 += 2) {
        for (long m2 = -5; m2 <= 2; m2 += 3) {
            complex<double> k = kernel_K(m1, m2, p, C);
            CHECK(std::abs(k - kernel_K_ell(m1, m2, 0, p, 256)) < 1e-13);
            CHECK(std::abs(k - kernel_K_ell_contour(m1, m2, 0, p, 256)) < 1e-10);
        }
    }
    // and for ell = 1, 2 the two routes still agree
    for (long ell : {1L, 2L}) {
        for (auto [m1, m2] : {std::pair<long, long>{0, 0}, {-3, 1}, {1, -2}}) {
            complex<double> a = kernel_K_ell(m1, m2, ell, p, 256);
            complex<double> b = kernel_K_ell_contour(m1, m2, ell, p, 256);
            CHECK(std::abs(a - b) < 1e-9);
        }
    }
}

TEST_CASE("K at q=0 equals -L entrywise for m1,m2 <= 0") {
    ParamSet p = crit_params();
    p.q = 0.0;
    ContourSpec C = ContourSpec::default_C(p, 256);
    auto [Lc, Ldbar] = ContourSpec::default_L_pair(p, 256);
    for (long m1 = -4; m1 <= 0; ++m1)
        for (long m2 = -4; m2 <= 0; ++m2) {
            complex<double> k = kernel_K(m1, m2, p, C);
            complex<double> l = kernel_L(m1, m2, p, Lc, Ldbar);
            CHECK(std::abs(k + l) < 1e-11);
        }
    // continuity near q = 0: at q = 1e-4 the same relation holds to ~1e-6
    ParamSet ps = crit_params();
    ps.q = 1e-4;
    ContourSpec C2 = ContourSpec::default_C(ps, 256);
    auto [Lc2, Ldbar2] = ContourSpec::default_L_pair(ps, 256);
    for (long m1 = -3; m1 <= 0; ++m1)
        for (long m2 = -3; m2 <= 0; ++m2) {
            complex<double> k = kernel_K(m1, m2, ps, C2);
            complex<double> l = kernel_L(m1, m2, ps, Lc2, Ldbar2);
            CHECK(std::abs(k + l) < 1e-6);
        }
}

TEST_CASE("K_ell converges to K_inf and K_inf = -L") {
    ParamSet p = crit_params();
    auto [Lc, Ldbar] = ContourSpec::default_L_pair(p, 256);
    // |K_ell - K_inf| strictly decreasing in ell at sample entries
    for (auto [m1, m2] : {std::pair<long, long>{0, 0}, {-2, 1}, {-5, -3}}) {
        complex<double> kinf = kernel_K_inf(m1, m2, p, 1e-13, 256);
        double prev = 1e9;
        for (long ell = 0; ell <= 3; ++ell) {
            double d = std::abs(kernel_K_ell(m1, m2, ell, p, 256) - kinf);
            // strictly decreasing until the double-precision floor
            CHECK((d < prev || d < 1e-14));
            prev = d;
        }
        // Lemma 3.2(iii) entrywise
        complex<double> l = kernel_L(m1, m2, p, Lc, Ldbar);
        CHECK(std::abs(kinf + l) < 1e-10);
    }
}

TEST_CASE("kernel L: empty-product delta structure") {
    // With a = b = 0 the double integral collapses to -delta_{m1,m2} 1_{m2>=0}.
    ParamSet p;
    p.a = {1e-13, 5e-14};
    p.b = {1e-13, 5e-14};
    p.q = 0.3;
    p.t = 1.0;
    ContourSpec Lc, Ldbar;
    Lc.radius = 0.5;
    Ldbar.radius = 0.8;
    Lc.points = Ldbar.points = 256;
    for (long m1 = -3; m1 <= 3; ++m1)
        for (long m2 = -3; m2 <= 3; ++m2) {
            complex<double> l = kernel_L(m1, m2, p, Lc, Ldbar);
            double expect = (m1 == m2 && m2 >= 0) ? -1.0 : 0.0;
            CHECK(std::abs(l - expect) < 1e-10);
        }
}

TEST_CASE("kernel L transpose relation under a<->b, m1<->m2, inverted radii") {
    ParamSet p = crit_params();
    auto [Lc, Ldbar] = ContourSpec::default_L_pair(p, 256);
    ParamSet swapped = p;
    std::swap(swapped.a, swapped.b);
    ContourSpec Lc2, Ldbar2;
    Lc2.radius = 1.0 / Ldbar.radius;
    Ldbar2.radius = 1.0 / Lc.radius;
    Lc2.points = Ldbar2.points = 256;
    for (auto [m1, m2] : {std::pair<long, long>{0, 0}, {-2, 1}, {2, -1}, {-3, -2}}) {
        complex<double> l = kernel_L(m1, m2, p, Lc, Ldbar);
        complex<double> lt = kernel_L(m2, m1, swapped, Lc2, Ldbar2);
        CHECK(std::abs(l - lt) < 1e-11);
    }
}

TEST_CASE("contour validation") {
    ParamSet p = crit_params();
    // ratio 2.0/0.26 = 7.7 > 1/q = 6.67 with both radii inside (b_max, 1/a_max)
    CHECK_THROWS_WITH_AS(ContourSpec::validate_L_pair(p, 0.26, 2.0),
                         doctest::Contains("r/r'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(ContourSpec::validate_L_pair(p, 0.1, 0.5),
                         doctest::Contains("b_max"), std::invalid_argument);
    auto pair = ContourSpec::default_L_pair(p, 128);
    CHECK(pair.second.radius / pair.first.radius > 1.0);
    CHECK(pair.second.radius / pair.first.radius < 1.0 / p.q);
}

TEST_CASE("matrix A and B basics") {
    ParamSet p = crit_params();
    // A(m;r) -> 0 as m -> +infinity (the Fermi prefactor decays)
    double prev = 1.0;
    for (long m : {4L, 10L, 16L, 24L}) {
        double v = std::abs(matrix_A(m, 1, p, 256));
        CHECK(v < prev);
        prev = v;
    }
    // factorization: sum_r A(m1;r) B(r;m2) = f(m1) K_ell(m1,m2)
    for (long ell : {0L, 1L, 2L}) {
        for (auto [m1, m2] : {std::pair<long, long>{0, 0}, {-4, 2}, {3, -3}}) {
            complex<double> s{0.0, 0.0};
            for (long r = 1; r <= static_cast<long>(p.N()) * (ell + 1); ++r)
                s += matrix_A(m1, r, p, 256) * matrix_B(r, m2, p);
            complex<double> rhs = fermi_f(m1, p) * kernel_K_ell_contour(m1, m2, ell, p, 256);
            CHECK(std::abs(s - rhs) < 1e-9);
        }
    }
}

TEST_CASE("conjugators and frozen envelope constants") {
    ParamSet p = crit_params();
    ConjugatorConfig cj;  // eps = 0.25, omega = 0.1
    CHECK(tau_weight(0, p, cj.eps) == doctest::Approx(1.0));
    CHECK(tau_weight(-5, p, cj.eps) == doctest::Approx(1.0));
    CHECK(tau_weight(3, p, cj.eps) > 1.0);
    CHECK_THROWS(ConjugatorConfig{0.6, 0.1}.validate());
    CHECK_THROWS(ConjugatorConfig{0.25, 0.4}.validate());

    // Lemma B.1 envelopes with constants fitted once on this grid and frozen
    // (1.15x headroom over the fit):
    const double Cp = 0.0305, Cm = 0.1083, Dp = 73.2, Dm = 70.4;
    const double b = 0.5 * (p.b_max() + 1.0);
    const double a1 = p.a[0], aN = p.a[1];
    const double N = 2.0;
    for (long r = 1; r <= 6; ++r) {
        double u = static_cast<double>(pole_index(p, r).u);
        for (long m = -10; m <= 30; ++m) {
            double md = static_cast<double>(m);
            double A = std::abs(matrix_A(m, r, p, 256));
            double B = std::abs(matrix_B(r, m, p));
            if (m >= 0) {
                CHECK(A <= Cp * std::pow(a1, md) * std::pow(p.q, md * md / (2 * N) + md / 2 + u));
                CHECK(B <= Dp * std::pow(aN, -md) *
                               std::pow(p.q, -md * md / (2 * N) + cj.eps * md - (0.5 + cj.eps) * u));
            } else {
                CHECK(A <= Cm * std::pow(b, -md) * std::pow(p.q, u));
                CHECK(B <= Dm * std::pow(a1, -md) * std::pow(p.q, u));
            }
        }
    }

    // Corollary B.2: conjugated elements, exponential in m and u. With the
    // sigma factor applied on both branches the m<0 envelope for A~ carries
    // q^{omega u} rather than the displayed q^u.
    for (long r = 1; r <= 6; ++r) {
        double u = static_cast<double>(pole_index(p, r).u);
        for (long m = -10; m <= 30; ++m) {
            double md = static_cast<double>(m);
            double At = std::abs(matrix_A_tilde(m, r, p, 256, cj));
            double Bt = std::abs(matrix_B_tilde(r, m, p, cj));
            if (m >= 0) {
                CHECK(At <= Cp * std::pow(p.q, cj.eps * md + cj.omega * u));
                CHECK(Bt <= Dp * std::pow(p.q, cj.eps * md + (0.5 - cj.eps - cj.omega) * u));
            } else {
                CHECK(At <= Cm * std::pow(b, -md) * std::pow(p.q, cj.omega * u));
                CHECK(Bt <= Dm * std::pow(a1, -md) * std::pow(p.q, u));
            }
        }
    }
}

TEST_CASE("Hilbert-Schmidt partial sums converge") {
    ParamSet p = crit_params();
    ConjugatorConfig cj;
    double prev_a = -1.0, prev_b = -1.0, prev_inc_a = 1e9, prev_inc_b = 1e9;
    double sum_a = 0.0, sum_b = 0.0;
    std::vector<double> incs_a, incs_b;
    for (int stage = 1; stage <= 5; ++stage) {
        long M = 6 * stage;
        long R = 2 * stage;
        sum_a = sum_b = 0.0;
        for (long m = -M; m <= M; ++m) {
            for (long r = 1; r <= R; ++r) {
                double At = std::abs(matrix_A_tilde(m, r, p, 128, cj));
                double Bt = std::abs(matrix_B_tilde(r, m, p, cj));
                sum_a += At * At;
                sum_b += Bt * Bt;
            }
        }
        if (prev_a >= 0.0) {
            double inc_a = sum_a - prev_a, inc_b = sum_b - prev_b;
            CHECK(inc_a >= -1e-15);
            CHECK(inc_b >= -1e-15);
            CHECK(inc_a <= prev_inc_a + 1e-12);
            CHECK(inc_b <= prev_inc_b + 1e-12);
            incs_a.push_back(inc_a);
            incs_b.push_back(inc_b);
            prev_inc_a = inc_a;
            prev_inc_b = inc_b;
        }
        prev_a = sum_a;
        prev_b = sum_b;
    }
    // geometric decay of the increments certifies a finite limit
    CHECK(incs_a.back() < 0.7 * incs_a.front());
    CHECK(incs_b.back() < 0.7 * incs_b.front());
    CHECK(incs_a.back() < 0.7 * incs_a[incs_a.size() - 2] + 1e-12);
    CHECK(incs_b.back() < 0.7 * incs_b[incs_b.size() - 2] + 1e-12);
}

TEST_CASE("quadrature node doubling stability") {
    ParamSet p = crit_params();
    ContourSpec C128 = ContourSpec::default_C(p, 128);
    ContourSpec C256 = ContourSpec::default_C(p, 256);
    auto [Lc1, Ld1] = ContourSpec::default_L_pair(p, 128);
    auto [Lc2, Ld2] = ContourSpec::default_L_pair(p, 256);
    for (auto [m1, m2] : {std::pair<long, long>{0, 0}, {-3, 2}, {2, -4}}) {
        CHECK(std::abs(kernel_K(m1, m2, p, C128) - kernel_K(m1, m2, p, C256)) < 1e-10);
        CHECK(std::abs(kernel_L(m1, m2, p, Lc1, Ld1) - kernel_L(m1, m2, p, Lc2, Ld2)) < 1e-9);
        CHECK(std::abs(matrix_A(m1, 3, p, 128) - matrix_A(m1, 3, p, 256)) < 1e-10);
    }
}
