#include "qcauchy/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qcauchy/qpochhammer.hpp"

namespace qcauchy {

using std::complex;

PoleIndex pole_index(const ParamSet& p, long r) {
    if (r < 1) throw std::invalid_argument("pole_index: r must be >= 1");
    long N = static_cast<long>(p.N());
    long u = (r - 1) / N;
    int k = static_cast<int>((r - 1) % N) + 1;
    double value = p.a[static_cast<std::size_t>(k - 1)] * std::pow(p.q, static_cast<double>(u));
    return {r, k, u, value};
}

complex<double> f_zeta(long m, complex<double> zeta, double q) {
    complex<double> zq = zeta * std::pow(q, static_cast<double>(m));
    if (std::abs(zq - 1.0) < 1e-14)
        throw std::domain_error("f_zeta: pole zeta q^m = 1");
    return -zq / (1.0 - zq);
}

double fermi_f(long m, const ParamSet& p) {
    // t q^{1/2+k+m}/(1+t q^{1/2+k+m}); stable against overflow of q^{m} for
    // very negative m by working with the reciprocal there.
    double e = 0.5 + static_cast<double>(p.k) + static_cast<double>(m);
    double lg = std::log(p.t) + e * std::log(p.q);
    if (lg > 0) {
        double inv = std::exp(-lg);
        return 1.0 / (1.0 + inv);
    }
    double x = std::exp(lg);
    return x / (1.0 + x);
}

complex<double> g_ab(complex<double> z, complex<double> w, long m1, long m2,
                     const ParamSet& p) {
    if (z == w) throw std::domain_error("g_ab: z = w");
    complex<double> val = std::pow(w, static_cast<double>(m2)) /
                          std::pow(z, static_cast<double>(m1)) * w / (z - w);
    for (double ai : p.a) val *= qpoch_inf(ai * z, p.q) / qpoch_inf(ai * w, p.q);
    for (double bj : p.b) val *= qpoch_inf(bj / w, p.q) / qpoch_inf(bj / z, p.q);
    return val;
}

void ConjugatorConfig::validate() const {
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("ConjugatorConfig: eps must be in (0,1/2)");
    if (!(omega > 0.0 && omega < 0.5 - eps))
        throw std::invalid_argument("ConjugatorConfig: omega must be in (0,1/2-eps)");
}

double log_tau(long m, const ParamSet& p, double eps) {
    if (m < 0) return 0.0;
    double md = static_cast<double>(m);
    double N = static_cast<double>(p.N());
    return -md * std::log(p.a[0]) +
           (-md * md / (2.0 * N) - md / 2.0 + eps * md) * std::log(p.q);
}

double log_sigma(long r, const ParamSet& p, double omega) {
    long u = pole_index(p, r).u;
    return -(1.0 - omega) * static_cast<double>(u) * std::log(p.q);
}

double tau_weight(long m, const ParamSet& p, double eps) { return std::exp(log_tau(m, p, eps)); }
double sigma_weight(long r, const ParamSet& p, double omega) { return std::exp(log_sigma(r, p, omega)); }

namespace detail {

// prod over j in [j0, j1) of (1 - x q^j), in scaled form.
Scaled scaled_qpoch_range(complex<double> x, double q, long j0, long j1) {
    Scaled prod = Scaled::one();
    complex<double> f = x * std::pow(q, static_cast<double>(j0));
    for (long j = j0; j < j1; ++j) {
        prod *= (1.0 - f);
        f *= q;
    }
    return prod;
}

// (x;q)_inf in scaled form, with the certified truncation of qpoch_inf.
Scaled scaled_qpoch_inf(complex<double> x, double q, double tol) {
    if (x == complex<double>(0.0)) return Scaled::one();
    double absq = std::abs(q);
    long J = 1;
    if (absq > 0.0) {
        double target = tol * (1.0 - absq) / std::abs(x);
        if (target < 1.0) J = static_cast<long>(std::ceil(std::log(target) / std::log(absq)));
        J = std::max<long>(J, 1);
    }
    return scaled_qpoch_range(x, q, 0, J);
}

Scaled scaled_theta(complex<double> x, double q) {
    return scaled_qpoch_inf(x, q) * scaled_qpoch_inf(complex<double>(q) / x, q);
}

// Residue at w = 1/\tilde a_r of prod_i (b_i/w;q)_inf / (a_i w;q)_inf:
//   prod_j (b_j \tilde a_r;q)_inf / [ prod_{i != k} (a_i/\tilde a_r;q)_inf
//     * (-\tilde a_r) * (q^{-u};q)_u * (q;q)_inf ].
Scaled residue_at_pole(const ParamSet& p, long r) {
    PoleIndex pi = pole_index(p, r);
    double ar = pi.value;
    Scaled num = Scaled::one();
    for (double bj : p.b) num *= scaled_qpoch_inf(complex<double>(bj * ar), p.q);
    Scaled den = Scaled::from(complex<double>(-ar));
    for (std::size_t i = 0; i < p.N(); ++i) {
        if (static_cast<int>(i) + 1 == pi.k) continue;
        den *= scaled_qpoch_inf(complex<double>(p.a[i] / ar), p.q);
    }
    // (q^{-u};q)_u = prod_{j=1..u} (1 - q^{-j})
    Scaled qneg = Scaled::one();
    for (long j = 1; j <= pi.u; ++j)
        qneg *= (1.0 - std::pow(p.q, -static_cast<double>(j)));
    den *= qneg;
    den *= scaled_qpoch_inf(complex<double>(p.q), p.q);
    return num / den;
}

// Balanced z-contour radius for the A integral: q^{-n} with n the nonneg
// integer nearest m/N - 1/2 for m >= 0 (the optimum of the Appendix-B
// estimate); sqrt(b_max) < 1 for m < 0 so z^{-1-m} stays bounded. The
// integrand is analytic outside |z| = b_max, so any such radius is exact.
double a_contour_radius(long m, const ParamSet& p) {
    if (m < 0) return std::sqrt(p.b_max());
    if (p.q <= 0.0) return std::max(1.5, 2.0 * p.b_max());
    double nd = static_cast<double>(m) / static_cast<double>(p.N()) - 0.5;
    long n = std::max<long>(0, std::lround(nd));
    return std::pow(p.q, -static_cast<double>(n));
}

}  // namespace detail

namespace {

using detail::a_contour_radius;
using detail::residue_at_pole;
using detail::scaled_qpoch_inf;
using detail::scaled_qpoch_range;

// z-part of A(m;r) with the 1/(z - 1/\tilde a_r) pole cancelled against the
// corresponding zero of (a_k z;q)_inf:
//   \oint dz/z^{1+m} (-\tilde a_r) (a_k z;q)_u (a_k q^{u+1} z;q)_inf
//        prod_{i != k} (a_i z;q)_inf / prod_j (b_j/z;q)_inf.
Scaled a_integral_scaled(long m, long r, const ParamSet& p, int points) {
    PoleIndex pi = pole_index(p, r);
    double R = a_contour_radius(m, p);
    double ak = p.a[static_cast<std::size_t>(pi.k - 1)];
    std::vector<Scaled> terms(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) {
        double th = 2.0 * std::numbers::pi * j / points;
        complex<double> dir(std::cos(th), std::sin(th));
        complex<double> z = R * dir;
        Scaled val = scaled_qpoch_range(ak * z, p.q, 0, pi.u);
        val *= scaled_qpoch_inf(ak * z * std::pow(p.q, static_cast<double>(pi.u + 1)), p.q);
        for (std::size_t i = 0; i < p.N(); ++i) {
            if (static_cast<int>(i) + 1 == pi.k) continue;
            val *= scaled_qpoch_inf(p.a[i] * z, p.q);
        }
        for (double bj : p.b) val /= scaled_qpoch_inf(bj / z, p.q);
        // dz/z^{1+m} contributes z_j / z_j^{1+m} = R^{-m} e^{-i m theta}
        val *= Scaled::from_log(-static_cast<double>(m) * std::log(R),
                                std::polar(1.0, -static_cast<double>(m) * th));
        terms[static_cast<std::size_t>(j)] = val;
    }
    Scaled mean = scaled_sum(terms);
    mean *= Scaled::from_log(-std::log(static_cast<double>(points)));
    mean *= complex<double>(-pi.value);
    return mean;
}

}  // namespace

Scaled matrix_A_scaled(long m, long r, const ParamSet& p, int points,
                       std::optional<complex<double>> zeta) {
    Scaled s = a_integral_scaled(m, r, p, points);
    complex<double> f = zeta ? f_zeta(m, *zeta, p.q) : complex<double>(fermi_f(m, p));
    s *= f;
    return s;
}

Scaled matrix_B_scaled(long r, long m, const ParamSet& p) {
    PoleIndex pi = pole_index(p, r);
    Scaled s = residue_at_pole(p, r);
    s *= Scaled::from_log(-static_cast<double>(m) * std::log(pi.value));
    return s;
}

complex<double> matrix_A(long m, long r, const ParamSet& p, int points) {
    return matrix_A_scaled(m, r, p, points).value();
}

complex<double> matrix_B(long r, long m, const ParamSet& p) {
    return matrix_B_scaled(r, m, p).value();
}

complex<double> matrix_A_tilde(long m, long r, const ParamSet& p, int points,
                               const ConjugatorConfig& cj,
                               std::optional<complex<double>> zeta) {
    cj.validate();
    Scaled s = matrix_A_scaled(m, r, p, points, zeta);
    s *= Scaled::from_log(log_tau(m, p, cj.eps) + log_sigma(r, p, cj.omega));
    return s.value();
}

complex<double> matrix_B_tilde(long r, long m, const ParamSet& p,
                               const ConjugatorConfig& cj) {
    cj.validate();
    Scaled s = matrix_B_scaled(r, m, p);
    s *= Scaled::from_log(-log_sigma(r, p, cj.omega) - log_tau(m, p, cj.eps));
    return s.value();
}

complex<double> kernel_K(long m1, long m2, const ParamSet& p, const ContourSpec& zquad) {
    p.require_qlaplace_valid();
    // Only the simple poles w = 1/a_j lie inside D, so the w-integral is the
    // residue sum r = 1..N; the z-integral is the quadrature inside A.
    std::vector<Scaled> terms;
    for (long r = 1; r <= static_cast<long>(p.N()); ++r) {
        Scaled t = a_integral_scaled(m1, r, p, zquad.points);
        t *= matrix_B_scaled(r, m2, p);
        terms.push_back(t);
    }
    return scaled_sum(terms).value();
}

complex<double> kernel_K_ell(long m1, long m2, long ell, const ParamSet& p, int points) {
    if (ell < 0) throw std::invalid_argument("kernel_K_ell: ell must be >= 0");
    std::vector<Scaled> terms;
    for (long r = 1; r <= static_cast<long>(p.N()) * (ell + 1); ++r) {
        Scaled t = a_integral_scaled(m1, r, p, points);
        t *= matrix_B_scaled(r, m2, p);
        terms.push_back(t);
    }
    return scaled_sum(terms).value();
}

complex<double> kernel_K_inf(long m1, long m2, const ParamSet& p, double tail_tol,
                             int points, double eps) {
    const long N = static_cast<long>(p.N());
    const double ratio = std::pow(p.q, 0.5 - eps);  // per-u tail envelope
    std::vector<Scaled> terms;
    double prev_block = 0.0;
    const long u_max = 400;
    for (long u = 0; u <= u_max; ++u) {
        double block = 0.0;
        for (long k = 1; k <= N; ++k) {
            long r = u * N + k;
            Scaled t = a_integral_scaled(m1, r, p, points);
            t *= matrix_B_scaled(r, m2, p);
            terms.push_back(t);
            block += std::exp(std::min(t.lg, 700.0));
        }
        // The block magnitudes rise to a single peak (near u ~ m2/N) and then
        // fall at least geometrically, so the envelope tail bound applies
        // only once the blocks have started decreasing.
        double tail_bound = block * ratio / (1.0 - ratio);
        if (u >= 2 && block < prev_block && tail_bound < tail_tol)
            return scaled_sum(terms).value();
        prev_block = block;
    }
    throw std::runtime_error("kernel_K_inf: tail bound not reached by u_max");
}

complex<double> kernel_L(long m1, long m2, const ParamSet& p,
                         const ContourSpec& quadC, const ContourSpec& quadDbar) {
    p.require_measure_valid();
    if (!(quadDbar.radius > quadC.radius))
        throw std::invalid_argument("kernel_L: Dbar must enclose C");
    complex<double> acc{0.0, 0.0};
    for (int Z = 0; Z < quadC.points; ++Z) {
        complex<double> z = quadC.node(Z);
        for (int W = 0; W < quadDbar.points; ++W) {
            complex<double> w = quadDbar.node(W);
            acc += g_ab(z, w, m1, m2, p);
        }
    }
    return acc / static_cast<double>(quadC.points) / static_cast<double>(quadDbar.points);
}

complex<double> kernel_K_ell_contour(long m1, long m2, long ell, const ParamSet& p,
                                     int points) {
    p.require_qlaplace_valid();
    // D_ell as a union of per-u circles, one around each pole ring
    // [q^{-u}/a_max, q^{-u}/a_min], u = 0..ell. A single circle around the
    // whole cluster would put its nodes geometrically far from the inner
    // poles as ell grows; the ring union keeps the quadrature conditioning
    // scale-invariant in u.
    ContourSpec zq = ContourSpec::default_C(p, points);
    complex<double> total{0.0, 0.0};
    for (long u = 0; u <= ell; ++u) {
        double scale = std::pow(p.q, -static_cast<double>(u));
        double lo = scale / p.a_max();
        double hi = scale / p.a_min();
        double below = (u == 0) ? zq.radius : hi * p.q;  // previous ring's top
        double above = scale / p.q / p.a_max();          // next ring's bottom
        double margin = 0.5 * std::min(lo - below, above - hi);
        if (!(margin > 0))
            throw std::invalid_argument("kernel_K_ell_contour: cannot separate poles");
        ContourSpec wq;
        wq.center = complex<double>(0.5 * (lo + hi), 0.0);
        wq.radius = 0.5 * (hi - lo) + margin;
        wq.points = points;
        total += zq.integrate([&](complex<double> z) {
            complex<double> inner = wq.integrate([&](complex<double> w) {
                return g_ab(z, w, m1, m2, p) / w;
            });
            return inner / z;
        });
    }
    return total;
}

}  // namespace qcauchy
