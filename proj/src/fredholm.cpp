#include "qcauchy/fredholm.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qcauchy/parallel.hpp"
#include "qcauchy/qpochhammer.hpp"

namespace qcauchy {

using std::complex;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

Window default_window(const ParamSet& p, double tol) {
    if (!(p.q > 0.0 && p.q < 1.0))
        throw std::invalid_argument("default_window: q must be in (0,1)");
    long n8 = 8 * static_cast<long>(p.N());
    long extra = static_cast<long>(std::ceil(std::log(tol) / std::log(p.q)));
    return {-n8, n8 + extra};
}

namespace {

// ---- conjugated A~ B~ assembly for the K family ------------------------

// A~ rows for a fixed u-block over the whole window, sharing the per-radius
// node tables. The u-block covers r = uN+1 .. uN+N.
struct BlockAssembler {
    const ParamSet& p;
    const DetOptions& opt;
    Window w;
    std::vector<double> radii;           // per row index
    std::map<double, std::vector<long>> rows_by_radius;
    // per radius: node directions and the r-independent factor
    // prod_i (a_i z;q)_inf / prod_j (b_j/z;q)_inf is NOT precomputable per
    // block (the k-th a-factor splits at u), so we keep per-radius, per-i
    // prefix states that advance with u.
    struct RadiusTable {
        double R;
        std::vector<complex<double>> z;
        std::vector<double> theta;
        std::vector<Scaled> denom;                    // prod_j (b_j/z;q)_inf
        std::vector<std::vector<Scaled>> prefix;      // [i][node] = (a_i z;q)_u
        std::vector<std::vector<Scaled>> full;        // [i][node] = (a_i z;q)_inf
        long u_state = 0;
    };
    std::vector<RadiusTable> tables;
    std::map<double, std::size_t> table_of_radius;

    BlockAssembler(const ParamSet& p_, const DetOptions& opt_, Window w_)
        : p(p_), opt(opt_), w(w_) {
        const long W = w.size();
        radii.resize(static_cast<std::size_t>(W));
        for (long i = 0; i < W; ++i) {
            double R = detail::a_contour_radius(w.lo + i, p);
            radii[static_cast<std::size_t>(i)] = R;
            rows_by_radius[R].push_back(i);
        }
        for (const auto& [R, rows] : rows_by_radius) {
            RadiusTable t;
            t.R = R;
            const int n = opt.points;
            t.z.resize(static_cast<std::size_t>(n));
            t.theta.resize(static_cast<std::size_t>(n));
            t.denom.assign(static_cast<std::size_t>(n), Scaled::one());
            t.prefix.assign(p.N(), std::vector<Scaled>(static_cast<std::size_t>(n), Scaled::one()));
            t.full.assign(p.N(), std::vector<Scaled>(static_cast<std::size_t>(n)));
            for (int j = 0; j < n; ++j) {
                double th = 2.0 * std::numbers::pi * j / n;
                t.theta[static_cast<std::size_t>(j)] = th;
                complex<double> z = R * std::polar(1.0, th);
                t.z[static_cast<std::size_t>(j)] = z;
                for (double bj : p.b)
                    t.denom[static_cast<std::size_t>(j)] *= detail::scaled_qpoch_inf(bj / z, p.q);
                for (std::size_t i = 0; i < p.N(); ++i)
                    t.full[i][static_cast<std::size_t>(j)] = detail::scaled_qpoch_inf(p.a[i] * z, p.q);
            }
            table_of_radius[R] = tables.size();
            tables.push_back(std::move(t));
        }
    }

    void advance_to(long u) {
        for (auto& t : tables) {
            while (t.u_state < u) {
                for (std::size_t i = 0; i < p.N(); ++i) {
                    double aq = p.a[i] * std::pow(p.q, static_cast<double>(t.u_state));
                    for (std::size_t j = 0; j < t.z.size(); ++j)
                        t.prefix[i][j] *= (1.0 - aq * t.z[j]);
                }
                t.u_state++;
            }
        }
    }

    // A~(m; r) for every m in the window at fixed r = uN+k; fills a column.
    // Rows are independent, so they run under parallel_for.
    void fill_A_column(long u, int k, VectorXcd& col) {
        advance_to(u);
        PoleIndex pi = pole_index(p, static_cast<long>(u * static_cast<long>(p.N())) + k);
        const double lsig = log_sigma(pi.r, p, opt.conj.omega);
        parallel_for(w.size(), [&](long i) {
            long m = w.lo + i;
            const RadiusTable& t = tables[table_of_radius.at(radii[static_cast<std::size_t>(i)])];
            const int n = static_cast<int>(t.z.size());
            std::vector<Scaled> terms(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                Scaled val = t.prefix[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)];
                double qtail = std::pow(p.q, static_cast<double>(pi.u + 1));
                val *= detail::scaled_qpoch_inf(p.a[static_cast<std::size_t>(k - 1)] * t.z[static_cast<std::size_t>(j)] * qtail, p.q);
                for (std::size_t ii = 0; ii < p.N(); ++ii) {
                    if (static_cast<int>(ii) + 1 == k) continue;
                    val *= t.full[ii][static_cast<std::size_t>(j)];
                }
                val /= t.denom[static_cast<std::size_t>(j)];
                val *= Scaled::from_log(-static_cast<double>(m) * std::log(t.R),
                                        std::polar(1.0, -static_cast<double>(m) * t.theta[static_cast<std::size_t>(j)]));
                terms[static_cast<std::size_t>(j)] = val;
            }
            Scaled s = scaled_sum(terms);
            s *= Scaled::from_log(-std::log(static_cast<double>(n)));
            s *= complex<double>(-pi.value);
            complex<double> f = opt.zeta ? f_zeta(m, *opt.zeta, p.q)
                                         : complex<double>(fermi_f(m, p));
            s *= f;
            s *= Scaled::from_log(log_tau(m, p, opt.conj.eps) + lsig);
            col(i) = s.value();
        });
    }

    // B~(r; m) row at fixed r.
    void fill_B_row(long r, Eigen::RowVectorXcd& row) {
        PoleIndex pi = pole_index(p, r);
        Scaled res = detail::residue_at_pole(p, r);
        const double lsig = log_sigma(r, p, opt.conj.omega);
        for (long i = 0; i < w.size(); ++i) {
            long m = w.lo + i;
            Scaled s = res;
            s *= Scaled::from_log(-static_cast<double>(m) * std::log(pi.value) - lsig -
                                  log_tau(m, p, opt.conj.eps));
            row(i) = s.value();
        }
    }
};

// Conjugated window of f*K_ell / f*K_inf: M~(m1,m2) = tau(m1) f(m1)
// K(m1,m2) / tau(m2), accumulated u-block by u-block.
MatrixXcd assemble_K_family(const ParamSet& p, Window w, const DetOptions& opt,
                            bool adaptive, long ell) {
    const long W = w.size();
    const long N = static_cast<long>(p.N());
    MatrixXcd M = MatrixXcd::Zero(W, W);
    BlockAssembler asmb(p, opt, w);
    const double ratio = std::pow(p.q, 0.5 - opt.conj.eps);
    double prev_norm = 0.0;
    const long u_cap = adaptive ? 400 : ell;
    for (long u = 0; u <= u_cap; ++u) {
        MatrixXcd Ablk(W, N);
        MatrixXcd Bblk(N, W);
        for (int k = 1; k <= static_cast<int>(N); ++k) {
            VectorXcd col(W);
            asmb.fill_A_column(u, k, col);
            Ablk.col(k - 1) = col;
            Eigen::RowVectorXcd row(W);
            asmb.fill_B_row(u * N + k, row);
            Bblk.row(k - 1) = row;
        }
        MatrixXcd inc = Ablk * Bblk;
        M += inc;
        if (adaptive) {
            double nrm = inc.cwiseAbs().maxCoeff();
            double tail_bound = nrm * ratio / (1.0 - ratio);
            if (u >= 2 && nrm < prev_norm && tail_bound < opt.tail_tol) return M;
            prev_norm = nrm;
        }
    }
    if (adaptive)
        throw std::runtime_error("assemble_K_family: K_inf tail bound not reached");
    return M;
}

// ---- raw f*L window -----------------------------------------------------

// Adaptive radii: large powers of w (m2 < 0 wants |w| big, m2 >= 0 small)
// and of z (m1 > 0 wants |z| big) are kept bounded by assembling the four
// sign quadrants with their own radius pair; the kernel value does not
// depend on the radii as long as b_max < |z| < |w| < 1/a_max.
MatrixXcd assemble_L(const ParamSet& p, Window w, const DetOptions& opt) {
    const long W = w.size();
    const double lo = p.b_max(), hi = 1.0 / p.a_max();
    if (!(lo < hi)) throw std::invalid_argument("assemble_L: a_max b_max >= 1");
    const double span = hi / lo;
    // m2 >= 0 wants |w| small (w^{m2} bounded); m2 < 0 takes the radius that
    // equalizes the separation ratios Rw/Rz = hi/Rw with Rz = sqrt(lo Rw),
    // i.e. Rw = (hi^2 lo)^{1/3}. z sits at the geometric midpoint of
    // (b_max, Rw) so both trapezoid error ratios match.
    auto Rw_of = [&](bool pos) {
        return pos ? lo * std::pow(span, 0.45) : std::cbrt(hi * hi * lo);
    };
    auto Rz_of = [&](bool, double Rw) { return std::sqrt(lo * Rw); };

    MatrixXcd M(W, W);
    const int n = opt.points;
    for (bool m1pos : {false, true}) {
        for (bool m2pos : {false, true}) {
            double Rw = Rw_of(m2pos);
            double Rz = Rz_of(m1pos, Rw);
            if (!(lo < Rz && Rz < Rw && Rw < hi))
                throw std::runtime_error("assemble_L: no valid radius pair; annulus too thin");
            std::vector<long> m1s, m2s;
            for (long i = 0; i < W; ++i) {
                long m = w.lo + i;
                if ((m > 0) == m1pos) m1s.push_back(i);
                if ((m > 0) == m2pos) m2s.push_back(i);
            }
            if (m1s.empty() || m2s.empty()) continue;

            std::vector<complex<double>> z(static_cast<std::size_t>(n)), wv(static_cast<std::size_t>(n));
            std::vector<complex<double>> Pz(static_cast<std::size_t>(n)), Pw(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                double th = 2.0 * std::numbers::pi * j / n;
                z[static_cast<std::size_t>(j)] = Rz * std::polar(1.0, th);
                wv[static_cast<std::size_t>(j)] = Rw * std::polar(1.0, th);
                complex<double> pz(1.0, 0.0), pw(1.0, 0.0);
                for (double ai : p.a) {
                    pz *= qpoch_inf(ai * z[static_cast<std::size_t>(j)], p.q);
                    pw /= qpoch_inf(ai * wv[static_cast<std::size_t>(j)], p.q);
                }
                for (double bj : p.b) {
                    pz /= qpoch_inf(bj / z[static_cast<std::size_t>(j)], p.q);
                    pw *= qpoch_inf(bj / wv[static_cast<std::size_t>(j)], p.q);
                }
                Pz[static_cast<std::size_t>(j)] = pz;
                Pw[static_cast<std::size_t>(j)] = pw;
            }
            // L(m1,m2) = sum_{j,l} U(j,m1) * 1/(z_j - w_l) * V(l,m2)
            MatrixXcd U(n, static_cast<long>(m1s.size()));
            MatrixXcd V(n, static_cast<long>(m2s.size()));
            for (std::size_t c = 0; c < m1s.size(); ++c) {
                long m1 = w.lo + m1s[c];
                for (int j = 0; j < n; ++j)
                    U(j, static_cast<long>(c)) =
                        std::pow(z[static_cast<std::size_t>(j)], static_cast<double>(-m1)) *
                        Pz[static_cast<std::size_t>(j)] / static_cast<double>(n);
            }
            for (std::size_t c = 0; c < m2s.size(); ++c) {
                long m2 = w.lo + m2s[c];
                for (int l = 0; l < n; ++l)
                    V(l, static_cast<long>(c)) =
                        std::pow(wv[static_cast<std::size_t>(l)], static_cast<double>(m2 + 1)) *
                        Pw[static_cast<std::size_t>(l)] / static_cast<double>(n);
            }
            MatrixXcd Mid(n, n);
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                    Mid(j, l) = 1.0 / (z[static_cast<std::size_t>(j)] - wv[static_cast<std::size_t>(l)]);
            MatrixXcd blk = U.transpose() * (Mid * V);
            for (std::size_t rI = 0; rI < m1s.size(); ++rI) {
                long m1 = w.lo + m1s[rI];
                double f = fermi_f(m1, p);
                for (std::size_t cI = 0; cI < m2s.size(); ++cI)
                    M(m1s[rI], m2s[cI]) = f * blk(static_cast<long>(rI), static_cast<long>(cI));
            }
        }
    }
    return M;
}

double det_real(const MatrixXcd& IM, double* imag_out) {
    complex<double> d = IM.partialPivLu().determinant();
    if (imag_out) *imag_out = d.imag();
    return d.real();
}

double det_window_value(KernelKind kind, const ParamSet& p, Window w,
                        const DetOptions& opt, double* imag_out) {
    const long W = w.size();
    MatrixXcd M;
    double sign = -1.0;
    switch (kind) {
        case KernelKind::K:
            M = assemble_K_family(p, w, opt, false, 0);
            break;
        case KernelKind::K_ell:
            M = assemble_K_family(p, w, opt, false, opt.ell);
            break;
        case KernelKind::K_inf:
            M = assemble_K_family(p, w, opt, true, 0);
            break;
        case KernelKind::L:
            M = assemble_L(p, w, opt);
            sign = 1.0;
            break;
    }
    if (!M.allFinite())
        throw std::runtime_error("fredholm_det_window: non-finite kernel entries");
    MatrixXcd IM = MatrixXcd::Identity(W, W) + sign * M;
    return det_real(IM, imag_out);
}

}  // namespace

KernelMatrix assemble_fK_window(KernelKind kind, const ParamSet& p, Window w,
                                const DetOptions& opt) {
    KernelMatrix km;
    km.window = w;
    switch (kind) {
        case KernelKind::K:
            km.entries = assemble_K_family(p, w, opt, false, 0);
            break;
        case KernelKind::K_ell:
            km.entries = assemble_K_family(p, w, opt, false, opt.ell);
            break;
        case KernelKind::K_inf:
            km.entries = assemble_K_family(p, w, opt, true, 0);
            break;
        case KernelKind::L:
            km.entries = assemble_L(p, w, opt);
            break;
    }
    if (kind != KernelKind::L) {
        km.log_conjugator.resize(static_cast<std::size_t>(w.size()));
        for (long i = 0; i < w.size(); ++i)
            km.log_conjugator[static_cast<std::size_t>(i)] = log_tau(w.lo + i, p, opt.conj.eps);
    }
    return km;
}

DetResult fredholm_det_window(KernelKind kind, const ParamSet& p, Window w,
                              const DetOptions& opt) {
    if (kind == KernelKind::L) p.require_measure_valid();
    else p.require_qlaplace_valid();
    opt.conj.validate();
    DetResult res;
    res.window = w;
    res.value = det_window_value(kind, p, w, opt, &res.imag);
    if (opt.estimate_drift) {
        double v2 = det_window_value(kind, p, w.doubled(), opt, nullptr);
        res.drift = std::abs(res.value - v2);
    }
    return res;
}

namespace {

// theta-ratio closed form of the bilateral m-sum in (B A)_{n,n'}:
// R(x) = theta(-x/T) (q;q)_inf^2 / (theta(-1/T) theta(x)), T = t q^{1/2+k}.
struct ThetaRatio {
    const ParamSet& p;
    double T;
    Scaled norm;  // (q;q)_inf^2 / theta(-1/T)
    explicit ThetaRatio(const ParamSet& p_) : p(p_) {
        T = p.t * std::pow(p.q, 0.5 + p.k);
        Scaled qq = detail::scaled_qpoch_inf(complex<double>(p.q), p.q);
        norm = qq * qq / detail::scaled_theta(complex<double>(-1.0 / T), p.q);
    }
    Scaled operator()(complex<double> x) const {
        return detail::scaled_theta(-x / T, p.q) * norm / detail::scaled_theta(x, p.q);
    }
};

}  // namespace

std::complex<double> finite_rank_W_entry(long n, long np, long ell, const ParamSet& p,
                                         int points) {
    (void)ell;
    ThetaRatio R(p);
    PoleIndex pin = pole_index(p, n);
    PoleIndex pinp = pole_index(p, np);
    const double radius = std::pow(p.q, -0.5) / pin.value;  // between 1/a~_n and 1/(q a~_n)
    Scaled res = detail::residue_at_pole(p, n);
    std::vector<Scaled> terms(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) {
        double th = 2.0 * std::numbers::pi * j / points;
        complex<double> z = radius * std::polar(1.0, th);
        Scaled val = Scaled::from(complex<double>(-1.0) / (z - 1.0 / pinp.value));
        for (std::size_t i = 0; i < p.N(); ++i)
            val *= detail::scaled_qpoch_inf(p.a[i] * z, p.q);
        for (double bj : p.b) val /= detail::scaled_qpoch_inf(bj / z, p.q);
        val *= R(pin.value * z);
        terms[static_cast<std::size_t>(j)] = val;
    }
    Scaled s = scaled_sum(terms);
    s *= Scaled::from_log(-std::log(static_cast<double>(points)));
    s *= res;
    return s.value();
}

Eigen::MatrixXcd kernel_K_ell_contour_window(const ParamSet& p, Window w, long ell,
                                             int points) {
    p.require_qlaplace_valid();
    const long W = w.size();
    const int n = points;
    ContourSpec zq = ContourSpec::default_C(p, n);

    // z-side tables shared by every ring
    std::vector<complex<double>> z(static_cast<std::size_t>(n));
    std::vector<complex<double>> Pz(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        z[static_cast<std::size_t>(j)] = zq.node(j);
        complex<double> pz(1.0, 0.0);
        for (double ai : p.a) pz *= qpoch_inf(ai * z[static_cast<std::size_t>(j)], p.q);
        for (double bj : p.b) pz /= qpoch_inf(bj / z[static_cast<std::size_t>(j)], p.q);
        Pz[static_cast<std::size_t>(j)] = pz;
    }
    MatrixXcd U(n, W);
    for (long c = 0; c < W; ++c) {
        long m1 = w.lo + c;
        for (int j = 0; j < n; ++j)
            U(j, c) = std::pow(z[static_cast<std::size_t>(j)], static_cast<double>(-m1)) *
                      Pz[static_cast<std::size_t>(j)] / static_cast<double>(n);
    }

    MatrixXcd total = MatrixXcd::Zero(W, W);
    for (long u = 0; u <= ell; ++u) {
        double scale = std::pow(p.q, -static_cast<double>(u));
        double lo = scale / p.a_max();
        double hi = scale / p.a_min();
        double below = (u == 0) ? zq.radius : hi * p.q;
        double above = scale / p.q / p.a_max();
        double margin = 0.5 * std::min(lo - below, above - hi);
        if (!(margin > 0))
            throw std::invalid_argument("kernel_K_ell_contour_window: cannot separate poles");
        ContourSpec wq;
        wq.center = complex<double>(0.5 * (lo + hi), 0.0);
        wq.radius = 0.5 * (hi - lo) + margin;
        wq.points = n;

        std::vector<complex<double>> wv(static_cast<std::size_t>(n));
        std::vector<complex<double>> Pw(static_cast<std::size_t>(n));
        for (int l = 0; l < n; ++l) {
            wv[static_cast<std::size_t>(l)] = wq.node(l);
            complex<double> pw(1.0, 0.0);
            for (double bj : p.b) pw *= qpoch_inf(bj / wv[static_cast<std::size_t>(l)], p.q);
            for (double ai : p.a) pw /= qpoch_inf(ai * wv[static_cast<std::size_t>(l)], p.q);
            Pw[static_cast<std::size_t>(l)] = pw;
        }
        MatrixXcd V(n, W);
        for (long c = 0; c < W; ++c) {
            long m2 = w.lo + c;
            for (int l = 0; l < n; ++l)
                V(l, c) = (wv[static_cast<std::size_t>(l)] - wq.center) *
                          std::pow(wv[static_cast<std::size_t>(l)], static_cast<double>(m2)) *
                          Pw[static_cast<std::size_t>(l)] / static_cast<double>(n);
        }
        MatrixXcd Mid(n, n);
        parallel_for(n, [&](long j) {
            for (int l = 0; l < n; ++l)
                Mid(j, l) = 1.0 / (z[static_cast<std::size_t>(j)] - wv[static_cast<std::size_t>(l)]);
        });
        total += U.transpose() * (Mid * V);
    }
    return total;
}

double fredholm_det_finite_rank(long ell, const ParamSet& p, int points) {
    if (ell < 0) throw std::invalid_argument("fredholm_det_finite_rank: ell >= 0");
    p.require_qlaplace_valid();
    const long R = static_cast<long>(p.N()) * (ell + 1);
    MatrixXcd W(R, R);
    for (long n = 1; n <= R; ++n)
        for (long np = 1; np <= R; ++np)
            W(n - 1, np - 1) = finite_rank_W_entry(n, np, ell, p, points);
    if (!W.allFinite())
        throw std::runtime_error("fredholm_det_finite_rank: non-finite entries");
    complex<double> d = W.partialPivLu().determinant();
    return d.real();
}

Theorem31Report verify_theorem31(const ParamSet& p, Window w, int points,
                                 long ell_max, double tol) {
    Theorem31Report rep;
    rep.params = p;
    DetOptions opt;
    opt.points = points;
    rep.eps = opt.conj.eps;
    rep.section2_ok = !p.violated_qlaplace_hypothesis().has_value();
    rep.section3_ok = !p.violated_section3_hypothesis(opt.conj.eps).has_value();
    if (auto v = p.violated_section3_hypothesis(opt.conj.eps))
        rep.hypothesis_note = "violated: " + *v;
    if (!rep.section2_ok || !rep.section3_ok)
        throw std::invalid_argument("verify_theorem31: " +
                                    (rep.hypothesis_note.empty()
                                         ? std::string("hypotheses not satisfied")
                                         : rep.hypothesis_note));

    DetResult dk = fredholm_det_window(KernelKind::K, p, w, opt);
    rep.F_window_K = dk.value;
    rep.F_window_K_drift = dk.drift;

    for (long ell = 0; ell <= ell_max; ++ell) {
        rep.F_rank.push_back(fredholm_det_finite_rank(ell, p, points));
        DetOptions o2 = opt;
        o2.ell = ell;
        o2.estimate_drift = false;
        rep.F_ell_window.push_back(
            fredholm_det_window(KernelKind::K_ell, p, w, o2).value);
    }

    DetOptions oinf = opt;
    oinf.estimate_drift = false;
    rep.F_K_inf = fredholm_det_window(KernelKind::K_inf, p, w, oinf).value;

    DetResult dl = fredholm_det_window(KernelKind::L, p, w, opt);
    rep.F_L = dl.value;
    rep.F_L_drift = dl.drift;

    rep.gap_K_vs_L = std::abs(rep.F_window_K - rep.F_L);
    double mn = rep.F_rank.front(), mx = rep.F_rank.front();
    for (double v : rep.F_rank) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    rep.gap_rank_spread = mx - mn;
    rep.gap_rank_vs_window = std::abs(rep.F_rank.front() - rep.F_window_K);
    rep.pass = rep.gap_K_vs_L < tol;
    return rep;
}

}  // namespace qcauchy
