#include "qcauchy/measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qcauchy/qpochhammer.hpp"
#include "qcauchy/symfunc.hpp"

namespace qcauchy {

namespace {

// Kahan-compensated accumulator so float sums are robust to summation order.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

double ParamSet::a_max() const { return *std::max_element(a.begin(), a.end()); }
double ParamSet::a_min() const { return *std::min_element(a.begin(), a.end()); }
double ParamSet::b_max() const { return *std::max_element(b.begin(), b.end()); }

std::complex<double> ParamSet::zeta_or_default() const {
    if (zeta) return *zeta;
    return {-t * std::pow(q, 0.5 + k), 0.0};
}

std::optional<std::string> ParamSet::violated_measure_hypothesis() const {
    if (a.empty() || b.empty()) return "a and b must be nonempty";
    for (double x : a)
        if (!(x > 0)) return "a_i > 0";
    for (double x : b)
        if (!(x > 0)) return "b_j > 0";
    if (!(a_max() * b_max() < 1.0)) return "a_max*b_max < 1";
    if (!(q >= 0.0 && q < 1.0)) return "0 <= q < 1";
    if (!(t > 0.0)) return "t > 0";
    return std::nullopt;
}

std::optional<std::string> ParamSet::violated_qlaplace_hypothesis() const {
    if (auto v = violated_measure_hypothesis()) return v;
    if (!(q * a_max() < a_min())) return "q*a_max < a_min";
    std::set<double> distinct(a.begin(), a.end());
    if (distinct.size() != a.size()) return "a_i distinct";
    return std::nullopt;
}

std::optional<std::string> ParamSet::violated_section3_hypothesis(double eps) const {
    if (auto v = violated_qlaplace_hypothesis()) return v;
    if (!(eps > 0.0 && eps < 0.5)) return "eps in (0,1/2)";
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        if (!(a[i] > a[i + 1])) return "a sorted strictly descending";
    if (a.size() != b.size()) return "M = N in section-3 mode";
    if (!(a.front() / a.back() < std::pow(q, -0.5 + eps)))
        return "a1/aN < q^{-1/2+eps}";
    return std::nullopt;
}

void ParamSet::require_measure_valid() const {
    if (auto v = violated_measure_hypothesis())
        throw std::invalid_argument("ParamSet: violated " + *v);
}

void ParamSet::require_qlaplace_valid() const {
    if (auto v = violated_qlaplace_hypothesis())
        throw std::invalid_argument("ParamSet: violated " + *v);
}

void ParamSet::require_section3_valid(double eps) const {
    if (auto v = violated_section3_hypothesis(eps))
        throw std::invalid_argument("ParamSet: violated " + *v);
}

double qw_normalization(const ParamSet& p) {
    double z = 1.0;
    for (double ai : p.a)
        for (double bj : p.b) z /= qpoch_inf(Complex(ai * bj), p.q).real();
    return z;
}

double ps_normalization(const ParamSet& p) {
    return qw_normalization(p) / qpoch_inf(Complex(p.q), p.q).real();
}

double qw_weight(const Partition& mu, const ParamSet& p) {
    p.require_measure_valid();
    if (mu.length() > std::min(p.N(), p.M())) return 0.0;
    double P = qwhittaker_P(mu, p.a, p.q);
    double Q = qwhittaker_Q(mu, p.b, p.q);
    return P * Q / qw_normalization(p);
}

double ps_weight(const Partition& lambda, const ParamSet& p) {
    p.require_measure_valid();
    Kahan acc;
    for (const Partition& rho : enumerate_subpartitions(lambda)) {
        double s1 = skew_schur(lambda, rho, p.a);
        if (s1 == 0.0) continue;
        double s2 = skew_schur(lambda, rho, p.b);
        if (s2 == 0.0) continue;
        acc.add(std::pow(p.q, static_cast<double>(rho.weight())) * s1 * s2);
    }
    return acc.sum / ps_normalization(p);
}

double chi_pmf(long n, double q) {
    if (n < 0) return 0.0;
    return std::pow(q, static_cast<double>(n)) * qpoch_inf(Complex(q), q).real() /
           qpoch_n(Complex(q), q, n).real();
}

double chi_cdf(long m, double q) {
    if (m < 0) return 0.0;
    return qpoch_inf(Complex(q), q).real() / qpoch_n(Complex(q), q, m).real();
}

double shift_pmf(long l, const ParamSet& p) {
    if (!(p.t > 0.0 && p.q > 0.0 && p.q < 1.0))
        throw std::invalid_argument("shift_pmf: need t > 0, 0 < q < 1");
    double norm = qpoch_inf(Complex(p.q), p.q).real() *
                  theta(Complex(-p.t * std::sqrt(p.q)), p.q).real();
    return std::pow(p.t, static_cast<double>(l)) *
           std::pow(p.q, 0.5 * static_cast<double>(l) * static_cast<double>(l)) / norm;
}

double chi_plus_shift_cdf(long n, const ParamSet& p) {
    if (!(p.t > 0.0 && p.q > 0.0 && p.q < 1.0))
        throw std::invalid_argument("chi_plus_shift_cdf: need t > 0, 0 < q < 1");
    return 1.0 / qpoch_inf(Complex(-p.t * std::pow(p.q, 0.5 + static_cast<double>(n))), p.q).real();
}

namespace {

// mu with nonzero q-Whittaker weight have length <= min(N, M).
std::vector<Partition> qw_support(const ParamSet& p, long weight_cutoff) {
    int max_len = static_cast<int>(std::min(p.N(), p.M()));
    return enumerate_by_weight(weight_cutoff, std::nullopt, max_len);
}

}  // namespace

TruncatedValue qlaplace_lhs(const ParamSet& p, const TruncationPolicy& trunc) {
    p.require_measure_valid();
    std::complex<double> zeta = p.zeta_or_default();
    Kahan acc, mass;
    for (const Partition& mu : qw_support(p, trunc.weight_cutoff)) {
        double w = qw_weight(mu, p);
        mass.add(w);
        double integrand = 1.0 / qpoch_inf(zeta * std::pow(p.q, -static_cast<double>(mu.first_part())), p.q).real();
        acc.add(w * integrand);
    }
    // For zeta = -t q^{1/2+k} with t > 0 the integrand sits in (0,1], so the
    // dropped mass bounds the truncation error directly.
    double residual = std::max(0.0, 1.0 - mass.sum);
    return {acc.sum, residual};
}

TruncatedValue mu1_cdf(long m, const ParamSet& p, const TruncationPolicy& trunc) {
    p.require_measure_valid();
    if (m < 0) return {0.0, 0.0};
    Kahan acc, mass;
    for (const Partition& mu : qw_support(p, trunc.weight_cutoff)) {
        double w = qw_weight(mu, p);
        mass.add(w);
        if (mu.first_part() <= m) acc.add(w);
    }
    return {acc.sum, std::max(0.0, 1.0 - mass.sum)};
}

TruncatedValue lambda1_cdf(long m, const ParamSet& p, const TruncationPolicy& trunc) {
    p.require_measure_valid();
    if (m < 0) return {0.0, 0.0};
    Kahan acc, mass;
    for (const Partition& lambda : enumerate_by_weight(trunc.weight_cutoff)) {
        double w = ps_weight(lambda, p);
        mass.add(w);
        if (lambda.first_part() <= m) acc.add(w);
    }
    return {acc.sum, std::max(0.0, 1.0 - mass.sum)};
}

TruncatedValue lambda1_shift_cdf(long k, const ParamSet& p, const TruncationPolicy& trunc) {
    p.require_measure_valid();
    // Pre-tabulate the lambda_1 cdf once; P(lambda_1 <= m) is needed for all
    // m = k - l as l runs over the support of S.
    std::vector<double> cdf_by_m;  // index m >= 0
    double norm_mass = 0.0;
    {
        std::vector<double> mass_by_m(static_cast<std::size_t>(trunc.weight_cutoff) + 1, 0.0);
        for (const Partition& lambda : enumerate_by_weight(trunc.weight_cutoff)) {
            double w = ps_weight(lambda, p);
            mass_by_m[static_cast<std::size_t>(lambda.first_part())] += w;
            norm_mass += w;
        }
        cdf_by_m.resize(mass_by_m.size());
        double run = 0.0;
        for (std::size_t m = 0; m < mass_by_m.size(); ++m) {
            run += mass_by_m[m];
            cdf_by_m[m] = run;
        }
    }
    double cdf_residual = std::max(0.0, 1.0 - norm_mass);
    auto cdf = [&](long m) -> double {
        if (m < 0) return 0.0;
        if (m >= static_cast<long>(cdf_by_m.size())) return cdf_by_m.back();
        return cdf_by_m[static_cast<std::size_t>(m)];
    };

    Kahan acc;
    double shift_tail = 1.0;
    // S concentrates near l* = ln t / ln(1/q); only stop once safely past it.
    long center = std::lround(std::log(p.t) / std::log(1.0 / p.q));
    for (long l = k; l >= k - 1000; --l) {  // S decays like q^{l^2/2} both ways
        double ps = shift_pmf(l, p);
        shift_tail -= ps;
        acc.add(ps * cdf(k - l));
        if (ps < 1e-18 && l < center - 6) break;
    }
    // The l > k side contributes nothing to the convolution (cdf = 0) but
    // belongs to the accounted S-mass.
    for (long l = k + 1; l <= k + 1000; ++l) {
        double ps = shift_pmf(l, p);
        shift_tail -= ps;
        if (ps < 1e-18 && l > center + 6) break;
    }
    double residual = cdf_residual + std::max(0.0, shift_tail);
    return {acc.sum, residual};
}

Theorem1Report verify_theorem1(int n, const std::vector<mpq_class>& a,
                               const std::vector<mpq_class>& b, int order) {
    if (n < 0 || order < 0)
        throw std::invalid_argument("verify_theorem1: n and order must be >= 0");
    const std::size_t N = a.size(), M = b.size();
    Theorem1Report rep;
    rep.n = n;
    rep.order = order;

    // LHS: mu with mu_1 <= n and length <= min(N,M); the nu-sum collapses to
    // the restricted weight series sum_{nu_1 <= n - mu_1} q^{|nu|}.
    QSeries qgen = QSeries::generator(order);
    std::vector<QSeries> a_series, b_series;
    for (const auto& x : a) a_series.emplace_back(order, x);
    for (const auto& x : b) b_series.emplace_back(order, x);
    QSeries lhs(order);
    for (const Partition& mu :
         enumerate_partitions(n, static_cast<int>(std::min(N, M)))) {
        QSeries P = qwhittaker_P(mu, a_series, qgen);
        QSeries Q = qwhittaker_Q(mu, b_series, qgen);
        lhs += P * Q * qpoch_qq_n_inverse_series(n - mu.first_part(), order);
    }

    // RHS: coefficient of q^w collects rho with |rho| = w; for each rho the
    // lambda sum is finite because lambda_1 <= n and rows of lambda below
    // length(rho) + max(N, M) force a skew column taller than the variable
    // count, killing the product of the two skew Schur factors.
    QSeries rhs(order);
    int max_rows = static_cast<int>(std::max(N, M));
    for (const Partition& rho : enumerate_by_weight(order, n)) {
        int rows = static_cast<int>(rho.length()) + max_rows;
        mpq_class coeff(0);
        for (const Partition& lambda : enumerate_partitions(n, rows)) {
            if (!contains(rho, lambda)) continue;
            mpq_class s1 = skew_schur(lambda, rho, a);
            if (s1 == 0) continue;
            mpq_class s2 = skew_schur(lambda, rho, b);
            if (s2 == 0) continue;
            coeff += s1 * s2;
        }
        rhs.coeff_ref(static_cast<int>(rho.weight())) += coeff;
    }

    rep.lhs_coeffs = lhs.coeffs();
    rep.rhs_coeffs = rhs.coeffs();
    rep.equal = (lhs == rhs);
    if (!rep.equal) {
        for (int i = 0; i <= order; ++i) {
            if (lhs.coeff(i) != rhs.coeff(i)) {
                rep.first_mismatch = i;
                break;
            }
        }
    }
    return rep;
}

}  // namespace qcauchy
