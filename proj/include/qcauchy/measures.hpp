#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qcauchy/partition.hpp"
#include "qcauchy/qseries.hpp"

namespace qcauchy {

// Specialization shared by measures and kernels: variables a_1..a_N,
// b_1..b_M, 0 <= q < 1, shift parameter t > 0, threshold k (or n), and an
// optional zeta for the q-Laplace transform (defaults to -t q^{1/2+k}).
struct ParamSet {
    std::vector<double> a;
    std::vector<double> b;
    double q = 0.5;
    double t = 1.0;
    int k = 0;
    std::optional<std::complex<double>> zeta;

    std::size_t N() const { return a.size(); }
    std::size_t M() const { return b.size(); }
    double a_max() const;
    double a_min() const;
    double b_max() const;
    std::complex<double> zeta_or_default() const;

    // a_i, b_j > 0, a_max b_max < 1, 0 < q < 1, t > 0.
    void require_measure_valid() const;
    // Prop. 2.2 hypotheses: measure validity plus q a_max < a_min, distinct a.
    void require_qlaplace_valid() const;
    // Section-3 hypotheses: distinct descending a, a_1/a_N < q^{-1/2+eps}.
    void require_section3_valid(double eps) const;

    // Human-readable description of the first violated hypothesis, if any.
    std::optional<std::string> violated_measure_hypothesis() const;
    std::optional<std::string> violated_qlaplace_hypothesis() const;
    std::optional<std::string> violated_section3_hypothesis(double eps) const;
};

struct TruncationPolicy {
    long weight_cutoff = 14;
    int series_order = 8;
    double float_tail_tol = 1e-8;
};

// Result of a truncated float sum together with a bound on the dropped mass.
struct TruncatedValue {
    double value = 0.0;
    double residual = 0.0;
};

// Normalization constants. Z_qW = prod 1/(a_i b_j;q)_inf; Z_pS adds 1/(q;q)_inf.
double qw_normalization(const ParamSet& p);
double ps_normalization(const ParamSet& p);

// q-Whittaker measure weight P_mu(a) Q_mu(b) / Z_qW.
double qw_weight(const Partition& mu, const ParamSet& p);

// Periodic Schur measure weight
// sum_{rho subset lambda} q^{|rho|} s_{lambda/rho}(a) s_{lambda/rho}(b) / Z_pS.
double ps_weight(const Partition& lambda, const ParamSet& p);

// P(chi = n) = q^n (q;q)_inf / (q;q)_n and P(chi <= m) = (q;q)_inf/(q;q)_m
// for m >= 0, zero below.
double chi_pmf(long n, double q);
double chi_cdf(long m, double q);

// P(S = l) = t^l q^{l^2/2} / [(q;q)_inf theta(-t q^{1/2})].
double shift_pmf(long l, const ParamSet& p);

// P(chi + S <= n): returns the closed form 1/(-t q^{1/2+n};q)_inf.
// The bilateral convolution route lives in the tests.
double chi_plus_shift_cdf(long n, const ParamSet& p);

// Brute-force E[1/(zeta q^{-mu_1};q)_inf] over mu enumerated up to the weight
// cutoff, with the unsummed measure mass reported as the residual.
TruncatedValue qlaplace_lhs(const ParamSet& p, const TruncationPolicy& trunc);

// Brute-force P(mu_1 <= m) with truncation residual.
TruncatedValue mu1_cdf(long m, const ParamSet& p, const TruncationPolicy& trunc);

// Brute-force P(lambda_1 <= m) under the periodic Schur measure.
TruncatedValue lambda1_cdf(long m, const ParamSet& p, const TruncationPolicy& trunc);

// Brute-force P(lambda_1 + S <= k) = sum_l P(S = l) P(lambda_1 <= k - l).
TruncatedValue lambda1_shift_cdf(long k, const ParamSet& p, const TruncationPolicy& trunc);

// Exact coefficientwise comparison of the two restricted Cauchy sums:
//   LHS = sum_{mu_1 <= n} P_mu(a) Q_mu(b) * sum_{nu_1 <= n - mu_1} q^{|nu|}
//   RHS = sum_{lambda_1 <= n, rho subset lambda} q^{|rho|}
//             s_{lambda/rho}(a) s_{lambda/rho}(b)
// both truncated mod q^{order+1}, with exact rational a, b.
struct Theorem1Report {
    int n = 0;
    int order = 0;
    std::vector<mpq_class> lhs_coeffs;
    std::vector<mpq_class> rhs_coeffs;
    bool equal = false;
    std::optional<int> first_mismatch;
};

Theorem1Report verify_theorem1(int n, const std::vector<mpq_class>& a,
                               const std::vector<mpq_class>& b, int order);

}  // namespace qcauchy
