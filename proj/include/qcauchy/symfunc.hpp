#pragma once

#include <gmpxx.h>

#include <complex>
#include <map>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "qcauchy/partition.hpp"
#include "qcauchy/qseries.hpp"

namespace qcauchy {

// Scalar rings in use: mpq_class (exact), double / complex<double> (numeric),
// QSeries (truncated series with q as the generator). QSeries cannot be
// constructed from a bare int, so ring constants are made from an exemplar.
template <class S>
inline S ring_zero(const S&) { return S(0); }
template <class S>
inline S ring_one(const S&) { return S(1); }
inline QSeries ring_zero(const QSeries& like) { return QSeries(like.order()); }
inline QSeries ring_one(const QSeries& like) { return QSeries(like.order(), mpq_class(1)); }

template <class S>
inline bool ring_is_zero(const S& x) { return x == S(0); }
inline bool ring_is_zero(const QSeries& x) { return x.is_zero(); }
inline bool ring_is_zero(const mpq_class& x) { return x == 0; }

template <class S>
S ring_pow(const S& x, long n, const S& like) {
    S acc = ring_one(like);
    for (long i = 0; i < n; ++i) acc = acc * x;
    return acc;
}

// (q;q)_n = prod_{j=1..n} (1 - q^j) over any ring containing q.
template <class S>
S qpoch_qq_n_ring(const S& q, long n) {
    S acc = ring_one(q);
    S qj = ring_one(q);
    for (long j = 1; j <= n; ++j) {
        qj = qj * q;
        acc = acc * (ring_one(q) - qj);
    }
    return acc;
}

// Complete homogeneous h_k(vars) by the variable-by-variable recurrence
// H(n,k) = H(n-1,k) + x_n H(n,k-1). h_k = 0 for k < 0, h_0 = 1.
// Field scalars only (mpq_class, double, complex<double>).
template <class S>
std::vector<S> complete_homogeneous_table(long k_max, const std::vector<S>& vars) {
    std::vector<S> h(static_cast<std::size_t>(k_max) + 1, S(0));
    h[0] = S(1);
    for (const S& x : vars)
        for (long k = 1; k <= k_max; ++k)
            h[static_cast<std::size_t>(k)] = h[static_cast<std::size_t>(k)] + x * h[static_cast<std::size_t>(k - 1)];
    return h;
}

template <class S>
S complete_homogeneous(long k, const std::vector<S>& vars) {
    if (k < 0) return S(0);
    return complete_homogeneous_table(k, vars)[static_cast<std::size_t>(k)];
}

namespace detail {

template <class S>
double pivot_size(const S& x) {
    if constexpr (std::is_same_v<S, mpq_class>) {
        return x == 0 ? 0.0 : 1.0;  // exact ring: any nonzero pivot works
    } else {
        return std::abs(x);
    }
}

// Determinant by Gaussian elimination with pivoting; S must be a field.
template <class S>
S det_field(std::vector<std::vector<S>> m) {
    const std::size_t n = m.size();
    if (n == 0) return S(1);
    S det = S(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = pivot_size(m[col][col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double sz = pivot_size(m[r][col]);
            if (sz > best) { best = sz; piv = r; }
        }
        if (best == 0.0) return S(0);
        if (piv != col) { std::swap(m[piv], m[col]); det = -det; }
        det = det * m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (ring_is_zero(m[r][col])) continue;
            S f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c)
                m[r][c] = m[r][c] - f * m[col][c];
        }
    }
    return det;
}

}  // namespace detail

// Skew Schur polynomial s_{lambda/rho}(vars) by the Jacobi-Trudi determinant
// det(h_{lambda_i - rho_j - i + j}). Returns 0 unless rho is contained in
// lambda; vanishes whenever a column of lambda/rho is taller than #vars.
template <class S>
S skew_schur(const Partition& lambda, const Partition& rho, const std::vector<S>& vars) {
    if (!contains(rho, lambda)) return S(0);
    const std::size_t n = lambda.length();
    if (n == 0) return S(1);
    // Column heights of lambda/rho exceed #vars => 0; cheap structural check
    // that also skips determinants that would cancel to zero anyway.
    for (std::size_t i = 0; i + vars.size() < n; ++i)
        if (lambda.part(i + vars.size()) > rho.part(i)) return S(0);
    long k_max = lambda.first_part() + static_cast<long>(n);
    std::vector<S> h = complete_homogeneous_table(k_max, vars);
    auto hk = [&](long k) -> S {
        if (k < 0) return S(0);
        return h[static_cast<std::size_t>(k)];
    };
    std::vector<std::vector<S>> m(n, std::vector<S>(n, S(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = hk(lambda.part(i) - rho.part(j) - static_cast<long>(i) + static_cast<long>(j));
    return detail::det_field(std::move(m));
}

namespace detail {

// kappa interlaces mu: mu_i >= kappa_i >= mu_{i+1}.
inline void interlacing_rec(const Partition& mu, std::size_t row, std::vector<int>& stack,
                            std::vector<Partition>& out) {
    if (row >= mu.length()) {
        out.emplace_back(stack);
        return;
    }
    for (int k = mu.part(row); k >= mu.part(row + 1); --k) {
        if (k == 0) {
            out.emplace_back(stack);
            return;
        }
        stack.push_back(k);
        interlacing_rec(mu, row + 1, stack, out);
        stack.pop_back();
    }
}

inline std::vector<Partition> interlacing_below(const Partition& mu) {
    std::vector<Partition> out;
    std::vector<int> stack;
    interlacing_rec(mu, 0, stack, out);
    return out;
}

template <class S>
struct QWhittakerCache {
    const std::vector<S>& vars;
    const S& q;
    std::map<std::pair<std::size_t, Partition>, S> memo;

    // Branching over interlacing chains (Gelfand-Tsetlin patterns):
    // P_mu(x_1..x_n) = sum_{kappa < mu} psi_{mu/kappa} P_kappa(x_1..x_{n-1})
    //                   x_n^{|mu|-|kappa|},
    // psi_{mu/kappa} = prod_i (q;q)_{mu_i-mu_{i+1}} /
    //                   [(q;q)_{mu_i-kappa_i} (q;q)_{kappa_i-mu_{i+1}}].
    S eval(const Partition& mu, std::size_t n_vars) {
        if (mu.empty()) return ring_one(q);
        if (mu.length() > n_vars) return ring_zero(q);
        auto key = std::make_pair(n_vars, mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        S acc = ring_zero(q);
        const S& x = vars[n_vars - 1];
        for (const Partition& kappa : interlacing_below(mu)) {
            S psi = ring_one(q);
            for (std::size_t i = 0; i < mu.length(); ++i) {
                long top = mu.part(i) - mu.part(i + 1);
                long left = mu.part(i) - kappa.part(i);
                long right = kappa.part(i) - mu.part(i + 1);
                if (left != 0 || right != 0)
                    psi = psi * qpoch_qq_n_ring(q, top) /
                          (qpoch_qq_n_ring(q, left) * qpoch_qq_n_ring(q, right));
            }
            acc = acc + psi * eval(kappa, n_vars - 1) *
                  ring_pow(x, mu.weight() - kappa.weight(), q);
        }
        memo.emplace(std::move(key), acc);
        return acc;
    }
};

}  // namespace detail

// q-Whittaker polynomial P_mu (Macdonald P at t=0) evaluated at vars.
template <class S>
S qwhittaker_P(const Partition& mu, const std::vector<S>& vars, const S& q) {
    detail::QWhittakerCache<S> cache{vars, q, {}};
    return cache.eval(mu, vars.size());
}

// Dual polynomial Q_mu = prod_{j=1..M} (q;q)_{mu_j - mu_{j+1}}^{-1} P_mu,
// with mu_{M+1} = 0 and M the number of variables.
template <class S>
S qwhittaker_Q(const Partition& mu, const std::vector<S>& vars, const S& q) {
    if (mu.length() > vars.size()) return ring_zero(q);
    S p = qwhittaker_P(mu, vars, q);
    S denom = ring_one(q);
    for (std::size_t j = 0; j < vars.size(); ++j)
        denom = denom * qpoch_qq_n_ring(q, mu.part(j) - mu.part(j + 1));
    return p / denom;
}

}  // namespace qcauchy
