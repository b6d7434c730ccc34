#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace qcauchy {

// Parses "p/q" or "p" into an exact rational.
mpq_class parse_rational(const std::string& s);
std::string rational_to_string(const mpq_class& x);

// Truncated formal power series in q with exact rational coefficients.
// A series of order T is known mod q^{T+1}; coeffs always has size T+1.
// Arithmetic between series of different orders truncates to the minimum.
class QSeries {
public:
    explicit QSeries(int order);
    QSeries(int order, mpq_class constant);
    QSeries(int order, std::vector<mpq_class> coeffs);

    static QSeries generator(int order);  // the series "q"
    static QSeries monomial(int order, int power, mpq_class c = 1);

    int order() const { return order_; }
    const mpq_class& coeff(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
    const std::vector<mpq_class>& coeffs() const { return coeffs_; }
    mpq_class& coeff_ref(int i) { return coeffs_[static_cast<std::size_t>(i)]; }

    bool is_zero() const;

    QSeries truncated(int new_order) const;

    // Multiplicative inverse mod q^{order+1}; requires nonzero constant term.
    QSeries inverse() const;

    QSeries& operator+=(const QSeries& o);
    QSeries& operator-=(const QSeries& o);
    friend QSeries operator+(QSeries a, const QSeries& b) { a += b; return a; }
    friend QSeries operator-(QSeries a, const QSeries& b) { a -= b; return a; }
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    friend QSeries operator/(const QSeries& a, const QSeries& b) { return a * b.inverse(); }
    friend QSeries operator-(QSeries a);
    friend QSeries operator*(const mpq_class& c, QSeries a);

    friend bool operator==(const QSeries& a, const QSeries& b);

    std::string to_string() const;

private:
    int order_;
    std::vector<mpq_class> coeffs_;
};

// (a;q)_inf = prod_{j>=0} (1 - a q^j) as a truncated series. Factors with
// j > order are 1 mod q^{order+1}, so the product is finite.
QSeries qpoch_inf_series(const QSeries& a, int order);

// (a;q)_n; for n = -m < 0 uses the defining ratio (a;q)_inf/(a q^n;q)_inf,
// i.e. 1/[(1-a/q)...(1-a/q^m)], which requires a divisible by q^m.
QSeries qpoch_n_series(const QSeries& a, long n, int order);

// Convenience: (q;q)_n for n >= 0.
QSeries qpoch_qq_n_series(long n, int order);

// 1/(q;q)_n truncated; equals the generating series of partitions with
// parts <= n.
QSeries qpoch_qq_n_inverse_series(long n, int order);

}  // namespace qcauchy
