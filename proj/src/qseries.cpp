#include "qcauchy/qseries.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcauchy {

mpq_class parse_rational(const std::string& s) {
    mpq_class x;
    if (x.set_str(s, 10) != 0)
        throw std::invalid_argument("parse_rational: cannot parse '" + s + "'");
    if (x.get_den() == 0)
        throw std::invalid_argument("parse_rational: zero denominator in '" + s + "'");
    x.canonicalize();
    return x;
}

std::string rational_to_string(const mpq_class& x) { return x.get_str(); }

QSeries::QSeries(int order) : order_(order) {
    if (order < 0) throw std::invalid_argument("QSeries: order must be >= 0");
    coeffs_.assign(static_cast<std::size_t>(order) + 1, mpq_class(0));
}

QSeries::QSeries(int order, mpq_class constant) : QSeries(order) {
    coeffs_[0] = std::move(constant);
}

QSeries::QSeries(int order, std::vector<mpq_class> coeffs) : order_(order), coeffs_(std::move(coeffs)) {
    if (order < 0) throw std::invalid_argument("QSeries: order must be >= 0");
    coeffs_.resize(static_cast<std::size_t>(order) + 1, mpq_class(0));
}

QSeries QSeries::generator(int order) { return monomial(order, 1); }

QSeries QSeries::monomial(int order, int power, mpq_class c) {
    QSeries s(order);
    if (power < 0) throw std::invalid_argument("QSeries::monomial: negative power");
    if (power <= order) s.coeffs_[static_cast<std::size_t>(power)] = std::move(c);
    return s;
}

bool QSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const mpq_class& c) { return c == 0; });
}

QSeries QSeries::truncated(int new_order) const {
    QSeries s(new_order);
    int n = std::min(new_order, order_);
    for (int i = 0; i <= n; ++i) s.coeffs_[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i)];
    return s;
}

QSeries QSeries::inverse() const {
    if (coeffs_[0] == 0)
        throw std::domain_error("QSeries::inverse: zero constant term");
    QSeries b(order_);
    mpq_class inv0 = 1 / coeffs_[0];
    b.coeffs_[0] = inv0;
    for (int k = 1; k <= order_; ++k) {
        mpq_class acc(0);
        for (int j = 1; j <= k; ++j)
            acc += coeffs_[static_cast<std::size_t>(j)] * b.coeffs_[static_cast<std::size_t>(k - j)];
        b.coeffs_[static_cast<std::size_t>(k)] = -acc * inv0;
    }
    return b;
}

QSeries& QSeries::operator+=(const QSeries& o) {
    int n = std::min(order_, o.order_);
    if (n < order_) *this = truncated(n);
    for (int i = 0; i <= n; ++i) coeffs_[static_cast<std::size_t>(i)] += o.coeffs_[static_cast<std::size_t>(i)];
    return *this;
}

QSeries& QSeries::operator-=(const QSeries& o) {
    int n = std::min(order_, o.order_);
    if (n < order_) *this = truncated(n);
    for (int i = 0; i <= n; ++i) coeffs_[static_cast<std::size_t>(i)] -= o.coeffs_[static_cast<std::size_t>(i)];
    return *this;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
    int n = std::min(a.order_, b.order_);
    QSeries c(n);
    for (int i = 0; i <= n; ++i) {
        if (a.coeffs_[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; i + j <= n; ++j) {
            if (b.coeffs_[static_cast<std::size_t>(j)] == 0) continue;
            c.coeffs_[static_cast<std::size_t>(i + j)] +=
                a.coeffs_[static_cast<std::size_t>(i)] * b.coeffs_[static_cast<std::size_t>(j)];
        }
    }
    return c;
}

QSeries operator-(QSeries a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
}

QSeries operator*(const mpq_class& c, QSeries a) {
    for (auto& x : a.coeffs_) x *= c;
    return a;
}

bool operator==(const QSeries& a, const QSeries& b) {
    return a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
}

std::string QSeries::to_string() const {
    std::string s;
    bool first = true;
    for (int i = 0; i <= order_; ++i) {
        const mpq_class& c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (!first) s += " + ";
        s += c.get_str();
        if (i > 0) s += "*q^" + std::to_string(i);
        first = false;
    }
    if (first) s = "0";
    return s + " + O(q^" + std::to_string(order_ + 1) + ")";
}

QSeries qpoch_inf_series(const QSeries& a, int order) {
    QSeries prod(order, mpq_class(1));
    QSeries aq = a.truncated(order);
    const QSeries one(order, mpq_class(1));
    for (int j = 0; j <= order; ++j) {
        if (aq.is_zero()) break;
        prod = prod * (one - aq);
        // aq -> a q^{j+1}: shift coefficients up by one
        std::vector<mpq_class> shifted(static_cast<std::size_t>(order) + 1, mpq_class(0));
        for (int i = 0; i < order; ++i) shifted[static_cast<std::size_t>(i + 1)] = aq.coeff(i);
        aq = QSeries(order, std::move(shifted));
    }
    return prod;
}

QSeries qpoch_n_series(const QSeries& a, long n, int order) {
    const QSeries one(order, mpq_class(1));
    QSeries prod = one;
    if (n >= 0) {
        QSeries aq = a.truncated(order);
        for (long j = 0; j < n; ++j) {
            if (static_cast<int>(j) > order && aq.is_zero()) break;
            prod = prod * (one - aq);
            std::vector<mpq_class> shifted(static_cast<std::size_t>(order) + 1, mpq_class(0));
            for (int i = 0; i < order; ++i) shifted[static_cast<std::size_t>(i + 1)] = aq.coeff(i);
            aq = QSeries(order, std::move(shifted));
        }
        return prod;
    }
    // n = -m: (a;q)_{-m} = 1/[(1 - a/q)...(1 - a/q^m)]; requires q^j | a.
    long m = -n;
    for (long j = 1; j <= m; ++j) {
        // divide a by q^j: valid only if the lowest j coefficients vanish
        QSeries shifted(order);
        for (int i = 0; i <= order; ++i) {
            if (i < j) {
                if (a.coeff(i) != 0)
                    throw std::domain_error("qpoch_n_series: a/q^j not a power series");
            } else {
                shifted.coeff_ref(i - static_cast<int>(j)) = a.coeff(i);
            }
        }
        prod = prod * (one - shifted);
    }
    return prod.inverse();
}

QSeries qpoch_qq_n_series(long n, int order) {
    if (n < 0) throw std::invalid_argument("qpoch_qq_n_series: n must be >= 0");
    return qpoch_n_series(QSeries::generator(order), n, order);
}

QSeries qpoch_qq_n_inverse_series(long n, int order) {
    return qpoch_qq_n_series(n, order).inverse();
}

}  // namespace qcauchy
