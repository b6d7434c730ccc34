#include "qcauchy/partition.hpp"

#include <algorithm>
#include <stdexcept>

#include "qcauchy/qseries.hpp"

namespace qcauchy {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw std::invalid_argument("Partition: parts must be positive");
        if (i + 1 < parts_.size() && parts_[i] < parts_[i + 1])
            throw std::invalid_argument("Partition: parts must be weakly decreasing");
    }
}

long Partition::weight() const {
    long w = 0;
    for (int p : parts_) w += p;
    return w;
}

Partition Partition::conjugate() const {
    if (parts_.empty()) return {};
    std::vector<int> conj(static_cast<std::size_t>(parts_[0]), 0);
    for (int p : parts_)
        for (int j = 0; j < p; ++j) conj[static_cast<std::size_t>(j)]++;
    return Partition(std::move(conj));
}

std::string Partition::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(parts_[i]);
    }
    s += ')';
    return s;
}

bool contains(const Partition& rho, const Partition& lambda) {
    for (std::size_t i = 0; i < rho.length(); ++i)
        if (rho.part(i) > lambda.part(i)) return false;
    return true;
}

namespace {

// Depth-first enumeration: at each level append a part <= previous part.
// Visiting the shorter prefix before its extensions, with parts tried in
// decreasing order, yields lexicographic-descending order overall.
void extend(std::vector<int>& stack, int max_part, int max_length,
            std::vector<Partition>& out) {
    out.emplace_back(stack);
    if (static_cast<int>(stack.size()) >= max_length) return;
    int cap = stack.empty() ? max_part : stack.back();
    for (int p = cap; p >= 1; --p) {
        stack.push_back(p);
        extend(stack, max_part, max_length, out);
        stack.pop_back();
    }
}

void extend_by_weight(std::vector<int>& stack, long remaining,
                      std::optional<int> max_part, std::optional<int> max_length,
                      std::vector<Partition>& out) {
    out.emplace_back(stack);
    if (max_length && static_cast<int>(stack.size()) >= *max_length) return;
    long cap = stack.empty() ? remaining : std::min<long>(remaining, stack.back());
    if (max_part) cap = std::min<long>(cap, *max_part);
    for (long p = cap; p >= 1; --p) {
        stack.push_back(static_cast<int>(p));
        extend_by_weight(stack, remaining - p, max_part, max_length, out);
        stack.pop_back();
    }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int max_part, int max_length) {
    if (max_part < 0 || max_length < 0)
        throw std::invalid_argument("enumerate_partitions: bounds must be >= 0");
    std::vector<Partition> out;
    std::vector<int> stack;
    if (max_part == 0 || max_length == 0) {
        out.emplace_back();
        return out;
    }
    extend(stack, max_part, max_length, out);
    std::sort(out.begin(), out.end(), [](const Partition& x, const Partition& y) {
        return y < x;  // lexicographic descending
    });
    return out;
}

std::vector<Partition> enumerate_by_weight(long max_weight,
                                           std::optional<int> max_part,
                                           std::optional<int> max_length) {
    if (max_weight < 0) throw std::invalid_argument("enumerate_by_weight: max_weight < 0");
    std::vector<Partition> out;
    std::vector<int> stack;
    extend_by_weight(stack, max_weight, max_part, max_length, out);
    std::sort(out.begin(), out.end(), [](const Partition& x, const Partition& y) {
        if (x.weight() != y.weight()) return x.weight() < y.weight();
        return y < x;
    });
    return out;
}

namespace {

void extend_sub(const Partition& lambda, std::size_t row, int prev,
                std::vector<int>& stack, long remaining,
                std::vector<Partition>& out) {
    out.emplace_back(stack);
    if (row >= lambda.length()) return;
    int cap = std::min(prev, lambda.part(row));
    cap = static_cast<int>(std::min<long>(cap, remaining));
    for (int p = cap; p >= 1; --p) {
        stack.push_back(p);
        extend_sub(lambda, row + 1, p, stack, remaining - p, out);
        stack.pop_back();
    }
}

}  // namespace

std::vector<Partition> enumerate_subpartitions(const Partition& lambda,
                                               std::optional<long> max_weight) {
    std::vector<Partition> out;
    std::vector<int> stack;
    long budget = max_weight.value_or(lambda.weight());
    extend_sub(lambda, 0, lambda.first_part(), stack, budget, out);
    return out;
}

QSeries restricted_weight_series(int first_row_cap, int order) {
    if (first_row_cap < 0 || order < 0)
        throw std::invalid_argument("restricted_weight_series: negative argument");
    QSeries s(order);
    for (const Partition& nu : enumerate_by_weight(order, first_row_cap))
        s.coeff_ref(static_cast<int>(nu.weight())) += 1;
    return s;
}

}  // namespace qcauchy
