#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcauchy {

// A partition: weakly decreasing positive parts, trailing zeros implicit.
// Canonical storage drops trailing zeros, so the empty partition is {}.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);

    static Partition from_initializer(std::initializer_list<int> parts) {
        return Partition(std::vector<int>(parts));
    }

    // part(i) is 1-indexed in the math but 0-indexed here; out of range -> 0.
    int part(std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }
    const std::vector<int>& parts() const { return parts_; }

    std::size_t length() const { return parts_.size(); }
    long weight() const;
    int first_part() const { return parts_.empty() ? 0 : parts_[0]; }
    bool empty() const { return parts_.empty(); }

    Partition conjugate() const;

    auto operator<=>(const Partition&) const = default;

    std::string to_string() const;  // e.g. "(3,1)" or "()"

private:
    std::vector<int> parts_;
};

// rho_i <= lambda_i for all i (trailing zeros implied).
bool contains(const Partition& rho, const Partition& lambda);

// All partitions with first part <= max_part and length <= max_length,
// each exactly once, lexicographically descending. Includes the empty one.
std::vector<Partition> enumerate_partitions(int max_part, int max_length);

// All partitions of weight <= max_weight subject to optional bounds,
// grouped by increasing weight, lexicographically descending within a weight.
std::vector<Partition> enumerate_by_weight(long max_weight,
                                           std::optional<int> max_part = std::nullopt,
                                           std::optional<int> max_length = std::nullopt);

// Partitions mu with rho \subset mu \subset lambda is not needed; what the
// sums need is every rho contained in a given lambda.
std::vector<Partition> enumerate_subpartitions(const Partition& lambda,
                                               std::optional<long> max_weight = std::nullopt);

class QSeries;

// sum over partitions nu with nu_1 <= first_row_cap of q^{|nu|}, truncated.
// Computed by direct enumeration; coincides with 1/(q;q)_cap coefficientwise.
QSeries restricted_weight_series(int first_row_cap, int order);

}  // namespace qcauchy
