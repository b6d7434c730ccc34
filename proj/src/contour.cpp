#include "qcauchy/contour.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qcauchy/measures.hpp"

namespace qcauchy {

std::complex<double> ContourSpec::node(int j) const {
    double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
    return center + radius * std::complex<double>(std::cos(th), std::sin(th));
}

ContourSpec ContourSpec::default_C(const ParamSet& p, int points) {
    double lo = p.b_max(), hi = 1.0 / p.a_max();
    if (!(lo < hi))
        throw std::invalid_argument("ContourSpec: no radius with b_max < r < 1/a_max");
    ContourSpec c;
    c.radius = std::sqrt(lo * hi);
    c.points = points;
    return c;
}

void ContourSpec::validate_L_pair(const ParamSet& p, double r_inner, double r_outer) {
    double lo = p.b_max(), hi = 1.0 / p.a_max();
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("ContourSpec: L-pair radii violate " + what);
    };
    if (!(lo < r_inner && r_inner < hi)) fail("b_max < r' < 1/a_max");
    if (!(lo < r_outer && r_outer < hi)) fail("b_max < r < 1/a_max");
    double ratio = r_outer / r_inner;
    if (!(1.0 < ratio && ratio < 1.0 / p.q)) fail("1 < r/r' < q^{-1}");
}

std::pair<ContourSpec, ContourSpec> ContourSpec::default_L_pair(const ParamSet& p, int points) {
    double lo = p.b_max(), hi = 1.0 / p.a_max();
    if (!(lo < hi))
        throw std::invalid_argument("ContourSpec: no radius with b_max < r < 1/a_max");
    double mid = std::sqrt(lo * hi);
    // Split the available annulus symmetrically around the midpoint, with the
    // ratio capped by q^{-1/2} so 1 < r/r' < q^{-1} holds with margin.
    double ratio = std::min(std::pow(p.q, -0.5), std::pow(hi / lo, 0.49));
    ContourSpec inner, outer;
    inner.radius = mid / std::sqrt(ratio);
    outer.radius = mid * std::sqrt(ratio);
    inner.points = outer.points = points;
    validate_L_pair(p, inner.radius, outer.radius);
    return {inner, outer};
}

}  // namespace qcauchy
