#pragma once

#include "pmme/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace pmme {

/// Closed interval [lo, hi]. Endpoints may be infinite only as a declaration;
/// every numerical routine requires `finite()`.
struct Interval {
    double lo{0.0};
    double hi{0.0};

    [[nodiscard]] bool finite() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
    [[nodiscard]] double length() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct QuadratureResult {
    double value{0.0};
    double error{0.0};
    int subdivisions{0};
    int evaluations{0};
};

inline constexpr double kDefaultQuadratureTol = 1e-10;
inline constexpr int kDefaultMaxSubdivisions = 4000;
/// The window is first split into this many equal panels so that narrow
/// features are not missed by the initial rule.
inline constexpr int kInitialPanels = 16;

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights at the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    double abs_value;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(fc) * kKronrodWeights[7];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kKronrodWeights[j] * (f1 + f2);
        abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    abs_sum *= std::abs(half);
    return {lo, hi, kronrod, std::abs(kronrod - gauss), abs_sum};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature with absolute tolerance.
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate drops below `max(tol, 100 * eps * integral of |f|)`; the second
/// term is the roundoff floor for large-magnitude integrands. Throws
/// QuadratureError carrying the best estimate when `max_subdivisions` is hit.
template <class F>
QuadratureResult integrate(F&& f, Interval window, double tol = kDefaultQuadratureTol,
                           int max_subdivisions = kDefaultMaxSubdivisions) {
    if (!window.finite()) throw ArgumentError("integrate: window must be finite");
    if (!(tol > 0.0)) throw ArgumentError("integrate: tolerance must be positive");
    if (window.lo == window.hi) return {};

    std::priority_queue<detail::Segment> heap;
    double value = 0.0;
    double error = 0.0;
    double abs_value = 0.0;
    const double width = window.length() / kInitialPanels;
    for (int i = 0; i < kInitialPanels; ++i) {
        const double lo = window.lo + i * width;
        const double hi = i + 1 == kInitialPanels ? window.hi : window.lo + (i + 1) * width;
        auto panel = detail::gauss_kronrod_15(f, lo, hi);
        value += panel.value;
        error += panel.error;
        abs_value += panel.abs_value;
        heap.push(panel);
    }
    int subdivisions = kInitialPanels;

    const auto tolerance = [&] {
        return std::max(tol, 100.0 * std::numeric_limits<double>::epsilon() * abs_value);
    };

    while (error > tolerance()) {
        if (!std::isfinite(value)) {
            throw QuadratureError("integrate: non-finite integrand value", value, error);
        }
        if (subdivisions >= max_subdivisions) {
            std::ostringstream os;
            os << "integrate: no convergence after " << subdivisions
               << " subdivisions (estimate " << value << ", error " << error << ")";
            throw QuadratureError(os.str(), value, error);
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        if (error < 0.0) {
            // Cancellation in the running sum; rebuild from the heap.
            error = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                error += copy.top().error;
                copy.pop();
            }
        }
    }

    // Sum the segments in a fixed order so the result is reproducible bit-for-bit.
    std::vector<detail::Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(),
              [](const auto& a, const auto& b) { return a.lo < b.lo; });
    double total = 0.0;
    double total_error = 0.0;
    for (const auto& s : segments) {
        total += s.value;
        total_error += s.error;
    }
    if (!std::isfinite(total)) {
        throw QuadratureError("integrate: non-finite integrand value", total, total_error);
    }
    return {total, total_error, subdivisions, (2 * subdivisions - kInitialPanels) * 15};
}

/// Convenience wrapper returning only the value.
template <class F>
double integral(F&& f, Interval window, double tol = kDefaultQuadratureTol) {
    return integrate(std::forward<F>(f), window, tol).value;
}

} // namespace pmme
