#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) integration.
//
// The integrand may return double or std::complex<double>. Subintervals are
// bisected in order of largest error estimate until the summed estimate
// satisfies max(abs_tol, rel_tol * |I|), mirroring QUADPACK's QAG strategy.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <type_traits>
#include <vector>

#include "ohmic/errors.hpp"

namespace ohmic {

struct QuadOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    std::size_t max_subdivisions = 4000;
};

template <class T>
struct QuadResult {
    T value{};
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452210, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct Segment {
    double a;
    double b;
    T value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
auto gauss_kronrod21(F& f, double a, double b) {
    using T = std::decay_t<decltype(f(a))>;
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(center);
    T kronrod = fc * kWgk[10];
    T gauss{};
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const T sum = f(center - dx) + f(center + dx);
        kronrod += sum * kWgk[j];
        if (j % 2 == 1) gauss += sum * kWg[j / 2];
    }
    Segment<T> seg{a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
    return seg;
}

}  // namespace detail

/// Integrate f over [a, b]. Throws NumericalAccuracyError when the
/// subdivision budget runs out before the tolerance is met.
template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    using T = std::decay_t<decltype(f(a))>;
    QuadResult<T> out;
    if (a == b) return out;

    std::priority_queue<detail::Segment<T>> heap;
    heap.push(detail::gauss_kronrod21(f, a, b));
    out.evaluations = 21;
    T total = heap.top().value;
    double error = heap.top().error;

    auto done = [&] { return error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (!done()) {
        if (heap.size() >= opt.max_subdivisions) {
            throw NumericalAccuracyError("adaptive quadrature exhausted " +
                                             std::to_string(opt.max_subdivisions) + " subdivisions",
                                         error);
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NumericalAccuracyError("adaptive quadrature hit floating-point resolution", error);
        }
        auto left = detail::gauss_kronrod21(f, worst.a, mid);
        auto right = detail::gauss_kronrod21(f, mid, worst.b);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift accumulated by the incremental updates.
    total = T{};
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.abs_error = error;
    return out;
}

/// Integrate over [a, b] split into equal panels no wider than max_panel,
/// each integrated adaptively with its share of the absolute tolerance.
/// Used for oscillatory integrands where a single bisection tree would
/// waste its budget resolving phase.
template <class F>
auto integrate_panels(F&& f, double a, double b, double max_panel, const QuadOptions& opt = {}) {
    using T = std::decay_t<decltype(f(a))>;
    const auto panels =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / max_panel)));
    const double width = (b - a) / static_cast<double>(panels);

    // First pass at coarse accuracy to learn the magnitude for the relative goal.
    QuadOptions panel_opt = opt;
    panel_opt.abs_tol = opt.abs_tol / static_cast<double>(panels);
    QuadResult<T> out;
    std::vector<double> edges(panels + 1);
    for (std::size_t k = 0; k <= panels; ++k) edges[k] = (k == panels) ? b : a + width * static_cast<double>(k);

    T rough{};
    for (std::size_t k = 0; k < panels; ++k) {
        auto seg = detail::gauss_kronrod21(f, edges[k], edges[k + 1]);
        rough += seg.value;
    }
    panel_opt.abs_tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(rough)) / static_cast<double>(panels);
    panel_opt.rel_tol = opt.rel_tol;

    for (std::size_t k = 0; k < panels; ++k) {
        auto part = integrate(f, edges[k], edges[k + 1], panel_opt);
        out.value += part.value;
        out.abs_error += part.abs_error;
        out.evaluations += part.evaluations;
    }
    return out;
}

}  // namespace ohmic
