#pragma once

#include "wald/errors.hpp"

#include <cmath>
#include <utility>

namespace wald {

/// Bisection on [lo, hi]; requires f(lo) and f(hi) of opposite (or zero) sign.
/// Runs until the interval collapses to machine precision.
template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw BracketError("bisect: root not bracketed");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval exhausted
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Golden-section maximizer on [lo, hi]; shrinks the bracket below tol.
/// Assumes f is unimodal on the bracket.
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (!(b - a < hi - lo)) break; // no progress at machine precision
    }
    return 0.5 * (a + b);
}

} // namespace wald
