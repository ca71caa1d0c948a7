#pragma once

#include <cmath>
#include <utility>

namespace gig {

// Golden-section maximization of f over [a, b]. Assumes a single interior
// maximum on the bracket; shrinks it below `tol` and returns the midpoint.
template <class F>
double golden_section_maximize(F&& f, double a, double b, double tol, int max_iter = 200) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace gig
