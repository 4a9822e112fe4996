/*
 * Thomas algorithm for tridiagonal systems.  No pivoting; every system
 * assembled in this toolkit is strictly diagonally dominant.
 */
#pragma once

#include <cmath>
#include <vector>

#include "shiftwave/errors.hpp"

namespace shiftwave {

/*
 * Solves A x = rhs in place, where A has sub-diagonal `lo` (lo[0] unused),
 * diagonal `di` and super-diagonal `up` (up[n-1] unused).  `scratch` avoids
 * reallocation across repeated solves on the same size.
 */
inline void solve_tridiag(const std::vector<double>& lo, const std::vector<double>& di,
                          const std::vector<double>& up, std::vector<double>& rhs,
                          std::vector<double>& scratch) {
    const std::size_t n = di.size();
    scratch.resize(n);
    double piv = di[0];
    if (piv == 0.0) throw NonfiniteValue("tridiagonal solve: zero pivot");
    rhs[0] /= piv;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = up[i - 1] / piv;
        piv = di[i] - lo[i] * scratch[i];
        if (piv == 0.0) throw NonfiniteValue("tridiagonal solve: zero pivot");
        rhs[i] = (rhs[i] - lo[i] * rhs[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

inline std::vector<double> solve_tridiag(const std::vector<double>& lo,
                                         const std::vector<double>& di,
                                         const std::vector<double>& up,
                                         std::vector<double> rhs) {
    std::vector<double> scratch;
    solve_tridiag(lo, di, up, rhs, scratch);
    return rhs;
}

} // namespace shiftwave
