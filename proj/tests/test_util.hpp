#pragma once

#include <cmath>
#include <cstdlib>

#include "perfsage/matrix.hpp"

namespace perfsage::test {

inline bool rel_close(double a, double b, double tol = 1e-6) {
    const double diff = std::abs(a - b);
    if (diff <= 1e-12) return true;
    return diff <= tol * std::max(std::abs(a), std::abs(b));
}

inline bool matrices_close(const kernels::Matrix& a, const kernels::Matrix& b,
                           double tol = 1e-6) {
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (!rel_close(a.data[i], b.data[i], tol)) return false;
    return true;
}

}  // namespace perfsage::test
