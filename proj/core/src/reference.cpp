#include <algorithm>

#include "perfsage/errors.hpp"
#include "perfsage/variants.hpp"

namespace perfsage::kernels {

// Textbook single-threaded implementations. These are the ground truth the
// variant equivalence tests compare against and are kept free of any loop
// reordering, tiling, or sparsity tricks.

namespace {

Matrix ref_mm(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < a.cols; ++t) acc += a(i, t) * b(t, j);
            out(i, j) = acc;
        }
    return out;
}

Matrix ref_conv(const Matrix& a, const Matrix& f) {
    const std::size_t r = f.rows;
    Matrix out(a.rows - r + 1, a.cols - r + 1);
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t j = 0; j < out.cols; ++j) {
            double acc = 0.0;
            for (std::size_t u = 0; u < r; ++u)
                for (std::size_t v = 0; v < r; ++v) acc += a(i + u, j + v) * f(u, v);
            out(i, j) = acc;
        }
    return out;
}

Matrix ref_pool(const Matrix& a, std::size_t s) {
    Matrix out((a.rows + s - 1) / s, (a.cols + s - 1) / s);
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t j = 0; j < out.cols; ++j) {
            const std::size_t r0 = i * s, r1 = std::min(a.rows, r0 + s);
            const std::size_t c0 = j * s, c1 = std::min(a.cols, c0 + s);
            const bool partial = (r1 - r0) * (c1 - c0) < s * s;
            double best = partial ? 0.0 : a(r0, c0);
            for (std::size_t p = r0; p < r1; ++p)
                for (std::size_t q = c0; q < c1; ++q) best = std::max(best, a(p, q));
            out(i, j) = best;
        }
    return out;
}

Matrix ref_blur(const Matrix& img) {
    // Horizontal 3-point mean over the full plane, then vertical.
    const std::size_t n = img.rows;
    Matrix bx(n, n - 2);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n - 2; ++x)
            bx(y, x) = (img(y, x) + img(y, x + 1) + img(y, x + 2)) / 3.0;
    Matrix out(n - 2, n - 2);
    for (std::size_t y = 0; y < n - 2; ++y)
        for (std::size_t x = 0; x < n - 2; ++x)
            out(y, x) = (bx(y, x) + bx(y + 1, x) + bx(y + 2, x)) / 3.0;
    return out;
}

}  // namespace

Matrix reference_result(const KernelInstance& instance) {
    instance.params.validate();
    switch (instance.params.kind) {
        case KernelKind::MM: return ref_mm(instance.a, instance.b);
        case KernelKind::MV: return ref_mm(instance.a, instance.b);
        case KernelKind::MC: return ref_conv(instance.a, instance.b);
        case KernelKind::MP: return ref_pool(instance.a, instance.params.s);
        case KernelKind::Blur: return ref_blur(instance.a);
    }
    throw ParamError("unreachable kernel kind");
}

}  // namespace perfsage::kernels
