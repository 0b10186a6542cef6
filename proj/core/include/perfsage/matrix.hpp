#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace perfsage::kernels {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool empty() const { return data.empty(); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix constant(std::size_t r, std::size_t c, double v) {
        Matrix m(r, c);
        for (auto& x : m.data) x = v;
        return m;
    }
};

struct CooEntry {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double value = 0.0;
};

/// Coordinate-list sparse matrix, entries sorted row-major (row, then col).
struct CooMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<CooEntry> entries;

    std::size_t nnz() const { return entries.size(); }

    Matrix to_dense() const {
        Matrix m(rows, cols);
        for (const auto& e : entries) m(e.row, e.col) = e.value;
        return m;
    }

    static CooMatrix from_dense(const Matrix& m) {
        CooMatrix c;
        c.rows = m.rows;
        c.cols = m.cols;
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j)
                if (m(i, j) != 0.0)
                    c.entries.push_back({static_cast<std::uint32_t>(i),
                                         static_cast<std::uint32_t>(j), m(i, j)});
        return c;
    }
};

}  // namespace perfsage::kernels
