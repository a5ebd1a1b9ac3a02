#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tuberegress {

// Dense row-major matrix of doubles. Deliberately minimal: the solvers only
// need row views and element access.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(size_t i, size_t j) { return data[i * cols + j]; }
    double at(size_t i, size_t j) const { return data[i * cols + j]; }

    std::span<const double> row(size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(size_t i) { return {data.data() + i * cols, cols}; }

    std::vector<double> column_copy(size_t j) const {
        std::vector<double> out(rows);
        for (size_t i = 0; i < rows; ++i) out[i] = data[i * cols + j];
        return out;
    }

    Matrix take_rows(std::span<const size_t> idx) const {
        Matrix out(idx.size(), cols);
        for (size_t i = 0; i < idx.size(); ++i) {
            const double* src = data.data() + idx[i] * cols;
            std::copy(src, src + cols, out.data.data() + i * cols);
        }
        return out;
    }
};

} // namespace tuberegress
