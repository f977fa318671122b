#pragma once

#include <cstddef>
#include <vector>

namespace persona {

// Dense row-major matrix. Small enough on purpose: the encoder and the
// recurrent head only need storage, matmul and matrix-vector products.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(size_t r, size_t c) { return data[r * cols + c]; }
    const double& at(size_t r, size_t c) const { return data[r * cols + c]; }

    // Pointer to the start of row r; rows are contiguous.
    double* row(size_t r) { return data.data() + r * cols; }
    const double* row(size_t r) const { return data.data() + r * cols; }
};

// C = A * B. Shapes must agree (A.cols == B.rows).
Matrix matmul(const Matrix& a, const Matrix& b);

// y = W * x with x.size() == W.cols.
std::vector<double> matvec(const Matrix& w, const std::vector<double>& x);

// y = W^T * x with x.size() == W.rows. Used by backward passes.
std::vector<double> matvec_transposed(const Matrix& w, const std::vector<double>& x);

double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace persona
