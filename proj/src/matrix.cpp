#include "persona/matrix.hpp"

#include <cassert>
#include <stdexcept>

namespace persona {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: inner dimensions differ");
    }
    Matrix c(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            const double* brow = b.row(k);
            for (size_t j = 0; j < b.cols; ++j) {
                crow[j] += aik * brow[j];
            }
        }
    }
    return c;
}

std::vector<double> matvec(const Matrix& w, const std::vector<double>& x) {
    if (x.size() != w.cols) {
        throw std::invalid_argument("matvec: vector length differs from column count");
    }
    std::vector<double> y(w.rows, 0.0);
    for (size_t i = 0; i < w.rows; ++i) {
        const double* row = w.row(i);
        double acc = 0.0;
        for (size_t j = 0; j < w.cols; ++j) {
            acc += row[j] * x[j];
        }
        y[i] = acc;
    }
    return y;
}

std::vector<double> matvec_transposed(const Matrix& w, const std::vector<double>& x) {
    if (x.size() != w.rows) {
        throw std::invalid_argument("matvec_transposed: vector length differs from row count");
    }
    std::vector<double> y(w.cols, 0.0);
    for (size_t i = 0; i < w.rows; ++i) {
        const double* row = w.row(i);
        const double xi = x[i];
        for (size_t j = 0; j < w.cols; ++j) {
            y[j] += row[j] * xi;
        }
    }
    return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

}  // namespace persona
