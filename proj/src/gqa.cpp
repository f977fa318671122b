#include "persona/gqa.hpp"

#include <cmath>
#include <stdexcept>

namespace persona {

void softmax_rows(Matrix& m) {
    for (size_t i = 0; i < m.rows; ++i) {
        double* row = m.row(i);
        double mx = row[0];
        for (size_t j = 1; j < m.cols; ++j) {
            if (row[j] > mx) {
                mx = row[j];
            }
        }
        double sum = 0.0;
        for (size_t j = 0; j < m.cols; ++j) {
            row[j] = std::exp(row[j] - mx);
            sum += row[j];
        }
        for (size_t j = 0; j < m.cols; ++j) {
            row[j] /= sum;
        }
    }
}

Matrix gqa_attention(const Matrix& qp, const Matrix& k, const Matrix& v, int g) {
    if (g < 1) {
        throw std::invalid_argument("gqa_attention: g must be >= 1");
    }
    if (k.rows != v.rows || k.cols != v.cols) {
        throw std::invalid_argument("gqa_attention: K and V shapes differ");
    }
    if (qp.rows != k.rows) {
        throw std::invalid_argument("gqa_attention: Qp and K row counts differ");
    }
    const size_t dk = k.cols;
    if (dk == 0 || dk % static_cast<size_t>(g) != 0) {
        throw std::invalid_argument("gqa_attention: g must divide the key width");
    }
    const size_t w = dk / static_cast<size_t>(g);
    if (qp.cols != w) {
        throw std::invalid_argument("gqa_attention: Qp width must be key width / g");
    }

    const size_t s = qp.rows;
    const double scale = 1.0 / std::sqrt(static_cast<double>(w));
    Matrix out(s, dk);
    for (int group = 0; group < g; ++group) {
        const size_t off = static_cast<size_t>(group) * w;
        // scores = Qp * K_j^T over the group's column slice.
        Matrix scores(s, s);
        for (size_t i = 0; i < s; ++i) {
            for (size_t j = 0; j < s; ++j) {
                double acc = 0.0;
                for (size_t c = 0; c < w; ++c) {
                    acc += qp.at(i, c) * k.at(j, off + c);
                }
                scores.at(i, j) = acc * scale;
            }
        }
        softmax_rows(scores);
        for (size_t i = 0; i < s; ++i) {
            for (size_t j = 0; j < s; ++j) {
                const double a = scores.at(i, j);
                for (size_t c = 0; c < w; ++c) {
                    out.at(i, off + c) += a * v.at(j, off + c);
                }
            }
        }
    }
    return out;
}

}  // namespace persona
