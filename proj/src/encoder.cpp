#include "persona/encoder.hpp"

#include <cmath>
#include <stdexcept>

#include "persona/bytes.hpp"
#include "persona/gqa.hpp"
#include "persona/rng.hpp"

namespace persona {

namespace {

Matrix random_matrix(size_t rows, size_t cols, Rng& rng) {
    // fan_in is the input width, which is the row count in the x*W layout
    // used throughout the encoder.
    const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
    Matrix m(rows, cols);
    for (double& v : m.data) {
        v = rng.uniform(-bound, bound);
    }
    return m;
}

std::vector<double> zero_vector(size_t n) { return std::vector<double>(n, 0.0); }

// X (s x in) * W (in x out), rows of X given as vectors.
Matrix rows_times(const std::vector<std::vector<double>>& x, const Matrix& w) {
    Matrix out(x.size(), w.cols);
    for (size_t i = 0; i < x.size(); ++i) {
        for (size_t k = 0; k < w.rows; ++k) {
            const double xik = x[i][k];
            const double* wrow = w.row(k);
            double* orow = out.row(i);
            for (size_t j = 0; j < w.cols; ++j) {
                orow[j] += xik * wrow[j];
            }
        }
    }
    return out;
}

}  // namespace

GqaEncoder::GqaEncoder(const GqaConfig& config) : config_(config) {
    if (config.dim < 1 || config.heads < 1 || config.groups < 1 || config.layers < 0 ||
        config.seq_cap < 1) {
        throw std::invalid_argument("encoder config fields must be positive");
    }
    if (config.heads % config.groups != 0) {
        throw std::invalid_argument("encoder config: groups must divide heads");
    }
    if (config.dim % config.heads != 0) {
        throw std::invalid_argument("encoder config: heads must divide dim");
    }

    const size_t dim = static_cast<size_t>(config.dim);
    const size_t qdim = dim / static_cast<size_t>(config.groups);
    const size_t hidden = 2 * dim;
    Rng rng(config.seed);
    layers_.reserve(static_cast<size_t>(config.layers));
    for (int l = 0; l < config.layers; ++l) {
        Layer layer;
        layer.wq = random_matrix(dim, qdim, rng);
        layer.wk = random_matrix(dim, dim, rng);
        layer.wv = random_matrix(dim, dim, rng);
        layer.ff1 = random_matrix(dim, hidden, rng);
        layer.b1 = zero_vector(hidden);
        layer.ff2 = random_matrix(hidden, dim, rng);
        layer.b2 = zero_vector(dim);
        layers_.push_back(std::move(layer));
    }
}

std::vector<double> GqaEncoder::token_row(uint32_t token) const {
    // Per-token stream keyed by (seed, token) so rows never depend on which
    // other tokens were embedded first.
    const uint8_t bytes[12] = {
        static_cast<uint8_t>(config_.seed), static_cast<uint8_t>(config_.seed >> 8),
        static_cast<uint8_t>(config_.seed >> 16), static_cast<uint8_t>(config_.seed >> 24),
        static_cast<uint8_t>(config_.seed >> 32), static_cast<uint8_t>(config_.seed >> 40),
        static_cast<uint8_t>(config_.seed >> 48), static_cast<uint8_t>(config_.seed >> 56),
        static_cast<uint8_t>(token), static_cast<uint8_t>(token >> 8),
        static_cast<uint8_t>(token >> 16), static_cast<uint8_t>(token >> 24)};
    Rng rng(fnv1a64(bytes, sizeof bytes));
    const size_t dim = static_cast<size_t>(config_.dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<double> row(dim);
    for (double& v : row) {
        v = rng.uniform(-bound, bound);
    }
    return row;
}

Embedding GqaEncoder::embed_batch(const std::vector<uint32_t>& batch) const {
    if (batch.empty()) {
        throw std::invalid_argument("embed_batch: empty batch");
    }
    size_t s = batch.size();
    if (s > static_cast<size_t>(config_.seq_cap)) {
        s = static_cast<size_t>(config_.seq_cap);
        ++truncated_;
    }

    std::vector<std::vector<double>> x(s);
    for (size_t i = 0; i < s; ++i) {
        x[i] = token_row(batch[i]);
    }

    const size_t dim = static_cast<size_t>(config_.dim);
    for (const Layer& layer : layers_) {
        Matrix qp = rows_times(x, layer.wq);
        Matrix k = rows_times(x, layer.wk);
        Matrix v = rows_times(x, layer.wv);
        Matrix attn = gqa_attention(qp, k, v, config_.groups);
        for (size_t i = 0; i < s; ++i) {
            const double* arow = attn.row(i);
            for (size_t j = 0; j < dim; ++j) {
                x[i][j] += arow[j];
            }
        }

        Matrix h = rows_times(x, layer.ff1);
        for (size_t i = 0; i < s; ++i) {
            double* hrow = h.row(i);
            for (size_t j = 0; j < h.cols; ++j) {
                hrow[j] = std::tanh(hrow[j] + layer.b1[j]);
            }
        }
        std::vector<std::vector<double>> hvec(s);
        for (size_t i = 0; i < s; ++i) {
            hvec[i].assign(h.row(i), h.row(i) + h.cols);
        }
        Matrix f = rows_times(hvec, layer.ff2);
        for (size_t i = 0; i < s; ++i) {
            const double* frow = f.row(i);
            for (size_t j = 0; j < dim; ++j) {
                x[i][j] += frow[j] + layer.b2[j];
            }
        }
    }

    Embedding out;
    out.vector.assign(dim, 0.0);
    for (size_t i = 0; i < s; ++i) {
        for (size_t j = 0; j < dim; ++j) {
            out.vector[j] += x[i][j];
        }
    }
    const double inv = 1.0 / static_cast<double>(s);
    for (double& v : out.vector) {
        v *= inv;
    }
    return out;
}

}  // namespace persona
