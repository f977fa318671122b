#include "persona/lsh.hpp"

#include <stdexcept>

#include "persona/rng.hpp"

namespace persona {

LshIndex::LshIndex(size_t dim, int bits, uint64_t seed)
    : dim_(dim), bits_(bits), seed_(seed), projection_(static_cast<size_t>(bits), dim) {
    if (dim < 1) {
        throw std::invalid_argument("LshIndex: dim must be >= 1");
    }
    if (bits < 1 || bits > 64) {
        throw std::invalid_argument("LshIndex: bits must be in [1, 64]");
    }
    Rng rng(seed);
    for (double& v : projection_.data) {
        v = rng.normal();
    }
}

LshIndex::LshIndex(Matrix projection, uint64_t seed)
    : dim_(projection.cols),
      bits_(static_cast<int>(projection.rows)),
      seed_(seed),
      projection_(std::move(projection)) {
    if (dim_ < 1) {
        throw std::invalid_argument("LshIndex: dim must be >= 1");
    }
    if (bits_ < 1 || bits_ > 64) {
        throw std::invalid_argument("LshIndex: bits must be in [1, 64]");
    }
}

uint64_t LshIndex::hash(const Embedding& v) const {
    if (v.dim() != dim_) {
        throw std::invalid_argument("LshIndex::hash: vector dim differs from index dim");
    }
    uint64_t pattern = 0;
    for (int b = 0; b < bits_; ++b) {
        const double* row = projection_.row(static_cast<size_t>(b));
        double acc = 0.0;
        for (size_t j = 0; j < dim_; ++j) {
            acc += row[j] * v.vector[j];
        }
        if (acc >= 0.0) {
            pattern |= uint64_t{1} << b;
        }
    }
    return pattern;
}

}  // namespace persona
