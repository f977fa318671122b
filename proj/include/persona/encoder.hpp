#pragma once

#include <cstdint>
#include <vector>

#include "persona/embedding.hpp"
#include "persona/matrix.hpp"

namespace persona {

struct GqaConfig {
    // Embedding width. 64 keeps desk runs fast; production-scale encoders use
    // 4096 here.
    int dim = 64;
    int heads = 4;   // query-head count; dim must divide evenly into heads
    int groups = 2;  // query groups g; must divide heads
    int layers = 2;
    int seq_cap = 256;  // tokens per batch beyond this are truncated
    uint64_t seed = 1;
};

// Deterministic toy grouped-query-attention encoder. Parameters are drawn
// once from the seed, so identical (config, seed) pairs embed identically on
// any platform. Token rows are generated procedurally from (seed, token id)
// instead of materializing a vocab-sized table.
class GqaEncoder {
public:
    explicit GqaEncoder(const GqaConfig& config);

    // Token lookup, `layers` blocks of (grouped attention + residual, tanh
    // feed-forward + residual), then mean-pool over positions.
    Embedding embed_batch(const std::vector<uint32_t>& batch) const;

    const GqaConfig& config() const { return config_; }

    // Batches longer than seq_cap are truncated and counted here.
    uint64_t truncated_batches() const { return truncated_; }

private:
    struct Layer {
        Matrix wq;  // dim x (dim / groups)
        Matrix wk;  // dim x dim
        Matrix wv;  // dim x dim
        Matrix ff1;  // dim x 2*dim
        std::vector<double> b1;
        Matrix ff2;  // 2*dim x dim
        std::vector<double> b2;
    };

    std::vector<double> token_row(uint32_t token) const;

    GqaConfig config_;
    std::vector<Layer> layers_;
    mutable uint64_t truncated_ = 0;
};

}  // namespace persona
