#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "persona/embedding.hpp"
#include "persona/matrix.hpp"

namespace persona {

enum class HeadKind { gru, meanpool };

struct HeadConfig {
    HeadKind kind = HeadKind::gru;
    int input_dim = 64;  // must equal the embedding dim feeding the head
    int hidden_dim = 512;
    int layers = 3;
    double dropout_p = 0.2;  // applied between stacked layers, train mode only
    uint64_t seed = 1;
};

// One stacked recurrent layer. Column convention: W * x with W hidden x in,
// U hidden x hidden. Gates follow z = sigma(Wz x + Uz h + bz),
// r = sigma(Wr x + Ur h + br), hbar = tanh(Wh x + Uh (r*h) + bh),
// h_t = (1 - z)*h_prev + z*hbar.
struct GruLayerParams {
    Matrix wz, uz;
    std::vector<double> bz;
    Matrix wr, ur;
    std::vector<double> br;
    Matrix wh, uh;
    std::vector<double> bh;
};

// Head parameters plus the five classifiers over h_final: one 2-way per
// axis and one 16-way. Gradients reuse this struct with matching shapes.
struct HeadParams {
    HeadConfig config;
    std::vector<GruLayerParams> gru_layers;  // kind == gru
    Matrix pool_w;                           // kind == meanpool, hidden x input
    std::vector<double> pool_b;
    std::array<Matrix, 4> axis_w;  // 2 x hidden each, order EI, SN, TF, JP
    std::array<std::vector<double>, 4> axis_b;
    Matrix type16_w;  // 16 x hidden
    std::vector<double> type16_b;
};

// Single fixed tensor order shared by init, the optimizer, checkpoints and
// the finite-difference harness: per layer gates z, r, h (input weights,
// recurrent weights, bias), then the meanpool map, then classifiers EI, SN,
// TF, JP, type16 (weights before bias).
template <typename Params, typename Fn>
void visit_tensors(Params& params, Fn&& fn) {
    for (auto& layer : params.gru_layers) {
        fn(layer.wz.data);
        fn(layer.uz.data);
        fn(layer.bz);
        fn(layer.wr.data);
        fn(layer.ur.data);
        fn(layer.br);
        fn(layer.wh.data);
        fn(layer.uh.data);
        fn(layer.bh);
    }
    if (params.config.kind == HeadKind::meanpool) {
        fn(params.pool_w.data);
        fn(params.pool_b);
    }
    for (size_t a = 0; a < 4; ++a) {
        fn(params.axis_w[a].data);
        fn(params.axis_b[a]);
    }
    fn(params.type16_w.data);
    fn(params.type16_b);
}

// Tensor pointers in visit order, for lockstep iteration over parameter
// sets that share one config (params vs gradients vs moments).
std::vector<std::vector<double>*> tensor_list(HeadParams& params);
std::vector<const std::vector<double>*> tensor_list(const HeadParams& params);

// Seeded uniform init in +-1/sqrt(fan_in) per matrix (fan_in = input width);
// biases start at zero. Deterministic per (config, seed).
HeadParams init_head(const HeadConfig& config);

// Same shapes as params, every tensor zeroed. Gradient accumulator.
HeadParams zeros_like(const HeadParams& params);

// One recurrent cell step, exposed for oracle comparison.
std::vector<double> gru_step(const GruLayerParams& params, const std::vector<double>& x,
                             const std::vector<double>& h_prev);

struct GruStepTrace {
    std::vector<double> x;  // input as consumed by the cell (post dropout)
    std::vector<double> h_prev;
    std::vector<double> z, r, hbar;
};

struct ForwardTrace {
    // steps[layer][t]; empty for the meanpool head
    std::vector<std::vector<GruStepTrace>> steps;
    // dropout[l][t] multiplies layer l-1's output feeding layer l at step t;
    // values are 0 or 1/(1-p). Index 0 is unused; empty when no mask applied.
    std::vector<std::vector<std::vector<double>>> dropout;
    std::vector<double> pooled_mean;  // meanpool only
    size_t seq_len = 0;
};

struct ForwardResult {
    std::vector<double> h_final;
    // Present in train mode only.
    std::optional<ForwardTrace> trace;
};

enum class HeadMode { train, eval };

// GRU: run the stack over the sequence, h_final is the last step of the top
// layer. Meanpool: h_final = pool_w * mean(sequence) + pool_b. Dropout is
// drawn from the seed, so train-mode results are deterministic per seed.
ForwardResult head_forward(const HeadParams& params, const std::vector<Embedding>& sequence,
                           HeadMode mode, uint64_t dropout_seed);

enum class ClsTask { ei, sn, tf, jp, type16 };

// Affine logits over h_final, length 2 for axis tasks and 16 for type16.
std::vector<double> classifier_forward(const HeadParams& params, const std::vector<double>& h_final,
                                       ClsTask task);

// Analytic gradients for every parameter, back-propagated through the five
// classifiers, the recurrent stack (through time) and the dropout masks.
// Every (task, dlogits) pair contributes through the shared h_final.
HeadParams head_backward(const HeadParams& params, const ForwardTrace& trace,
                         const std::vector<std::pair<ClsTask, std::vector<double>>>& dlogits);

}  // namespace persona
