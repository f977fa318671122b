#pragma once

#include <cstdint>
#include <vector>

#include "persona/head.hpp"

namespace persona {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Bias-corrected update of one flat tensor; m and v are its running moments
// and t the 1-based step count shared by all tensors of a parameter set.
void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v, uint64_t t,
                 const AdamConfig& config);

// Moment buffers mirror the parameter set's tensor shapes in visit order.
class AdamState {
public:
    AdamState(const HeadParams& params, const AdamConfig& config);

    // One optimizer step; grads must share the parameter set's shapes.
    void step(HeadParams& params, const HeadParams& grads);

    uint64_t t() const { return t_; }
    const AdamConfig& config() const { return config_; }

private:
    AdamConfig config_;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
    uint64_t t_ = 0;
};

}  // namespace persona
