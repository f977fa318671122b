#include "persona/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace persona {

void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v, uint64_t t,
                 const AdamConfig& config) {
    if (param.size() != grad.size() || param.size() != m.size() || param.size() != v.size()) {
        throw std::invalid_argument("adam_update: tensor shapes differ");
    }
    if (t == 0) {
        throw std::invalid_argument("adam_update: step count starts at 1");
    }
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
    for (size_t i = 0; i < param.size(); ++i) {
        m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grad[i];
        v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
        const double mhat = m[i] / c1;
        const double vhat = v[i] / c2;
        param[i] -= config.lr * mhat / (std::sqrt(vhat) + config.eps);
    }
}

AdamState::AdamState(const HeadParams& params, const AdamConfig& config) : config_(config) {
    for (const std::vector<double>* t : tensor_list(params)) {
        m_.emplace_back(t->size(), 0.0);
        v_.emplace_back(t->size(), 0.0);
    }
}

void AdamState::step(HeadParams& params, const HeadParams& grads) {
    auto ptensors = tensor_list(params);
    auto gtensors = tensor_list(grads);
    if (ptensors.size() != gtensors.size() || ptensors.size() != m_.size()) {
        throw std::invalid_argument("AdamState::step: tensor counts differ");
    }
    ++t_;
    for (size_t i = 0; i < ptensors.size(); ++i) {
        adam_update(*ptensors[i], *gtensors[i], m_[i], v_[i], t_, config_);
    }
}

}  // namespace persona
