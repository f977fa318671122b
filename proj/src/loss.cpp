#include "persona/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace persona {

CrossEntropyResult cross_entropy(const std::vector<double>& logits, int label) {
    const size_t c = logits.size();
    if (c < 2) {
        throw std::invalid_argument("cross_entropy: need at least 2 classes");
    }
    if (label < 0 || static_cast<size_t>(label) >= c) {
        throw std::invalid_argument("cross_entropy: label out of range");
    }
    double mx = logits[0];
    for (size_t i = 1; i < c; ++i) {
        if (logits[i] > mx) {
            mx = logits[i];
        }
    }
    double z = 0.0;
    CrossEntropyResult result;
    result.grad.resize(c);
    for (size_t i = 0; i < c; ++i) {
        result.grad[i] = std::exp(logits[i] - mx);
        z += result.grad[i];
    }
    result.loss = std::log(z) + (mx - logits[static_cast<size_t>(label)]);
    for (size_t i = 0; i < c; ++i) {
        result.grad[i] /= z;
    }
    result.grad[static_cast<size_t>(label)] -= 1.0;

    // Pin the last entry to the exact negative of the running sum of the
    // others; a plain left-to-right accumulation then cancels to zero
    // exactly. The adjustment is the rounding residue of sum(softmax) - 1.
    double prefix = 0.0;
    for (size_t i = 0; i + 1 < c; ++i) {
        prefix += result.grad[i];
    }
    result.grad[c - 1] = -prefix;
    return result;
}

}  // namespace persona
