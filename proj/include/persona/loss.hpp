#pragma once

#include <vector>

namespace persona {

struct CrossEntropyResult {
    double loss = 0.0;
    std::vector<double> grad;  // softmax(logits) - onehot(label)
};

// loss = logsumexp(logits) - logits[label], max-subtracted for stability.
// The gradient's last entry absorbs the rounding residue so that the
// entries sum to zero exactly under plain left-to-right accumulation.
CrossEntropyResult cross_entropy(const std::vector<double>& logits, int label);

}  // namespace persona
