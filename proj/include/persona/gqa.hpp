#pragma once

#include "persona/matrix.hpp"

namespace persona {

// Grouped-query attention. The key/value columns are partitioned into g
// contiguous groups of width d_k/g and every group shares the one reduced
// query block Qp (s x d_k/g). Per group: softmax(Qp * K_j^T / sqrt(d_k/g)) * V_j,
// outputs concatenated back to s x d_k. With g = 1 this is standard scaled
// dot-product attention.
Matrix gqa_attention(const Matrix& qp, const Matrix& k, const Matrix& v, int g);

// Numerically safe row softmax in place (max-subtracted exponentials).
void softmax_rows(Matrix& m);

}  // namespace persona
