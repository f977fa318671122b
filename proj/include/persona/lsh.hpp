#pragma once

#include <cstdint>

#include "persona/embedding.hpp"
#include "persona/matrix.hpp"

namespace persona {

// Sign random projection index. The projection is a bits x dim matrix of
// seeded standard normals, fixed after construction. Patterns are packed
// LSB-first into a 64-bit word, which caps bits at 64.
class LshIndex {
public:
    LshIndex(size_t dim, int bits, uint64_t seed);

    // Explicit projection; rows become bits, columns the dim. The seed is
    // kept only as metadata for persistence.
    LshIndex(Matrix projection, uint64_t seed);

    // Bit b is 1 iff projection row b dot v >= 0. sign(0) maps to 1 so the
    // tie-break is fixed; the zero vector hashes to all ones.
    uint64_t hash(const Embedding& v) const;

    size_t dim() const { return dim_; }
    int bits() const { return bits_; }
    uint64_t seed() const { return seed_; }
    const Matrix& projection() const { return projection_; }

private:
    size_t dim_;
    int bits_;
    uint64_t seed_;
    Matrix projection_;
};

}  // namespace persona
