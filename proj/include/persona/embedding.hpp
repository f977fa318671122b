#pragma once

#include <cstddef>
#include <vector>

namespace persona {

// Batch-level feature vector. dim is carried alongside so downstream stages
// can enforce one width across mixed sources (toy encoder vs imported files).
struct Embedding {
    std::vector<double> vector;

    size_t dim() const { return vector.size(); }
};

}  // namespace persona
