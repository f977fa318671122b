#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "persona/dataset.hpp"
#include "persona/embedding.hpp"
#include "persona/embedding_io.hpp"
#include "persona/encoder.hpp"
#include "persona/memory.hpp"
#include "persona/mbti.hpp"

namespace persona {

struct EmbeddedUser {
    std::string user_id;
    MbtiLabel label;
    std::vector<uint64_t> keys;  // one fingerprint per batch, order preserved
};

// One dataset part viewed as keyed embedding sequences. produce(user, batch)
// is the recompute path invoked on cache misses; every fetch is expected to
// flow through MemoryStore::lookup_or_compute with these keys.
struct EmbeddedDataset {
    std::vector<EmbeddedUser> users;
    size_t dim = 0;
    std::function<Embedding(size_t, size_t)> produce;
};

// Keys are content fingerprints of the token batches; produce runs the toy
// encoder. Caller keeps samples and encoder alive while the result is used.
EmbeddedDataset make_encoder_dataset(const std::vector<UserSample>& samples,
                                     const GqaEncoder& encoder);

// Keys are derived from (user_id, batch index); produce returns the imported
// vector. Users present in the dataset but missing from the import (or with
// no batches) raise InputError. Caller keeps both arguments alive.
EmbeddedDataset make_imported_dataset(const std::vector<UserSample>& samples,
                                      const ImportedEmbeddings& imported);

// Fetches user's full sequence through the store (exact-fingerprint path,
// no similarity probe).
std::vector<Embedding> fetch_sequence(MemoryStore& store, const EmbeddedDataset& data,
                                      size_t user);

}  // namespace persona
