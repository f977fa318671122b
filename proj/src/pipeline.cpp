#include "persona/pipeline.hpp"

#include "persona/error.hpp"
#include "persona/tokenize.hpp"

namespace persona {

EmbeddedDataset make_encoder_dataset(const std::vector<UserSample>& samples,
                                     const GqaEncoder& encoder) {
    EmbeddedDataset data;
    data.dim = static_cast<size_t>(encoder.config().dim);
    data.users.reserve(samples.size());
    for (const UserSample& sample : samples) {
        EmbeddedUser user;
        user.user_id = sample.user_id;
        user.label = sample.label;
        user.keys.reserve(sample.batches.size());
        for (const auto& batch : sample.batches) {
            user.keys.push_back(fingerprint(batch));
        }
        data.users.push_back(std::move(user));
    }
    data.produce = [&samples, &encoder](size_t user, size_t batch) {
        return encoder.embed_batch(samples[user].batches[batch]);
    };
    return data;
}

EmbeddedDataset make_imported_dataset(const std::vector<UserSample>& samples,
                                      const ImportedEmbeddings& imported) {
    EmbeddedDataset data;
    data.dim = imported.dim;
    data.users.reserve(samples.size());
    for (const UserSample& sample : samples) {
        auto it = imported.users.find(sample.user_id);
        if (it == imported.users.end() || it->second.empty()) {
            throw InputError("no imported embeddings for user \"" + sample.user_id + "\"");
        }
        EmbeddedUser user;
        user.user_id = sample.user_id;
        user.label = sample.label;
        for (size_t b = 0; b < it->second.size(); ++b) {
            user.keys.push_back(fingerprint_name(sample.user_id, b));
        }
        data.users.push_back(std::move(user));
    }
    data.produce = [&samples, &imported](size_t user, size_t batch) {
        return imported.users.at(samples[user].user_id)[batch];
    };
    return data;
}

std::vector<Embedding> fetch_sequence(MemoryStore& store, const EmbeddedDataset& data,
                                      size_t user) {
    const EmbeddedUser& u = data.users[user];
    std::vector<Embedding> sequence;
    sequence.reserve(u.keys.size());
    for (size_t b = 0; b < u.keys.size(); ++b) {
        auto [embedding, outcome] = store.lookup_or_compute(
            u.keys[b], nullptr, [&data, user, b] { return data.produce(user, b); });
        (void)outcome;
        sequence.push_back(std::move(embedding));
    }
    return sequence;
}

}  // namespace persona
