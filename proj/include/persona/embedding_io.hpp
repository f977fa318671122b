#pragma once

#include <map>
#include <string>
#include <vector>

#include "persona/embedding.hpp"

namespace persona {

// Externally produced embeddings, one ordered batch list per user. All
// vectors in one file must share a single dim; it is recorded here and
// enforced against the configured width downstream.
struct ImportedEmbeddings {
    size_t dim = 0;
    std::map<std::string, std::vector<Embedding>> users;
};

// Reads embedding-JSONL: per line user_id (string), batch_idx (integer),
// vector (array of numbers, parsed at double precision). Lists are ordered
// by batch_idx. Malformed lines, non-finite values, duplicate indices and
// mixed dimensions raise InputError naming the line.
ImportedEmbeddings import_embeddings(const std::string& path);

// Counterpart writer used by the embed subcommand; lines ordered by user_id
// then batch_idx so output bytes are stable.
void write_embeddings_jsonl(const std::string& path,
                            const std::map<std::string, std::vector<Embedding>>& users);

}  // namespace persona
