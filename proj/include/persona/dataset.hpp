#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "persona/mbti.hpp"

namespace persona {

// One user: ordered token-ID batches plus the MBTI label.
struct UserSample {
    std::string user_id;
    std::vector<std::vector<uint32_t>> batches;
    MbtiLabel label;

    size_t batch_count() const { return batches.size(); }
};

struct ParseOptions {
    int posts_per_batch = 8;
    int vocab_bits = 16;
};

// Raw dataset record before tokenization (one JSONL line).
struct RawRecord {
    std::string user_id;
    std::vector<std::string> posts;
    std::string label;
};

// Reads dataset-JSONL ({"user_id", "posts", "label"} per line). Malformed
// lines and unknown label letters are reported with their 1-based line
// number. Empty file yields an empty list.
std::vector<RawRecord> read_dataset_jsonl(const std::string& path);

// Writes records back out as dataset-JSONL (used by the ingest command).
void write_dataset_jsonl(const std::string& path, const std::vector<RawRecord>& records);

// Full ingestion: read, tokenize each post, group posts_per_batch posts per
// batch (token IDs concatenated), preserving file order. Posts that tokenize
// to nothing are dropped; a user left with zero non-empty posts is an error.
std::vector<UserSample> parse_dataset(const std::string& path, const ParseOptions& options);

// Lexicon words matched case-insensitively against whitespace tokens.
using LeakLexicon = std::unordered_set<std::string>;

// The 16 type codes plus the 8 axis adjectives, already case-folded.
LeakLexicon default_leak_lexicon();

// Removes every whitespace token whose case-folded form appears in the
// case-folded lexicon; surviving tokens are rejoined with single spaces.
std::vector<std::string> filter_label_leakage(const std::vector<std::string>& posts,
                                              const LeakLexicon& lexicon);

struct SplitRatios {
    double train = 0.6;
    double validation = 0.2;
    double test = 0.2;
};

struct DatasetSplit {
    std::vector<UserSample> train;
    std::vector<UserSample> validation;
    std::vector<UserSample> test;
    uint64_t seed = 0;
    SplitRatios ratios;
};

// Deterministic seeded shuffle, then contiguous cuts at floor(n*r_train) and
// floor(n*(r_train+r_val)); the remainder goes to test. Ratios must sum to 1
// within 1e-9 and the input must be non-empty.
DatasetSplit split_dataset(const std::vector<UserSample>& samples, const SplitRatios& ratios,
                           uint64_t seed);

}  // namespace persona
