#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace persona {

// Fingerprint of the empty token sequence (FNV-1a offset basis).
inline constexpr uint64_t kEmptyFingerprint = 0xcbf29ce484222325ull;

// Hashing-trick tokenizer: whitespace split, ASCII case fold, FNV-1a 64
// reduced mod 2^vocab_bits. Stable across runs and platforms.
// vocab_bits must be in [8, 24].
std::vector<uint32_t> tokenize(std::string_view text, int vocab_bits);

// ASCII-lowercased copy of one token (used for lexicon matching too).
std::string fold_case(std::string_view token);

// Whitespace-delimited tokens of a string, order preserved, case untouched.
std::vector<std::string> split_tokens(std::string_view text);

// Order-sensitive 64-bit key over a token-ID sequence. The empty sequence
// maps to kEmptyFingerprint.
uint64_t fingerprint(std::span<const uint32_t> batch);

// Stable 64-bit key for a named batch, for embedding sequences that have no
// token-level content (imported vectors).
uint64_t fingerprint_name(std::string_view user_id, uint64_t batch_idx);

}  // namespace persona
