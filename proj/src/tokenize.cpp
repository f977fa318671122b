#include "persona/tokenize.hpp"

#include <cctype>
#include <stdexcept>

#include "persona/bytes.hpp"

namespace persona {

std::string fold_case(std::string_view token) {
    std::string folded(token);
    for (char& c : folded) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return folded;
}

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) {
            tokens.emplace_back(text.substr(start, i - start));
        }
    }
    return tokens;
}

std::vector<uint32_t> tokenize(std::string_view text, int vocab_bits) {
    if (vocab_bits < 8 || vocab_bits > 24) {
        throw std::invalid_argument("vocab_bits must be in [8, 24], got " +
                                    std::to_string(vocab_bits));
    }
    const uint64_t mask = (uint64_t{1} << vocab_bits) - 1;
    std::vector<uint32_t> ids;
    for (const std::string& token : split_tokens(text)) {
        std::string folded = fold_case(token);
        uint64_t h = fnv1a64(folded.data(), folded.size());
        ids.push_back(static_cast<uint32_t>(h & mask));
    }
    return ids;
}

uint64_t fingerprint(std::span<const uint32_t> batch) {
    uint64_t h = kEmptyFingerprint;
    for (uint32_t id : batch) {
        unsigned char bytes[4];
        for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>(id >> (8 * i));
        h = fnv1a64(bytes, 4, h);
    }
    return h;
}

uint64_t fingerprint_name(std::string_view user_id, uint64_t batch_idx) {
    uint64_t h = fnv1a64(user_id.data(), user_id.size());
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(batch_idx >> (8 * i));
    return fnv1a64(bytes, 8, h);
}

}  // namespace persona
