#pragma once

#include <cstdint>
#include <cstring>
#include <string>

#include "persona/error.hpp"

namespace persona {

// FNV-1a 64-bit. Used both as the stable string/sequence hash and as the
// trailing file checksum.
inline constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr uint64_t kFnvPrime = 0x100000001b3ull;

inline uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = kFnvOffset) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

// Little-endian byte buffer writer for the binary file formats.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }

    void u16(uint16_t v) {
        for (int i = 0; i < 2; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
    }

    void f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }

    void raw(const void* data, size_t len) {
        buf_.append(static_cast<const char*>(data), len);
    }

    const std::string& bytes() const { return buf_; }

private:
    std::string buf_;
};

// Reader over an in-memory buffer; short reads throw InputError.
class ByteReader {
public:
    ByteReader(const char* data, size_t len) : data_(data), len_(len) {}
    explicit ByteReader(const std::string& s) : ByteReader(s.data(), s.size()) {}

    uint8_t u8() {
        need(1);
        return static_cast<uint8_t>(data_[pos_++]);
    }

    uint16_t u16() {
        uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= static_cast<uint16_t>(u8()) << (8 * i);
        return v;
    }

    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(u8()) << (8 * i);
        return v;
    }

    uint64_t u64() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(u8()) << (8 * i);
        return v;
    }

    double f64() {
        uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }

    void read_raw(void* dst, size_t n) {
        need(n);
        std::memcpy(dst, data_ + pos_, n);
        pos_ += n;
    }

    size_t remaining() const { return len_ - pos_; }
    size_t pos() const { return pos_; }

private:
    void need(size_t n) const {
        if (len_ - pos_ < n) {
            throw InputError("truncated binary data");
        }
    }

    const char* data_;
    size_t len_;
    size_t pos_ = 0;
};

}  // namespace persona
