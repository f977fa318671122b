#include "persona/head_io.hpp"

#include <cstring>
#include <fstream>

#include "persona/bytes.hpp"
#include "persona/error.hpp"

namespace persona {

namespace {

constexpr char kHeadMagic[4] = {'P', 'H', 'E', 'D'};
constexpr uint16_t kHeadVersion = 1;

}  // namespace

void save_head(const HeadParams& params, const std::string& path) {
    ByteWriter writer;
    writer.raw(kHeadMagic, sizeof kHeadMagic);
    writer.u16(kHeadVersion);
    writer.u8(params.config.kind == HeadKind::gru ? 0 : 1);
    writer.u32(static_cast<uint32_t>(params.config.input_dim));
    writer.u32(static_cast<uint32_t>(params.config.hidden_dim));
    writer.u32(static_cast<uint32_t>(params.config.layers));
    writer.f64(params.config.dropout_p);
    writer.u64(params.config.seed);
    visit_tensors(params, [&writer](const std::vector<double>& tensor) {
        writer.u64(tensor.size());
        for (double v : tensor) {
            writer.f64(v);
        }
    });
    writer.u64(fnv1a64(writer.bytes().data(), writer.bytes().size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot open checkpoint file for writing: " + path);
    }
    out.write(writer.bytes().data(), static_cast<std::streamsize>(writer.bytes().size()));
    if (!out) {
        throw InputError("write failed: " + path);
    }
}

HeadParams load_head(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open checkpoint file: " + path);
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < sizeof kHeadMagic + 8) {
        throw InputError("checkpoint file too short: " + path);
    }
    const uint64_t expected = fnv1a64(bytes.data(), bytes.size() - 8);
    ByteReader tail(bytes.data() + bytes.size() - 8, 8);
    if (tail.u64() != expected) {
        throw InputError("checksum mismatch, corrupt checkpoint file: " + path);
    }

    ByteReader reader(bytes.data(), bytes.size() - 8);
    char magic[4];
    reader.read_raw(magic, sizeof magic);
    if (std::memcmp(magic, kHeadMagic, sizeof magic) != 0) {
        throw InputError("not a head checkpoint file: " + path);
    }
    const uint16_t version = reader.u16();
    if (version != kHeadVersion) {
        throw InputError("unsupported checkpoint format version " + std::to_string(version) +
                         ": " + path);
    }
    HeadConfig config;
    const uint8_t kind = reader.u8();
    if (kind > 1) {
        throw InputError("checkpoint has an unknown head kind: " + path);
    }
    config.kind = kind == 0 ? HeadKind::gru : HeadKind::meanpool;
    config.input_dim = static_cast<int>(reader.u32());
    config.hidden_dim = static_cast<int>(reader.u32());
    config.layers = static_cast<int>(reader.u32());
    config.dropout_p = reader.f64();
    config.seed = reader.u64();

    // init_head validates the config and builds the right tensor shapes; the
    // stored values then overwrite the seeded ones in visit order.
    HeadParams params;
    try {
        params = init_head(config);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("checkpoint has an invalid head config: ") + e.what());
    }
    bool bad_shape = false;
    visit_tensors(params, [&reader, &bad_shape](std::vector<double>& tensor) {
        if (bad_shape) {
            return;
        }
        if (reader.u64() != tensor.size()) {
            bad_shape = true;
            return;
        }
        for (double& v : tensor) {
            v = reader.f64();
        }
    });
    if (bad_shape) {
        throw InputError("checkpoint tensor shapes do not match its config: " + path);
    }
    if (reader.remaining() != 0) {
        throw InputError("checkpoint file has trailing bytes: " + path);
    }
    return params;
}

}  // namespace persona
