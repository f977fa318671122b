#include "persona/memory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "persona/bytes.hpp"
#include "persona/error.hpp"

namespace persona {

namespace {

constexpr char kStoreMagic[4] = {'P', 'M', 'E', 'M'};
constexpr uint16_t kStoreVersion = 1;

}  // namespace

CosineResult cosine_similarity_checked(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("cosine_similarity: dims differ");
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (size_t i = 0; i < a.dim(); ++i) {
        dot += a.vector[i] * b.vector[i];
        na += a.vector[i] * a.vector[i];
        nb += b.vector[i] * b.vector[i];
    }
    if (na == 0.0 || nb == 0.0) {
        return {0.0, true};
    }
    double value = dot / (std::sqrt(na) * std::sqrt(nb));
    value = std::clamp(value, -1.0, 1.0);
    return {value, false};
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    return cosine_similarity_checked(a, b).value;
}

MemoryStore::MemoryStore(const MemoryConfig& config)
    : index_(config.dim, config.bits, config.lsh_seed),
      capacity_(config.capacity),
      theta_(config.theta),
      probe_radius_(config.probe_radius) {
    if (config.probe_radius < 0) {
        throw std::invalid_argument("MemoryStore: probe_radius must be >= 0");
    }
}

void MemoryStore::set_probe_radius(int radius) {
    if (radius < 0) {
        throw std::invalid_argument("MemoryStore: probe_radius must be >= 0");
    }
    probe_radius_ = radius;
}

std::optional<NearestResult> MemoryStore::query_nearest(const Embedding& probe) const {
    const uint64_t pattern = index_.hash(probe);
    bool found = false;
    NearestResult best;
    for (const auto& [bucket_pattern, ids] : buckets_) {
        if (std::popcount(bucket_pattern ^ pattern) > probe_radius_) {
            continue;
        }
        for (uint64_t id : ids) {
            const Entry& entry = entries_.at(id);
            const double score = cosine_similarity_checked(probe, entry.embedding).value;
            if (!found || score > best.score || (score == best.score && entry.key < best.key)) {
                best.id = id;
                best.key = entry.key;
                best.embedding = entry.embedding;
                best.score = score;
                found = true;
            }
        }
    }
    if (!found) {
        return std::nullopt;
    }
    return best;
}

std::pair<Embedding, LookupOutcome> MemoryStore::lookup_or_compute(
    uint64_t key, const Embedding* probe, const std::function<Embedding()>& compute) {
    auto it = by_key_.find(key);
    if (it != by_key_.end()) {
        refresh(it->second);
        ++stats_.hits_exact;
        return {entries_.at(it->second).embedding, LookupOutcome::HitExact};
    }
    if (probe != nullptr) {
        std::optional<NearestResult> nearest = query_nearest(*probe);
        if (nearest && nearest->score >= theta_) {
            refresh(nearest->id);
            ++stats_.hits_similar;
            return {std::move(nearest->embedding), LookupOutcome::HitSimilar};
        }
    }
    Embedding computed = compute();
    insert(key, computed);
    ++stats_.misses;
    ++stats_.recomputes;
    return {std::move(computed), LookupOutcome::Recompute};
}

std::optional<uint64_t> MemoryStore::insert(uint64_t key, const Embedding& v) {
    if (v.dim() != index_.dim()) {
        throw std::invalid_argument("MemoryStore::insert: vector dim differs from store dim");
    }
    auto it = by_key_.find(key);
    if (it != by_key_.end()) {
        // Replacement, not an eviction: the entry keeps its id but moves to
        // the bucket of the new vector and to the front of recency.
        Entry& entry = entries_.at(it->second);
        auto& old_bucket = buckets_.at(entry.pattern);
        old_bucket.erase(std::find(old_bucket.begin(), old_bucket.end(), it->second));
        if (old_bucket.empty()) {
            buckets_.erase(entry.pattern);
        }
        entry.embedding = v;
        entry.pattern = index_.hash(v);
        buckets_[entry.pattern].push_back(it->second);
        refresh(it->second);
        return std::nullopt;
    }
    std::optional<uint64_t> evicted;
    if (capacity_ > 0 && entries_.size() >= capacity_) {
        evicted = evict_oldest();
        ++stats_.evictions;
    }
    add_entry(key, v, next_stamp_++);
    return evicted;
}

std::vector<uint64_t> MemoryStore::keys_by_recency() const {
    std::vector<uint64_t> keys;
    keys.reserve(by_stamp_.size());
    for (const auto& [stamp, id] : by_stamp_) {
        keys.push_back(entries_.at(id).key);
    }
    return keys;
}

void MemoryStore::refresh(uint64_t id) {
    Entry& entry = entries_.at(id);
    by_stamp_.erase(entry.stamp);
    entry.stamp = next_stamp_++;
    by_stamp_[entry.stamp] = id;
}

uint64_t MemoryStore::evict_oldest() {
    const uint64_t id = by_stamp_.begin()->second;
    const Entry& entry = entries_.at(id);
    auto& bucket = buckets_.at(entry.pattern);
    bucket.erase(std::find(bucket.begin(), bucket.end(), id));
    if (bucket.empty()) {
        buckets_.erase(entry.pattern);
    }
    by_key_.erase(entry.key);
    by_stamp_.erase(entry.stamp);
    entries_.erase(id);
    return id;
}

uint64_t MemoryStore::add_entry(uint64_t key, const Embedding& v, uint64_t stamp) {
    const uint64_t id = next_id_++;
    Entry entry;
    entry.key = key;
    entry.stamp = stamp;
    entry.embedding = v;
    entry.pattern = index_.hash(v);
    buckets_[entry.pattern].push_back(id);
    by_key_[key] = id;
    by_stamp_[stamp] = id;
    entries_[id] = std::move(entry);
    return id;
}

void MemoryStore::save(const std::string& path) const {
    ByteWriter writer;
    writer.raw(kStoreMagic, sizeof kStoreMagic);
    writer.u16(kStoreVersion);
    writer.u32(static_cast<uint32_t>(index_.dim()));
    writer.u16(static_cast<uint16_t>(index_.bits()));
    writer.u64(capacity_);
    writer.f64(theta_);
    writer.u64(index_.seed());
    writer.u64(entries_.size());
    // Stamp order keeps the file bytes deterministic and lets load rebuild
    // recency directly.
    for (const auto& [stamp, id] : by_stamp_) {
        const Entry& entry = entries_.at(id);
        writer.u64(entry.key);
        writer.u64(entry.stamp);
        for (double v : entry.embedding.vector) {
            writer.f64(v);
        }
    }
    writer.u64(fnv1a64(writer.bytes().data(), writer.bytes().size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot open store file for writing: " + path);
    }
    out.write(writer.bytes().data(), static_cast<std::streamsize>(writer.bytes().size()));
    if (!out) {
        throw InputError("write failed: " + path);
    }
}

MemoryStore MemoryStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open store file: " + path);
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < sizeof kStoreMagic + 8) {
        throw InputError("store file too short: " + path);
    }
    const uint64_t expected = fnv1a64(bytes.data(), bytes.size() - 8);
    ByteReader tail(bytes.data() + bytes.size() - 8, 8);
    if (tail.u64() != expected) {
        throw InputError("checksum mismatch, corrupt store file: " + path);
    }

    ByteReader reader(bytes.data(), bytes.size() - 8);
    char magic[4];
    reader.read_raw(magic, sizeof magic);
    if (std::memcmp(magic, kStoreMagic, sizeof magic) != 0) {
        throw InputError("not a memory store file: " + path);
    }
    const uint16_t version = reader.u16();
    if (version != kStoreVersion) {
        throw InputError("unsupported store format version " + std::to_string(version) + ": " +
                         path);
    }
    MemoryConfig config;
    config.dim = reader.u32();
    config.bits = reader.u16();
    config.capacity = reader.u64();
    config.theta = reader.f64();
    config.lsh_seed = reader.u64();
    MemoryStore store(config);

    const uint64_t count = reader.u64();
    if (config.capacity > 0 && count > config.capacity) {
        throw InputError("store file entry count exceeds its capacity: " + path);
    }
    uint64_t prev_stamp = 0;
    for (uint64_t i = 0; i < count; ++i) {
        const uint64_t key = reader.u64();
        const uint64_t stamp = reader.u64();
        if (i > 0 && stamp <= prev_stamp) {
            throw InputError("store file recency stamps out of order: " + path);
        }
        prev_stamp = stamp;
        if (store.by_key_.count(key) != 0) {
            throw InputError("store file has a duplicate key: " + path);
        }
        Embedding emb;
        emb.vector.resize(config.dim);
        for (size_t j = 0; j < config.dim; ++j) {
            emb.vector[j] = reader.f64();
        }
        store.add_entry(key, emb, stamp);
    }
    if (reader.remaining() != 0) {
        throw InputError("store file has trailing bytes: " + path);
    }
    store.next_stamp_ = count > 0 ? prev_stamp + 1 : 0;
    return store;
}

}  // namespace persona
