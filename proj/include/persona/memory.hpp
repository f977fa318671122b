#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "persona/embedding.hpp"
#include "persona/lsh.hpp"

namespace persona {

struct CosineResult {
    double value = 0.0;
    // Set when either argument has zero norm; value is then defined as 0.
    bool zero_norm = false;
};

CosineResult cosine_similarity_checked(const Embedding& a, const Embedding& b);

// Convenience form that drops the zero-norm flag. Clamped to [-1, 1].
double cosine_similarity(const Embedding& a, const Embedding& b);

enum class LookupOutcome { HitExact, HitSimilar, Recompute };

struct StoreStats {
    uint64_t hits_exact = 0;
    uint64_t hits_similar = 0;
    uint64_t misses = 0;
    uint64_t recomputes = 0;
    uint64_t evictions = 0;
};

struct MemoryConfig {
    size_t dim = 0;
    int bits = 16;
    uint64_t lsh_seed = 1;
    size_t capacity = 0;  // 0 means unlimited
    // Similarity gate. Values above 1 make the gate unsatisfiable, which
    // disables similarity reuse; -1 accepts any candidate.
    double theta = 0.98;
    // Buckets within this Hamming distance of the probe's pattern are
    // searched; >= bits scans everything. Runtime setting, not persisted.
    int probe_radius = 1;
};

struct NearestResult {
    uint64_t id = 0;
    uint64_t key = 0;
    Embedding embedding;
    double score = 0.0;
};

// LSH-indexed embedding store with an exact-fingerprint fast path, a
// theta-gated similarity path and LRU eviction at capacity.
class MemoryStore {
public:
    explicit MemoryStore(const MemoryConfig& config);

    // Read-only probe: best cosine among entries in buckets within
    // probe_radius of the probe's pattern. Never touches recency. Ties break
    // on ascending key so answers are stable across save/load.
    std::optional<NearestResult> query_nearest(const Embedding& probe) const;

    // Exact key -> HitExact; else probe (when given) scoring >= theta ->
    // HitSimilar; else compute() exactly once and insert under key. A hit on
    // either path refreshes the matched entry's recency. compute failure
    // propagates without touching entries or counters.
    std::pair<Embedding, LookupOutcome> lookup_or_compute(
        uint64_t key, const Embedding* probe, const std::function<Embedding()>& compute);

    // Inserting at capacity evicts the minimum-stamp entry first and reports
    // its id. Re-inserting an existing key replaces the vector in place and
    // refreshes recency; that is not an eviction.
    std::optional<uint64_t> insert(uint64_t key, const Embedding& v);

    bool contains(uint64_t key) const { return by_key_.count(key) != 0; }
    size_t size() const { return entries_.size(); }
    size_t dim() const { return index_.dim(); }
    size_t capacity() const { return capacity_; }
    double theta() const { return theta_; }
    int probe_radius() const { return probe_radius_; }
    const LshIndex& index() const { return index_; }
    StoreStats stats() const { return stats_; }

    void set_theta(double theta) { theta_ = theta; }
    void set_probe_radius(int radius);

    // Keys in ascending recency order, oldest first. Test hook for the LRU
    // oracle comparison.
    std::vector<uint64_t> keys_by_recency() const;

    // Binary round-trip. Entries, keys, recency order, theta, capacity and
    // the LSH seed survive; the projection is regenerated from the seed and
    // counters reset on load.
    void save(const std::string& path) const;
    static MemoryStore load(const std::string& path);

private:
    struct Entry {
        uint64_t key = 0;
        uint64_t stamp = 0;
        Embedding embedding;
        uint64_t pattern = 0;
    };

    void refresh(uint64_t id);
    uint64_t evict_oldest();
    uint64_t add_entry(uint64_t key, const Embedding& v, uint64_t stamp);

    LshIndex index_;
    size_t capacity_;
    double theta_;
    int probe_radius_;

    std::unordered_map<uint64_t, Entry> entries_;        // id -> entry
    std::unordered_map<uint64_t, uint64_t> by_key_;      // fingerprint -> id
    std::unordered_map<uint64_t, std::vector<uint64_t>> buckets_;  // pattern -> ids
    std::map<uint64_t, uint64_t> by_stamp_;              // stamp -> id, begin() is LRU
    uint64_t next_id_ = 0;
    uint64_t next_stamp_ = 0;
    StoreStats stats_;
};

}  // namespace persona
