#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <string>
#include <vector>

#include "persona/error.hpp"
#include "persona/lsh.hpp"
#include "persona/memory.hpp"
#include "persona/rng.hpp"

using namespace persona;

namespace {

Embedding random_embedding(size_t dim, Rng& rng) {
    Embedding e;
    e.vector.resize(dim);
    for (double& v : e.vector) {
        v = rng.normal();
    }
    return e;
}

MemoryConfig small_config(size_t dim, size_t capacity = 0) {
    MemoryConfig config;
    config.dim = dim;
    config.bits = 4;
    config.capacity = capacity;
    config.theta = 0.98;
    return config;
}

// Reference LRU: a deque of keys, front = oldest. Mirrors both insert and
// keyed lookup, which refresh recency identically.
struct RecencyOracle {
    std::deque<uint64_t> order;
    size_t capacity;

    void touch_or_insert(uint64_t key) {
        auto it = std::find(order.begin(), order.end(), key);
        if (it != order.end()) {
            order.erase(it);
            order.push_back(key);
            return;
        }
        if (capacity > 0 && order.size() == capacity) {
            order.pop_front();
        }
        order.push_back(key);
    }
};

}  // namespace

TEST_CASE("lsh hash is invariant under positive scaling") {
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        LshIndex index(8, 16, seed);
        Rng rng(seed + 1000);
        Embedding v = random_embedding(8, rng);
        Embedding doubled = v;
        for (double& x : doubled.vector) {
            x *= 2.0;
        }
        CHECK(index.hash(v) == index.hash(doubled));
    }
}

TEST_CASE("lsh hash matches hand-computed dots on a fixed projection") {
    Matrix projection(2, 2);
    projection.data = {1, 0, 0, 1};
    LshIndex index(std::move(projection), 0);
    Embedding v{{3.0, -4.0}};
    // row 0 dot = 3 >= 0 -> bit 0 set; row 1 dot = -4 < 0 -> bit 1 clear
    CHECK(index.hash(v) == 0b01);
    Embedding w{{-3.0, 4.0}};
    CHECK(index.hash(w) == 0b10);
}

TEST_CASE("lsh hashes the zero vector to all ones") {
    for (int bits : {1, 4, 16, 64}) {
        LshIndex index(3, bits, 9);
        Embedding zero{{0.0, 0.0, 0.0}};
        const uint64_t all =
            bits == 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
        CHECK(index.hash(zero) == all);
    }
}

TEST_CASE("lsh rejects bad construction and probes") {
    CHECK_THROWS_AS(LshIndex(0, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(LshIndex(4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(LshIndex(4, 65, 1), std::invalid_argument);
    LshIndex index(4, 4, 1);
    Embedding wrong{{1.0, 2.0}};
    CHECK_THROWS_AS(index.hash(wrong), std::invalid_argument);
}

TEST_CASE("cosine similarity fixed values") {
    CHECK(cosine_similarity_checked({{1, 0}}, {{1, 0}}).value == doctest::Approx(1.0));
    CHECK(cosine_similarity_checked({{1, 0}}, {{0, 1}}).value == doctest::Approx(0.0));
    CHECK(cosine_similarity_checked({{1, 1}}, {{1, 0}}).value ==
          doctest::Approx(0.70710678).epsilon(1e-8));
}

TEST_CASE("cosine similarity flags zero norms and clamps") {
    CosineResult zero = cosine_similarity_checked({{0, 0}}, {{1, 0}});
    CHECK(zero.zero_norm);
    CHECK(zero.value == 0.0);

    CosineResult parallel = cosine_similarity_checked({{1e-160, 1e-160}}, {{1e160, 1e160}});
    CHECK(!parallel.zero_norm);
    CHECK(parallel.value <= 1.0);
    CHECK(parallel.value >= -1.0);

    CHECK_THROWS_AS(cosine_similarity_checked({{1, 0}}, {{1, 0, 0}}), std::invalid_argument);
}

TEST_CASE("cosine similarity is symmetric") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        Embedding a = random_embedding(6, rng);
        Embedding b = random_embedding(6, rng);
        CHECK(cosine_similarity_checked(a, b).value ==
              doctest::Approx(cosine_similarity_checked(b, a).value).epsilon(1e-12));
    }
}

TEST_CASE("query_nearest on empty store finds nothing") {
    MemoryStore store(small_config(4));
    Rng rng(1);
    CHECK(!store.query_nearest(random_embedding(4, rng)).has_value());
}

TEST_CASE("query_nearest finds an exact vector with score 1") {
    MemoryStore store(small_config(4));
    Rng rng(2);
    Embedding v = random_embedding(4, rng);
    store.insert(100, v);
    auto hit = store.query_nearest(v);
    REQUIRE(hit.has_value());
    CHECK(hit->key == 100);
    CHECK(hit->score == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("query_nearest does not touch recency") {
    MemoryStore store(small_config(4));
    Rng rng(3);
    Embedding a = random_embedding(4, rng);
    Embedding b = random_embedding(4, rng);
    store.insert(1, a);
    store.insert(2, b);
    auto before = store.keys_by_recency();
    store.query_nearest(a);
    store.query_nearest(b);
    CHECK(store.keys_by_recency() == before);
}

TEST_CASE("query_nearest with full radius equals a brute-force scan") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        MemoryConfig config = small_config(6);
        config.bits = 4;
        config.probe_radius = 4;  // covers every bucket
        MemoryStore store(config);
        Rng rng(seed);
        std::vector<std::pair<uint64_t, Embedding>> entries;
        for (uint64_t k = 0; k < 16; ++k) {
            Embedding v = random_embedding(6, rng);
            store.insert(k, v);
            entries.push_back({k, v});
        }
        for (int probe_i = 0; probe_i < 8; ++probe_i) {
            Embedding probe = random_embedding(6, rng);
            double best_score = -2.0;
            uint64_t best_key = 0;
            for (const auto& [k, v] : entries) {
                const double s = cosine_similarity_checked(probe, v).value;
                if (s > best_score || (s == best_score && k < best_key)) {
                    best_score = s;
                    best_key = k;
                }
            }
            auto hit = store.query_nearest(probe);
            REQUIRE(hit.has_value());
            CHECK(hit->key == best_key);
            CHECK(hit->score == doctest::Approx(best_score).epsilon(1e-12));
        }
    }
}

TEST_CASE("unreachable theta forces recompute for non-exact lookups") {
    MemoryConfig config = small_config(4);
    config.theta = 1.0 + 1e-9;
    MemoryStore store(config);
    Rng rng(4);
    Embedding v = random_embedding(4, rng);
    store.insert(7, v);

    int computes = 0;
    auto [result, outcome] = store.lookup_or_compute(8, &v, [&] {
        ++computes;
        return v;
    });
    CHECK(outcome == LookupOutcome::Recompute);
    CHECK(computes == 1);
    CHECK(store.stats().recomputes == 1);
    CHECK(store.stats().misses == 1);
}

TEST_CASE("theta of -1 accepts any probe against a non-empty store") {
    MemoryConfig config = small_config(4);
    config.theta = -1.0;
    config.probe_radius = 4;
    MemoryStore store(config);
    Rng rng(5);
    store.insert(7, random_embedding(4, rng));

    for (int trial = 0; trial < 10; ++trial) {
        Embedding probe = random_embedding(4, rng);
        auto [result, outcome] = store.lookup_or_compute(
            1000 + static_cast<uint64_t>(trial), &probe,
            [&]() -> Embedding { throw std::runtime_error("must not compute"); });
        CHECK(outcome == LookupOutcome::HitSimilar);
    }
    CHECK(store.stats().hits_similar == 10);
    CHECK(store.size() == 1);
}

TEST_CASE("two identical passes recompute once per key") {
    MemoryStore store(small_config(8));
    Rng rng(6);
    const size_t n = 20;
    std::vector<Embedding> inputs;
    for (size_t i = 0; i < n; ++i) {
        inputs.push_back(random_embedding(8, rng));
    }

    int computes = 0;
    for (size_t i = 0; i < n; ++i) {
        auto [v, outcome] = store.lookup_or_compute(i, nullptr, [&] {
            ++computes;
            return inputs[i];
        });
        CHECK(outcome == LookupOutcome::Recompute);
    }
    CHECK(computes == static_cast<int>(n));

    for (size_t i = 0; i < n; ++i) {
        auto [v, outcome] = store.lookup_or_compute(i, nullptr, [&] {
            ++computes;
            return inputs[i];
        });
        CHECK(outcome == LookupOutcome::HitExact);
        CHECK(v.vector == inputs[i].vector);
    }
    CHECK(computes == static_cast<int>(n));
    CHECK(store.stats().recomputes == n);
    CHECK(store.stats().hits_exact == n);
    CHECK(store.stats().misses == n);
}

TEST_CASE("exact key never invokes compute even with a probe") {
    MemoryStore store(small_config(4));
    Rng rng(7);
    Embedding v = random_embedding(4, rng);
    store.lookup_or_compute(5, nullptr, [&] { return v; });
    Embedding far = random_embedding(4, rng);
    auto [result, outcome] = store.lookup_or_compute(
        5, &far, [&]() -> Embedding { throw std::runtime_error("must not compute"); });
    CHECK(outcome == LookupOutcome::HitExact);
    CHECK(result.vector == v.vector);
}

TEST_CASE("compute failure leaves the store untouched") {
    MemoryStore store(small_config(4));
    Rng rng(8);
    store.insert(1, random_embedding(4, rng));
    const StoreStats before = store.stats();
    const auto keys_before = store.keys_by_recency();

    CHECK_THROWS_AS(store.lookup_or_compute(
                        2, nullptr, [&]() -> Embedding { throw InputError("boom"); }),
                    InputError);

    CHECK(store.size() == 1);
    CHECK(store.keys_by_recency() == keys_before);
    const StoreStats after = store.stats();
    CHECK(after.misses == before.misses);
    CHECK(after.recomputes == before.recomputes);
    CHECK(after.hits_exact == before.hits_exact);
    CHECK(after.hits_similar == before.hits_similar);
    CHECK(after.evictions == before.evictions);
}

TEST_CASE("insert evicts in pure LRU order") {
    MemoryStore store(small_config(4, 2));
    Rng rng(9);
    Embedding a = random_embedding(4, rng);
    Embedding b = random_embedding(4, rng);
    Embedding c = random_embedding(4, rng);
    CHECK(!store.insert(1, a).has_value());
    CHECK(!store.insert(2, b).has_value());
    auto evicted = store.insert(3, c);
    CHECK(evicted.has_value());
    CHECK(store.size() == 2);
    auto keys = store.keys_by_recency();
    CHECK(keys == std::vector<uint64_t>{2, 3});
    CHECK(store.stats().evictions == 1);
}

TEST_CASE("an exact hit refreshes recency and changes the victim") {
    MemoryStore store(small_config(4, 2));
    Rng rng(10);
    Embedding a = random_embedding(4, rng);
    Embedding b = random_embedding(4, rng);
    Embedding c = random_embedding(4, rng);
    store.insert(1, a);
    store.insert(2, b);
    auto [v, outcome] = store.lookup_or_compute(1, nullptr, [&] { return a; });
    CHECK(outcome == LookupOutcome::HitExact);
    store.insert(3, c);
    auto keys = store.keys_by_recency();
    CHECK(keys == std::vector<uint64_t>{1, 3});
}

TEST_CASE("capacity one stays at one entry") {
    MemoryStore store(small_config(4, 1));
    Rng rng(11);
    store.insert(1, random_embedding(4, rng));
    CHECK(store.size() == 1);
    store.insert(2, random_embedding(4, rng));
    CHECK(store.size() == 1);
    CHECK(store.keys_by_recency() == std::vector<uint64_t>{2});
    CHECK(store.stats().evictions == 1);
}

TEST_CASE("reinserting an existing key replaces without eviction") {
    MemoryStore store(small_config(4, 2));
    Rng rng(12);
    Embedding a = random_embedding(4, rng);
    Embedding b = random_embedding(4, rng);
    Embedding a2 = random_embedding(4, rng);
    store.insert(1, a);
    store.insert(2, b);
    CHECK(!store.insert(1, a2).has_value());
    CHECK(store.size() == 2);
    CHECK(store.stats().evictions == 0);
    CHECK(store.keys_by_recency() == std::vector<uint64_t>{2, 1});
    auto [v, outcome] = store.lookup_or_compute(1, nullptr, [&] { return a; });
    CHECK(v.vector == a2.vector);
}

TEST_CASE("evictions equal inserts minus capacity on a distinct-key trace") {
    const size_t capacity = 8;
    MemoryStore store(small_config(4, capacity));
    Rng rng(13);
    const size_t inserts = 50;
    for (uint64_t k = 0; k < inserts; ++k) {
        store.insert(k, random_embedding(4, rng));
        CHECK(store.size() <= capacity);
    }
    CHECK(store.stats().evictions == inserts - capacity);
}

TEST_CASE("random traces match the recency-list oracle") {
    for (size_t capacity : {1u, 2u, 8u, 64u}) {
        for (uint64_t seed = 1; seed <= 4; ++seed) {
            MemoryStore store(small_config(4, capacity));
            RecencyOracle oracle{{}, capacity};
            Rng rng(seed * 31);
            for (int op = 0; op < 300; ++op) {
                const uint64_t key = rng.bounded(capacity * 2 + 4);
                if (rng.bounded(2) == 0) {
                    store.insert(key, random_embedding(4, rng));
                } else {
                    Embedding fresh = random_embedding(4, rng);
                    store.lookup_or_compute(key, nullptr, [&] { return fresh; });
                }
                oracle.touch_or_insert(key);
                CHECK(store.size() <= capacity);
                const auto keys = store.keys_by_recency();
                REQUIRE(keys.size() == oracle.order.size());
                for (size_t i = 0; i < keys.size(); ++i) {
                    CHECK(keys[i] == oracle.order[i]);
                }
            }
        }
    }
}

TEST_CASE("store save and load round-trips queries and metadata") {
    MemoryConfig config = small_config(6, 32);
    config.theta = 0.5;
    config.bits = 5;
    config.lsh_seed = 42;
    MemoryStore store(config);
    Rng rng(14);
    for (uint64_t k = 0; k < 12; ++k) {
        store.insert(k * 7 + 1, random_embedding(6, rng));
    }
    store.lookup_or_compute(8, nullptr, [&] { return random_embedding(6, rng); });

    const std::string path = "/tmp/persona_memory_rt.pmem";
    store.save(path);
    MemoryStore loaded = MemoryStore::load(path);

    CHECK(loaded.size() == store.size());
    CHECK(loaded.capacity() == store.capacity());
    CHECK(loaded.theta() == store.theta());
    CHECK(loaded.index().bits() == store.index().bits());
    CHECK(loaded.index().seed() == store.index().seed());
    CHECK(loaded.keys_by_recency() == store.keys_by_recency());

    const StoreStats stats = loaded.stats();
    CHECK(stats.hits_exact == 0);
    CHECK(stats.hits_similar == 0);
    CHECK(stats.misses == 0);
    CHECK(stats.recomputes == 0);
    CHECK(stats.evictions == 0);

    for (int probe_i = 0; probe_i < 10; ++probe_i) {
        Embedding probe = random_embedding(6, rng);
        auto a = store.query_nearest(probe);
        auto b = loaded.query_nearest(probe);
        REQUIRE(a.has_value() == b.has_value());
        CHECK(a->key == b->key);
        CHECK(a->score == doctest::Approx(b->score).epsilon(1e-15));
    }
}

TEST_CASE("empty store round-trips") {
    MemoryStore store(small_config(4));
    const std::string path = "/tmp/persona_memory_empty.pmem";
    store.save(path);
    MemoryStore loaded = MemoryStore::load(path);
    CHECK(loaded.size() == 0);
    CHECK(loaded.dim() == 4);
}

TEST_CASE("corrupt store files are rejected") {
    MemoryStore store(small_config(4));
    Rng rng(15);
    store.insert(1, random_embedding(4, rng));
    const std::string path = "/tmp/persona_memory_corrupt.pmem";
    store.save(path);

    std::ifstream in(path, std::ios::binary);
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    SUBCASE("flipped payload byte") {
        std::string bad = blob;
        bad[bad.size() / 2] ^= 0x01;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bad.data(), static_cast<std::streamsize>(bad.size()));
        out.close();
        CHECK_THROWS_AS(MemoryStore::load(path), InputError);
    }

    SUBCASE("flipped checksum byte") {
        std::string bad = blob;
        bad[bad.size() - 1] ^= 0x80;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bad.data(), static_cast<std::streamsize>(bad.size()));
        out.close();
        CHECK_THROWS_AS(MemoryStore::load(path), InputError);
    }

    SUBCASE("truncated file") {
        std::string bad = blob.substr(0, blob.size() - 3);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bad.data(), static_cast<std::streamsize>(bad.size()));
        out.close();
        CHECK_THROWS_AS(MemoryStore::load(path), InputError);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(MemoryStore::load("/tmp/persona_memory_missing.pmem"), InputError);
    }
}

TEST_CASE("store rejects dimension mismatches") {
    MemoryStore store(small_config(4));
    Embedding wrong{{1.0, 2.0}};
    CHECK_THROWS_AS(store.insert(1, wrong), std::invalid_argument);
    CHECK_THROWS_AS(store.query_nearest(wrong), std::invalid_argument);
}

TEST_CASE("similar hits refresh the matched entry") {
    MemoryConfig config = small_config(4, 2);
    config.theta = -1.0;
    config.probe_radius = 4;
    MemoryStore store(config);
    Rng rng(16);
    Embedding a = random_embedding(4, rng);
    Embedding b = random_embedding(4, rng);
    store.insert(1, a);
    store.insert(2, b);
    // probe exactly matching entry 1 takes the similar path for a fresh key
    auto [v, outcome] = store.lookup_or_compute(
        99, &a, [&]() -> Embedding { throw std::runtime_error("must not compute"); });
    CHECK(outcome == LookupOutcome::HitSimilar);
    CHECK(store.keys_by_recency() == std::vector<uint64_t>{2, 1});
}
