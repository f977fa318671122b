// Acceptance gate: nine end-to-end checks, one printed line each, nonzero
// exit when any fail. Oracles are recomputed here rather than shared with
// the unit suites.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "persona/adam.hpp"
#include "persona/error.hpp"
#include "persona/gqa.hpp"
#include "persona/head.hpp"
#include "persona/head_io.hpp"
#include "persona/loss.hpp"
#include "persona/lsh.hpp"
#include "persona/memory.hpp"
#include "persona/metrics.hpp"
#include "persona/rng.hpp"
#include "persona/trainer.hpp"
#include "support/synthetic.hpp"

using namespace persona;
using persona::testsupport::make_cluster_data;

namespace {

int failures = 0;
std::chrono::steady_clock::time_point case_start;

void begin() { case_start = std::chrono::steady_clock::now(); }

void report(const char* name, bool ok, const std::string& detail) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - case_start).count();
    std::printf("%-52s %s (%s, %.1fs)\n", name, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
    if (!ok) {
        ++failures;
    }
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

Embedding random_embedding(Rng& rng, size_t dim) {
    Embedding e;
    e.vector.resize(dim);
    for (double& v : e.vector) {
        v = rng.normal();
    }
    return e;
}

// ---- sign-projection collision law ------------------------------------

std::vector<double> random_unit(Rng& rng, size_t dim) {
    std::vector<double> v(dim);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& x : v) {
            x = rng.normal();
            norm += x * x;
        }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (double& x : v) {
        x /= norm;
    }
    return v;
}

void check_collision_law() {
    begin();
    const size_t dim = 16;
    const int pairs = 10000;
    Rng rng(11);
    uint64_t seed = 1;
    double worst = 0.0;
    bool ok = true;
    for (double phi : {M_PI / 6.0, M_PI / 3.0, M_PI / 2.0}) {
        int agree = 0;
        for (int i = 0; i < pairs; ++i) {
            const std::vector<double> u = random_unit(rng, dim);
            // orthonormal completion of u inside the pair's plane
            std::vector<double> w = random_unit(rng, dim);
            double proj = 0.0;
            for (size_t j = 0; j < dim; ++j) {
                proj += w[j] * u[j];
            }
            double norm = 0.0;
            for (size_t j = 0; j < dim; ++j) {
                w[j] -= proj * u[j];
                norm += w[j] * w[j];
            }
            if (norm < 1e-12) {
                --i;
                continue;
            }
            norm = std::sqrt(norm);
            Embedding a;
            Embedding b;
            a.vector = u;
            b.vector.resize(dim);
            for (size_t j = 0; j < dim; ++j) {
                b.vector[j] = std::cos(phi) * u[j] + std::sin(phi) * w[j] / norm;
            }
            const LshIndex index(dim, 1, seed++);
            if (index.hash(a) == index.hash(b)) {
                ++agree;
            }
        }
        const double rate = static_cast<double>(agree) / pairs;
        const double expected = 1.0 - phi / M_PI;
        worst = std::max(worst, std::abs(rate - expected));
        ok = ok && std::abs(rate - expected) <= 0.03;
    }
    report("sign-hash collisions follow 1 - angle/pi", ok, "max dev " + fmt("%.4f", worst));
}

// ---- LRU against a reference recency list ------------------------------

struct RecencyOracle {
    size_t capacity = 0;
    std::deque<uint64_t> order;  // oldest first

    void touch_or_insert(uint64_t key) {
        for (auto it = order.begin(); it != order.end(); ++it) {
            if (*it == key) {
                order.erase(it);
                order.push_back(key);
                return;
            }
        }
        if (capacity > 0 && order.size() == capacity) {
            order.pop_front();
        }
        order.push_back(key);
    }
};

void check_lru_oracle() {
    begin();
    bool ok = true;
    for (size_t capacity : {1u, 2u, 8u, 64u}) {
        MemoryConfig config;
        config.dim = 4;
        config.bits = 4;
        config.capacity = capacity;
        config.theta = 2.0;
        MemoryStore store(config);
        RecencyOracle oracle;
        oracle.capacity = capacity;

        Rng rng(1000 + capacity);
        const uint64_t key_space = 2 * capacity + 4;
        for (int op = 0; op < 1000 && ok; ++op) {
            const uint64_t key = rng.bounded(key_space);
            if (rng.bounded(2) == 0) {
                store.insert(key, random_embedding(rng, 4));
            } else {
                store.lookup_or_compute(key, nullptr,
                                        [&rng] { return random_embedding(rng, 4); });
            }
            oracle.touch_or_insert(key);
            const std::vector<uint64_t> got = store.keys_by_recency();
            ok = ok && got.size() == oracle.order.size();
            for (size_t i = 0; ok && i < got.size(); ++i) {
                ok = got[i] == oracle.order[i];
            }
        }
    }
    report("lru contents match the reference simulation", ok, "caps 1,2,8,64 x 1000 ops");
}

// ---- similarity gate semantics -----------------------------------------

void check_threshold_semantics() {
    begin();
    bool ok = true;
    Rng rng(7);

    {  // theta = -1 accepts any cached candidate
        MemoryConfig config;
        config.dim = 8;
        config.bits = 6;
        config.probe_radius = 6;
        config.theta = -1.0;
        MemoryStore store(config);
        store.insert(1, random_embedding(rng, 8));
        for (int i = 0; i < 50; ++i) {
            const Embedding probe = random_embedding(rng, 8);
            auto [e, outcome] = store.lookup_or_compute(
                1000 + static_cast<uint64_t>(i), &probe,
                []() -> Embedding { throw InputError("compute must not run"); });
            (void)e;
            ok = ok && outcome == LookupOutcome::HitSimilar;
        }
        ok = ok && store.size() == 1;
    }

    {  // theta > 1 is unsatisfiable even for an identical cached vector
        MemoryConfig config;
        config.dim = 8;
        config.bits = 6;
        config.probe_radius = 6;
        config.theta = 2.0;
        MemoryStore store(config);
        const Embedding cached = random_embedding(rng, 8);
        store.insert(1, cached);
        int computes = 0;
        for (int i = 0; i < 20; ++i) {
            const Embedding probe = i == 0 ? cached : random_embedding(rng, 8);
            auto [e, outcome] = store.lookup_or_compute(
                2000 + static_cast<uint64_t>(i), &probe, [&] {
                    ++computes;
                    return random_embedding(rng, 8);
                });
            (void)e;
            ok = ok && outcome == LookupOutcome::Recompute;
        }
        ok = ok && computes == 20;
    }

    {  // two identical epochs: n recomputes, then n exact hits, no computes
        MemoryConfig config;
        config.dim = 8;
        config.bits = 6;
        config.theta = 2.0;
        MemoryStore store(config);
        const int n = 50;
        int computes = 0;
        for (int epoch = 0; epoch < 2; ++epoch) {
            for (int i = 0; i < n; ++i) {
                auto [e, outcome] =
                    store.lookup_or_compute(static_cast<uint64_t>(i), nullptr, [&] {
                        ++computes;
                        return random_embedding(rng, 8);
                    });
                (void)e;
                ok = ok && outcome == (epoch == 0 ? LookupOutcome::Recompute
                                                  : LookupOutcome::HitExact);
            }
        }
        ok = ok && computes == n;
        ok = ok && store.stats().recomputes == static_cast<uint64_t>(n);
        ok = ok && store.stats().hits_exact == static_cast<uint64_t>(n);
    }
    report("similarity gate and exact reuse semantics", ok, "theta -1, 2, two epochs");
}

// ---- gradients against central differences ------------------------------

const int kAxisTruth[4] = {0, 1, 1, 0};
const int kTypeTruth = 9;

double total_loss(const HeadParams& params, const std::vector<Embedding>& sequence) {
    const ForwardResult fwd = head_forward(params, sequence, HeadMode::train, 0);
    double loss = 0.0;
    for (int a = 0; a < 4; ++a) {
        loss += cross_entropy(classifier_forward(params, fwd.h_final, static_cast<ClsTask>(a)),
                              kAxisTruth[a])
                    .loss;
    }
    loss += cross_entropy(classifier_forward(params, fwd.h_final, ClsTask::type16), kTypeTruth)
                .loss;
    return loss;
}

HeadParams analytic_gradients(const HeadParams& params, const std::vector<Embedding>& sequence) {
    const ForwardResult fwd = head_forward(params, sequence, HeadMode::train, 0);
    std::vector<std::pair<ClsTask, std::vector<double>>> dlogits;
    for (int a = 0; a < 4; ++a) {
        const auto task = static_cast<ClsTask>(a);
        auto ce = cross_entropy(classifier_forward(params, fwd.h_final, task), kAxisTruth[a]);
        dlogits.emplace_back(task, std::move(ce.grad));
    }
    auto ce = cross_entropy(classifier_forward(params, fwd.h_final, ClsTask::type16), kTypeTruth);
    dlogits.emplace_back(ClsTask::type16, std::move(ce.grad));
    return head_backward(params, *fwd.trace, dlogits);
}

void check_gradients() {
    begin();
    const double step = 1e-5;
    double worst = 0.0;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        HeadConfig hc;
        hc.kind = HeadKind::gru;
        hc.input_dim = 6;
        hc.hidden_dim = 4;
        hc.layers = 2;
        hc.dropout_p = 0.0;
        hc.seed = seed;
        HeadParams params = init_head(hc);

        Rng rng(1000 + seed);
        std::vector<Embedding> sequence;
        for (int t = 0; t < 3; ++t) {
            sequence.push_back(random_embedding(rng, 6));
        }

        const HeadParams grads = analytic_gradients(params, sequence);
        auto ptensors = tensor_list(params);
        auto gtensors = tensor_list(grads);
        for (size_t ti = 0; ti < ptensors.size(); ++ti) {
            for (size_t j = 0; j < ptensors[ti]->size(); ++j) {
                const double saved = (*ptensors[ti])[j];
                (*ptensors[ti])[j] = saved + step;
                const double up = total_loss(params, sequence);
                (*ptensors[ti])[j] = saved - step;
                const double down = total_loss(params, sequence);
                (*ptensors[ti])[j] = saved;
                const double numeric = (up - down) / (2.0 * step);
                const double analytic = (*gtensors[ti])[j];
                const double denom =
                    std::max({std::abs(numeric), std::abs(analytic), 1e-6});
                worst = std::max(worst, std::abs(numeric - analytic) / denom);
            }
        }
    }
    report("analytic gradients match finite differences", worst < 1e-4,
           "worst rel err " + fmt("%.2e", worst));
}

// ---- synthetic clusters must be learnable -------------------------------

MemoryStore fresh_store(size_t dim) {
    MemoryConfig config;
    config.dim = dim;
    config.bits = 16;
    config.theta = 2.0;
    return MemoryStore(config);
}

void check_learning() {
    begin();
    // 400 users, centers offset +-2 per axis with unit noise: opposite
    // classes sit four sigmas apart on every axis coordinate.
    auto data = make_cluster_data(400, 64, 2.0, 2024);

    HeadConfig hc;
    hc.kind = HeadKind::gru;
    hc.input_dim = 64;
    hc.hidden_dim = 32;
    hc.layers = 1;
    hc.dropout_p = 0.0;

    RunConfig rc;
    rc.epochs = 50;
    rc.minibatch = 32;
    rc.seed = 1;
    rc.patience = 50;
    rc.task = TrainTask::dims;

    MemoryStore dims_store = fresh_store(64);
    const RunResult dims = train_one_run(data->train, data->validation, dims_store, hc, rc);

    RunConfig rc16 = rc;
    rc16.task = TrainTask::type16;
    MemoryStore type_store = fresh_store(64);
    const RunResult wide = train_one_run(data->train, data->validation, type_store, hc, rc16);

    std::vector<std::vector<Embedding>> val_sequences;
    std::vector<MbtiLabel> val_labels;
    for (size_t u = 0; u < data->validation.users.size(); ++u) {
        val_sequences.push_back(fetch_sequence(type_store, data->validation, u));
        val_labels.push_back(data->validation.users[u].label);
    }
    const MetricsReport wide_report =
        evaluate(wide.best_params, val_sequences, val_labels, TrainTask::type16);

    const bool ok = dims.best_val_metric >= 0.95 && wide_report.type16.accuracy >= 0.90;
    report("synthetic clusters reach target validation scores", ok,
           "dims f1 " + fmt("%.3f", dims.best_val_metric) + ", 16-way acc " +
               fmt("%.3f", wide_report.type16.accuracy));
}

// ---- grouped attention vs dense oracle ----------------------------------

Matrix random_mat(Rng& rng, size_t r, size_t c) {
    Matrix m(r, c);
    for (double& v : m.data) {
        v = rng.normal();
    }
    return m;
}

Matrix dense_attention_oracle(const Matrix& qp, const Matrix& k, const Matrix& v) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k.cols));
    Matrix scores(qp.rows, k.rows);
    for (size_t i = 0; i < qp.rows; ++i) {
        for (size_t j = 0; j < k.rows; ++j) {
            double s = 0.0;
            for (size_t d = 0; d < k.cols; ++d) {
                s += qp.at(i, d) * k.at(j, d);
            }
            scores.at(i, j) = s * scale;
        }
    }
    for (size_t i = 0; i < scores.rows; ++i) {
        double z = 0.0;
        for (size_t j = 0; j < scores.cols; ++j) {
            scores.at(i, j) = std::exp(scores.at(i, j));
            z += scores.at(i, j);
        }
        for (size_t j = 0; j < scores.cols; ++j) {
            scores.at(i, j) /= z;
        }
    }
    Matrix out(qp.rows, v.cols);
    for (size_t i = 0; i < out.rows; ++i) {
        for (size_t c = 0; c < out.cols; ++c) {
            double s = 0.0;
            for (size_t j = 0; j < v.rows; ++j) {
                s += scores.at(i, j) * v.at(j, c);
            }
            out.at(i, c) = s;
        }
    }
    return out;
}

void check_gqa() {
    begin();
    bool ok = true;
    double worst = 0.0;
    Rng rng(42);

    for (int trial = 0; trial < 30; ++trial) {
        const size_t s = 1 + rng.bounded(6);
        const size_t dk = 2 * (1 + rng.bounded(8));
        const Matrix qp = random_mat(rng, s, dk);
        const Matrix k = random_mat(rng, s, dk);
        const Matrix v = random_mat(rng, s, dk);
        const Matrix got = gqa_attention(qp, k, v, 1);
        const Matrix want = dense_attention_oracle(qp, k, v);
        for (size_t i = 0; i < got.data.size(); ++i) {
            worst = std::max(worst, std::abs(got.data[i] - want.data[i]));
        }
    }
    ok = ok && worst <= 1e-10;

    double worst_sum = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Matrix m = random_mat(rng, 1 + rng.bounded(6), 1 + rng.bounded(8));
        for (double& x : m.data) {
            x *= 8.0;
        }
        softmax_rows(m);
        for (size_t i = 0; i < m.rows; ++i) {
            double sum = 0.0;
            for (size_t j = 0; j < m.cols; ++j) {
                sum += m.at(i, j);
            }
            worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        }
    }
    ok = ok && worst_sum <= 1e-6;

    for (int g : {2, 4}) {
        for (int trial = 0; trial < 20; ++trial) {
            const size_t s = 1 + rng.bounded(5);
            const size_t dk = static_cast<size_t>(g) * (1 + rng.bounded(4));
            const Matrix qp = random_mat(rng, s, dk / static_cast<size_t>(g));
            const Matrix k = random_mat(rng, s, dk);
            const Matrix v = random_mat(rng, s, dk);
            const Matrix out = gqa_attention(qp, k, v, g);
            for (size_t c = 0; c < v.cols; ++c) {
                double lo = v.at(0, c);
                double hi = v.at(0, c);
                for (size_t r = 1; r < v.rows; ++r) {
                    lo = std::min(lo, v.at(r, c));
                    hi = std::max(hi, v.at(r, c));
                }
                for (size_t r = 0; r < out.rows; ++r) {
                    ok = ok && out.at(r, c) >= lo - 1e-12 && out.at(r, c) <= hi + 1e-12;
                }
            }
        }
    }
    report("grouped attention matches the dense oracle", ok,
           "g=1 dev " + fmt("%.1e", worst) + ", rowsum dev " + fmt("%.1e", worst_sum));
}

// ---- metric fixtures and random-guess accuracy ---------------------------

void check_metrics() {
    begin();
    bool ok = true;

    const ConfusionMatrix ones = confusion_matrix({0, 0, 1, 1}, {0, 1, 0, 1}, 2);
    const MacroMetrics half = macro_metrics(ones);
    ok = ok && std::abs(half.accuracy - 0.5) <= 1e-15 && std::abs(half.precision - 0.5) <= 1e-15 &&
         std::abs(half.recall - 0.5) <= 1e-15 && std::abs(half.f1 - 0.5) <= 1e-15;

    ConfusionMatrix diag(3);
    diag.at(0, 0) = 4;
    diag.at(1, 1) = 2;
    diag.at(2, 2) = 5;
    const MacroMetrics perfect = macro_metrics(diag);
    ok = ok && perfect.accuracy == 1.0 && perfect.precision == 1.0 && perfect.recall == 1.0 &&
         perfect.f1 == 1.0;

    // class 1 twice true, never predicted: its 0/0 ratios count as zero
    ConfusionMatrix skew(2);
    skew.at(0, 0) = 2;
    skew.at(1, 0) = 1;
    const MacroMetrics m = macro_metrics(skew);
    ok = ok && std::abs(m.accuracy - 2.0 / 3.0) <= 1e-12 &&
         std::abs(m.precision - (2.0 / 3.0) / 2.0) <= 1e-12 && std::abs(m.recall - 0.5) <= 1e-12 &&
         std::abs(m.f1 - 0.4) <= 1e-12;

    // uniform random 16-class guesses over balanced labels, n = 4800
    const int n = 4800;
    std::vector<int> labels(n);
    std::vector<int> preds(n);
    Rng rng(777);
    for (int i = 0; i < n; ++i) {
        labels[i] = i % 16;
        preds[i] = static_cast<int>(rng.bounded(16));
    }
    const double accuracy = macro_metrics(confusion_matrix(preds, labels, 16)).accuracy;
    const double p = 1.0 / 16.0;
    const double margin = 2.576 * std::sqrt(p * (1.0 - p) / n);  // 99% binomial interval
    ok = ok && accuracy >= p - margin && accuracy <= p + margin;

    report("macro metrics match hand values, guesses near 1/16", ok,
           "guess acc " + fmt("%.4f", accuracy));
}

// ---- exact numeric replays ----------------------------------------------

void check_exact_replays() {
    begin();
    bool ok = true;

    const CrossEntropyResult two = cross_entropy({0.3, 0.3}, 0);
    ok = ok && std::abs(two.loss - std::log(2.0)) <= 1e-12;
    const CrossEntropyResult sixteen = cross_entropy(std::vector<double>(16, 1.7), 3);
    ok = ok && std::abs(sixteen.loss - std::log(16.0)) <= 1e-12;

    AdamConfig config;
    const double g1 = 0.7;
    const double g2 = -0.2;
    std::vector<double> param = {0.3};
    std::vector<double> m = {0.0};
    std::vector<double> v = {0.0};
    adam_update(param, {g1}, m, v, 1, config);
    adam_update(param, {g2}, m, v, 2, config);

    const double m1 = (1.0 - config.beta1) * g1;
    const double v1 = (1.0 - config.beta2) * g1 * g1;
    double x = 0.3 - config.lr * (m1 / (1.0 - config.beta1)) /
                         (std::sqrt(v1 / (1.0 - config.beta2)) + config.eps);
    const double m2 = config.beta1 * m1 + (1.0 - config.beta1) * g2;
    const double v2 = config.beta2 * v1 + (1.0 - config.beta2) * g2 * g2;
    x -= config.lr * (m2 / (1.0 - config.beta1 * config.beta1)) /
         (std::sqrt(v2 / (1.0 - config.beta2 * config.beta2)) + config.eps);
    ok = ok && std::abs(param[0] - x) <= 1e-12;

    report("cross entropy and adam replay exactly", ok,
           "ln2/ln16 and two-step scalar within 1e-12");
}

// ---- persistence round-trips and corruption rejection --------------------

std::string slurp(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    std::string bytes;
    char buf[4096];
    size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) {
        bytes.append(buf, n);
    }
    std::fclose(f);
    return bytes;
}

void spit(const std::string& path, const std::string& bytes) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
}

template <typename LoadFn>
bool rejects_corruption(const std::string& path, LoadFn load) {
    const std::string original = slurp(path);
    bool ok = true;
    for (size_t offset : {original.size() / 2, original.size() - 4}) {
        std::string bent = original;
        bent[offset] = static_cast<char>(bent[offset] ^ 0x20);
        const std::string bent_path = path + ".bent";
        spit(bent_path, bent);
        bool threw = false;
        try {
            load(bent_path);
        } catch (const InputError&) {
            threw = true;
        }
        ok = ok && threw;
        std::remove(bent_path.c_str());
    }
    return ok;
}

void check_persistence() {
    begin();
    bool ok = true;
    Rng rng(31);

    {  // embedding store
        MemoryConfig config;
        config.dim = 6;
        config.bits = 8;
        config.probe_radius = 8;
        config.theta = 0.5;
        config.capacity = 10;
        MemoryStore store(config);
        for (uint64_t key = 1; key <= 10; ++key) {
            store.insert(key, random_embedding(rng, 6));
        }
        store.lookup_or_compute(3, nullptr, [] { return Embedding{}; });
        store.lookup_or_compute(7, nullptr, [] { return Embedding{}; });

        const std::string path = "/tmp/persona_acceptance_store.pmem";
        store.save(path);
        MemoryStore loaded = MemoryStore::load(path);
        loaded.set_probe_radius(8);

        ok = ok && loaded.keys_by_recency() == store.keys_by_recency();
        ok = ok && loaded.theta() == store.theta() && loaded.capacity() == store.capacity();
        for (int i = 0; i < 20; ++i) {
            const Embedding probe = random_embedding(rng, 6);
            const auto before = store.query_nearest(probe);
            const auto after = loaded.query_nearest(probe);
            ok = ok && before.has_value() && after.has_value() &&
                 before->key == after->key && before->score == after->score &&
                 before->embedding.vector == after->embedding.vector;
        }
        ok = ok && rejects_corruption(path, [](const std::string& p) { MemoryStore::load(p); });
        std::remove(path.c_str());
    }

    {  // head checkpoint
        HeadConfig hc;
        hc.kind = HeadKind::gru;
        hc.input_dim = 5;
        hc.hidden_dim = 4;
        hc.layers = 2;
        hc.dropout_p = 0.25;
        hc.seed = 15;
        const HeadParams params = init_head(hc);

        const std::string path = "/tmp/persona_acceptance_head.ckpt";
        save_head(params, path);
        const HeadParams loaded = load_head(path);

        auto pt = tensor_list(params);
        auto lt = tensor_list(loaded);
        ok = ok && pt.size() == lt.size();
        for (size_t i = 0; ok && i < pt.size(); ++i) {
            ok = *pt[i] == *lt[i];
        }

        std::vector<Embedding> sequence;
        for (int t = 0; t < 4; ++t) {
            sequence.push_back(random_embedding(rng, 5));
        }
        const auto before = head_forward(params, sequence, HeadMode::eval, 0);
        const auto after = head_forward(loaded, sequence, HeadMode::eval, 0);
        ok = ok && before.h_final == after.h_final;
        ok = ok && classifier_forward(params, before.h_final, ClsTask::type16) ==
                       classifier_forward(loaded, after.h_final, ClsTask::type16);

        ok = ok && rejects_corruption(path, [](const std::string& p) { load_head(p); });
        std::remove(path.c_str());
    }

    report("binary files round-trip and reject corruption", ok,
           "store + checkpoint, flipped bytes rejected");
}

void run(void (*check)(), const char* name) {
    try {
        check();
    } catch (const std::exception& e) {
        std::printf("%-52s FAIL (unexpected exception: %s)\n", name, e.what());
        ++failures;
    }
}

}  // namespace

int main() {
    run(check_collision_law, "sign-hash collisions follow 1 - angle/pi");
    run(check_lru_oracle, "lru contents match the reference simulation");
    run(check_threshold_semantics, "similarity gate and exact reuse semantics");
    run(check_gradients, "analytic gradients match finite differences");
    run(check_learning, "synthetic clusters reach target validation scores");
    run(check_gqa, "grouped attention matches the dense oracle");
    run(check_metrics, "macro metrics match hand values, guesses near 1/16");
    run(check_exact_replays, "cross entropy and adam replay exactly");
    run(check_persistence, "binary files round-trip and reject corruption");
    return failures == 0 ? 0 : 1;
}
