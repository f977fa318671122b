#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "persona/bytes.hpp"
#include "persona/config.hpp"
#include "persona/dataset.hpp"
#include "persona/embedding_io.hpp"
#include "persona/encoder.hpp"
#include "persona/error.hpp"
#include "persona/head_io.hpp"
#include "persona/memory.hpp"
#include "persona/metrics.hpp"
#include "persona/pipeline.hpp"
#include "persona/report.hpp"
#include "persona/rng.hpp"
#include "persona/tokenize.hpp"
#include "persona/trainer.hpp"

namespace {

using namespace persona;

LeakLexicon build_lexicon(const CliConfig& config) {
    LeakLexicon lexicon = default_leak_lexicon();
    if (!config.lexicon.empty()) {
        std::ifstream in(config.lexicon);
        if (!in) {
            throw InputError("cannot open lexicon file: " + config.lexicon);
        }
        std::string term;
        while (std::getline(in, term)) {
            while (!term.empty() && (term.back() == '\r' || term.back() == ' ')) {
                term.pop_back();
            }
            if (!term.empty()) {
                lexicon.insert(fold_case(term));
            }
        }
    }
    return lexicon;
}

// Either the toy encoder or an imported embedding file; both feed the same
// keyed-dataset shape.
struct EmbeddingSource {
    std::unique_ptr<GqaEncoder> encoder;
    std::unique_ptr<ImportedEmbeddings> imported;

    EmbeddedDataset dataset(const std::vector<UserSample>& samples) const {
        if (imported) {
            return make_imported_dataset(samples, *imported);
        }
        return make_encoder_dataset(samples, *encoder);
    }
};

// May adjust config.dim: an imported file fixes the effective width.
EmbeddingSource make_source(CliConfig& config) {
    EmbeddingSource source;
    if (!config.embeddings.empty()) {
        source.imported =
            std::make_unique<ImportedEmbeddings>(import_embeddings(config.embeddings));
        if (source.imported->dim != static_cast<size_t>(config.dim)) {
            std::cerr << "note: using imported embedding dim " << source.imported->dim << "\n";
            config.dim = static_cast<int>(source.imported->dim);
        }
    } else {
        source.encoder = std::make_unique<GqaEncoder>(to_gqa_config(config));
    }
    return source;
}

// theta, capacity, bits and the LSH seed are fixed at store creation; only
// probe_radius is applied per invocation.
MemoryStore open_store(const CliConfig& config, const std::string& path, bool must_exist) {
    if (std::filesystem::exists(path)) {
        MemoryStore store = MemoryStore::load(path);
        if (store.dim() != static_cast<size_t>(config.dim)) {
            throw InputError("store dim " + std::to_string(store.dim()) +
                             " conflicts with configured dim " + std::to_string(config.dim));
        }
        store.set_probe_radius(config.probe_radius);
        return store;
    }
    if (must_exist) {
        throw InputError("cannot open store file: " + path);
    }
    return MemoryStore(to_memory_config(config));
}

void print_store_counters(const MemoryStore& store) {
    const StoreStats s = store.stats();
    std::cout << "hits_exact=" << s.hits_exact << " hits_similar=" << s.hits_similar
              << " misses=" << s.misses << " recomputes=" << s.recomputes
              << " evictions=" << s.evictions << " size=" << store.size() << "\n";
}

int cmd_ingest(const CliConfig& config, const std::string& input, const std::string& output) {
    std::vector<RawRecord> records = read_dataset_jsonl(input);
    const LeakLexicon lexicon = build_lexicon(config);
    for (RawRecord& rec : records) {
        rec.posts = filter_label_leakage(rec.posts, lexicon);
    }
    write_dataset_jsonl(output, records);
    std::cout << "ingested " << records.size() << " users -> " << output << "\n";
    return 0;
}

int cmd_embed(CliConfig config, const std::string& dataset_path, const std::string& store_path,
              const std::string& export_path) {
    const std::vector<UserSample> samples = parse_dataset(dataset_path, to_parse_options(config));
    const EmbeddingSource source = make_source(config);
    const EmbeddedDataset data = source.dataset(samples);
    MemoryStore store = open_store(config, store_path, false);

    size_t batches = 0;
    for (size_t u = 0; u < data.users.size(); ++u) {
        fetch_sequence(store, data, u);
        batches += data.users[u].keys.size();
    }
    store.save(store_path);

    std::cout << "embedded " << batches << " batches for " << data.users.size() << " users -> "
              << store_path << "\n";
    print_store_counters(store);

    if (!export_path.empty()) {
        std::map<std::string, std::vector<Embedding>> users;
        for (size_t u = 0; u < data.users.size(); ++u) {
            users[data.users[u].user_id] = fetch_sequence(store, data, u);
        }
        write_embeddings_jsonl(export_path, users);
        std::cout << "exported embeddings -> " << export_path << "\n";
    }
    return 0;
}

int cmd_train(CliConfig config, const std::string& dataset_path, const std::string& store_path) {
    const std::vector<UserSample> samples = parse_dataset(dataset_path, to_parse_options(config));
    const DatasetSplit split = split_dataset(samples, to_split_ratios(config), config.seed);
    const EmbeddingSource source = make_source(config);
    const EmbeddedDataset train_part = source.dataset(split.train);
    const EmbeddedDataset val_part = source.dataset(split.validation);
    const EmbeddedDataset test_part = source.dataset(split.test);
    MemoryStore store = open_store(config, store_path, false);

    const HeadConfig head_config = to_head_config(config);
    const RunConfig run_config = to_run_config(config);

    if (run_config.n_runs == 1) {
        const RunResult result =
            train_one_run(train_part, val_part, store, head_config, run_config);
        save_head(result.best_params, config.checkpoint_out);
        write_history_csv(config.history_out, result.history);
        char buf[128];
        std::snprintf(buf, sizeof buf, "best validation metric %.4f at epoch %d\n",
                      result.best_val_metric, result.best_epoch);
        std::cout << buf;
    } else {
        const MultiRunResult result =
            multi_run(train_part, val_part, test_part, store, head_config, run_config);
        save_head(result.best_run.best_params, config.checkpoint_out);
        write_history_csv(config.history_out, result.best_run.history);
        std::cout << "test metrics over " << run_config.n_runs << " runs (mean +- std):\n";
        for (const auto& [name, stat] : result.aggregated) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "  %-16s %.4f +- %.4f\n", name.c_str(), stat.mean,
                          stat.stddev);
            std::cout << buf;
        }
        std::cout << "best run index " << result.best_run_index << " (validation metric ";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", result.best_run.best_val_metric);
        std::cout << buf << ")\n";
    }
    store.save(store_path);
    std::cout << "checkpoint -> " << config.checkpoint_out << ", history -> "
              << config.history_out << "\n";
    return 0;
}

int cmd_eval(CliConfig config, const std::string& checkpoint_path,
             const std::string& dataset_path, const std::string& store_path) {
    const HeadParams params = load_head(checkpoint_path);
    const std::vector<UserSample> samples = parse_dataset(dataset_path, to_parse_options(config));
    const DatasetSplit split = split_dataset(samples, to_split_ratios(config), config.seed);

    const std::vector<UserSample>* part = nullptr;
    if (config.split == "train") {
        part = &split.train;
    } else if (config.split == "val") {
        part = &split.validation;
    } else if (config.split == "test") {
        part = &split.test;
    } else {
        throw InputError("config key 'split': expected train, val or test, got '" +
                         config.split + "'");
    }
    if (part->empty()) {
        throw InputError("selected split part '" + config.split + "' is empty");
    }

    const EmbeddingSource source = make_source(config);
    if (params.config.input_dim != config.dim) {
        throw InputError("checkpoint input dim " + std::to_string(params.config.input_dim) +
                         " does not match embedding dim " + std::to_string(config.dim));
    }
    const EmbeddedDataset data = source.dataset(*part);
    MemoryStore store = open_store(config, store_path, false);

    std::vector<std::vector<Embedding>> sequences;
    std::vector<MbtiLabel> labels;
    sequences.reserve(data.users.size());
    labels.reserve(data.users.size());
    for (size_t u = 0; u < data.users.size(); ++u) {
        sequences.push_back(fetch_sequence(store, data, u));
        labels.push_back(data.users[u].label);
    }

    const RunConfig run_config = to_run_config(config);
    const MetricsReport report = evaluate(params, sequences, labels, run_config.task);
    std::cout << report_text(report);

    std::ofstream out(config.report_out, std::ios::trunc);
    if (!out) {
        throw InputError("cannot open report file for writing: " + config.report_out);
    }
    out << report_json(report);
    if (!out) {
        throw InputError("write failed: " + config.report_out);
    }
    std::cout << "report -> " << config.report_out << "\n";
    return 0;
}

int cmd_cache_stats(const CliConfig& config, const std::string& store_path) {
    const MemoryStore store = open_store(config, store_path, true);
    char buf[160];
    std::snprintf(buf, sizeof buf, "size=%zu capacity=%zu dim=%zu bits=%d theta=%g\n",
                  store.size(), store.capacity(), store.dim(), store.index().bits(),
                  store.theta());
    std::cout << buf;
    print_store_counters(store);
    return 0;
}

// Replays a seeded synthetic trace against a fresh store. Items are fixed
// random directions; each op draws an item, perturbs it by sim.noise and
// asks the store for it. With sim.unique_keys every op uses a fresh key so
// only the probe path can hit; otherwise the item id is the key and the
// replay exercises pure exact-key LRU behavior.
int cmd_cache_simulate(const CliConfig& config) {
    MemoryStore store(to_memory_config(config));
    const size_t dim = static_cast<size_t>(config.dim);
    Rng rng(config.seed);

    auto item_vector = [&config, dim](uint64_t item) {
        const uint64_t parts[2] = {config.seed, item};
        Rng item_rng(fnv1a64(parts, sizeof parts));
        Embedding e;
        e.vector.resize(dim);
        for (double& v : e.vector) {
            v = item_rng.normal();
        }
        return e;
    };

    uint64_t hits = 0;
    for (uint64_t op = 0; op < config.sim_ops; ++op) {
        const uint64_t item = rng.bounded(config.sim_items);
        Embedding probe = item_vector(item);
        for (double& v : probe.vector) {
            v += config.sim_noise * rng.normal();
        }
        const uint64_t key = config.sim_unique_keys
                                 ? fnv1a64(&op, sizeof op, kFnvOffset ^ config.seed)
                                 : item;
        const Embedding* probe_ptr = config.sim_unique_keys ? &probe : nullptr;
        auto [embedding, outcome] =
            store.lookup_or_compute(key, probe_ptr, [&probe] { return probe; });
        (void)embedding;
        if (outcome != LookupOutcome::Recompute) {
            ++hits;
        }
    }

    char buf[96];
    std::snprintf(buf, sizeof buf, "ops=%llu hits=%llu hit_rate=%.6f\n",
                  static_cast<unsigned long long>(config.sim_ops),
                  static_cast<unsigned long long>(hits),
                  config.sim_ops > 0 ? static_cast<double>(hits) /
                                           static_cast<double>(config.sim_ops)
                                     : 0.0);
    std::cout << buf;
    print_store_counters(store);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"embedding memory and personality classification pipeline"};
    app.require_subcommand(1);
    app.footer(config_help());

    std::string config_file;
    std::vector<std::string> overrides;
    app.add_option("--config", config_file, "key=value config file");
    app.add_option("--set", overrides, "config override key=value (repeatable)")
        ->type_size(1)
        ->allow_extra_args(false)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    std::string input_path;
    std::string output_path;
    std::string dataset_path;
    std::string store_path;
    std::string export_path;
    std::string checkpoint_path;

    CLI::App* ingest = app.add_subcommand("ingest", "filter leak terms from a dataset");
    ingest->add_option("input", input_path, "dataset-JSONL input")->required();
    ingest->add_option("output", output_path, "filtered dataset-JSONL output")->required();
    ingest->fallthrough();

    CLI::App* embed = app.add_subcommand("embed", "embed all batches into a store file");
    embed->add_option("dataset", dataset_path, "ingested dataset-JSONL")->required();
    embed->add_option("store", store_path, "store file to create or extend")->required();
    embed->add_option("--export", export_path, "also write embedding-JSONL here");
    embed->fallthrough();

    CLI::App* train = app.add_subcommand("train", "train the output head");
    train->add_option("dataset", dataset_path, "ingested dataset-JSONL")->required();
    train->add_option("store", store_path, "store file to create or extend")->required();
    train->fallthrough();

    CLI::App* eval_cmd = app.add_subcommand("eval", "score a checkpoint on a dataset part");
    eval_cmd->add_option("checkpoint", checkpoint_path, "head checkpoint file")->required();
    eval_cmd->add_option("dataset", dataset_path, "ingested dataset-JSONL")->required();
    eval_cmd->add_option("store", store_path, "store file (created in memory if absent)")
        ->required();
    eval_cmd->fallthrough();

    CLI::App* cache = app.add_subcommand("cache", "inspect or simulate the embedding store");
    cache->require_subcommand(1);
    cache->fallthrough();
    CLI::App* cache_stats = cache->add_subcommand("stats", "print store header and counters");
    cache_stats->add_option("store", store_path, "store file")->required();
    cache_stats->fallthrough();
    CLI::App* cache_simulate =
        cache->add_subcommand("simulate", "replay a synthetic access trace");
    cache_simulate->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        CliConfig config;
        if (!config_file.empty()) {
            apply_config_file(config, config_file);
        }
        for (const std::string& entry : overrides) {
            apply_config_override(config, entry);
        }

        if (*ingest) {
            return cmd_ingest(config, input_path, output_path);
        }
        if (*embed) {
            return cmd_embed(config, dataset_path, store_path, export_path);
        }
        if (*train) {
            return cmd_train(config, dataset_path, store_path);
        }
        if (*eval_cmd) {
            return cmd_eval(config, checkpoint_path, dataset_path, store_path);
        }
        if (*cache_stats) {
            return cmd_cache_stats(config, store_path);
        }
        if (*cache_simulate) {
            return cmd_cache_simulate(config);
        }
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
