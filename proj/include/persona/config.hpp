#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "persona/dataset.hpp"
#include "persona/encoder.hpp"
#include "persona/head.hpp"
#include "persona/memory.hpp"
#include "persona/trainer.hpp"

namespace persona {

// Flat key=value configuration for the command-line tool. Every key has a
// documented default; unknown keys are a startup error.
struct CliConfig {
    int dim = 64;             // embedding width
    int posts_per_batch = 8;  // posts grouped into one batch at parse time
    int vocab_bits = 16;      // token hash width, in [8, 24]
    int seq_cap = 256;        // tokens per batch before truncation

    int gqa_heads = 4;
    int gqa_groups = 2;
    int gqa_layers = 2;

    double theta = 0.98;    // similarity reuse gate; > 1 disables the path
    uint64_t capacity = 0;  // max cached embeddings, 0 = unlimited
    int bits = 16;          // LSH hash bits
    int probe_radius = 1;   // Hamming search radius around the probe bucket

    std::string head_kind = "gru";  // gru | meanpool
    int head_hidden = 512;
    int head_layers = 3;
    double head_dropout = 0.2;

    double lr = 0.001;
    int epochs = 50;
    int patience = 10;
    int minibatch = 32;
    uint64_t seed = 1;
    int n_runs = 10;
    std::string task = "dims";  // dims | type16

    std::string split = "test";  // dataset part scored by eval: train | val | test
    double split_train = 0.6;
    double split_val = 0.2;
    double split_test = 0.2;

    std::string lexicon;     // extra leak terms file, one per line; "" = defaults only
    std::string embeddings;  // embedding-JSONL to import instead of the toy encoder

    std::string checkpoint_out = "head.ckpt";
    std::string history_out = "history.csv";
    std::string report_out = "report.json";

    uint64_t sim_ops = 1000;   // cache simulate: operations per replay
    uint64_t sim_items = 64;   // distinct logical items in the trace
    double sim_noise = 0.01;   // probe perturbation scale
    bool sim_unique_keys = false;  // fresh key per op, exercises the probe path
};

struct ConfigKey {
    const char* name;
    const char* doc;
    std::function<void(CliConfig&, const std::string&)> apply;
};

// All recognized keys with their one-line docs, in listing order.
const std::vector<ConfigKey>& config_keys();

// Sets one key; throws InputError for unknown keys or unparsable values.
void apply_config_entry(CliConfig& config, const std::string& key, const std::string& value);

// "key=value" form used by command-line overrides.
void apply_config_override(CliConfig& config, const std::string& entry);

// key=value file, one entry per line; # starts a comment.
void apply_config_file(CliConfig& config, const std::string& path);

// Human-readable key listing with defaults.
std::string config_help();

// Typed views; these validate enum-like string fields and ranges.
GqaConfig to_gqa_config(const CliConfig& config);
MemoryConfig to_memory_config(const CliConfig& config);
HeadConfig to_head_config(const CliConfig& config);
RunConfig to_run_config(const CliConfig& config);
ParseOptions to_parse_options(const CliConfig& config);
SplitRatios to_split_ratios(const CliConfig& config);

}  // namespace persona
