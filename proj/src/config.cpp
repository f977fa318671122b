#include "persona/config.hpp"

#include <cstdlib>
#include <fstream>

#include "persona/error.hpp"

namespace persona {

namespace {

long long parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        throw InputError("config key '" + key + "': not an integer: '" + value + "'");
    }
    return v;
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
    if (!value.empty() && value[0] == '-') {
        throw InputError("config key '" + key + "': must be non-negative: '" + value + "'");
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        throw InputError("config key '" + key + "': not an integer: '" + value + "'");
    }
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        throw InputError("config key '" + key + "': not a number: '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    throw InputError("config key '" + key + "': expected true or false: '" + value + "'");
}

std::vector<ConfigKey> build_keys() {
    std::vector<ConfigKey> keys;
    auto add = [&keys](const char* name, const char* doc,
                       std::function<void(CliConfig&, const std::string&)> apply) {
        keys.push_back({name, doc, std::move(apply)});
    };
    auto int_key = [&add](const char* name, const char* doc, int CliConfig::*field) {
        add(name, doc, [name, field](CliConfig& c, const std::string& v) {
            c.*field = static_cast<int>(parse_int(name, v));
        });
    };
    auto u64_key = [&add](const char* name, const char* doc, uint64_t CliConfig::*field) {
        add(name, doc, [name, field](CliConfig& c, const std::string& v) {
            c.*field = parse_u64(name, v);
        });
    };
    auto double_key = [&add](const char* name, const char* doc, double CliConfig::*field) {
        add(name, doc, [name, field](CliConfig& c, const std::string& v) {
            c.*field = parse_double(name, v);
        });
    };
    auto string_key = [&add](const char* name, const char* doc, std::string CliConfig::*field) {
        add(name, doc, [field](CliConfig& c, const std::string& v) { c.*field = v; });
    };
    auto bool_key = [&add](const char* name, const char* doc, bool CliConfig::*field) {
        add(name, doc, [name, field](CliConfig& c, const std::string& v) {
            c.*field = parse_bool(name, v);
        });
    };

    int_key("dim", "embedding width (default 64)", &CliConfig::dim);
    int_key("posts_per_batch", "posts grouped per batch at parse time (default 8)",
            &CliConfig::posts_per_batch);
    int_key("vocab_bits", "token hash width in [8, 24] (default 16)", &CliConfig::vocab_bits);
    int_key("seq_cap", "max tokens per batch before truncation (default 256)",
            &CliConfig::seq_cap);
    int_key("gqa.heads", "encoder query heads (default 4)", &CliConfig::gqa_heads);
    int_key("gqa.groups", "encoder query groups, divides heads (default 2)",
            &CliConfig::gqa_groups);
    int_key("gqa.layers", "encoder depth (default 2)", &CliConfig::gqa_layers);
    double_key("theta", "similarity reuse threshold; > 1 disables (default 0.98)",
               &CliConfig::theta);
    u64_key("capacity", "max cached embeddings, 0 = unlimited (default 0)",
            &CliConfig::capacity);
    int_key("bits", "LSH hash bits in [1, 64] (default 16)", &CliConfig::bits);
    int_key("probe_radius", "Hamming bucket search radius (default 1)",
            &CliConfig::probe_radius);
    string_key("head.kind", "output head: gru | meanpool (default gru)", &CliConfig::head_kind);
    int_key("head.hidden", "head hidden width (default 512)", &CliConfig::head_hidden);
    int_key("head.layers", "stacked head layers (default 3)", &CliConfig::head_layers);
    double_key("head.dropout", "dropout between stacked layers (default 0.2)",
               &CliConfig::head_dropout);
    double_key("lr", "Adam learning rate (default 0.001)", &CliConfig::lr);
    int_key("epochs", "max training epochs (default 50)", &CliConfig::epochs);
    int_key("patience", "non-improving epochs tolerated (default 10)", &CliConfig::patience);
    int_key("minibatch", "users per optimizer step (default 32)", &CliConfig::minibatch);
    u64_key("seed", "base seed for all randomness (default 1)", &CliConfig::seed);
    int_key("n_runs", "independent runs to aggregate (default 10)", &CliConfig::n_runs);
    string_key("task", "training task: dims | type16 (default dims)", &CliConfig::task);
    string_key("split", "part scored by eval: train | val | test (default test)",
               &CliConfig::split);
    double_key("split.train", "training fraction (default 0.6)", &CliConfig::split_train);
    double_key("split.val", "validation fraction (default 0.2)", &CliConfig::split_val);
    double_key("split.test", "test fraction (default 0.2)", &CliConfig::split_test);
    string_key("lexicon", "extra leak-term file, one per line (default none)",
               &CliConfig::lexicon);
    string_key("embeddings", "embedding-JSONL to import instead of the encoder (default none)",
               &CliConfig::embeddings);
    string_key("checkpoint_out", "checkpoint output path (default head.ckpt)",
               &CliConfig::checkpoint_out);
    string_key("history_out", "history CSV output path (default history.csv)",
               &CliConfig::history_out);
    string_key("report_out", "report JSON output path (default report.json)",
               &CliConfig::report_out);
    u64_key("sim.ops", "cache simulate: operations (default 1000)", &CliConfig::sim_ops);
    u64_key("sim.items", "cache simulate: distinct items (default 64)", &CliConfig::sim_items);
    double_key("sim.noise", "cache simulate: probe noise scale (default 0.01)",
               &CliConfig::sim_noise);
    bool_key("sim.unique_keys", "cache simulate: fresh key per op (default false)",
             &CliConfig::sim_unique_keys);
    return keys;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = build_keys();
    return keys;
}

void apply_config_entry(CliConfig& config, const std::string& key, const std::string& value) {
    for (const ConfigKey& k : config_keys()) {
        if (key == k.name) {
            k.apply(config, value);
            return;
        }
    }
    throw InputError("unknown config key: '" + key + "'");
}

void apply_config_override(CliConfig& config, const std::string& entry) {
    const size_t eq = entry.find('=');
    if (eq == std::string::npos) {
        throw InputError("config override must be key=value: '" + entry + "'");
    }
    apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
}

void apply_config_file(CliConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open config file: " + path);
    }
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        // Trim surrounding whitespace.
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const size_t last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError(path + ":" + std::to_string(line_no) +
                             ": expected key=value, got '" + line + "'");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const size_t key_end = key.find_last_not_of(" \t");
        key = key_end == std::string::npos ? std::string() : key.substr(0, key_end + 1);
        const size_t value_begin = value.find_first_not_of(" \t");
        value = value_begin == std::string::npos ? std::string() : value.substr(value_begin);
        try {
            apply_config_entry(config, key, value);
        } catch (const InputError& e) {
            throw InputError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::string config_help() {
    std::string out = "config keys (key=value):\n";
    for (const ConfigKey& k : config_keys()) {
        out += "  ";
        out += k.name;
        size_t pad = std::string(k.name).size();
        while (pad < 18) {
            out += ' ';
            ++pad;
        }
        out += k.doc;
        out += '\n';
    }
    return out;
}

GqaConfig to_gqa_config(const CliConfig& config) {
    GqaConfig gqa;
    gqa.dim = config.dim;
    gqa.heads = config.gqa_heads;
    gqa.groups = config.gqa_groups;
    gqa.layers = config.gqa_layers;
    gqa.seq_cap = config.seq_cap;
    gqa.seed = config.seed;
    return gqa;
}

MemoryConfig to_memory_config(const CliConfig& config) {
    MemoryConfig mem;
    mem.dim = static_cast<size_t>(config.dim);
    mem.bits = config.bits;
    mem.lsh_seed = config.seed;
    mem.capacity = config.capacity;
    mem.theta = config.theta;
    mem.probe_radius = config.probe_radius;
    return mem;
}

HeadConfig to_head_config(const CliConfig& config) {
    HeadConfig head;
    if (config.head_kind == "gru") {
        head.kind = HeadKind::gru;
    } else if (config.head_kind == "meanpool") {
        head.kind = HeadKind::meanpool;
    } else {
        throw InputError("config key 'head.kind': expected gru or meanpool, got '" +
                         config.head_kind + "'");
    }
    head.input_dim = config.dim;
    head.hidden_dim = config.head_hidden;
    head.layers = config.head_layers;
    head.dropout_p = config.head_dropout;
    head.seed = config.seed;
    return head;
}

RunConfig to_run_config(const CliConfig& config) {
    RunConfig run;
    run.epochs = config.epochs;
    run.minibatch = config.minibatch;
    run.seed = config.seed;
    if (config.task == "dims") {
        run.task = TrainTask::dims;
    } else if (config.task == "type16") {
        run.task = TrainTask::type16;
    } else {
        throw InputError("config key 'task': expected dims or type16, got '" + config.task +
                         "'");
    }
    run.patience = config.patience;
    run.n_runs = config.n_runs;
    run.adam.lr = config.lr;
    return run;
}

ParseOptions to_parse_options(const CliConfig& config) {
    ParseOptions options;
    options.posts_per_batch = config.posts_per_batch;
    options.vocab_bits = config.vocab_bits;
    return options;
}

SplitRatios to_split_ratios(const CliConfig& config) {
    SplitRatios ratios;
    ratios.train = config.split_train;
    ratios.validation = config.split_val;
    ratios.test = config.split_test;
    return ratios;
}

}  // namespace persona
