#include "persona/dataset.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "persona/error.hpp"
#include "persona/rng.hpp"
#include "persona/tokenize.hpp"

namespace persona {

namespace {

std::string line_prefix(const std::string& path, size_t line_no) {
    return path + ":" + std::to_string(line_no) + ": ";
}

RawRecord parse_record(const std::string& line, const std::string& path, size_t line_no) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(line_prefix(path, line_no) + "malformed record: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("user_id") || !doc.contains("posts") ||
        !doc.contains("label")) {
        throw InputError(line_prefix(path, line_no) +
                         "record must have user_id, posts and label fields");
    }
    RawRecord rec;
    try {
        rec.user_id = doc.at("user_id").get<std::string>();
        rec.posts = doc.at("posts").get<std::vector<std::string>>();
        rec.label = doc.at("label").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(line_prefix(path, line_no) + "bad field type: " + e.what());
    }
    try {
        parse_type_code(rec.label);
    } catch (const InputError& e) {
        throw InputError(line_prefix(path, line_no) + e.what());
    }
    return rec;
}

}  // namespace

std::vector<RawRecord> read_dataset_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open dataset file: " + path);
    }
    std::vector<RawRecord> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        records.push_back(parse_record(line, path, line_no));
    }
    return records;
}

void write_dataset_jsonl(const std::string& path, const std::vector<RawRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw InputError("cannot open output file for writing: " + path);
    }
    for (const RawRecord& rec : records) {
        nlohmann::ordered_json doc;
        doc["user_id"] = rec.user_id;
        doc["posts"] = rec.posts;
        doc["label"] = rec.label;
        out << doc.dump() << "\n";
    }
    if (!out) {
        throw InputError("write failed: " + path);
    }
}

std::vector<UserSample> parse_dataset(const std::string& path, const ParseOptions& options) {
    if (options.posts_per_batch < 1) {
        throw InputError("posts_per_batch must be >= 1");
    }
    std::vector<RawRecord> records = read_dataset_jsonl(path);
    std::vector<UserSample> samples;
    samples.reserve(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        const RawRecord& rec = records[i];
        UserSample sample;
        sample.user_id = rec.user_id;
        sample.label = parse_type_code(rec.label);

        std::vector<uint32_t> current;
        int posts_in_batch = 0;
        for (const std::string& post : rec.posts) {
            std::vector<uint32_t> ids = tokenize(post, options.vocab_bits);
            if (ids.empty()) {
                continue;
            }
            current.insert(current.end(), ids.begin(), ids.end());
            if (++posts_in_batch == options.posts_per_batch) {
                sample.batches.push_back(std::move(current));
                current.clear();
                posts_in_batch = 0;
            }
        }
        if (!current.empty()) {
            sample.batches.push_back(std::move(current));
        }
        if (sample.batches.empty()) {
            // Line numbers here count records (blank lines were skipped but the
            // dataset files we write never contain them).
            throw InputError(line_prefix(path, i + 1) + "user \"" + rec.user_id +
                             "\" has no non-empty posts after preprocessing");
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

LeakLexicon default_leak_lexicon() {
    LeakLexicon lexicon;
    for (int idx = 0; idx < 16; ++idx) {
        lexicon.insert(fold_case(type_code(type16_label(idx))));
    }
    for (const char* word : {"extravert", "introvert", "sensing", "intuition", "thinking",
                             "feeling", "judging", "perceiving"}) {
        lexicon.insert(word);
    }
    return lexicon;
}

std::vector<std::string> filter_label_leakage(const std::vector<std::string>& posts,
                                              const LeakLexicon& lexicon) {
    LeakLexicon folded;
    folded.reserve(lexicon.size());
    for (const std::string& term : lexicon) {
        folded.insert(fold_case(term));
    }
    std::vector<std::string> filtered;
    filtered.reserve(posts.size());
    for (const std::string& post : posts) {
        std::string kept;
        for (const std::string& token : split_tokens(post)) {
            if (folded.count(fold_case(token)) != 0) {
                continue;
            }
            if (!kept.empty()) {
                kept += ' ';
            }
            kept += token;
        }
        filtered.push_back(std::move(kept));
    }
    return filtered;
}

DatasetSplit split_dataset(const std::vector<UserSample>& samples, const SplitRatios& ratios,
                           uint64_t seed) {
    if (samples.empty()) {
        throw InputError("split_dataset: empty input");
    }
    double sum = ratios.train + ratios.validation + ratios.test;
    if (std::fabs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "split ratios must sum to 1, got " << sum;
        throw InputError(msg.str());
    }
    std::vector<size_t> order(samples.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    const size_t n = samples.size();
    const size_t train_end = static_cast<size_t>(std::floor(static_cast<double>(n) * ratios.train));
    const size_t val_end = static_cast<size_t>(
        std::floor(static_cast<double>(n) * (ratios.train + ratios.validation)));

    DatasetSplit split;
    split.seed = seed;
    split.ratios = ratios;
    for (size_t i = 0; i < n; ++i) {
        const UserSample& s = samples[order[i]];
        if (i < train_end) {
            split.train.push_back(s);
        } else if (i < val_end) {
            split.validation.push_back(s);
        } else {
            split.test.push_back(s);
        }
    }
    return split;
}

}  // namespace persona
