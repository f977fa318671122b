#include "persona/embedding_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "persona/error.hpp"

namespace persona {

namespace {

std::string line_prefix(const std::string& path, size_t line_no) {
    return path + ":" + std::to_string(line_no) + ": ";
}

}  // namespace

ImportedEmbeddings import_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open embeddings file: " + path);
    }

    struct IndexedVector {
        int64_t batch_idx;
        Embedding embedding;
    };
    std::map<std::string, std::vector<IndexedVector>> pending;

    ImportedEmbeddings result;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(line_prefix(path, line_no) + "malformed record: " + e.what());
        }
        if (!doc.is_object() || !doc.contains("user_id") || !doc.contains("batch_idx") ||
            !doc.contains("vector")) {
            throw InputError(line_prefix(path, line_no) +
                             "record must have user_id, batch_idx and vector fields");
        }
        std::string user_id;
        int64_t batch_idx = 0;
        Embedding emb;
        try {
            user_id = doc.at("user_id").get<std::string>();
            batch_idx = doc.at("batch_idx").get<int64_t>();
            emb.vector = doc.at("vector").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw InputError(line_prefix(path, line_no) + "bad field type: " + e.what());
        }
        if (batch_idx < 0) {
            throw InputError(line_prefix(path, line_no) + "batch_idx must be non-negative");
        }
        if (emb.vector.empty()) {
            throw InputError(line_prefix(path, line_no) + "vector is empty");
        }
        for (double v : emb.vector) {
            if (!std::isfinite(v)) {
                throw InputError(line_prefix(path, line_no) + "vector has a non-finite value");
            }
        }
        if (result.dim == 0) {
            result.dim = emb.vector.size();
        } else if (emb.vector.size() != result.dim) {
            throw InputError(line_prefix(path, line_no) + "vector dim " +
                             std::to_string(emb.vector.size()) + " differs from earlier dim " +
                             std::to_string(result.dim));
        }
        auto& list = pending[user_id];
        for (const IndexedVector& iv : list) {
            if (iv.batch_idx == batch_idx) {
                throw InputError(line_prefix(path, line_no) + "duplicate batch_idx " +
                                 std::to_string(batch_idx) + " for user \"" + user_id + "\"");
            }
        }
        list.push_back({batch_idx, std::move(emb)});
    }

    for (auto& [user_id, list] : pending) {
        std::sort(list.begin(), list.end(),
                  [](const IndexedVector& a, const IndexedVector& b) {
                      return a.batch_idx < b.batch_idx;
                  });
        std::vector<Embedding>& out = result.users[user_id];
        out.reserve(list.size());
        for (IndexedVector& iv : list) {
            out.push_back(std::move(iv.embedding));
        }
    }
    return result;
}

void write_embeddings_jsonl(const std::string& path,
                            const std::map<std::string, std::vector<Embedding>>& users) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw InputError("cannot open output file for writing: " + path);
    }
    for (const auto& [user_id, list] : users) {
        for (size_t i = 0; i < list.size(); ++i) {
            nlohmann::ordered_json doc;
            doc["user_id"] = user_id;
            doc["batch_idx"] = i;
            doc["vector"] = list[i].vector;
            out << doc.dump() << "\n";
        }
    }
    if (!out) {
        throw InputError("write failed: " + path);
    }
}

}  // namespace persona
