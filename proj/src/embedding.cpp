#include "ctsum/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ctsum/error.hpp"

namespace ctsum {

namespace {

std::vector<std::string> lower_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc) || uc >= 0x80) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::uint64_t seeded_fnv1a(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void check_finite(const Vector& v, std::string_view what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw ProviderError("non-finite embedding component for " + std::string(what));
    }
}

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("cosine_similarity: dimension " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

Vector centroid(std::span<const Vector> pool, std::span<const int> members) {
    if (members.empty()) return {};
    Vector out(pool[static_cast<std::size_t>(members.front())].size(), 0.0);
    for (int m : members) {
        const auto& v = pool[static_cast<std::size_t>(m)];
        if (v.size() != out.size()) throw DimensionError("centroid: mixed dimensions");
        for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
    }
    for (double& x : out) x /= static_cast<double>(members.size());
    return out;
}

Vector centroid(std::span<const Vector> vectors) {
    std::vector<int> all(vectors.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return centroid(vectors, all);
}

// ---------------------------------------------------------------------------

FileEmbeddingProvider::FileEmbeddingProvider(const std::filesystem::path& path) : path_(path.string()) {
    std::ifstream in(path);
    if (!in) throw ProviderError("cannot read embedding file: " + path_);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string key;
        Vector vec;
        try {
            auto record = nlohmann::json::parse(line);
            key = record.at("key").get<std::string>();
            vec = record.at("vector").get<Vector>();
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(path_ + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
        }
        check_finite(vec, key);
        if (!vectors_.emplace(key, std::move(vec)).second) {
            throw ProviderError(path_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
}

std::vector<Vector> FileEmbeddingProvider::embed(std::span<const EmbeddingRequest> requests) {
    std::vector<Vector> out;
    out.reserve(requests.size());
    for (const auto& req : requests) {
        auto it = vectors_.find(req.key);
        if (it == vectors_.end()) throw ProviderError("missing embedding for key '" + req.key + "'");
        out.push_back(it->second);
    }
    return out;
}

// ---------------------------------------------------------------------------

TfidfEmbeddingProvider::TfidfEmbeddingProvider(const Corpus& corpus, int dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
    if (dim < 2) throw InputError("builtin embedding dimension must be >= 2");
    for (const auto& topic : corpus) {
        std::unordered_map<std::string, int> df;
        for (const auto& doc : topic.documents) {
            std::unordered_set<std::string> seen;
            for (const auto& s : doc.sentences) {
                for (auto& tok : lower_tokens(s.text)) seen.insert(std::move(tok));
            }
            for (const auto& tok : seen) ++df[tok];
        }
        const double n = static_cast<double>(topic.documents.size());
        auto& table = idf_[topic.topic_id];
        for (const auto& [tok, count] : df) {
            table[tok] = std::log((1.0 + n) / (1.0 + count)) + 1.0;
        }
    }
}

Vector TfidfEmbeddingProvider::embed_text(std::string_view topic_id, std::string_view text) const {
    Vector v(static_cast<std::size_t>(dim_), 0.0);
    std::unordered_map<std::string, int> tf;
    for (auto& tok : lower_tokens(text)) ++tf[std::move(tok)];

    auto topic_it = idf_.find(topic_id);
    // Accumulate in a fixed token order so the float sums do not depend on
    // hash-map iteration order.
    std::vector<std::pair<std::string, int>> terms(tf.begin(), tf.end());
    std::sort(terms.begin(), terms.end());
    for (const auto& [tok, count] : terms) {
        double idf = 1.0;
        if (topic_it != idf_.end()) {
            auto it = topic_it->second.find(tok);
            if (it != topic_it->second.end()) idf = it->second;
        }
        auto bucket = seeded_fnv1a(tok, seed_) % static_cast<std::uint64_t>(dim_);
        v[bucket] += static_cast<double>(count) * idf;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm == 0.0) {
        v[0] = 1.0;
        return v;
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

std::vector<Vector> TfidfEmbeddingProvider::embed(std::span<const EmbeddingRequest> requests) {
    std::vector<Vector> out;
    out.reserve(requests.size());
    for (const auto& req : requests) out.push_back(embed_text(req.topic_id, req.text));
    return out;
}

// ---------------------------------------------------------------------------

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::string endpoint_url, int batch_size, int max_retries,
                                                 int timeout_seconds)
    : endpoint_(std::move(endpoint_url)),
      batch_size_(batch_size),
      max_retries_(max_retries),
      timeout_seconds_(timeout_seconds) {
    if (batch_size_ < 1) throw InputError("remote batch size must be >= 1");
    auto scheme = endpoint_.find("://");
    if (scheme == std::string::npos) throw InputError("remote endpoint needs a scheme: " + endpoint_);
    auto slash = endpoint_.find('/', scheme + 3);
    host_ = endpoint_.substr(0, slash);
    path_prefix_ = slash == std::string::npos ? "" : endpoint_.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::vector<Vector> RemoteEmbeddingProvider::embed_batch(std::span<const EmbeddingRequest> batch) {
    nlohmann::json body;
    body["texts"] = nlohmann::json::array();
    for (const auto& req : batch) body["texts"].push_back(req.text);
    const std::string payload = body.dump();

    httplib::Client client(host_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);

    std::string last_error;
    for (int attempt = 0; attempt <= max_retries_; ++attempt) {
        ++attempts_;
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50 << std::min(attempt, 5)));
        auto res = client.Post(path_prefix_ + "/embed", payload, "application/json");
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ProviderError("embedding service returned status " + std::to_string(res->status));
        }
        std::vector<Vector> vectors;
        try {
            vectors = nlohmann::json::parse(res->body).at("vectors").get<std::vector<Vector>>();
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(std::string("malformed embedding response: ") + e.what());
        }
        if (vectors.size() != batch.size()) {
            throw ProviderError("embedding service returned " + std::to_string(vectors.size()) +
                                " vectors for " + std::to_string(batch.size()) + " texts");
        }
        for (std::size_t i = 0; i < vectors.size(); ++i) check_finite(vectors[i], batch[i].key);
        return vectors;
    }
    throw ProviderError("embedding service " + endpoint_ + " unavailable after " +
                        std::to_string(max_retries_ + 1) + " attempts (" + last_error + ")");
}

std::vector<Vector> RemoteEmbeddingProvider::embed(std::span<const EmbeddingRequest> requests) {
    std::vector<Vector> out;
    out.reserve(requests.size());
    for (std::size_t start = 0; start < requests.size(); start += static_cast<std::size_t>(batch_size_)) {
        auto count = std::min(static_cast<std::size_t>(batch_size_), requests.size() - start);
        auto part = embed_batch(requests.subspan(start, count));
        std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(std::string_view spec, const Corpus& corpus, std::uint64_t seed) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw InputError("embedder spec must be kind:value, got " + std::string(spec));
    auto kind = spec.substr(0, colon);
    std::string value(spec.substr(colon + 1));
    if (kind == "file") return std::make_unique<FileEmbeddingProvider>(value);
    if (kind == "remote") return std::make_unique<RemoteEmbeddingProvider>(value);
    if (kind == "builtin") {
        int dim = 0;
        try {
            dim = std::stoi(value);
        } catch (const std::exception&) {
            throw InputError("builtin embedder needs an integer dimension, got " + value);
        }
        return std::make_unique<TfidfEmbeddingProvider>(corpus, dim, seed);
    }
    throw InputError("unknown embedder kind: " + std::string(kind));
}

// ---------------------------------------------------------------------------

EmbeddedTopic assemble_topic(Topic topic, std::vector<Vector> sentence_vectors) {
    EmbeddedTopic et;
    et.topic = std::move(topic);
    for (const auto& doc : et.topic.documents) {
        std::vector<int> ids;
        for (const auto& s : doc.sentences) {
            ids.push_back(static_cast<int>(et.sentences.size()));
            et.sentences.push_back({doc.doc_index, s.sent_index});
        }
        et.doc_sentences.push_back(std::move(ids));
    }
    if (sentence_vectors.size() != et.sentences.size()) {
        throw ProviderError("expected " + std::to_string(et.sentences.size()) + " sentence vectors, got " +
                            std::to_string(sentence_vectors.size()));
    }
    et.dim = sentence_vectors.empty() ? 0 : sentence_vectors.front().size();
    for (std::size_t i = 0; i < sentence_vectors.size(); ++i) {
        const auto& ref = et.sentences[i];
        auto key = sentence_key(et.topic.topic_id, ref.doc_index, ref.sent_index);
        if (sentence_vectors[i].size() != et.dim || et.dim == 0) {
            throw ProviderError("dimension mismatch for " + key + ": got " +
                                std::to_string(sentence_vectors[i].size()) + ", expected " + std::to_string(et.dim));
        }
        check_finite(sentence_vectors[i], key);
    }
    et.sentence_vectors = std::move(sentence_vectors);
    for (const auto& ids : et.doc_sentences) {
        et.document_vectors.push_back(centroid(et.sentence_vectors, ids));
    }
    return et;
}

EmbeddedTopic embed_topic(const Topic& topic, EmbeddingProvider& provider) {
    std::vector<EmbeddingRequest> requests;
    for (const auto& doc : topic.documents) {
        for (const auto& s : doc.sentences) {
            requests.push_back({topic.topic_id, sentence_key(topic.topic_id, doc.doc_index, s.sent_index), s.text});
        }
    }
    return assemble_topic(topic, provider.embed(requests));
}

EmbeddedCorpus embed_corpus(const Corpus& corpus, EmbeddingProvider& provider) {
    EmbeddedCorpus out;
    out.reserve(corpus.size());
    for (const auto& topic : corpus) {
        out.push_back(embed_topic(topic, provider));
        if (out.front().dim != out.back().dim) {
            throw ProviderError("dimension mismatch between topics '" + out.front().topic.topic_id + "' and '" +
                                topic.topic_id + "'");
        }
    }
    return out;
}

}  // namespace ctsum
