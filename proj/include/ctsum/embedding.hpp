#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctsum/corpus.hpp"

namespace ctsum {

using Vector = std::vector<double>;

/// dot(a,b) / (|a||b|), or 0 when either norm is 0. Throws DimensionError.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Componentwise mean of `pool[i]` for i in `members`.
Vector centroid(std::span<const Vector> pool, std::span<const int> members);
Vector centroid(std::span<const Vector> vectors);

struct EmbeddingRequest {
    std::string topic_id;
    std::string key;
    std::string text;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    /// One vector per request, in request order.
    virtual std::vector<Vector> embed(std::span<const EmbeddingRequest> requests) = 0;
    virtual std::string name() const = 0;
};

/// Precomputed vectors, one JSON record per line:
///   {"key": "<topic_id>/d<doc_index>/s<sent_index>", "vector": [...]}
class FileEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit FileEmbeddingProvider(const std::filesystem::path& path);

    std::vector<Vector> embed(std::span<const EmbeddingRequest> requests) override;
    std::string name() const override { return "file:" + path_; }
    std::size_t size() const { return vectors_.size(); }

private:
    std::string path_;
    std::unordered_map<std::string, Vector> vectors_;
};

/// Self-contained hashed TF-IDF embedding. Lower-cased alphanumeric tokens
/// are hashed (seeded FNV-1a) into `dim` buckets, weighted by term frequency
/// times smoothed inverse document frequency over the topic's documents,
/// and L2-normalised. Sentences without tokens map to e1.
class TfidfEmbeddingProvider final : public EmbeddingProvider {
public:
    TfidfEmbeddingProvider(const Corpus& corpus, int dim, std::uint64_t seed);

    std::vector<Vector> embed(std::span<const EmbeddingRequest> requests) override;
    std::string name() const override { return "builtin:" + std::to_string(dim_); }
    int dim() const { return dim_; }

    Vector embed_text(std::string_view topic_id, std::string_view text) const;

private:
    int dim_;
    std::uint64_t seed_;
    // topic_id -> (token -> idf)
    std::map<std::string, std::unordered_map<std::string, double>, std::less<>> idf_;
};

/// Client for a sidecar sentence encoder:
///   POST <endpoint>/embed  {"texts": [...]}  ->  {"vectors": [[...], ...]}
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(std::string endpoint_url, int batch_size = 64,
                                     int max_retries = 3, int timeout_seconds = 30);

    std::vector<Vector> embed(std::span<const EmbeddingRequest> requests) override;
    std::string name() const override { return "remote:" + endpoint_; }

    int attempts_made() const { return attempts_; }

private:
    std::vector<Vector> embed_batch(std::span<const EmbeddingRequest> batch);

    std::string endpoint_;
    std::string host_;
    std::string path_prefix_;
    int batch_size_;
    int max_retries_;
    int timeout_seconds_;
    int attempts_ = 0;
};

/// "file:PATH", "builtin:DIM" or "remote:URL".
std::unique_ptr<EmbeddingProvider> make_provider(std::string_view spec, const Corpus& corpus,
                                                 std::uint64_t seed);

/// Per-topic vectors. Sentences are numbered in a flat order (document
/// by document, then by sentence); document vectors are means of their
/// sentence vectors.
struct EmbeddedTopic {
    struct SentenceRef {
        int doc_index;
        int sent_index;
    };

    Topic topic;
    std::size_t dim = 0;
    std::vector<SentenceRef> sentences;
    std::vector<Vector> sentence_vectors;
    std::vector<Vector> document_vectors;
    std::vector<std::vector<int>> doc_sentences;

    const Sentence& sentence(int flat) const {
        const auto& ref = sentences[static_cast<std::size_t>(flat)];
        return topic.documents[static_cast<std::size_t>(ref.doc_index)]
            .sentences[static_cast<std::size_t>(ref.sent_index)];
    }
    const Document& document_of(int flat) const {
        return topic.documents[static_cast<std::size_t>(sentences[static_cast<std::size_t>(flat)].doc_index)];
    }
};

using EmbeddedCorpus = std::vector<EmbeddedTopic>;

/// Builds an embedded topic from vectors already computed for every
/// sentence (flat order). Throws ProviderError on count or dimension
/// mismatch, or non-finite components.
EmbeddedTopic assemble_topic(Topic topic, std::vector<Vector> sentence_vectors);

EmbeddedTopic embed_topic(const Topic& topic, EmbeddingProvider& provider);
EmbeddedCorpus embed_corpus(const Corpus& corpus, EmbeddingProvider& provider);

}  // namespace ctsum
