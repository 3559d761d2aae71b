#pragma once

// Shared helpers for the test suites: hand-built embedded topics, random
// point sets, temporary directories and the planted-cluster corpus
// generator.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ctsum/corpus.hpp"
#include "ctsum/embedding.hpp"

namespace ctsum::testing {

/// Topic whose sentence i of document d has text `words` copies of a token
/// and the given vector.
inline EmbeddedTopic topic_from_vectors(const std::vector<std::vector<Vector>>& docs, int words_per_sentence = 4,
                                        std::string topic_id = "t") {
    std::vector<std::pair<std::string, std::string>> raw;
    std::vector<Vector> flat;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::string text;
        for (std::size_t s = 0; s < docs[d].size(); ++s) {
            for (int w = 0; w < words_per_sentence; ++w) {
                text += "d" + std::to_string(d) + "s" + std::to_string(s) + (w + 1 == words_per_sentence ? ". " : " ");
            }
            flat.push_back(docs[d][s]);
        }
        raw.emplace_back("doc" + std::to_string(d), text);
    }
    return assemble_topic(make_topic(std::move(topic_id), raw), std::move(flat));
}

inline std::vector<Vector> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Vector> out(n, Vector(dim));
    for (auto& p : out) {
        for (double& x : p) x = u(rng);
    }
    return out;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("ctsum_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Topics with three planted document clusters. Every document states the
/// topic's common fact and its cluster's fact, surrounded by filler drawn
/// from a cluster-specific vocabulary. The reference summary is the common
/// fact followed by the three cluster facts.
struct PlantedOptions {
    int topics = 50;
    int docs_per_cluster = 3;
    int fact_words = 8;
    int filler_sentences = 4;
    int filler_words = 10;
    int cluster_vocab = 40;
    int noise_words = 2;
    std::uint64_t seed = 2024;
};

inline Corpus planted_corpus(const PlantedOptions& opt = {}) {
    std::mt19937_64 rng(opt.seed);
    auto word = [&](std::size_t len) {
        static const std::string consonants = "bcdfghklmnprstvz";
        static const std::string vowels = "aeiou";
        std::string w;
        for (std::size_t i = 0; i < len; ++i) {
            w += (i % 2 == 0) ? consonants[rng() % consonants.size()] : vowels[rng() % vowels.size()];
        }
        return w;
    };
    auto words = [&](int n) {
        std::vector<std::string> out;
        for (int i = 0; i < n; ++i) out.push_back(word(5 + rng() % 4));
        return out;
    };
    auto join = [](const std::vector<std::string>& ws) {
        std::string s;
        for (const auto& w : ws) s += (s.empty() ? "" : " ") + w;
        return s;
    };
    auto sentence = [&](std::vector<std::string> ws) {
        auto s = join(ws);
        s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        return s + ".";
    };

    Corpus corpus;
    for (int t = 0; t < opt.topics; ++t) {
        const auto common = words(opt.fact_words);
        std::vector<std::vector<std::string>> facts, vocab;
        for (int c = 0; c < 3; ++c) {
            facts.push_back(words(opt.fact_words));
            vocab.push_back(words(opt.cluster_vocab));
        }
        const auto general = words(opt.cluster_vocab);

        auto noisy = [&](std::vector<std::string> ws, const std::vector<std::string>& pool) {
            for (int i = 0; i < opt.noise_words; ++i) {
                ws.insert(ws.begin() + static_cast<long>(rng() % (ws.size() + 1)), pool[rng() % pool.size()]);
            }
            return ws;
        };

        std::vector<std::pair<std::string, std::string>> docs;
        for (int c = 0; c < 3; ++c) {
            for (int d = 0; d < opt.docs_per_cluster; ++d) {
                std::vector<std::string> sentences;
                sentences.push_back(sentence(noisy(common, general)));
                sentences.push_back(sentence(noisy(facts[static_cast<std::size_t>(c)], vocab[static_cast<std::size_t>(c)])));
                for (int f = 0; f < opt.filler_sentences; ++f) {
                    std::vector<std::string> ws;
                    for (int w = 0; w < opt.filler_words; ++w) {
                        const auto& pool = (rng() % 3 == 0) ? general : vocab[static_cast<std::size_t>(c)];
                        ws.push_back(pool[rng() % pool.size()]);
                    }
                    sentences.push_back(sentence(ws));
                }
                std::string text;
                for (const auto& s : sentences) text += s + " ";
                docs.emplace_back("c" + std::to_string(c) + "_d" + std::to_string(d), text);
            }
        }
        std::string reference = sentence(common);
        for (const auto& f : facts) reference += " " + sentence(f);
        char id[16];
        std::snprintf(id, sizeof id, "topic%03d", t);
        corpus.push_back(make_topic(id, docs, {reference}));
    }
    return corpus;
}

}  // namespace ctsum::testing
