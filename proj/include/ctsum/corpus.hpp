#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ctsum {

struct Sentence {
    std::string text;
    int sent_index = 0;   // 0-based within the document
    int position = 1;     // 1-based, used by the position score
    int word_count = 0;
    int byte_length = 0;
};

struct Document {
    std::string doc_id;
    int doc_index = 0;
    std::vector<Sentence> sentences;
};

struct Topic {
    std::string topic_id;
    std::vector<Document> documents;
    std::vector<std::string> references;

    std::size_t sentence_count() const;
};

using Corpus = std::vector<Topic>;

enum class Layout { topic_dirs, jsonl };

Layout parse_layout(std::string_view name);
std::string_view layout_name(Layout layout);

/// Splits text into sentences on `.`, `!` or `?` followed by whitespace or
/// end of input, and on blank lines. Known abbreviations ("Dr.", "U.S.",
/// single initials) do not end a sentence. Whitespace runs inside a
/// sentence are collapsed to one space.
std::vector<Sentence> segment_sentences(std::string_view text);

/// Number of maximal whitespace-delimited tokens.
int count_words(std::string_view text);

/// "<topic_id>/d<doc_index>/s<sent_index>"
std::string sentence_key(std::string_view topic_id, int doc_index, int sent_index);

/// Builds a validated topic from raw (doc_id, text) pairs. Throws InputError
/// for an empty id, no documents, or a document without sentences.
Topic make_topic(std::string topic_id,
                 const std::vector<std::pair<std::string, std::string>>& documents,
                 std::vector<std::string> references = {});

/// Loads a corpus from `<root>/<topic>/docs/*.txt` (+ optional refs/) or a
/// JSONL file with one topic record per line.
Corpus load_corpus(const std::filesystem::path& root, Layout layout);

}  // namespace ctsum
