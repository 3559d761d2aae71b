#include "ctsum/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ctsum/budget.hpp"
#include "ctsum/error.hpp"

namespace ctsum {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> set = {
        "mr.",   "mrs.", "ms.",  "dr.",  "prof.", "sr.",  "jr.",  "st.",   "gen.",
        "rep.",  "sen.", "gov.", "lt.",  "col.",  "sgt.", "capt.", "mt.", "ft.",
        "vs.",   "jan.", "feb.", "mar.", "apr.",  "jun.", "jul.", "aug.",  "sep.",
        "sept.", "oct.", "nov.", "dec.", "e.g.",  "i.e.", "u.s.", "u.k.",  "u.n.",
    };
    return set;
}

// Upper-case initialisms such as "J." or "U.S.A.".
bool is_initialism(std::string_view token) {
    if (token.size() < 2 || token.size() % 2 != 0) return false;
    for (std::size_t i = 0; i < token.size(); i += 2) {
        if (!std::isupper(static_cast<unsigned char>(token[i])) || token[i + 1] != '.') return false;
    }
    return true;
}

bool ends_with_abbreviation(const std::string& buffer) {
    auto start = buffer.find_last_of(' ');
    std::string_view token(buffer);
    token.remove_prefix(start == std::string::npos ? 0 : start + 1);
    while (!token.empty() && (token.front() == '"' || token.front() == '\'' ||
                              token.front() == '(' || token.front() == '[')) {
        token.remove_prefix(1);
    }
    if (token.empty()) return false;
    if (is_initialism(token)) return true;
    std::string lower(token);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return abbreviations().count(lower) > 0;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> sorted_txt_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) return files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });
    return files;
}

Corpus load_topic_dirs(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root)) {
        throw InputError("input is not a directory: " + root.string());
    }
    std::vector<std::filesystem::path> topic_dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (entry.is_directory()) topic_dirs.push_back(entry.path());
    }
    std::sort(topic_dirs.begin(), topic_dirs.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });

    Corpus corpus;
    for (const auto& dir : topic_dirs) {
        std::vector<std::pair<std::string, std::string>> docs;
        for (const auto& file : sorted_txt_files(dir / "docs")) {
            docs.emplace_back(file.stem().string(), read_file(file));
        }
        std::vector<std::string> refs;
        for (const auto& file : sorted_txt_files(dir / "refs")) {
            refs.push_back(read_file(file));
        }
        corpus.push_back(make_topic(dir.filename().string(), docs, std::move(refs)));
    }
    if (corpus.empty()) throw InputError("no topics found under " + root.string());
    return corpus;
}

Corpus load_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read file: " + path.string());
    Corpus corpus;
    std::unordered_set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), is_space)) continue;
        try {
            auto record = nlohmann::json::parse(line);
            auto topic_id = record.at("topic_id").get<std::string>();
            std::vector<std::pair<std::string, std::string>> docs;
            for (const auto& doc : record.at("documents")) {
                docs.emplace_back(doc.at("doc_id").get<std::string>(), doc.at("text").get<std::string>());
            }
            std::vector<std::string> refs;
            if (record.contains("references")) {
                refs = record.at("references").get<std::vector<std::string>>();
            }
            if (!seen.insert(topic_id).second) {
                throw InputError("duplicate topic_id '" + topic_id + "'");
            }
            corpus.push_back(make_topic(std::move(topic_id), docs, std::move(refs)));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
        }
    }
    if (corpus.empty()) throw InputError("no topics found in " + path.string());
    return corpus;
}

}  // namespace

std::size_t Topic::sentence_count() const {
    std::size_t n = 0;
    for (const auto& doc : documents) n += doc.sentences.size();
    return n;
}

std::string_view unit_name(BudgetUnit unit) {
    return unit == BudgetUnit::words ? "words" : "bytes";
}

BudgetUnit parse_budget_unit(std::string_view name) {
    if (name == "words") return BudgetUnit::words;
    if (name == "bytes") return BudgetUnit::bytes;
    throw InputError("unknown budget unit: " + std::string(name));
}

Layout parse_layout(std::string_view name) {
    if (name == "topic-dirs") return Layout::topic_dirs;
    if (name == "jsonl") return Layout::jsonl;
    throw InputError("unknown layout: " + std::string(name));
}

std::string_view layout_name(Layout layout) {
    return layout == Layout::topic_dirs ? "topic-dirs" : "jsonl";
}

std::vector<Sentence> segment_sentences(std::string_view text) {
    std::vector<Sentence> out;
    std::string buffer;

    auto flush = [&] {
        while (!buffer.empty() && buffer.back() == ' ') buffer.pop_back();
        if (!buffer.empty()) {
            Sentence s;
            s.text = std::move(buffer);
            s.sent_index = static_cast<int>(out.size());
            s.position = s.sent_index + 1;
            s.word_count = count_words(s.text);
            s.byte_length = static_cast<int>(s.text.size());
            out.push_back(std::move(s));
        }
        buffer.clear();
    };

    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (is_space(c)) {
            int newlines = 0;
            while (i < text.size() && is_space(text[i])) {
                if (text[i] == '\n') ++newlines;
                ++i;
            }
            if (newlines >= 2) {
                flush();
            } else if (!buffer.empty()) {
                buffer.push_back(' ');
            }
            continue;
        }
        buffer.push_back(c);
        ++i;
        if (!is_terminator(c)) continue;

        bool single_period = (c == '.');
        while (i < text.size() && (is_terminator(text[i]) || is_closer(text[i]))) {
            if (is_terminator(text[i])) single_period = false;
            buffer.push_back(text[i]);
            ++i;
        }
        if (i < text.size() && !is_space(text[i])) continue;
        if (single_period && buffer.back() == '.' && ends_with_abbreviation(buffer)) continue;
        flush();
    }
    flush();
    return out;
}

int count_words(std::string_view text) {
    int n = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++n;
        }
    }
    return n;
}

std::string sentence_key(std::string_view topic_id, int doc_index, int sent_index) {
    std::string key(topic_id);
    key += "/d" + std::to_string(doc_index) + "/s" + std::to_string(sent_index);
    return key;
}

Topic make_topic(std::string topic_id,
                 const std::vector<std::pair<std::string, std::string>>& documents,
                 std::vector<std::string> references) {
    if (topic_id.empty()) throw InputError("topic_id must be non-empty");
    if (documents.empty()) throw InputError("topic '" + topic_id + "' has no documents");
    Topic topic;
    topic.topic_id = std::move(topic_id);
    topic.references = std::move(references);
    for (const auto& [doc_id, text] : documents) {
        Document doc;
        doc.doc_id = doc_id;
        doc.doc_index = static_cast<int>(topic.documents.size());
        doc.sentences = segment_sentences(text);
        if (doc.sentences.empty()) {
            throw InputError("document '" + doc_id + "' in topic '" + topic.topic_id +
                             "' has no sentences");
        }
        topic.documents.push_back(std::move(doc));
    }
    return topic;
}

Corpus load_corpus(const std::filesystem::path& root, Layout layout) {
    if (!std::filesystem::exists(root)) throw InputError("input path does not exist: " + root.string());
    return layout == Layout::topic_dirs ? load_topic_dirs(root) : load_jsonl(root);
}

}  // namespace ctsum
