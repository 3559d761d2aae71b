#include "ctsum/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "ctsum/error.hpp"

namespace ctsum {

namespace {

using Counts = std::unordered_map<std::string, int>;

constexpr int kSkipGap = 4;

std::vector<std::vector<std::string>> sentence_tokens(std::string_view text, bool stem) {
    std::vector<std::vector<std::string>> out;
    for (const auto& s : segment_sentences(text)) {
        auto toks = rouge_tokens(s.text, stem);
        if (!toks.empty()) out.push_back(std::move(toks));
    }
    return out;
}

int total(const Counts& c) {
    int n = 0;
    for (const auto& [_, v] : c) n += v;
    return n;
}

int clipped_overlap(const Counts& cand, const Counts& ref) {
    int hits = 0;
    for (const auto& [gram, count] : ref) {
        auto it = cand.find(gram);
        if (it != cand.end()) hits += std::min(count, it->second);
    }
    return hits;
}

Counts ngram_counts(const std::vector<std::string>& tokens, int n) {
    Counts counts;
    const auto nn = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + nn <= tokens.size(); ++i) {
        std::string gram = tokens[i];
        for (std::size_t j = 1; j < nn; ++j) gram += ' ' + tokens[i + j];
        ++counts[gram];
    }
    return counts;
}

Counts su4_counts(const std::vector<std::vector<std::string>>& sentences) {
    Counts counts;
    for (const auto& s : sentences) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            ++counts[s[i]];
            for (std::size_t j = i + 1; j < s.size() && j - i - 1 <= static_cast<std::size_t>(kSkipGap); ++j) {
                ++counts[s[i] + '\x1f' + s[j]];
            }
        }
    }
    return counts;
}

RougeScore from_pr(double recall, double precision) {
    RougeScore s{recall, precision, 0.0};
    if (recall + precision > 0.0) s.f1 = 2.0 * precision * recall / (precision + recall);
    return s;
}

double ratio(int num, int den) { return den > 0 ? static_cast<double>(num) / den : 0.0; }

// Mean recall/precision over references of a per-reference (hits, ref_total,
// cand_total) function.
template <typename PerRef>
RougeScore average(std::span<const std::string> references, PerRef per_ref) {
    if (references.empty()) return {};
    double recall = 0.0, precision = 0.0;
    for (const auto& ref : references) {
        auto [hits, ref_total, cand_total] = per_ref(ref);
        recall += ratio(hits, ref_total);
        precision += ratio(hits, cand_total);
    }
    const double n = static_cast<double>(references.size());
    return from_pr(recall / n, precision / n);
}

std::string format_score(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", x);
    return buf;
}

// Positions of `ref` covered by one LCS of (ref, cand).
std::vector<std::size_t> lcs_positions(const std::vector<std::string>& ref, const std::vector<std::string>& cand) {
    const std::size_t n = ref.size(), m = cand.size();
    std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            dp[i][j] = ref[i - 1] == cand[j - 1] ? dp[i - 1][j - 1] + 1 : std::max(dp[i - 1][j], dp[i][j - 1]);
        }
    }
    std::vector<std::size_t> pos;
    std::size_t i = n, j = m;
    while (i > 0 && j > 0) {
        if (ref[i - 1] == cand[j - 1]) {
            pos.push_back(i - 1);
            --i;
            --j;
        } else if (dp[i - 1][j] >= dp[i][j - 1]) {
            --i;
        } else {
            --j;
        }
    }
    return pos;
}

}  // namespace

std::string_view metric_name(Metric metric) {
    switch (metric) {
        case Metric::r1: return "R-1";
        case Metric::r2: return "R-2";
        case Metric::rl: return "R-L";
        case Metric::rsu4: return "R-SU4";
    }
    return "?";
}

std::string_view metric_key(Metric metric) {
    switch (metric) {
        case Metric::r1: return "r1";
        case Metric::r2: return "r2";
        case Metric::rl: return "rl";
        case Metric::rsu4: return "rsu4";
    }
    return "?";
}

Metric parse_metric(std::string_view key) {
    for (auto m : {Metric::r1, Metric::r2, Metric::rl, Metric::rsu4}) {
        if (key == metric_key(m)) return m;
    }
    throw InputError("unknown metric: " + std::string(key));
}

std::vector<Metric> parse_metrics(std::string_view comma_list) {
    std::vector<Metric> out;
    std::size_t start = 0;
    while (start <= comma_list.size()) {
        auto end = comma_list.find(',', start);
        if (end == std::string_view::npos) end = comma_list.size();
        auto item = comma_list.substr(start, end - start);
        if (!item.empty()) out.push_back(parse_metric(item));
        start = end + 1;
    }
    if (out.empty()) throw InputError("no metrics given");
    return out;
}

ReportKind parse_report_kind(std::string_view name) {
    if (name == "recall") return ReportKind::recall;
    if (name == "f1") return ReportKind::f1;
    throw InputError("unknown report kind: " + std::string(name));
}

std::string_view report_kind_name(ReportKind kind) { return kind == ReportKind::recall ? "recall" : "f1"; }

std::vector<std::string> rouge_tokens(std::string_view text, bool stem) {
    std::vector<std::string> tokens;
    std::string current;
    auto push = [&] {
        if (current.empty()) return;
        tokens.push_back(stem ? porter_stem(current) : current);
        current.clear();
    };
    for (char c : text) {
        auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else {
            push();
        }
    }
    push();
    return tokens;
}

std::string truncate(std::string_view text, const Budget& budget) {
    std::istringstream in{std::string(text)};
    std::string token, out;
    long used = 0;
    while (in >> token) {
        if (budget.unit == BudgetUnit::words) {
            if (used >= budget.limit) break;
            ++used;
        } else {
            long need = static_cast<long>(token.size()) + (out.empty() ? 0 : 1);
            if (used + need > budget.limit) break;
            used += need;
        }
        if (!out.empty()) out += ' ';
        out += token;
    }
    return out;
}

RougeScore rouge_n(std::string_view candidate, std::span<const std::string> references, int n, bool stem) {
    if (n < 1) throw InputError("rouge_n: n must be >= 1");
    auto cand = ngram_counts(rouge_tokens(candidate, stem), n);
    const int cand_total = total(cand);
    return average(references, [&](const std::string& ref_text) {
        auto ref = ngram_counts(rouge_tokens(ref_text, stem), n);
        return std::tuple{clipped_overlap(cand, ref), total(ref), cand_total};
    });
}

RougeScore rouge_l(std::string_view candidate, std::span<const std::string> references, bool stem) {
    const auto cand_sents = sentence_tokens(candidate, stem);
    Counts cand_counts;
    int cand_total = 0;
    for (const auto& s : cand_sents) {
        for (const auto& t : s) ++cand_counts[t];
        cand_total += static_cast<int>(s.size());
    }
    return average(references, [&](const std::string& ref_text) {
        const auto ref_sents = sentence_tokens(ref_text, stem);
        Counts ref_counts;
        int ref_total = 0;
        for (const auto& s : ref_sents) {
            for (const auto& t : s) ++ref_counts[t];
            ref_total += static_cast<int>(s.size());
        }
        Counts cand_left = cand_counts;
        int hits = 0;
        for (const auto& r : ref_sents) {
            std::vector<bool> in_union(r.size(), false);
            for (const auto& c : cand_sents) {
                for (auto p : lcs_positions(r, c)) in_union[p] = true;
            }
            for (std::size_t p = 0; p < r.size(); ++p) {
                if (!in_union[p]) continue;
                auto& cl = cand_left[r[p]];
                auto& rl = ref_counts[r[p]];
                if (cl > 0 && rl > 0) {
                    ++hits;
                    --cl;
                    --rl;
                }
            }
        }
        return std::tuple{hits, ref_total, cand_total};
    });
}

RougeScore rouge_su4(std::string_view candidate, std::span<const std::string> references, bool stem) {
    auto cand = su4_counts(sentence_tokens(candidate, stem));
    const int cand_total = total(cand);
    return average(references, [&](const std::string& ref_text) {
        auto ref = su4_counts(sentence_tokens(ref_text, stem));
        return std::tuple{clipped_overlap(cand, ref), total(ref), cand_total};
    });
}

RougeScore rouge(Metric metric, std::string_view candidate, std::span<const std::string> references, bool stem) {
    switch (metric) {
        case Metric::r1: return rouge_n(candidate, references, 1, stem);
        case Metric::r2: return rouge_n(candidate, references, 2, stem);
        case Metric::rl: return rouge_l(candidate, references, stem);
        case Metric::rsu4: return rouge_su4(candidate, references, stem);
    }
    return {};
}

double reported(const RougeScore& score, ReportKind kind) {
    return kind == ReportKind::recall ? score.recall : score.f1;
}

double RougeReport::mean_value(Metric metric) const {
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        if (metrics[i] == metric) return reported(mean[i], kind);
    }
    throw InputError("metric not in report: " + std::string(metric_key(metric)));
}

std::string RougeReport::to_table() const {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-24s", "topic");
    out << buf;
    for (auto m : metrics) {
        std::snprintf(buf, sizeof buf, " %10s", std::string(metric_name(m)).c_str());
        out << buf;
    }
    out << "   (" << report_kind_name(kind) << ")\n";
    auto row = [&](const std::string& label, const std::vector<RougeScore>& scores) {
        std::snprintf(buf, sizeof buf, "%-24s", label.c_str());
        out << buf;
        for (const auto& s : scores) {
            std::snprintf(buf, sizeof buf, " %10s", format_score(reported(s, kind)).c_str());
            out << buf;
        }
        out << '\n';
    };
    for (const auto& t : topics) row(t.topic_id, t.scores);
    row("MEAN", mean);
    return out.str();
}

std::string RougeReport::to_csv() const {
    std::ostringstream out;
    out << "topic,metric,recall,precision,f1\n";
    auto rows = [&](const std::string& label, const std::vector<RougeScore>& scores) {
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            out << label << ',' << metric_key(metrics[i]) << ',' << format_score(scores[i].recall) << ','
                << format_score(scores[i].precision) << ',' << format_score(scores[i].f1) << '\n';
        }
    };
    for (const auto& t : topics) rows(t.topic_id, t.scores);
    rows("MEAN", mean);
    return out.str();
}

RougeReport evaluate_corpus(const std::map<std::string, std::string>& summaries, const Corpus& corpus,
                            const Budget& budget, std::span<const Metric> metrics, ReportKind kind, bool stem) {
    RougeReport report;
    report.metrics.assign(metrics.begin(), metrics.end());
    report.kind = kind;
    report.mean.assign(metrics.size(), RougeScore{});
    for (const auto& topic : corpus) {
        if (topic.references.empty()) throw InputError("topic '" + topic.topic_id + "' has no references");
        auto it = summaries.find(topic.topic_id);
        if (it == summaries.end()) throw InputError("no summary for topic '" + topic.topic_id + "'");
        const auto candidate = truncate(it->second, budget);
        TopicRouge tr{topic.topic_id, {}};
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            tr.scores.push_back(rouge(metrics[i], candidate, topic.references, stem));
            report.mean[i].recall += tr.scores.back().recall;
            report.mean[i].precision += tr.scores.back().precision;
            report.mean[i].f1 += tr.scores.back().f1;
        }
        report.topics.push_back(std::move(tr));
    }
    if (!report.topics.empty()) {
        const double n = static_cast<double>(report.topics.size());
        for (auto& m : report.mean) {
            m.recall /= n;
            m.precision /= n;
            m.f1 /= n;
        }
    }
    return report;
}

}  // namespace ctsum
