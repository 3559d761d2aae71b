#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctsum/budget.hpp"
#include "ctsum/corpus.hpp"

namespace ctsum {

struct RougeScore {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

enum class Metric { r1, r2, rl, rsu4 };
enum class ReportKind { recall, f1 };

std::string_view metric_name(Metric metric);  // "R-1", "R-2", "R-L", "R-SU4"
std::string_view metric_key(Metric metric);   // "r1", "r2", "rl", "rsu4"
Metric parse_metric(std::string_view key);
std::vector<Metric> parse_metrics(std::string_view comma_list);
ReportKind parse_report_kind(std::string_view name);
std::string_view report_kind_name(ReportKind kind);

/// Martin Porter's 1980 algorithm, as in his reference C implementation.
std::string porter_stem(std::string_view word);

/// Lower-cased alphanumeric runs, optionally stemmed.
std::vector<std::string> rouge_tokens(std::string_view text, bool stem);

/// Words mode keeps the first `limit` whitespace tokens; bytes mode keeps the
/// longest whole-token prefix whose length with single-space separators is
/// at most `limit`. Output tokens are joined by single spaces.
std::string truncate(std::string_view text, const Budget& budget);

/// Clipped n-gram overlap, averaged over references (recall and precision
/// are averaged; f1 is taken from the averages).
RougeScore rouge_n(std::string_view candidate, std::span<const std::string> references, int n, bool stem);

/// Summary-level union LCS over sentence pairs.
RougeScore rouge_l(std::string_view candidate, std::span<const std::string> references, bool stem);

/// Skip-bigrams with at most 4 tokens between the pair (within a sentence)
/// plus unigrams.
RougeScore rouge_su4(std::string_view candidate, std::span<const std::string> references, bool stem);

RougeScore rouge(Metric metric, std::string_view candidate, std::span<const std::string> references, bool stem);

struct TopicRouge {
    std::string topic_id;
    std::vector<RougeScore> scores;  // aligned with RougeReport::metrics
};

struct RougeReport {
    std::vector<Metric> metrics;
    ReportKind kind = ReportKind::recall;
    std::vector<TopicRouge> topics;
    std::vector<RougeScore> mean;  // arithmetic mean over topics, per field

    /// The reported field (recall or f1) of the corpus mean.
    double mean_value(Metric metric) const;
    std::string to_table() const;
    /// `topic,metric,recall,precision,f1` rows per topic, then MEAN rows.
    std::string to_csv() const;
};

double reported(const RougeScore& score, ReportKind kind);

/// Truncates every summary to the budget and scores it against the topic's
/// references. Throws InputError for a topic with no references or no
/// summary.
RougeReport evaluate_corpus(const std::map<std::string, std::string>& summaries, const Corpus& corpus,
                            const Budget& budget, std::span<const Metric> metrics, ReportKind kind,
                            bool stem = true);

}  // namespace ctsum
