#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ctsum/budget.hpp"
#include "ctsum/corpus.hpp"
#include "ctsum/embedding.hpp"
#include "ctsum/rouge.hpp"
#include "ctsum/scoring.hpp"
#include "ctsum/selection.hpp"
#include "ctsum/tree.hpp"
#include "ctsum/variants.hpp"

namespace ctsum {

struct RunConfig {
    std::string input;
    Layout layout = Layout::topic_dirs;
    Method method = Method::ours_final;
    Budget budget = Budget::words(100);
    Hyperparams hp;
    std::string embedder = "builtin:256";
    std::uint64_t seed = 7;
    std::string out = "out";
    std::vector<Metric> metrics = {Metric::r1, Metric::r2, Metric::rl, Metric::rsu4};
    ReportKind report = ReportKind::recall;
    int workers = 1;
    int max_nodes = 0;  // 0: estimate from the budget
    int restarts = 3;
    bool stem = true;
    std::string summaries;  // directory of <topic_id>.txt, for evaluation
    bool dump_tree = false;
    Metric objective = Metric::r1;

    bool operator==(const RunConfig&) const = default;
};

/// Flat `key = value` text, one setting per line; '#' starts a comment.
std::string config_to_text(const RunConfig& config);
RunConfig config_from_text(std::string_view text, RunConfig base = {});
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Per-topic seed derived from the master seed and the topic id only.
std::uint64_t topic_seed(std::uint64_t master, std::string_view topic_id);

VariantSpec variant_spec(const RunConfig& config, Method method);

/// Summaries in corpus order. Topics are spread over `config.workers`
/// threads; output does not depend on the worker count.
std::vector<Summary> summarize_corpus(const EmbeddedCorpus& corpus, const RunConfig& config, Method method,
                                      std::vector<ClassTree>* trees = nullptr);

std::map<std::string, std::string> summary_texts(const std::vector<Summary>& summaries);

/// Writes `<topic_id>.txt` per summary and `summaries.jsonl`.
void write_summaries(const std::filesystem::path& dir, const std::vector<Summary>& summaries);
std::string summary_to_jsonl(const Summary& summary);
std::map<std::string, std::string> read_summaries(const std::filesystem::path& dir);

struct AblationRow {
    Method method;
    std::uint64_t seed;
    RougeReport report;
};

struct AblationTable {
    std::vector<Metric> metrics;
    ReportKind kind = ReportKind::recall;
    std::vector<AblationRow> rows;

    double value(Method method, Metric metric) const;
    std::string to_table() const;
    std::string to_csv() const;  // method,seed,<metric>...
};

AblationTable run_ablation(const Corpus& corpus, const EmbeddedCorpus& embedded, const RunConfig& config);

/// Hyperparameter grid. Weights are (alpha, beta, gamma) in tenths.
struct TuneGrid {
    std::vector<int> ks;
    std::vector<int> delta_tenths;
    std::vector<std::array<int, 3>> weight_tenths;

    std::size_t size() const { return ks.size() * delta_tenths.size() * weight_tenths.size(); }
    std::vector<Hyperparams> points() const;  // k, delta, alpha, beta ascending
};

/// All (a, b, c) in tenths with a + b + c = 10, lexicographic.
std::vector<std::array<int, 3>> simplex_tenths();

/// k in {2,3,4}, delta in {0,0.1,...,1}, the 66 simplex weights.
TuneGrid full_grid();

struct TunePoint {
    Hyperparams hp;
    double objective = 0.0;
};

struct TuneResult {
    TunePoint best;
    std::vector<TunePoint> points;  // grid order

    std::string to_csv() const;
};

/// Scores every grid point with the main method on a corpus with
/// references; best by objective, ties to the first point in grid order.
TuneResult run_tune(const Corpus& corpus, const EmbeddedCorpus& embedded, const RunConfig& config,
                    const TuneGrid& grid);

}  // namespace ctsum
