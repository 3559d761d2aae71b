// Command-line front end: summarize, evaluate, ablate, tune.

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ctsum/error.hpp"
#include "ctsum/pipeline.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitProvider = 3;
constexpr int kExitInternal = 4;

struct FlagValues {
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> given;  // (key, value) in flag order
};

// Options shared by every subcommand. Values are collected as text and
// applied on top of the config file, so flags override file settings.
class Flags {
public:
    void attach(CLI::App* cmd) {
        cmd->add_option("--config", values_.config_file, "flat key = value config file");
        add(cmd, "--input", "input", "corpus root directory or JSONL file");
        add(cmd, "--layout", "layout", "topic-dirs | jsonl");
        add(cmd, "--method", "method", "ours-final | ours-cs | comp1 | comp2 | comp3 | comp4");
        add(cmd, "--budget-words", "budget_words", "summary length limit in words");
        add(cmd, "--budget-bytes", "budget_bytes", "summary length limit in bytes");
        add(cmd, "--embedder", "embedder", "file:PATH | builtin:DIM | remote:URL");
        add(cmd, "--seed", "seed", "master seed");
        add(cmd, "--k-first", "k_first", "k for the layer-2 split");
        add(cmd, "--k-rest", "k_rest", "k for deeper splits");
        add(cmd, "--delta", "delta", "in-node similarity weight");
        add(cmd, "--alpha", "alpha", "commonality-specificity weight");
        add(cmd, "--beta", "beta", "non-redundancy weight");
        add(cmd, "--gamma", "gamma", "position weight");
        add(cmd, "--max-nodes", "max_nodes", "class tree node bound (default: estimated)");
        add(cmd, "--restarts", "restarts", "k-means restarts");
        add(cmd, "--metrics", "metrics", "comma list of r1,r2,rl,rsu4");
        add(cmd, "--report", "report", "recall | f1");
        add(cmd, "--out", "out", "output directory");
        add(cmd, "--workers", "workers", "worker threads");
        add(cmd, "--summaries", "summaries", "directory of <topic_id>.txt summaries");
        add(cmd, "--objective", "objective", "tuning metric: r1 | r2 | rl | rsu4");
        add(cmd, "--stem", "stem", "Porter-stem ROUGE tokens (true|false)");
        cmd->add_flag_callback(
            "--dump-tree", [this] { values_.given.emplace_back("dump_tree", "true"); },
            "write class trees to trees.jsonl");
    }

    ctsum::RunConfig resolve() const {
        ctsum::RunConfig config;
        if (!values_.config_file.empty()) {
            std::ifstream in(values_.config_file);
            if (!in) throw ctsum::InputError("cannot read config file: " + values_.config_file);
            std::ostringstream ss;
            ss << in.rdbuf();
            config = ctsum::config_from_text(ss.str());
        }
        for (const auto& [key, value] : values_.given) ctsum::apply_setting(config, key, value);
        return config;
    }

private:
    void add(CLI::App* cmd, const std::string& flag, std::string key, const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { values_.given.emplace_back(key, v); }, help);
    }

    FlagValues values_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ctsum::InputError("cannot write " + path.string());
    out << text;
}

struct Loaded {
    ctsum::Corpus corpus;
    ctsum::EmbeddedCorpus embedded;
};

Loaded load(const ctsum::RunConfig& config) {
    if (config.input.empty()) throw ctsum::InputError("--input is required");
    Loaded l;
    l.corpus = ctsum::load_corpus(config.input, config.layout);
    auto provider = ctsum::make_provider(config.embedder, l.corpus, config.seed);
    l.embedded = ctsum::embed_corpus(l.corpus, *provider);
    return l;
}

void echo_config(const ctsum::RunConfig& config) {
    std::filesystem::create_directories(config.out);
    write_text(std::filesystem::path(config.out) / "run_config.txt", ctsum::config_to_text(config));
}

void cmd_summarize(const ctsum::RunConfig& config) {
    config.hp.validate();
    auto loaded = load(config);
    std::vector<ctsum::ClassTree> trees;
    auto summaries = ctsum::summarize_corpus(loaded.embedded, config, config.method,
                                             config.dump_tree ? &trees : nullptr);
    echo_config(config);
    ctsum::write_summaries(config.out, summaries);
    if (config.dump_tree) {
        std::ofstream out(std::filesystem::path(config.out) / "trees.jsonl");
        for (std::size_t i = 0; i < trees.size(); ++i) {
            std::vector<std::string> labels;
            for (const auto& d : loaded.corpus[i].documents) labels.push_back(d.doc_id);
            auto j = ctsum::tree_to_json(trees[i], labels);
            j["topic_id"] = loaded.corpus[i].topic_id;
            out << j.dump() << '\n';
        }
    }
    std::cerr << "wrote " << summaries.size() << " summaries to " << config.out << '\n';
}

void cmd_evaluate(const ctsum::RunConfig& config) {
    if (config.input.empty()) throw ctsum::InputError("--input is required");
    if (config.summaries.empty()) throw ctsum::InputError("--summaries is required");
    auto corpus = ctsum::load_corpus(config.input, config.layout);
    auto report = ctsum::evaluate_corpus(ctsum::read_summaries(config.summaries), corpus, config.budget,
                                         config.metrics, config.report, config.stem);
    echo_config(config);
    write_text(std::filesystem::path(config.out) / "rouge.txt", report.to_table());
    write_text(std::filesystem::path(config.out) / "rouge.csv", report.to_csv());
    std::cout << report.to_table();
}

void cmd_ablate(const ctsum::RunConfig& config) {
    config.hp.validate();
    auto loaded = load(config);
    auto table = ctsum::run_ablation(loaded.corpus, loaded.embedded, config);
    echo_config(config);
    write_text(std::filesystem::path(config.out) / "ablation.txt", table.to_table());
    write_text(std::filesystem::path(config.out) / "ablation.csv", table.to_csv());
    std::cout << table.to_table();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int to_tenths(const std::string& s) {
    double v = std::stod(s);
    int t = static_cast<int>(v * 10.0 + (v >= 0 ? 0.5 : -0.5));
    if (t < 0 || t > 10) throw ctsum::InputError("grid value out of [0,1]: " + s);
    return t;
}

struct GridFlags {
    std::string ks, deltas, weights;

    ctsum::TuneGrid resolve() const {
        auto grid = ctsum::full_grid();
        try {
            if (!ks.empty()) {
                grid.ks.clear();
                for (const auto& k : split(ks, ',')) grid.ks.push_back(std::stoi(k));
            }
            if (!deltas.empty()) {
                grid.delta_tenths.clear();
                for (const auto& d : split(deltas, ',')) grid.delta_tenths.push_back(to_tenths(d));
            }
            if (!weights.empty()) {
                grid.weight_tenths.clear();
                for (const auto& w : split(weights, ',')) {
                    auto parts = split(w, ':');
                    if (parts.size() != 3) throw ctsum::InputError("weights must be alpha:beta:gamma, got " + w);
                    std::array<int, 3> t{to_tenths(parts[0]), to_tenths(parts[1]), to_tenths(parts[2])};
                    if (t[0] + t[1] + t[2] != 10) throw ctsum::InputError("weights must sum to 1, got " + w);
                    grid.weight_tenths.push_back(t);
                }
            }
        } catch (const std::logic_error& e) {
            throw ctsum::InputError(std::string("invalid grid value: ") + e.what());
        }
        return grid;
    }
};

void cmd_tune(const ctsum::RunConfig& config, const ctsum::TuneGrid& grid) {
    auto loaded = load(config);
    std::cerr << "tuning over " << grid.size() << " configurations\n";
    auto result = ctsum::run_tune(loaded.corpus, loaded.embedded, config, grid);
    echo_config(config);
    write_text(std::filesystem::path(config.out) / "tune.csv", result.to_csv());
    auto best = config;
    best.hp = result.best.hp;
    write_text(std::filesystem::path(config.out) / "best_config.txt", ctsum::config_to_text(best));
    std::cout << "best: k=" << result.best.hp.k_first << " delta=" << result.best.hp.delta
              << " alpha=" << result.best.hp.alpha << " beta=" << result.best.hp.beta
              << " gamma=" << result.best.hp.gamma << " objective=" << result.best.objective << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Class-tree multi-document summarizer"};
    app.require_subcommand(1);

    Flags summarize_flags, evaluate_flags, ablate_flags, tune_flags;
    GridFlags grid_flags;
    auto* summarize = app.add_subcommand("summarize", "write one summary per topic");
    auto* evaluate = app.add_subcommand("evaluate", "ROUGE-score summaries against references");
    auto* ablate = app.add_subcommand("ablate", "compare ours-cs, ours-final and comp1..comp4");
    auto* tune = app.add_subcommand("tune", "grid-search k, delta, alpha, beta, gamma");
    summarize_flags.attach(summarize);
    evaluate_flags.attach(evaluate);
    ablate_flags.attach(ablate);
    tune_flags.attach(tune);
    tune->add_option("--grid-k", grid_flags.ks, "comma list of k values (default 2,3,4)");
    tune->add_option("--grid-delta", grid_flags.deltas, "comma list of delta values (default 0,0.1,...,1)");
    tune->add_option("--grid-weights", grid_flags.weights,
                     "comma list of alpha:beta:gamma (default: 0.1-step simplex)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*summarize) cmd_summarize(summarize_flags.resolve());
        if (*evaluate) cmd_evaluate(evaluate_flags.resolve());
        if (*ablate) cmd_ablate(ablate_flags.resolve());
        if (*tune) cmd_tune(tune_flags.resolve(), grid_flags.resolve());
    } catch (const ctsum::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ctsum::ProviderError& e) {
        std::cerr << "embedding error: " << e.what() << '\n';
        return kExitProvider;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}
