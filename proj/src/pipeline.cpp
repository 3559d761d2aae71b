#include "ctsum/pipeline.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ctsum/error.hpp"

namespace ctsum {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw InputError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    try {
        std::size_t used = 0;
        std::string s(value);
        double d = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw InputError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
    }
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw InputError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::string real_text(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Runs task(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
    const auto threads = static_cast<std::size_t>(std::max(1, workers));
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) {
        pool.emplace_back([&] {
            while (true) {
                auto i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string format5(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", x);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "input") c.input = value;
    else if (key == "layout") c.layout = parse_layout(value);
    else if (key == "method") c.method = parse_method(value);
    else if (key == "budget_unit") c.budget.unit = parse_budget_unit(value);
    else if (key == "budget_limit") c.budget.limit = parse_number<long>(key, value);
    else if (key == "budget_words") c.budget = Budget::words(parse_number<long>(key, value));
    else if (key == "budget_bytes") c.budget = Budget::bytes(parse_number<long>(key, value));
    else if (key == "delta") c.hp.delta = parse_real(key, value);
    else if (key == "alpha") c.hp.alpha = parse_real(key, value);
    else if (key == "beta") c.hp.beta = parse_real(key, value);
    else if (key == "gamma") c.hp.gamma = parse_real(key, value);
    else if (key == "k_first") c.hp.k_first = parse_number<int>(key, value);
    else if (key == "k_rest") c.hp.k_rest = parse_number<int>(key, value);
    else if (key == "embedder") c.embedder = value;
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "out") c.out = value;
    else if (key == "metrics") c.metrics = parse_metrics(value);
    else if (key == "report") c.report = parse_report_kind(value);
    else if (key == "workers") c.workers = parse_number<int>(key, value);
    else if (key == "max_nodes") c.max_nodes = parse_number<int>(key, value);
    else if (key == "restarts") c.restarts = parse_number<int>(key, value);
    else if (key == "stem") c.stem = parse_bool(key, value);
    else if (key == "summaries") c.summaries = value;
    else if (key == "dump_tree") c.dump_tree = parse_bool(key, value);
    else if (key == "objective") c.objective = parse_metric(value);
    else throw InputError("unknown config key: " + std::string(key));
}

std::string config_to_text(const RunConfig& c) {
    std::string metrics;
    for (auto m : c.metrics) {
        if (!metrics.empty()) metrics += ',';
        metrics += metric_key(m);
    }
    std::ostringstream out;
    out << "input = " << c.input << '\n'
        << "layout = " << layout_name(c.layout) << '\n'
        << "method = " << method_name(c.method) << '\n'
        << "budget_unit = " << unit_name(c.budget.unit) << '\n'
        << "budget_limit = " << c.budget.limit << '\n'
        << "delta = " << real_text(c.hp.delta) << '\n'
        << "alpha = " << real_text(c.hp.alpha) << '\n'
        << "beta = " << real_text(c.hp.beta) << '\n'
        << "gamma = " << real_text(c.hp.gamma) << '\n'
        << "k_first = " << c.hp.k_first << '\n'
        << "k_rest = " << c.hp.k_rest << '\n'
        << "embedder = " << c.embedder << '\n'
        << "seed = " << c.seed << '\n'
        << "out = " << c.out << '\n'
        << "metrics = " << metrics << '\n'
        << "report = " << report_kind_name(c.report) << '\n'
        << "workers = " << c.workers << '\n'
        << "max_nodes = " << c.max_nodes << '\n'
        << "restarts = " << c.restarts << '\n'
        << "stem = " << (c.stem ? "true" : "false") << '\n'
        << "summaries = " << c.summaries << '\n'
        << "dump_tree = " << (c.dump_tree ? "true" : "false") << '\n'
        << "objective = " << metric_key(c.objective) << '\n';
    return out.str();
}

RunConfig config_from_text(std::string_view text, RunConfig base) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(base, trim(view.substr(0, eq)), view.substr(eq + 1));
    }
    return base;
}

std::uint64_t topic_seed(std::uint64_t master, std::string_view topic_id) {
    return splitmix64(master ^ splitmix64(fnv1a(topic_id)));
}

VariantSpec variant_spec(const RunConfig& config, Method method) {
    VariantSpec spec;
    spec.kind = method;
    spec.hp = config.hp;
    spec.budget = config.budget;
    spec.seed = config.seed;
    spec.max_nodes = config.max_nodes;
    spec.restarts = config.restarts;
    return spec;
}

std::vector<Summary> summarize_corpus(const EmbeddedCorpus& corpus, const RunConfig& config, Method method,
                                      std::vector<ClassTree>* trees) {
    config.hp.validate();
    std::vector<Summary> out(corpus.size());
    if (trees) trees->assign(corpus.size(), ClassTree{});
    parallel_for(corpus.size(), config.workers, [&](std::size_t i) {
        auto spec = variant_spec(config, method);
        spec.seed = topic_seed(config.seed, corpus[i].topic.topic_id);
        out[i] = summarize(corpus[i], spec, trees ? &(*trees)[i] : nullptr);
    });
    return out;
}

std::map<std::string, std::string> summary_texts(const std::vector<Summary>& summaries) {
    std::map<std::string, std::string> out;
    for (const auto& s : summaries) out[s.topic_id] = s.text;
    return out;
}

std::string summary_to_jsonl(const Summary& summary) {
    nlohmann::json sentences = nlohmann::json::array();
    for (const auto& s : summary.sentences) {
        sentences.push_back({{"text", s.text}, {"node_id", s.node_id}, {"doc_id", s.doc_id}, {"position", s.position}});
    }
    nlohmann::json record = {{"topic_id", summary.topic_id}, {"summary", summary.text}, {"sentences", sentences}};
    return record.dump();
}

void write_summaries(const std::filesystem::path& dir, const std::vector<Summary>& summaries) {
    std::filesystem::create_directories(dir);
    std::ofstream jsonl(dir / "summaries.jsonl");
    if (!jsonl) throw InputError("cannot write to " + dir.string());
    for (const auto& s : summaries) {
        std::ofstream txt(dir / (s.topic_id + ".txt"));
        txt << s.text << '\n';
        jsonl << summary_to_jsonl(s) << '\n';
    }
}

std::map<std::string, std::string> read_summaries(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError("summaries directory not found: " + dir.string());
    std::map<std::string, std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        std::ifstream in(entry.path());
        std::ostringstream ss;
        ss << in.rdbuf();
        auto text = ss.str();
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
        out[entry.path().stem().string()] = std::move(text);
    }
    return out;
}

// ---------------------------------------------------------------------------

double AblationTable::value(Method method, Metric metric) const {
    for (const auto& row : rows) {
        if (row.method == method) return row.report.mean_value(metric);
    }
    throw InputError("method not in ablation table: " + std::string(method_name(method)));
}

std::string AblationTable::to_table() const {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-12s %12s", "method", "seed");
    out << buf;
    for (auto m : metrics) {
        std::snprintf(buf, sizeof buf, " %10s", std::string(metric_name(m)).c_str());
        out << buf;
    }
    out << "   (" << report_kind_name(kind) << ")\n";
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%-12s %12llu", std::string(method_name(row.method)).c_str(),
                      static_cast<unsigned long long>(row.seed));
        out << buf;
        for (auto m : metrics) {
            std::snprintf(buf, sizeof buf, " %10s", format5(row.report.mean_value(m)).c_str());
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string AblationTable::to_csv() const {
    std::ostringstream out;
    out << "method,seed";
    for (auto m : metrics) out << ',' << metric_key(m);
    out << '\n';
    for (const auto& row : rows) {
        out << method_name(row.method) << ',' << row.seed;
        for (auto m : metrics) out << ',' << format5(row.report.mean_value(m));
        out << '\n';
    }
    return out.str();
}

AblationTable run_ablation(const Corpus& corpus, const EmbeddedCorpus& embedded, const RunConfig& config) {
    AblationTable table;
    table.metrics = config.metrics;
    table.kind = config.report;
    for (auto method : kAllMethods) {
        auto summaries = summarize_corpus(embedded, config, method);
        table.rows.push_back({method, config.seed,
                              evaluate_corpus(summary_texts(summaries), corpus, config.budget, config.metrics,
                                              config.report, config.stem)});
    }
    return table;
}

// ---------------------------------------------------------------------------

std::vector<std::array<int, 3>> simplex_tenths() {
    std::vector<std::array<int, 3>> out;
    for (int a = 0; a <= 10; ++a) {
        for (int b = 0; a + b <= 10; ++b) out.push_back({a, b, 10 - a - b});
    }
    return out;
}

TuneGrid full_grid() {
    TuneGrid grid;
    grid.ks = {2, 3, 4};
    for (int d = 0; d <= 10; ++d) grid.delta_tenths.push_back(d);
    grid.weight_tenths = simplex_tenths();
    return grid;
}

std::vector<Hyperparams> TuneGrid::points() const {
    std::vector<Hyperparams> out;
    out.reserve(size());
    for (int k : ks) {
        for (int d : delta_tenths) {
            for (const auto& w : weight_tenths) {
                Hyperparams hp;
                hp.k_first = k;
                hp.delta = d / 10.0;
                hp.alpha = w[0] / 10.0;
                hp.beta = w[1] / 10.0;
                hp.gamma = w[2] / 10.0;
                out.push_back(hp);
            }
        }
    }
    return out;
}

std::string TuneResult::to_csv() const {
    std::ostringstream out;
    out << "k,delta,alpha,beta,gamma,objective\n";
    for (const auto& p : points) {
        out << p.hp.k_first << ',' << p.hp.delta << ',' << p.hp.alpha << ',' << p.hp.beta << ',' << p.hp.gamma << ','
            << format5(p.objective) << '\n';
    }
    return out.str();
}

TuneResult run_tune(const Corpus& corpus, const EmbeddedCorpus& embedded, const RunConfig& config,
                    const TuneGrid& grid) {
    const auto points = grid.points();
    if (points.empty()) throw InputError("tuning grid is empty");
    for (const auto& t : corpus) {
        if (t.references.empty()) throw InputError("topic '" + t.topic_id + "' has no references");
    }
    for (const auto& hp : points) hp.validate();

    // scores[topic][point]
    std::vector<std::vector<double>> scores(embedded.size(), std::vector<double>(points.size(), 0.0));
    parallel_for(embedded.size(), config.workers, [&](std::size_t t) {
        const auto& topic = embedded[t];
        const auto& refs = corpus[t].references;
        std::map<int, ClassTree> trees;
        for (std::size_t p = 0; p < points.size(); ++p) {
            const auto& hp = points[p];
            auto it = trees.find(hp.k_first);
            if (it == trees.end()) {
                TreeOptions opts;
                opts.k_first = hp.k_first;
                opts.k_rest = hp.k_rest;
                opts.max_nodes = config.max_nodes > 0 ? config.max_nodes : auto_max_nodes(topic, config.budget);
                opts.seed = topic_seed(config.seed, topic.topic.topic_id);
                opts.restarts = config.restarts;
                it = trees.emplace(hp.k_first, build_class_tree(topic.document_vectors, opts)).first;
            }
            auto summary = select_summary(it->second, topic, hp, config.budget, ScoringMode::final);
            auto score = rouge(config.objective, truncate(summary.text, config.budget), refs, config.stem);
            scores[t][p] = reported(score, config.report);
        }
    });

    TuneResult result;
    for (std::size_t p = 0; p < points.size(); ++p) {
        double sum = 0.0;
        for (const auto& row : scores) sum += row[p];
        result.points.push_back({points[p], embedded.empty() ? 0.0 : sum / static_cast<double>(embedded.size())});
    }
    result.best = result.points.front();
    for (const auto& p : result.points) {
        if (p.objective > result.best.objective) result.best = p;
    }
    return result;
}

}  // namespace ctsum
