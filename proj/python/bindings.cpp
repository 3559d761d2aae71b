#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctsum/error.hpp"
#include "ctsum/kmeans.hpp"
#include "ctsum/pipeline.hpp"

namespace py = pybind11;
using namespace ctsum;

namespace {

py::dict score_dict(const RougeScore& s) {
    py::dict d;
    d["recall"] = s.recall;
    d["precision"] = s.precision;
    d["f1"] = s.f1;
    return d;
}

Budget make_budget(std::optional<long> words, std::optional<long> bytes) {
    if (words && bytes) throw InputError("give budget_words or budget_bytes, not both");
    if (bytes) return Budget::bytes(*bytes);
    return Budget::words(words.value_or(100));
}

py::dict summarize_topic(const std::string& topic_id, const std::vector<std::pair<std::string, std::string>>& docs,
                         const std::string& method, std::optional<long> budget_words, std::optional<long> budget_bytes,
                         const std::string& embedder, std::uint64_t seed, double delta, double alpha, double beta,
                         double gamma, int k_first, int max_nodes) {
    RunConfig config;
    config.method = parse_method(method);
    config.budget = make_budget(budget_words, budget_bytes);
    config.embedder = embedder;
    config.seed = seed;
    config.hp.delta = delta;
    config.hp.alpha = alpha;
    config.hp.beta = beta;
    config.hp.gamma = gamma;
    config.hp.k_first = k_first;
    config.max_nodes = max_nodes;
    config.hp.validate();

    Corpus corpus{make_topic(topic_id, docs)};
    Summary summary;
    {
        py::gil_scoped_release release;
        auto provider = make_provider(config.embedder, corpus, config.seed);
        auto embedded = embed_corpus(corpus, *provider);
        summary = summarize_corpus(embedded, config, config.method).front();
    }
    py::list sentences;
    for (const auto& s : summary.sentences) {
        py::dict d;
        d["text"] = s.text;
        d["node_id"] = s.node_id;
        d["doc_id"] = s.doc_id;
        d["position"] = s.position;
        sentences.append(d);
    }
    py::dict out;
    out["topic_id"] = summary.topic_id;
    out["summary"] = summary.text;
    out["sentences"] = sentences;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ctsum C++ core";

    auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ProviderError>(m, "ProviderError", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    (void)input_error;

    m.def(
        "segment_sentences",
        [](const std::string& text) {
            std::vector<std::string> out;
            for (auto& s : segment_sentences(text)) out.push_back(std::move(s.text));
            return out;
        },
        py::arg("text"));
    m.def("count_words", [](const std::string& text) { return count_words(text); }, py::arg("text"));
    m.def("cosine_similarity", [](const Vector& a, const Vector& b) { return cosine_similarity(a, b); },
          py::arg("a"), py::arg("b"));

    m.def(
        "score_cs",
        [](const Vector& s, const Vector& inside, std::optional<Vector> outside, double delta) {
            return score_cs(s, NodeCentroids{inside, std::move(outside)}, delta);
        },
        py::arg("sentence"), py::arg("inside"), py::arg("outside") = py::none(), py::arg("delta") = 0.9);
    m.def("score_nr", [](const Vector& s, const std::vector<Vector>& sel) { return score_nr(s, sel); },
          py::arg("sentence"), py::arg("selected"));
    m.def("score_position", &score_position, py::arg("position"), py::arg("doc_sentence_count"));
    m.def(
        "score_final",
        [](double cs, double nr, double pos, double alpha, double beta, double gamma) {
            Hyperparams hp;
            hp.alpha = alpha;
            hp.beta = beta;
            hp.gamma = gamma;
            hp.validate();
            return score_final(cs, nr, pos, hp);
        },
        py::arg("cs"), py::arg("nr"), py::arg("pos"), py::arg("alpha") = 0.8, py::arg("beta") = 0.1,
        py::arg("gamma") = 0.1);

    m.def(
        "kmeans",
        [](const std::vector<Vector>& points, int k, std::uint64_t seed, int restarts) {
            auto r = kmeans(points, {.k = k, .seed = seed, .restarts = restarts});
            py::dict d;
            d["divisible"] = r.divisible;
            d["assignments"] = r.assignments;
            d["centroids"] = r.centroids;
            d["inertia"] = r.inertia;
            return d;
        },
        py::arg("points"), py::arg("k") = 2, py::arg("seed") = 0, py::arg("restarts") = 3);

    m.def("porter_stem", [](const std::string& w) { return porter_stem(w); }, py::arg("word"));
    m.def(
        "truncate",
        [](const std::string& text, std::optional<long> words, std::optional<long> bytes) {
            return truncate(text, make_budget(words, bytes));
        },
        py::arg("text"), py::arg("budget_words") = py::none(), py::arg("budget_bytes") = py::none());
    m.def(
        "rouge_n",
        [](const std::string& c, const std::vector<std::string>& refs, int n, bool stem) {
            return score_dict(rouge_n(c, refs, n, stem));
        },
        py::arg("candidate"), py::arg("references"), py::arg("n") = 1, py::arg("stem") = true);
    m.def(
        "rouge_l",
        [](const std::string& c, const std::vector<std::string>& refs, bool stem) {
            return score_dict(rouge_l(c, refs, stem));
        },
        py::arg("candidate"), py::arg("references"), py::arg("stem") = true);
    m.def(
        "rouge_su4",
        [](const std::string& c, const std::vector<std::string>& refs, bool stem) {
            return score_dict(rouge_su4(c, refs, stem));
        },
        py::arg("candidate"), py::arg("references"), py::arg("stem") = true);
    m.def(
        "rouge",
        [](const std::string& metric, const std::string& c, const std::vector<std::string>& refs, bool stem) {
            return score_dict(rouge(parse_metric(metric), c, refs, stem));
        },
        py::arg("metric"), py::arg("candidate"), py::arg("references"), py::arg("stem") = true);

    m.def("summarize", &summarize_topic, py::arg("topic_id"), py::arg("documents"), py::kw_only(),
          py::arg("method") = "ours-final", py::arg("budget_words") = py::none(),
          py::arg("budget_bytes") = py::none(), py::arg("embedder") = "builtin:256", py::arg("seed") = 7,
          py::arg("delta") = 0.9, py::arg("alpha") = 0.8, py::arg("beta") = 0.1, py::arg("gamma") = 0.1,
          py::arg("k_first") = 3, py::arg("max_nodes") = 0,
          "Summarize one topic given (doc_id, text) pairs.");
}
