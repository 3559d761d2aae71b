#include <doctest.h>

#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ctsum/embedding.hpp"
#include "ctsum/error.hpp"
#include "support/fixtures.hpp"

using namespace ctsum;

namespace {

class FixedProvider final : public EmbeddingProvider {
public:
    explicit FixedProvider(std::vector<Vector> v) : vectors_(std::move(v)) {}
    std::vector<Vector> embed(std::span<const EmbeddingRequest> requests) override {
        return {vectors_.begin(), vectors_.begin() + static_cast<long>(requests.size())};
    }
    std::string name() const override { return "fixed"; }

private:
    std::vector<Vector> vectors_;
};

double norm(const Vector& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("cosine_similarity") {
    CHECK(cosine_similarity(Vector{1, 0}, Vector{1, 0}) == doctest::Approx(1.0));
    CHECK(cosine_similarity(Vector{1, 0}, Vector{0, 1}) == doctest::Approx(0.0));
    const double expected = 32.0 / (std::sqrt(14.0) * std::sqrt(77.0));
    CHECK(cosine_similarity(Vector{1, 2, 3}, Vector{4, 5, 6}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(cosine_similarity(Vector{1, 2, 3}, Vector{4, 5, 6}) == doctest::Approx(0.9746).epsilon(1e-4));
    CHECK(cosine_similarity(Vector{0, 0}, Vector{1, 1}) == 0.0);
    CHECK_THROWS_AS(cosine_similarity(Vector{1, 0}, Vector{1, 0, 0}), DimensionError);
}

TEST_CASE("cosine_similarity is symmetric and scale invariant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int i = 0; i < 500; ++i) {
        auto pts = testing::random_points(rng, 2, 1 + rng() % 8);
        double c = scale(rng);
        Vector scaled = pts[0];
        for (double& x : scaled) x *= c;
        CHECK(std::abs(cosine_similarity(pts[0], pts[1]) - cosine_similarity(pts[1], pts[0])) <= 1e-9);
        CHECK(std::abs(cosine_similarity(scaled, pts[1]) - cosine_similarity(pts[0], pts[1])) <= 1e-9);
    }
}

TEST_CASE("document vectors are means of sentence vectors") {
    auto topic = make_topic("t", {{"a", "One. Two."}, {"b", "Only."}});
    FixedProvider provider({{1, 0}, {0, 1}, {0.3, 0.7}});
    auto et = embed_topic(topic, provider);
    CHECK(et.dim == 2);
    CHECK(et.document_vectors[0] == Vector{0.5, 0.5});
    CHECK(et.document_vectors[1] == Vector{0.3, 0.7});
    CHECK(et.doc_sentences[1] == std::vector<int>{2});
    CHECK(et.sentence(2).text == "Only.");
}

TEST_CASE("document mean invariant on random corpora") {
    std::mt19937_64 rng(5);
    auto corpus = testing::planted_corpus({.topics = 3, .seed = 9});
    TfidfEmbeddingProvider provider(corpus, 32, 1);
    for (const auto& et : embed_corpus(corpus, provider)) {
        for (std::size_t d = 0; d < et.document_vectors.size(); ++d) {
            for (std::size_t i = 0; i < et.dim; ++i) {
                double sum = 0;
                for (int s : et.doc_sentences[d]) sum += et.sentence_vectors[static_cast<std::size_t>(s)][i];
                CHECK(std::abs(et.document_vectors[d][i] - sum / static_cast<double>(et.doc_sentences[d].size())) <=
                      1e-9);
            }
        }
    }
}

TEST_CASE("dimension mismatch from a provider is an error") {
    auto topic = make_topic("t", {{"a", "One. Two."}});
    FixedProvider provider({Vector(4, 1.0), Vector(8, 1.0)});
    CHECK_THROWS_WITH_AS(embed_topic(topic, provider), doctest::Contains("dimension"), ProviderError);
    FixedProvider nan_provider({Vector{1, NAN}, Vector{1, 1}});
    CHECK_THROWS_AS(embed_topic(topic, nan_provider), ProviderError);
}

TEST_CASE("file provider") {
    testing::TempDir dir;
    const auto path = dir.path() / "vec.jsonl";
    std::ofstream(path) << R"({"key":"t1/d0/s0","vector":[0.1,0.2]})" << "\n"
                        << R"({"key":"t1/d0/s1","vector":[0.3,0.4]})" << "\n";
    FileEmbeddingProvider provider(path);
    CHECK(provider.size() == 2);
    auto topic = make_topic("t1", {{"a", "First. Second."}});
    auto et = embed_topic(topic, provider);
    CHECK(et.sentence_vectors[0] == Vector{0.1, 0.2});

    auto other = make_topic("t1", {{"a", "First. Second. Third."}});
    CHECK_THROWS_WITH_AS(embed_topic(other, provider), doctest::Contains("t1/d0/s2"), ProviderError);

    const auto dup = dir.path() / "dup.jsonl";
    std::ofstream(dup) << R"({"key":"k","vector":[1]})" << "\n" << R"({"key":"k","vector":[2]})" << "\n";
    CHECK_THROWS_WITH_AS(FileEmbeddingProvider{dup}, doctest::Contains("duplicate"), ProviderError);

    const auto bad = dir.path() / "bad.jsonl";
    std::ofstream(bad) << R"({"key":"k","vec":[1]})" << "\n";
    CHECK_THROWS_AS(FileEmbeddingProvider{bad}, ProviderError);
}

TEST_CASE("builtin tfidf provider") {
    auto corpus = Corpus{make_topic("t", {{"a", "The cat sat on the mat. The cat sat on the mat."},
                                          {"b", "Dogs bark loudly. ... !!!"}})};
    TfidfEmbeddingProvider provider(corpus, 16, 42);
    auto et = embed_topic(corpus[0], provider);
    CHECK(et.sentence_vectors[0] == et.sentence_vectors[1]);
    CHECK(cosine_similarity(et.sentence_vectors[0], et.sentence_vectors[1]) == doctest::Approx(1.0));
    for (const auto& v : et.sentence_vectors) CHECK(std::abs(norm(v) - 1.0) <= 1e-9);

    Vector e1(16, 0.0);
    e1[0] = 1.0;
    CHECK(provider.embed_text("t", "... !!! ---") == e1);

    TfidfEmbeddingProvider again(corpus, 16, 42);
    CHECK(embed_topic(corpus[0], again).sentence_vectors == et.sentence_vectors);
    CHECK_THROWS_AS(TfidfEmbeddingProvider(corpus, 1, 0), InputError);
}

TEST_CASE("make_provider parses specs") {
    Corpus corpus{make_topic("t", {{"a", "Hello world."}})};
    CHECK(make_provider("builtin:8", corpus, 1)->name() == "builtin:8");
    CHECK_THROWS_AS(make_provider("builtin:x", corpus, 1), InputError);
    CHECK_THROWS_AS(make_provider("magic:1", corpus, 1), InputError);
    CHECK_THROWS_AS(make_provider("file:/nonexistent/path.jsonl", corpus, 1), ProviderError);
}

TEST_CASE("remote provider protocol") {
    httplib::Server server;
    std::atomic<int> calls{0};
    server.Post("/v1/embed", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        auto body = nlohmann::json::parse(req.body);
        nlohmann::json vectors = nlohmann::json::array();
        for (const auto& t : body.at("texts")) {
            auto s = t.get<std::string>();
            vectors.push_back({static_cast<double>(s.size()), s == "a" ? 1.0 : 0.0});
        }
        if (body.at("texts").size() == 3) vectors.erase(vectors.begin());  // protocol violation
        res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    {
        RemoteEmbeddingProvider provider(url, 2);
        std::vector<EmbeddingRequest> reqs{{"t", "t/d0/s0", "a"}, {"t", "t/d0/s1", "bb"}};
        auto out = provider.embed(reqs);
        REQUIRE(out.size() == 2);
        CHECK(out[0] == Vector{1.0, 1.0});
        CHECK(out[1] == Vector{2.0, 0.0});
    }
    {
        RemoteEmbeddingProvider provider(url, 3);
        std::vector<EmbeddingRequest> reqs{{"t", "k0", "a"}, {"t", "k1", "b"}, {"t", "k2", "c"}};
        CHECK_THROWS_WITH_AS(provider.embed(reqs), doctest::Contains("2 vectors for 3 texts"), ProviderError);
    }
    {
        // batching: 5 texts in batches of 2 -> 3 requests
        int before = calls;
        RemoteEmbeddingProvider provider(url, 2);
        std::vector<EmbeddingRequest> reqs(5, EmbeddingRequest{"t", "k", "xyz"});
        CHECK(provider.embed(reqs).size() == 5);
        CHECK(calls - before == 3);
    }
    server.stop();
    th.join();

    RemoteEmbeddingProvider down("http://127.0.0.1:" + std::to_string(port), 4, 2, 1);
    std::vector<EmbeddingRequest> reqs{{"t", "k", "a"}};
    CHECK_THROWS_WITH_AS(down.embed(reqs), doctest::Contains("after 3 attempts"), ProviderError);
    CHECK(down.attempts_made() == 3);
    CHECK_THROWS_AS(RemoteEmbeddingProvider("no-scheme"), InputError);
}

TEST_CASE("remote provider retries server errors") {
    httplib::Server server;
    std::atomic<int> calls{0};
    server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
        if (++calls <= 2) {
            res.status = 503;
            return;
        }
        auto n = nlohmann::json::parse(req.body).at("texts").size();
        nlohmann::json vectors = nlohmann::json::array();
        for (std::size_t i = 0; i < n; ++i) vectors.push_back({1.0, 0.0});
        res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
    });
    server.Post("/bad/embed", [&](const httplib::Request&, httplib::Response& res) { res.status = 400; });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    const std::string base = "http://127.0.0.1:" + std::to_string(port);
    std::vector<EmbeddingRequest> reqs{{"t", "k", "a"}};
    RemoteEmbeddingProvider flaky(base, 8, 3, 5);
    CHECK(flaky.embed(reqs).size() == 1);
    CHECK(flaky.attempts_made() == 3);

    RemoteEmbeddingProvider client_error(base + "/bad", 8, 3, 5);
    CHECK_THROWS_WITH_AS(client_error.embed(reqs), doctest::Contains("status 400"), ProviderError);
    CHECK(client_error.attempts_made() == 1);

    server.stop();
    th.join();
}
