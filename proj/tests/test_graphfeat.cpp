#include <numeric>
#include <random>

#include "doctest.h"
#include "litiscope/error.hpp"
#include "litiscope/graphfeat.hpp"
#include "oracles.hpp"

using namespace litiscope;

namespace {

PatentRecord rec(const std::string& id, std::vector<std::string> refs) {
    PatentRecord r;
    r.id = id;
    r.issue_date = *parse_date("2001-01-01");
    r.claims_text = "c";
    r.backward_refs = std::move(refs);
    return r;
}

Corpus corpus_of(std::vector<PatentRecord> records) {
    Corpus c;
    c.records = std::move(records);
    return c;
}

} // namespace

TEST_CASE("build_graph: nodes, edges and external references") {
    const auto g = build_graph(corpus_of({rec("A", {"B", "C"}), rec("B", {}), rec("C", {})}));
    CHECK(g.size() == 3);
    CHECK(g.edge_count() == 2);

    const auto g2 = build_graph(corpus_of({rec("A", {"Z"})}));
    REQUIRE(g2.contains("Z"));
    CHECK(g2.is_external(g2.find("Z")));
    CHECK_FALSE(g2.is_external(g2.find("A")));

    CitationGraph g3;
    const auto a = g3.add_node("A", false);
    CHECK_FALSE(g3.add_edge(a, a));
    const auto b = g3.add_node("B", false);
    CHECK(g3.add_edge(a, b));
    CHECK_FALSE(g3.add_edge(a, b));
    CHECK(g3.edge_count() == 1);
}

TEST_CASE("pagerank: isolated nodes share evenly") {
    const auto g = build_graph(corpus_of({rec("A", {}), rec("B", {})}));
    const auto pr = pagerank(g);
    CHECK(pr[0] == doctest::Approx(0.5));
    CHECK(pr[1] == doctest::Approx(0.5));
}

TEST_CASE("pagerank: chain matches the dense oracle") {
    const auto g = build_graph(corpus_of({rec("A", {"B"}), rec("B", {"C"}), rec("C", {})}));
    const auto pr = pagerank(g);
    const auto want = oracle::dense_pagerank(g);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(pr[i] - want[i]) <= 1e-8);
    // Score flows to cited patents, so the end of the chain ranks highest.
    CHECK(pr[g.find("C")] > pr[g.find("A")]);
}

TEST_CASE("pagerank: random small graphs against the dense oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng() % 10;
        CitationGraph g;
        for (std::size_t i = 0; i < n; ++i) g.add_node("N" + std::to_string(i), false);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                if (rng() % 4 == 0) g.add_edge(u, v);
        const auto pr = pagerank(g);
        const auto want = oracle::dense_pagerank(g);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(pr[i] >= 0.0);
            CHECK(std::abs(pr[i] - want[i]) <= 1e-8);
            sum += pr[i];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("pagerank: non-convergence is reported") {
    const auto g = build_graph(corpus_of({rec("A", {"B"}), rec("B", {"C"}), rec("C", {})}));
    PageRankOptions o;
    o.max_iter = 1;
    CHECK_THROWS_AS(pagerank(g, o), ConvergenceError);
    CHECK_THROWS_AS(pagerank(CitationGraph{}), DataError);
}

TEST_CASE("ref_features") {
    SUBCASE("no references gives zeros") {
        const auto g = build_graph(corpus_of({rec("A", {})}));
        const auto f = ref_features(g, pagerank(g), {}, "A");
        CHECK(f == RefFeatures{});
    }
    SUBCASE("chain: second layer of A is C") {
        const auto g = build_graph(corpus_of({rec("A", {"B"}), rec("B", {"C"}), rec("C", {})}));
        const auto pr = pagerank(g);
        const auto f = ref_features(g, pr, {}, "A");
        CHECK(f.n_backward == 1);
        CHECK(f.n_backward_2nd == 1);
        CHECK(f.avg_pagerank_backward == doctest::Approx(pr[g.find("B")]));
    }
    SUBCASE("diamond counts the shared second-layer node once") {
        const auto g = build_graph(corpus_of({rec("A", {"B", "C"}), rec("B", {"D"}), rec("C", {"D"}), rec("D", {})}));
        const auto f = ref_features(g, pagerank(g), {"D"}, "A");
        CHECK(f.n_backward == 2);
        CHECK(f.n_backward_2nd == 1);
        CHECK(f.n_lit_backward == 0);
        CHECK(f.n_lit_backward_2nd == 1);
    }
    SUBCASE("second layer excludes the origin and the first layer") {
        const auto g = build_graph(corpus_of({rec("A", {"B", "C"}), rec("B", {"A", "C", "D"}), rec("C", {}), rec("D", {})}));
        const auto f = ref_features(g, pagerank(g), {"B", "C", "D"}, "A");
        CHECK(f.n_backward_2nd == 1);
        CHECK(f.n_lit_backward == 2);
        CHECK(f.n_lit_backward <= f.n_backward);
        CHECK(f.n_lit_backward_2nd <= f.n_backward_2nd);
    }
    SUBCASE("unknown id") {
        const auto g = build_graph(corpus_of({rec("A", {})}));
        CHECK_THROWS_AS(ref_features(g, pagerank(g), {}, "Q"), DataError);
    }
    SUBCASE("independent of reference order") {
        const auto g1 = build_graph(corpus_of({rec("A", {"B", "C"}), rec("B", {"D"}), rec("C", {"E"}), rec("D", {}), rec("E", {})}));
        const auto g2 = build_graph(corpus_of({rec("A", {"C", "B"}), rec("B", {"D"}), rec("C", {"E"}), rec("D", {}), rec("E", {})}));
        CHECK(ref_features(g1, pagerank(g1), {"E"}, "A") == ref_features(g2, pagerank(g2), {"E"}, "A"));
    }
}
