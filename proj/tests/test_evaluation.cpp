#include <doctest.h>

#include "mtforge/errors.hpp"
#include "mtforge/evaluation.hpp"

#include "support/paths.hpp"
#include "support/randgen.hpp"

using namespace mtforge;
using nlohmann::json;

namespace {

Dialogue scored_dialogue(const std::string& id, const std::vector<std::string>& gqls) {
    Dialogue d;
    d.id = id;
    for (std::size_t i = 0; i < gqls.size(); ++i) {
        Turn t;
        t.round = static_cast<int>(i) + 1;
        t.question_raw = "q";
        t.question_complete = "Question";
        t.gql = gqls[i];
        if (i > 0) t.pattern = static_cast<Pattern>(i % 6);
        d.turns.push_back(std::move(t));
    }
    return d;
}

}  // namespace

TEST_CASE("exact match compares canonical logical forms") {
    CHECK(exact_match("MATCH (a:stock) RETURN a.name",
                      "match (other:stock) RETURN other.name"));
    CHECK(exact_match("MATCH (a:stock) RETURN a.name LIMIT 1",
                      "MATCH (a:stock) RETURN a.name LIMIT 1"));
    CHECK_FALSE(exact_match("MATCH (a:stock) RETURN a.name LIMIT 1",
                            "MATCH (a:stock) RETURN a.name LIMIT 2"));
    CHECK_FALSE(exact_match("this does not parse", "MATCH (a:stock) RETURN a.name"));
    CHECK_THROWS_AS(exact_match("MATCH (a:stock) RETURN a.name", "gold is broken"),
                    GoldParseError);
}

TEST_CASE("execution match compares results, not text") {
    PropertyGraph graph = testsupport::fixture_graph();
    // two syntactically different queries, same single row
    CHECK(execution_match(
        "MATCH (s:stock {name: 'CITIC Securities'}) RETURN s.opening_price",
        "MATCH (s:stock)-[:has_data]->(d:stock_data {date: '2025-01-08'}) WHERE s.name = "
        "'CITIC Securities' RETURN d.opening_price",
        graph));
    // extra row
    CHECK_FALSE(execution_match("MATCH (s:stock) RETURN s.name",
                                "MATCH (s:stock {name: 'CITIC Securities'}) RETURN s.name",
                                graph));
    // failed prediction scores false, not error
    CHECK_FALSE(execution_match("MATCH (x:unknown_label) RETURN x.name",
                                "MATCH (s:stock) RETURN s.name", graph));
    CHECK_THROWS_AS(
        execution_match("MATCH (s:stock) RETURN s.name", "MATCH (x:nope) RETURN x.name", graph),
        GoldExecutionError);
}

TEST_CASE("execution match is order-sensitive only under gold ORDER BY") {
    PropertyGraph graph = testsupport::fixture_graph();
    // unordered gold: any ordering of the same rows matches
    CHECK(execution_match("MATCH (s:stock) RETURN s.name ORDER BY s.name DESC",
                          "MATCH (s:stock) RETURN s.name", graph));
    // ordered gold: reversed rows do not match
    CHECK_FALSE(execution_match("MATCH (s:stock) RETURN s.name ORDER BY s.name",
                                "MATCH (s:stock) RETURN s.name ORDER BY s.name DESC", graph));
}

TEST_CASE("compute_metrics reproduces the hand-counted example") {
    PropertyGraph graph = testsupport::fixture_graph();
    // 2 dialogues x 3 turns; 4 turn-level form matches; one dialogue fully correct
    std::vector<std::string> gold_gqls = {
        "MATCH (s:stock) RETURN s.name",
        "MATCH (s:stock {name: 'CITIC Securities'}) RETURN s.opening_price",
        "MATCH (i:industry) RETURN i.name",
    };
    std::vector<Dialogue> gold = {scored_dialogue("d1", gold_gqls),
                                  scored_dialogue("d2", gold_gqls)};
    PredictionSet preds;
    // d1: all three exactly right
    preds.by_turn[{"d1", 1}] = gold_gqls[0];
    preds.by_turn[{"d1", 2}] = gold_gqls[1];
    preds.by_turn[{"d1", 3}] = gold_gqls[2];
    // d2: one right, two wrong
    preds.by_turn[{"d2", 1}] = gold_gqls[0];
    preds.by_turn[{"d2", 2}] = "MATCH (s:stock) RETURN s.closing_price";
    preds.by_turn[{"d2", 3}] = "unparseable";

    MetricsReport report = compute_metrics(preds, gold, graph);
    CHECK(report.em == doctest::Approx(4.0 / 6.0));
    CHECK(report.aem == doctest::Approx(0.5));
    CHECK(report.em_hits == 4);
    CHECK(report.aem_hits == 1);
    CHECK(report.aem <= report.em);
    CHECK(report.aex <= report.ex);
}

TEST_CASE("identity predictions score 1.0 everywhere") {
    PropertyGraph graph = testsupport::fixture_graph();
    auto gold = read_dataset(testsupport::figure1_path());
    PredictionSet preds;
    for (const auto& d : gold)
        for (const auto& t : d.turns) preds.by_turn[{d.id, t.round}] = t.gql;
    MetricsReport report = compute_metrics(preds, gold, graph);
    CHECK(report.em == 1.0);
    CHECK(report.aem == 1.0);
    CHECK(report.ex == 1.0);
    CHECK(report.aex == 1.0);
    for (const auto& [name, bucket] : report.by_round) {
        CHECK(bucket.em == bucket.total);
        CHECK(bucket.ex == bucket.total);
    }
}

TEST_CASE("missing predictions count as incorrect, unknown ones are alignment errors") {
    PropertyGraph graph = testsupport::fixture_graph();
    auto gold = read_dataset(testsupport::figure1_path());
    PredictionSet partial;
    partial.by_turn[{"figure1", 1}] = gold[0].turns[0].gql;
    MetricsReport report = compute_metrics(partial, gold, graph);
    CHECK(report.em == doctest::Approx(0.25));

    PredictionSet bogus;
    bogus.by_turn[{"nope", 1}] = "MATCH (a) RETURN a";
    CHECK_THROWS_AS(compute_metrics(bogus, gold, graph), AlignmentError);
}

TEST_CASE("bucket numerators sum to the global numerators") {
    PropertyGraph graph = testsupport::fixture_graph();
    auto gold = read_dataset(testsupport::figure1_path());
    PredictionSet preds;
    preds.by_turn[{"figure1", 1}] = gold[0].turns[0].gql;
    preds.by_turn[{"figure1", 2}] = gold[0].turns[1].gql;
    preds.by_turn[{"figure1", 3}] = "broken";
    MetricsReport report = compute_metrics(preds, gold, graph);
    long round_em = 0, round_ex = 0, pattern_em = 0, pattern_ex = 0;
    for (const auto& [name, b] : report.by_round) round_em += b.em, round_ex += b.ex;
    for (const auto& [name, b] : report.by_pattern) pattern_em += b.em, pattern_ex += b.ex;
    CHECK(round_em == report.em_hits);
    CHECK(round_ex == report.ex_hits);
    CHECK(pattern_em == report.em_hits);
    CHECK(pattern_ex == report.ex_hits);
}

TEST_CASE("AEM <= EM and AEX <= EX across randomized prediction sets") {
    PropertyGraph graph = testsupport::random_graph(4);
    std::vector<Dialogue> gold;
    for (int d = 0; d < 4; ++d) {
        std::vector<std::string> gqls;
        for (int t = 0; t < 4; ++t)
            gqls.push_back(testsupport::random_query(graph, 100 + d * 10 + t));
        gold.push_back(scored_dialogue("g" + std::to_string(d), gqls));
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        PredictionSet preds;
        for (const auto& d : gold)
            for (const auto& t : d.turns) {
                switch (rng.bounded(3)) {
                    case 0: preds.by_turn[{d.id, t.round}] = t.gql; break;
                    case 1:
                        preds.by_turn[{d.id, t.round}] =
                            testsupport::random_query(graph, rng.next_u64());
                        break;
                    default: break;  // missing
                }
            }
        MetricsReport report = compute_metrics(preds, gold, graph);
        CHECK(report.aem <= report.em + 1e-12);
        CHECK(report.aex <= report.ex + 1e-12);
    }
}

TEST_CASE("a superset of correct predictions never lowers a metric") {
    PropertyGraph graph = testsupport::fixture_graph();
    auto gold = read_dataset(testsupport::figure1_path());
    PredictionSet partial;
    partial.by_turn[{"figure1", 1}] = gold[0].turns[0].gql;
    PredictionSet superset = partial;
    superset.by_turn[{"figure1", 2}] = gold[0].turns[1].gql;
    MetricsReport a = compute_metrics(partial, gold, graph);
    MetricsReport b = compute_metrics(superset, gold, graph);
    CHECK(b.em >= a.em);
    CHECK(b.ex >= a.ex);
    CHECK(b.aem >= a.aem);
    CHECK(b.aex >= a.aex);
}

TEST_CASE("keyword analytics match an independent recount on a known dataset") {
    // known composition: one Figure-1 Q1 (3 informative), one bare lookup (0),
    // one filter with AND (2: WHERE, AND) plus LIMIT (1) = 3
    std::vector<std::string> gqls = {
        "MATCH (s:stock)-[:belong_to]->(i:industry) WHERE i.name = 'securities' RETURN s.name "
        "ORDER BY s.opening_price DESC LIMIT 1",
        "MATCH (s:stock) RETURN s.name",
        "MATCH (s:stock) WHERE s.opening_price > 10 AND s.closing_price < 50 RETURN s.name "
        "LIMIT 3",
    };
    auto stats = analyze_dataset({scored_dialogue("k", gqls)});
    CHECK(stats.gql_count == 3);
    CHECK(stats.totals.at("MATCH") == 3);
    CHECK(stats.totals.at("RETURN") == 3);
    CHECK(stats.totals.at("WHERE") == 2);
    CHECK(stats.totals.at("ORDER BY") == 1);
    CHECK(stats.totals.at("LIMIT") == 2);
    CHECK(stats.totals.at("AND") == 1);
    CHECK(stats.informative_total == 3 + 0 + 3);
    CHECK(stats.informative_avg == doctest::Approx(2.0));
    CHECK(stats.query_type_counts.at("NumericalSorting") == 1);
    CHECK(stats.query_type_counts.at("EntityProperty") == 2);
}

TEST_CASE("empty dataset analytics are all zero") {
    auto stats = analyze_dataset({});
    CHECK(stats.gql_count == 0);
    CHECK(stats.informative_total == 0);
    CHECK(stats.informative_avg == 0.0);
}

TEST_CASE("dialogue example stats: one Q1 query averages 3.0") {
    std::vector<std::string> one = {
        "MATCH (s:stock)-[:belong_to]->(i:industry) WHERE i.name = 'securities' RETURN s.name "
        "ORDER BY s.opening_price DESC LIMIT 1"};
    auto stats = analyze_dataset({scored_dialogue("q1", one)});
    CHECK(stats.informative_total == 3);
    CHECK(stats.informative_avg == doctest::Approx(3.0));
}
