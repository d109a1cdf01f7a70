// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mtforge/text.hpp"

#include "mtforge/da.hpp"
#include "mtforge/dialogue.hpp"
#include "mtforge/errors.hpp"
#include "mtforge/evaluation.hpp"
#include "mtforge/forge.hpp"
#include "mtforge/gql/analysis.hpp"
#include "mtforge/gql/executor.hpp"
#include "mtforge/gql/parser.hpp"
#include "mtforge/gql/printer.hpp"
#include "mtforge/graph.hpp"
#include "mtforge/quality.hpp"
#include "mtforge/rng.hpp"

#include "support/astgen.hpp"
#include "support/oracle.hpp"
#include "support/paths.hpp"
#include "support/randgen.hpp"

using namespace mtforge;

namespace {

struct Criterion {
    int number;
    std::string label;
    double budget_seconds;
    std::function<void(std::string&)> run;  // throws or appends to detail on failure
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure(message);
}

// ---- criterion 1: Figure-1 golden test ------------------------------------

void criterion_figure1(std::string&) {
    PropertyGraph graph = testsupport::fixture_graph();
    auto gold = read_dataset(testsupport::figure1_path());
    require(gold.size() == 1 && gold[0].turns.size() == 4, "fixture dialogue missing");

    const auto& turns = gold[0].turns;
    auto run = [&](int i) { return gql::execute(gql::parse(turns[i].gql), graph); };

    ResultTable q1 = run(0);
    require(q1.rows.size() == 1 && q1.rows[0][0].equals(Value("CITIC Securities")),
            "Q1 must answer 'CITIC Securities'");
    ResultTable q2 = run(1);
    require(q2.rows.size() == 1 && q2.rows[0][0].equals(Value(30.26)), "Q2 must answer 30.26");
    ResultTable q3 = run(2);
    require(q3.rows.size() == 1 && q3.rows[0][0].equals(Value(36.25)), "Q3 must answer 36.25");
    ResultTable q4 = run(3);
    require(q4.rows.size() == 1 && q4.rows[0][0].equals(Value(20.00)), "Q4 must answer 20.00");
}

// ---- criterion 2: executor-oracle equivalence ------------------------------

void criterion_oracle(std::string& detail) {
    int cases = 0;
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
        PropertyGraph graph = testsupport::random_graph(seed);
        for (std::uint64_t q = 0; q < 4; ++q) {
            std::string query = testsupport::random_query(graph, seed * 1000 + q);
            gql::QueryAst ast = gql::parse(query);
            ResultTable actual = gql::execute(ast, graph);
            ResultTable expected = testsupport::oracle_execute(ast, graph);
            require(testsupport::tables_equal(actual, expected),
                    "executor/oracle mismatch on: " + query);
            ++cases;
        }
    }
    require(cases >= 1000, "need at least 1000 cases");
    detail = std::to_string(cases) + " cases";
}

// ---- criterion 3: parser round-trip ----------------------------------------

void criterion_roundtrip(std::string& detail) {
    int cases = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        gql::QueryAst ast = testsupport::random_ast(seed);
        std::string printed = gql::print_canonical(ast);
        gql::QueryAst reparsed = gql::parse(printed);
        require(gql::ast_equal(ast, reparsed), "round-trip failed for: " + printed);
        ++cases;
    }
    detail = std::to_string(cases) + " ASTs";
}

// ---- criterion 4: Algorithm-1 arithmetic ------------------------------------

void criterion_algorithm1(std::string&) {
    PropertyGraph graph = testsupport::fixture_graph();
    ForgeConfig config;
    SessionState state = new_session(graph.schema(), graph, config, 1);
    Turn turn;
    turn.round = 1;
    turn.gql = "MATCH (v1:stock {name: 'CITIC Securities'}) RETURN v1.closing_price";
    turn.answer = nlohmann::json::array({30.41});
    turn.entities = {"CITIC Securities"};
    state.history.push_back(turn);
    state.entity_set.insert("CITIC Securities");
    state.entity_types["CITIC Securities"] = "stock";

    PatternChoice first = select_pattern(state, graph.schema(), graph);
    require(std::fabs(state.weight(first.pattern) - 1.0 / 12.0) < 1e-12,
            "chosen weight must be exactly 1/12");
    for (Pattern p : kAllPatterns) {
        if (p == first.pattern) continue;
        require(std::fabs(state.weight(p) - 11.0 / 60.0) < 1e-12,
                "other weights must be exactly 11/60");
    }

    Rng rng(99);
    for (int step = 0; step < 100; ++step) {
        state.history.back().answer = rng.bounded(2) == 0 ? nlohmann::json::array({1, 2})
                                                          : nlohmann::json::array({1});
        select_pattern(state, graph.schema(), graph);
        double sum = 0;
        for (Pattern p : kAllPatterns) sum += state.weight(p);
        require(std::fabs(sum - 1.0) < 1e-9, "weights must sum to 1 +- 1e-9");
    }
}

// ---- criterion 5: end-to-end mock forge -------------------------------------

void criterion_forge(std::string& detail) {
    PropertyGraph graph = testsupport::fixture_graph();
    PromptTemplates templates = testsupport::templates();
    MockGenerator generator(graph.schema());
    FallbackEmbedder embedder;
    ForgeRuntime runtime;
    runtime.generator = &generator;
    runtime.templates = &templates;
    runtime.embedder = &embedder;
    ForgeConfig config;
    config.seed = 2024;
    config.worker_count = 2;

    GenerateResult result = generate_dataset(graph, runtime, config, 100);
    require(result.dialogues.size() == 100, "all 100 dialogues must be produced");

    for (const auto& dialogue : result.dialogues) {
        require(dialogue.turns.size() >= 5 && dialogue.turns.size() <= 8,
                dialogue.id + ": round count outside [5,8]");
        std::set<std::string> seen;
        for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
            const Turn& turn = dialogue.turns[t];
            ResultTable result_table = gql::execute(gql::parse(turn.gql), graph);
            require(render_answer(result_table) == turn.answer,
                    dialogue.id + ": answer not grounded in the graph");
            if (t > 0) {
                bool overlap = false;
                for (const auto& e : turn.entities)
                    if (seen.count(e)) overlap = true;
                require(overlap || turn.pattern == Pattern::P4,
                        dialogue.id + ": interdependence violated at round " +
                            std::to_string(turn.round));
            }
            seen.insert(turn.entities.begin(), turn.entities.end());
        }
    }

    // self-evaluation: gold scored against itself is perfect
    PredictionSet preds;
    for (const auto& d : result.dialogues)
        for (const auto& t : d.turns) preds.by_turn[{d.id, t.round}] = t.gql;
    MetricsReport report = compute_metrics(preds, result.dialogues, graph);
    require(report.em == 1.0 && report.aem == 1.0 && report.ex == 1.0 && report.aex == 1.0,
            "self-evaluation must be 1.0 on all four metrics");
    detail = "100 dialogues, " + std::to_string(report.total_turns) + " turns";
}

// ---- criterion 6: filters ----------------------------------------------------

void criterion_filters(std::string&) {
    GraphSchema schema = testsupport::fixture_schema();
    PropertyGraph graph = testsupport::fixture_graph();
    PromptTemplates templates = testsupport::templates();
    MockGenerator generator(graph.schema());
    FallbackEmbedder embedder;
    ForgeRuntime runtime;
    runtime.generator = &generator;
    runtime.templates = &templates;
    runtime.embedder = &embedder;
    ForgeConfig config;
    config.seed = 31;
    GenerateResult generated = generate_dataset(graph, runtime, config, 30);

    // masked filter + post-filter certificate
    FilterReport masked = filter_masked_gql(generated.dialogues, schema);
    std::vector<Dialogue> kept;
    for (const auto& d : generated.dialogues)
        for (const auto& id : masked.kept)
            if (d.id == id) kept.push_back(d);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        auto ti = masked_templates(kept[i], schema);
        for (std::size_t j = i + 1; j < kept.size(); ++j) {
            auto tj = masked_templates(kept[j], schema);
            int shared = 0;
            for (const auto& t : ti)
                if (std::find(tj.begin(), tj.end(), t) != tj.end()) ++shared;
            require(shared <= 3, "kept pair shares more than 3 masked templates");
        }
    }
    FilterReport masked_again = filter_masked_gql(kept, schema);
    require(masked_again.discarded.empty(), "masked filter must be idempotent");

    // embedding filter + certificate + idempotence
    FilterReport embedded = filter_embedding(kept, embedder, 0.6);
    std::vector<Dialogue> kept2;
    for (const auto& d : kept)
        for (const auto& id : embedded.kept)
            if (d.id == id) kept2.push_back(d);
    for (std::size_t i = 0; i < kept2.size(); ++i)
        for (std::size_t j = i + 1; j < kept2.size(); ++j) {
            double cos = cosine_similarity(fallback_embed(dialogue_question_text(kept2[i])),
                                           fallback_embed(dialogue_question_text(kept2[j])));
            require(cos <= 0.6, "kept pair above the 0.6 cosine threshold");
        }
    FilterReport embedded_again = filter_embedding(kept2, embedder, 0.6);
    require(embedded_again.discarded.empty(), "embedding filter must be idempotent");

    // boundary: exactly three shared templates are kept
    auto make_dialogue = [&](const std::string& id, const std::vector<std::string>& gqls) {
        Dialogue d;
        d.id = id;
        for (std::size_t i = 0; i < gqls.size(); ++i) {
            Turn t;
            t.round = static_cast<int>(i) + 1;
            t.question_raw = "q";
            t.question_complete = "Q " + id + " " + std::to_string(i);
            t.gql = gqls[i];
            d.turns.push_back(std::move(t));
        }
        return d;
    };
    std::vector<std::string> base = {
        "MATCH (a:stock {name: 'CITIC Securities'}) RETURN a.opening_price",
        "MATCH (a:stock {name: 'CITIC Securities'}) RETURN a.closing_price",
        "MATCH (a:stock {name: 'CITIC Securities'})-[:belong_to]->(i:industry) RETURN i.name",
        "MATCH (i:industry) RETURN COUNT(i.name)",
    };
    std::vector<std::string> three_shared = {base[0], base[1], base[2],
                                             "MATCH (a:stock) RETURN COUNT(*)"};
    std::vector<std::string> four_shared = {base[0], base[1], base[2], base[3]};
    FilterReport boundary3 = filter_masked_gql(
        {make_dialogue("x", base), make_dialogue("y", three_shared)}, schema);
    require(boundary3.kept.size() == 2, "exactly 3 shared templates must keep both");
    FilterReport boundary4 = filter_masked_gql(
        {make_dialogue("x", base), make_dialogue("y", four_shared)}, schema);
    require(boundary4.kept.size() == 1 && boundary4.discarded.size() == 1,
            "more than 3 shared templates must discard the later dialogue");

    // boundary: cosine just below / above the threshold under the fallback embedder
    std::vector<std::string> one_gql = {"MATCH (a:stock) RETURN a.name"};
    Dialogue ea = make_dialogue("ea", one_gql);
    ea.turns[0].question_complete = "What is the opening price of CITIC Securities on 2025-01-08?";
    Dialogue eb = make_dialogue("eb", one_gql);
    eb.turns[0].question_complete = "What is the closing price of CITIC Securities on 2025-01-07?";
    Dialogue ec = make_dialogue("ec", one_gql);
    ec.turns[0].question_complete =
        "Which fund managers increased holdings across electronics manufacturing supply chains "
        "last quarter?";
    double close_cos = cosine_similarity(fallback_embed(dialogue_question_text(ea)),
                                         fallback_embed(dialogue_question_text(eb)));
    double far_cos = cosine_similarity(fallback_embed(dialogue_question_text(ea)),
                                       fallback_embed(dialogue_question_text(ec)));
    require(close_cos > 0.6, "engineered near-pair must sit above the threshold");
    require(far_cos < 0.6, "engineered far-pair must sit below the threshold");
    FilterReport discard = filter_embedding({ea, eb}, embedder, 0.6);
    require(discard.kept.size() == 1, "near-pair: second dialogue must be discarded");
    FilterReport keep = filter_embedding({ea, ec}, embedder, 0.6);
    require(keep.kept.size() == 2, "far-pair: both dialogues must be kept");
}

// ---- criterion 7: validator loop ---------------------------------------------

void criterion_validator(std::string&) {
    PropertyGraph graph = testsupport::fixture_graph();
    PromptTemplates templates = testsupport::templates();
    FallbackEmbedder embedder;
    std::string question = "What is the opening price of CITIC Securities?";
    std::string good = mock_gql_for_question(graph.schema(), question);

    // repairable fault: Repaired with attempts <= 3
    MockGenerator fixer(graph.schema());
    std::string broken = good;
    for (std::size_t at = broken.find("RETURN"); at != std::string::npos;
         at = broken.find("RETURN"))
        broken.replace(at, 6, "RETRN");
    auto outcome = validate_and_optimize(question, broken, graph, fixer, templates, embedder,
                                         QualityConfig{}, 5);
    require(outcome.kind == ValidationOutcome::Kind::Repaired, "fault must be repaired");
    require(outcome.syntax_attempts <= 3 && outcome.semantic_attempts <= 3,
            "each repair loop is capped at 3 attempts");
    require(outcome.attempts() <= 3, "attempts used must be <= 3");

    // unfixable fault: RegenerateQuestion after exactly 3 attempts
    MockGenerator::Options options;
    options.inject_faults = true;
    options.fault_rate = 1.0;
    options.fault_class = MockGenerator::FaultClass::Unfixable;
    MockGenerator hopeless(graph.schema(), options);
    auto exhausted = validate_and_optimize(question, "GARBLE nonsense", graph, hopeless,
                                           templates, embedder, QualityConfig{}, 6);
    require(exhausted.kind == ValidationOutcome::Kind::RegenerateQuestion,
            "exhaustion must yield RegenerateQuestion");
    require(exhausted.syntax_attempts == 3, "exhaustion happens after 3 attempts");

    // fault-injection sweep: every outcome respects the caps
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        MockGenerator::Options sweep;
        sweep.inject_faults = true;
        sweep.fault_rate = 0.7;
        MockGenerator generator(graph.schema(), sweep);
        PromptTemplates tpl = templates;
        std::string gql = mock_gql_for_question(graph.schema(), question);
        if (seed % 2 == 0) gql = replace_all(gql, "RETURN", "RETRN");
        auto swept = validate_and_optimize(question, gql, graph, generator, tpl, embedder,
                                           QualityConfig{}, seed);
        require(swept.syntax_attempts <= 3 && swept.semantic_attempts <= 3,
                "sweep outcome exceeded the attempt caps");
        if (swept.kind == ValidationOutcome::Kind::Repaired)
            require(swept.attempts() >= 1 && swept.attempts() <= 3,
                    "Repaired outcomes use between 1 and 3 attempts");
    }
}

// ---- criterion 8: metrics identities ------------------------------------------

void criterion_metrics(std::string& detail) {
    PropertyGraph graph = testsupport::fixture_graph();

    // hand-counted example: em 4/6, aem 1/2
    auto make = [&](const std::string& id) {
        Dialogue d;
        d.id = id;
        const char* gqls[] = {
            "MATCH (s:stock) RETURN s.name",
            "MATCH (s:stock {name: 'CITIC Securities'}) RETURN s.opening_price",
            "MATCH (i:industry) RETURN i.name",
        };
        for (int r = 0; r < 3; ++r) {
            Turn t;
            t.round = r + 1;
            t.gql = gqls[r];
            if (r > 0) t.pattern = Pattern::P1;
            d.turns.push_back(std::move(t));
        }
        return d;
    };
    std::vector<Dialogue> gold = {make("d1"), make("d2")};
    PredictionSet preds;
    preds.by_turn[{"d1", 1}] = gold[0].turns[0].gql;
    preds.by_turn[{"d1", 2}] = gold[0].turns[1].gql;
    preds.by_turn[{"d1", 3}] = gold[0].turns[2].gql;
    preds.by_turn[{"d2", 1}] = gold[1].turns[0].gql;
    preds.by_turn[{"d2", 2}] = "MATCH (s:stock) RETURN s.closing_price";
    preds.by_turn[{"d2", 3}] = "not parseable";
    MetricsReport hand = compute_metrics(preds, gold, graph);
    require(std::fabs(hand.em - 4.0 / 6.0) < 1e-12, "hand-counted EM must be 4/6");
    require(std::fabs(hand.aem - 0.5) < 1e-12, "hand-counted AEM must be 1/2");

    // 500 randomized prediction sets: AEM <= EM and AEX <= EX
    PropertyGraph random_graph = testsupport::random_graph(8);
    std::vector<Dialogue> rgold;
    for (int d = 0; d < 5; ++d) {
        Dialogue dia;
        dia.id = "r" + std::to_string(d);
        for (int t = 0; t < 4; ++t) {
            Turn turn;
            turn.round = t + 1;
            turn.gql = testsupport::random_query(random_graph, 4000 + d * 16 + t);
            if (t > 0) turn.pattern = static_cast<Pattern>(t % 6);
            dia.turns.push_back(std::move(turn));
        }
        rgold.push_back(std::move(dia));
    }
    int cases = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(seed);
        PredictionSet rpreds;
        for (const auto& d : rgold)
            for (const auto& t : d.turns) {
                switch (rng.bounded(4)) {
                    case 0: rpreds.by_turn[{d.id, t.round}] = t.gql; break;
                    case 1:
                        rpreds.by_turn[{d.id, t.round}] =
                            testsupport::random_query(random_graph, rng.next_u64());
                        break;
                    case 2: rpreds.by_turn[{d.id, t.round}] = "broken("; break;
                    default: break;
                }
            }
        MetricsReport report = compute_metrics(rpreds, rgold, random_graph);
        require(report.aem <= report.em + 1e-12, "AEM must never exceed EM");
        require(report.aex <= report.ex + 1e-12, "AEX must never exceed EX");
        ++cases;
    }
    detail = std::to_string(cases) + " randomized prediction sets";
}

// ---- criterion 9: DA control flow ---------------------------------------------

void criterion_da(std::string&) {
    PropertyGraph graph = testsupport::fixture_graph();
    GraphSchema schema = testsupport::fixture_schema();
    PromptTemplates templates = testsupport::templates();
    FallbackEmbedder embedder;

    // Figure-1 replay execution-matches all four gold queries
    auto gold = read_dataset(testsupport::figure1_path());
    MockGenerator generator(schema);
    auto rows = infer_dataset(gold, graph, schema, generator, templates, embedder, DaConfig{}, 3);
    require(rows.size() == 4, "replay must produce four predictions");
    for (std::size_t i = 0; i < rows.size(); ++i)
        require(execution_match(rows[i].gql, gold[0].turns[i].gql, graph),
                "replay turn " + std::to_string(i + 1) + " must execution-match gold");

    // refine iff alignment fails across a 50-case fault-injection matrix
    StructuredContext context;
    context.reference_date = latest_date(graph);
    int refined = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        MockGenerator::Options options;
        options.inject_faults = true;
        options.fault_rate = 0.5;
        MockGenerator faulty(schema, options);
        InferOutcome out =
            infer_turn("What is the opening price of CITIC Securities?", context, graph, schema,
                       faulty, templates, embedder, DaConfig{}, seed);
        bool initial_aligned;
        try {
            auto result = gql::execute(gql::parse(out.initial_gql), graph);
            initial_aligned = !result.rows.empty();
        } catch (const Error&) {
            initial_aligned = false;
        }
        require(out.refined == !initial_aligned, "refine must run iff alignment fails");
        refined += out.refined;
    }
    require(refined > 0 && refined < 50, "the fault matrix must exercise both branches");
}

// ---- criterion 10: keyword analytics --------------------------------------------

void criterion_keywords(std::string&) {
    // synthetic dataset with a known composition
    std::vector<std::string> gqls = {
        "MATCH (s:stock)-[:belong_to]->(i:industry) WHERE i.name = 'securities' RETURN s.name "
        "ORDER BY s.opening_price DESC LIMIT 1",
        "MATCH (s:stock) RETURN s.name",
        "MATCH (s:stock) WHERE s.opening_price > 10 AND s.closing_price < 50 RETURN "
        "DISTINCT s.name LIMIT 3",
        "MATCH (s:stock) RETURN COUNT(*)",
    };
    Dialogue d;
    d.id = "kw";
    for (std::size_t i = 0; i < gqls.size(); ++i) {
        Turn t;
        t.round = static_cast<int>(i) + 1;
        t.gql = gqls[i];
        if (i > 0) t.pattern = Pattern::P6;
        d.turns.push_back(std::move(t));
    }
    KeywordStats stats = analyze_dataset({d});

    // independent recount with a plain token scan per keyword group
    std::map<std::string, long> recount;
    long informative = 0;
    for (const auto& gql_text : gqls) {
        auto counts = gql::count_keywords(gql_text);
        // recount by hand-rolled scanning: split on non-alpha, upper-case
        std::vector<std::string> words;
        std::string cur;
        bool in_string = false;
        for (char c : gql_text) {
            if (c == '\'') in_string = !in_string;
            if (!in_string && (std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
                cur.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            } else if (!cur.empty()) {
                words.push_back(cur);
                cur.clear();
            }
        }
        if (!cur.empty()) words.push_back(cur);
        static const std::set<std::string> kSingles = {
            "MATCH", "GO",  "FETCH", "LOOKUP", "WHERE",  "YIELD",     "WITH",
            "LIMIT", "RETURN", "AND", "OR",    "NOT",    "XOR",       "VERTEX",
            "EDGE",  "OVER", "REVERSELY", "BIDIRECT",    "COUNT",     "SUM",
            "AVG",   "MAX",  "MIN",   "COLLECT", "DISTINCT"};
        for (std::size_t i = 0; i < words.size(); ++i) {
            std::string w = words[i];
            if ((w == "ORDER" || w == "GROUP") && i + 1 < words.size() && words[i + 1] == "BY") {
                w += " BY";
                ++i;
            } else if (!kSingles.count(w)) {
                continue;
            }
            ++recount[w];
            if (w != "MATCH" && w != "RETURN") ++informative;
        }
        (void)counts;
    }
    require(stats.totals == recount, "keyword totals must match the independent recount");
    require(stats.informative_total == informative,
            "informative total must match the independent recount");
    double expected_avg = static_cast<double>(informative) / static_cast<double>(gqls.size());
    require(std::fabs(stats.informative_avg - expected_avg) < 1e-12,
            "informative average must match exactly");
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "Figure-1 golden test", 1.0, criterion_figure1},
        {2, "executor-oracle equivalence (>=1000 seeded cases)", 60.0, criterion_oracle},
        {3, "parser round-trip (>=1000 generated ASTs)", 60.0, criterion_roundtrip},
        {4, "Algorithm-1 arithmetic", 10.0, criterion_algorithm1},
        {5, "end-to-end mock forge (100 dialogues)", 120.0, criterion_forge},
        {6, "dataset filters (certificates, idempotence, boundaries)", 60.0, criterion_filters},
        {7, "validator repair loop (<=3 attempts, exhaustion)", 30.0, criterion_validator},
        {8, "metrics identities (500 seeded cases + hand count)", 60.0, criterion_metrics},
        {9, "DA control flow (refine iff misaligned, Figure-1 replay)", 30.0, criterion_da},
        {10, "keyword analytics vs independent recount", 10.0, criterion_keywords},
    };

    int failures = 0;
    for (auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        std::string error;
        try {
            criterion.run(detail);
        } catch (const std::exception& e) {
            error = e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_budget = elapsed <= criterion.budget_seconds;
        bool pass = error.empty() && in_budget;
        if (!pass) ++failures;
        std::printf("%s  criterion %2d: %s (%.2fs%s)%s%s\n", pass ? "PASS" : "FAIL",
                    criterion.number, criterion.label.c_str(), elapsed,
                    in_budget ? "" : ", over budget", detail.empty() ? "" : " - ",
                    error.empty() ? detail.c_str() : error.c_str());
    }
    if (failures > 0) std::printf("%d criterion(s) failing\n", failures);
    return failures == 0 ? 0 : 1;
}
