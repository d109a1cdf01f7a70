#include "mtforge/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mtforge/errors.hpp"
#include "mtforge/gql/analysis.hpp"
#include "mtforge/gql/executor.hpp"
#include "mtforge/gql/parser.hpp"
#include "mtforge/gql/printer.hpp"

namespace mtforge {

using nlohmann::json;

PredictionSet PredictionSet::read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open predictions '" + path.string() + "'");
    PredictionSet preds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("predictions '" + path.string() + "' line " +
                             std::to_string(line_no) + ": " + e.what());
        }
        auto key = std::make_pair(doc.at("id").get<std::string>(), doc.at("round").get<int>());
        preds.by_turn[key] = doc.value("gql", "");
    }
    return preds;
}

void PredictionSet::write_jsonl(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    for (const auto& [key, gql_text] : by_turn) {
        json doc = {{"id", key.first}, {"round", key.second}, {"gql", gql_text}};
        out << doc.dump() << "\n";
    }
}

bool exact_match(const std::string& pred, const std::string& gold) {
    std::string gold_canonical;
    try {
        gold_canonical = gql::print_canonical(gql::parse(gold));
    } catch (const Error& e) {
        throw GoldParseError(std::string("gold query does not parse: ") + e.what());
    }
    try {
        return gql::print_canonical(gql::parse(pred)) == gold_canonical;
    } catch (const Error&) {
        return false;
    }
}

namespace {

bool rows_equal(const std::vector<Value>& a, const std::vector<Value>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].equals(b[i])) return false;
    return true;
}

bool tables_match(const ResultTable& pred, const ResultTable& gold, bool ordered) {
    if (pred.rows.size() != gold.rows.size()) return false;
    if (!pred.rows.empty() && pred.rows[0].size() != gold.rows[0].size()) return false;
    auto pred_rows = pred.rows;
    auto gold_rows = gold.rows;
    if (!ordered) {
        auto by_tuple = [](const std::vector<Value>& x, const std::vector<Value>& y) {
            for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
                int c = Value::compare(x[i], y[i]);
                if (c != 0) return c < 0;
            }
            return x.size() < y.size();
        };
        std::sort(pred_rows.begin(), pred_rows.end(), by_tuple);
        std::sort(gold_rows.begin(), gold_rows.end(), by_tuple);
    }
    for (std::size_t i = 0; i < pred_rows.size(); ++i)
        if (!rows_equal(pred_rows[i], gold_rows[i])) return false;
    return true;
}

}  // namespace

bool execution_match(const std::string& pred, const std::string& gold,
                     const PropertyGraph& graph) {
    gql::QueryAst gold_ast;
    ResultTable gold_result;
    try {
        gold_ast = gql::parse(gold);
        gold_result = gql::execute(gold_ast, graph);
    } catch (const Error& e) {
        throw GoldExecutionError(std::string("gold query does not execute: ") + e.what());
    }
    ResultTable pred_result;
    try {
        pred_result = gql::execute(gql::parse(pred), graph);
    } catch (const Error&) {
        return false;
    }
    return tables_match(pred_result, gold_result, !gold_ast.order_by.empty());
}

namespace {

std::string round_bucket(int round) {
    return round <= 4 ? "R" + std::to_string(round) : std::string("R5+");
}

json bucket_json(const std::map<std::string, BucketScore>& buckets) {
    json out = json::object();
    for (const auto& [name, score] : buckets) {
        out[name] = {{"total", score.total},
                     {"em", score.total ? static_cast<double>(score.em) / score.total : 0.0},
                     {"ex", score.total ? static_cast<double>(score.ex) / score.total : 0.0},
                     {"em_hits", score.em},
                     {"ex_hits", score.ex}};
    }
    return out;
}

}  // namespace

json MetricsReport::to_json() const {
    json doc;
    doc["em"] = em;
    doc["aem"] = aem;
    doc["ex"] = ex;
    doc["aex"] = aex;
    doc["counts"] = {{"total_turns", total_turns}, {"em_hits", em_hits},
                     {"ex_hits", ex_hits},         {"total_dialogues", total_dialogues},
                     {"aem_hits", aem_hits},       {"aex_hits", aex_hits}};
    doc["by_round"] = bucket_json(by_round);
    json pattern_buckets = json::object();
    json initial_bucket = json::object();
    for (const auto& [name, score] : by_pattern) {
        json entry = {{"total", score.total},
                      {"em", score.total ? static_cast<double>(score.em) / score.total : 0.0},
                      {"ex", score.total ? static_cast<double>(score.ex) / score.total : 0.0}};
        if (name == "Initial")
            initial_bucket = std::move(entry);
        else
            pattern_buckets[name] = std::move(entry);
    }
    doc["by_pattern"] = std::move(pattern_buckets);
    if (!initial_bucket.empty()) doc["initial"] = std::move(initial_bucket);
    return doc;
}

std::string MetricsReport::to_table(const std::string& breakdown) const {
    std::ostringstream out;
    auto pct = [](double x) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%6.2f", x * 100.0);
        return std::string(buf);
    };
    out << "metric     value\n";
    out << "EM   (%)  " << pct(em) << "\n";
    out << "AEM  (%)  " << pct(aem) << "\n";
    out << "EX   (%)  " << pct(ex) << "\n";
    out << "AEX  (%)  " << pct(aex) << "\n";
    auto print_buckets = [&](const std::map<std::string, BucketScore>& buckets,
                             bool skip_initial) {
        out << "\nbucket   turns   EM(%)   EX(%)\n";
        for (const auto& [name, score] : buckets) {
            if (skip_initial && name == "Initial") continue;
            double bem = score.total ? static_cast<double>(score.em) / score.total : 0.0;
            double bex = score.total ? static_cast<double>(score.ex) / score.total : 0.0;
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%-8s %5ld  %s  %s\n", name.c_str(), score.total,
                          pct(bem).c_str(), pct(bex).c_str());
            out << buf;
        }
    };
    if (breakdown == "round") print_buckets(by_round, false);
    if (breakdown == "pattern") print_buckets(by_pattern, true);
    return out.str();
}

MetricsReport compute_metrics(const PredictionSet& preds, const std::vector<Dialogue>& gold,
                              const PropertyGraph& graph) {
    MetricsReport report;
    std::set<std::pair<std::string, int>> known;
    for (const auto& dialogue : gold)
        for (const auto& turn : dialogue.turns) known.emplace(dialogue.id, turn.round);
    for (const auto& [key, gql_text] : preds.by_turn)
        if (!known.count(key))
            throw AlignmentError("prediction for unknown (id, round): (" + key.first + ", " +
                                 std::to_string(key.second) + ")");

    report.total_dialogues = static_cast<long>(gold.size());
    for (const auto& dialogue : gold) {
        bool all_em = true, all_ex = true;
        for (const auto& turn : dialogue.turns) {
            ++report.total_turns;
            bool em_hit = false, ex_hit = false;
            auto it = preds.by_turn.find({dialogue.id, turn.round});
            if (it != preds.by_turn.end()) {
                em_hit = exact_match(it->second, turn.gql);
                ex_hit = execution_match(it->second, turn.gql, graph);
            }
            report.em_hits += em_hit;
            report.ex_hits += ex_hit;
            all_em = all_em && em_hit;
            all_ex = all_ex && ex_hit;

            auto& rb = report.by_round[round_bucket(turn.round)];
            ++rb.total;
            rb.em += em_hit;
            rb.ex += ex_hit;
            auto& pb =
                report.by_pattern[turn.pattern ? pattern_name(*turn.pattern) : "Initial"];
            ++pb.total;
            pb.em += em_hit;
            pb.ex += ex_hit;
        }
        report.aem_hits += all_em;
        report.aex_hits += all_ex;
    }
    if (report.total_turns > 0) {
        report.em = static_cast<double>(report.em_hits) / report.total_turns;
        report.ex = static_cast<double>(report.ex_hits) / report.total_turns;
    }
    if (report.total_dialogues > 0) {
        report.aem = static_cast<double>(report.aem_hits) / report.total_dialogues;
        report.aex = static_cast<double>(report.aex_hits) / report.total_dialogues;
    }
    return report;
}

json KeywordStats::to_json() const {
    json doc;
    doc["totals"] = totals;
    doc["informative_total"] = informative_total;
    doc["gql_count"] = gql_count;
    doc["informative_avg"] = informative_avg;
    doc["query_types"] = query_type_counts;
    return doc;
}

KeywordStats analyze_dataset(const std::vector<Dialogue>& dialogues) {
    KeywordStats stats;
    for (const auto& dialogue : dialogues) {
        for (const auto& turn : dialogue.turns) {
            ++stats.gql_count;
            auto counts = gql::count_keywords(turn.gql);
            for (const auto& [kw, n] : counts.counts) stats.totals[kw] += n;
            stats.informative_total += counts.informative_total;
            auto type = gql::classify_query_type(gql::parse(turn.gql));
            ++stats.query_type_counts[gql::query_type_name(type)];
        }
    }
    if (stats.gql_count > 0)
        stats.informative_avg =
            static_cast<double>(stats.informative_total) / static_cast<double>(stats.gql_count);
    return stats;
}

}  // namespace mtforge
