#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>

#include "mtforge/config.hpp"
#include "mtforge/da.hpp"
#include "mtforge/errors.hpp"
#include "mtforge/evaluation.hpp"
#include "mtforge/forge.hpp"
#include "mtforge/graph.hpp"
#include "mtforge/quality.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

using namespace mtforge;

struct Common {
    std::string config_path;
    std::string schema_path;
    std::string graph_path;
    bool mock = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

RunConfig resolve_config(const Common& common) {
    RunConfig cfg;
    if (!common.config_path.empty()) cfg = load_config(common.config_path);
    if (!common.schema_path.empty()) cfg.schema_path = common.schema_path;
    if (!common.graph_path.empty()) cfg.graph_path = common.graph_path;
    if (common.mock) {
        cfg.generator = "mock";
        cfg.embedder = "fallback";
    }
    if (common.seed_set) cfg.forge.seed = common.seed;
    cfg.validate();
    return cfg;
}

PropertyGraph load_fixture(const RunConfig& cfg) {
    if (cfg.schema_path.empty()) throw InvariantError("no schema path configured");
    if (cfg.graph_path.empty()) throw InvariantError("no graph path configured");
    GraphSchema schema = load_schema(cfg.schema_path);
    return load_graph(schema, cfg.graph_path);
}

std::unique_ptr<TextGenerator> make_generator(const RunConfig& cfg, const GraphSchema& schema) {
    if (cfg.generator == "remote") return std::make_unique<RemoteChatGenerator>(cfg.endpoint);
    return std::make_unique<MockGenerator>(schema);
}

std::unique_ptr<Embedder> make_embedder(const RunConfig& cfg) {
    if (cfg.embedder == "remote") return std::make_unique<RemoteEmbedder>(cfg.endpoint);
    return std::make_unique<FallbackEmbedder>();
}

int cmd_generate(const Common& common, int count, const std::string& out_path) {
    RunConfig cfg = resolve_config(common);
    PropertyGraph graph = load_fixture(cfg);
    PromptTemplates templates = PromptTemplates::load(cfg.prompts_dir);
    auto generator = make_generator(cfg, graph.schema());
    auto embedder = make_embedder(cfg);

    ForgeRuntime runtime;
    runtime.generator = generator.get();
    runtime.templates = &templates;
    runtime.embedder = embedder.get();
    runtime.quality = cfg.quality;
    runtime.retry_budget = cfg.forge.retry_budget;

    GenerateResult result = generate_dataset(graph, runtime, cfg.forge, count);
    std::string path = !out_path.empty() ? out_path : cfg.output_path;
    if (path.empty()) throw InvariantError("no output path configured");
    write_dataset(result.dialogues, path);
    std::cout << "generated " << result.dialogues.size() << " dialogues";
    if (result.abandoned > 0) std::cout << " (" << result.abandoned << " abandoned)";
    std::cout << " -> " << path << "\n";
    return 0;
}

int cmd_filter(const Common& common, const std::string& dataset_path, const std::string& out_path,
               const std::string& report_path) {
    RunConfig cfg = resolve_config(common);
    PropertyGraph graph = load_fixture(cfg);
    std::string in_path = !dataset_path.empty() ? dataset_path : cfg.dataset_path;
    if (in_path.empty()) throw InvariantError("no dataset path configured");
    auto dialogues = read_dataset(in_path);

    auto embedder = make_embedder(cfg);
    FilterReport masked = filter_masked_gql(dialogues, graph.schema(), cfg.quality);
    std::vector<Dialogue> survivors;
    for (const auto& d : dialogues)
        if (std::find(masked.kept.begin(), masked.kept.end(), d.id) != masked.kept.end())
            survivors.push_back(d);
    FilterReport embedded = filter_embedding(survivors, *embedder, cfg.quality.dedup_threshold);

    nlohmann::json report;
    report["masked_gql"] = masked.to_json();
    report["embedding"] = embedded.to_json();
    report["input"] = dialogues.size();
    report["kept"] = embedded.kept.size();
    std::cout << report.dump(2) << "\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report.dump(2) << "\n";
    }
    if (!out_path.empty()) {
        std::vector<Dialogue> kept;
        for (const auto& d : survivors)
            if (std::find(embedded.kept.begin(), embedded.kept.end(), d.id) !=
                embedded.kept.end())
                kept.push_back(d);
        write_dataset(kept, out_path);
    }
    return 0;
}

int cmd_evaluate(const Common& common, const std::string& gold_path, const std::string& pred_path,
                 const std::string& breakdown, const std::string& report_path) {
    RunConfig cfg = resolve_config(common);
    PropertyGraph graph = load_fixture(cfg);
    auto gold = read_dataset(!gold_path.empty() ? gold_path : cfg.dataset_path);
    auto preds = PredictionSet::read_jsonl(!pred_path.empty() ? pred_path : cfg.predictions_path);
    MetricsReport report = compute_metrics(preds, gold, graph);
    std::cout << report.to_table(breakdown);
    std::cout << report.to_json().dump(2) << "\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report.to_json().dump(2) << "\n";
    }
    return 0;
}

int cmd_infer(const Common& common, const std::string& gold_path, const std::string& out_path) {
    RunConfig cfg = resolve_config(common);
    PropertyGraph graph = load_fixture(cfg);
    PromptTemplates templates = PromptTemplates::load(cfg.prompts_dir);
    auto generator = make_generator(cfg, graph.schema());
    auto embedder = make_embedder(cfg);
    auto gold = read_dataset(!gold_path.empty() ? gold_path : cfg.dataset_path);

    DaConfig da;
    da.tau_sem = cfg.quality.tau_sem;
    da.mock_alignment = cfg.generator == "mock";
    auto rows = infer_dataset(gold, graph, graph.schema(), *generator, templates, *embedder, da,
                              cfg.forge.seed);
    std::string path = !out_path.empty() ? out_path : cfg.predictions_path;
    if (path.empty()) throw InvariantError("no predictions output path configured");
    PredictionSet preds;
    for (const auto& row : rows) preds.by_turn[{row.id, row.round}] = row.gql;
    preds.write_jsonl(path);
    std::cout << "inferred " << rows.size() << " turns -> " << path << "\n";
    return 0;
}

int cmd_stats(const Common& common, const std::string& dataset_path) {
    RunConfig cfg = resolve_config(common);
    auto dialogues = read_dataset(!dataset_path.empty() ? dataset_path : cfg.dataset_path);
    DatasetStats stats = compute_stats(dialogues);
    KeywordStats keywords = analyze_dataset(dialogues);
    nlohmann::json doc;
    doc["data_points"] = stats.data_points;
    doc["total_gqls"] = stats.total_gqls;
    doc["avg_turns"] = stats.avg_turns;
    doc["avg_entities"] = stats.avg_entities;
    doc["avg_relations"] = stats.avg_relations;
    doc["keywords"] = keywords.to_json();
    std::cout << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-turn NL2GQL dataset forge"};
    app.require_subcommand(1);

    Common common;
    app.add_option("--config", common.config_path, "JSON config file");
    app.add_option("--schema", common.schema_path, "schema.json path");
    app.add_option("--graph", common.graph_path, "graph.json path");
    app.add_flag("--mock", common.mock, "deterministic mock generator, no network");
    auto* seed_opt = app.add_option("--seed", common.seed, "seed for all randomness");

    int count = 10;
    std::string out_path, dataset_path, report_path, gold_path, pred_path;
    std::string breakdown = "none";

    auto* generate = app.add_subcommand("generate", "forge dialogues to JSONL");
    generate->add_option("--count", count, "number of dialogues");
    generate->add_option("--out", out_path, "output dataset path");

    auto* filter = app.add_subcommand("filter", "run both dataset filters");
    filter->add_option("--dataset", dataset_path, "input dataset path");
    filter->add_option("--out", out_path, "kept-dialogue output path");
    filter->add_option("--report", report_path, "filter report JSON path");

    auto* evaluate = app.add_subcommand("evaluate", "score predictions against gold");
    evaluate->add_option("--gold", gold_path, "gold dataset path");
    evaluate->add_option("--pred", pred_path, "predictions JSONL path");
    evaluate->add_option("--breakdown", breakdown, "round | pattern | none");
    evaluate->add_option("--report", report_path, "metrics report JSON path");

    auto* infer = app.add_subcommand("infer", "dependency-aware inference baseline");
    infer->add_option("--gold", gold_path, "gold dataset path (questions only)");
    infer->add_option("--out", out_path, "predictions output path");

    auto* stats = app.add_subcommand("stats", "dataset statistics and analytics");
    stats->add_option("--dataset", dataset_path, "dataset path");

    // global flags are accepted after the subcommand too
    for (auto* sub : {generate, filter, evaluate, infer, stats}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }
    common.seed_set = seed_opt->count() > 0;

    try {
        if (generate->parsed()) return cmd_generate(common, count, out_path);
        if (filter->parsed()) return cmd_filter(common, dataset_path, out_path, report_path);
        if (evaluate->parsed())
            return cmd_evaluate(common, gold_path, pred_path, breakdown, report_path);
        if (infer->parsed()) return cmd_infer(common, gold_path, out_path);
        if (stats->parsed()) return cmd_stats(common, dataset_path);
    } catch (const mtforge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
