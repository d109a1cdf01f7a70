#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "mtforge/config.hpp"
#include "mtforge/da.hpp"
#include "mtforge/errors.hpp"
#include "mtforge/evaluation.hpp"
#include "mtforge/forge.hpp"
#include "mtforge/gql/analysis.hpp"
#include "mtforge/gql/executor.hpp"
#include "mtforge/gql/parser.hpp"
#include "mtforge/gql/printer.hpp"
#include "mtforge/graph.hpp"
#include "mtforge/quality.hpp"

namespace py = pybind11;
using namespace mtforge;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
        case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
            return out;
        }
        default: return py::none();
    }
}

ForgeRuntime make_runtime(const MockGenerator& generator, const PromptTemplates& templates,
                          const FallbackEmbedder& embedder, const QualityConfig& quality) {
    ForgeRuntime runtime;
    runtime.generator = const_cast<MockGenerator*>(&generator);
    runtime.templates = &templates;
    runtime.embedder = &embedder;
    runtime.quality = quality;
    return runtime;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multi-turn NL2GQL dataset forge";

    py::register_exception<Error>(m, "MtforgeError");

    py::class_<GraphSchema>(m, "GraphSchema")
        .def("fingerprint", &GraphSchema::fingerprint)
        .def("canonical_json", &GraphSchema::canonical_json)
        .def("__repr__", [](const GraphSchema& s) {
            return "<GraphSchema " + std::to_string(s.node_types.size()) + " node types, " +
                   std::to_string(s.edge_types.size()) + " edge types>";
        });

    py::class_<PropertyGraph>(m, "PropertyGraph")
        .def("node_count", [](const PropertyGraph& g) { return g.nodes().size(); })
        .def("edge_count", [](const PropertyGraph& g) { return g.edges().size(); })
        .def("schema", &PropertyGraph::schema, py::return_value_policy::reference_internal)
        .def("__repr__", [](const PropertyGraph& g) {
            return "<PropertyGraph " + std::to_string(g.nodes().size()) + " nodes, " +
                   std::to_string(g.edges().size()) + " edges>";
        });

    m.def("load_schema", [](const std::string& path) { return load_schema(path); });
    m.def("load_graph", [](const GraphSchema& schema, const std::string& path) {
        return load_graph(schema, path);
    });
    m.def("sample_entity", [](const PropertyGraph& graph, const std::string& type,
                              std::uint64_t seed) { return sample_entity(graph, type, seed); });

    m.def("parse_canonical",
          [](const std::string& text) { return gql::print_canonical(gql::parse(text)); },
          "Parse a query and return its canonical form");
    m.def("execute", [](const std::string& text, const PropertyGraph& graph) {
        return json_to_py(render_answer(gql::execute(gql::parse(text), graph)));
    });
    m.def("mask_entities", [](const std::string& text, const GraphSchema& schema) {
        return gql::mask_entities(gql::parse(text), schema);
    });
    m.def("count_keywords", [](const std::string& text) {
        auto counts = gql::count_keywords(text);
        py::dict out;
        py::dict per_kw;
        for (const auto& [kw, n] : counts.counts) per_kw[py::str(kw)] = n;
        out["counts"] = per_kw;
        out["informative_total"] = counts.informative_total;
        return out;
    });
    m.def("classify_query_type", [](const std::string& text) {
        return std::string(gql::query_type_name(gql::classify_query_type(gql::parse(text))));
    });

    m.def("fallback_embed", [](const std::string& text) { return fallback_embed(text); });
    m.def("cosine_similarity", [](const std::vector<float>& a, const std::vector<float>& b) {
        return cosine_similarity(a, b);
    });

    m.def(
        "generate_dataset",
        [](const PropertyGraph& graph, const std::string& prompts_dir, int count,
           std::uint64_t seed, int rounds_min, int rounds_max, int workers) {
            PromptTemplates templates = PromptTemplates::load(prompts_dir);
            MockGenerator generator(graph.schema());
            FallbackEmbedder embedder;
            ForgeRuntime runtime = make_runtime(generator, templates, embedder, QualityConfig{});
            ForgeConfig config;
            config.seed = seed;
            config.rounds_min = rounds_min;
            config.rounds_max = rounds_max;
            config.worker_count = workers;
            GenerateResult result = generate_dataset(graph, runtime, config, count);
            py::list out;
            for (const auto& d : result.dialogues) out.append(json_to_py(dialogue_to_json(d)));
            return out;
        },
        py::arg("graph"), py::arg("prompts_dir"), py::arg("count"), py::arg("seed") = 0,
        py::arg("rounds_min") = 5, py::arg("rounds_max") = 8, py::arg("workers") = 1);

    m.def("read_dataset", [](const std::string& path) {
        py::list out;
        for (const auto& d : read_dataset(path)) out.append(json_to_py(dialogue_to_json(d)));
        return out;
    });

    m.def("dataset_stats", [](const std::string& path) {
        auto dialogues = read_dataset(path);
        DatasetStats stats = compute_stats(dialogues);
        py::dict out;
        out["data_points"] = stats.data_points;
        out["total_gqls"] = stats.total_gqls;
        out["avg_turns"] = stats.avg_turns;
        out["avg_entities"] = stats.avg_entities;
        out["avg_relations"] = stats.avg_relations;
        return out;
    });

    m.def("filter_dataset", [](const std::string& path, const GraphSchema& schema,
                               double threshold) {
        auto dialogues = read_dataset(path);
        QualityConfig config;
        config.dedup_threshold = threshold;
        FilterReport masked = filter_masked_gql(dialogues, schema, config);
        std::vector<Dialogue> survivors;
        for (const auto& d : dialogues)
            if (std::find(masked.kept.begin(), masked.kept.end(), d.id) != masked.kept.end())
                survivors.push_back(d);
        FallbackEmbedder embedder;
        FilterReport embedded = filter_embedding(survivors, embedder, threshold);
        py::dict out;
        out["masked_gql"] = json_to_py(masked.to_json());
        out["embedding"] = json_to_py(embedded.to_json());
        return out;
    }, py::arg("path"), py::arg("schema"), py::arg("threshold") = 0.6);

    m.def("evaluate", [](const std::string& gold_path, const std::string& pred_path,
                         const PropertyGraph& graph) {
        auto gold = read_dataset(gold_path);
        auto preds = PredictionSet::read_jsonl(pred_path);
        return json_to_py(compute_metrics(preds, gold, graph).to_json());
    });

    m.def("analyze_dataset", [](const std::string& path) {
        return json_to_py(analyze_dataset(read_dataset(path)).to_json());
    });

    m.def(
        "infer_dataset",
        [](const std::string& gold_path, const PropertyGraph& graph,
           const std::string& prompts_dir, std::uint64_t seed) {
            auto gold = read_dataset(gold_path);
            PromptTemplates templates = PromptTemplates::load(prompts_dir);
            MockGenerator generator(graph.schema());
            FallbackEmbedder embedder;
            auto rows = infer_dataset(gold, graph, graph.schema(), generator, templates, embedder,
                                      DaConfig{}, seed);
            py::list out;
            for (const auto& row : rows) {
                py::dict r;
                r["id"] = row.id;
                r["round"] = row.round;
                r["gql"] = row.gql;
                out.append(std::move(r));
            }
            return out;
        },
        py::arg("gold_path"), py::arg("graph"), py::arg("prompts_dir"), py::arg("seed") = 0);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
