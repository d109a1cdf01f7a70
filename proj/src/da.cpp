#include "mtforge/da.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <set>

#include "mtforge/errors.hpp"
#include "mtforge/gql/analysis.hpp"
#include "mtforge/gql/executor.hpp"
#include "mtforge/gql/parser.hpp"
#include "mtforge/rng.hpp"
#include "mtforge/text.hpp"

namespace mtforge {

namespace {

const std::regex kIsoDate(R"((\d{4}-\d{2}-\d{2}))");
const std::regex kTemporalFragment(R"(^\s*[Aa]nd (yesterday|the day before)\b.*$)");
const std::regex kAboutFragment(R"(^\s*(?:[Hh]ow|[Ww]hat) about (.+?)\??\s*$)");
const std::regex kWhatFragment(R"(^\s*(?:[Aa]nd |[Ss]o )?[Ww]hat (?:about )?(?:the )?([A-Za-z_ ]+?)\??\s*$)");

std::optional<std::string> first_date(const std::string& text) {
    std::smatch m;
    if (std::regex_search(text, m, kIsoDate)) return m[1].str();
    return std::nullopt;
}

bool word_boundary_contains(const std::string& text, const std::string& needle) {
    if (needle.empty()) return false;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
        std::size_t end = pos + needle.size();
        bool right_ok =
            end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

// Entities scanned most-recent-first (answer-derived mentions last in each
// turn, hence found first on reverse scan).
std::vector<std::string> recent_entities(const StructuredContext& context) {
    std::vector<std::string> out;
    for (auto turn = context.turns.rbegin(); turn != context.turns.rend(); ++turn)
        for (auto it = turn->entities.rbegin(); it != turn->entities.rend(); ++it)
            if (std::find(out.begin(), out.end(), *it) == out.end()) out.push_back(*it);
    return out;
}

// Property names referenced by a turn's query: projections first, then
// order keys, then filters.
std::vector<std::string> turn_properties(const std::string& gql_text) {
    std::vector<std::string> out;
    gql::QueryAst ast;
    try {
        ast = gql::parse(gql_text);
    } catch (const Error&) {
        return out;
    }
    auto add = [&](const std::string& prop) {
        if (std::find(out.begin(), out.end(), prop) == out.end()) out.push_back(prop);
    };
    auto walk = [&](auto&& self, const gql::ExprPtr& e) -> void {
        if (!e) return;
        if (const auto* p = std::get_if<gql::PropAccess>(&e->node)) {
            add(p->property);
        } else if (const auto* c = std::get_if<gql::Comparison>(&e->node)) {
            self(self, c->lhs);
            self(self, c->rhs);
        } else if (const auto* l = std::get_if<gql::Logical>(&e->node)) {
            self(self, l->lhs);
            self(self, l->rhs);
        } else if (const auto* n = std::get_if<gql::Negation>(&e->node)) {
            self(self, n->inner);
        }
    };
    for (const auto& item : ast.return_items) walk(walk, item.expr);
    for (const auto& key : ast.order_by) walk(walk, key.expr);
    walk(walk, ast.where);
    return out;
}

}  // namespace

void StructuredContext::record(const std::string& question_raw,
                               const std::string& question_explicit, const std::string& gql,
                               const nlohmann::json& answer, const GraphSchema& schema) {
    ContextTurn turn;
    turn.question_raw = question_raw;
    turn.question_explicit = question_explicit;
    turn.gql = gql;
    turn.answer = answer;
    turn.temporal_fragment = std::regex_match(question_raw, kTemporalFragment);
    try {
        auto ast = gql::parse(gql);
        for (const auto& lit : gql::entity_literals(ast, schema)) turn.entities.push_back(lit.value);
        turn.relations = gql::edge_types(ast);
    } catch (const Error&) {
        // unparseable query contributes no entities/relations
    }
    if (answer.is_array())
        for (const auto& cell : answer)
            if (cell.is_string()) turn.entities.push_back(cell.get<std::string>());
    turns.push_back(std::move(turn));
}

std::string reformulate(const std::string& question, const StructuredContext& context,
                        TextGenerator* generator) {
    (void)generator;
    if (context.turns.empty()) return question;

    std::smatch m;
    // temporal shift: rewrite the most recent dated question one day back
    if (std::regex_match(question, m, kTemporalFragment)) {
        int shift = m[1] == "yesterday" ? -1 : -2;
        for (auto turn = context.turns.rbegin(); turn != context.turns.rend(); ++turn) {
            if (auto date = first_date(turn->question_explicit)) {
                return replace_all(turn->question_explicit, *date,
                                   shift_iso_date(*date, shift));
            }
            if (auto date = first_date(turn->gql)) {
                std::string text = turn->question_explicit;
                std::string shifted = shift_iso_date(*date, shift);
                if (!text.empty() && text.back() == '?')
                    return text.substr(0, text.size() - 1) + " on " + shifted + "?";
                return text + " on " + shifted;
            }
        }
        throw ReformulationError("temporal fragment '" + question +
                                 "' has no dated antecedent in context");
    }

    // entity switch: replace the entity of the most recent non-temporal turn
    if (std::regex_match(question, m, kAboutFragment)) {
        std::string mention = trim(m[1].str());
        bool pronoun = mention.rfind("its ", 0) == 0 || mention.rfind("their ", 0) == 0;
        if (!pronoun) {
            auto entities = recent_entities(context);
            for (auto turn = context.turns.rbegin(); turn != context.turns.rend(); ++turn) {
                if (turn->temporal_fragment) continue;
                for (const auto& entity : entities) {
                    if (turn->question_explicit.find(entity) != std::string::npos)
                        return replace_all(turn->question_explicit, entity, mention);
                }
            }
            throw ReformulationError("no antecedent question to re-anchor for '" + question +
                                     "'");
        }
    }

    // short property fragment ("What price?")
    if (std::regex_match(question, m, kWhatFragment) &&
        split_words(question).size() <= 4) {
        std::string noun = fold_identifier(m[1].str());
        std::string prop;
        for (auto turn = context.turns.rbegin(); turn != context.turns.rend() && prop.empty();
             ++turn) {
            for (const auto& candidate : turn_properties(turn->gql)) {
                if (fold_identifier(candidate).find(noun) != std::string::npos) {
                    prop = candidate;
                    break;
                }
            }
        }
        if (prop.empty())
            throw ReformulationError("fragment '" + question +
                                     "' matches no property in context");
        auto entities = recent_entities(context);
        if (entities.empty())
            throw ReformulationError("fragment '" + question + "' has no entity antecedent");
        std::string date;
        for (auto turn = context.turns.rbegin(); turn != context.turns.rend() && date.empty();
             ++turn) {
            if (auto d = first_date(turn->question_explicit)) date = *d;
            else if (auto d2 = first_date(turn->gql)) date = *d2;
        }
        if (date.empty()) date = context.reference_date;
        std::string text =
            "What is the " + unfold_identifier(prop) + " of " + entities.front();
        if (!date.empty()) text += " on " + date;
        return text + "?";
    }

    return question;
}

std::string ground_entities(const std::string& text, const PropertyGraph& graph) {
    // display names of placeholder-carrying nodes
    std::vector<std::string> names;
    for (const auto& node : graph.nodes()) {
        const NodeTypeDef* def = graph.schema().find_node_type(node.type);
        if (!def || !def->placeholder) continue;
        const PropertyDef* bound = def->find_property(def->placeholder->bound_property);
        if (!bound || bound->kind != ValueKind::String) continue;
        auto it = node.props.find(def->placeholder->bound_property);
        if (it != node.props.end() && it->second.is_string())
            names.push_back(it->second.as_string());
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    std::string out = text;
    for (const auto& name : names) {
        if (word_boundary_contains(out, name)) continue;
        auto words = split_words(name);
        for (std::size_t k = words.size(); k-- > 1;) {
            std::string prefix = words[0];
            for (std::size_t i = 1; i < k; ++i) prefix += " " + words[i];
            if (!word_boundary_contains(out, prefix)) continue;
            // ambiguous prefixes stay untouched
            int holders = 0;
            for (const auto& other : names)
                if (other.rfind(prefix, 0) == 0) ++holders;
            if (holders == 1) out = replace_all(out, prefix, name);
            break;
        }
    }
    return out;
}

nlohmann::json SubSchema::to_json() const {
    return {{"node_types", node_types}, {"edge_types", edge_types}, {"full_fallback", full_fallback}};
}

SubSchema extract_subschema(const GraphSchema& schema, const StructuredContext& context,
                            const std::string& explicit_question) {
    std::set<std::string> nodes;
    std::set<std::string> edges;

    // types named in context turns (labels and edge types of prior queries)
    for (const auto& turn : context.turns) {
        try {
            auto ast = gql::parse(turn.gql);
            for (const auto& label : gql::node_labels(ast)) nodes.insert(label);
            for (const auto& type : gql::edge_types(ast)) edges.insert(type);
        } catch (const Error&) {
        }
    }

    // string matches against the explicit question (type and property names,
    // case-insensitive with underscore/space folding)
    std::string folded_question = fold_identifier(to_lower(explicit_question));
    auto question_mentions = [&](const std::string& identifier) {
        return folded_question.find(fold_identifier(to_lower(identifier))) != std::string::npos;
    };
    for (const auto& t : schema.node_types) {
        if (question_mentions(t.name)) nodes.insert(t.name);
        for (const auto& p : t.properties)
            if (question_mentions(p.name)) nodes.insert(t.name);
    }
    for (const auto& e : schema.edge_types)
        if (question_mentions(e.name)) edges.insert(e.name);

    // closure: every included edge brings its endpoints
    auto close_endpoints = [&]() {
        for (const auto& name : edges) {
            if (const EdgeTypeDef* def = schema.find_edge_type(name)) {
                nodes.insert(def->source);
                nodes.insert(def->target);
            }
        }
    };
    close_endpoints();

    // a node-only seed set pulls in its incident edges
    if (edges.empty() && !nodes.empty()) {
        for (const auto& name : nodes)
            for (const EdgeTypeDef* def : schema.edges_incident(name)) edges.insert(def->name);
        close_endpoints();
    }

    SubSchema sub;
    if (nodes.empty()) {
        sub.full_fallback = true;
        for (const auto& t : schema.node_types) sub.node_types.push_back(t.name);
        for (const auto& e : schema.edge_types) sub.edge_types.push_back(e.name);
        return sub;
    }
    for (const auto& t : schema.node_types)
        if (nodes.count(t.name)) sub.node_types.push_back(t.name);
    for (const auto& e : schema.edge_types)
        if (edges.count(e.name)) sub.edge_types.push_back(e.name);
    return sub;
}

GraphSchema subschema_view(const GraphSchema& schema, const SubSchema& sub) {
    GraphSchema view;
    for (const auto& t : schema.node_types)
        if (std::find(sub.node_types.begin(), sub.node_types.end(), t.name) !=
            sub.node_types.end())
            view.node_types.push_back(t);
    for (const auto& e : schema.edge_types)
        if (std::find(sub.edge_types.begin(), sub.edge_types.end(), e.name) !=
            sub.edge_types.end())
            view.edge_types.push_back(e);
    return view;
}

namespace {

struct Alignment {
    bool aligned = false;
    std::string detail;
};

// Mock-mode alignment: execution succeeded, at least one row came back, and
// the projected property matches the property the question asks for.
Alignment mock_alignment_check(const std::string& explicit_question, const std::string& gql_text,
                               bool executable, const ResultTable& result) {
    if (!executable) return {false, "candidate query does not execute"};
    if (result.rows.empty()) return {false, "candidate query returned an empty result"};
    static const std::regex asks(R"(^What (?:is|was) the (.+?) of .+\?$)");
    std::smatch m;
    if (std::regex_match(explicit_question, m, asks)) {
        std::string asked = fold_identifier(m[1].str());
        if (asked.rfind("average ", 0) == 0) return {true, ""};
        auto ast = gql::parse(gql_text);
        for (const auto& item : ast.return_items) {
            if (!item.expr) continue;
            if (const auto* p = std::get_if<gql::PropAccess>(&item.expr->node))
                if (p->property == asked) return {true, ""};
        }
        return {false, "projected property does not match asked property '" + asked + "'"};
    }
    return {true, ""};
}

}  // namespace

InferOutcome infer_turn(const std::string& question, const StructuredContext& context,
                        const PropertyGraph& graph, const GraphSchema& schema,
                        TextGenerator& generator, const PromptTemplates& templates,
                        const Embedder& embedder, const DaConfig& config, std::uint64_t seed) {
    InferOutcome outcome;
    std::string explicit_question;
    try {
        explicit_question = reformulate(question, context, &generator);
    } catch (const ReformulationError&) {
        // fall back to the raw question; generation may still succeed
        explicit_question = question;
    }
    explicit_question = ground_entities(explicit_question, graph);
    outcome.explicit_question = explicit_question;

    SubSchema sub = extract_subschema(schema, context, explicit_question);
    GraphSchema view = subschema_view(schema, sub);

    PromptInputs gin;
    gin.schema = &view;
    gin.question = explicit_question;
    Prompt gql_prompt = build_prompt(templates, PromptKind::Gql, gin);
    std::string candidate;
    try {
        candidate = generator.generate(gql_prompt, mix_seed(seed, 1)).text;
    } catch (const Error& e) {
        throw InferenceError(std::string("generator failed: ") + e.what());
    }
    outcome.initial_gql = candidate;

    auto run_candidate = [&](const std::string& text, bool& ok, ResultTable& result,
                             std::string& error) {
        try {
            result = gql::execute(gql::parse(text), graph);
            ok = true;
        } catch (const Error& e) {
            ok = false;
            error = e.what();
        }
    };

    bool executable = false;
    ResultTable result;
    std::string exec_error;
    run_candidate(candidate, executable, result, exec_error);

    Alignment alignment;
    if (config.mock_alignment) {
        alignment = mock_alignment_check(explicit_question, candidate, executable, result);
    } else {
        if (!executable) {
            alignment = {false, exec_error};
        } else {
            PromptInputs rin;
            rin.schema = &view;
            rin.gql = candidate;
            Prompt reverse_prompt = build_prompt(templates, PromptKind::Reverse, rin);
            std::string inferred = generator.generate(reverse_prompt, mix_seed(seed, 2)).text;
            double cos = cosine_similarity(embedder.embed(explicit_question),
                                           embedder.embed(inferred));
            alignment.aligned = cos >= config.tau_sem;
            if (!alignment.aligned)
                alignment.detail = "reverse similarity " + format_double(cos) + " below " +
                                   format_double(config.tau_sem);
        }
    }

    if (!alignment.aligned) {
        // Algorithm-2 single refine round
        PromptInputs pin;
        pin.question = explicit_question;
        pin.gql = candidate;
        pin.error = "result misaligned: " + (alignment.detail.empty() ? exec_error
                                                                      : alignment.detail);
        Prompt repair_prompt = build_prompt(templates, PromptKind::Repair, pin);
        try {
            candidate = generator.generate(repair_prompt, mix_seed(seed, 3)).text;
        } catch (const Error& e) {
            throw InferenceError(std::string("refiner failed: ") + e.what());
        }
        outcome.refined = true;
        run_candidate(candidate, executable, result, exec_error);
    }

    outcome.gql = candidate;
    outcome.executable = executable;
    if (executable) outcome.result = std::move(result);
    return outcome;
}

std::vector<PredictionRow> infer_dataset(const std::vector<Dialogue>& gold,
                                         const PropertyGraph& graph, const GraphSchema& schema,
                                         TextGenerator& generator,
                                         const PromptTemplates& templates,
                                         const Embedder& embedder, const DaConfig& config,
                                         std::uint64_t seed) {
    std::vector<PredictionRow> rows;
    for (const auto& dialogue : gold) {
        StructuredContext context;
        context.reference_date = latest_date(graph);
        for (const auto& turn : dialogue.turns) {
            InferOutcome out =
                infer_turn(turn.question_raw, context, graph, schema, generator, templates,
                           embedder, config,
                           mix_seed(seed, fnv1a64(dialogue.id) + static_cast<std::uint64_t>(turn.round)));
            rows.push_back({dialogue.id, turn.round, out.gql});
            context.record(turn.question_raw, out.explicit_question, out.gql,
                           out.executable ? render_answer(out.result)
                                          : nlohmann::json::array(),
                           schema);
        }
    }
    return rows;
}

}  // namespace mtforge
