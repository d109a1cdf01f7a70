#include "mtforge/forge.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include "mtforge/errors.hpp"
#include "mtforge/gql/analysis.hpp"
#include "mtforge/gql/ast.hpp"
#include "mtforge/gql/parser.hpp"
#include "mtforge/rng.hpp"
#include "mtforge/text.hpp"

namespace mtforge {

namespace {

constexpr int kPatternCount = 6;

Pattern pattern_at(int index) { return static_cast<Pattern>(index); }

// Properties textually referenced in prior GQLs (prop accesses + map keys),
// type-blind; mirrors the question generator's view of "already asked".
std::set<std::string> referenced_properties(const std::vector<Turn>& history) {
    std::set<std::string> out;
    for (const auto& turn : history) {
        gql::QueryAst ast;
        try {
            ast = gql::parse(turn.gql);
        } catch (const Error&) {
            continue;
        }
        for (const auto& path : ast.match_paths)
            for (const auto& node : path.nodes)
                for (const auto& [key, lit] : node.props) out.insert(key);
        auto walk = [&](auto&& self, const gql::ExprPtr& e) -> void {
            if (!e) return;
            if (const auto* p = std::get_if<gql::PropAccess>(&e->node)) {
                out.insert(p->property);
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
        walk(walk, ast.where);
        for (const auto& item : ast.return_items) walk(walk, item.expr);
        for (const auto& key : ast.order_by) walk(walk, key.expr);
    }
    return out;
}

struct DateNeighborInfo {
    const EdgeTypeDef* edge = nullptr;
    const NodeTypeDef* neighbor = nullptr;
    std::string date_property;
};

std::optional<DateNeighborInfo> date_neighbor(const GraphSchema& schema,
                                              const std::string& type) {
    for (const auto& e : schema.edge_types) {
        if (e.source != type) continue;
        const NodeTypeDef* target = schema.find_node_type(e.target);
        if (!target) continue;
        for (const auto& p : target->properties)
            if (p.kind == ValueKind::Date) return DateNeighborInfo{&e, target, p.name};
    }
    return std::nullopt;
}

bool type_has_numeric(const GraphSchema& schema, const std::string& type) {
    const NodeTypeDef* def = schema.find_node_type(type);
    if (!def) return false;
    for (const auto& p : def->properties)
        if (p.kind == ValueKind::Number) return true;
    return false;
}

// Entities of the most recent turn, falling back to the whole scope.
std::vector<std::string> last_turn_entities(const SessionState& state) {
    if (!state.history.empty() && !state.history.back().entities.empty())
        return state.history.back().entities;
    return {state.entity_set.begin(), state.entity_set.end()};
}

std::string entity_type_of(const SessionState& state, const PropertyGraph& graph,
                           const std::string& id) {
    if (auto it = state.entity_types.find(id); it != state.entity_types.end()) return it->second;
    if (const GraphNode* node = graph.find_node(id)) return node->type;
    return "";
}

// Untraversed edge types incident to any in-scope entity type.
std::vector<std::string> untraversed_relations(const SessionState& state,
                                               const GraphSchema& schema,
                                               const PropertyGraph& graph,
                                               const std::string& entity_id) {
    std::vector<std::string> out;
    std::string type = entity_type_of(state, graph, entity_id);
    for (const EdgeTypeDef* e : schema.edges_incident(type))
        if (!state.relation_set.count(e->name)) out.push_back(e->name);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SessionState new_session(const GraphSchema& schema, const PropertyGraph& graph,
                         const ForgeConfig& config, std::uint64_t seed) {
    (void)schema;
    (void)graph;
    SessionState state;
    state.seed = seed;
    state.pattern_weights.fill(1.0 / kPatternCount);
    Rng rng(mix_seed(seed, fnv1a64("target_rounds")));
    state.target_rounds =
        static_cast<int>(rng.range(config.rounds_min, config.rounds_max));
    return state;
}

std::set<Pattern> applicable_patterns(const SessionState& state, const GraphSchema& schema,
                                      const PropertyGraph& graph) {
    std::set<Pattern> out;
    if (state.history.empty()) return out;

    auto last_entities = last_turn_entities(state);
    auto asked = referenced_properties(state.history);

    // P1: the last turn's entity type has >=1 property not yet asked.
    for (const auto& id : last_entities) {
        const NodeTypeDef* def = schema.find_node_type(entity_type_of(state, graph, id));
        if (!def) continue;
        for (const auto& p : def->properties) {
            bool is_bound = def->placeholder && p.name == def->placeholder->bound_property;
            if (!is_bound && !asked.count(p.name)) {
                out.insert(Pattern::P1);
                break;
            }
        }
        if (out.count(Pattern::P1)) break;
    }
    // P2: an entity in scope has a date-keyed neighbor.
    for (const auto& id : state.entity_set)
        if (date_neighbor(schema, entity_type_of(state, graph, id))) {
            out.insert(Pattern::P2);
            break;
        }
    // P3: an entity in scope has an untraversed edge type.
    for (const auto& id : state.entity_set)
        if (!untraversed_relations(state, schema, graph, id).empty()) {
            out.insert(Pattern::P3);
            break;
        }
    // P4: the graph holds >=2 nodes of a previously seen type, at least one
    // of them not yet in scope (the pivot must introduce a new entity).
    for (const auto& [id, type] : state.entity_types) {
        auto nodes = graph.nodes_of_type(type);
        if (nodes.size() < 2) continue;
        bool unseen = false;
        for (const GraphNode* node : nodes)
            if (!state.entity_set.count(node->id)) unseen = true;
        if (unseen) {
            out.insert(Pattern::P4);
            break;
        }
    }
    // P5: a numeric property is in scope (directly or via a date neighbor).
    for (const auto& id : state.entity_set) {
        std::string type = entity_type_of(state, graph, id);
        if (type_has_numeric(schema, type)) {
            out.insert(Pattern::P5);
            break;
        }
        if (auto neighbor = date_neighbor(schema, type)) {
            bool numeric = false;
            for (const auto& p : neighbor->neighbor->properties)
                if (p.kind == ValueKind::Number) numeric = true;
            if (numeric) {
                out.insert(Pattern::P5);
                break;
            }
        }
    }
    // P6: the last answer was a multi-row list a predicate can narrow.
    if (!state.history.empty() && state.history.back().answer.is_array() &&
        state.history.back().answer.size() >= 2) {
        for (const auto& id : last_entities)
            if (type_has_numeric(schema, entity_type_of(state, graph, id))) {
                out.insert(Pattern::P6);
                break;
            }
    }
    return out;
}

namespace {

// Weighted argmax with the Algorithm-1 entity boost: uniform 1/n start,
// +1/4 for candidates referenced in the previous turn (mass drawn equally
// from the others), ties by id order.
std::string weighted_pick(std::vector<std::string> candidates,
                          const std::set<std::string>& previous) {
    if (candidates.empty()) return "";
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    const std::size_t n = candidates.size();
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    if (n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!previous.count(candidates[i])) continue;
            weights[i] += 0.25;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) weights[j] -= 0.25 / static_cast<double>(n - 1);
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (weights[i] > weights[best]) best = i;
    return candidates[best];
}

std::vector<std::string> entity_candidates(Pattern pattern, const SessionState& state,
                                           const GraphSchema& schema, const PropertyGraph& graph) {
    std::vector<std::string> out;
    auto scope = [&](auto&& predicate) {
        for (const auto& id : state.entity_set)
            if (predicate(id)) out.push_back(id);
    };
    switch (pattern) {
        case Pattern::P1: {
            auto asked = referenced_properties(state.history);
            scope([&](const std::string& id) {
                const NodeTypeDef* def =
                    schema.find_node_type(entity_type_of(state, graph, id));
                if (!def) return false;
                for (const auto& p : def->properties) {
                    bool is_bound =
                        def->placeholder && p.name == def->placeholder->bound_property;
                    if (!is_bound && !asked.count(p.name)) return true;
                }
                return false;
            });
            break;
        }
        case Pattern::P2:
            scope([&](const std::string& id) {
                return date_neighbor(schema, entity_type_of(state, graph, id)).has_value();
            });
            break;
        case Pattern::P3:
            scope([&](const std::string& id) {
                return !untraversed_relations(state, schema, graph, id).empty();
            });
            break;
        case Pattern::P4: {
            // new entity of a previously seen type
            std::set<std::string> seen_types;
            for (const auto& [id, type] : state.entity_types) seen_types.insert(type);
            for (const auto& type : seen_types)
                for (const GraphNode* node : graph.nodes_of_type(type))
                    if (!state.entity_set.count(node->id)) out.push_back(node->id);
            break;
        }
        case Pattern::P5:
        case Pattern::P6:
            scope([&](const std::string& id) {
                std::string type = entity_type_of(state, graph, id);
                if (type_has_numeric(schema, type)) return true;
                if (pattern == Pattern::P5)
                    if (auto neighbor = date_neighbor(schema, type)) {
                        for (const auto& p : neighbor->neighbor->properties)
                            if (p.kind == ValueKind::Number) return true;
                    }
                return false;
            });
            break;
    }
    return out;
}

}  // namespace

PatternChoice select_pattern(SessionState& state, const GraphSchema& schema,
                             const PropertyGraph& graph) {
    auto applicable = applicable_patterns(state, schema, graph);
    if (applicable.empty())
        throw NoApplicablePatternError("no applicable expansion pattern (empty history?)");

    // argmax over applicable weights, ties -> lowest pattern index
    int chosen = -1;
    for (int i = 0; i < kPatternCount; ++i) {
        if (!applicable.count(pattern_at(i))) continue;
        if (chosen < 0 || state.pattern_weights[i] > state.pattern_weights[chosen]) chosen = i;
    }
    // halve the used pattern's weight, redistribute over the other five
    double removed = state.pattern_weights[chosen] / 2.0;
    state.pattern_weights[chosen] -= removed;
    for (int i = 0; i < kPatternCount; ++i)
        if (i != chosen) state.pattern_weights[i] += removed / (kPatternCount - 1);

    PatternChoice choice;
    choice.pattern = pattern_at(chosen);
    state.pattern_history.push_back(choice.pattern);

    std::set<std::string> previous_entities;
    std::set<std::string> previous_relations;
    if (!state.history.empty()) {
        const Turn& last = state.history.back();
        previous_entities.insert(last.entities.begin(), last.entities.end());
        previous_relations.insert(last.relations.begin(), last.relations.end());
    }

    std::string entity =
        weighted_pick(entity_candidates(choice.pattern, state, schema, graph), previous_entities);
    if (!entity.empty()) choice.entities.push_back(entity);

    if (choice.pattern == Pattern::P3 && !entity.empty()) {
        std::string relation = weighted_pick(untraversed_relations(state, schema, graph, entity),
                                             previous_relations);
        if (!relation.empty()) choice.relations.push_back(relation);
    } else if (choice.pattern == Pattern::P2 && !entity.empty()) {
        if (auto neighbor = date_neighbor(schema, entity_type_of(state, graph, entity)))
            choice.relations.push_back(neighbor->edge->name);
    }
    return choice;
}

Fulfillment fulfill_placeholders(const std::string& question_template,
                                 const PatternChoice& choice, const SessionState& state,
                                 const PropertyGraph& graph, std::uint64_t seed) {
    Fulfillment out;
    out.text = question_template;
    const GraphSchema& schema = graph.schema();

    // tokens present in the template, in first-appearance order
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i + 3 <= out.text.size(); ++i) {
        if (out.text[i] == '[' && out.text[i + 2] == ']' &&
            std::islower(static_cast<unsigned char>(out.text[i + 1]))) {
            std::string token = out.text.substr(i, 3);
            if (is_placeholder_token(token) &&
                std::find(tokens.begin(), tokens.end(), token) == tokens.end())
                tokens.push_back(token);
        }
    }

    auto display_value = [&](const GraphNode& node) -> std::string {
        const NodeTypeDef* def = schema.find_node_type(node.type);
        if (def && def->placeholder) {
            auto it = node.props.find(def->placeholder->bound_property);
            if (it != node.props.end()) return value_to_text(it->second);
        }
        return node.id;
    };

    int token_index = 0;
    for (const auto& token : tokens) {
        Rng rng(mix_seed(seed, fnv1a64(token) + static_cast<std::uint64_t>(token_index++)));
        std::string value;

        if (token == "[d]") {
            // dates adjacent to the chosen entity, else any date in the graph
            std::vector<std::string> dates;
            auto collect_dates = [&](const GraphNode& node) {
                for (const auto& [key, val] : node.props)
                    if (val.is_string() && looks_like_iso_date(val.as_string()))
                        dates.push_back(val.as_string());
            };
            if (!choice.entities.empty()) {
                for (std::size_t idx : graph.edges_from(choice.entities.front()))
                    if (const GraphNode* n = graph.find_node(graph.edges()[idx].dst))
                        collect_dates(*n);
            }
            if (dates.empty())
                for (const auto& node : graph.nodes()) collect_dates(node);
            if (dates.empty()) throw UnboundPlaceholderError("[d]");
            std::sort(dates.begin(), dates.end());
            dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
            value = dates[rng.bounded(dates.size())];
        } else if (token == "[m]") {
            // a threshold drawn from the values of the property under
            // discussion ("Which <type> have <prop> greater than [m]?")
            std::string prop;
            std::string entity_type;
            static const std::size_t npos = std::string::npos;
            if (auto which = out.text.find("Which "); which != npos) {
                if (auto have = out.text.find(" have ", which); have != npos)
                    entity_type =
                        fold_identifier(out.text.substr(which + 6, have - which - 6));
            }
            if (auto at = out.text.find(" have "); at != npos) {
                auto end = out.text.find(" greater than", at);
                if (end != npos) prop = fold_identifier(out.text.substr(at + 6, end - at - 6));
            }
            if (entity_type.empty() && !choice.entities.empty())
                entity_type = entity_type_of(state, graph, choice.entities.front());
            std::vector<double> values;
            for (const auto& node : graph.nodes()) {
                if (!entity_type.empty() && node.type != entity_type) continue;
                for (const auto& [key, val] : node.props)
                    if ((prop.empty() || key == prop) && val.is_number())
                        values.push_back(val.as_number());
            }
            if (values.empty()) throw UnboundPlaceholderError("[m]");
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            // candidate thresholds keep a strict > filter non-empty: one
            // below the minimum (everything passes) plus the interior values
            std::vector<double> thresholds{values.front() - 1.0};
            thresholds.insert(thresholds.end(), values.begin(), values.end() - 1);
            double v = thresholds[rng.bounded(thresholds.size())];
            value = v == static_cast<std::int64_t>(v)
                        ? std::to_string(static_cast<std::int64_t>(v))
                        : format_double(v);
        } else {
            // entity token: the chosen entity if its type matches, else a
            // seeded graph sample
            const NodeTypeDef* type_def = nullptr;
            for (const auto& t : schema.node_types)
                if (t.placeholder && t.placeholder->token == token) type_def = &t;
            if (!type_def)
                throw UnboundPlaceholderError(token);
            const GraphNode* node = nullptr;
            for (const auto& id : choice.entities) {
                const GraphNode* cand = graph.find_node(id);
                if (cand && cand->type == type_def->name) {
                    node = cand;
                    break;
                }
            }
            if (!node) {
                try {
                    node = graph.find_node(
                        sample_entity(graph, type_def->name, rng.next_u64()));
                } catch (const EmptyTypeError&) {
                    throw UnboundPlaceholderError(token);
                }
            }
            if (!node) throw UnboundPlaceholderError(token);
            value = display_value(*node);
            out.entity_ids.push_back(node->id);
        }
        out.bindings[token] = value;
        out.text = replace_all(out.text, token, value);
    }
    return out;
}

std::string apply_bindings(const std::string& text,
                           const std::map<std::string, std::string>& bindings) {
    std::string out = text;
    for (const auto& [token, value] : bindings) out = replace_all(out, token, value);
    return out;
}

namespace {

std::string make_focus(const PatternChoice& choice, const SessionState& state,
                       const PropertyGraph& graph) {
    const GraphSchema& schema = graph.schema();
    std::string focus;
    if (!choice.entities.empty()) {
        const std::string& id = choice.entities.front();
        std::string type = entity_type_of(state, graph, id);
        const NodeTypeDef* def = schema.find_node_type(type);
        std::string token = def && def->placeholder ? def->placeholder->token : "[s]";
        focus += "entity=" + token + "; type=" + type;
        if (choice.pattern == Pattern::P4 && !state.history.empty()) {
            // the entity the new one replaces: most recent of the same type
            for (auto it = state.history.rbegin(); it != state.history.rend(); ++it) {
                for (const auto& prev_id : it->entities) {
                    if (entity_type_of(state, graph, prev_id) != type) continue;
                    if (const GraphNode* node = graph.find_node(prev_id)) {
                        std::string display = node->id;
                        if (def && def->placeholder) {
                            auto pit = node->props.find(def->placeholder->bound_property);
                            if (pit != node->props.end()) display = value_to_text(pit->second);
                        }
                        focus += "; previous=" + display;
                        goto done;
                    }
                }
            }
        done:;
        }
    }
    if (!choice.relations.empty()) focus += "; relation=" + choice.relations.front();
    return focus;
}

// Answer values that name entities (string scalars matching a node id or a
// string-kind placeholder-bound property) enter the turn's entity record;
// follow-ups may link through answers, not just questions.
std::vector<std::string> answer_entities(const nlohmann::json& answer,
                                         const PropertyGraph& graph) {
    std::vector<std::string> out;
    if (!answer.is_array()) return out;
    for (const auto& cell : answer) {
        if (!cell.is_string()) continue;
        if (out.size() >= 8) break;
        std::string value = cell.get<std::string>();
        if (graph.find_node(value)) {
            out.push_back(value);
            continue;
        }
        for (const auto& node : graph.nodes()) {
            const NodeTypeDef* def = graph.schema().find_node_type(node.type);
            if (!def || !def->placeholder) continue;
            const PropertyDef* bound = def->find_property(def->placeholder->bound_property);
            if (!bound || bound->kind != ValueKind::String) continue;
            auto it = node.props.find(def->placeholder->bound_property);
            if (it != node.props.end() && it->second.is_string() &&
                it->second.as_string() == value) {
                out.push_back(node.id);
                break;
            }
        }
    }
    return out;
}

Turn make_turn(int round, const std::string& raw, const std::string& complete,
               const ValidationOutcome& outcome, const PatternChoice& choice,
               const Fulfillment& fulfillment, std::optional<Pattern> pattern,
               const PropertyGraph& graph) {
    Turn turn;
    turn.round = round;
    turn.question_raw = raw;
    turn.question_complete = complete;
    turn.gql = outcome.gql;
    turn.answer = render_answer(outcome.result);
    turn.pattern = pattern;
    std::set<std::string> ids(fulfillment.entity_ids.begin(), fulfillment.entity_ids.end());
    ids.insert(choice.entities.begin(), choice.entities.end());
    for (const auto& id : answer_entities(turn.answer, graph)) ids.insert(id);
    turn.entities.assign(ids.begin(), ids.end());
    auto ast = gql::parse(turn.gql);
    turn.relations = gql::edge_types(ast);
    return turn;
}

void record_turn(SessionState& state, const PropertyGraph& graph, const Turn& turn) {
    for (const auto& id : turn.entities) {
        state.entity_set.insert(id);
        if (const GraphNode* node = graph.find_node(id)) state.entity_types[id] = node->type;
    }
    for (const auto& rel : turn.relations) state.relation_set.insert(rel);
    state.history.push_back(turn);
}

}  // namespace

Dialogue run_dialogue(SessionState& state, const PropertyGraph& graph, const ForgeRuntime& runtime,
                      const std::string& dialogue_id) {
    Dialogue dialogue;
    dialogue.id = dialogue_id;
    dialogue.meta = {{"seed", state.seed},
                     {"schema_hash", graph.schema().fingerprint()},
                     {"target_rounds", state.target_rounds}};
    const GraphSchema& schema = graph.schema();

    for (int round = 1; round <= state.target_rounds; ++round) {
        PatternChoice choice;
        std::optional<Pattern> pattern;
        std::optional<std::string> focus;
        if (round > 1) {
            try {
                choice = select_pattern(state, schema, graph);
            } catch (const NoApplicablePatternError& e) {
                throw DialogueAbandonedError("dialogue '" + dialogue_id + "' abandoned at round " +
                                             std::to_string(round) + ": " + e.what());
            }
            pattern = choice.pattern;
            focus = make_focus(choice, state, graph);
        }

        bool recorded = false;
        std::string last_reason = "no attempt made";
        for (int attempt = 0; attempt < runtime.retry_budget; ++attempt) {
            std::uint64_t round_seed =
                mix_seed(state.seed, static_cast<std::uint64_t>(round * 97 + attempt));
            PromptInputs qin;
            qin.schema = &schema;
            qin.history = &state.history;
            qin.pattern = pattern;
            qin.focus = focus;
            Prompt question_prompt = build_prompt(*runtime.templates, PromptKind::Question, qin);

            try {
                GeneratorOutput question =
                    runtime.generator->generate(question_prompt, round_seed);
                Fulfillment fulfilled = fulfill_placeholders(question.question_complete, choice,
                                                             state, graph, round_seed);
                std::string raw = apply_bindings(question.question_raw, fulfilled.bindings);

                PromptInputs gin;
                gin.schema = &schema;
                gin.question = fulfilled.text;
                Prompt gql_prompt = build_prompt(*runtime.templates, PromptKind::Gql, gin);
                std::string gql_text =
                    runtime.generator->generate(gql_prompt, mix_seed(round_seed, 1)).text;

                ValidationOutcome outcome = validate_and_optimize(
                    fulfilled.text, gql_text, graph, *runtime.generator, *runtime.templates,
                    *runtime.embedder, runtime.quality, mix_seed(round_seed, 2));
                if (outcome.kind == ValidationOutcome::Kind::RegenerateQuestion) {
                    last_reason = outcome.reason;
                    continue;
                }
                record_turn(state, graph,
                            make_turn(round, raw, fulfilled.text, outcome, choice, fulfilled,
                                      pattern, graph));
                recorded = true;
                break;
            } catch (const UnboundPlaceholderError& e) {
                last_reason = std::string("unbound placeholder: ") + e.what();
            } catch (const UnrenderableError& e) {
                last_reason = std::string("unrenderable question: ") + e.what();
            }
        }
        if (!recorded)
            throw DialogueAbandonedError("dialogue '" + dialogue_id + "' abandoned at round " +
                                         std::to_string(round) + " after " +
                                         std::to_string(runtime.retry_budget) +
                                         " attempts: " + last_reason);
    }
    dialogue.turns = state.history;
    return dialogue;
}

GenerateResult generate_dataset(const PropertyGraph& graph, const ForgeRuntime& runtime,
                                const ForgeConfig& config, int count) {
    GenerateResult result;
    std::vector<std::optional<Dialogue>> slots(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    std::atomic<int> abandoned{0};

    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= count) break;
            std::uint64_t seed = mix_seed(config.seed, static_cast<std::uint64_t>(i));
            SessionState state = new_session(graph.schema(), graph, config, seed);
            char id[16];
            std::snprintf(id, sizeof(id), "d%05d", i);
            try {
                ForgeRuntime rt = runtime;
                rt.retry_budget = config.retry_budget;
                slots[static_cast<std::size_t>(i)] = run_dialogue(state, graph, rt, id);
            } catch (const Error&) {
                ++abandoned;
            }
        }
    };

    int workers = std::max(1, config.worker_count);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (auto& slot : slots)
        if (slot) result.dialogues.push_back(std::move(*slot));
    result.abandoned = abandoned.load();
    return result;
}

}  // namespace mtforge
