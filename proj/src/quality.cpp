#include "mtforge/quality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "mtforge/errors.hpp"
#include "mtforge/gql/analysis.hpp"
#include "mtforge/gql/executor.hpp"
#include "mtforge/gql/parser.hpp"
#include "mtforge/gql/printer.hpp"
#include "mtforge/rng.hpp"
#include "mtforge/text.hpp"

namespace mtforge {

std::vector<float> fallback_embed(const std::string& text) {
    std::vector<float> v(kEmbeddingDim, 0.0f);
    if (text.empty()) return v;
    if (text.size() < 3) {
        v[fnv1a64(text) % kEmbeddingDim] += 1.0f;
    } else {
        for (std::size_t i = 0; i + 3 <= text.size(); ++i)
            v[fnv1a64(std::string_view(text).substr(i, 3)) % kEmbeddingDim] += 1.0f;
    }
    double norm = 0;
    for (float x : v) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    if (norm > 0)
        for (float& x : v) x = static_cast<float>(x / norm);
    return v;
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw InvariantError("embedding dimensions differ");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

struct ExecOutcome {
    bool ok = false;
    ResultTable result;
    std::string error;
};

ExecOutcome try_execute(const std::string& gql_text, const PropertyGraph& graph) {
    ExecOutcome out;
    try {
        auto ast = gql::parse(gql_text);
        out.result = gql::execute(ast, graph);
        out.ok = true;
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

ValidationOutcome validate_and_optimize(const std::string& question, const std::string& gql_text,
                                        const PropertyGraph& graph, TextGenerator& generator,
                                        const PromptTemplates& templates, const Embedder& embedder,
                                        const QualityConfig& config, std::uint64_t seed) {
    ValidationOutcome outcome;
    outcome.gql = gql_text;

    // --- syntax validation: the query must parse and execute ---
    ExecOutcome exec = try_execute(outcome.gql, graph);
    while (!exec.ok) {
        if (outcome.syntax_attempts >= config.repair_attempts) {
            outcome.kind = ValidationOutcome::Kind::RegenerateQuestion;
            outcome.reason = "syntax repair exhausted: " + exec.error;
            return outcome;
        }
        ++outcome.syntax_attempts;
        PromptInputs inputs;
        inputs.question = question;
        inputs.gql = outcome.gql;
        inputs.error = exec.error;
        Prompt prompt = build_prompt(templates, PromptKind::Repair, inputs);
        try {
            outcome.gql =
                generator.generate(prompt, mix_seed(seed, 100 + outcome.syntax_attempts)).text;
        } catch (const Error& e) {
            outcome.kind = ValidationOutcome::Kind::RegenerateQuestion;
            outcome.reason = std::string("GeneratorUnavailable: ") + e.what();
            return outcome;
        }
        exec = try_execute(outcome.gql, graph);
    }

    // --- semantic validation: reverse generation + embedding similarity ---
    auto original_vec = embedder.embed(question);
    auto semantic_score = [&](const std::string& current_gql) -> double {
        PromptInputs inputs;
        inputs.schema = &graph.schema();
        inputs.gql = current_gql;
        Prompt prompt = build_prompt(templates, PromptKind::Reverse, inputs);
        std::string inferred =
            generator.generate(prompt, mix_seed(seed, 200 + outcome.semantic_attempts)).text;
        return cosine_similarity(original_vec, embedder.embed(inferred));
    };

    double score;
    try {
        score = semantic_score(outcome.gql);
    } catch (const Error& e) {
        outcome.kind = ValidationOutcome::Kind::RegenerateQuestion;
        outcome.reason = std::string("GeneratorUnavailable: ") + e.what();
        return outcome;
    }
    while (score < config.tau_sem) {
        if (outcome.semantic_attempts >= config.repair_attempts) {
            outcome.kind = ValidationOutcome::Kind::RegenerateQuestion;
            outcome.reason = "semantic repair exhausted: similarity " + format_double(score) +
                             " below " + format_double(config.tau_sem);
            return outcome;
        }
        ++outcome.semantic_attempts;
        PromptInputs inputs;
        inputs.question = question;
        inputs.gql = outcome.gql;
        inputs.error = "semantic mismatch: reverse-generated question similarity " +
                       format_double(score) + " below " + format_double(config.tau_sem);
        Prompt prompt = build_prompt(templates, PromptKind::Repair, inputs);
        std::string candidate;
        try {
            candidate =
                generator.generate(prompt, mix_seed(seed, 300 + outcome.semantic_attempts)).text;
        } catch (const Error& e) {
            outcome.kind = ValidationOutcome::Kind::RegenerateQuestion;
            outcome.reason = std::string("GeneratorUnavailable: ") + e.what();
            return outcome;
        }
        ExecOutcome cand_exec = try_execute(candidate, graph);
        if (cand_exec.ok) {
            outcome.gql = candidate;
            exec = cand_exec;
            try {
                score = semantic_score(outcome.gql);
            } catch (const Error& e) {
                outcome.kind = ValidationOutcome::Kind::RegenerateQuestion;
                outcome.reason = std::string("GeneratorUnavailable: ") + e.what();
                return outcome;
            }
        }
        // non-executable candidates burn an attempt without replacing the query
    }

    outcome.result = std::move(exec.result);
    outcome.kind = (outcome.syntax_attempts + outcome.semantic_attempts) > 0
                       ? ValidationOutcome::Kind::Repaired
                       : ValidationOutcome::Kind::Accepted;
    return outcome;
}

std::vector<std::string> masked_templates(const Dialogue& dialogue, const GraphSchema& schema) {
    std::set<std::string> templates;
    for (const auto& turn : dialogue.turns) {
        gql::QueryAst ast;
        try {
            ast = gql::parse(turn.gql);
        } catch (const Error& e) {
            throw ParseError("dialogue '" + dialogue.id + "' round " + std::to_string(turn.round) +
                             ": " + e.what());
        }
        templates.insert(gql::mask_entities(ast, schema));
    }
    return {templates.begin(), templates.end()};
}

std::string dialogue_question_text(const Dialogue& dialogue) {
    std::string out;
    for (const auto& turn : dialogue.turns) {
        if (!out.empty()) out += " ";
        out += turn.question_complete;
    }
    return out;
}

nlohmann::json FilterReport::to_json() const {
    nlohmann::json doc;
    doc["kept"] = kept;
    doc["discarded"] = nlohmann::json::array();
    for (const auto& [id, reason] : discarded) {
        nlohmann::json jr;
        jr["id"] = id;
        jr["partner"] = reason.partner_id;
        if (reason.kind == DiscardReason::Kind::MaskedGqlOverlap) {
            jr["reason"] = "MaskedGqlOverlap";
            jr["shared_count"] = reason.shared_count;
        } else {
            jr["reason"] = "EmbeddingSimilarity";
            jr["cosine"] = reason.cosine;
        }
        doc["discarded"].push_back(std::move(jr));
    }
    return doc;
}

namespace {

std::vector<std::size_t> id_scan_order(const std::vector<Dialogue>& dialogues) {
    std::vector<std::size_t> order(dialogues.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dialogues[a].id < dialogues[b].id;
    });
    return order;
}

int shared_count(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    int count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = a[i].compare(b[j]);
        if (c == 0) {
            ++count;
            ++i;
            ++j;
        } else if (c < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return count;
}

}  // namespace

FilterReport filter_masked_gql(const std::vector<Dialogue>& dialogues, const GraphSchema& schema,
                               const QualityConfig& config) {
    FilterReport report;
    std::vector<std::vector<std::string>> templates(dialogues.size());
    for (std::size_t i = 0; i < dialogues.size(); ++i)
        templates[i] = masked_templates(dialogues[i], schema);

    auto order = id_scan_order(dialogues);
    if (!config.global_overlap_mode) {
        std::vector<std::size_t> kept_idx;
        for (std::size_t idx : order) {
            bool discard = false;
            for (std::size_t k : kept_idx) {
                int shared = shared_count(templates[idx], templates[k]);
                if (shared > config.masked_overlap_limit) {
                    report.discarded.emplace_back(
                        dialogues[idx].id,
                        DiscardReason{DiscardReason::Kind::MaskedGqlOverlap, dialogues[k].id,
                                      shared, 0.0});
                    discard = true;
                    break;
                }
            }
            if (!discard) {
                kept_idx.push_back(idx);
                report.kept.push_back(dialogues[idx].id);
            }
        }
    } else {
        // global mode: cap how often one masked template may occur across
        // kept dialogues
        std::map<std::string, int> frequency;
        std::map<std::string, std::string> last_contributor;
        for (std::size_t idx : order) {
            const std::string* offending = nullptr;
            for (const auto& t : templates[idx]) {
                if (frequency[t] >= config.masked_overlap_limit) {
                    offending = &t;
                    break;
                }
            }
            if (offending) {
                report.discarded.emplace_back(
                    dialogues[idx].id,
                    DiscardReason{DiscardReason::Kind::MaskedGqlOverlap,
                                  last_contributor[*offending], frequency[*offending], 0.0});
                continue;
            }
            for (const auto& t : templates[idx]) {
                ++frequency[t];
                last_contributor[t] = dialogues[idx].id;
            }
            report.kept.push_back(dialogues[idx].id);
        }
    }
    return report;
}

FilterReport filter_embedding(const std::vector<Dialogue>& dialogues, const Embedder& embedder,
                              double threshold) {
    FilterReport report;
    std::vector<std::vector<float>> vectors(dialogues.size());
    for (std::size_t i = 0; i < dialogues.size(); ++i)
        vectors[i] = embedder.embed(dialogue_question_text(dialogues[i]));

    auto order = id_scan_order(dialogues);
    std::vector<std::size_t> kept_idx;
    for (std::size_t idx : order) {
        bool discard = false;
        for (std::size_t k : kept_idx) {
            double cos = cosine_similarity(vectors[idx], vectors[k]);
            if (cos > threshold) {
                report.discarded.emplace_back(
                    dialogues[idx].id, DiscardReason{DiscardReason::Kind::EmbeddingSimilarity,
                                                     dialogues[k].id, 0, cos});
                discard = true;
                break;
            }
        }
        if (!discard) {
            kept_idx.push_back(idx);
            report.kept.push_back(dialogues[idx].id);
        }
    }
    return report;
}

}  // namespace mtforge
