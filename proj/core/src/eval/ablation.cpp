#include "memoria/eval/ablation.hpp"

#include "memoria/errors.hpp"
#include "memoria/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

namespace memoria::eval {

using nlohmann::json;

std::string_view to_string(Variant v) noexcept {
    switch (v) {
    case Variant::baseline1: return "baseline1";
    case Variant::baseline2: return "baseline2";
    case Variant::full: return "full";
    }
    return "full";
}

Variant parse_variant(std::string_view text) {
    for (auto v : kVariants) {
        if (to_string(v) == text) return v;
    }
    throw ParseError("unknown ablation variant '" + std::string(text) + "'");
}

planner::PlannerResponse answer(const AblationConfig& config, const query::DialogueTurn& turn,
                                const retrieval::GraphPair& graphs, const llm::Gateway& gateway) {
    switch (config.variant) {
    case Variant::baseline1:
        return planner::run_single_pass(turn, graphs, gateway, config.planner, retrieval::SearchScope::daily_only);
    case Variant::baseline2:
        return planner::run_single_pass(turn, graphs, gateway, config.planner, retrieval::SearchScope::both);
    case Variant::full: return planner::run(turn, graphs, gateway, config.planner);
    }
    throw PreconditionError("unknown ablation variant");
}

namespace {

void add(Aggregate& a, const ItemResult& item) {
    ++a.count;
    a.metrics.rouge1_f1 += item.metrics.rouge1_f1;
    a.metrics.rouge2_f1 += item.metrics.rouge2_f1;
    a.metrics.semantic_similarity += item.metrics.semantic_similarity;
    for (auto d : kDimensions) a.judge[d] += item.judge[d];
}

void finish(Aggregate& a) {
    if (a.count == 0) return;
    const auto n = static_cast<double>(a.count);
    a.metrics.rouge1_f1 /= n;
    a.metrics.rouge2_f1 /= n;
    a.metrics.semantic_similarity /= n;
    for (auto d : kDimensions) a.judge[d] /= n;
}

struct WorkItem {
    const synth::PatientRecord* patient;
    const retrieval::GraphPair* graphs;
    const synth::DialogueItem* dialogue;
};

ItemResult evaluate_item(const AblationConfig& config, const WorkItem& w, const llm::Gateway& gateway,
                         const llm::Gateway& judge_gateway, EmbeddingBackend& embeddings,
                         const AblationOptions& options) {
    ItemResult item;
    item.dialogue_id = w.dialogue->id;
    item.patient_id = w.patient->id();
    item.kind = w.dialogue->kind;
    item.confusion_type = w.dialogue->confusion_type;
    try {
        std::string reference = w.dialogue->reference;
        if (options.gold != nullptr) {
            if (const auto* g = options.gold->find(item.dialogue_id); g != nullptr && g->gold_response) {
                reference = *g->gold_response;
            }
        }
        const auto response = answer(config, {w.dialogue->text, w.dialogue->timestamp}, *w.graphs, gateway);
        item.response = response.text();
        item.generated = response.generated();
        item.trace_length = response.trace.size();
        if (item.generated) {
            item.provenance = std::get<planner::Generated>(response.outcome).provenance;
            for (const auto& hit : response.trace.back().candidates.memory_hits) {
                if (std::find(item.provenance.begin(), item.provenance.end(), hit.node_id) != item.provenance.end()) {
                    item.memory_provenance.push_back(hit.node_id);
                }
            }
        }
        item.metrics = score_metrics(item.response, reference, embeddings);
        item.judge = judge({w.dialogue->text, item.response, reference, w.dialogue->expected_terms}, judge_gateway,
                           options.judge_mode);
    } catch (const std::exception& e) {
        item.error = e.what();
    }
    return item;
}

} // namespace

void aggregate(EvalReport& report) {
    report.clear = {};
    report.confused = {};
    report.overall = {};
    report.failed = 0;
    for (const auto& item : report.items) {
        if (item.error) {
            ++report.failed;
            continue;
        }
        add(item.kind == synth::DialogueKind::clear ? report.clear : report.confused, item);
        add(report.overall, item);
    }
    finish(report.clear);
    finish(report.confused);
    finish(report.overall);
}

const GoldEntry* GoldSet::find(std::string_view id) const {
    auto it = entries.find(std::string(id));
    return it == entries.end() ? nullptr : &it->second;
}

std::optional<JudgeScores> GoldSet::row() const {
    JudgeScores sum;
    std::size_t n = 0;
    for (const auto& [id, e] : entries) {
        if (!e.scores) continue;
        ++n;
        for (auto d : kDimensions) sum[d] += (*e.scores)[d];
    }
    if (n == 0) return std::nullopt;
    for (auto d : kDimensions) sum[d] /= static_cast<double>(n);
    return sum;
}

GoldSet parse_gold_jsonl(std::string_view text) {
    GoldSet gold;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const auto where = "gold line " + std::to_string(line_no);
        const auto doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) throw ParseError(where + ": not a JSON object");
        auto id = doc.find("dialogue_id");
        if (id == doc.end() || !id->is_string()) throw ParseError(where + ": dialogue_id missing");
        GoldEntry e;
        e.dialogue_id = id->get<std::string>();
        if (auto r = doc.find("gold_response"); r != doc.end() && r->is_string()) e.gold_response = r->get<std::string>();
        if (auto s = doc.find("scores"); s != doc.end() && !s->is_null()) e.scores = judge_scores_from_json(*s);
        gold.entries[e.dialogue_id] = std::move(e);
    }
    return gold;
}

GoldSet load_gold_file(const std::filesystem::path& path) { return parse_gold_jsonl(read_file(path)); }

const EvalReport* AblationResult::report(Variant v) const {
    for (const auto& r : reports) {
        if (r.variant == v) return &r;
    }
    return nullptr;
}

JudgeScores normalize(const JudgeScores& scores, const JudgeScores& gold) {
    JudgeScores out;
    for (auto d : kDimensions) out[d] = gold[d] == 0.0 ? 0.0 : scores[d] / gold[d] * 10.0;
    return out;
}

AblationResult run_ablation(const synth::Corpus& corpus, const std::vector<AblationConfig>& configs,
                            const llm::Gateway& gateway, EmbeddingBackend& embeddings, const AblationOptions& options) {
    for (const auto& c : configs) planner::validate(c.planner);
    const llm::Gateway& judge_gateway = options.judge_gateway != nullptr ? *options.judge_gateway : gateway;

    std::vector<retrieval::GraphPair> graphs;
    graphs.reserve(corpus.patients.size());
    for (const auto& p : corpus.patients) graphs.emplace_back(p.daily, p.memory);
    std::vector<WorkItem> work;
    for (std::size_t i = 0; i < corpus.patients.size(); ++i) {
        for (const auto& d : corpus.patients[i].draft.dialogues) work.push_back({&corpus.patients[i], &graphs[i], &d});
    }

    AblationResult result;
    for (const auto& config : configs) {
        EvalReport report;
        report.variant = config.variant;
        report.items.resize(work.size());
        auto one = [&](std::size_t k) {
            report.items[k] = evaluate_item(config, work[k], gateway, judge_gateway, embeddings, options);
        };
        const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
        if (jobs == 1) {
            for (std::size_t k = 0; k < work.size(); ++k) one(k);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < std::min(jobs, work.size()); ++t) {
                pool.emplace_back([&] {
                    for (auto k = next++; k < work.size(); k = next++) one(k);
                });
            }
        }
        aggregate(report);
        result.reports.push_back(std::move(report));
    }

    if (options.gold != nullptr) result.gold = options.gold->row();
    if (result.gold) {
        for (const auto& r : result.reports) result.normalized[r.variant] = normalize(r.overall.judge, *result.gold);
    }
    return result;
}

namespace {

std::string row_label(Variant v) {
    switch (v) {
    case Variant::baseline1: return "Baseline 1";
    case Variant::baseline2: return "Baseline 2";
    case Variant::full: return "Full";
    }
    return "";
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string lpad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

} // namespace

std::string metrics_table(const EvalReport& report) {
    std::string out = "Variant: " + std::string(to_string(report.variant)) + "\n";
    out += pad("Dialogue Type", 20) + lpad("ROUGE-1", 9) + lpad("ROUGE-2", 9) + lpad("Semantic", 10) + lpad("N", 6) +
           "\n";
    auto line = [&](const char* label, const Aggregate& a) {
        out += pad(label, 20) + lpad(fixed(a.metrics.rouge1_f1), 9) + lpad(fixed(a.metrics.rouge2_f1), 9) +
               lpad(fixed(a.metrics.semantic_similarity), 10) + lpad(std::to_string(a.count), 6) + "\n";
    };
    line("Clear Dialogue", report.clear);
    line("Confused Dialogue", report.confused);
    line("Overall", report.overall);
    if (report.failed > 0) out += "failed items: " + std::to_string(report.failed) + "\n";
    return out;
}

std::string judge_table(const AblationResult& result) {
    auto header = pad("", 12) + lpad("Routine KG", 12) + lpad("Memory KG", 11) + lpad("Planning Agent", 16);
    for (auto d : kDimensions) header += lpad(std::string(heading(d)), 17);
    std::string out = header + "\n";
    auto line = [&](const std::string& label, const char* r, const char* m, const char* p, const JudgeScores& s) {
        out += pad(label, 12) + lpad(r, 12) + lpad(m, 11) + lpad(p, 16);
        for (auto d : kDimensions) out += lpad(fixed(s[d]), 17);
        out += "\n";
    };
    for (const auto& rep : result.reports) {
        const bool memory = rep.variant != Variant::baseline1;
        const bool agent = rep.variant == Variant::full;
        line(row_label(rep.variant), "yes", memory ? "yes" : "no", agent ? "yes" : "no", rep.overall.judge);
    }
    if (result.gold) {
        line("Gold", "-", "-", "-", *result.gold);
        out += "\nNormalized to gold (score / gold x 10)\n" + header + "\n";
        for (const auto& [variant, s] : result.normalized) {
            const bool memory = variant != Variant::baseline1;
            line(row_label(variant), "yes", memory ? "yes" : "no", variant == Variant::full ? "yes" : "no", s);
        }
    }
    return out;
}

json to_json(const ItemResult& item) {
    return {{"dialogue_id", item.dialogue_id},
            {"patient_id", item.patient_id},
            {"kind", synth::to_string(item.kind)},
            {"confusion_type", item.confusion_type ? json(synth::to_string(*item.confusion_type)) : json()},
            {"response", item.response},
            {"outcome", item.generated ? "generated" : "followup"},
            {"provenance", item.provenance},
            {"memory_provenance", item.memory_provenance},
            {"trace_length", item.trace_length},
            {"metrics", to_json(item.metrics)},
            {"judge", to_json(item.judge)},
            {"error", item.error ? json(*item.error) : json()}};
}

json to_json(const Aggregate& a) {
    return {{"count", a.count}, {"metrics", to_json(a.metrics)}, {"judge", to_json(a.judge)}};
}

json to_json(const EvalReport& report) {
    json items = json::array();
    for (const auto& i : report.items) items.push_back(to_json(i));
    return {{"variant", to_string(report.variant)},
            {"aggregates", {{"clear", to_json(report.clear)},
                            {"confused", to_json(report.confused)},
                            {"overall", to_json(report.overall)}}},
            {"failed", report.failed},
            {"items", std::move(items)}};
}

json to_json(const AblationResult& result) {
    json reports = json::array();
    json table = json::array();
    for (const auto& r : result.reports) {
        reports.push_back(to_json(r));
        table.push_back({{"row", to_string(r.variant)}, {"scores", to_json(r.overall.judge)}});
    }
    if (result.gold) table.push_back({{"row", "gold"}, {"scores", to_json(*result.gold)}});
    json normalized = json::object();
    for (const auto& [v, s] : result.normalized) normalized[std::string(to_string(v))] = to_json(s);
    return {{"judge_table", std::move(table)},
            {"gold", result.gold ? to_json(*result.gold) : json()},
            {"normalized", std::move(normalized)},
            {"reports", std::move(reports)}};
}

json radar_json(const AblationResult& result) {
    json dims = json::array();
    for (auto d : kDimensions) dims.push_back(to_string(d));
    json series = json::array();
    for (const auto& r : result.reports) {
        json s = {{"variant", to_string(r.variant)}, {"raw", to_json(r.overall.judge)}};
        if (auto it = result.normalized.find(r.variant); it != result.normalized.end()) {
            s["normalized"] = to_json(it->second);
        }
        series.push_back(std::move(s));
    }
    return {{"dimensions", std::move(dims)},
            {"scale", 10},
            {"normalized", result.gold.has_value()},
            {"gold", result.gold ? to_json(*result.gold) : json()},
            {"series", std::move(series)}};
}

} // namespace memoria::eval
