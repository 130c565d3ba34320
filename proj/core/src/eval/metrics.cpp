#include "memoria/eval/metrics.hpp"

#include "memoria/errors.hpp"
#include "memoria/kg/tokenize.hpp"
#include "memoria/llm/gateway.hpp"
#include "memoria/llm/prompts.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace memoria::eval {

using nlohmann::json;

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, int> ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
    std::map<Ngram, int> counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                       tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
    return counts;
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

double rouge_n(std::string_view candidate, std::string_view reference, int n) {
    if (n < 1) throw PreconditionError("rouge n must be at least 1");
    const auto ref = kg::tokenize(reference);
    if (ref.empty()) throw EmptyReference("reference has no tokens");
    const auto cand = kg::tokenize(candidate);
    if (cand.empty()) return 0.0;

    const auto un = static_cast<std::size_t>(n);
    const auto ref_counts = ngram_counts(ref, un);
    if (ref_counts.empty()) return cand == ref ? 1.0 : 0.0;
    const auto cand_counts = ngram_counts(cand, un);
    if (cand_counts.empty()) return 0.0;

    int overlap = 0;
    for (const auto& [gram, count] : cand_counts) {
        if (auto it = ref_counts.find(gram); it != ref_counts.end()) overlap += std::min(count, it->second);
    }
    if (overlap == 0) return 0.0;
    // 2PR / (P + R) with the fractions cancelled
    const auto grams = static_cast<double>(cand.size() - un + 1) + static_cast<double>(ref.size() - un + 1);
    return 2.0 * static_cast<double>(overlap) / grams;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw PreconditionError("cosine of vectors with different sizes");
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double CountVectorEmbedding::cosine(std::string_view a, std::string_view b) {
    std::map<std::string, std::pair<double, double>> counts;
    for (auto& t : kg::tokenize(a)) counts[std::move(t)].first += 1.0;
    for (auto& t : kg::tokenize(b)) counts[std::move(t)].second += 1.0;
    std::vector<double> va;
    std::vector<double> vb;
    for (const auto& [token, c] : counts) {
        va.push_back(c.first);
        vb.push_back(c.second);
    }
    return eval::cosine(va, vb);
}

double HttpEmbedding::cosine(std::string_view a, std::string_view b) {
    const json body = {{"model", model_}, {"input", {std::string(a), std::string(b)}}};
    const json reply = llm::http_post_json(config_, "/embeddings", body);
    try {
        const auto& data = reply.at("data");
        return eval::cosine(data.at(0).at("embedding").get<std::vector<double>>(),
                            data.at(1).at("embedding").get<std::vector<double>>());
    } catch (const json::exception&) {
        throw GatewayError("embeddings reply has no data[0..1].embedding");
    }
}

double semantic_similarity(std::string_view candidate, std::string_view reference, EmbeddingBackend& backend) {
    if (blank(candidate) || blank(reference)) throw PreconditionError("semantic similarity needs two non-empty texts");
    return std::clamp((1.0 + backend.cosine(candidate, reference)) / 2.0, 0.0, 1.0);
}

MetricScores score_metrics(std::string_view candidate, std::string_view reference, EmbeddingBackend& backend) {
    MetricScores m;
    if (blank(candidate)) {
        rouge_n(candidate, reference, 1); // still rejects an empty reference
        return m;
    }
    m.rouge1_f1 = rouge_n(candidate, reference, 1);
    m.rouge2_f1 = rouge_n(candidate, reference, 2);
    m.semantic_similarity = semantic_similarity(candidate, reference, backend);
    return m;
}

std::string_view to_string(Dimension d) noexcept {
    switch (d) {
    case Dimension::coherence: return "coherence";
    case Dimension::empathy: return "empathy";
    case Dimension::memory_support: return "memory_support";
    case Dimension::emotional_safety: return "emotional_safety";
    case Dimension::problem_solving: return "problem_solving";
    }
    return "coherence";
}

std::string_view heading(Dimension d) noexcept {
    switch (d) {
    case Dimension::coherence: return "Coherence";
    case Dimension::empathy: return "Empathy";
    case Dimension::memory_support: return "Memory";
    case Dimension::emotional_safety: return "Safety";
    case Dimension::problem_solving: return "Problem Solving";
    }
    return "Coherence";
}

double& JudgeScores::operator[](Dimension d) {
    switch (d) {
    case Dimension::coherence: return coherence;
    case Dimension::empathy: return empathy;
    case Dimension::memory_support: return memory_support;
    case Dimension::emotional_safety: return emotional_safety;
    case Dimension::problem_solving: return problem_solving;
    }
    return coherence;
}

double JudgeScores::operator[](Dimension d) const { return const_cast<JudgeScores&>(*this)[d]; }

JudgeScores clamp(JudgeScores s) {
    for (auto d : kDimensions) s[d] = std::isnan(s[d]) ? 0.0 : std::clamp(s[d], 0.0, 10.0);
    return s;
}

JudgeScores judge(const JudgeInput& input, const llm::Gateway& gateway, JudgeMode mode) {
    json payload = {{"rubric", llm::judge_rubric()},
                    {"dialogue", input.dialogue},
                    {"response", input.response},
                    {"expected_terms", input.expected_terms}};
    if (mode == JudgeMode::with_reference) payload["reference"] = input.reference;
    const auto reply = gateway.call({llm::Task::judge, payload});
    return clamp(judge_scores_from_json(reply.document));
}

json to_json(const MetricScores& m) {
    return {{"rouge1_f1", m.rouge1_f1}, {"rouge2_f1", m.rouge2_f1}, {"semantic_similarity", m.semantic_similarity}};
}

json to_json(const JudgeScores& s) {
    json out = json::object();
    for (auto d : kDimensions) out[std::string(to_string(d))] = s[d];
    return out;
}

JudgeScores judge_scores_from_json(const json& doc) {
    JudgeScores s;
    for (auto d : kDimensions) {
        auto it = doc.find(std::string(to_string(d)));
        if (it == doc.end() || !it->is_number()) {
            throw ParseError("judge scores need a number for " + std::string(to_string(d)));
        }
        s[d] = it->get<double>();
    }
    return s;
}

} // namespace memoria::eval
