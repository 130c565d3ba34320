#pragma once

#include "memoria/llm/http_backend.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace memoria::llm {
class Gateway;
}

namespace memoria::eval {

struct MetricScores {
    double rouge1_f1 = 0.0;
    double rouge2_f1 = 0.0;
    double semantic_similarity = 0.0;

    bool operator==(const MetricScores&) const = default;
};

/// Clipped n-gram overlap F1 over kg tokens (stopwords kept). An empty
/// candidate scores 0. A reference too short to hold an n-gram scores 1 when
/// the token sequences are equal and 0 otherwise. Throws EmptyReference for a
/// blank reference and PreconditionError for n < 1.
double rouge_n(std::string_view candidate, std::string_view reference, int n);

/// Text similarity source behind semantic_similarity.
class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::string_view name() const = 0;
    /// Cosine in [-1, 1]. Throws GatewayError on transport failure.
    virtual double cosine(std::string_view a, std::string_view b) = 0;
};

/// Token-count vectors; no model involved.
class CountVectorEmbedding final : public EmbeddingBackend {
public:
    std::string_view name() const override { return "count-vector"; }
    double cosine(std::string_view a, std::string_view b) override;
};

/// Embeddings endpoint of an OpenAI-compatible server.
class HttpEmbedding final : public EmbeddingBackend {
public:
    HttpEmbedding(llm::HttpConfig config, std::string model) : config_(std::move(config)), model_(std::move(model)) {}
    std::string_view name() const override { return "http"; }
    double cosine(std::string_view a, std::string_view b) override;

private:
    llm::HttpConfig config_;
    std::string model_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

/// (1 + cos) / 2. Throws PreconditionError when either text is blank.
double semantic_similarity(std::string_view candidate, std::string_view reference, EmbeddingBackend& backend);

/// All three metrics; a blank candidate scores 0 everywhere.
MetricScores score_metrics(std::string_view candidate, std::string_view reference, EmbeddingBackend& backend);

enum class Dimension { coherence, empathy, memory_support, emotional_safety, problem_solving };
inline constexpr std::array kDimensions = {Dimension::coherence, Dimension::empathy, Dimension::memory_support,
                                           Dimension::emotional_safety, Dimension::problem_solving};

/// JSON key ("memory_support").
std::string_view to_string(Dimension d) noexcept;
/// Column heading ("Memory").
std::string_view heading(Dimension d) noexcept;

struct JudgeScores {
    double coherence = 0.0;
    double empathy = 0.0;
    double memory_support = 0.0;
    double emotional_safety = 0.0;
    double problem_solving = 0.0;

    double& operator[](Dimension d);
    double operator[](Dimension d) const;
    bool operator==(const JudgeScores&) const = default;
};

/// Every dimension clamped to [0, 10]; NaN becomes 0.
JudgeScores clamp(JudgeScores s);

enum class JudgeMode {
    blind,          // the judge sees dialogue and response only
    with_reference, // the reference answer is shown as well
};

struct JudgeInput {
    std::string dialogue;
    std::string response;
    std::string reference;
    std::vector<std::string> expected_terms; // facts from the patient's records
};

JudgeScores judge(const JudgeInput& input, const llm::Gateway& gateway, JudgeMode mode = JudgeMode::blind);

nlohmann::json to_json(const MetricScores& m);
nlohmann::json to_json(const JudgeScores& s);
/// Throws ParseError when a dimension is missing or not a number.
JudgeScores judge_scores_from_json(const nlohmann::json& doc);

} // namespace memoria::eval
