#include "memoria/planner/planner.hpp"

#include "memoria/errors.hpp"
#include "memoria/llm/gateway.hpp"

namespace memoria::planner {

namespace {

retrieval::CandidateSet current_only(const retrieval::GraphPair& graphs, Timestamp now) {
    retrieval::CandidateSet out;
    out.current_activity = kg::find_current_activity(graphs.daily(), now);
    return out;
}

struct Prepared {
    query::KeywordSet keywords;
    query::QueryDecomposition decomposition;
};

Prepared prepare(const query::DialogueTurn& turn, const llm::Gateway& gateway) {
    Prepared out;
    try {
        out.keywords = query::extract_keywords(turn);
    } catch (const EmptyQuery&) {
        // the decomposition may still contribute terms
    }
    out.decomposition = query::decompose(turn, gateway);
    out.keywords = query::merge_decomposition(std::move(out.keywords), out.decomposition);
    return out;
}

[[noreturn]] void abort_with(const std::exception& e, std::vector<IterationTrace> trace) {
    throw PlannerAborted(std::string("planner aborted: ") + e.what(), std::move(trace), std::current_exception());
}

} // namespace

PlannerResponse run_single_pass(const query::DialogueTurn& turn, const retrieval::GraphPair& graphs,
                                const llm::Gateway& gateway, const PlannerConfig& config,
                                retrieval::SearchScope scope) {
    validate(config);
    query::validate(turn);
    PlannerResponse response;
    try {
        auto [keywords, decomposition] = prepare(turn, gateway);
        response.decomposition = std::move(decomposition);
        IterationTrace trace;
        trace.keywords_used = keywords;
        trace.candidates = keywords.empty()
                               ? current_only(graphs, turn.timestamp)
                               : retrieval::search(graphs, keywords, trace.weights_used, turn.timestamp,
                                                   config.top_k, scope);
        const TurnContext context{turn, graphs, keywords, response.decomposition};
        trace.efficiency = evaluate(trace.candidates, context, gateway);
        response.trace.push_back(std::move(trace));
        const auto& candidates = response.trace.back().candidates;
        if (candidates.empty()) {
            response.outcome = FollowUp{
                build_followup_prompt(turn, response.decomposition, response.trace, graphs, gateway)};
        } else {
            response.outcome = generate_response(candidates, turn, graphs, gateway);
        }
        return response;
    } catch (const GatewayError& e) {
        abort_with(e, response.trace);
    } catch (const DecodeError& e) {
        abort_with(e, response.trace);
    }
}

PlannerResponse run(const query::DialogueTurn& turn, const retrieval::GraphPair& graphs, const llm::Gateway& gateway,
                    const PlannerConfig& config) {
    validate(config);
    query::validate(turn);

    PlannerResponse response;
    try {
        auto prepared = prepare(turn, gateway);
        auto keywords = std::move(prepared.keywords);
        response.decomposition = std::move(prepared.decomposition);

        retrieval::GraphWeights weights;
        for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
            IterationTrace trace;
            trace.attempt = attempt;
            trace.weights_used = weights;
            trace.keywords_used = keywords;
            trace.candidates = keywords.empty()
                                   ? current_only(graphs, turn.timestamp)
                                   : retrieval::search(graphs, keywords, weights, turn.timestamp, config.top_k);
            const TurnContext context{turn, graphs, keywords, response.decomposition};
            trace.efficiency = evaluate(trace.candidates, context, gateway);
            response.trace.push_back(trace);

            if (trace.efficiency >= config.threshold) {
                response.outcome = generate_response(trace.candidates, turn, graphs, gateway);
                return response;
            }

            auto adjusted = adjust_weights(weights, gateway, trace);
            weights = adjusted.weights;
            auto expansion = expand_keywords(keywords, gateway);
            keywords = std::move(expansion.keywords);

            auto& recorded = response.trace.back();
            recorded.weight_adjustment = weights;
            recorded.adjustment_rejected = std::move(adjusted.rejected);
            recorded.keywords_added = std::move(expansion.added);
        }
        response.outcome = FollowUp{
            build_followup_prompt(turn, response.decomposition, response.trace, graphs, gateway)};
        return response;
    } catch (const GatewayError& e) {
        abort_with(e, response.trace);
    } catch (const DecodeError& e) {
        abort_with(e, response.trace);
    }
}

} // namespace memoria::planner
