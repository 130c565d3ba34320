#include "memoria/llm/prompts.hpp"

#include "memoria/llm/schemas.hpp"

namespace memoria::llm {

namespace {

constexpr std::string_view kSystem =
    "You assist caregivers of people living with mild dementia. Answer only with a single JSON "
    "object, no prose and no code fences.";

constexpr std::string_view kRubric =
    "Score the caregiver-side response on five axes, each from 0 (very poor) to 10 (excellent).\n"
    "- coherence: short, plain, well-ordered sentences; stays on the patient's topic and keeps the "
    "thread even when the patient drifts or is disoriented.\n"
    "- empathy: notices the patient's feelings, stays warm and calm, and does not show impatience "
    "when a question is asked again.\n"
    "- memory_support: gives accurate, concrete cues about the patient's schedule, people and past "
    "that help them remember, phrased as gentle reminders.\n"
    "- emotional_safety: steers clear of upsetting subjects, never contradicts or shames the "
    "patient, and reassures them when they are confused.\n"
    "- problem_solving: offers practical next steps the patient can follow one at a time, suited "
    "to this patient's situation.\n";

std::string_view instructions(Task task) {
    switch (task) {
    case Task::decompose:
        return "Split the patient's utterance into the people, places, objects and events it mentions. "
               "Use lowercase single words or short phrases; leave a list empty when nothing fits.";
    case Task::evaluate:
        return "Rate how well the retrieved knowledge-graph nodes let a caregiver answer the patient's "
               "utterance accurately and appropriately. 0 means useless, 1 means fully sufficient.";
    case Task::adjust_weights:
        return "Retrieval from the daily-routine graph and the life-memory graph was not good enough. "
               "Given the current weights and what each graph returned, propose new weights for the two "
               "graphs; favour the graph more likely to answer the utterance.";
    case Task::suggest_keywords:
        return "Suggest a few additional single-word search terms (synonyms or closely related concepts) "
               "that could find relevant nodes for the given keywords. Do not repeat existing keywords.";
    case Task::generate:
        return "Write a short reply to the patient, gentle and supportive in tone, grounded only in the "
               "given current activity and retrieved nodes. Do not invent facts.";
    case Task::followup:
        return "The available knowledge was not enough to answer. Ask the patient one short, kind question "
               "that would clarify the unresolved parts of what they said. Do not state any facts.";
    case Task::judge: return kRubric;
    case Task::synthesize:
        return "Produce synthetic but realistic care-facility records following the requested schema "
               "exactly.";
    }
    return "";
}

} // namespace

Prompt render_prompt(Task task, const nlohmann::json& payload) {
    std::string user;
    user += instructions(task);
    user += "\n\nReply with JSON of the form: ";
    user += output_shape(task);
    user += "\n\nInput:\n";
    user += payload.dump(2);
    return Prompt{{{"system", std::string(kSystem)}, {"user", std::move(user)}},
                  std::string(kPromptTemplateVersion)};
}

ChatMessage repair_message(Task task, std::string_view problem) {
    std::string text = "Your previous reply could not be used (";
    text += problem;
    text += "). Reply again with only a JSON object of the form: ";
    text += output_shape(task);
    return {"user", std::move(text)};
}

std::string_view judge_rubric() noexcept { return kRubric; }

} // namespace memoria::llm
