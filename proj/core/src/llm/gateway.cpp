#include "memoria/llm/gateway.hpp"

#include "memoria/errors.hpp"
#include "memoria/llm/prompts.hpp"
#include "memoria/llm/schemas.hpp"

#include <cstdio>

namespace memoria::llm {

std::string_view to_string(Task task) noexcept {
    switch (task) {
    case Task::decompose: return "decompose";
    case Task::evaluate: return "evaluate";
    case Task::adjust_weights: return "adjust_weights";
    case Task::suggest_keywords: return "suggest_keywords";
    case Task::generate: return "generate";
    case Task::followup: return "followup";
    case Task::judge: return "judge";
    case Task::synthesize: return "synthesize";
    }
    return "unknown";
}

Task parse_task(std::string_view text) {
    for (Task t : {Task::decompose, Task::evaluate, Task::adjust_weights, Task::suggest_keywords, Task::generate,
                   Task::followup, Task::judge, Task::synthesize}) {
        if (to_string(t) == text) return t;
    }
    throw ParseError("unknown gateway task '" + std::string(text) + "'");
}

std::string raw_text_hash(std::string_view raw) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : raw) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_audit_line(const AuditRecord& r) {
    nlohmann::json line = {{"task", to_string(r.task)},
                           {"backend", r.backend},
                           {"latency_us", r.latency.count()},
                           {"retries", r.retries},
                           {"raw_hash", r.raw_hash},
                           {"ok", r.ok}};
    return line.dump();
}

void StreamAuditSink::record(const AuditRecord& record) {
    std::lock_guard lock(mutex_);
    out_ << format_audit_line(record) << '\n';
    out_.flush();
}

Gateway::Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<AuditSink> audit)
    : backend_(std::move(backend)), audit_(std::move(audit)) {
    if (!backend_) throw PreconditionError("gateway needs a backend");
    if (auto cap = backend_->max_in_flight(); cap > 0) {
        in_flight_ = std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(cap));
    }
}

GatewayResponse Gateway::call(const GatewayRequest& request) const {
    return call(request, [task = request.task](const nlohmann::json& doc) { validate_task_output(task, doc); });
}

GatewayResponse Gateway::call(const GatewayRequest& request, const Validator& validator) const {
    ++calls_;
    struct SlotGuard {
        std::counting_semaphore<>* sem;
        explicit SlotGuard(std::counting_semaphore<>* s) : sem(s) {
            if (sem) sem->acquire();
        }
        ~SlotGuard() {
            if (sem) sem->release();
        }
    } slot(in_flight_.get());

    const auto started = std::chrono::steady_clock::now();
    AuditRecord audit;
    audit.task = request.task;
    audit.backend = std::string(backend_->name());
    auto finish = [&](const std::string& raw, bool ok) {
        if (!audit_) return;
        audit.latency =
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
        audit.raw_hash = raw_text_hash(raw);
        audit.ok = ok;
        audit_->record(audit);
    };

    Prompt prompt = render_prompt(request.task, request.payload);
    const int budget = request.budget < 1 ? 1 : request.budget;
    std::string raw;
    std::string problem;
    for (int attempt = 1; attempt <= budget; ++attempt) {
        audit.retries = attempt - 1;
        try {
            raw = backend_->complete(request, prompt);
        } catch (const GatewayError&) {
            finish(raw, false);
            throw;
        }
        if (auto doc = extract_json(raw)) {
            try {
                validator(*doc);
                finish(raw, true);
                return GatewayResponse{std::move(*doc), std::move(raw), attempt};
            } catch (const OutputRejected& e) {
                problem = e.what();
            }
        } else {
            problem = "not a JSON object";
        }
        prompt.messages.push_back({"assistant", raw});
        prompt.messages.push_back(repair_message(request.task, problem));
    }
    finish(raw, false);
    throw DecodeError(std::string(to_string(request.task)) + " output unusable after " + std::to_string(budget) +
                          " attempts: " + problem,
                      raw);
}

} // namespace memoria::llm
