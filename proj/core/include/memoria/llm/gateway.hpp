#pragma once

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <ostream>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace memoria::llm {

enum class Task { decompose, evaluate, adjust_weights, suggest_keywords, generate, followup, judge, synthesize };

std::string_view to_string(Task task) noexcept;
Task parse_task(std::string_view text);

inline constexpr int kDefaultRetryBudget = 3;

struct GatewayRequest {
    Task task = Task::decompose;
    nlohmann::json payload = nlohmann::json::object();
    int budget = kDefaultRetryBudget; // total attempts, including the first
};

struct GatewayResponse {
    nlohmann::json document;
    std::string raw_text;
    int attempts = 1;
};

struct ChatMessage {
    std::string role; // system | user | assistant
    std::string content;
};

struct Prompt {
    std::vector<ChatMessage> messages;
    std::string template_version;
};

/// Transport to a model. `complete` returns the raw model output for one
/// attempt and throws GatewayError on transport failure.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string_view name() const = 0;
    virtual std::string complete(const GatewayRequest& request, const Prompt& prompt) = 0;
    /// Concurrent calls allowed through the gateway; 0 means unlimited.
    virtual std::size_t max_in_flight() const { return 0; }
};

/// Thrown by output validators; the gateway turns it into a repair retry.
class OutputRejected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Validator = std::function<void(const nlohmann::json&)>;

struct AuditRecord {
    Task task = Task::decompose;
    std::string backend;
    std::chrono::microseconds latency{0};
    int retries = 0;
    std::string raw_hash; // hex FNV-1a of the final raw text
    bool ok = true;
};

class AuditSink {
public:
    virtual ~AuditSink() = default;
    virtual void record(const AuditRecord& record) = 0;
};

/// One JSON object per line.
class StreamAuditSink final : public AuditSink {
public:
    explicit StreamAuditSink(std::ostream& out) : out_(out) {}
    void record(const AuditRecord& record) override;

private:
    std::mutex mutex_;
    std::ostream& out_;
};

std::string format_audit_line(const AuditRecord& record);
std::string raw_text_hash(std::string_view raw);

/// Single entry point for every model call. Safe for concurrent use.
class Gateway {
public:
    explicit Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<AuditSink> audit = nullptr);

    /// Renders the task prompt, calls the backend and validates the output
    /// against the task schema, re-prompting with a repair instruction until
    /// the request budget is spent. Throws GatewayError or DecodeError.
    GatewayResponse call(const GatewayRequest& request) const;
    GatewayResponse call(const GatewayRequest& request, const Validator& validator) const;

    const Backend& backend() const noexcept { return *backend_; }
    std::size_t call_count() const noexcept { return calls_.load(); }

private:
    std::shared_ptr<Backend> backend_;
    std::shared_ptr<AuditSink> audit_;
    std::unique_ptr<std::counting_semaphore<>> in_flight_;
    mutable std::atomic<std::size_t> calls_{0};
};

} // namespace memoria::llm
