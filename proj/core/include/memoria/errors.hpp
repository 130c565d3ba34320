#pragma once

#include <stdexcept>
#include <string>

namespace memoria {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (not JSON, wrong types, unparseable fields).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Names the graph invariant a document or graph violates.
enum class ValidationCode {
    duplicate_id,
    multiple_patients,
    dangling_edge,
    illegal_relation,
    node_kind_mismatch,
    empty_description,
    valence_out_of_range,
    invalid_slot,
    empty_location,
    invalid_date,
    invalid_year_range,
    unknown_person,
};

const char* to_string(ValidationCode code) noexcept;

class ValidationError : public Error {
public:
    ValidationError(ValidationCode code, const std::string& detail)
        : Error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

    ValidationCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ValidationCode code_;
    std::string detail_;
};

class WrongGraphKind : public Error {
public:
    using Error::Error;
};

/// Nothing usable was left in a dialogue turn after stopword filtering.
class EmptyQuery : public Error {
public:
    using Error::Error;
};

class EmptyKeywords : public Error {
public:
    using Error::Error;
};

/// Transport-level failure talking to a model backend (connection, timeout, HTTP status).
class GatewayError : public Error {
public:
    using Error::Error;
};

/// The backend kept answering with output that fails the task schema.
class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::string raw_text)
        : Error(what), raw_text_(std::move(raw_text)) {}

    /// Last unparsed model output.
    const std::string& raw_text() const noexcept { return raw_text_; }

private:
    std::string raw_text_;
};

/// Live synthesized content failed schema validation after retries.
class SchemaError : public Error {
public:
    using Error::Error;
};

class EmptyReference : public Error {
public:
    using Error::Error;
};

/// Caller broke an operation's precondition (blank turn, invalid config, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace memoria
