#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace insights {

enum class ErrorKind {
    network,
    parse,
    not_found,
    invalid_threshold,
    consistency,
    io,
    schema,
    invalid_budget,
    rate_limit_exhausted,
    backend,
    context_overflow,
    grounding,
    format,
    duplicate_wg,
    invalid_argument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the pipeline. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define INSIGHTS_DEFINE_ERROR(Name, Kind)                                      \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& message) : Error(ErrorKind::Kind, message) {} \
    }

INSIGHTS_DEFINE_ERROR(NetworkError, network);
INSIGHTS_DEFINE_ERROR(NotFound, not_found);
INSIGHTS_DEFINE_ERROR(InvalidThreshold, invalid_threshold);
INSIGHTS_DEFINE_ERROR(ConsistencyError, consistency);
INSIGHTS_DEFINE_ERROR(IoError, io);
INSIGHTS_DEFINE_ERROR(SchemaError, schema);
INSIGHTS_DEFINE_ERROR(InvalidBudget, invalid_budget);
INSIGHTS_DEFINE_ERROR(RateLimitExhausted, rate_limit_exhausted);
INSIGHTS_DEFINE_ERROR(BackendError, backend);
INSIGHTS_DEFINE_ERROR(ContextOverflow, context_overflow);
INSIGHTS_DEFINE_ERROR(GroundingError, grounding);
INSIGHTS_DEFINE_ERROR(FormatError, format);
INSIGHTS_DEFINE_ERROR(DuplicateWg, duplicate_wg);
INSIGHTS_DEFINE_ERROR(InvalidArgument, invalid_argument);

#undef INSIGHTS_DEFINE_ERROR

/// Malformed input. When the failure is tied to a file the message carries
/// `file:line: ` as prefix.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error(ErrorKind::parse, message) {}
    ParseError(const std::string& file, std::size_t line, const std::string& message)
        : Error(ErrorKind::parse, file + ":" + std::to_string(line) + ": " + message),
          file_(file), line_(line) {}

    [[nodiscard]] const std::string& file() const noexcept { return file_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_ = 0;
};

} // namespace insights
