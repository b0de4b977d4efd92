#pragma once

#include "insights/clock.hpp"
#include "insights/http.hpp"

#include <cstddef>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace insights::llm {

// ---------------------------------------------------------------------------
// Model registry

enum class ModelCategory { Small, Large };
enum class Locality { local, api };

std::string_view to_string(ModelCategory c) noexcept;
std::string_view to_string(Locality l) noexcept;

/// Models at or above this many billion parameters are Large.
inline constexpr double kLargeModelBoundaryBillions = 10.0;
inline constexpr std::size_t kDefaultSmallContextTokens = 8192;
inline constexpr std::size_t kDefaultLargeContextTokens = 32768;

/// Throws InvalidArgument unless parameters_billions > 0.
ModelCategory classify_model(double parameters_billions,
                             double boundary_billions = kLargeModelBoundaryBillions);

struct ModelSpec {
    std::string name;
    double parameters_billions = 0.0;
    double size_gb = 0.0;
    ModelCategory category = ModelCategory::Small;
    std::size_t context_tokens = kDefaultSmallContextTokens;
    Locality locality = Locality::local;

    bool operator==(const ModelSpec&) const = default;
};

struct ModelRegistry {
    std::vector<ModelSpec> models;

    [[nodiscard]] const ModelSpec* find(std::string_view name) const;
};

/// Parses the registry JSON. Entries whose category disagrees with
/// classify_model are rejected with SchemaError.
ModelRegistry parse_registry(std::string_view json_text);
ModelRegistry load_registry(const std::filesystem::path& path);
/// The registry compiled into the binary (same content as data/models.json).
const ModelRegistry& default_registry();

// ---------------------------------------------------------------------------
// Requests and backends

struct CompletionRequest {
    std::string system_prompt;
    std::string user_prompt;
    std::size_t max_output_tokens = 1024;
    double temperature = 0.0;
};

/// Estimated prompt tokens of system + user.
std::size_t prompt_tokens(const CompletionRequest& request);

struct BackendReply {
    int status = 200;
    std::string text;
};

/// One raw completion call. Implementations return HTTP-like statuses and
/// may throw http::TransportError; retrying is the caller's job. Must be safe
/// for concurrent calls.
class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    virtual BackendReply send(const CompletionRequest& request) = 0;
};

/// Delimiters of the facts block embedded in prompts.
inline constexpr std::string_view kFactsBegin = "<<FACTS>>";
inline constexpr std::string_view kFactsEnd = "<<END>>";

/// Deterministic stand-in for a model: reads the facts block from the prompt
/// and answers with the summary schema filled from fact values only.
/// Throws FormatError when the prompt has no facts block.
std::string mock_complete(const CompletionRequest& request);

class MockBackend final : public CompletionBackend {
public:
    [[nodiscard]] std::string name() const override { return "mock"; }
    BackendReply send(const CompletionRequest& request) override;
};

struct HttpBackendConfig {
    std::string base_url;
    std::string path;
    std::string model;
    std::string api_key;
};

/// `POST <base>/v1/chat/completions` style endpoint.
class ChatCompletionsBackend final : public CompletionBackend {
public:
    ChatCompletionsBackend(std::shared_ptr<http::Transport> transport, HttpBackendConfig config);
    [[nodiscard]] std::string name() const override { return "api:" + config_.model; }
    BackendReply send(const CompletionRequest& request) override;

private:
    std::shared_ptr<http::Transport> transport_;
    HttpBackendConfig config_;
};

/// `POST <base>/api/generate` style endpoint of a local model server.
class GenerateBackend final : public CompletionBackend {
public:
    GenerateBackend(std::shared_ptr<http::Transport> transport, HttpBackendConfig config);
    [[nodiscard]] std::string name() const override { return "local:" + config_.model; }
    BackendReply send(const CompletionRequest& request) override;

private:
    std::shared_ptr<http::Transport> transport_;
    HttpBackendConfig config_;
};

inline constexpr const char* kDefaultChatPath = "/v1/chat/completions";
inline constexpr const char* kDefaultGeneratePath = "/api/generate";

// ---------------------------------------------------------------------------
// Rate limiting and retry

struct BackendPolicy {
    int max_retries = 3;
    int base_backoff_ms = 500;
    int requests_per_minute = 60;
};

/// Token bucket holding `requests_per_minute` tokens. A token taken at time t
/// returns to the bucket at t + 60 s, so no 60 s window ever sees more than
/// `requests_per_minute` dispatches.
class RateLimiter {
public:
    RateLimiter(int requests_per_minute, Clock& clock);

    /// Blocks (via the clock) until a token is available, then takes it.
    void acquire();
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

private:
    std::size_t capacity_;
    Clock& clock_;
    std::mutex mu_;
    std::deque<Clock::time_point> taken_;
};

/// Backend plus its retry policy, rate limiter and context budget. Share one
/// instance per backend across threads.
class LlmClient {
public:
    LlmClient(CompletionBackend& backend, BackendPolicy policy, Clock& clock, std::size_t context_tokens);

    /// Sends `request`, retrying 429/5xx/transport failures with backoff
    /// base * 2^attempt. Throws ContextOverflow (before any call),
    /// BackendError on other statuses, RateLimitExhausted after
    /// max_retries + 1 failed attempts.
    std::string complete(const CompletionRequest& request);

    [[nodiscard]] std::size_t context_tokens() const noexcept { return context_tokens_; }
    [[nodiscard]] const BackendPolicy& policy() const noexcept { return policy_; }
    [[nodiscard]] CompletionBackend& backend() noexcept { return backend_; }

private:
    CompletionBackend& backend_;
    BackendPolicy policy_;
    Clock& clock_;
    RateLimiter limiter_;
    std::size_t context_tokens_;
};

} // namespace insights::llm
