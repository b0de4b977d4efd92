#include "insights/llm.hpp"

#include "insights/error.hpp"
#include "insights/text.hpp"

#include <nlohmann/json.hpp>

namespace insights::llm {

using nlohmann::json;

std::size_t prompt_tokens(const CompletionRequest& request)
{
    return text::estimate_tokens_for_scalars(text::scalar_count(request.system_prompt) +
                                             text::scalar_count(request.user_prompt));
}

BackendReply MockBackend::send(const CompletionRequest& request)
{
    return BackendReply{200, mock_complete(request)};
}

ChatCompletionsBackend::ChatCompletionsBackend(std::shared_ptr<http::Transport> transport,
                                               HttpBackendConfig config)
    : transport_(std::move(transport)), config_(std::move(config))
{
    if (config_.path.empty()) config_.path = kDefaultChatPath;
}

BackendReply ChatCompletionsBackend::send(const CompletionRequest& request)
{
    const json body = {
        {"model", config_.model},
        {"messages",
         json::array({{{"role", "system"}, {"content", request.system_prompt}},
                      {{"role", "user"}, {"content", request.user_prompt}}})},
        {"max_tokens", request.max_output_tokens},
        {"temperature", request.temperature},
    };
    http::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    const auto resp = transport_->post(http::join_url(config_.base_url, config_.path),
                                       body.dump(-1, ' ', false, json::error_handler_t::replace),
                                       "application/json", headers);
    if (resp.status < 200 || resp.status >= 300) return BackendReply{resp.status, resp.body};
    try {
        const json doc = json::parse(resp.body);
        return BackendReply{resp.status, doc.at("choices").at(0).at("message").at("content").get<std::string>()};
    } catch (const json::exception& e) {
        throw BackendError(std::string("unexpected chat completion payload: ") + e.what());
    }
}

GenerateBackend::GenerateBackend(std::shared_ptr<http::Transport> transport, HttpBackendConfig config)
    : transport_(std::move(transport)), config_(std::move(config))
{
    if (config_.path.empty()) config_.path = kDefaultGeneratePath;
}

BackendReply GenerateBackend::send(const CompletionRequest& request)
{
    std::string prompt = request.system_prompt;
    if (!prompt.empty()) prompt += "\n\n";
    prompt += request.user_prompt;
    const json body = {{"model", config_.model}, {"prompt", prompt}, {"stream", false}};
    const auto resp = transport_->post(http::join_url(config_.base_url, config_.path),
                                       body.dump(-1, ' ', false, json::error_handler_t::replace),
                                       "application/json", {});
    if (resp.status < 200 || resp.status >= 300) return BackendReply{resp.status, resp.body};
    try {
        return BackendReply{resp.status, json::parse(resp.body).at("response").get<std::string>()};
    } catch (const json::exception& e) {
        throw BackendError(std::string("unexpected generate payload: ") + e.what());
    }
}

RateLimiter::RateLimiter(int requests_per_minute, Clock& clock)
    : capacity_(requests_per_minute > 0 ? static_cast<std::size_t>(requests_per_minute) : 0), clock_(clock)
{
    if (requests_per_minute <= 0) throw InvalidArgument("requests_per_minute must be positive");
}

void RateLimiter::acquire()
{
    constexpr Clock::duration window = std::chrono::minutes(1);
    while (true) {
        Clock::duration wait{};
        {
            std::lock_guard lock(mu_);
            const auto now = clock_.now();
            while (!taken_.empty() && taken_.front() + window <= now) taken_.pop_front();
            if (taken_.size() < capacity_) {
                taken_.push_back(now);
                return;
            }
            wait = taken_.front() + window - now;
        }
        clock_.sleep_for(wait);
    }
}

LlmClient::LlmClient(CompletionBackend& backend, BackendPolicy policy, Clock& clock, std::size_t context_tokens)
    : backend_(backend), policy_(policy), clock_(clock), limiter_(policy.requests_per_minute, clock),
      context_tokens_(context_tokens)
{
    if (policy_.max_retries < 0) throw InvalidArgument("max_retries must be non-negative");
    if (policy_.base_backoff_ms <= 0) throw InvalidArgument("base_backoff_ms must be positive");
}

std::string LlmClient::complete(const CompletionRequest& request)
{
    const std::size_t needed = prompt_tokens(request) + request.max_output_tokens;
    if (needed > context_tokens_) {
        throw ContextOverflow("request needs ~" + std::to_string(needed) + " tokens, context holds " +
                              std::to_string(context_tokens_));
    }

    std::string last_failure;
    const int attempts = policy_.max_retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            clock_.sleep_for(Clock::duration(static_cast<long long>(policy_.base_backoff_ms) << (attempt - 1)));
        }
        limiter_.acquire();
        try {
            const BackendReply reply = backend_.send(request);
            if (reply.status >= 200 && reply.status < 300) return reply.text;
            if (reply.status != 429 && reply.status < 500) {
                throw BackendError(backend_.name() + " returned HTTP " + std::to_string(reply.status) + ": " +
                                   reply.text.substr(0, 200));
            }
            last_failure = "HTTP " + std::to_string(reply.status);
        } catch (const http::TransportError& e) {
            last_failure = e.what();
        }
    }
    throw RateLimitExhausted(backend_.name() + " failed after " + std::to_string(attempts) +
                             " attempts (last: " + last_failure + ")");
}

} // namespace insights::llm
