#include "insights/error.hpp"
#include "insights/llm.hpp"
#include "insights/summarize.hpp"

#include "fakes.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <algorithm>

using namespace insights;
using namespace insights::llm;
using insights::test::FakeTransport;
using insights::test::ScriptedBackend;
using insights::test::Step;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

struct Row {
    const char* name;
    double params;
    double size_gb;
    ModelCategory category;
};

// Transcribed by hand from the published comparison table.
const Row kTable[] = {
    {"codestral:latest", 22.2, 12, ModelCategory::Large},
    {"llama3:70b-instruct", 70.6, 39, ModelCategory::Large},
    {"command-r:latest", 35, 20, ModelCategory::Large},
    {"mixtral:latest", 47, 26, ModelCategory::Large},
    {"gemma2", 9.2, 5.4, ModelCategory::Small},
    {"phi3", 3.8, 2.4, ModelCategory::Small},
    {"llama3", 8, 4.7, ModelCategory::Small},
};

std::string facts_prompt(std::uint64_t count)
{
    WgFacts f;
    f.wg_acronym = "6lo";
    f.wg_name = "6lo";
    f.attendee_count = count;
    f.top_affiliations = {{"Apple", 7}, {"Cisco", 6}};
    f.draft_names = {"draft-ietf-6lo-path-aware-semantic-addressing"};
    f.agenda_topics = {{"PASA", "Guangpeng Li", {"draft-ietf-6lo-path-aware-semantic-addressing"}}};
    return "Summarize.\n" + facts_block(f);
}

CompletionRequest small_request()
{
    CompletionRequest r;
    r.user_prompt = facts_prompt(22);
    r.max_output_tokens = 64;
    return r;
}

BackendPolicy policy(int retries, int rpm = 60)
{
    BackendPolicy p;
    p.max_retries = retries;
    p.requests_per_minute = rpm;
    return p;
}

/// Records the simulated dispatch time of every call.
class TimedBackend final : public CompletionBackend {
public:
    explicit TimedBackend(Clock& clock) : clock_(clock) {}
    [[nodiscard]] std::string name() const override { return "timed"; }
    BackendReply send(const CompletionRequest&) override
    {
        times.push_back(clock_.now());
        return {200, "{}"};
    }
    std::vector<Clock::time_point> times;

private:
    Clock& clock_;
};

std::size_t max_in_any_window(std::vector<Clock::time_point> times, Clock::duration window)
{
    std::sort(times.begin(), times.end());
    std::size_t best = 0;
    for (std::size_t i = 0, j = 0; i < times.size(); ++i) {
        while (times[i] - times[j] >= window) ++j;
        best = std::max(best, i - j + 1);
    }
    return best;
}

} // namespace

TEST(Registry, ShippedRegistryMatchesTable)
{
    const auto& reg = default_registry();
    ASSERT_EQ(reg.models.size(), std::size(kTable));
    for (const auto& row : kTable) {
        const auto* m = reg.find(row.name);
        ASSERT_NE(m, nullptr) << row.name;
        EXPECT_DOUBLE_EQ(m->parameters_billions, row.params) << row.name;
        EXPECT_DOUBLE_EQ(m->size_gb, row.size_gb) << row.name;
        EXPECT_EQ(m->category, row.category) << row.name;
        EXPECT_EQ(classify_model(m->parameters_billions), row.category) << row.name;
        EXPECT_EQ(m->locality, Locality::local);
    }
}

TEST(Registry, ContextDefaultsFollowCategory)
{
    for (const auto& m : default_registry().models) {
        EXPECT_EQ(m.context_tokens, m.category == ModelCategory::Large ? kDefaultLargeContextTokens
                                                                        : kDefaultSmallContextTokens);
    }
}

TEST(Registry, LoadFromFileEqualsEmbedded)
{
    const auto loaded = load_registry(std::filesystem::path(INSIGHTS_DATA_DIR) / "models.json");
    EXPECT_EQ(loaded.models, default_registry().models);
}

TEST(Registry, ClassifyBoundary)
{
    EXPECT_EQ(classify_model(22.2), ModelCategory::Large);
    EXPECT_EQ(classify_model(3.8), ModelCategory::Small);
    EXPECT_EQ(classify_model(9.2), ModelCategory::Small);
    EXPECT_EQ(classify_model(10.0), ModelCategory::Large);
    EXPECT_EQ(classify_model(9.999), ModelCategory::Small);
    EXPECT_THROW(classify_model(0.0), InvalidArgument);
    EXPECT_THROW(classify_model(-3.0), InvalidArgument);
}

TEST(Registry, RejectsCategoryMismatch)
{
    const char* bad = R"({"models":[{"name":"x","parameters_billions":3.8,"size_gb":1,"category":"Large"}]})";
    EXPECT_THROW(parse_registry(bad), SchemaError);
    EXPECT_THROW(parse_registry("{"), Error);
    EXPECT_THROW(parse_registry(R"({"models":[{"name":"x"}]})"), SchemaError);
}

TEST(Registry, UnknownModelIsNull)
{
    EXPECT_EQ(default_registry().find("gpt-none"), nullptr);
}

TEST(Mock, EchoesFactsOnly)
{
    CompletionRequest r;
    r.user_prompt = facts_prompt(105);
    const json out = json::parse(mock_complete(r));
    EXPECT_NE(out.at("overview").get<std::string>().find("105 participants"), std::string::npos);
    ASSERT_EQ(out.at("topics").size(), 1u);
    EXPECT_EQ(out["topics"][0]["title"], "PASA");
    EXPECT_EQ(out["topics"][0]["presenters"][0], "Guangpeng Li");
    EXPECT_EQ(out["topics"][0]["drafts"][0], "draft-ietf-6lo-path-aware-semantic-addressing");
}

TEST(Mock, Deterministic)
{
    CompletionRequest r;
    r.user_prompt = facts_prompt(22);
    EXPECT_EQ(mock_complete(r), mock_complete(r));
}

TEST(Mock, FactsInSystemPromptAlsoWork)
{
    CompletionRequest r;
    r.system_prompt = facts_prompt(3);
    r.user_prompt = "go";
    EXPECT_NO_THROW(mock_complete(r));
}

TEST(Mock, SkipsMarkerMentionedInProse)
{
    CompletionRequest r;
    r.user_prompt = "The facts follow the " + std::string(kFactsBegin) + " marker.\n" + facts_prompt(9);
    EXPECT_NE(mock_complete(r).find("9 participants"), std::string::npos);
}

TEST(Mock, MissingOrBrokenFactsBlock)
{
    CompletionRequest r;
    r.user_prompt = "no facts here";
    EXPECT_THROW(mock_complete(r), FormatError);
    r.user_prompt = std::string(kFactsBegin) + "{\"a\":1}";
    EXPECT_THROW(mock_complete(r), FormatError);
    r.user_prompt = std::string(kFactsBegin) + "not json" + std::string(kFactsEnd);
    EXPECT_THROW(mock_complete(r), FormatError);
}

TEST(Retry, TwoRateLimitsThenSuccess)
{
    ManualClock clock;
    ScriptedBackend backend({429, 429, 200});
    LlmClient client(backend, policy(3), clock, 8192);
    EXPECT_NO_THROW(client.complete(small_request()));
    EXPECT_EQ(backend.attempts(), 3u);
    EXPECT_EQ(clock.sleeps(), (std::vector<Clock::duration>{500ms, 1000ms}));
}

TEST(Retry, ServerErrorsExhaust)
{
    ManualClock clock;
    ScriptedBackend backend({500, 500, 500, 500});
    LlmClient client(backend, policy(3), clock, 8192);
    EXPECT_THROW(client.complete(small_request()), RateLimitExhausted);
    EXPECT_EQ(backend.attempts(), 4u);
    EXPECT_EQ(clock.sleeps(), (std::vector<Clock::duration>{500ms, 1000ms, 2000ms}));
}

TEST(Retry, ZeroRetriesMeansOneAttempt)
{
    ManualClock clock;
    ScriptedBackend backend({503});
    LlmClient client(backend, policy(0), clock, 8192);
    EXPECT_THROW(client.complete(small_request()), RateLimitExhausted);
    EXPECT_EQ(backend.attempts(), 1u);
}

TEST(Retry, ClientErrorIsNotRetried)
{
    ManualClock clock;
    ScriptedBackend backend({400});
    LlmClient client(backend, policy(3), clock, 8192);
    EXPECT_THROW(client.complete(small_request()), BackendError);
    EXPECT_EQ(backend.attempts(), 1u);
}

TEST(Retry, TransportFailuresAreRetried)
{
    ManualClock clock;
    auto transport = std::make_shared<FakeTransport>();
    transport->script("http://llm.test/api/generate",
                      {Step::unreachable(), Step::ok(R"({"response":"hi"})")});
    GenerateBackend backend(transport, {"http://llm.test", "", "phi3", ""});
    LlmClient client(backend, policy(3), clock, 8192);
    EXPECT_EQ(client.complete(small_request()), "hi");
    EXPECT_EQ(transport->count("http://llm.test/api/generate"), 2u);
}

TEST(Retry, ContextOverflowBeforeAnyCall)
{
    ManualClock clock;
    ScriptedBackend backend({});
    LlmClient client(backend, policy(3), clock, 100);
    CompletionRequest r = small_request();
    r.user_prompt += std::string(2000, 'x');
    EXPECT_THROW(client.complete(r), ContextOverflow);
    EXPECT_EQ(backend.attempts(), 0u);
}

TEST(Retry, InvalidPolicy)
{
    ManualClock clock;
    ScriptedBackend backend({});
    EXPECT_THROW(LlmClient(backend, policy(-1), clock, 100), InvalidArgument);
    EXPECT_THROW(LlmClient(backend, policy(1, 0), clock, 100), InvalidArgument);
}

TEST(RateLimit, NoWindowExceedsCapacity)
{
    test::Gen gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        ManualClock clock;
        const int rpm = static_cast<int>(gen.range(1, 12));
        RateLimiter limiter(rpm, clock);
        std::vector<Clock::time_point> times;
        for (int i = 0; i < 80; ++i) {
            if (gen.chance(0.3)) clock.advance(Clock::duration(gen.range(0, 20000)));
            limiter.acquire();
            times.push_back(clock.now());
        }
        EXPECT_LE(max_in_any_window(times, 60s), static_cast<std::size_t>(rpm)) << "rpm " << rpm;
    }
}

TEST(RateLimit, ClientDispatchesRespectWindow)
{
    ManualClock clock;
    TimedBackend backend(clock);
    LlmClient client(backend, policy(0, 5), clock, 8192);
    for (int i = 0; i < 23; ++i) client.complete(small_request());
    ASSERT_EQ(backend.times.size(), 23u);
    EXPECT_LE(max_in_any_window(backend.times, 60s), 5u);
    // Bursts of five, then a full minute of waiting.
    EXPECT_EQ(backend.times[5] - backend.times[0], Clock::duration(60s));
}

TEST(Wire, ChatCompletions)
{
    auto transport = std::make_shared<FakeTransport>();
    const std::string url = "http://api.test/v1/chat/completions";
    transport->script(url, {Step::ok(R"({"choices":[{"message":{"role":"assistant","content":"done"}}]})")});
    ChatCompletionsBackend backend(transport, {"http://api.test/", "", "gpt-4o", "sk-test"});
    CompletionRequest r;
    r.system_prompt = "sys";
    r.user_prompt = "usr";
    r.max_output_tokens = 77;
    const auto reply = backend.send(r);
    EXPECT_EQ(reply.status, 200);
    EXPECT_EQ(reply.text, "done");

    const auto calls = transport->calls();
    ASSERT_EQ(calls.size(), 1u);
    EXPECT_EQ(calls[0].method, "POST");
    EXPECT_EQ(calls[0].url, url);
    const auto auth = calls[0].headers.find("Authorization");
    ASSERT_NE(auth, calls[0].headers.end());
    EXPECT_EQ(auth->second, "Bearer sk-test");
    const json body = json::parse(calls[0].body);
    EXPECT_EQ(body["model"], "gpt-4o");
    EXPECT_EQ(body["max_tokens"], 77);
    EXPECT_EQ(body["messages"][0]["role"], "system");
    EXPECT_EQ(body["messages"][0]["content"], "sys");
    EXPECT_EQ(body["messages"][1]["role"], "user");
    EXPECT_EQ(body["messages"][1]["content"], "usr");
}

TEST(Wire, ChatCompletionsErrorsAndBadPayload)
{
    auto transport = std::make_shared<FakeTransport>();
    const std::string url = "http://api.test/v1/chat/completions";
    transport->script(url, {Step::status_only(429), Step::ok(R"({"choices":[]})")});
    ChatCompletionsBackend backend(transport, {"http://api.test", "", "m", ""});
    EXPECT_EQ(backend.send({}).status, 429);
    EXPECT_THROW(backend.send({}), BackendError);
    EXPECT_EQ(transport->calls()[0].headers.count("Authorization"), 0u);
}

TEST(Wire, Generate)
{
    auto transport = std::make_shared<FakeTransport>();
    const std::string url = "http://localhost:11434/api/generate";
    transport->script(url, {Step::ok(R"({"response":"summary","done":true})"), Step::ok("[]")});
    GenerateBackend backend(transport, {"http://localhost:11434", "", "phi3", ""});
    CompletionRequest r;
    r.system_prompt = "sys";
    r.user_prompt = "usr";
    EXPECT_EQ(backend.send(r).text, "summary");
    const json body = json::parse(transport->calls()[0].body);
    EXPECT_EQ(body["model"], "phi3");
    EXPECT_EQ(body["stream"], false);
    EXPECT_EQ(body["prompt"], "sys\n\nusr");
    EXPECT_THROW(backend.send(r), BackendError);
}

TEST(Wire, CustomPath)
{
    auto transport = std::make_shared<FakeTransport>();
    transport->script("http://h.test/gen", {Step::ok(R"({"response":"x"})")});
    GenerateBackend backend(transport, {"http://h.test", "/gen", "m", ""});
    EXPECT_EQ(backend.send({}).text, "x");
}
