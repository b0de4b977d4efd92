#include "insights/error.hpp"
#include "insights/summarize.hpp"
#include "insights/text.hpp"

#include "fakes.hpp"
#include "pipeline.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

using namespace insights;
using namespace insights::llm;
using insights::test::fixture_pipeline;

namespace {

const std::string kPasa = "draft-ietf-6lo-path-aware-semantic-addressing";

struct Harness {
    test::FixturePipeline data = fixture_pipeline();
    ManualClock clock;
    MockBackend mock;

    WgSummary run(const std::string& wg, CompletionBackend& backend, std::size_t context = 32768)
    {
        LlmClient client(backend, BackendPolicy{}, clock, context);
        return summarize_wg(data.corpus, data.index, wg, client, PromptTemplates::defaults());
    }
    WgSummary run(const std::string& wg) { return run(wg, mock); }
};

WgFacts sample_facts()
{
    WgFacts f;
    f.wg_acronym = "6lo";
    f.wg_name = "IPv6 over Networks of Resource-constrained Nodes";
    f.attendee_count = 22;
    f.top_affiliations = {{"Apple", 7}, {"Cisco", 6}};
    f.draft_names = {kPasa, "draft-choi-6lo-owc"};
    f.agenda_topics = {{"PASA", "Luigi Iannone", {kPasa}}, {"OWC", "", {"draft-choi-6lo-owc"}}};
    return f;
}

} // namespace

TEST(Agenda, FixtureTopicsInOrder)
{
    const auto text = text::read_file((test::fixture_mirror() / "119/6lo/agenda.md").string());
    const auto topics = parse_agenda_topics(text);
    ASSERT_EQ(topics.size(), 5u);
    EXPECT_EQ(topics[0], (AgendaTopic{"Path-Aware Semantic Addressing for LLNs", "Luigi Iannone", {kPasa}}));
    EXPECT_EQ(topics[1].drafts, std::vector<std::string>{"draft-iannone-6lo-nd-gaao"});
    EXPECT_EQ(topics[3].title, "Transmission of SCHC-Compressed Packets over IEEE 802.15.4");
    EXPECT_EQ(topics[3].presenter, "Carles Gomez");
    EXPECT_EQ(topics[4].presenter, "Younghwan Choi");
}

TEST(Agenda, ItemVariants)
{
    const auto topics = parse_agenda_topics("Intro paragraph\n"
                                            "1. Chairs' slides\n"
                                            "2) [draft-ietf-x-y-03](https://example.org/x) \xE2\x80\x94 Ann Lee\n"
                                            "* Open mic\r\n"
                                            "  - nested items are ignored\n"
                                            "-not a list item\n");
    ASSERT_EQ(topics.size(), 3u);
    EXPECT_EQ(topics[0], (AgendaTopic{"Chairs' slides", "", {}}));
    EXPECT_EQ(topics[1], (AgendaTopic{"draft-ietf-x-y", "Ann Lee", {"draft-ietf-x-y"}}));
    EXPECT_EQ(topics[2].title, "Open mic");
    EXPECT_TRUE(parse_agenda_topics("").empty());
}

TEST(Facts, JsonRoundTrip)
{
    const auto f = sample_facts();
    EXPECT_EQ(facts_from_json(facts_to_json(f)), f);
    const auto block = facts_block(f);
    EXPECT_TRUE(block.starts_with(kFactsBegin));
    EXPECT_TRUE(block.ends_with(kFactsEnd));
    EXPECT_THROW(facts_from_json(nlohmann::json::object()), FormatError);
}

TEST(Facts, CapsAffiliationList)
{
    corpus::SessionRecord s;
    s.wg_acronym = "x";
    for (int i = 0; i < 15; ++i) s.top_affiliations.push_back({"Org" + std::to_string(i), 1});
    EXPECT_EQ(facts_for(s).top_affiliations.size(), 10u);
}

TEST(Template, SinglePassSubstitution)
{
    EXPECT_EQ(fill_template("{{a}} and {{b}} and {{missing}} {{", {{"a", "{{b}}"}, {"b", "B"}}),
              "{{b}} and B and {{missing}} {{");
    EXPECT_EQ(fill_template("", {{"a", "x"}}), "");
}

TEST(Template, LoadOverridesPerFile)
{
    const auto dir = test::scratch_dir("templates");
    std::ofstream(dir / "map.txt") << "custom {{chunk}}";
    const auto t = PromptTemplates::load(dir);
    const auto d = PromptTemplates::defaults();
    EXPECT_EQ(t.map, "custom {{chunk}}");
    EXPECT_EQ(t.reduce, d.reduce);
    EXPECT_EQ(t.system, d.system);
    EXPECT_NE(d.reduce.find("{{facts}}"), std::string::npos);
}

TEST(ParseSummary, ToleratesFencesAndProse)
{
    const auto s = parse_summary("Here you go:\n```json\n{\"overview\":\"ok\",\"topics\":[{\"title\":\"T\","
                                 "\"presenters\":[\"P\"],\"drafts\":[\" Draft-IETF-6lo-Path-Aware-Semantic-Addressing-04 \"]}]}\n```",
                                 "6lo");
    EXPECT_EQ(s.wg_acronym, "6lo");
    EXPECT_EQ(s.overview, "ok");
    ASSERT_EQ(s.topics.size(), 1u);
    EXPECT_EQ(s.topics[0].body, "");
    EXPECT_EQ(s.topics[0].presenters, std::vector<std::string>{"P"});
    EXPECT_EQ(s.topics[0].draft_links, std::vector<std::string>{kPasa});
}

TEST(ParseSummary, RejectsMalformed)
{
    EXPECT_THROW(parse_summary("no json", "x"), FormatError);
    EXPECT_THROW(parse_summary("{broken}", "x"), FormatError);
    EXPECT_THROW(parse_summary(R"({"topics":[]})", "x"), FormatError);
    EXPECT_THROW(parse_summary(R"({"overview":"a","topics":{}})", "x"), FormatError);
    EXPECT_THROW(parse_summary(R"({"overview":"a","topics":[{"body":"b"}]})", "x"), FormatError);
    EXPECT_THROW(parse_summary(R"({"overview":"a","topics":[{"title":"t","drafts":[1]}]})", "x"), FormatError);
    EXPECT_NO_THROW(parse_summary(R"({"overview":"a"})", "x"));
}

TEST(Grounding, AcceptsKnownRejectsUnknown)
{
    const auto f = sample_facts();
    WgSummary s{"6lo", "Discussed " + kPasa + "-04.", {{"PASA", "see draft-choi-6lo-owc", {}, {kPasa}}}};
    EXPECT_NO_THROW(check_grounding(s, f));

    auto bad = s;
    bad.topics[0].draft_links.push_back("draft-made-up-thing");
    EXPECT_THROW(check_grounding(bad, f), GroundingError);

    bad = s;
    bad.topics[0].body += " and draft-made-up-thing";
    EXPECT_THROW(check_grounding(bad, f), GroundingError);

    bad = s;
    bad.overview = "draft-made-up-thing was adopted";
    EXPECT_THROW(check_grounding(bad, f), GroundingError);

    bad = s;
    bad.topics[0].draft_links = {"not a draft"};
    EXPECT_THROW(check_grounding(bad, f), GroundingError);
}

TEST(Summarize, FixtureWgFollowsAgenda)
{
    Harness h;
    const auto s = h.run("6lo");
    EXPECT_EQ(s.wg_acronym, "6lo");
    EXPECT_NE(s.overview.find("22"), std::string::npos);
    const auto agenda = parse_agenda_topics(h.data.corpus.find("6lo")->agenda_text);
    ASSERT_EQ(s.topics.size(), 5u);
    for (std::size_t i = 0; i < agenda.size(); ++i) EXPECT_EQ(s.topics[i].title, agenda[i].title);

    const auto& drafts = h.data.corpus.find("6lo")->draft_names;
    for (const auto& t : s.topics) {
        for (const auto& d : t.draft_links) EXPECT_NE(std::find(drafts.begin(), drafts.end(), d), drafts.end()) << d;
    }
}

TEST(Summarize, Deterministic)
{
    Harness a, b;
    EXPECT_EQ(a.run("6lo"), b.run("6lo"));
    EXPECT_EQ(a.run("6man"), b.run("6man"));
}

TEST(Summarize, UnknownWg)
{
    Harness h;
    EXPECT_THROW(h.run("quic"), NotFound);
}

TEST(Summarize, NoMinutesNoTopics)
{
    Harness h;
    auto& s = h.data.corpus.sessions.at("6lo");
    s.minutes_text.clear();
    h.data.index = index::build_index(h.data.corpus);
    const auto summary = h.run("6lo");
    EXPECT_TRUE(summary.topics.empty());
    EXPECT_NE(summary.overview.find("22"), std::string::npos);
}

TEST(Summarize, InventedDraftIsCaught)
{
    for (bool in_body : {false, true}) {
        Harness h;
        test::InventedDraftBackend backend("draft-ietf-6lo-imaginary", in_body);
        EXPECT_THROW(h.run("6lo", backend), GroundingError) << "in_body " << in_body;
    }
}

TEST(Summarize, MapPromptsCarryRunningSummary)
{
    Harness h;
    h.data.index = index::build_index(h.data.corpus, index::ChunkOptions{80, 8});
    ASSERT_GE(h.data.index.chunks_for("6lo", index::DocKind::minutes).size(), 2u);

    test::RecordingBackend backend;
    h.run("6lo", backend);
    const auto reqs = backend.requests();
    const auto parts = h.data.index.chunks_for("6lo", index::DocKind::minutes).size();
    ASSERT_EQ(reqs.size(), parts + 1);
    EXPECT_NE(reqs[0].user_prompt.find("(none yet)"), std::string::npos);
    const auto first_reply = mock_complete(reqs[0]);
    EXPECT_NE(reqs[1].user_prompt.find(first_reply), std::string::npos);
    for (std::size_t i = 0; i < parts; ++i) {
        EXPECT_NE(reqs[i].user_prompt.find(h.data.index.chunks_for("6lo", index::DocKind::minutes)[i]->text),
                  std::string::npos);
    }
    EXPECT_NE(reqs.back().user_prompt.find("### Part 2"), std::string::npos);
}

TEST(Summarize, RepairRoundRecovers)
{
    Harness h;
    int reduce_calls = 0;
    test::ScriptedBackend backend({});
    backend.reply = [&](const CompletionRequest& r) {
        const bool is_map = r.user_prompt.find("Minutes, part") != std::string::npos;
        if (!is_map && ++reduce_calls == 1) return std::string("I cannot produce JSON today.");
        return mock_complete(r);
    };
    const auto s = h.run("6lo", backend);
    EXPECT_EQ(reduce_calls, 2);
    EXPECT_EQ(s.topics.size(), 5u);
}

TEST(Summarize, GarbageAfterRepairIsFormatError)
{
    Harness h;
    test::ScriptedBackend backend({});
    backend.reply = [](const CompletionRequest&) { return std::string("still not json"); };
    EXPECT_THROW(h.run("6lo", backend), FormatError);
}

TEST(Summarize, TinyContextOverflows)
{
    Harness h;
    EXPECT_THROW(h.run("6lo", h.mock, 256), ContextOverflow);
}
