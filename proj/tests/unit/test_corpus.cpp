#include "insights/corpus.hpp"
#include "insights/error.hpp"
#include "insights/text.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <nlohmann/json.hpp>

using namespace insights;
using namespace insights::corpus;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("insights_corpus_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ingest::RawSession session(const std::string& wg, int index = 0, std::string minutes = {})
{
    ingest::RawSession s;
    s.wg_acronym = wg;
    s.wg_name = "WG " + wg;
    s.meeting_number = 119;
    s.session_index = index;
    s.minutes_text = std::move(minutes);
    return s;
}

const Timestamp kT = parse_timestamp("2024-03-26T09:30:00Z");

} // namespace

TEST(Timestamp, FormatAndParse)
{
    EXPECT_EQ(format_timestamp(kT), "2024-03-26T09:30:00Z");
    EXPECT_EQ(format_timestamp(Timestamp{}), "1970-01-01T00:00:00Z");
    EXPECT_THROW(parse_timestamp("2024-03-26 09:30"), ParseError);
    EXPECT_THROW(parse_timestamp("2024-13-01T00:00:00Z"), ParseError);
    EXPECT_THROW(parse_timestamp("2024-03-26T09:30:00Zjunk"), ParseError);
}

TEST(Build, TwoSessionsWithLedger)
{
    resolve::AttendanceLedger ledger;
    ledger.sessions["6lo"].person_ids = {"person:a", "person:b"};
    ledger.sessions["6lo"].affiliations = {{"Apple", 2}};
    const auto c = build_corpus(119, {session("6man"), session("6lo")}, ledger, {}, kT);
    ASSERT_EQ(c.sessions.size(), 2u);
    EXPECT_EQ(c.find("6lo")->attendee_count, 2u);
    EXPECT_EQ(c.find("6lo")->top_affiliations, (std::vector<resolve::AffiliationCount>{{"Apple", 2}}));
    EXPECT_EQ(c.find("6man")->attendee_count, 0u);
    EXPECT_EQ(c.find("quic"), nullptr);
    EXPECT_EQ(c.created_at, kT);
}

TEST(Build, LedgerForUnknownSessionIsInconsistent)
{
    resolve::AttendanceLedger ledger;
    ledger.sessions["quic"].person_ids = {"person:a"};
    EXPECT_THROW(build_corpus(119, {session("6lo")}, ledger, {}, kT), ConsistencyError);
}

TEST(Build, SessionFromOtherMeetingIsInconsistent)
{
    auto s = session("6lo");
    s.meeting_number = 118;
    EXPECT_THROW(build_corpus(119, {s}, {}, {}, kT), ConsistencyError);
}

TEST(Build, EmptyInputsGiveValidEmptyCorpus)
{
    const auto c = build_corpus(119, {}, {}, {}, kT);
    EXPECT_TRUE(c.sessions.empty());
    EXPECT_EQ(c.meeting_number, 119);
}

TEST(Build, SessionsOfOneWgMerge)
{
    auto first = session("core", 0, "first draft-ietf-core-href-15");
    first.draft_names = {"draft-ietf-core-href"};
    auto second = session("core", 1, "second mentions draft-ietf-core-comi-17");
    const auto c = build_corpus(119, {second, first}, {}, {}, kT);
    ASSERT_EQ(c.sessions.size(), 1u);
    const auto& rec = c.sessions.at("core");
    EXPECT_EQ(rec.minutes_text, "first draft-ietf-core-href-15\n\nsecond mentions draft-ietf-core-comi-17");
    EXPECT_EQ(rec.draft_names, (std::vector<std::string>{"draft-ietf-core-href", "draft-ietf-core-comi"}));
}

TEST(Build, EveryReferencedDraftIsListed)
{
    auto s = session("x", 0, "talk about draft-a-b-03 and draft-c-d");
    s.agenda_text = "- draft-e-f-01";
    const auto c = build_corpus(119, {s}, {}, {}, kT);
    const auto& rec = c.sessions.at("x");
    for (const auto& d : ingest::extract_draft_names(rec.minutes_text + "\n" + rec.agenda_text)) {
        EXPECT_NE(std::find(rec.draft_names.begin(), rec.draft_names.end(), d), rec.draft_names.end()) << d;
    }
}

TEST(Build, DeterministicBytes)
{
    const auto a = serialize(build_corpus(119, {session("b"), session("a")}, {}, {}, kT));
    const auto b = serialize(build_corpus(119, {session("b"), session("a")}, {}, {}, kT));
    EXPECT_EQ(a, b);
}

TEST(Store, SchemaVersionAndSortedKeys)
{
    const auto text = serialize(build_corpus(119, {session("a")}, {}, {}, kT));
    const auto doc = nlohmann::json::parse(text);
    EXPECT_EQ(doc.at("schema"), 1);
    EXPECT_EQ(doc.at("created_at"), "2024-03-26T09:30:00Z");
    EXPECT_LT(text.find("\"created_at\""), text.find("\"schema\""));
    EXPECT_EQ(text.back(), '\n');
}

TEST(Store, RoundTripRandomCorpora)
{
    test::Gen gen(31337);
    const auto dir = scratch("roundtrip");
    for (int i = 0; i < 100; ++i) {
        const auto c = test::random_corpus(gen);
        save(c, dir);
        ASSERT_EQ(load(dir), c) << "iteration " << i;
        EXPECT_EQ(serialize(load(dir)), serialize(c));
    }
    fs::remove_all(dir);
}

TEST(Store, MissingFileIsIoError)
{
    const auto dir = scratch("missing");
    EXPECT_THROW(load(dir), IoError);
    fs::remove_all(dir);
}

TEST(Store, WrongSchemaOrMissingKeysIsSchemaError)
{
    const auto dir = scratch("schema");
    const auto good = nlohmann::json::parse(serialize(build_corpus(119, {session("a")}, {}, {}, kT)));

    auto wrong = good;
    wrong["schema"] = 99;
    text::write_file((dir / kCorpusFile).string(), wrong.dump());
    EXPECT_THROW(load(dir), SchemaError);

    for (const char* key : {"sessions", "meeting_number", "ledger", "entities", "created_at"}) {
        auto missing = good;
        missing.erase(key);
        text::write_file((dir / kCorpusFile).string(), missing.dump());
        EXPECT_THROW(load(dir), SchemaError) << key;
    }

    text::write_file((dir / kCorpusFile).string(), "{ not json");
    EXPECT_THROW(load(dir), SchemaError);
    fs::remove_all(dir);
}

TEST(Snapshot, RoundTripAndCorruption)
{
    const auto dir = scratch("snapshot");
    Snapshot snap;
    snap.meeting_number = 119;
    snap.sessions = {session("6lo", 0, "minutes \"quoted\" é")};
    snap.attendance = {{"Stuart Cheshire", "Apple", ingest::AttendanceScope::session("6lo")},
                       {"Ada", "", ingest::AttendanceScope::meeting_wide()}};
    snap.skipped_rows = 2;
    save_snapshot(snap, dir);
    EXPECT_EQ(load_snapshot(dir), snap);

    text::write_file((dir / kSnapshotFile).string(), "[1, 2");
    EXPECT_THROW(load_snapshot(dir), ParseError);
    fs::remove_all(dir);
    EXPECT_THROW(load_snapshot(dir), IoError);
}
