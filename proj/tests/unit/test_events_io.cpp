#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "evg/error.hpp"
#include "evg/events.hpp"
#include "evg/format.hpp"
#include "evg/io.hpp"
#include "oracles.hpp"

namespace {

using namespace evg;

TEST(Format, ShortestRoundTrip) {
    for (double x : {0.0, 1.0, -2.5, 0.1, 1e-300, 123456789.125, 1.0 / 3.0}) {
        EXPECT_EQ(parse_number(format_number(x)), x);
    }
    EXPECT_EQ(format_number(20.0), "20");
    EXPECT_EQ(format_number(kInfinity), "inf");
    EXPECT_EQ(parse_number("inf"), kInfinity);
    EXPECT_EQ(parse_number("Infinity"), kInfinity);
    EXPECT_EQ(parse_number("+3"), 3.0);
    EXPECT_THROW(parse_number("3x"), std::invalid_argument);
    EXPECT_THROW(parse_number(""), std::invalid_argument);
}

TEST(InterEventTime, ZeroUnlessStrictlyLater) {
    auto a = HyperEvent::directed(0, 1, 10.0, 2.0);
    EXPECT_EQ(inter_event_time(a, HyperEvent::directed(1, 2, 15.0)), 3.0);
    EXPECT_EQ(inter_event_time(a, HyperEvent::directed(1, 2, 12.0)), 0.0);
    EXPECT_EQ(inter_event_time(a, HyperEvent::directed(1, 2, 11.0)), 0.0);
    EXPECT_EQ(inter_event_time(HyperEvent::directed(1, 2, 15.0), a), 0.0);
}

TEST(EventSequence, SortsStablyByTime) {
    std::vector<HyperEvent> ev{HyperEvent::directed(0, 1, 5.0), HyperEvent::directed(1, 2, 1.0),
                               HyperEvent::directed(2, 0, 5.0), HyperEvent::directed(0, 2, 3.0)};
    EventSequence seq(ev, true, {}, OverlapPolicy::ignore);
    ASSERT_EQ(seq.size(), 4u);
    EXPECT_EQ(seq[0].time, 1.0);
    EXPECT_EQ(seq[1].time, 3.0);
    EXPECT_EQ(seq[2].sources, std::vector<NodeId>{0});
    EXPECT_EQ(seq[3].sources, std::vector<NodeId>{2});
    EXPECT_EQ(seq.label(2), "2");
    EXPECT_EQ(seq.start_time(), 1.0);
    EXPECT_EQ(seq.end_time(), 5.0);
}

TEST(EventSequence, PerNodeIndexMatchesScan) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto seq = ref::random_sequence(rng, {.nodes = 7, .events = 40, .max_set = 3});
        for (NodeId v = 0; v < seq.node_count(); ++v) {
            std::vector<EventIndex> expected;
            for (EventIndex i = 0; i < seq.size(); ++i)
                if (seq[i].involves(v)) expected.push_back(i);
            auto got = seq.events_of(v);
            EXPECT_EQ(std::vector<EventIndex>(got.begin(), got.end()), expected);
        }
    }
}

TEST(EventSequence, RejectsBrokenEvents) {
    EXPECT_THROW(EventSequence({HyperEvent{{}, {1}, 0.0, 0.0}}, true), ValidationError);
    EXPECT_THROW(EventSequence({HyperEvent{{0}, {0}, 0.0, 0.0}}, true), ValidationError);
    EXPECT_THROW(EventSequence({HyperEvent::directed(0, 1, kInfinity)}, true), ValidationError);
    EXPECT_THROW(EventSequence({HyperEvent::directed(0, 1, 0.0, -1.0)}, true), ValidationError);
}

TEST(EventSequence, OverlapPolicy) {
    std::vector<HyperEvent> ev{HyperEvent::directed(0, 1, 0.0, 5.0), HyperEvent::directed(1, 2, 3.0)};
    EXPECT_THROW(EventSequence(ev, true, {}, OverlapPolicy::error), ValidationError);
    EventSequence quiet(ev, true, {}, OverlapPolicy::ignore);
    EXPECT_EQ(quiet.size(), 2u);
    EXPECT_NO_THROW(EventSequence({HyperEvent::directed(0, 1, 0.0, 5.0), HyperEvent::directed(2, 3, 3.0)}, true, {},
                                  OverlapPolicy::error));
}

TEST(EventSequence, UndirectedMergesTargets) {
    EventSequence seq({HyperEvent::directed(3, 1, 0.0)}, false, {}, OverlapPolicy::ignore);
    EXPECT_EQ(seq[0].sources, (std::vector<NodeId>{1, 3}));
    EXPECT_TRUE(seq[0].targets.empty());
    EXPECT_TRUE(seq.is_dyadic());
}

TEST(Ingest, InternsLabelsInRecordOrder) {
    std::istringstream in("source,target,time\nB,A,2\nA,C,1\n");
    auto seq = ingest(read_csv_records(in), true);
    EXPECT_EQ(seq.label(0), "B");
    EXPECT_EQ(seq.label(1), "A");
    EXPECT_EQ(seq.label(2), "C");
    EXPECT_EQ(seq[0].time, 1.0);
    EXPECT_EQ(*seq.find_node("C"), 2u);
}

TEST(Csv, HeaderOrderQuotesAndDuration) {
    std::istringstream in("time,duration,target,source\n1,2,\"x,y\",a\n5,0,a,\"q\"\"r\"\n");
    auto recs = read_csv_records(in);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].targets[0], "x,y");
    EXPECT_EQ(*recs[0].duration, 2.0);
    EXPECT_EQ(recs[1].sources[0], "q\"r");
}

TEST(Csv, ParseErrorsCarryLineNumbers) {
    std::istringstream missing_header("");
    EXPECT_THROW(read_csv_records(missing_header), ParseError);
    std::istringstream no_time("source,target\na,b\n");
    EXPECT_THROW(read_csv_records(no_time), ParseError);
    std::istringstream bad("source,target,time\na,b,1\na,b,zz\n");
    try {
        read_csv_records(bad);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Jsonl, HyperRecords) {
    std::istringstream in(R"({"source":["a","b"],"target":[],"t":1}
{"source":["c"],"target":["a"],"t":2,"d":0.5}

)");
    auto recs = read_jsonl_records(in);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].sources.size(), 2u);
    EXPECT_EQ(*recs[1].duration, 0.5);
    std::istringstream bad("{\"source\":[\"a\"],\"target\":[]}\n");
    EXPECT_THROW(read_jsonl_records(bad), ParseError);
}

TEST(Csv, WriteReadRoundTrip) {
    std::mt19937_64 rng(9);
    auto seq = ref::random_sequence(rng, {.nodes = 5, .events = 30, .duration_probability = 0.3});
    std::ostringstream out;
    write_events_csv(out, seq);
    std::istringstream in(out.str());
    auto back = ingest(read_csv_records(in), true, OverlapPolicy::ignore);
    ASSERT_EQ(back.size(), seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        EXPECT_EQ(back.label(back[i].sources[0]), seq.label(seq[i].sources[0]));
        EXPECT_EQ(back.label(back[i].targets[0]), seq.label(seq[i].targets[0]));
        EXPECT_EQ(back[i].time, seq[i].time);
        EXPECT_EQ(back[i].duration, seq[i].duration);
    }
}

TEST(Csv, RefusesHyperEvents) {
    EventSequence seq({HyperEvent{{0, 1}, {2}, 0.0, 0.0}}, true);
    std::ostringstream out;
    EXPECT_THROW(write_events_csv(out, seq), UnsupportedInput);
}

TEST(Io, AtomicWriteAndFormatDetection) {
    auto dir = std::filesystem::temp_directory_path() / "evg_io_test";
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "e.jsonl", "{\"source\":[\"a\"],\"target\":[\"b\"],\"t\":1}\n");
    auto seq = read_events(dir / "e.jsonl", true);
    EXPECT_EQ(seq.size(), 1u);
    EXPECT_THROW(read_events(dir / "absent.csv", true), Error);
    std::filesystem::remove_all(dir);
}

// Every contact is covered by a hyper-event of its snapshot, and each
// snapshot's groups are the connected components of its contacts.
TEST(DyadicToHyper, GroupsAreSnapshotComponents) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto contacts = ref::random_sequence(rng, {.nodes = 8, .events = 25, .directed = false, .time_range = 6});
        auto hyper = dyadic_to_hyper(contacts, 1.0);
        EXPECT_FALSE(hyper.directed());
        for (const auto& c : contacts.events()) {
            bool covered = false;
            for (const auto& h : hyper.events())
                if (h.time <= c.time && c.time <= h.time + h.duration && ref::subset_of(c.sources, h.sources))
                    covered = true;
            EXPECT_TRUE(covered);
        }
        // Groups active at one time are disjoint and each is connected.
        for (double t = 0; t <= 6; t += 1) {
            std::vector<std::vector<NodeId>> groups;
            for (const auto& h : hyper.events())
                if (h.time <= t && t <= h.time + h.duration) groups.push_back(h.sources);
            std::set<NodeId> seen;
            for (const auto& g : groups)
                for (NodeId v : g) EXPECT_TRUE(seen.insert(v).second);
            std::set<NodeId> touched;
            for (const auto& c : contacts.events())
                if (c.time == t) touched.insert(c.sources.begin(), c.sources.end());
            EXPECT_EQ(seen, touched);
        }
    }
}

TEST(DyadicToHyper, WorkedExamples) {
    auto one_instant = dyadic_to_hyper(
        EventSequence({HyperEvent::undirected(0, 1, 1), HyperEvent::undirected(1, 2, 1)}, false, {"a", "b", "c"},
                      OverlapPolicy::ignore));
    ASSERT_EQ(one_instant.size(), 1u);
    EXPECT_EQ(one_instant[0].sources, (std::vector<NodeId>{0, 1, 2}));

    auto steady = dyadic_to_hyper(EventSequence(
        {HyperEvent::undirected(0, 1, 1), HyperEvent::undirected(0, 1, 2), HyperEvent::undirected(0, 1, 3)}, false,
        {"a", "b"}, OverlapPolicy::ignore));
    ASSERT_EQ(steady.size(), 1u);
    EXPECT_EQ(steady[0].time, 1.0);
    EXPECT_EQ(steady[0].duration, 2.0);

    auto joined = dyadic_to_hyper(EventSequence(
        {HyperEvent::undirected(0, 1, 1), HyperEvent::undirected(0, 1, 2), HyperEvent::undirected(1, 2, 2)}, false,
        {"a", "b", "c"}, OverlapPolicy::ignore));
    ASSERT_EQ(joined.size(), 2u);
    EXPECT_EQ(joined[0].sources, (std::vector<NodeId>{0, 1}));
    EXPECT_EQ(joined[0].time, 1.0);
    EXPECT_EQ(joined[0].duration, 0.0);
    EXPECT_EQ(joined[1].sources, (std::vector<NodeId>{0, 1, 2}));
    EXPECT_EQ(joined[1].time, 2.0);
}

TEST(DyadicToHyper, PersistentGroupBecomesOneEvent) {
    EventSequence contacts({HyperEvent::undirected(0, 1, 0), HyperEvent::undirected(1, 2, 0),
                            HyperEvent::undirected(0, 1, 1), HyperEvent::undirected(1, 2, 1),
                            HyperEvent::undirected(3, 4, 1), HyperEvent::undirected(0, 1, 3)},
                           false, {}, OverlapPolicy::ignore);
    auto hyper = dyadic_to_hyper(contacts, 1.0);
    ASSERT_EQ(hyper.size(), 3u);
    EXPECT_EQ(hyper[0].sources, (std::vector<NodeId>{0, 1, 2}));
    EXPECT_EQ(hyper[0].duration, 1.0);
    EXPECT_EQ(hyper[1].sources, (std::vector<NodeId>{3, 4}));
    EXPECT_EQ(hyper[2].time, 3.0);
    EXPECT_THROW(dyadic_to_hyper(EventSequence({HyperEvent::directed(0, 1, 0)}, true)), UnsupportedInput);
}

} // namespace
