#include "anypath/topology.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <string>

using anypath::Topology;
using anypath::topology_error;

namespace {
const std::string kThreeNode = "nodes 3\nsource 1\ndest 3\nlink 1 2 0.8\nlink 2 3 1.0\nlink 1 3 0.5\n";
}

TEST_CASE("minimal valid topology parses") {
    Topology t = Topology::parse(std::string("nodes 2\nsource 1\ndest 2\nlink 1 2 1.0"));
    CHECK(t.node_count() == 2);
    CHECK(t.source() == 1);
    CHECK(t.destination() == 2);
    REQUIRE(t.link_count() == 1);
    CHECK(t.links()[0].prob == 1.0);
}

TEST_CASE("probability outside [0,1] is rejected with the line number") {
    try {
        Topology::parse(std::string("nodes 2\nsource 1\ndest 2\nlink 1 2 1.5"));
        FAIL("expected topology_error");
    } catch (const topology_error& e) {
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("probability") != std::string::npos);
    }
}

TEST_CASE("comments, blank lines, and CRLF endings are ignored") {
    Topology t = Topology::parse(std::string("# header\n\nnodes 2\r\n  # indented comment\nsource 1\ndest 2\nlink 1 2 0.25  \n"));
    CHECK(t.link_count() == 1);
    CHECK(t.links()[0].prob == 0.25);
}

TEST_CASE("three-node example re-serializes to canonical form") {
    Topology t = Topology::parse(kThreeNode);
    CHECK(t.serialize() == "nodes 3\nsource 1\ndest 3\nlink 1 2 0.8\nlink 1 3 0.5\nlink 2 3 1\n");
    CHECK(Topology::parse(t.serialize()).serialize() == t.serialize());
}

TEST_CASE("each defect class yields its matching error") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        try {
            Topology::parse(text);
            FAIL("expected topology_error for: ", needle);
        } catch (const topology_error& e) {
            INFO("message: ", e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("source 1\nnodes 2\ndest 2\nlink 1 2 1.0", "'nodes' must be the first");
    expect_error("nodes 2\nsource 1\nlink 1 2 1.0", "missing 'dest'");
    expect_error("nodes 2\ndest 2\nlink 1 2 1.0", "missing 'source'");
    expect_error("link 1 2 1.0", "'nodes' must be the first");
    expect_error("nodes 2\nnodes 2\nsource 1\ndest 2\nlink 1 2 1.0", "duplicate 'nodes'");
    expect_error("nodes 2\nsource 1\nsource 1\ndest 2\nlink 1 2 1.0", "duplicate 'source'");
    expect_error("nodes 2\nsource 1\ndest 2\nlink 1 2 1.0\nlink 1 2 0.5", "duplicate link");
    expect_error("nodes 2\nsource 1\ndest 2\nlink 1 1 0.5\nlink 1 2 1.0", "self-link");
    expect_error("nodes 2\nsource 1\ndest 2\nlink 1 3 0.5", "out of range");
    expect_error("nodes 2\nsource 3\ndest 2\nlink 1 2 1.0", "out of range");
    expect_error("nodes 2\nsource 1\ndest 2\nlink 1 2 -0.1", "outside [0,1]");
    expect_error("nodes 2\nsource 1\ndest 2\nlink 1 2 abc", "expected decimal");
    expect_error("nodes 2\nsource 1\ndest 2\nroute 1 2", "unknown directive");
    expect_error("nodes 2\nsource 1\ndest 2", "unreachable");
    expect_error("nodes 3\nsource 1\ndest 3\nlink 1 2 0.5", "unreachable");
    expect_error("nodes 2\nsource 1\ndest 1\nlink 1 2 1.0", "source equals destination");
    // prob-0 links do not count toward reachability
    expect_error("nodes 2\nsource 1\ndest 2\nlink 1 2 0.0", "unreachable");
}

TEST_CASE("prob-0 links are accepted when another route exists") {
    Topology t = Topology::parse(std::string("nodes 3\nsource 1\ndest 3\nlink 1 2 0.0\nlink 1 3 0.5"));
    CHECK(t.link_count() == 2);
}

TEST_CASE("max out-degree") {
    CHECK(Topology::parse(std::string("nodes 2\nsource 1\ndest 2\nlink 1 2 1.0")).max_out_degree() == 1);
    CHECK(Topology::parse(kThreeNode).max_out_degree() == 2);
    // star: center 1 with 5 spokes
    std::string star = "nodes 6\nsource 1\ndest 6\n";
    for (int v = 2; v <= 6; ++v)
        star += "link 1 " + std::to_string(v) + " 0.5\n";
    CHECK(Topology::parse(star).max_out_degree() == 5);
}

TEST_CASE("neighbors are ordered by node id with their true probabilities") {
    Topology t = Topology::parse(kThreeNode);
    auto n1 = t.neighbors(1);
    REQUIRE(n1.size() == 2);
    CHECK(n1[0] == std::pair<anypath::NodeId, double>{2, 0.8});
    CHECK(n1[1] == std::pair<anypath::NodeId, double>{3, 0.5});
    CHECK(t.neighbors(3).empty());
    CHECK_THROWS_AS((void)t.neighbors(9), std::out_of_range);
}

TEST_CASE("parse of serialize is the identity on random topologies") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Topology t = testutil::random_topology(seed, 8, 0.05, 1.0);
        Topology back = Topology::parse(t.serialize());
        CHECK(back.serialize() == t.serialize());
        CHECK(back.node_count() == t.node_count());
        REQUIRE(back.link_count() == t.link_count());
        for (int i = 0; i < t.link_count(); ++i) {
            CHECK(back.links()[static_cast<std::size_t>(i)].prob ==
                  t.links()[static_cast<std::size_t>(i)].prob); // exact round-trip
        }
    }
}

TEST_CASE("max_out_degree equals the longest neighbor list") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        Topology t = testutil::random_topology(seed, 9, 0.1, 0.9);
        int longest = 0;
        for (int v = 1; v <= t.node_count(); ++v)
            longest = std::max(longest, static_cast<int>(t.neighbors(v).size()));
        CHECK(t.max_out_degree() == longest);
    }
}

TEST_CASE("link_index resolves every link and rejects absent pairs") {
    Topology t = Topology::parse(kThreeNode);
    for (int i = 0; i < t.link_count(); ++i) {
        const anypath::Link& l = t.links()[static_cast<std::size_t>(i)];
        CHECK(t.link_index(l.from, l.to) == i);
    }
    CHECK(t.link_index(3, 1) == -1);
}
