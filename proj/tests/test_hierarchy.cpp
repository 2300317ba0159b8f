#include <doctest.h>

#include "support.hpp"

using namespace hiercls;
using namespace hiercls::testing;

namespace {

std::set<std::string> names_of(const Hierarchy& h, std::span<const NodeId> ids) {
    std::set<std::string> out;
    for (NodeId s : ids) out.insert(h.name(s));
    return out;
}

}  // namespace

TEST_CASE("toy1 builds with a single root") {
    const auto h = toy1().build();
    CHECK(h.size() == 7);
    CHECK(h.edge_count() == 6);
    CHECK(names_of(h, h.roots()) == std::set<std::string>{"entity"});
    CHECK(names_of(h, h.labeled()) == std::set<std::string>{"corgi", "car", "bus"});
    // ids follow input order
    CHECK(h.id("entity").index == 0);
    CHECK(h.id("bus").index == 6);
}

TEST_CASE("parents and children") {
    const auto h1 = toy1().build();
    CHECK(names_of(h1, h1.parents(h1.id("corgi"))) == std::set<std::string>{"dog"});
    CHECK(h1.parents(h1.id("entity")).empty());
    CHECK(names_of(h1, h1.children(h1.id("dog"))) == std::set<std::string>{"corgi"});
    CHECK(names_of(h1, h1.children(h1.id("entity"))) == std::set<std::string>{"animal", "vehicle"});

    const auto h2 = toy2().build();
    CHECK(names_of(h2, h2.parents(h2.id("whale"))) == std::set<std::string>{"mammal", "aquatic"});
    CHECK(names_of(h2, h2.children(h2.id("whale"))) == std::set<std::string>{"dolphin"});
}

TEST_CASE("is_ancestor on toy1") {
    const auto g = toy1();
    const auto h = g.build();
    CHECK(h.is_ancestor(h.id("corgi"), h.id("entity")));
    CHECK_FALSE(h.is_ancestor(h.id("corgi"), h.id("corgi")));
    CHECK_FALSE(h.is_ancestor(h.id("corgi"), h.id("vehicle")));
    // agrees with the DFS oracle everywhere
    for (const auto& d : g.nodes) {
        const auto anc = oracle_ancestors(g, d);
        for (const auto& a : g.nodes) CHECK(h.is_ancestor(h.id(d), h.id(a)) == anc.contains(a));
    }
}

TEST_CASE("build rejects malformed graphs") {
    CHECK_THROWS_AS(Hierarchy::build({"a"}, {{"a", "a"}}, {}), SelfLoop);
    CHECK_THROWS_AS(Hierarchy::build({"a", "b"}, {{"a", "b"}, {"b", "a"}}, {}), CycleDetected);
    CHECK_THROWS_AS(Hierarchy::build({"a", "a"}, {}, {}), DuplicateName);
    CHECK_THROWS_AS(Hierarchy::build({"a"}, {{"a", "b"}}, {}), UnknownName);
    CHECK_THROWS_AS(Hierarchy::build({"a"}, {}, {"b"}), UnknownName);

    try {
        Hierarchy::build({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "a"}}, {});
        FAIL("expected CycleDetected");
    } catch (const CycleDetected& e) {
        const auto& cyc = e.cycle();
        CHECK(std::set<std::string>(cyc.begin(), cyc.end()) == std::set<std::string>{"a", "b", "c"});
    }
}

TEST_CASE("multiple roots are allowed") {
    const auto h = Hierarchy::build({"r1", "r2", "x"}, {{"x", "r1"}, {"x", "r2"}}, {"x"});
    CHECK(h.roots().size() == 2);
}

TEST_CASE("duplicate edges collapse") {
    const auto h = Hierarchy::build({"a", "b"}, {{"a", "b"}, {"a", "b"}}, {});
    CHECK(h.edge_count() == 1);
}

TEST_CASE("closure, topo order and adjacency on random DAGs") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 50;
        const auto g = random_dag(rng, n);
        const auto h = g.build();
        const auto ref = oracle_closure(g);
        for (std::size_t d = 0; d < n; ++d)
            for (std::size_t a = 0; a < n; ++a) REQUIRE(h.is_ancestor(NodeId{d}, NodeId{a}) == ref[d][a]);

        std::vector<std::size_t> pos(n);
        for (std::size_t i = 0; i < n; ++i) pos[h.topo_order()[i].index] = i;
        for (auto [c, p] : h.edges()) REQUIRE(pos[p.index] < pos[c.index]);

        for (std::size_t s = 0; s < n; ++s) {
            for (NodeId p : h.parents(NodeId{s})) {
                const auto ch = h.children(p);
                REQUIRE(std::find(ch.begin(), ch.end(), NodeId{s}) != ch.end());
            }
            for (NodeId c : h.children(NodeId{s})) {
                const auto pa = h.parents(c);
                REQUIRE(std::find(pa.begin(), pa.end(), NodeId{s}) != pa.end());
            }
            // every non-root reaches a root
            if (!h.is_root(NodeId{s})) {
                bool reaches = false;
                for (NodeId r : h.roots()) reaches = reaches || h.is_ancestor(NodeId{s}, r);
                REQUIRE(reaches);
            }
        }
        REQUIRE_FALSE(h.roots().empty());
    }
}

TEST_CASE("cyclic graphs are rejected, acyclic accepted") {
    std::mt19937_64 rng(99);
    int cyclic = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_dag(rng, 2 + rng() % 30);
        CHECK_NOTHROW(g.build());
        // Close a cycle: an edge from an ancestor down to one of its descendants.
        const auto ref = oracle_closure(g);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t d = 0; d < g.nodes.size(); ++d)
            for (std::size_t a = 0; a < g.nodes.size(); ++a)
                if (ref[d][a]) pairs.emplace_back(d, a);
        if (pairs.empty()) continue;
        const auto [d, a] = pairs[rng() % pairs.size()];
        g.edges.emplace_back(g.nodes[a], g.nodes[d]);
        CHECK_THROWS_AS(g.build(), CycleDetected);
        ++cyclic;
    }
    CHECK(cyclic > 100);
}

TEST_CASE("parse_hierarchy") {
    const std::string text =
        "# toy hierarchy\n"
        "animal\tentity\nvehicle\tentity\ndog\tanimal\ncorgi\tdog\ncar\tvehicle\nbus\tvehicle\n"
        "\n!label\tcorgi\n!label\tcar\n!label\tbus\n";
    const auto h = parse_hierarchy(text);
    CHECK(h.size() == 7);
    CHECK(h.edge_count() == 6);
    CHECK(h.equivalent(toy1().build()));
    CHECK(h.id("animal").index == 0);  // first appearance

    SUBCASE("missing parent column") {
        try {
            parse_hierarchy("animal\tentity\ncorgi\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("too many columns") { CHECK_THROWS_AS(parse_hierarchy("a\tb\tc\n"), ParseError); }
    SUBCASE("build errors pass through") {
        CHECK_THROWS_AS(parse_hierarchy("a\ta\n"), SelfLoop);
        CHECK_THROWS_AS(parse_hierarchy("a\tb\nb\ta\n"), CycleDetected);
    }
    SUBCASE("crlf line endings") { CHECK(parse_hierarchy("a\tb\r\n!label\ta\r\n").size() == 2); }
    SUBCASE("label outside the edge set") { CHECK_THROWS_AS(parse_hierarchy(text + "!label\tplane\n"), UnknownName); }
    SUBCASE("isolated nodes cannot be written") {
        CHECK_THROWS_AS(serialize_hierarchy(Hierarchy::build({"a"}, {}, {"a"})), Error);
    }
}

TEST_CASE("serializer round trip") {
    for (const auto& g : {toy1(), toy2()}) {
        const auto h = g.build();
        const auto back = parse_hierarchy(serialize_hierarchy(h));
        CHECK(back.equivalent(h));
        // a second pass is a fixed point
        CHECK(serialize_hierarchy(back) == serialize_hierarchy(parse_hierarchy(serialize_hierarchy(back))));
    }
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_dag(rng, 2 + rng() % 40);
        // the file format only holds nodes that take part in an edge
        std::set<std::string> used;
        for (const auto& [c, p] : g.edges) used.insert({c, p});
        std::erase_if(g.nodes, [&](const std::string& n) { return !used.contains(n); });
        std::erase_if(g.labeled, [&](const std::string& n) { return !used.contains(n); });
        if (g.nodes.empty()) continue;
        const auto h = g.build();
        REQUIRE(parse_hierarchy(serialize_hierarchy(h)).equivalent(h));
    }
}
