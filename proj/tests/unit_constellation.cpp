#include <doctest.h>

#include <algorithm>
#include <set>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"
#include "twindesc/constellation.hpp"
#include "twindesc/parser.hpp"

using namespace twindesc;

namespace {

// Compares extract_slice against the transitive-closure oracle for every
// usage in the constellation.
void check_against_oracle(const Constellation& c) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : c.edges) {
        edges.emplace_back(c.node_index(e.source), c.node_index(e.target));
    }
    for (std::size_t u = 0; u < c.nodes.size(); ++u) {
        if (c.nodes[u].kind != NodeKind::Usage) continue;
        const Slice slice = extract_slice(c, c.nodes[u].name);
        const auto expected_idx = oracles::slice_oracle(c.nodes.size(), edges, u);
        std::vector<std::string> expected;
        for (std::size_t i : expected_idx) expected.push_back(c.nodes[i].name);
        CHECK(slice.nodes == expected);
        // Induced edges: exactly those with both endpoints in the slice.
        std::vector<FlowEdge> induced;
        const std::set<std::string> members(slice.nodes.begin(), slice.nodes.end());
        for (const auto& e : c.edges) {
            if (members.count(e.source) && members.count(e.target)) induced.push_back(e);
        }
        CHECK(slice.edges == induced);
    }
}

Constellation smart_clamp_constellation() {
    return test_util::load_corpus("smart_clamp.dtd").constellation;
}

}  // namespace

TEST_CASE("smart clamp has exactly six slices in declaration order") {
    const Constellation c = smart_clamp_constellation();
    const auto slices = enumerate_slices(c);
    REQUIRE(slices.size() == 6);
    CHECK(slices[0].usage == "Estimate Correlations");
    CHECK(slices[5].usage == "Estimate Tool Wear");
}

TEST_CASE("the tool wear slice holds the estimator, the 1D datum, and the reference model") {
    const Constellation c = smart_clamp_constellation();
    const Slice slice = extract_slice(c, "Estimate Tool Wear");
    CHECK(slice.contains("Tool Wear Estimator"));
    CHECK(slice.contains("1D Tool Dimensions"));
    CHECK(slice.contains("Reference Tool Model"));
    CHECK(slice.contains("Estimate Tool Wear"));
    CHECK(slice.nodes.size() == 4);
    CHECK(slice.edges.size() == 3);
}

TEST_CASE("shared enablers appear in both slices") {
    const Constellation c = smart_clamp_constellation();
    const Slice a = extract_slice(c, "Historical Metrics");
    const Slice b = extract_slice(c, "Streaming Metrics");
    CHECK(a.contains("Dashboard"));
    CHECK(b.contains("Dashboard"));
    // Identical support sets; the slices differ only in their own usage.
    auto support = [](const Slice& s) {
        std::vector<std::string> out;
        for (const auto& n : s.nodes) {
            if (n != s.usage) out.push_back(n);
        }
        return out;
    };
    CHECK(support(a) == support(b));
}

TEST_CASE("a single isolated usage is its own slice") {
    const DtDescription d = test_util::parse_ok("digital_twin \"X\" { usage \"only\" {} }");
    const Slice slice = extract_slice(d.constellation, "only");
    CHECK(slice.nodes == std::vector<std::string>{"only"});
    CHECK(slice.edges.empty());
}

TEST_CASE("cycles terminate and include each node once") {
    const DtDescription d = test_util::parse_ok(
        "digital_twin \"X\" {\n  usage \"u\" {}\n  enabler \"trainer\" {}\n"
        "  model \"net\"\n  datum \"samples\"\n"
        "  flow \"samples\" -> \"trainer\"\n  flow \"trainer\" -> \"net\"\n"
        "  flow \"net\" -> \"trainer\"\n  flow \"trainer\" -> \"u\"\n}");
    const Slice slice = extract_slice(d.constellation, "u");
    CHECK(slice.nodes.size() == 4);
    const std::set<std::string> unique(slice.nodes.begin(), slice.nodes.end());
    CHECK(unique.size() == 4);
    check_against_oracle(d.constellation);
}

TEST_CASE("extract_slice rejects unknown names and non-usages") {
    const Constellation c = smart_clamp_constellation();
    CHECK_THROWS_AS((void)extract_slice(c, "nope"), Error);
    CHECK_THROWS_AS((void)extract_slice(c, "Dashboard"), Error);
}

TEST_CASE("zero usages yield zero slices") {
    const DtDescription d = test_util::parse_ok("digital_twin \"X\" { datum \"m\" }");
    CHECK(enumerate_slices(d.constellation).empty());
}

TEST_CASE("slice invariants hold on random valid constellations") {
    generators::Rng rng(808);
    for (int iter = 0; iter < 200; ++iter) {
        const Constellation c = generators::random_constellation(rng, 8);
        const auto slices = enumerate_slices(c);
        std::size_t usage_count = 0;
        for (const auto& n : c.nodes) {
            if (n.kind == NodeKind::Usage) ++usage_count;
        }
        CHECK(slices.size() == usage_count);
        for (const auto& slice : slices) {
            int usages_inside = 0;
            for (const auto& name : slice.nodes) {
                const auto* node = c.find(name);
                REQUIRE(node != nullptr);
                if (node->kind == NodeKind::Usage) ++usages_inside;
            }
            CHECK(usages_inside == 1);
            for (const auto& e : slice.edges) {
                CHECK(std::find(c.edges.begin(), c.edges.end(), e) != c.edges.end());
            }
        }
    }
}

TEST_CASE("extract_slice matches the closure oracle exhaustively for tiny graphs") {
    // Every kind assignment x every edge subset over non-usage sources,
    // for up to three nodes.
    static const char* names[3] = {"n0", "n1", "n2"};
    for (int n = 1; n <= 3; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int s = 0; s < n; ++s) {
            for (int t = 0; t < n; ++t) {
                if (s != t) pairs.emplace_back(s, t);
            }
        }
        int kind_assignments = 1;
        for (int i = 0; i < n; ++i) kind_assignments *= 3;
        for (int kinds = 0; kinds < kind_assignments; ++kinds) {
            Constellation base;
            int rem = kinds;
            for (int i = 0; i < n; ++i) {
                ConstellationNode node;
                node.name = names[i];
                node.kind = static_cast<NodeKind>(rem % 3);
                rem /= 3;
                base.nodes.push_back(node);
            }
            for (int mask = 0; mask < (1 << pairs.size()); ++mask) {
                Constellation c = base;
                bool valid = true;
                for (std::size_t p = 0; p < pairs.size(); ++p) {
                    if (!(mask & (1 << p))) continue;
                    if (c.nodes[pairs[p].first].kind == NodeKind::Usage) {
                        valid = false;
                        break;
                    }
                    c.edges.push_back(
                        FlowEdge{names[pairs[p].first], names[pairs[p].second], {}});
                }
                if (!valid) continue;
                check_against_oracle(c);
            }
        }
    }
}

TEST_CASE("extract_slice matches the closure oracle on sampled graphs up to eight nodes") {
    generators::Rng rng(5150);
    for (int iter = 0; iter < 600; ++iter) {
        check_against_oracle(generators::random_constellation(rng, 8));
    }
}

TEST_CASE("DOT output is deterministic and counts the corpus nodes") {
    const Constellation c = smart_clamp_constellation();
    const std::string a = to_dot(c);
    const std::string b = to_dot(c);
    CHECK(a == b);
    // One label per node.
    std::size_t labels = 0, pos = 0;
    while ((pos = a.find("[label=", pos)) != std::string::npos) {
        ++labels;
        pos += 7;
    }
    CHECK(labels == c.nodes.size());
    CHECK(labels == 14);
    // Three rank groups and every edge.
    std::size_t ranks = 0;
    pos = 0;
    while ((pos = a.find("rank=same", pos)) != std::string::npos) {
        ++ranks;
        pos += 9;
    }
    CHECK(ranks == 3);
    CHECK(a.find("_1dToolDimensions -> toolWearEstimator;") != std::string::npos);
}

TEST_CASE("empty constellation renders an empty digraph") {
    const Constellation c;
    CHECK(to_dot(c) == "digraph constellation {\n  rankdir=BT;\n  node [shape=box];\n}\n");
}

TEST_CASE("highlighting styles exactly the slice nodes") {
    const Constellation c = smart_clamp_constellation();
    const Slice slice = extract_slice(c, "Estimate Tool Wear");
    const std::string dot = to_dot(c, slice);
    std::size_t styled = 0, pos = 0;
    while ((pos = dot.find("style=filled", pos)) != std::string::npos) {
        ++styled;
        pos += 12;
    }
    CHECK(styled == slice.nodes.size());
    CHECK(dot.find("estimateToolWear [label=\"Estimate Tool Wear\", style=filled") !=
          std::string::npos);
    CHECK(dot.find("dashboard [label=\"Dashboard\"];") != std::string::npos);
}

TEST_CASE("quotes and backslashes in names stay valid in DOT labels") {
    Constellation c;
    ConstellationNode node;
    node.name = "say \"hi\" \\ there";
    node.kind = NodeKind::Usage;
    c.nodes.push_back(node);
    const std::string dot = to_dot(c);
    CHECK(dot.find("label=\"say \\\"hi\\\" \\\\ there\"") != std::string::npos);
}
