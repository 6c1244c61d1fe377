// Acceptance suite: one pass/fail line per criterion. Exits non-zero if
// any criterion fails.

#include <array>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"
#include "twindesc/aas.hpp"
#include "twindesc/analysis.hpp"
#include "twindesc/constellation.hpp"
#include "twindesc/parser.hpp"
#include "twindesc/report.hpp"

using namespace twindesc;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<void()>& body) {
    std::string failure;
    try {
        body();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    if (failure.empty()) {
        std::cout << "[PASS] criterion " << number << ": " << name << "\n";
    } else {
        ++g_failures;
        std::cout << "[FAIL] criterion " << number << ": " << name << "\n        " << failure
                  << "\n";
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

// --- criterion 6 helpers -------------------------------------------------

void check_slices_against_oracle(const Constellation& c) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : c.edges) {
        edges.emplace_back(c.node_index(e.source), c.node_index(e.target));
    }
    for (std::size_t u = 0; u < c.nodes.size(); ++u) {
        if (c.nodes[u].kind != NodeKind::Usage) continue;
        const Slice slice = extract_slice(c, c.nodes[u].name);
        std::vector<std::string> expected;
        for (std::size_t i : oracles::slice_oracle(c.nodes.size(), edges, u)) {
            expected.push_back(c.nodes[i].name);
        }
        require(slice.nodes == expected,
                "slice for " + c.nodes[u].name + " diverges from the reachability oracle");
    }
}

void run_exhaustive_tiny_graphs() {
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
                    c.edges.push_back(FlowEdge{names[pairs[p].first], names[pairs[p].second], {}});
                }
                if (!valid) continue;
                check_slices_against_oracle(c);
            }
        }
    }
}

std::string sorted_keys(const std::set<CharacteristicId>& s) {
    std::string out;
    for (CharacteristicId c : s) out += characteristic_code(c) + " ";
    return out;
}

}  // namespace

int main() {
    const std::string corpus_text =
        test_util::read_file(test_util::corpus_path("smart_clamp.dtd"));

    criterion(1, "smart-clamp corpus parses cleanly and classifies as Digital Shadow", [&] {
        const ParseResult r = parse(SourceFile{"smart_clamp.dtd", corpus_text});
        require(r.description.has_value(), "corpus failed to parse");
        require(!has_errors(r.diagnostics), "corpus produced error diagnostics");
        const auto diags = validate(*r.description);
        require(!has_errors(diags), "corpus produced validation errors");
        const Classification c = classify(*r.description);
        require(c == Classification{Classification::Kind::DigitalShadow, {}},
                "expected Digital Shadow, got " + to_string(c));
    });

    criterion(2, "six slices; the tool-wear slice holds estimator, 1D datum, reference model",
              [&] {
                  const DtDescription d = test_util::load_corpus("smart_clamp.dtd");
                  const auto slices = enumerate_slices(d.constellation);
                  require(slices.size() == 6,
                          "expected 6 slices, got " + std::to_string(slices.size()));
                  const Slice slice = extract_slice(d.constellation, "Estimate Tool Wear");
                  require(slice.contains("Tool Wear Estimator"), "missing Tool Wear Estimator");
                  require(slice.contains("1D Tool Dimensions"), "missing 1D Tool Dimensions");
                  require(slice.contains("Reference Tool Model"), "missing Reference Tool Model");
              });

    criterion(3, "mapping report buckets are {Explicit:4, Partial:4, Implicit:4, NotSupported:2}",
              [&] {
                  const std::map<SupportLevel, std::set<CharacteristicId>> expected = {
                      {SupportLevel::Explicit,
                       {CharacteristicId::SystemUnderStudy, CharacteristicId::Multiplicities,
                        CharacteristicId::ModelsAndData, CharacteristicId::Constellation}},
                      {SupportLevel::Partial,
                       {CharacteristicId::DataTransmitted, CharacteristicId::InsightsActions,
                        CharacteristicId::LifecycleStages, CharacteristicId::Evolution}},
                      {SupportLevel::Implicit,
                       {CharacteristicId::ActingComponents, CharacteristicId::SensingComponents,
                        CharacteristicId::Usages, CharacteristicId::Enablers}},
                      {SupportLevel::NotSupported,
                       {CharacteristicId::TimeScale, CharacteristicId::FidelityConsiderations}},
                  };
                  // The static assignment, and the report emitted for both a
                  // full and an empty description.
                  for (const auto& [level, members] : expected) {
                      for (CharacteristicId c : members) {
                          require(support_level(c) == level,
                                  characteristic_code(c) + " has the wrong support level");
                      }
                  }
                  for (const DtDescription& d :
                       {test_util::load_corpus("smart_clamp.dtd"),
                        test_util::parse_ok("digital_twin \"Bare\" {}")}) {
                      const AasDocument doc = map_to_aas(d);
                      require(doc.mapping_report.size() == 14, "mapping report is not total");
                      std::map<SupportLevel, std::set<CharacteristicId>> got;
                      for (const auto& entry : doc.mapping_report) {
                          got[entry.support].insert(entry.characteristic);
                      }
                      for (const auto& [level, members] : expected) {
                          require(got[level] == members,
                                  "bucket mismatch: got " + sorted_keys(got[level]));
                      }
                  }
              });

    criterion(4, "classification truth table matches the ladder and the substitution oracle",
              [&] {
                  using K = Classification::Kind;
                  const std::array<Presence, 3> all = {Presence::Present, Presence::Absent,
                                                       Presence::Unreported};
                  require(classify_presences(Presence::Absent, Presence::Absent) ==
                              Classification{K::DigitalModel, {}},
                          "(Absent, Absent) is not DigitalModel");
                  require(classify_presences(Presence::Present, Presence::Absent) ==
                              Classification{K::DigitalShadow, {}},
                          "(Present, Absent) is not DigitalShadow");
                  require(classify_presences(Presence::Present, Presence::Present) ==
                              Classification{K::DigitalTwin, {}},
                          "(Present, Present) is not DigitalTwin");
                  require(classify_presences(Presence::Absent, Presence::Present) ==
                              Classification{K::Inconsistent, {}},
                          "(Absent, Present) is not Inconsistent");
                  for (Presence a : all) {
                      for (Presence b : all) {
                          require(classify_presences(a, b) == oracles::classify_oracle(a, b),
                                  "cell (" + to_string(a) + ", " + to_string(b) +
                                      ") diverges from the oracle");
                      }
                  }
              });

    criterion(5, "motivation-case corpus classifies Ambiguous{DigitalShadow, DigitalTwin}", [&] {
        const DtDescription d = test_util::load_corpus("human_robot.dtd");
        const Classification c = classify(d);
        using K = Classification::Kind;
        require(c == Classification{K::Ambiguous, {K::DigitalShadow, K::DigitalTwin}},
                "got " + to_string(c));
    });

    criterion(6,
              "property suite: 1000 round-trips; slices vs oracle (exhaustive <=3 nodes plus "
              "2000 sampled <=8); completeness monotonicity; serializer determinism",
              [&] {
                  // Round-trip.
                  generators::Rng rng(20250809);
                  for (int iter = 0; iter < 1000; ++iter) {
                      const DtDescription d = generators::random_description(rng);
                      const ParseResult r = parse(SourceFile{"<roundtrip>", render(d)});
                      require(r.description.has_value() && r.diagnostics.empty(),
                              "round-trip re-parse failed at iteration " + std::to_string(iter));
                      require(*r.description == d,
                              "round-trip value mismatch at iteration " + std::to_string(iter));
                  }
                  // Slices against the brute-force reachability oracle.
                  run_exhaustive_tiny_graphs();
                  generators::Rng srng(5150);
                  for (int iter = 0; iter < 2000; ++iter) {
                      check_slices_against_oracle(generators::random_constellation(srng, 8));
                  }
                  // Completeness monotonicity under block insertion.
                  const std::vector<std::string> pool = {
                      "sus { system: \"s\" }",
                      "acting { component \"a\" }",
                      "sensing { component \"b\" }",
                      "multiplicity { sus_entities: 2 }",
                      "data { automatic \"d\" }",
                      "insights { insight \"i\" }",
                      "actions { agent \"act\" }",
                      "usage \"U\" { mode: historical }",
                      "enabler \"E\" { time_scale: real_time }",
                      "datum \"M\"",
                      "datum \"FM\"\n  enabler \"FE\" {}\n  flow \"FM\" -> \"FE\"",
                      "fidelity \"U\" \"tight\"",
                      "lifecycle design { usage \"U\" }",
                      "evolution { step \"one\" }",
                  };
                  generators::Rng mrng(424242);
                  auto assemble = [&](const std::vector<bool>& mask) {
                      std::string text = "digital_twin \"X\" {\n";
                      for (std::size_t i = 0; i < mask.size(); ++i) {
                          if (mask[i]) text += "  " + pool[i] + "\n";
                      }
                      return text + "}\n";
                  };
                  for (int iter = 0; iter < 200; ++iter) {
                      std::vector<bool> mask(pool.size());
                      for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = mrng.chance(0.4);
                      std::vector<std::size_t> absent;
                      for (std::size_t i = 0; i < mask.size(); ++i) {
                          if (!mask[i]) absent.push_back(i);
                      }
                      if (absent.empty()) continue;
                      const int before =
                          completeness(test_util::parse_ok(assemble(mask))).score;
                      std::vector<bool> extended = mask;
                      extended[absent[static_cast<std::size_t>(mrng.range(
                          0, static_cast<int>(absent.size()) - 1))]] = true;
                      const int after =
                          completeness(test_util::parse_ok(assemble(extended))).score;
                      require(after >= before, "completeness decreased under block insertion");
                  }
                  // Serializer determinism.
                  const DtDescription corpus = test_util::load_corpus("smart_clamp.dtd");
                  require(serialize_aas(map_to_aas(corpus)) == serialize_aas(map_to_aas(corpus)),
                          "corpus serialization is not byte-identical across runs");
                  const DtDescription bare = test_util::parse_ok("digital_twin \"B\" {}");
                  require(serialize_aas(map_to_aas(bare)) == serialize_aas(map_to_aas(bare)),
                          "empty-document serialization is not byte-identical across runs");
              });

    criterion(7, "golden files: smart-clamp .aas.json, DOT graph, and Markdown report", [&] {
        const DtDescription d = test_util::load_corpus("smart_clamp.dtd");
        const std::string aas = serialize_aas(map_to_aas(d));
        const std::string dot = to_dot(d.constellation);
        const std::string report = render_report(d);
        require(aas == test_util::read_file(test_util::golden_path("smart_clamp.aas.json")),
                "smart_clamp.aas.json diverges from the golden file");
        require(dot == test_util::read_file(test_util::golden_path("smart_clamp.dot")),
                "smart_clamp.dot diverges from the golden file");
        require(report == test_util::read_file(test_util::golden_path("smart_clamp_report.md")),
                "smart_clamp_report.md diverges from the golden file");
    });

    if (g_failures == 0) {
        std::cout << "acceptance: all 7 criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " criterion(s) failed\n";
    return 1;
}
