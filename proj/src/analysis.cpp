#include "twindesc/analysis.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace twindesc {

namespace {

bool legal_edge(NodeKind from, NodeKind to) {
    if (from == NodeKind::Usage) return false;
    if (from == NodeKind::ModelData && to == NodeKind::ModelData) return false;
    // ModelData->Enabler, ModelData->Usage, Enabler->Usage, Enabler->Enabler,
    // Enabler->ModelData.
    return true;
}

Classification::Kind base_kind(bool data_automatic, bool actions_automatic) {
    using K = Classification::Kind;
    if (data_automatic && actions_automatic) return K::DigitalTwin;
    if (data_automatic) return K::DigitalShadow;
    if (actions_automatic) return K::Inconsistent;
    return K::DigitalModel;
}

}  // namespace

std::string to_string(Classification::Kind k) {
    switch (k) {
        case Classification::Kind::DigitalModel: return "Digital Model";
        case Classification::Kind::DigitalShadow: return "Digital Shadow";
        case Classification::Kind::DigitalTwin: return "Digital Twin";
        case Classification::Kind::Ambiguous: return "Ambiguous";
        case Classification::Kind::Inconsistent: return "Inconsistent";
    }
    return "";
}

std::string to_string(const Classification& c) {
    if (c.kind != Classification::Kind::Ambiguous) return to_string(c.kind);
    std::string out = "Ambiguous (";
    for (std::size_t i = 0; i < c.candidates.size(); ++i) {
        if (i) out += " OR ";
        out += to_string(c.candidates[i]);
    }
    out += ")";
    return out;
}

Classification classify_presences(Presence automatic_data, Presence automatic_actions) {
    using K = Classification::Kind;
    if (automatic_data != Presence::Unreported && automatic_actions != Presence::Unreported) {
        return Classification{base_kind(automatic_data == Presence::Present,
                                        automatic_actions == Presence::Present),
                              {}};
    }
    std::vector<K> candidates;
    const bool data_options[2] = {false, true};
    const bool action_options[2] = {false, true};
    for (bool data_auto : data_options) {
        if (automatic_data == Presence::Present && !data_auto) continue;
        if (automatic_data == Presence::Absent && data_auto) continue;
        for (bool act_auto : action_options) {
            if (automatic_actions == Presence::Present && !act_auto) continue;
            if (automatic_actions == Presence::Absent && act_auto) continue;
            const K k = base_kind(data_auto, act_auto);
            if (k == K::Inconsistent) continue;
            if (std::find(candidates.begin(), candidates.end(), k) == candidates.end()) {
                candidates.push_back(k);
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    if (candidates.size() == 1) return Classification{candidates.front(), {}};
    return Classification{K::Ambiguous, std::move(candidates)};
}

Classification classify(const DtDescription& d) {
    return classify_presences(presence_of_automatic_data(d), presence_of_automatic_actions(d));
}

UsageMode classify_usage_mode(const DtDescription& d, std::string_view usage) {
    const ConstellationNode* node = d.constellation.find(usage);
    if (node == nullptr || node->kind != NodeKind::Usage) {
        throw Error("unknown usage \"" + std::string(usage) + "\"");
    }
    return node->mode;
}

std::vector<Diagnostic> validate(const DtDescription& d) {
    std::vector<Diagnostic> out;
    const Constellation& c = d.constellation;
    const std::size_t n = c.nodes.size();

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(c.nodes[i].name, i);

    auto error = [&](const char* code, std::string msg, SourceLocation loc) {
        std::optional<SourceLocation> location;
        if (loc.line > 0) location = loc;
        out.push_back(Diagnostic{Severity::Error, code, std::move(msg), location});
    };
    auto warning = [&](const char* code, std::string msg, SourceLocation loc) {
        std::optional<SourceLocation> location;
        if (loc.line > 0) location = loc;
        out.push_back(Diagnostic{Severity::Warning, code, std::move(msg), location});
    };

    // E101: flow shape legality.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : c.edges) {
        auto s = index.find(e.source);
        auto t = index.find(e.target);
        if (s == index.end() || t == index.end()) {
            // Unreachable through the parser (E004 fires first); kept for
            // descriptions built in memory.
            error("E101",
                  "flow \"" + e.source + "\" -> \"" + e.target + "\" references an undeclared node",
                  e.loc);
            continue;
        }
        edges.emplace_back(s->second, t->second);
        const NodeKind from = c.nodes[s->second].kind;
        const NodeKind to = c.nodes[t->second].kind;
        if (!legal_edge(from, to)) {
            error("E101",
                  "illegal flow from " + node_kind_label(from) + " \"" + e.source + "\" to " +
                      node_kind_label(to) + " \"" + e.target + "\"",
                  e.loc);
        }
    }

    // E102: channel items never run faster than real time.
    for (const auto& ch : d.channels) {
        if (ch.time_scale == TimeScale::FasterThanRealTime) {
            error("E102",
                  "faster-than-real-time is not allowed on channel item \"" + ch.name + "\"",
                  ch.loc);
        }
    }

    // E103: lifecycle and fidelity references must name declared usages.
    auto is_usage_name = [&](const std::string& name) {
        auto it = index.find(name);
        return it != index.end() && c.nodes[it->second].kind == NodeKind::Usage;
    };
    for (const auto& stage : d.lifecycle_stages) {
        for (const auto& ref : stage.usages) {
            if (!is_usage_name(ref.usage)) {
                error("E103",
                      "lifecycle stage '" + stage.stage + "' references unknown usage \"" +
                          ref.usage + "\"",
                      ref.loc);
            }
        }
    }
    for (const auto& fn : d.fidelity_notes) {
        if (!is_usage_name(fn.usage)) {
            error("E103", "fidelity note references unknown usage \"" + fn.usage + "\"", fn.loc);
        }
    }

    // E104: automatic actions without automatic data have no rung on the
    // DM/DS/DT ladder.
    if (presence_of_automatic_data(d) == Presence::Absent &&
        presence_of_automatic_actions(d) == Presence::Present) {
        SourceLocation loc{};
        for (const auto& ch : d.channels) {
            if (ch.direction == ChannelDirection::AutomaticAction) {
                loc = ch.loc;
                break;
            }
        }
        error("E104",
              "automatic actions are declared but automatic data transfer is declared absent",
              loc);
    }

    // Reachability marks for W201/W202.
    std::vector<char> has_incoming(n, 0);
    for (const auto& [from, to] : edges) has_incoming[to] = 1;

    std::vector<std::vector<std::size_t>> succ(n), pred(n);
    for (const auto& [from, to] : edges) {
        succ[from].push_back(to);
        pred[to].push_back(from);
    }
    auto closure = [&](std::vector<char>& mark, const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<std::size_t> work;
        for (std::size_t i = 0; i < n; ++i) {
            if (mark[i]) work.push_back(i);
        }
        while (!work.empty()) {
            const std::size_t v = work.back();
            work.pop_back();
            for (std::size_t w : adj[v]) {
                if (!mark[w]) {
                    mark[w] = 1;
                    work.push_back(w);
                }
            }
        }
    };

    // fed_by_modeldata: nodes reachable from some ModelData node.
    std::vector<char> fed_by_modeldata(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (c.nodes[i].kind == NodeKind::ModelData) fed_by_modeldata[i] = 1;
    }
    closure(fed_by_modeldata, succ);
    // supports_usage: nodes from which some Usage node is reachable.
    std::vector<char> supports_usage(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (c.nodes[i].kind == NodeKind::Usage) supports_usage[i] = 1;
    }
    closure(supports_usage, pred);

    for (std::size_t i = 0; i < n; ++i) {
        const ConstellationNode& node = c.nodes[i];
        if (node.kind == NodeKind::Usage) {
            if (!has_incoming[i]) {
                warning("W201", "usage \"" + node.name + "\" has no incoming flow (unsupported)",
                        node.loc);
            }
        } else if (node.kind == NodeKind::Enabler && !fed_by_modeldata[i]) {
            warning("W202", "enabler \"" + node.name + "\" consumes no models or data", node.loc);
        } else if (!supports_usage[i]) {
            warning("W202",
                    node_kind_label(node.kind) + " \"" + node.name +
                        "\" is not referenced by any usage slice",
                    node.loc);
        }
    }

    // W203: one per unreported characteristic, C1..C14 order.
    for (CharacteristicId ch : all_characteristics()) {
        if (!is_reported(d, ch)) {
            warning("W203",
                    "characteristic " + characteristic_code(ch) + " (" +
                        characteristic_title(ch) + ") is not reported",
                    SourceLocation{});
        }
    }

    sort_diagnostics(out);
    return out;
}

}  // namespace twindesc
