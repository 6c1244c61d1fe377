#include "twindesc/aas.hpp"

#include <algorithm>

#include <json.hpp>

#include "twindesc/analysis.hpp"
#include "twindesc/constellation.hpp"

namespace twindesc {

namespace {

using nlohmann::json;

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

char to_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

char to_upper(char c) {
    return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
}

std::string value_type_name(AasValueType t) {
    switch (t) {
        case AasValueType::Text: return "text";
        case AasValueType::Number: return "number";
        case AasValueType::Boolean: return "boolean";
    }
    return "text";
}

std::string support_level_json(SupportLevel s) {
    switch (s) {
        case SupportLevel::Explicit: return "explicit";
        case SupportLevel::Partial: return "partial";
        case SupportLevel::Implicit: return "implicit";
        case SupportLevel::NotSupported: return "notSupported";
    }
    return "";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

SupportLevel support_level(CharacteristicId c) {
    switch (c) {
        case CharacteristicId::SystemUnderStudy:
        case CharacteristicId::Multiplicities:
        case CharacteristicId::ModelsAndData:
        case CharacteristicId::Constellation:
            return SupportLevel::Explicit;
        case CharacteristicId::DataTransmitted:
        case CharacteristicId::InsightsActions:
        case CharacteristicId::LifecycleStages:
        case CharacteristicId::Evolution:
            return SupportLevel::Partial;
        case CharacteristicId::ActingComponents:
        case CharacteristicId::SensingComponents:
        case CharacteristicId::Usages:
        case CharacteristicId::Enablers:
            return SupportLevel::Implicit;
        case CharacteristicId::TimeScale:
        case CharacteristicId::FidelityConsiderations:
            return SupportLevel::NotSupported;
    }
    return SupportLevel::NotSupported;
}

std::string to_string(SupportLevel s) {
    switch (s) {
        case SupportLevel::Explicit: return "explicit";
        case SupportLevel::Partial: return "partial";
        case SupportLevel::Implicit: return "implicit";
        case SupportLevel::NotSupported: return "not supported";
    }
    return "";
}

std::string sanitize_id_short(const std::string& name) {
    if (name.empty()) throw Error("cannot derive an id_short from an empty name");
    std::vector<std::string> words;
    std::string word;
    for (char c : name) {
        if (is_word_char(c)) {
            word.push_back(c);
        } else if (!word.empty()) {
            words.push_back(word);
            word.clear();
        }
    }
    if (!word.empty()) words.push_back(word);

    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::string w = words[i];
        for (char& c : w) c = to_lower(c);
        if (i > 0) w[0] = to_upper(w[0]);
        out += w;
    }
    if (out.empty()) out = "_";
    if (out[0] >= '0' && out[0] <= '9') out.insert(out.begin(), '_');
    return out;
}

std::string IdShortPool::allocate(const std::string& name) {
    return allocate_raw(sanitize_id_short(name));
}

std::string IdShortPool::allocate_raw(const std::string& id) {
    if (used_.insert(id).second) return id;
    int& n = suffix_[id];
    if (n < 2) n = 2;
    while (true) {
        const std::string candidate = id + std::to_string(n);
        ++n;
        if (used_.insert(candidate).second) return candidate;
    }
}

namespace {

struct MappingState {
    std::vector<std::string> elements[kCharacteristicCount];
    void add(CharacteristicId c, std::string element) {
        elements[static_cast<int>(c)].push_back(std::move(element));
    }
};

}  // namespace

AasDocument map_to_aas(const DtDescription& d) {
    if (has_errors(validate(d))) {
        throw Error("description \"" + d.name + "\" has validation errors and cannot be mapped");
    }

    AasDocument doc;
    MappingState state;
    IdShortPool submodel_ids;

    const std::string base = d.name.empty() ? std::string("unnamed") : sanitize_id_short(d.name);
    doc.header.shell_id = base + "Shell";
    doc.header.asset_id = base + "Asset";
    doc.header.asset_name = d.name;

    // C1 + C4: documentation submodel.
    if (d.sus || d.multiplicity) {
        AasSubmodel sm;
        sm.id_short = submodel_ids.allocate("documentation");
        sm.source_characteristic = CharacteristicId::SystemUnderStudy;
        IdShortPool prop_ids;
        if (d.sus) {
            if (d.sus->system) {
                sm.properties.push_back(AasProperty{prop_ids.allocate("system"),
                                                    AasValueType::Text, d.sus->system,
                                                    "Scope of the system under study."});
            }
            if (d.sus->environment) {
                sm.properties.push_back(AasProperty{prop_ids.allocate("environment"),
                                                    AasValueType::Text, d.sus->environment,
                                                    "Context surrounding the system."});
            }
            for (const auto& agent : d.sus->agents) {
                sm.properties.push_back(AasProperty{prop_ids.allocate("agent"),
                                                    AasValueType::Text, agent,
                                                    "Agent interacting with the system."});
            }
            state.add(CharacteristicId::SystemUnderStudy, sm.id_short);
        }
        if (d.multiplicity) {
            std::vector<std::string> parts;
            if (d.multiplicity->sus_entities) {
                parts.push_back("sus_entities=" + std::to_string(*d.multiplicity->sus_entities));
            }
            if (d.multiplicity->dt_instances) {
                switch (d.multiplicity->dt_instances->kind) {
                    case DtInstances::Kind::PerUsage:
                        parts.push_back("dt_instances=per_usage");
                        break;
                    case DtInstances::Kind::Single:
                        parts.push_back("dt_instances=single");
                        break;
                    case DtInstances::Kind::Count:
                        parts.push_back("dt_instances=" +
                                        std::to_string(d.multiplicity->dt_instances->count));
                        break;
                }
            }
            if (d.multiplicity->note) parts.push_back(*d.multiplicity->note);
            const std::string id = prop_ids.allocate("multiplicity");
            sm.properties.push_back(AasProperty{id, AasValueType::Text, join(parts, "; "),
                                                "SUS and DT instance multiplicity."});
            state.add(CharacteristicId::Multiplicities, sm.id_short + "." + id);
        }
        doc.submodels.push_back(std::move(sm));
    }

    // C2/C3: acting_/sensing_ prefixed submodels.
    if (d.acting) {
        for (const auto& comp : *d.acting) {
            AasSubmodel sm;
            sm.id_short = submodel_ids.allocate_raw("acting_" + sanitize_id_short(comp.name));
            sm.source_characteristic = CharacteristicId::ActingComponents;
            state.add(CharacteristicId::ActingComponents, sm.id_short);
            doc.submodels.push_back(std::move(sm));
        }
    }
    if (d.sensing) {
        for (const auto& comp : *d.sensing) {
            AasSubmodel sm;
            sm.id_short = submodel_ids.allocate_raw("sensing_" + sanitize_id_short(comp.name));
            sm.source_characteristic = CharacteristicId::SensingComponents;
            state.add(CharacteristicId::SensingComponents, sm.id_short);
            doc.submodels.push_back(std::move(sm));
        }
    }

    // C5: typed properties for transmitted data.
    std::size_t data_count = 0;
    for (const auto& ch : d.channels) {
        if (ch.direction == ChannelDirection::Data) ++data_count;
    }
    if (data_count > 0) {
        AasSubmodel sm;
        sm.id_short = submodel_ids.allocate("data transmitted");
        sm.source_characteristic = CharacteristicId::DataTransmitted;
        IdShortPool prop_ids;
        for (const auto& ch : d.channels) {
            if (ch.direction != ChannelDirection::Data) continue;
            std::string desc = ch.description.value_or(
                ch.transfer == TransferMode::Automatic
                    ? "Transmitted automatically from the SUS to the DT."
                    : "Transmitted manually from the SUS to the DT.");
            sm.properties.push_back(
                AasProperty{prop_ids.allocate(ch.name), AasValueType::Text, std::nullopt, desc});
        }
        state.add(CharacteristicId::DataTransmitted, sm.id_short);
        doc.submodels.push_back(std::move(sm));
    }

    // C6: events for insights, operations for agent actions.
    std::size_t insight_count = 0, agent_count = 0, auto_action_count = 0;
    for (const auto& ch : d.channels) {
        if (ch.direction == ChannelDirection::Insight) ++insight_count;
        if (ch.direction == ChannelDirection::AgentAction) ++agent_count;
        if (ch.direction == ChannelDirection::AutomaticAction) ++auto_action_count;
    }
    if (insight_count + agent_count > 0) {
        AasSubmodel sm;
        sm.id_short = submodel_ids.allocate("insights and actions");
        sm.source_characteristic = CharacteristicId::InsightsActions;
        IdShortPool member_ids;
        for (const auto& ch : d.channels) {
            if (ch.direction == ChannelDirection::Insight) {
                sm.events.push_back(AasEvent{
                    member_ids.allocate(ch.name),
                    ch.description.value_or("Insight transmitted from the DT towards the SUS.")});
            }
        }
        for (const auto& ch : d.channels) {
            if (ch.direction == ChannelDirection::AgentAction) {
                sm.operations.push_back(AasOperation{
                    member_ids.allocate(ch.name),
                    ch.description.value_or("Action performed by an agent on the SUS.")});
            }
        }
        state.add(CharacteristicId::InsightsActions, sm.id_short);
        doc.submodels.push_back(std::move(sm));
    }

    // C7: capability tags for usages.
    const Constellation& c = d.constellation;
    const bool any_usage = std::any_of(c.nodes.begin(), c.nodes.end(), [](const auto& n) {
        return n.kind == NodeKind::Usage;
    });
    if (any_usage) {
        AasSubmodel sm;
        sm.id_short = submodel_ids.allocate("capabilities");
        sm.source_characteristic = CharacteristicId::Usages;
        IdShortPool prop_ids;
        for (const auto& node : c.nodes) {
            if (node.kind != NodeKind::Usage) continue;
            std::optional<std::string> value;
            if (node.mode != UsageMode::Unreported) value = usage_mode_keyword(node.mode);
            sm.properties.push_back(AasProperty{prop_ids.allocate(node.name), AasValueType::Text,
                                                value, "Capability tag for one usage of the DT."});
        }
        state.add(CharacteristicId::Usages, sm.id_short);
        doc.submodels.push_back(std::move(sm));
    }

    // C8 + C9: one submodel per enabler and per model/data node.
    std::map<std::string, std::string> node_submodel;  // node name -> submodel id
    for (const auto& node : c.nodes) {
        if (node.kind == NodeKind::Enabler) {
            AasSubmodel sm;
            sm.id_short = submodel_ids.allocate(node.name);
            sm.source_characteristic = CharacteristicId::Enablers;
            sm.operations.push_back(AasOperation{
                "process", "Consumes models and data to enable the usages it supports."});
            node_submodel.emplace(node.name, sm.id_short);
            state.add(CharacteristicId::Enablers, sm.id_short);
            doc.submodels.push_back(std::move(sm));
        } else if (node.kind == NodeKind::ModelData) {
            AasSubmodel sm;
            sm.id_short = submodel_ids.allocate(node.name);
            sm.source_characteristic = CharacteristicId::ModelsAndData;
            sm.properties.push_back(AasProperty{"currentValue", AasValueType::Number, std::nullopt,
                                                "Measured or stored value of \"" + node.name +
                                                    "\"."});
            node_submodel.emplace(node.name, sm.id_short);
            state.add(CharacteristicId::ModelsAndData, sm.id_short);
            doc.submodels.push_back(std::move(sm));
        }
    }

    // C10: references mirror flows whose endpoints both generated
    // submodels; one view per usage slice.
    std::size_t reference_count = 0;
    for (const auto& e : c.edges) {
        auto s = node_submodel.find(e.source);
        auto t = node_submodel.find(e.target);
        if (s == node_submodel.end() || t == node_submodel.end()) continue;
        for (auto& sm : doc.submodels) {
            if (sm.id_short == s->second) {
                sm.references.push_back(t->second);
                ++reference_count;
                break;
            }
        }
    }
    IdShortPool view_ids;
    for (const Slice& slice : enumerate_slices(c)) {
        AasView view;
        view.id_short = view_ids.allocate(slice.usage + " Slice");
        for (const auto& name : slice.nodes) {
            auto it = node_submodel.find(name);
            if (it != node_submodel.end()) view.contained.push_back(it->second);
        }
        state.add(CharacteristicId::Constellation, view.id_short);
        doc.views.push_back(std::move(view));
    }

    // C14: derivedFrom stays empty; the narrative only survives in the
    // mapping report.
    doc.derived_from = std::nullopt;

    // Counts feeding the not-supported annotations.
    std::size_t time_scale_count = 0;
    for (const auto& node : c.nodes) {
        if (node.time_scale != TimeScale::Unreported) ++time_scale_count;
    }
    for (const auto& ch : d.channels) {
        if (ch.time_scale != TimeScale::Unreported) ++time_scale_count;
    }
    std::size_t fidelity_count = d.fidelity_notes.size();
    for (const auto& node : c.nodes) {
        if (node.fidelity_note) ++fidelity_count;
    }

    const Completeness comp = completeness(d);
    auto reported = [&](CharacteristicId ch) { return comp.reported.count(ch) > 0; };

    for (CharacteristicId ch : all_characteristics()) {
        MappingEntry entry;
        entry.characteristic = ch;
        entry.support = support_level(ch);
        entry.elements = state.elements[static_cast<int>(ch)];
        std::string note;
        switch (ch) {
            case CharacteristicId::SystemUnderStudy:
                note = reported(ch)
                           ? "Scoped as text properties (system, environment, agents) on the "
                             "documentation submodel; complex assets can represent the SUS "
                             "hierarchically."
                           : "Not reported; no documentation content was generated.";
                break;
            case CharacteristicId::Multiplicities:
                note = std::string(reported(ch)
                                       ? "Recorded as the multiplicity property on the "
                                         "documentation submodel. "
                                       : "Not reported. ") +
                       "An AAS maps to exactly one asset; a composite asset can split the SUS "
                       "into multiple entities.";
                break;
            case CharacteristicId::ModelsAndData:
                note = reported(ch)
                           ? "Each model or data node is represented as its own submodel with a "
                             "value-bearing property."
                           : "Not reported; no model or data submodels were generated.";
                break;
            case CharacteristicId::Constellation:
                note = reported(ch)
                           ? "Flows are mirrored as " + std::to_string(reference_count) +
                                 " reference(s) between generated submodels; each usage slice is "
                                 "projected as a view."
                           : "Not reported; no references between submodels were generated.";
                break;
            case CharacteristicId::DataTransmitted:
                note = std::string(reported(ch) ? std::to_string(data_count) +
                                                      " data item(s) mapped to typed properties. "
                                                : "Not reported. ") +
                       "The high-level meaning of transmitted data is only partially captured by "
                       "typing and descriptions.";
                break;
            case CharacteristicId::InsightsActions:
                note = std::string(reported(ch)
                                       ? std::to_string(insight_count) + " insight(s) mapped to "
                                             "events and " + std::to_string(agent_count) +
                                             " agent action(s) mapped to operations. "
                                       : "Not reported. ") +
                       "The high-level intent of insights and actions is not captured.";
                if (auto_action_count > 0) {
                    note += " " + std::to_string(auto_action_count) +
                            " automatic action(s) are recorded in this report only.";
                }
                break;
            case CharacteristicId::LifecycleStages: {
                std::vector<std::string> stages;
                for (const auto& stage : effective_lifecycle(d)) stages.push_back(stage.stage);
                note = std::string(reported(ch)
                                       ? "Declared stages: " + join(stages, ", ") + ". "
                                       : "Not reported. ") +
                       "RAMI 4.0 breaks life-cycles into four stages (asset type development, "
                       "asset type usage, asset instance production, asset instance usage); the "
                       "per-stage usage lists are not explicitly connected.";
                break;
            }
            case CharacteristicId::Evolution:
                note = std::string(reported(ch)
                                       ? "A " + std::to_string(d.evolution->size()) +
                                             "-step development narrative was reported. "
                                       : "Not reported. ") +
                       "Shell versioning is possible through the derivedFrom relationship, left "
                       "empty here; the narrative itself is not representable.";
                break;
            case CharacteristicId::ActingComponents:
                note = std::string(reported(ch) ? "Mapped to acting_-prefixed submodels. "
                                                : "Not reported. ") +
                       "The AAS does not specify whether the components were added or modified "
                       "for the operation of the DT.";
                break;
            case CharacteristicId::SensingComponents:
                note = std::string(reported(ch) ? "Mapped to sensing_-prefixed submodels. "
                                                : "Not reported. ") +
                       "The AAS does not specify whether the components were added or modified "
                       "for the operation of the DT.";
                break;
            case CharacteristicId::Usages:
                note = std::string(reported(ch)
                                       ? "Usages are emitted as capability-tag properties. "
                                       : "Not reported. ") +
                       "AAS capabilities could be interpreted to provide a tagging system for "
                       "usages.";
                break;
            case CharacteristicId::Enablers:
                note = std::string(reported(ch)
                                       ? "Each enabler became a submodel carrying an operation. "
                                       : "Not reported. ") +
                       "Submodel operations stand in for the enabling behaviour.";
                break;
            case CharacteristicId::TimeScale:
                note = "Time-scales are not considered in the AAS framework; " +
                       std::to_string(time_scale_count) +
                       " declared time-scale annotation(s) were omitted from the document body.";
                break;
            case CharacteristicId::FidelityConsiderations:
                note = "The precision of data values is not considered in the AAS framework; " +
                       std::to_string(fidelity_count) +
                       " fidelity note(s) were omitted from the document body.";
                break;
        }
        entry.annotation = note;
        doc.mapping_report.push_back(std::move(entry));
    }

    return doc;
}

std::string serialize_aas(const AasDocument& doc) {
    json root;
    root["twindescAasVersion"] = "1";
    root["derivedFrom"] = doc.derived_from ? json(*doc.derived_from) : json(nullptr);
    root["header"] = {{"assetId", doc.header.asset_id},
                      {"assetName", doc.header.asset_name},
                      {"shellId", doc.header.shell_id}};

    json submodels = json::array();
    for (const auto& sm : doc.submodels) {
        json properties = json::array();
        for (const auto& p : sm.properties) {
            properties.push_back({{"description", p.description},
                                  {"idShort", p.id_short},
                                  {"value", p.value ? json(*p.value) : json(nullptr)},
                                  {"valueType", value_type_name(p.value_type)}});
        }
        json operations = json::array();
        for (const auto& op : sm.operations) {
            operations.push_back({{"description", op.description}, {"idShort", op.id_short}});
        }
        json events = json::array();
        for (const auto& ev : sm.events) {
            events.push_back({{"description", ev.description}, {"idShort", ev.id_short}});
        }
        submodels.push_back({{"events", events},
                             {"idShort", sm.id_short},
                             {"operations", operations},
                             {"properties", properties},
                             {"references", sm.references},
                             {"sourceCharacteristic",
                              characteristic_code(sm.source_characteristic)}});
    }
    root["submodels"] = submodels;

    json views = json::array();
    for (const auto& view : doc.views) {
        views.push_back({{"contained", view.contained}, {"idShort", view.id_short}});
    }
    root["views"] = views;

    json report = json::array();
    for (const auto& entry : doc.mapping_report) {
        report.push_back({{"annotation", entry.annotation},
                          {"characteristic", characteristic_code(entry.characteristic)},
                          {"elements", entry.elements},
                          {"support", support_level_json(entry.support)}});
    }
    root["mappingReport"] = report;

    return root.dump(2) + "\n";
}

}  // namespace twindesc
