#include "twindesc/model.hpp"

#include <algorithm>

namespace twindesc {

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        const int la = a.location ? a.location->line : 0;
        const int lb = b.location ? b.location->line : 0;
        if (la != lb) return la < lb;
        return a.code < b.code;
    });
}

std::string to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Info: return "info";
    }
    return "error";
}

const std::array<CharacteristicId, kCharacteristicCount>& all_characteristics() {
    static const std::array<CharacteristicId, kCharacteristicCount> all = {
        CharacteristicId::SystemUnderStudy,   CharacteristicId::ActingComponents,
        CharacteristicId::SensingComponents,  CharacteristicId::Multiplicities,
        CharacteristicId::DataTransmitted,    CharacteristicId::InsightsActions,
        CharacteristicId::Usages,             CharacteristicId::Enablers,
        CharacteristicId::ModelsAndData,      CharacteristicId::Constellation,
        CharacteristicId::TimeScale,          CharacteristicId::FidelityConsiderations,
        CharacteristicId::LifecycleStages,    CharacteristicId::Evolution,
    };
    return all;
}

int characteristic_number(CharacteristicId c) {
    return static_cast<int>(c) + 1;
}

std::string characteristic_code(CharacteristicId c) {
    return "C" + std::to_string(characteristic_number(c));
}

std::string characteristic_title(CharacteristicId c) {
    switch (c) {
        case CharacteristicId::SystemUnderStudy: return "System-under-Study";
        case CharacteristicId::ActingComponents: return "Acting Components";
        case CharacteristicId::SensingComponents: return "Sensing Components";
        case CharacteristicId::Multiplicities: return "Multiplicities";
        case CharacteristicId::DataTransmitted: return "Data Transmitted";
        case CharacteristicId::InsightsActions: return "Insights and Actions";
        case CharacteristicId::Usages: return "Usages";
        case CharacteristicId::Enablers: return "Enablers";
        case CharacteristicId::ModelsAndData: return "Models and Data";
        case CharacteristicId::Constellation: return "Constellation";
        case CharacteristicId::TimeScale: return "Time-Scales";
        case CharacteristicId::FidelityConsiderations: return "Fidelity Considerations";
        case CharacteristicId::LifecycleStages: return "Life-cycle Stages";
        case CharacteristicId::Evolution: return "Evolution";
    }
    return "";
}

std::optional<CharacteristicId> characteristic_from_code(std::string_view code) {
    if (code.size() < 2 || code.size() > 3 || (code[0] != 'C' && code[0] != 'c')) {
        return std::nullopt;
    }
    int n = 0;
    for (std::size_t i = 1; i < code.size(); ++i) {
        if (code[i] < '0' || code[i] > '9') return std::nullopt;
        n = n * 10 + (code[i] - '0');
    }
    if (n < 1 || n > kCharacteristicCount) return std::nullopt;
    return static_cast<CharacteristicId>(n - 1);
}

std::string to_string(Presence p) {
    switch (p) {
        case Presence::Present: return "present";
        case Presence::Absent: return "absent";
        case Presence::Unreported: return "unreported";
    }
    return "";
}

std::string time_scale_keyword(TimeScale t) {
    switch (t) {
        case TimeScale::SlowerThanRealTime: return "slower";
        case TimeScale::RealTime: return "real_time";
        case TimeScale::FasterThanRealTime: return "faster";
        case TimeScale::Unreported: return "";
    }
    return "";
}

std::string time_scale_label(TimeScale t) {
    switch (t) {
        case TimeScale::SlowerThanRealTime: return "slower than real-time";
        case TimeScale::RealTime: return "real-time";
        case TimeScale::FasterThanRealTime: return "faster than real-time";
        case TimeScale::Unreported: return "unreported";
    }
    return "";
}

std::string usage_mode_keyword(UsageMode m) {
    switch (m) {
        case UsageMode::Historical: return "historical";
        case UsageMode::Streaming: return "streaming";
        case UsageMode::Both: return "both";
        case UsageMode::Unreported: return "";
    }
    return "";
}

std::string node_kind_label(NodeKind k) {
    switch (k) {
        case NodeKind::ModelData: return "model/data";
        case NodeKind::Enabler: return "enabler";
        case NodeKind::Usage: return "usage";
    }
    return "";
}

const ConstellationNode* Constellation::find(std::string_view name) const {
    for (const auto& n : nodes) {
        if (n.name == name) return &n;
    }
    return nullptr;
}

std::size_t Constellation::node_index(std::string_view name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].name == name) return i;
    }
    return npos;
}

bool Slice::contains(std::string_view name) const {
    return std::find(nodes.begin(), nodes.end(), name) != nodes.end();
}

bool is_reported(const DtDescription& d, CharacteristicId c) {
    const auto& nodes = d.constellation.nodes;
    auto any_node = [&](auto pred) { return std::any_of(nodes.begin(), nodes.end(), pred); };
    switch (c) {
        case CharacteristicId::SystemUnderStudy: return d.sus.has_value();
        case CharacteristicId::ActingComponents: return d.acting.has_value();
        case CharacteristicId::SensingComponents: return d.sensing.has_value();
        case CharacteristicId::Multiplicities: return d.multiplicity.has_value();
        case CharacteristicId::DataTransmitted: return d.data_block_present;
        case CharacteristicId::InsightsActions:
            return d.insights_block_present || d.actions_block_present;
        case CharacteristicId::Usages:
            return any_node([](const auto& n) { return n.kind == NodeKind::Usage; });
        case CharacteristicId::Enablers:
            return any_node([](const auto& n) { return n.kind == NodeKind::Enabler; });
        case CharacteristicId::ModelsAndData:
            return any_node([](const auto& n) { return n.kind == NodeKind::ModelData; });
        case CharacteristicId::Constellation: return !d.constellation.edges.empty();
        case CharacteristicId::TimeScale:
            // No block of its own; reported through explicit annotations.
            return any_node([](const auto& n) { return n.time_scale != TimeScale::Unreported; }) ||
                   std::any_of(d.channels.begin(), d.channels.end(),
                               [](const auto& ch) { return ch.time_scale != TimeScale::Unreported; });
        case CharacteristicId::FidelityConsiderations:
            return !d.fidelity_notes.empty() ||
                   any_node([](const auto& n) { return n.fidelity_note.has_value(); });
        case CharacteristicId::LifecycleStages:
            return !d.lifecycle_stages.empty() ||
                   any_node([](const auto& n) { return !n.lifecycles.empty(); });
        case CharacteristicId::Evolution: return d.evolution.has_value();
    }
    return false;
}

Completeness completeness(const DtDescription& d) {
    Completeness result;
    for (CharacteristicId c : all_characteristics()) {
        if (is_reported(d, c)) result.reported.insert(c);
    }
    result.score = static_cast<int>(result.reported.size());
    return result;
}

Presence presence_of_automatic_data(const DtDescription& d) {
    for (const auto& ch : d.channels) {
        if (ch.direction == ChannelDirection::Data && ch.transfer == TransferMode::Automatic) {
            return Presence::Present;
        }
    }
    if (d.automatic_data_none) return Presence::Absent;
    return Presence::Unreported;
}

Presence presence_of_automatic_actions(const DtDescription& d) {
    for (const auto& ch : d.channels) {
        if (ch.direction == ChannelDirection::AutomaticAction) return Presence::Present;
    }
    if (d.automatic_actions_none) return Presence::Absent;
    return Presence::Unreported;
}

std::vector<LifecycleStage> effective_lifecycle(const DtDescription& d) {
    if (!d.lifecycle_stages.empty()) return d.lifecycle_stages;
    // Derive first-occurrence stage order from usage-level attributes.
    std::vector<LifecycleStage> stages;
    for (const auto& n : d.constellation.nodes) {
        if (n.kind != NodeKind::Usage) continue;
        for (const auto& stage : n.lifecycles) {
            auto it = std::find_if(stages.begin(), stages.end(),
                                   [&](const LifecycleStage& s) { return s.stage == stage; });
            if (it == stages.end()) {
                stages.push_back(LifecycleStage{stage, {UsageRef{n.name}}, {}});
            } else {
                it->usages.push_back(UsageRef{n.name});
            }
        }
    }
    return stages;
}

}  // namespace twindesc
