#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twindesc/diagnostics.hpp"

namespace twindesc {

// Thrown on precondition violations (unknown usage, empty name, ...).
class Error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The fourteen characteristics of a DT description, C1..C14.
// Declaration order is the total ordering used for all deterministic output.
enum class CharacteristicId {
    SystemUnderStudy,        // C1
    ActingComponents,        // C2
    SensingComponents,       // C3
    Multiplicities,          // C4
    DataTransmitted,         // C5
    InsightsActions,         // C6
    Usages,                  // C7
    Enablers,                // C8
    ModelsAndData,           // C9
    Constellation,           // C10
    TimeScale,               // C11
    FidelityConsiderations,  // C12
    LifecycleStages,         // C13
    Evolution,               // C14
};

inline constexpr int kCharacteristicCount = 14;

const std::array<CharacteristicId, kCharacteristicCount>& all_characteristics();
int characteristic_number(CharacteristicId c);         // 1..14
std::string characteristic_code(CharacteristicId c);   // "C1".."C14"
std::string characteristic_title(CharacteristicId c);  // "System-under-Study", ...
std::optional<CharacteristicId> characteristic_from_code(std::string_view code);

// Tri-state reporting status. Absent only ever arises from an explicit
// `none` statement in the source; missing blocks map to Unreported.
enum class Presence { Present, Absent, Unreported };

enum class TimeScale { SlowerThanRealTime, RealTime, FasterThanRealTime, Unreported };
enum class UsageMode { Historical, Streaming, Both, Unreported };
enum class NodeKind { ModelData, Enabler, Usage };
enum class ChannelDirection { Data, Insight, AutomaticAction, AgentAction };
enum class TransferMode { Automatic, Manual };

std::string to_string(Presence p);
std::string time_scale_keyword(TimeScale t);  // "slower" | "real_time" | "faster"
std::string time_scale_label(TimeScale t);    // "slower than real-time", ...
std::string usage_mode_keyword(UsageMode m);  // "historical" | "streaming" | "both"
std::string node_kind_label(NodeKind k);      // "model/data" | "enabler" | "usage"

// C1: scope of the system-under-study.
struct SusScope {
    std::optional<std::string> system;
    std::optional<std::string> environment;
    std::vector<std::string> agents;
    bool operator==(const SusScope&) const = default;
};

// A named acting or sensing component (C2/C3).
struct Component {
    std::string name;
    SourceLocation loc{};

    bool operator==(const Component& o) const { return name == o.name; }
};

// C4: how many DT instances face how many SUS entities.
struct DtInstances {
    enum class Kind { PerUsage, Single, Count };
    Kind kind = Kind::Single;
    int count = 0;  // Kind::Count only
    bool operator==(const DtInstances&) const = default;
};

struct Multiplicity {
    std::optional<int> sus_entities;  // positive
    std::optional<DtInstances> dt_instances;
    std::optional<std::string> note;
    bool operator==(const Multiplicity&) const = default;
};

// One item of the C5/C6 information connection.
struct ChannelItem {
    std::string name;
    ChannelDirection direction = ChannelDirection::Data;
    std::optional<TransferMode> transfer;  // Data items only
    TimeScale time_scale = TimeScale::Unreported;
    std::optional<std::string> description;
    SourceLocation loc{};

    bool operator==(const ChannelItem& o) const {
        return name == o.name && direction == o.direction && transfer == o.transfer &&
               time_scale == o.time_scale && description == o.description;
    }
};

// C7-C10 graph node. mode/lifecycles/fidelity_note are meaningful for
// usages only; declared_as_model records the `model` vs `datum` keyword
// for ModelData nodes (rendering only).
struct ConstellationNode {
    std::string name;
    NodeKind kind = NodeKind::ModelData;
    TimeScale time_scale = TimeScale::Unreported;
    UsageMode mode = UsageMode::Unreported;
    std::vector<std::string> lifecycles;  // deduplicated, declaration order
    std::optional<std::string> fidelity_note;
    bool declared_as_model = false;
    SourceLocation loc{};

    bool operator==(const ConstellationNode& o) const {
        return name == o.name && kind == o.kind && time_scale == o.time_scale &&
               mode == o.mode && lifecycles == o.lifecycles &&
               fidelity_note == o.fidelity_note && declared_as_model == o.declared_as_model;
    }
};

struct FlowEdge {
    std::string source;
    std::string target;
    SourceLocation loc{};

    bool operator==(const FlowEdge& o) const {
        return source == o.source && target == o.target;
    }
};

// C10: layered directed graph of usages, enablers, and models/data.
struct Constellation {
    std::vector<ConstellationNode> nodes;  // declaration order, names unique
    std::vector<FlowEdge> edges;           // declaration order, no duplicates

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    const ConstellationNode* find(std::string_view name) const;
    std::size_t node_index(std::string_view name) const;  // npos if absent
    bool empty() const { return nodes.empty() && edges.empty(); }

    bool operator==(const Constellation&) const = default;
};

// Backward-closure subset of a constellation supporting one usage.
struct Slice {
    std::string usage;
    std::vector<std::string> nodes;  // constellation declaration order
    std::vector<FlowEdge> edges;     // induced, constellation edge order

    bool contains(std::string_view name) const;
    bool operator==(const Slice&) const = default;
};

struct UsageRef {
    std::string usage;
    SourceLocation loc{};

    bool operator==(const UsageRef& o) const { return usage == o.usage; }
};

// C13: one life-cycle stage and the usages it offers.
struct LifecycleStage {
    std::string stage;
    std::vector<UsageRef> usages;
    SourceLocation loc{};

    bool operator==(const LifecycleStage& o) const {
        return stage == o.stage && usages == o.usages;
    }
};

// C12: free-text fidelity consideration for one usage.
struct FidelityNote {
    std::string usage;
    std::string note;
    SourceLocation loc{};

    bool operator==(const FidelityNote& o) const {
        return usage == o.usage && note == o.note;
    }
};

// Complete parsed record of one DT report across C1..C14.
//
// The *_block_present bits distinguish a block that appeared empty in the
// source (reported) from a block that never appeared (unreported); the
// explicit-none flags record `automatic none` statements (the only path
// to Presence::Absent).
struct DtDescription {
    std::string name;
    std::optional<SusScope> sus;                           // C1
    std::optional<std::vector<Component>> acting;          // C2
    std::optional<std::vector<Component>> sensing;         // C3
    std::optional<Multiplicity> multiplicity;              // C4
    std::vector<ChannelItem> channels;                     // C5/C6; data, then insights, then actions
    bool data_block_present = false;
    bool insights_block_present = false;
    bool actions_block_present = false;
    bool automatic_data_none = false;
    bool automatic_actions_none = false;
    Constellation constellation;                           // C7-C10; empty = unreported
    std::vector<FidelityNote> fidelity_notes;              // C12
    std::vector<LifecycleStage> lifecycle_stages;          // C13
    std::optional<std::vector<std::string>> evolution;     // C14

    bool operator==(const DtDescription&) const = default;
};

struct Completeness {
    std::set<CharacteristicId> reported;
    int score = 0;  // |reported|
    bool operator==(const Completeness&) const = default;
};

// A characteristic is reported iff its block appeared in the source; empty
// blocks count, omitted blocks do not.
Completeness completeness(const DtDescription& d);
bool is_reported(const DtDescription& d, CharacteristicId c);

Presence presence_of_automatic_data(const DtDescription& d);
Presence presence_of_automatic_actions(const DtDescription& d);

// C13 stages in declaration order; falls back to first-occurrence stages
// from usage-level `lifecycle:` attributes when no top-level block exists.
std::vector<LifecycleStage> effective_lifecycle(const DtDescription& d);

}  // namespace twindesc
