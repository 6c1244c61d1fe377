#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twindesc/model.hpp"

namespace twindesc {

// How the AAS accommodates a framework characteristic. The assignment is
// static and total: Explicit={C1,C4,C9,C10}, Partial={C5,C6,C13,C14},
// Implicit={C2,C3,C7,C8}, NotSupported={C11,C12}.
enum class SupportLevel { Explicit, Partial, Implicit, NotSupported };

SupportLevel support_level(CharacteristicId c);
std::string to_string(SupportLevel s);  // "explicit" | "partial" | "implicit" | "not supported"

enum class AasValueType { Text, Number, Boolean };

struct AasProperty {
    std::string id_short;
    AasValueType value_type = AasValueType::Text;
    std::optional<std::string> value;
    std::string description;
    bool operator==(const AasProperty&) const = default;
};

struct AasOperation {
    std::string id_short;
    std::string description;
    bool operator==(const AasOperation&) const = default;
};

struct AasEvent {
    std::string id_short;
    std::string description;
    bool operator==(const AasEvent&) const = default;
};

struct AasSubmodel {
    std::string id_short;
    CharacteristicId source_characteristic = CharacteristicId::SystemUnderStudy;
    std::vector<AasProperty> properties;
    std::vector<AasOperation> operations;
    std::vector<AasEvent> events;
    std::vector<std::string> references;  // target submodel id_shorts
    bool operator==(const AasSubmodel&) const = default;
};

struct AasView {
    std::string id_short;
    std::vector<std::string> contained;  // submodel id_shorts
    bool operator==(const AasView&) const = default;
};

struct AasHeader {
    std::string shell_id;
    std::string asset_id;
    std::string asset_name;
    bool operator==(const AasHeader&) const = default;
};

struct MappingEntry {
    CharacteristicId characteristic = CharacteristicId::SystemUnderStudy;
    SupportLevel support = SupportLevel::NotSupported;
    std::vector<std::string> elements;  // produced element ids
    std::string annotation;
    bool operator==(const MappingEntry&) const = default;
};

// Generated Asset Administration Shell skeleton. mapping_report covers
// all fourteen characteristics exactly once, in C1..C14 order.
struct AasDocument {
    AasHeader header;
    std::vector<AasSubmodel> submodels;
    std::vector<AasView> views;
    std::optional<std::string> derived_from;
    std::vector<MappingEntry> mapping_report;
    bool operator==(const AasDocument&) const = default;
};

// Lower-camel-cases `name` over [A-Za-z0-9_] words, prefixing an
// underscore when the result would start with a digit. Throws Error on an
// empty name.
std::string sanitize_id_short(const std::string& name);

// sanitize_id_short plus collision resolution by numeric suffix in
// allocation (declaration) order: "a b", "a-b" -> "aB", "aB2".
class IdShortPool {
public:
    std::string allocate(const std::string& name);
    // Same collision policy over an id used verbatim (for fixed ids and
    // prefixed forms that must keep their casing).
    std::string allocate_raw(const std::string& id);

private:
    std::map<std::string, int> suffix_;
    std::set<std::string> used_;
};

// Transform a description into an AAS skeleton. Throws Error if the
// description carries validation errors.
AasDocument map_to_aas(const DtDescription& d);

// Canonical JSON: keys sorted, 2-space indent, LF endings, arrays in
// document order, trailing newline; byte-identical across runs.
std::string serialize_aas(const AasDocument& doc);

}  // namespace twindesc
