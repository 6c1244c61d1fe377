#pragma once

#include <string>
#include <vector>

#include "twindesc/model.hpp"

namespace twindesc {

// Result of the digital-model / digital-shadow / digital-twin ladder.
struct Classification {
    enum class Kind { DigitalModel, DigitalShadow, DigitalTwin, Ambiguous, Inconsistent };

    Kind kind = Kind::Ambiguous;
    // Ambiguous only: two or more of the three ladder rungs, in ladder order.
    std::vector<Kind> candidates;

    bool operator==(const Classification&) const = default;
};

std::string to_string(Classification::Kind k);  // "Digital Model", ...
// Banner form: "Digital Shadow", "Ambiguous (Digital Shadow OR Digital Twin)", ...
std::string to_string(const Classification& c);

// Framework validation. Emits E101 (illegal flow shape), E102
// (faster-than-real-time on a channel item), E103 (lifecycle/fidelity
// reference to an unknown usage), E104 (automatic actions without
// automatic data), W201 (unsupported usage), W202 (enabler consuming no
// models/data, or node supporting no usage), W203 (one per unreported
// characteristic). Deterministically ordered by (line, code).
std::vector<Diagnostic> validate(const DtDescription& d);

// The nine-cell truth table over (automatic data, automatic actions).
// Unreported slots range over {Present, Absent}; Inconsistent outcomes are
// excluded from the candidate set; a singleton set collapses to its only
// member.
Classification classify_presences(Presence automatic_data, Presence automatic_actions);
Classification classify(const DtDescription& d);

// Declared mode of a usage, Unreported if undeclared. Throws Error if the
// name is not a declared usage.
UsageMode classify_usage_mode(const DtDescription& d, std::string_view usage);

}  // namespace twindesc
