#pragma once

#include <optional>
#include <string>
#include <vector>

namespace twindesc {

enum class Severity { Error, Warning, Info };

// 1-based position within a source file.
struct SourceLocation {
    int line = 0;
    int column = 0;
    bool operator==(const SourceLocation&) const = default;
};

// A parser or validator finding. Codes are a stable contract, see
// docs/diagnostics.md.
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::optional<SourceLocation> location;
    bool operator==(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diags);

// Stable sort by (line, code); diagnostics without a location sort first.
void sort_diagnostics(std::vector<Diagnostic>& diags);

std::string to_string(Severity s);

}  // namespace twindesc
