#pragma once

#include <string>

#include "twindesc/model.hpp"

namespace twindesc {

// One `.dtd` input. Lines are 1-based, split on LF; CR before LF is
// stripped so CRLF input parses identically.
struct SourceFile {
    std::string path;     // label used in diagnostics ("<stdin>" for pipes)
    std::string content;  // UTF-8
};

struct ParseResult {
    // Present iff diagnostics contain no Error.
    std::optional<DtDescription> description;
    std::vector<Diagnostic> diagnostics;  // source order
};

ParseResult parse(const SourceFile& src);

// Canonical, declaration-order-preserving text. For any parse result `d`,
// parse(render(d)) yields an equal description and zero diagnostics.
std::string render(const DtDescription& d);

}  // namespace twindesc
