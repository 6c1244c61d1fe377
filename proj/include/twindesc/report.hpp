#pragma once

#include <string>

#include "twindesc/model.hpp"

namespace twindesc {

struct ReportOptions {
    bool include_graph_link = false;      // C10 section links constellation.dot
    bool include_mapping_summary = false;  // appends an AAS support summary
};

// Markdown checklist report: classification banner, completeness score,
// then exactly fourteen C1..C14 sections with unreported ones flagged.
std::string render_report(const DtDescription& d, const ReportOptions& opts = {});

}  // namespace twindesc
