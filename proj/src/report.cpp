#include "twindesc/report.hpp"

#include <cctype>
#include <sstream>

#include "twindesc/aas.hpp"
#include "twindesc/analysis.hpp"
#include "twindesc/constellation.hpp"

namespace twindesc {

namespace {

constexpr const char* kUnreported = "⚠ unreported";

void render_channel_group(std::ostringstream& out, const DtDescription& d,
                          ChannelDirection dir, const char* prefix) {
    for (const auto& ch : d.channels) {
        if (ch.direction != dir) continue;
        out << "- " << prefix << ch.name;
        if (dir == ChannelDirection::Data) {
            out << (ch.transfer == TransferMode::Automatic ? " (automatic)" : " (manual)");
        }
        out << "\n";
    }
}

void render_time_scale_line(std::ostringstream& out, const DtDescription& d, TimeScale scale) {
    std::vector<std::string> members;
    for (const auto& ch : d.channels) {
        if (ch.time_scale == scale) members.push_back(ch.name);
    }
    for (const auto& n : d.constellation.nodes) {
        if (n.time_scale == scale) members.push_back(n.name);
    }
    if (members.empty()) return;
    out << "- ";
    std::string label = time_scale_label(scale);
    label[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
    out << label << ": ";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) out << ", ";
        out << members[i];
    }
    out << "\n";
}

std::string section_body(const DtDescription& d, CharacteristicId c,
                         const ReportOptions& opts) {
    std::ostringstream out;
    switch (c) {
        case CharacteristicId::SystemUnderStudy:
            if (d.sus->system) out << "- System: " << *d.sus->system << "\n";
            if (d.sus->environment) out << "- Environment: " << *d.sus->environment << "\n";
            for (const auto& agent : d.sus->agents) out << "- Agent: " << agent << "\n";
            break;
        case CharacteristicId::ActingComponents:
            for (const auto& comp : *d.acting) out << "- " << comp.name << "\n";
            break;
        case CharacteristicId::SensingComponents:
            for (const auto& comp : *d.sensing) out << "- " << comp.name << "\n";
            break;
        case CharacteristicId::Multiplicities:
            if (d.multiplicity->sus_entities) {
                out << "- SUS entities: " << *d.multiplicity->sus_entities << "\n";
            }
            if (d.multiplicity->dt_instances) {
                out << "- DT instances: ";
                switch (d.multiplicity->dt_instances->kind) {
                    case DtInstances::Kind::PerUsage: out << "one per usage"; break;
                    case DtInstances::Kind::Single: out << "a single instance"; break;
                    case DtInstances::Kind::Count:
                        out << d.multiplicity->dt_instances->count;
                        break;
                }
                out << "\n";
            }
            if (d.multiplicity->note) out << "- Note: " << *d.multiplicity->note << "\n";
            break;
        case CharacteristicId::DataTransmitted:
            if (d.automatic_data_none) out << "- Automatic: none\n";
            render_channel_group(out, d, ChannelDirection::Data, "");
            break;
        case CharacteristicId::InsightsActions:
            if (d.automatic_actions_none) out << "- Automatic actions: none\n";
            render_channel_group(out, d, ChannelDirection::Insight, "Insight: ");
            render_channel_group(out, d, ChannelDirection::AutomaticAction, "Automatic action: ");
            render_channel_group(out, d, ChannelDirection::AgentAction, "Agent action: ");
            break;
        case CharacteristicId::Usages:
            for (const auto& n : d.constellation.nodes) {
                if (n.kind != NodeKind::Usage) continue;
                out << "- " << n.name << " ("
                    << (n.mode == UsageMode::Unreported ? "mode unreported"
                                                        : usage_mode_keyword(n.mode))
                    << ")\n";
            }
            break;
        case CharacteristicId::Enablers:
            for (const auto& n : d.constellation.nodes) {
                if (n.kind == NodeKind::Enabler) out << "- " << n.name << "\n";
            }
            break;
        case CharacteristicId::ModelsAndData:
            for (const auto& n : d.constellation.nodes) {
                if (n.kind != NodeKind::ModelData) continue;
                out << "- " << n.name << (n.declared_as_model ? " (model)" : " (datum)") << "\n";
            }
            break;
        case CharacteristicId::Constellation: {
            std::size_t usages = 0;
            for (const auto& n : d.constellation.nodes) {
                if (n.kind == NodeKind::Usage) ++usages;
            }
            out << usages << " slice(s), one per usage.\n\n";
            for (const auto& e : d.constellation.edges) {
                out << "- " << e.source << " -> " << e.target << "\n";
            }
            if (opts.include_graph_link) {
                out << "\nSee [constellation.dot](constellation.dot) for a rendered graph.\n";
            }
            break;
        }
        case CharacteristicId::TimeScale:
            render_time_scale_line(out, d, TimeScale::SlowerThanRealTime);
            render_time_scale_line(out, d, TimeScale::RealTime);
            render_time_scale_line(out, d, TimeScale::FasterThanRealTime);
            break;
        case CharacteristicId::FidelityConsiderations:
            for (const auto& fn : d.fidelity_notes) {
                out << "- " << fn.usage << ": " << fn.note << "\n";
            }
            for (const auto& n : d.constellation.nodes) {
                if (n.fidelity_note) out << "- " << n.name << ": " << *n.fidelity_note << "\n";
            }
            break;
        case CharacteristicId::LifecycleStages:
            for (const auto& stage : effective_lifecycle(d)) {
                out << "- " << stage.stage << ": ";
                for (std::size_t i = 0; i < stage.usages.size(); ++i) {
                    if (i) out << ", ";
                    out << stage.usages[i].usage;
                }
                out << "\n";
            }
            break;
        case CharacteristicId::Evolution: {
            int step = 1;
            for (const auto& text : *d.evolution) out << step++ << ". " << text << "\n";
            break;
        }
    }
    std::string body = out.str();
    if (body.empty()) body = "(reported, no details given)\n";
    return body;
}

}  // namespace

std::string render_report(const DtDescription& d, const ReportOptions& opts) {
    std::ostringstream out;
    out << "# Digital Twin Description: " << d.name << "\n\n";
    out << "**Classification:** " << to_string(classify(d)) << "\n\n";
    const Completeness comp = completeness(d);
    out << "**Completeness:** " << comp.score << "/" << kCharacteristicCount << "\n";

    for (CharacteristicId c : all_characteristics()) {
        out << "\n## " << characteristic_code(c) << ": " << characteristic_title(c) << "\n\n";
        if (comp.reported.count(c)) {
            out << section_body(d, c, opts);
        } else {
            out << kUnreported << "\n";
        }
    }

    if (opts.include_mapping_summary) {
        out << "\n## AAS Mapping Summary\n\n";
        for (CharacteristicId c : all_characteristics()) {
            out << "- " << characteristic_code(c) << " " << characteristic_title(c) << ": "
                << to_string(support_level(c)) << "\n";
        }
    }
    return out.str();
}

}  // namespace twindesc
