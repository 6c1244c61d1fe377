// twindesc: checker, classifier, slicer, and generator front end for
// `.dtd` digital-twin description files.
//
// Exit codes: 0 clean, 1 validation error, 2 parse/IO error, 64 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>

#include "twindesc/aas.hpp"
#include "twindesc/analysis.hpp"
#include "twindesc/constellation.hpp"
#include "twindesc/parser.hpp"
#include "twindesc/report.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParseIo = 2;
constexpr int kExitUsage = 64;

bool g_color = false;

std::string colored(const std::string& text, const char* code) {
    if (!g_color) return text;
    return std::string("\x1b[") + code + "m" + text + "\x1b[0m";
}

std::string severity_tag(twindesc::Severity s) {
    switch (s) {
        case twindesc::Severity::Error: return colored("error", "31");
        case twindesc::Severity::Warning: return colored("warning", "33");
        case twindesc::Severity::Info: return colored("info", "36");
    }
    return "error";
}

void print_diagnostics(std::ostream& out, const std::string& path,
                       const std::vector<twindesc::Diagnostic>& diags) {
    for (const auto& d : diags) {
        out << path;
        if (d.location) out << ":" << d.location->line << ":" << d.location->column;
        out << ": " << severity_tag(d.severity) << "[" << d.code << "]: " << d.message << "\n";
    }
}

struct LoadedFile {
    std::string path;
    twindesc::ParseResult result;
};

// Reads the file (or stdin for "-") and parses it. Returns nullopt after
// printing the failure; parse errors land on `diag_out`.
std::optional<LoadedFile> load(const std::string& input, std::ostream& diag_out) {
    LoadedFile loaded;
    std::string content;
    if (input == "-") {
        loaded.path = "<stdin>";
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        content = buf.str();
    } else {
        loaded.path = input;
        std::ifstream in(input, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read file '" << input << "'\n";
            return std::nullopt;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        content = buf.str();
    }
    loaded.result = twindesc::parse(twindesc::SourceFile{loaded.path, content});
    if (!loaded.result.description) {
        print_diagnostics(diag_out, loaded.path, loaded.result.diagnostics);
        return std::nullopt;
    }
    return loaded;
}

bool write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return true;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write file '" << out_path << "'\n";
        return false;
    }
    out << content;
    return true;
}

// Shared gate for generator subcommands: refuse on validation errors.
bool validation_gate(const LoadedFile& loaded, std::vector<twindesc::Diagnostic>& diags) {
    diags = twindesc::validate(*loaded.result.description);
    if (twindesc::has_errors(diags)) {
        print_diagnostics(std::cerr, loaded.path, diags);
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Digital-twin description toolkit"};
    app.require_subcommand(1);

    bool no_color = false;
    app.add_flag("--no-color", no_color, "Disable colored output");

    std::string input;
    std::string out_path;
    std::string format = "dot";
    std::string usage_name;
    std::string slice_name;
    std::string support_code;

    auto* check = app.add_subcommand("check", "Parse and validate a description");
    check->add_option("file", input, "Input .dtd file (- for stdin)")->required();

    auto* classify = app.add_subcommand("classify", "Print the DM/DS/DT classification");
    classify->add_option("file", input, "Input .dtd file (- for stdin)")->required();

    auto* slices = app.add_subcommand("slices", "Print slice memberships");
    slices->add_option("file", input, "Input .dtd file (- for stdin)")->required();
    slices->add_option("--usage", usage_name, "Only the slice for this usage");

    auto* graph = app.add_subcommand("graph", "Emit the constellation as DOT");
    graph->add_option("file", input, "Input .dtd file (- for stdin)")->required();
    graph->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"dot"}))
        ->capture_default_str();
    graph->add_option("--slice", slice_name, "Highlight the slice for this usage");
    graph->add_option("--out", out_path, "Write to a file instead of stdout");

    auto* report = app.add_subcommand("report", "Render the C1..C14 Markdown report");
    report->add_option("file", input, "Input .dtd file (- for stdin)")->required();
    report->add_option("--out", out_path, "Write to a file instead of stdout");

    auto* aas = app.add_subcommand("aas", "Generate the AAS skeleton as canonical JSON");
    aas->add_option("file", input, "Input .dtd file (- for stdin)")->required();
    aas->add_option("--out", out_path, "Write to a file instead of stdout");

    auto* support = app.add_subcommand("support", "Print AAS support levels (Table of C1..C14)");
    support->add_option("characteristic", support_code, "One of C1..C14");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const char* env_no_color = std::getenv("TWINDESC_NO_COLOR");
    g_color = !no_color && (env_no_color == nullptr || env_no_color[0] == '\0') &&
              isatty(fileno(stdout)) != 0;

    if (support->parsed()) {
        if (support_code.empty()) {
            for (twindesc::CharacteristicId c : twindesc::all_characteristics()) {
                std::cout << twindesc::characteristic_code(c) << ": "
                          << twindesc::to_string(twindesc::support_level(c)) << "\n";
            }
            return kExitClean;
        }
        auto c = twindesc::characteristic_from_code(support_code);
        if (!c) {
            std::cerr << "error: '" << support_code << "' is not one of C1..C14\n";
            return kExitUsage;
        }
        std::cout << twindesc::to_string(twindesc::support_level(*c)) << "\n";
        return kExitClean;
    }

    if (check->parsed()) {
        auto loaded = load(input, std::cout);
        if (!loaded) return kExitParseIo;
        auto diags = twindesc::validate(*loaded->result.description);
        std::vector<twindesc::Diagnostic> all = loaded->result.diagnostics;
        all.insert(all.end(), diags.begin(), diags.end());
        twindesc::sort_diagnostics(all);
        print_diagnostics(std::cout, loaded->path, all);
        return twindesc::has_errors(all) ? kExitValidation : kExitClean;
    }

    if (classify->parsed()) {
        auto loaded = load(input, std::cerr);
        if (!loaded) return kExitParseIo;
        const twindesc::Classification c = twindesc::classify(*loaded->result.description);
        if (c.kind == twindesc::Classification::Kind::Ambiguous) {
            for (auto k : c.candidates) std::cout << twindesc::to_string(k) << "\n";
        } else {
            std::cout << twindesc::to_string(c.kind) << "\n";
        }
        return kExitClean;
    }

    if (slices->parsed()) {
        auto loaded = load(input, std::cerr);
        if (!loaded) return kExitParseIo;
        const auto& constellation = loaded->result.description->constellation;
        std::vector<twindesc::Slice> all;
        if (usage_name.empty()) {
            all = twindesc::enumerate_slices(constellation);
        } else {
            try {
                all.push_back(twindesc::extract_slice(constellation, usage_name));
            } catch (const twindesc::Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitValidation;
            }
        }
        for (const auto& slice : all) {
            std::cout << slice.usage << ":";
            for (std::size_t i = 0; i < slice.nodes.size(); ++i) {
                std::cout << (i ? ", " : " ") << slice.nodes[i];
            }
            std::cout << "\n";
        }
        return kExitClean;
    }

    if (graph->parsed()) {
        auto loaded = load(input, std::cerr);
        if (!loaded) return kExitParseIo;
        std::vector<twindesc::Diagnostic> diags;
        if (!validation_gate(*loaded, diags)) return kExitValidation;
        const auto& constellation = loaded->result.description->constellation;
        std::string dot;
        if (slice_name.empty()) {
            dot = twindesc::to_dot(constellation);
        } else {
            try {
                dot = twindesc::to_dot(constellation,
                                       twindesc::extract_slice(constellation, slice_name));
            } catch (const twindesc::Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitValidation;
            }
        }
        return write_output(out_path, dot) ? kExitClean : kExitParseIo;
    }

    if (report->parsed()) {
        auto loaded = load(input, std::cerr);
        if (!loaded) return kExitParseIo;
        std::vector<twindesc::Diagnostic> diags;
        if (!validation_gate(*loaded, diags)) return kExitValidation;
        const std::string md = twindesc::render_report(*loaded->result.description);
        return write_output(out_path, md) ? kExitClean : kExitParseIo;
    }

    if (aas->parsed()) {
        auto loaded = load(input, std::cerr);
        if (!loaded) return kExitParseIo;
        std::vector<twindesc::Diagnostic> diags;
        if (!validation_gate(*loaded, diags)) return kExitValidation;
        const std::string json =
            twindesc::serialize_aas(twindesc::map_to_aas(*loaded->result.description));
        return write_output(out_path, json) ? kExitClean : kExitParseIo;
    }

    return kExitUsage;
}
