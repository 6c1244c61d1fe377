// End-to-end tests that drive the built `twindesc` binary through a shell
// and assert on stdout bytes and exit codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "support/test_util.hpp"
#include "twindesc/aas.hpp"
#include "twindesc/analysis.hpp"
#include "twindesc/constellation.hpp"
#include "twindesc/parser.hpp"
#include "twindesc/report.hpp"

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;
};

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''"; else out.push_back(c);
    }
    out += "'";
    return out;
}

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(TWINDESC_CLI_PATH) + " " + args;
    CmdResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        result.output.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string corpus(const std::string& name) {
    return shell_quote(test_util::corpus_path(name));
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/" + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("check passes the smart clamp corpus silently") {
    const CmdResult r = run_cli("check " + corpus("smart_clamp.dtd"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.empty());
}

TEST_CASE("classify prints the verdicts one per line") {
    CHECK(run_cli("classify " + corpus("smart_clamp.dtd")).output == "Digital Shadow\n");
    CHECK(run_cli("classify " + corpus("human_robot.dtd")).output ==
          "Digital Shadow\nDigital Twin\n");
}

TEST_CASE("classify reads stdin for dash") {
    const CmdResult r =
        run_cli("classify - < " + corpus("smart_clamp.dtd"));
    CHECK(r.exit_code == 0);
    CHECK(r.output == "Digital Shadow\n");
}

TEST_CASE("support prints the fixed table") {
    CHECK(run_cli("support C12").output == "not supported\n");
    CHECK(run_cli("support C1").output == "explicit\n");
    CHECK(run_cli("support C5").output == "partial\n");
    CHECK(run_cli("support C2").output == "implicit\n");
    const CmdResult all = run_cli("support");
    CHECK(all.exit_code == 0);
    CHECK(all.output.find("C1: explicit\n") != std::string::npos);
    CHECK(all.output.find("C11: not supported\n") != std::string::npos);
    std::size_t lines = 0;
    for (char c : all.output) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 14);
    CHECK(run_cli("support C99 2>/dev/null").exit_code == 64);
}

TEST_CASE("slices lists memberships in declaration order") {
    const CmdResult r = run_cli("slices " + corpus("smart_clamp.dtd"));
    CHECK(r.exit_code == 0);
    std::size_t lines = 0;
    for (char c : r.output) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 6);
    CHECK(r.output.find("Estimate Tool Wear: Estimate Tool Wear, Tool Wear Estimator, "
                        "1D Tool Dimensions, Reference Tool Model\n") != std::string::npos);

    const CmdResult one =
        run_cli("slices --usage 'Estimate Tool Wear' " + corpus("smart_clamp.dtd"));
    CHECK(one.exit_code == 0);
    CHECK(one.output == "Estimate Tool Wear: Estimate Tool Wear, Tool Wear Estimator, "
                        "1D Tool Dimensions, Reference Tool Model\n");

    CHECK(run_cli("slices --usage Nope " + corpus("smart_clamp.dtd") + " 2>/dev/null").exit_code ==
          1);
}

TEST_CASE("graph, report, and aas match the library output byte for byte") {
    const twindesc::DtDescription d = test_util::load_corpus("smart_clamp.dtd");

    const CmdResult dot = run_cli("graph --format dot " + corpus("smart_clamp.dtd"));
    CHECK(dot.exit_code == 0);
    CHECK(dot.output == twindesc::to_dot(d.constellation));

    const CmdResult highlighted =
        run_cli("graph --slice 'Estimate Tool Wear' " + corpus("smart_clamp.dtd"));
    CHECK(highlighted.output ==
          twindesc::to_dot(d.constellation,
                           twindesc::extract_slice(d.constellation, "Estimate Tool Wear")));

    const CmdResult report = run_cli("report " + corpus("smart_clamp.dtd"));
    CHECK(report.output == twindesc::render_report(d));

    const CmdResult aas = run_cli("aas " + corpus("smart_clamp.dtd"));
    CHECK(aas.output == twindesc::serialize_aas(twindesc::map_to_aas(d)));
}

TEST_CASE("--out writes the same bytes to a file") {
    const std::string out_path = "/tmp/twindesc_cli_graph.dot";
    std::remove(out_path.c_str());
    const CmdResult r = run_cli("graph --out " + shell_quote(out_path) + " " +
                                corpus("smart_clamp.dtd"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.empty());
    const twindesc::DtDescription d = test_util::load_corpus("smart_clamp.dtd");
    CHECK(test_util::read_file(out_path) == twindesc::to_dot(d.constellation));
    std::remove(out_path.c_str());
}

TEST_CASE("identical invocations produce identical bytes") {
    const CmdResult a = run_cli("report " + corpus("smart_clamp.dtd"));
    const CmdResult b = run_cli("report " + corpus("smart_clamp.dtd"));
    CHECK(a.output == b.output);
}

TEST_CASE("exit codes form the stable contract") {
    SUBCASE("2 on unreadable file") {
        CHECK(run_cli("check /no/such/file.dtd 2>/dev/null").exit_code == 2);
    }
    SUBCASE("2 on parse error") {
        const std::string path =
            write_temp("twindesc_parse_error.dtd", "digital_twin \"X\" { wodget }\n");
        CHECK(run_cli("check " + shell_quote(path)).exit_code == 2);
        CHECK(run_cli("aas " + shell_quote(path) + " 2>/dev/null").exit_code == 2);
    }
    SUBCASE("1 on validation error for check and generators, 0 for classify") {
        const std::string path = write_temp(
            "twindesc_validation_error.dtd",
            "digital_twin \"X\" {\n  usage \"u\" {}\n  enabler \"e\" {}\n"
            "  flow \"u\" -> \"e\"\n}\n");
        CHECK(run_cli("check " + shell_quote(path)).exit_code == 1);
        CHECK(run_cli("graph " + shell_quote(path) + " 2>/dev/null").exit_code == 1);
        CHECK(run_cli("report " + shell_quote(path) + " 2>/dev/null").exit_code == 1);
        CHECK(run_cli("aas " + shell_quote(path) + " 2>/dev/null").exit_code == 1);
        CHECK(run_cli("classify " + shell_quote(path)).exit_code == 0);
    }
    SUBCASE("64 on usage errors") {
        CHECK(run_cli("definitely-not-a-subcommand 2>/dev/null").exit_code == 64);
        CHECK(run_cli("graph --format svg " + corpus("smart_clamp.dtd") + " 2>/dev/null")
                  .exit_code == 64);
        CHECK(run_cli("2>/dev/null").exit_code == 64);
    }
}

TEST_CASE("check prints diagnostics with locations and codes") {
    const std::string path = write_temp(
        "twindesc_diag.dtd",
        "digital_twin \"X\" {\n  usage \"u\" {}\n  enabler \"e\" {}\n  flow \"u\" -> \"e\"\n}\n");
    const CmdResult r = run_cli("check " + shell_quote(path));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find(":4:3: error[E101]:") != std::string::npos);
    CHECK(r.output.find("warning[W203]") != std::string::npos);
}
