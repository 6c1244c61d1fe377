#include "twindesc/parser.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace twindesc {

namespace {

enum class TokKind { Ident, String, Int, LBrace, RBrace, Colon, Comma, At, Arrow, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;  // ident name or string payload
    long value = 0;    // Int only
    SourceLocation loc{};
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case TokKind::Ident: return "'" + t.text + "'";
        case TokKind::String: return "string \"" + t.text + "\"";
        case TokKind::Int: return "integer " + std::to_string(t.value);
        case TokKind::LBrace: return "'{'";
        case TokKind::RBrace: return "'}'";
        case TokKind::Colon: return "':'";
        case TokKind::Comma: return "','";
        case TokKind::At: return "'@'";
        case TokKind::Arrow: return "'->'";
        case TokKind::End: return "end of file";
    }
    return "token";
}

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

class Lexer {
public:
    Lexer(const std::string& content, std::vector<Diagnostic>& diags)
        : src_(content), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '\n') {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == '"') {
                tokens.push_back(lex_string());
            } else if (is_ident_start(c)) {
                tokens.push_back(lex_ident());
            } else if (c >= '0' && c <= '9') {
                tokens.push_back(lex_int());
            } else if (c == '{') {
                tokens.push_back(simple(TokKind::LBrace));
            } else if (c == '}') {
                tokens.push_back(simple(TokKind::RBrace));
            } else if (c == ':') {
                tokens.push_back(simple(TokKind::Colon));
            } else if (c == ',') {
                tokens.push_back(simple(TokKind::Comma));
            } else if (c == '@') {
                tokens.push_back(simple(TokKind::At));
            } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                Token t{TokKind::Arrow, "", 0, here()};
                advance();
                advance();
                tokens.push_back(t);
            } else {
                error("E001", "unexpected character '" + std::string(1, c) + "'", here());
                advance();
            }
        }
        tokens.push_back(Token{TokKind::End, "", 0, here()});
        return tokens;
    }

private:
    SourceLocation here() const { return SourceLocation{line_, col_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    Token simple(TokKind kind) {
        Token t{kind, "", 0, here()};
        advance();
        return t;
    }

    Token lex_ident() {
        Token t{TokKind::Ident, "", 0, here()};
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
            t.text.push_back(src_[pos_]);
            advance();
        }
        return t;
    }

    Token lex_int() {
        Token t{TokKind::Int, "", 0, here()};
        long v = 0;
        bool overflow = false;
        while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
            if (v > 100000000) overflow = true;
            v = v * 10 + (src_[pos_] - '0');
            advance();
        }
        if (overflow) {
            error("E001", "integer literal out of range", t.loc);
            v = 0;
        }
        t.value = v;
        return t;
    }

    Token lex_string() {
        Token t{TokKind::String, "", 0, here()};
        advance();  // opening quote
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '"') {
                advance();
                return t;
            }
            if (c == '\n') break;
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size()) break;
                const char esc = src_[pos_];
                switch (esc) {
                    case '"': t.text.push_back('"'); break;
                    case '\\': t.text.push_back('\\'); break;
                    case 'n': t.text.push_back('\n'); break;
                    case 't': t.text.push_back('\t'); break;
                    default:
                        error("E001", std::string("invalid escape sequence '\\") + esc + "'", here());
                        t.text.push_back(esc);
                        break;
                }
                advance();
            } else {
                t.text.push_back(c);
                advance();
            }
        }
        error("E005", "unterminated string literal", t.loc);
        return t;
    }

    void error(std::string code, std::string msg, SourceLocation loc) {
        diags_.push_back(Diagnostic{Severity::Error, std::move(code), std::move(msg), loc});
    }

    const std::string& src_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::set<std::string>& item_keywords() {
    static const std::set<std::string> kw = {
        "sus",    "acting",  "sensing", "multiplicity", "data",      "insights", "actions",
        "usage",  "enabler", "model",   "datum",        "flow",      "lifecycle", "fidelity",
        "evolution"};
    return kw;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
        : toks_(std::move(tokens)), diags_(diags) {}

    DtDescription run() {
        parse_header();
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            parse_item();
        }
        if (at(TokKind::RBrace)) {
            next();
            if (!at(TokKind::End)) {
                error("E001", "unexpected content after the closing '}' of the digital_twin block",
                      cur().loc);
            }
        } else {
            error("E001", "unexpected end of file, expected '}'", cur().loc);
        }
        resolve_flows();
        normalize_channels();
        return std::move(d_);
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& peek() const { return toks_[std::min(pos_ + 1, toks_.size() - 1)]; }
    bool at(TokKind k) const { return cur().kind == k; }
    bool at_keyword(const char* kw) const { return at(TokKind::Ident) && cur().text == kw; }
    void next() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }

    void error(std::string code, std::string msg, SourceLocation loc) {
        diags_.push_back(Diagnostic{Severity::Error, std::move(code), std::move(msg), loc});
    }
    void warn(std::string code, std::string msg, SourceLocation loc) {
        diags_.push_back(Diagnostic{Severity::Warning, std::move(code), std::move(msg), loc});
    }

    bool expect(TokKind k, const std::string& what) {
        if (at(k)) return true;
        error("E001", "expected " + what + " but found " + describe(cur()), cur().loc);
        return false;
    }

    // Consumes and returns a non-empty string literal, or nothing on error.
    std::optional<Token> expect_string(const std::string& what) {
        if (!at(TokKind::String)) {
            error("E001", "expected " + what + " but found " + describe(cur()), cur().loc);
            return std::nullopt;
        }
        Token t = cur();
        next();
        if (t.text.empty()) {
            error("E001", "expected non-empty " + what, t.loc);
            return std::nullopt;
        }
        return t;
    }

    // Skips forward to the next top-level item keyword (or the closing
    // brace of the digital_twin block), tracking nesting so that keywords
    // inside skipped blocks do not stop the scan.
    void skip_to_next_item() {
        int depth = 0;
        while (!at(TokKind::End)) {
            if (at(TokKind::LBrace)) {
                ++depth;
            } else if (at(TokKind::RBrace)) {
                if (depth == 0) return;  // end of the digital_twin block
                --depth;
            } else if (depth == 0 && at(TokKind::Ident) && item_keywords().count(cur().text)) {
                return;
            }
            next();
        }
    }

    // Consumes the remainder of the current block up to and including the
    // matching '}' (the opening '{' has already been consumed).
    void skip_block_rest() {
        int depth = 1;
        while (!at(TokKind::End)) {
            if (at(TokKind::LBrace)) ++depth;
            if (at(TokKind::RBrace)) {
                --depth;
                if (depth == 0) {
                    next();
                    return;
                }
            }
            next();
        }
    }

    void parse_header() {
        if (at_keyword("digital_twin")) {
            next();
        } else if (at(TokKind::Ident)) {
            error("E003", "unknown keyword '" + cur().text + "', expected 'digital_twin'",
                  cur().loc);
            next();
        } else {
            error("E001", "expected 'digital_twin' but found " + describe(cur()), cur().loc);
        }
        if (auto name = expect_string("description name")) d_.name = name->text;
        if (expect(TokKind::LBrace, "'{'")) next();
    }

    void parse_item() {
        if (!at(TokKind::Ident)) {
            error("E001", "expected a block keyword but found " + describe(cur()), cur().loc);
            next();
            skip_to_next_item();
            return;
        }
        const std::string kw = cur().text;
        if (kw == "sus") {
            parse_sus();
        } else if (kw == "acting") {
            parse_components(d_.acting, acting_names_, "acting");
        } else if (kw == "sensing") {
            parse_components(d_.sensing, sensing_names_, "sensing");
        } else if (kw == "multiplicity") {
            parse_multiplicity();
        } else if (kw == "data") {
            parse_data();
        } else if (kw == "insights") {
            parse_insights();
        } else if (kw == "actions") {
            parse_actions();
        } else if (kw == "usage") {
            parse_usage();
        } else if (kw == "enabler") {
            parse_enabler();
        } else if (kw == "model" || kw == "datum") {
            parse_model_datum(kw == "model");
        } else if (kw == "flow") {
            parse_flow();
        } else if (kw == "lifecycle") {
            parse_lifecycle();
        } else if (kw == "fidelity") {
            parse_fidelity();
        } else if (kw == "evolution") {
            parse_evolution();
        } else {
            error("E003", "unknown keyword '" + kw + "'", cur().loc);
            next();
            skip_to_next_item();
        }
    }

    bool open_block() {
        if (!expect(TokKind::LBrace, "'{'")) {
            skip_to_next_item();
            return false;
        }
        next();
        return true;
    }

    void parse_sus() {
        next();
        if (!open_block()) return;
        if (!d_.sus) d_.sus.emplace();
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at(TokKind::Ident)) {
                error("E001",
                      "expected 'system:', 'environment:', 'agent:' or '}' but found " +
                          describe(cur()),
                      cur().loc);
                skip_block_rest();
                return;
            }
            const std::string field = cur().text;
            const SourceLocation floc = cur().loc;
            if (field != "system" && field != "environment" && field != "agent") {
                error("E003", "unknown keyword '" + field + "' in sus block", floc);
                skip_block_rest();
                return;
            }
            next();
            if (!expect(TokKind::Colon, "':'")) {
                skip_block_rest();
                return;
            }
            next();
            auto text = expect_string("text");
            if (!text) {
                skip_block_rest();
                return;
            }
            if (field == "system") {
                if (d_.sus->system) {
                    error("E001", "duplicate 'system:' entry in sus block", floc);
                } else {
                    d_.sus->system = text->text;
                }
            } else if (field == "environment") {
                if (d_.sus->environment) {
                    error("E001", "duplicate 'environment:' entry in sus block", floc);
                } else {
                    d_.sus->environment = text->text;
                }
            } else {
                d_.sus->agents.push_back(text->text);
            }
        }
        close_block();
    }

    void close_block() {
        if (at(TokKind::RBrace)) {
            next();
        } else {
            error("E001", "unexpected end of file, expected '}'", cur().loc);
        }
    }

    void parse_components(std::optional<std::vector<Component>>& list,
                          std::set<std::string>& names, const char* block) {
        next();
        if (!open_block()) return;
        if (!list) list.emplace();
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at_keyword("component")) {
                if (at(TokKind::Ident)) {
                    error("E003",
                          "unknown keyword '" + cur().text + "' in " + block + " block", cur().loc);
                } else {
                    error("E001", "expected 'component' or '}' but found " + describe(cur()),
                          cur().loc);
                }
                skip_block_rest();
                return;
            }
            const SourceLocation loc = cur().loc;
            next();
            auto name = expect_string("component name");
            if (!name) {
                skip_block_rest();
                return;
            }
            if (!names.insert(name->text).second) {
                error("E002", "duplicate " + std::string(block) + " component \"" + name->text +
                                  "\"",
                      name->loc);
                continue;
            }
            list->push_back(Component{name->text, loc});
        }
        close_block();
    }

    void parse_multiplicity() {
        next();
        if (!open_block()) return;
        if (!d_.multiplicity) d_.multiplicity.emplace();
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at(TokKind::Ident)) {
                error("E001",
                      "expected 'sus_entities:', 'dt_instances:', 'note:' or '}' but found " +
                          describe(cur()),
                      cur().loc);
                skip_block_rest();
                return;
            }
            const std::string field = cur().text;
            const SourceLocation floc = cur().loc;
            if (field != "sus_entities" && field != "dt_instances" && field != "note") {
                error("E003", "unknown keyword '" + field + "' in multiplicity block", floc);
                skip_block_rest();
                return;
            }
            next();
            if (!expect(TokKind::Colon, "':'")) {
                skip_block_rest();
                return;
            }
            next();
            if (field == "sus_entities") {
                if (!at(TokKind::Int) || cur().value < 1) {
                    error("E001", "expected positive integer but found " + describe(cur()),
                          cur().loc);
                    skip_block_rest();
                    return;
                }
                if (d_.multiplicity->sus_entities) {
                    error("E001", "duplicate 'sus_entities:' entry", floc);
                } else {
                    d_.multiplicity->sus_entities = static_cast<int>(cur().value);
                }
                next();
            } else if (field == "dt_instances") {
                DtInstances inst;
                if (at_keyword("per_usage")) {
                    inst.kind = DtInstances::Kind::PerUsage;
                    next();
                } else if (at_keyword("single")) {
                    inst.kind = DtInstances::Kind::Single;
                    next();
                } else if (at(TokKind::Int) && cur().value >= 1) {
                    inst.kind = DtInstances::Kind::Count;
                    inst.count = static_cast<int>(cur().value);
                    next();
                } else {
                    error("E001",
                          "expected 'per_usage', 'single' or a positive integer but found " +
                              describe(cur()),
                          cur().loc);
                    skip_block_rest();
                    return;
                }
                if (d_.multiplicity->dt_instances) {
                    error("E001", "duplicate 'dt_instances:' entry", floc);
                } else {
                    d_.multiplicity->dt_instances = inst;
                }
            } else {
                auto text = expect_string("note text");
                if (!text) {
                    skip_block_rest();
                    return;
                }
                if (d_.multiplicity->note) {
                    error("E001", "duplicate 'note:' entry", floc);
                } else {
                    d_.multiplicity->note = text->text;
                }
            }
        }
        close_block();
    }

    std::optional<TimeScale> parse_time_scale_word() {
        if (at_keyword("slower")) {
            next();
            return TimeScale::SlowerThanRealTime;
        }
        if (at_keyword("real_time")) {
            next();
            return TimeScale::RealTime;
        }
        if (at_keyword("faster")) {
            next();
            return TimeScale::FasterThanRealTime;
        }
        error("E001", "expected 'slower', 'real_time' or 'faster' but found " + describe(cur()),
              cur().loc);
        return std::nullopt;
    }

    void add_channel(ChannelItem item) {
        if (!channel_names_.insert(item.name).second) {
            error("E002", "duplicate channel name \"" + item.name + "\"", item.loc);
            return;
        }
        d_.channels.push_back(std::move(item));
    }

    void parse_data() {
        next();
        if (!open_block()) return;
        d_.data_block_present = true;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            TransferMode transfer;
            if (at_keyword("automatic")) {
                transfer = TransferMode::Automatic;
            } else if (at_keyword("manual")) {
                transfer = TransferMode::Manual;
            } else {
                if (at(TokKind::Ident)) {
                    error("E003", "unknown keyword '" + cur().text + "' in data block", cur().loc);
                } else {
                    error("E001",
                          "expected 'automatic', 'manual' or '}' but found " + describe(cur()),
                          cur().loc);
                }
                skip_block_rest();
                return;
            }
            const SourceLocation loc = cur().loc;
            next();
            bool is_none = false;
            std::string name;
            if (at_keyword("none")) {
                is_none = true;
                next();
            } else {
                auto text = expect_string("data item name");
                if (!text) {
                    skip_block_rest();
                    return;
                }
                name = text->text;
            }
            TimeScale ts = TimeScale::Unreported;
            if (at(TokKind::At)) {
                next();
                auto parsed = parse_time_scale_word();
                if (!parsed) {
                    skip_block_rest();
                    return;
                }
                ts = *parsed;
            }
            if (is_none) {
                // `manual none` carries no information beyond the block
                // being present; only the automatic variant is recorded.
                if (transfer == TransferMode::Automatic) d_.automatic_data_none = true;
                continue;
            }
            ChannelItem item;
            item.name = name;
            item.direction = ChannelDirection::Data;
            item.transfer = transfer;
            item.time_scale = ts;
            item.loc = loc;
            add_channel(std::move(item));
        }
        close_block();
    }

    void parse_insights() {
        next();
        if (!open_block()) return;
        d_.insights_block_present = true;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at_keyword("insight")) {
                if (at(TokKind::Ident)) {
                    error("E003", "unknown keyword '" + cur().text + "' in insights block",
                          cur().loc);
                } else {
                    error("E001", "expected 'insight' or '}' but found " + describe(cur()),
                          cur().loc);
                }
                skip_block_rest();
                return;
            }
            const SourceLocation loc = cur().loc;
            next();
            auto name = expect_string("insight name");
            if (!name) {
                skip_block_rest();
                return;
            }
            ChannelItem item;
            item.name = name->text;
            item.direction = ChannelDirection::Insight;
            item.loc = loc;
            add_channel(std::move(item));
        }
        close_block();
    }

    void parse_actions() {
        next();
        if (!open_block()) return;
        d_.actions_block_present = true;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            bool automatic;
            if (at_keyword("automatic")) {
                automatic = true;
            } else if (at_keyword("agent")) {
                automatic = false;
            } else {
                if (at(TokKind::Ident)) {
                    error("E003", "unknown keyword '" + cur().text + "' in actions block",
                          cur().loc);
                } else {
                    error("E001",
                          "expected 'automatic', 'agent' or '}' but found " + describe(cur()),
                          cur().loc);
                }
                skip_block_rest();
                return;
            }
            const SourceLocation loc = cur().loc;
            next();
            if (at_keyword("none")) {
                next();
                if (automatic) d_.automatic_actions_none = true;
                continue;
            }
            auto name = expect_string("action name");
            if (!name) {
                skip_block_rest();
                return;
            }
            ChannelItem item;
            item.name = name->text;
            item.direction =
                automatic ? ChannelDirection::AutomaticAction : ChannelDirection::AgentAction;
            item.loc = loc;
            add_channel(std::move(item));
        }
        close_block();
    }

    bool register_node(const std::string& name, SourceLocation loc) {
        if (node_names_.count(name)) {
            error("E002", "duplicate node name \"" + name + "\"", loc);
            return false;
        }
        node_names_.insert(name);
        return true;
    }

    void parse_usage() {
        const SourceLocation loc = cur().loc;
        next();
        auto name = expect_string("usage name");
        if (!name) {
            skip_to_next_item();
            return;
        }
        ConstellationNode node;
        node.name = name->text;
        node.kind = NodeKind::Usage;
        node.loc = loc;
        const bool keep = register_node(node.name, name->loc);
        if (!open_block()) {
            if (keep) d_.constellation.nodes.push_back(std::move(node));
            return;
        }
        bool saw_mode = false, saw_ts = false, saw_lifecycle = false, saw_fidelity = false;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at(TokKind::Ident)) {
                error("E001",
                      "expected 'mode:', 'time_scale:', 'lifecycle:', 'fidelity:' or '}' but "
                      "found " +
                          describe(cur()),
                      cur().loc);
                skip_block_rest();
                if (keep) d_.constellation.nodes.push_back(std::move(node));
                return;
            }
            const std::string field = cur().text;
            const SourceLocation floc = cur().loc;
            if (field != "mode" && field != "time_scale" && field != "lifecycle" &&
                field != "fidelity") {
                error("E003", "unknown keyword '" + field + "' in usage block", floc);
                skip_block_rest();
                if (keep) d_.constellation.nodes.push_back(std::move(node));
                return;
            }
            next();
            if (!expect(TokKind::Colon, "':'")) {
                skip_block_rest();
                if (keep) d_.constellation.nodes.push_back(std::move(node));
                return;
            }
            next();
            bool ok = true;
            if (field == "mode") {
                if (saw_mode) error("E001", "duplicate 'mode:' attribute", floc);
                saw_mode = true;
                if (at_keyword("historical")) {
                    node.mode = UsageMode::Historical;
                    next();
                } else if (at_keyword("streaming")) {
                    node.mode = UsageMode::Streaming;
                    next();
                } else if (at_keyword("both")) {
                    node.mode = UsageMode::Both;
                    next();
                } else {
                    error("E001",
                          "expected 'historical', 'streaming' or 'both' but found " +
                              describe(cur()),
                          cur().loc);
                    ok = false;
                }
            } else if (field == "time_scale") {
                if (saw_ts) error("E001", "duplicate 'time_scale:' attribute", floc);
                saw_ts = true;
                auto parsed = parse_time_scale_word();
                if (parsed) {
                    node.time_scale = *parsed;
                } else {
                    ok = false;
                }
            } else if (field == "lifecycle") {
                if (saw_lifecycle) error("E001", "duplicate 'lifecycle:' attribute", floc);
                saw_lifecycle = true;
                ok = parse_lifecycle_idents(node);
            } else {
                if (saw_fidelity) error("E001", "duplicate 'fidelity:' attribute", floc);
                saw_fidelity = true;
                auto text = expect_string("fidelity text");
                if (text) {
                    node.fidelity_note = text->text;
                } else {
                    ok = false;
                }
            }
            if (!ok) {
                skip_block_rest();
                if (keep) d_.constellation.nodes.push_back(std::move(node));
                return;
            }
        }
        close_block();
        if (keep) d_.constellation.nodes.push_back(std::move(node));
    }

    bool parse_lifecycle_idents(ConstellationNode& node) {
        while (true) {
            if (!at(TokKind::Ident)) {
                error("E001", "expected lifecycle identifier but found " + describe(cur()),
                      cur().loc);
                return false;
            }
            const std::string stage = cur().text;
            if (std::find(node.lifecycles.begin(), node.lifecycles.end(), stage) !=
                node.lifecycles.end()) {
                warn("W001", "duplicate lifecycle identifier '" + stage + "' ignored", cur().loc);
            } else {
                node.lifecycles.push_back(stage);
            }
            next();
            if (!at(TokKind::Comma)) return true;
            next();
        }
    }

    void parse_enabler() {
        const SourceLocation loc = cur().loc;
        next();
        auto name = expect_string("enabler name");
        if (!name) {
            skip_to_next_item();
            return;
        }
        ConstellationNode node;
        node.name = name->text;
        node.kind = NodeKind::Enabler;
        node.loc = loc;
        const bool keep = register_node(node.name, name->loc);
        if (!open_block()) {
            if (keep) d_.constellation.nodes.push_back(std::move(node));
            return;
        }
        bool saw_ts = false;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at_keyword("time_scale")) {
                if (at(TokKind::Ident)) {
                    error("E003", "unknown keyword '" + cur().text + "' in enabler block",
                          cur().loc);
                } else {
                    error("E001", "expected 'time_scale:' or '}' but found " + describe(cur()),
                          cur().loc);
                }
                skip_block_rest();
                if (keep) d_.constellation.nodes.push_back(std::move(node));
                return;
            }
            const SourceLocation floc = cur().loc;
            next();
            if (!expect(TokKind::Colon, "':'")) {
                skip_block_rest();
                if (keep) d_.constellation.nodes.push_back(std::move(node));
                return;
            }
            next();
            if (saw_ts) error("E001", "duplicate 'time_scale:' attribute", floc);
            saw_ts = true;
            auto parsed = parse_time_scale_word();
            if (!parsed) {
                skip_block_rest();
                if (keep) d_.constellation.nodes.push_back(std::move(node));
                return;
            }
            node.time_scale = *parsed;
        }
        close_block();
        if (keep) d_.constellation.nodes.push_back(std::move(node));
    }

    void parse_model_datum(bool is_model) {
        const SourceLocation loc = cur().loc;
        next();
        auto name = expect_string(is_model ? "model name" : "datum name");
        if (!name) {
            skip_to_next_item();
            return;
        }
        if (!register_node(name->text, name->loc)) return;
        ConstellationNode node;
        node.name = name->text;
        node.kind = NodeKind::ModelData;
        node.declared_as_model = is_model;
        node.loc = loc;
        d_.constellation.nodes.push_back(std::move(node));
    }

    void parse_flow() {
        const SourceLocation loc = cur().loc;
        next();
        auto source = expect_string("flow source");
        if (!source) {
            skip_to_next_item();
            return;
        }
        if (!expect(TokKind::Arrow, "'->'")) {
            skip_to_next_item();
            return;
        }
        next();
        auto target = expect_string("flow target");
        if (!target) {
            skip_to_next_item();
            return;
        }
        FlowEdge edge{source->text, target->text, loc};
        const bool duplicate =
            std::find(d_.constellation.edges.begin(), d_.constellation.edges.end(), edge) !=
            d_.constellation.edges.end();
        if (duplicate) {
            warn("W002",
                 "duplicate flow \"" + edge.source + "\" -> \"" + edge.target + "\" ignored", loc);
            return;
        }
        d_.constellation.edges.push_back(std::move(edge));
    }

    void parse_lifecycle() {
        next();
        if (!at(TokKind::Ident)) {
            error("E001", "expected lifecycle stage identifier but found " + describe(cur()),
                  cur().loc);
            skip_to_next_item();
            return;
        }
        LifecycleStage stage;
        stage.stage = cur().text;
        stage.loc = cur().loc;
        const bool keep = stage_names_.insert(stage.stage).second;
        if (!keep) {
            error("E002", "duplicate lifecycle stage '" + stage.stage + "'", cur().loc);
        }
        next();
        if (!open_block()) {
            if (keep) d_.lifecycle_stages.push_back(std::move(stage));
            return;
        }
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at_keyword("usage")) {
                if (at(TokKind::Ident)) {
                    error("E003", "unknown keyword '" + cur().text + "' in lifecycle block",
                          cur().loc);
                } else {
                    error("E001", "expected 'usage' or '}' but found " + describe(cur()),
                          cur().loc);
                }
                skip_block_rest();
                if (keep) d_.lifecycle_stages.push_back(std::move(stage));
                return;
            }
            next();
            auto name = expect_string("usage name");
            if (!name) {
                skip_block_rest();
                if (keep) d_.lifecycle_stages.push_back(std::move(stage));
                return;
            }
            const bool duplicate =
                std::find_if(stage.usages.begin(), stage.usages.end(), [&](const UsageRef& r) {
                    return r.usage == name->text;
                }) != stage.usages.end();
            if (duplicate) {
                warn("W001", "duplicate usage \"" + name->text + "\" in lifecycle stage ignored",
                     name->loc);
                continue;
            }
            stage.usages.push_back(UsageRef{name->text, name->loc});
        }
        close_block();
        if (keep) d_.lifecycle_stages.push_back(std::move(stage));
    }

    void parse_fidelity() {
        next();
        auto usage = expect_string("usage name");
        if (!usage) {
            skip_to_next_item();
            return;
        }
        auto note = expect_string("fidelity text");
        if (!note) {
            skip_to_next_item();
            return;
        }
        if (!fidelity_usages_.insert(usage->text).second) {
            error("E002", "duplicate fidelity note for usage \"" + usage->text + "\"", usage->loc);
            return;
        }
        d_.fidelity_notes.push_back(FidelityNote{usage->text, note->text, usage->loc});
    }

    void parse_evolution() {
        next();
        if (!open_block()) return;
        if (!d_.evolution) d_.evolution.emplace();
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at_keyword("step")) {
                if (at(TokKind::Ident)) {
                    error("E003", "unknown keyword '" + cur().text + "' in evolution block",
                          cur().loc);
                } else {
                    error("E001", "expected 'step' or '}' but found " + describe(cur()), cur().loc);
                }
                skip_block_rest();
                return;
            }
            next();
            auto text = expect_string("step text");
            if (!text) {
                skip_block_rest();
                return;
            }
            d_.evolution->push_back(text->text);
        }
        close_block();
    }

    void resolve_flows() {
        for (const auto& edge : d_.constellation.edges) {
            if (!node_names_.count(edge.source)) {
                error("E004", "flow references undeclared node \"" + edge.source + "\"", edge.loc);
            }
            if (!node_names_.count(edge.target)) {
                error("E004", "flow references undeclared node \"" + edge.target + "\"", edge.loc);
            }
        }
    }

    // Channels are stored grouped: data items, then insights, then
    // actions, preserving source order within each group. This makes the
    // canonical rendering a faithful round-trip regardless of block order.
    void normalize_channels() {
        auto group = [](const ChannelItem& ch) {
            switch (ch.direction) {
                case ChannelDirection::Data: return 0;
                case ChannelDirection::Insight: return 1;
                default: return 2;
            }
        };
        std::stable_sort(d_.channels.begin(), d_.channels.end(),
                         [&](const ChannelItem& a, const ChannelItem& b) {
                             return group(a) < group(b);
                         });
    }

    std::vector<Token> toks_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
    DtDescription d_;
    std::set<std::string> node_names_;
    std::set<std::string> channel_names_;
    std::set<std::string> acting_names_;
    std::set<std::string> sensing_names_;
    std::set<std::string> stage_names_;
    std::set<std::string> fidelity_usages_;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c); break;
        }
    }
    out.push_back('"');
    return out;
}

}  // namespace

ParseResult parse(const SourceFile& src) {
    ParseResult result;
    Lexer lexer(src.content, result.diagnostics);
    Parser parser(lexer.run(), result.diagnostics);
    DtDescription d = parser.run();
    if (!has_errors(result.diagnostics)) result.description = std::move(d);
    return result;
}

std::string render(const DtDescription& d) {
    std::ostringstream out;
    out << "digital_twin " << quote(d.name) << " {\n";

    if (d.sus) {
        out << "  sus {\n";
        if (d.sus->system) out << "    system: " << quote(*d.sus->system) << "\n";
        if (d.sus->environment) out << "    environment: " << quote(*d.sus->environment) << "\n";
        for (const auto& agent : d.sus->agents) out << "    agent: " << quote(agent) << "\n";
        out << "  }\n";
    }
    if (d.acting) {
        out << "  acting {\n";
        for (const auto& c : *d.acting) out << "    component " << quote(c.name) << "\n";
        out << "  }\n";
    }
    if (d.sensing) {
        out << "  sensing {\n";
        for (const auto& c : *d.sensing) out << "    component " << quote(c.name) << "\n";
        out << "  }\n";
    }
    if (d.multiplicity) {
        out << "  multiplicity {\n";
        if (d.multiplicity->sus_entities) {
            out << "    sus_entities: " << *d.multiplicity->sus_entities << "\n";
        }
        if (d.multiplicity->dt_instances) {
            out << "    dt_instances: ";
            switch (d.multiplicity->dt_instances->kind) {
                case DtInstances::Kind::PerUsage: out << "per_usage"; break;
                case DtInstances::Kind::Single: out << "single"; break;
                case DtInstances::Kind::Count: out << d.multiplicity->dt_instances->count; break;
            }
            out << "\n";
        }
        if (d.multiplicity->note) out << "    note: " << quote(*d.multiplicity->note) << "\n";
        out << "  }\n";
    }

    auto any_channel = [&](ChannelDirection dir) {
        return std::any_of(d.channels.begin(), d.channels.end(),
                           [&](const ChannelItem& ch) { return ch.direction == dir; });
    };
    const bool emit_data =
        d.data_block_present || d.automatic_data_none || any_channel(ChannelDirection::Data);
    if (emit_data) {
        out << "  data {\n";
        if (d.automatic_data_none) out << "    automatic none\n";
        for (const auto& ch : d.channels) {
            if (ch.direction != ChannelDirection::Data) continue;
            out << "    "
                << (ch.transfer == TransferMode::Automatic ? "automatic " : "manual ")
                << quote(ch.name);
            if (ch.time_scale != TimeScale::Unreported) {
                out << " @ " << time_scale_keyword(ch.time_scale);
            }
            out << "\n";
        }
        out << "  }\n";
    }
    if (d.insights_block_present || any_channel(ChannelDirection::Insight)) {
        out << "  insights {\n";
        for (const auto& ch : d.channels) {
            if (ch.direction != ChannelDirection::Insight) continue;
            out << "    insight " << quote(ch.name) << "\n";
        }
        out << "  }\n";
    }
    const bool emit_actions = d.actions_block_present || d.automatic_actions_none ||
                              any_channel(ChannelDirection::AutomaticAction) ||
                              any_channel(ChannelDirection::AgentAction);
    if (emit_actions) {
        out << "  actions {\n";
        if (d.automatic_actions_none) out << "    automatic none\n";
        for (const auto& ch : d.channels) {
            if (ch.direction == ChannelDirection::AutomaticAction) {
                out << "    automatic " << quote(ch.name) << "\n";
            } else if (ch.direction == ChannelDirection::AgentAction) {
                out << "    agent " << quote(ch.name) << "\n";
            }
        }
        out << "  }\n";
    }

    for (const auto& n : d.constellation.nodes) {
        switch (n.kind) {
            case NodeKind::Usage: {
                out << "  usage " << quote(n.name) << " {\n";
                if (n.mode != UsageMode::Unreported) {
                    out << "    mode: " << usage_mode_keyword(n.mode) << "\n";
                }
                if (n.time_scale != TimeScale::Unreported) {
                    out << "    time_scale: " << time_scale_keyword(n.time_scale) << "\n";
                }
                if (!n.lifecycles.empty()) {
                    out << "    lifecycle: ";
                    for (std::size_t i = 0; i < n.lifecycles.size(); ++i) {
                        if (i) out << ", ";
                        out << n.lifecycles[i];
                    }
                    out << "\n";
                }
                if (n.fidelity_note) out << "    fidelity: " << quote(*n.fidelity_note) << "\n";
                out << "  }\n";
                break;
            }
            case NodeKind::Enabler: {
                out << "  enabler " << quote(n.name) << " {\n";
                if (n.time_scale != TimeScale::Unreported) {
                    out << "    time_scale: " << time_scale_keyword(n.time_scale) << "\n";
                }
                out << "  }\n";
                break;
            }
            case NodeKind::ModelData:
                out << "  " << (n.declared_as_model ? "model " : "datum ") << quote(n.name)
                    << "\n";
                break;
        }
    }
    for (const auto& e : d.constellation.edges) {
        out << "  flow " << quote(e.source) << " -> " << quote(e.target) << "\n";
    }

    for (const auto& stage : d.lifecycle_stages) {
        out << "  lifecycle " << stage.stage << " {\n";
        for (const auto& ref : stage.usages) out << "    usage " << quote(ref.usage) << "\n";
        out << "  }\n";
    }
    for (const auto& fn : d.fidelity_notes) {
        out << "  fidelity " << quote(fn.usage) << " " << quote(fn.note) << "\n";
    }
    if (d.evolution) {
        out << "  evolution {\n";
        for (const auto& step : *d.evolution) out << "    step " << quote(step) << "\n";
        out << "  }\n";
    }

    out << "}\n";
    return out.str();
}

}  // namespace twindesc
