#include "archloom/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace archloom {

namespace {

constexpr int kMaxNestingDepth = 100;
constexpr size_t kMaxDiagnosticsPerFile = 1000;

struct Token {
    enum class Type {
        Ident,
        Str,
        LBrace,
        RBrace,
        LParen,
        RParen,
        Comma,
        Arrow,
        End,
    };

    Type type = Type::End;
    std::string text;  // identifier spelling or decoded string value
    SourceSpan span;
};

std::string describe(const Token& token) {
    switch (token.type) {
        case Token::Type::Ident: return "'" + token.text + "'";
        case Token::Type::Str: return "string";
        case Token::Type::LBrace: return "'{'";
        case Token::Type::RBrace: return "'}'";
        case Token::Type::LParen: return "'('";
        case Token::Type::RParen: return "')'";
        case Token::Type::Comma: return "','";
        case Token::Type::Arrow: return "'->'";
        case Token::Type::End: return "end of file";
    }
    return "token";
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c));
}

bool is_ident_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '.';
}

class Lexer {
public:
    Lexer(const SourceText& file, std::vector<Diagnostic>& diagnostics)
        : name_(file.name), src_(file.text), diagnostics_(diagnostics) {}

    Token next() {
        skip_trivia();
        Token token;
        token.span = here(0);
        if (at_end()) {
            token.type = Token::Type::End;
            return token;
        }
        char c = src_[pos_];
        switch (c) {
            case '{': return punct(Token::Type::LBrace);
            case '}': return punct(Token::Type::RBrace);
            case '(': return punct(Token::Type::LParen);
            case ')': return punct(Token::Type::RParen);
            case ',': return punct(Token::Type::Comma);
            case '-':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                    Token t;
                    t.type = Token::Type::Arrow;
                    t.span = here(2);
                    advance();
                    advance();
                    return t;
                }
                break;
            case '"': return lex_string();
            default: break;
        }
        if (is_ident_start(c)) return lex_ident();
        return lex_bad_run();
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }

    void advance() {
        if (at_end()) return;
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    SourceSpan here(int length) const {
        SourceSpan span;
        span.file = name_;
        span.line = line_;
        span.column = column_;
        span.length = length;
        return span;
    }

    void skip_trivia() {
        while (!at_end()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                while (!at_end() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token punct(Token::Type type) {
        Token token;
        token.type = type;
        token.span = here(1);
        advance();
        return token;
    }

    Token lex_ident() {
        Token token;
        token.type = Token::Type::Ident;
        token.span = here(0);
        size_t start = pos_;
        while (!at_end() && is_ident_char(src_[pos_])) advance();
        token.text = std::string(src_.substr(start, pos_ - start));
        token.span.length = static_cast<int>(token.text.size());
        return token;
    }

    // Both string forms decode \" and \\; the triple-quoted form may span
    // lines and drops one newline right after the opening quotes plus the
    // final newline and trailing blanks before the closing quotes.
    Token lex_string() {
        Token token;
        token.type = Token::Type::Str;
        token.span = here(1);
        bool triple = src_.compare(pos_, 3, "\"\"\"") == 0;
        int open_line = line_;
        for (int i = 0; i < (triple ? 3 : 1); ++i) advance();
        std::string value;
        bool terminated = false;
        while (!at_end()) {
            char c = src_[pos_];
            if (!triple && c == '\n') break;
            if (c == '"') {
                if (!triple) {
                    advance();
                    terminated = true;
                    break;
                }
                if (src_.compare(pos_, 3, "\"\"\"") == 0) {
                    advance();
                    advance();
                    advance();
                    terminated = true;
                    break;
                }
                value += c;
                advance();
                continue;
            }
            if (c == '\\') {
                if (pos_ + 1 < src_.size() &&
                    (src_[pos_ + 1] == '"' || src_[pos_ + 1] == '\\')) {
                    value += src_[pos_ + 1];
                    advance();
                    advance();
                    continue;
                }
                report("P001", "invalid escape sequence in string", here(2));
                value += c;
                advance();
                continue;
            }
            value += c;
            advance();
        }
        if (!terminated) {
            report("P001", "unterminated string", token.span);
        }
        if (triple && terminated) {
            if (!value.empty() && value.front() == '\n') value.erase(0, 1);
            // Blanks between the last newline and the closing quotes belong
            // to the delimiter's own line, not to the text.
            size_t last_newline = value.find_last_of('\n');
            if (last_newline != std::string::npos &&
                value.find_first_not_of(" \t", last_newline + 1) ==
                    std::string::npos) {
                value.erase(last_newline);
            }
        }
        token.text = std::move(value);
        // Spans never cross lines; cap a multi-line token at its first line.
        if (line_ > open_line) {
            token.span.length = 0;
        } else {
            token.span.length = column_ - token.span.column;
        }
        return token;
    }

    Token lex_bad_run() {
        SourceSpan span = here(0);
        size_t start = pos_;
        while (!at_end()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#' ||
                c == '{' || c == '}' || c == '(' || c == ')' || c == ',' ||
                c == '"' || is_ident_start(c) ||
                (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>')) {
                break;
            }
            advance();
        }
        span.length = static_cast<int>(std::min(pos_ - start,
                                                src_.size() - start));
        if (span.length == 0) {  // lone '-' and similar single-char stragglers
            span.length = 1;
            advance();
        }
        report("P001", "unexpected character(s) in input", span);
        return next();
    }

    void report(std::string code, std::string message, SourceSpan span) {
        diagnostics_.push_back(
            make_diagnostic(std::move(code), std::move(message), {}, span));
    }

    std::string name_;
    std::string_view src_;
    std::vector<Diagnostic>& diagnostics_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

/// Recursive-descent parser for one file. Elements and links accumulate in
/// the shared Declarations; the sequence counter spans all files so that
/// declaration order is global.
class FileParser {
public:
    FileParser(const SourceText& file, Declarations& out, int& seq)
        : out_(out),
          seq_(seq),
          lexer_(file, out.diagnostics),
          initial_diagnostics_(out.diagnostics.size()) {
        advance();
    }

    void run() {
        std::set<std::string> top_scope;
        while (current_.type != Token::Type::End) {
            if (too_many_errors()) return;
            if (current_.type == Token::Type::Ident) {
                const std::string& kw = current_.text;
                if (kw == "process") {
                    parse_process(top_scope);
                    continue;
                }
                if (kw == "service") {
                    parse_service(top_scope);
                    continue;
                }
                if (kw == "component") {
                    parse_component(top_scope);
                    continue;
                }
                if (kw == "class") {
                    parse_class(top_scope);
                    continue;
                }
            }
            error_here("expected a declaration (process, service, component or class), found " +
                       describe(current_));
            sync_to_toplevel();
        }
    }

private:
    static bool is_toplevel_keyword(const Token& token) {
        return token.type == Token::Type::Ident &&
               (token.text == "process" || token.text == "service" ||
                token.text == "component" || token.text == "class");
    }

    void advance() { current_ = lexer_.next(); }

    bool too_many_errors() {
        if (bailed_) return true;
        if (out_.diagnostics.size() - initial_diagnostics_ < kMaxDiagnosticsPerFile) {
            return false;
        }
        bailed_ = true;
        out_.diagnostics.push_back(make_diagnostic(
            "P002", "too many errors, giving up on this file", {}, current_.span));
        return true;
    }

    void error_here(std::string message) {
        out_.diagnostics.push_back(
            make_diagnostic("P002", std::move(message), {}, current_.span));
    }

    void sync_to_toplevel() {
        while (current_.type != Token::Type::End && !is_toplevel_keyword(current_)) {
            if (too_many_errors()) return;
            advance();
        }
    }

    // Each expect_* returns false after reporting P002; callers then recover.
    bool expect_keyword(std::string_view keyword) {
        if (current_.type == Token::Type::Ident && current_.text == keyword) {
            advance();
            return true;
        }
        error_here("expected '" + std::string(keyword) + "', found " +
                   describe(current_));
        return false;
    }

    bool expect_ident(std::string& into, SourceSpan* span = nullptr) {
        if (current_.type == Token::Type::Ident) {
            into = current_.text;
            if (span) *span = current_.span;
            advance();
            return true;
        }
        error_here("expected an identifier, found " + describe(current_));
        return false;
    }

    bool expect_string(std::string& into) {
        if (current_.type == Token::Type::Str) {
            into = current_.text;
            advance();
            return true;
        }
        error_here("expected a string, found " + describe(current_));
        return false;
    }

    bool expect_token(Token::Type type, const char* what) {
        if (current_.type == type) {
            advance();
            return true;
        }
        error_here(std::string("expected ") + what + ", found " +
                   describe(current_));
        return false;
    }

    bool at_keyword(std::string_view keyword) const {
        return current_.type == Token::Type::Ident && current_.text == keyword;
    }

    // Declares an element; duplicate ids in the same scope get P003 and are
    // dropped here so build_model does not re-report them as E001.
    bool declare(std::set<std::string>& scope, ArchElement element) {
        if (!scope.insert(element.id).second) {
            out_.diagnostics.push_back(make_diagnostic(
                "P003",
                "duplicate declaration of '" + element.id + "' in this scope",
                element.id, element.src));
            return false;
        }
        element.seq = seq_++;
        out_.elements.push_back(std::move(element));
        return true;
    }

    void add_link(std::string from, std::string to, LinkKind kind,
                  SourceSpan span) {
        out_.links.push_back({std::move(from), std::move(to), kind, span});
    }

    bool parse_ref_list(std::vector<std::pair<std::string, SourceSpan>>& refs) {
        do {
            std::string ref;
            SourceSpan span;
            if (!expect_ident(ref, &span)) return false;
            refs.emplace_back(std::move(ref), span);
        } while (current_.type == Token::Type::Comma && (advance(), true));
        return true;
    }

    // desc_block := "{" "desc" STR "}"
    void parse_desc_block(ArchElement& element) {
        if (current_.type != Token::Type::LBrace) return;
        advance();
        std::string text;
        if (!expect_keyword("desc") || !expect_string(text)) {
            sync_to_toplevel();
            return;
        }
        element.attrs[std::string(kAttrDesc)] = std::move(text);
        if (!expect_token(Token::Type::RBrace, "'}'")) sync_to_toplevel();
    }

    void parse_process(std::set<std::string>& scope) {
        ArchElement element;
        element.kind = ElementKind::BusinessProcess;
        element.src = current_.span;
        advance();  // 'process'
        if (!expect_ident(element.id) || !expect_string(element.name) ||
            !expect_token(Token::Type::LBrace, "'{'")) {
            sync_to_toplevel();
            return;
        }
        bool live = declare(scope, element);
        std::set<std::string> inner;
        while (!at_end_of_block()) {
            if (at_keyword("function")) {
                parse_bfunc(inner, element.id, live, 1);
            } else {
                error_here("expected 'function' or '}', found " +
                           describe(current_));
                sync_to_toplevel();
                return;
            }
        }
        close_block();
    }

    void parse_bfunc(std::set<std::string>& scope, const std::string& parent_id,
                     bool live, int depth) {
        if (depth > kMaxNestingDepth) {
            error_here("nesting too deep");
            sync_to_toplevel();
            return;
        }
        ArchElement element;
        element.kind = ElementKind::BusinessFunction;
        element.src = current_.span;
        advance();  // 'function'
        if (!expect_ident(element.id) || !expect_string(element.name) ||
            !expect_token(Token::Type::LBrace, "'{'")) {
            sync_to_toplevel();
            return;
        }
        std::string id = element.id;
        SourceSpan src = element.src;
        bool this_live = live && declare(scope, std::move(element));
        if (this_live) {
            add_link(parent_id, id, LinkKind::Contains, src);
        }
        std::set<std::string> inner;
        while (!at_end_of_block()) {
            if (at_keyword("function")) {
                parse_bfunc(inner, id, this_live, depth + 1);
            } else if (at_keyword("operation")) {
                parse_boper(inner, id, this_live);
            } else {
                error_here("expected 'function', 'operation' or '}', found " +
                           describe(current_));
                sync_to_toplevel();
                return;
            }
        }
        close_block();
    }

    void parse_boper(std::set<std::string>& scope, const std::string& parent_id,
                     bool live) {
        ArchElement element;
        element.kind = ElementKind::BusinessOperation;
        element.src = current_.span;
        advance();  // 'operation'
        if (!expect_ident(element.id) || !expect_string(element.name)) {
            sync_to_toplevel();
            return;
        }
        parse_desc_block(element);
        std::string id = element.id;
        SourceSpan src = element.src;
        if (live && declare(scope, std::move(element))) {
            add_link(parent_id, id, LinkKind::Contains, src);
        }
    }

    void parse_service(std::set<std::string>& scope) {
        ArchElement element;
        element.kind = ElementKind::OperationalService;
        element.src = current_.span;
        advance();  // 'service'
        std::string implements_ref;
        SourceSpan implements_span;
        if (!expect_ident(element.id) || !expect_string(element.name) ||
            !expect_keyword("implements") ||
            !expect_ident(implements_ref, &implements_span) ||
            !expect_token(Token::Type::LBrace, "'{'")) {
            sync_to_toplevel();
            return;
        }
        std::string id = element.id;
        SourceSpan src = element.src;
        bool live = declare(scope, std::move(element));
        if (live) {
            add_link(id, implements_ref, LinkKind::Implements, implements_span);
        }
        std::set<std::string> inner;
        bool saw_dialog = false;
        while (!at_end_of_block()) {
            if (at_keyword("autofn")) {
                if (saw_dialog) {
                    error_here("automated functions must be declared before dialogs");
                    sync_to_toplevel();
                    return;
                }
                parse_autofn(inner, id, live);
            } else if (at_keyword("dialog")) {
                saw_dialog = true;
                parse_dialog(inner, id, live);
            } else {
                error_here("expected 'autofn', 'dialog' or '}', found " +
                           describe(current_));
                sync_to_toplevel();
                return;
            }
        }
        close_block();
    }

    void parse_autofn(std::set<std::string>& scope, const std::string& parent_id,
                      bool live) {
        ArchElement element;
        element.kind = ElementKind::AutomatedFunction;
        element.src = current_.span;
        advance();  // 'autofn'
        if (!expect_ident(element.id) || !expect_string(element.name)) {
            sync_to_toplevel();
            return;
        }
        std::string id = element.id;
        SourceSpan src = element.src;
        if (live && declare(scope, std::move(element))) {
            add_link(parent_id, id, LinkKind::Contains, src);
        }
    }

    void parse_dialog(std::set<std::string>& scope, const std::string& parent_id,
                      bool live) {
        ArchElement element;
        element.kind = ElementKind::Dialog;
        element.src = current_.span;
        advance();  // 'dialog'
        if (!expect_ident(element.id) || !expect_string(element.name) ||
            !expect_token(Token::Type::LBrace, "'{'")) {
            sync_to_toplevel();
            return;
        }
        std::string form;
        if (!expect_keyword("form") || !expect_string(form)) {
            sync_to_toplevel();
            return;
        }
        element.attrs[std::string(kAttrForm)] = std::move(form);
        std::string id = element.id;
        SourceSpan src = element.src;
        bool this_live = live && declare(scope, std::move(element));
        if (this_live) {
            add_link(parent_id, id, LinkKind::Contains, src);
        }
        std::set<std::string> inner;
        while (!at_end_of_block()) {
            if (at_keyword("viewfn")) {
                parse_viewfn(inner, id, this_live);
            } else {
                error_here("expected 'viewfn' or '}', found " +
                           describe(current_));
                sync_to_toplevel();
                return;
            }
        }
        close_block();
    }

    void parse_viewfn(std::set<std::string>& scope, const std::string& parent_id,
                      bool live) {
        ArchElement element;
        element.kind = ElementKind::ViewFunction;
        element.src = current_.span;
        advance();  // 'viewfn'
        if (!expect_ident(element.id) || !expect_string(element.name)) {
            sync_to_toplevel();
            return;
        }
        std::vector<std::pair<std::string, SourceSpan>> covers;
        if (at_keyword("covers")) {
            advance();
            if (!parse_ref_list(covers)) {
                sync_to_toplevel();
                return;
            }
        }
        std::string flow_ref;
        SourceSpan flow_span;
        if (at_keyword("flows")) {
            advance();
            if (!expect_token(Token::Type::Arrow, "'->'")) {
                sync_to_toplevel();
                return;
            }
            if (at_keyword("external")) {
                advance();
                std::string target;
                if (!expect_string(target)) {
                    sync_to_toplevel();
                    return;
                }
                element.attrs[std::string(kAttrFlowsExternal)] = std::move(target);
            } else if (!expect_ident(flow_ref, &flow_span)) {
                sync_to_toplevel();
                return;
            }
        }
        parse_desc_block(element);
        std::string id = element.id;
        SourceSpan src = element.src;
        if (!live || !declare(scope, std::move(element))) return;
        add_link(parent_id, id, LinkKind::Contains, src);
        for (auto& [target, span] : covers) {
            add_link(id, std::move(target), LinkKind::Covers, span);
        }
        if (!flow_ref.empty()) {
            add_link(id, std::move(flow_ref), LinkKind::FlowsTo, flow_span);
        }
    }

    void parse_component(std::set<std::string>& scope) {
        ArchElement element;
        element.kind = ElementKind::Component;
        element.src = current_.span;
        advance();  // 'component'
        if (!expect_ident(element.id) || !expect_string(element.name) ||
            !expect_keyword("kind")) {
            sync_to_toplevel();
            return;
        }
        if (at_keyword("subsystem") || at_keyword("external")) {
            element.attrs[std::string(kAttrKindTag)] = current_.text;
            advance();
        } else {
            error_here("expected 'subsystem' or 'external', found " +
                       describe(current_));
            sync_to_toplevel();
            return;
        }
        if (!expect_token(Token::Type::LBrace, "'{'")) {
            sync_to_toplevel();
            return;
        }
        std::string id = element.id;
        bool live = declare(scope, std::move(element));
        std::set<std::string> inner;
        while (!at_end_of_block()) {
            if (at_keyword("module")) {
                parse_realizer(inner, ElementKind::Module, id, live);
            } else {
                error_here("expected 'module' or '}', found " +
                           describe(current_));
                sync_to_toplevel();
                return;
            }
        }
        close_block();
    }

    void parse_class(std::set<std::string>& scope) {
        ArchElement element;
        element.kind = ElementKind::Class;
        element.src = current_.span;
        advance();  // 'class'
        std::string component_ref;
        SourceSpan component_span;
        if (!expect_ident(element.id) || !expect_string(element.name) ||
            !expect_keyword("in") ||
            !expect_ident(component_ref, &component_span) ||
            !expect_token(Token::Type::LBrace, "'{'")) {
            sync_to_toplevel();
            return;
        }
        std::string id = element.id;
        bool live = declare(scope, std::move(element));
        if (live) {
            add_link(std::move(component_ref), id, LinkKind::Contains,
                     component_span);
        }
        std::set<std::string> inner;
        while (!at_end_of_block()) {
            if (at_keyword("method")) {
                parse_realizer(inner, ElementKind::Method, id, live);
            } else {
                error_here("expected 'method' or '}', found " +
                           describe(current_));
                sync_to_toplevel();
                return;
            }
        }
        close_block();
    }

    // module and method share a shape: ID (params)? realizes REF+ ({desc})?
    // Neither carries a display name in the source; the id doubles as one.
    void parse_realizer(std::set<std::string>& scope, ElementKind kind,
                        const std::string& parent_id, bool live) {
        ArchElement element;
        element.kind = kind;
        element.src = current_.span;
        advance();  // 'module' or 'method'
        if (!expect_ident(element.id)) {
            sync_to_toplevel();
            return;
        }
        element.name = element.id;
        if (at_keyword("params")) {
            advance();
            if (!expect_token(Token::Type::LParen, "'('")) {
                sync_to_toplevel();
                return;
            }
            std::string params;
            do {
                std::string param;
                if (!expect_ident(param)) {
                    sync_to_toplevel();
                    return;
                }
                if (!params.empty()) params += ", ";
                params += param;
            } while (current_.type == Token::Type::Comma && (advance(), true));
            if (!expect_token(Token::Type::RParen, "')'")) {
                sync_to_toplevel();
                return;
            }
            element.attrs[std::string(kAttrParams)] = std::move(params);
        }
        std::vector<std::pair<std::string, SourceSpan>> targets;
        if (!expect_keyword("realizes") || !parse_ref_list(targets)) {
            sync_to_toplevel();
            return;
        }
        parse_desc_block(element);
        std::string id = element.id;
        SourceSpan src = element.src;
        if (!live || !declare(scope, std::move(element))) return;
        add_link(parent_id, id, LinkKind::Contains, src);
        for (auto& [target, span] : targets) {
            add_link(id, std::move(target), LinkKind::Realizes, span);
        }
    }

    bool at_end_of_block() {
        if (too_many_errors()) return true;
        if (current_.type == Token::Type::RBrace) return true;
        if (current_.type == Token::Type::End) {
            error_here("unexpected end of file inside a block");
            return true;
        }
        return false;
    }

    void close_block() {
        if (current_.type == Token::Type::RBrace) advance();
    }

    Declarations& out_;
    int& seq_;
    Lexer lexer_;
    Token current_;
    size_t initial_diagnostics_ = 0;
    bool bailed_ = false;
};

}  // namespace

Declarations parse_declarations(const std::vector<SourceText>& files) {
    Declarations out;
    int seq = 0;
    for (const SourceText& file : files) {
        FileParser parser(file, out, seq);
        parser.run();
    }
    return out;
}

ParseResult parse(const std::vector<SourceText>& files) {
    Declarations decls = parse_declarations(files);
    if (has_errors(decls.diagnostics)) {
        return {std::nullopt, std::move(decls.diagnostics)};
    }
    BuildResult built =
        build_model(std::move(decls.elements), std::move(decls.links));
    std::vector<Diagnostic> diagnostics = std::move(decls.diagnostics);
    diagnostics.insert(diagnostics.end(), built.diagnostics.begin(),
                       built.diagnostics.end());
    return {std::move(built.model), std::move(diagnostics)};
}

SourceSpan locate(const ParseResult& result, std::string_view id) {
    if (!result.model) {
        throw ArchError(make_diagnostic(
            "E101", "unknown element '" + std::string(id) + "' (no model)",
            std::string(id)));
    }
    return result.model->at(id).src;
}

}  // namespace archloom
