#include "scc/codeform/solidity_parser.hpp"

#include <array>
#include <optional>

#include "scc/codeform/solidity_lexer.hpp"

namespace scc::codeform {

namespace {

constexpr std::size_t kMaxDepth = 256;

constexpr std::array kUnits = {"wei", "gwei", "szabo", "finney", "ether", "seconds",
                               "minutes", "hours", "days", "weeks", "years"};

constexpr std::array kAssignOps = {"=", "|=", "^=", "&=", "<<=", ">>=", ">>>=",
                                   "+=", "-=", "*=", "/=", "%="};

struct BinaryLevel {
    std::array<const char*, 4> ops;
    bool right_assoc;
};

// lowest precedence first
constexpr std::array<BinaryLevel, 11> kBinaryLevels = {{
    {{"||", nullptr, nullptr, nullptr}, false},
    {{"&&", nullptr, nullptr, nullptr}, false},
    {{"==", "!=", nullptr, nullptr}, false},
    {{"<", ">", "<=", ">="}, false},
    {{"|", nullptr, nullptr, nullptr}, false},
    {{"^", nullptr, nullptr, nullptr}, false},
    {{"&", nullptr, nullptr, nullptr}, false},
    {{"<<", ">>", ">>>", nullptr}, false},
    {{"+", "-", nullptr, nullptr}, false},
    {{"*", "/", "%", nullptr}, false},
    {{"**", nullptr, nullptr, nullptr}, true},
}};

bool is_location(const Token& t) {
    return t.is_keyword("memory") || t.is_keyword("storage") || t.is_keyword("calldata");
}

bool is_function_attribute_keyword(const Token& t) {
    if (t.kind != TokenKind::keyword) return false;
    for (const char* k : {"public", "private", "internal", "external", "pure", "view", "payable",
                          "constant", "virtual", "immutable"}) {
        if (t.text == k) return true;
    }
    return false;
}

class Parser {
public:
    explicit Parser(std::string_view source) : tokens_(lex_solidity(source)) {}

    AstNode parse_source_unit() {
        AstNode root = AstNode::node("SourceUnit");
        while (!at_end()) root.children.push_back(parse_top_level());
        return root;
    }

private:
    // --- token helpers --------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at_end() const { return peek().kind == TokenKind::end; }
    const Token& advance() {
        const Token& t = peek();
        if (!at_end()) ++pos_;
        return t;
    }
    bool accept_punct(std::string_view p) {
        if (peek().is_punct(p)) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_keyword(std::string_view k) {
        if (peek().is_keyword(k)) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        throw ParseError("expected " + what + ", found \"" + t.text + "\"", t.offset);
    }
    void expect_punct(std::string_view p) {
        if (!accept_punct(p)) fail("'" + std::string(p) + "'");
    }
    std::string expect_identifier() {
        if (peek().kind != TokenKind::identifier) fail("identifier");
        return advance().text;
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : parser(p) {
            if (++parser.depth_ > kMaxDepth) {
                throw ParseError("nesting too deep", parser.peek().offset);
            }
        }
        ~DepthGuard() { --parser.depth_; }
        Parser& parser;
    };

    // --- definitions -----------------------------------------------------

    AstNode parse_top_level() {
        const Token& t = peek();
        if (t.is_keyword("function")) return parse_function();
        if (t.is_keyword("modifier")) return parse_modifier();
        if (t.is_keyword("constructor")) return parse_special_function("ConstructorDefinition");
        if ((t.is_keyword("fallback") || t.is_keyword("receive")) && peek(1).is_punct("(")) {
            return parse_special_function(t.text == "fallback" ? "FallbackDefinition"
                                                               : "ReceiveDefinition");
        }
        return parse_statement();
    }

    AstNode parse_function() {
        advance();  // function
        AstNode fn = AstNode::node("FunctionDefinition");
        if (peek().kind == TokenKind::identifier || peek().is_keyword("fallback") ||
            peek().is_keyword("receive")) {
            fn.children.push_back(AstNode::leaf(advance().text));
        }
        fn.children.push_back(parse_parameter_list());
        parse_attributes(fn);
        if (accept_keyword("returns")) {
            fn.children.push_back(AstNode::node("Returns", {parse_parameter_list()}));
            parse_attributes(fn);
        }
        parse_body(fn);
        return fn;
    }

    AstNode parse_special_function(const char* kind) {
        advance();
        AstNode fn = AstNode::node(kind);
        fn.children.push_back(parse_parameter_list());
        parse_attributes(fn);
        if (accept_keyword("returns")) {
            fn.children.push_back(AstNode::node("Returns", {parse_parameter_list()}));
            parse_attributes(fn);
        }
        parse_body(fn);
        return fn;
    }

    AstNode parse_modifier() {
        advance();  // modifier
        AstNode mod = AstNode::node("ModifierDefinition");
        mod.children.push_back(AstNode::leaf(expect_identifier()));
        if (peek().is_punct("(")) mod.children.push_back(parse_parameter_list());
        parse_attributes(mod);
        parse_body(mod);
        return mod;
    }

    void parse_body(AstNode& owner) {
        if (accept_punct(";")) return;
        owner.children.push_back(parse_block());
    }

    void parse_attributes(AstNode& owner) {
        for (;;) {
            const Token& t = peek();
            if (is_function_attribute_keyword(t)) {
                owner.children.push_back(AstNode::leaf(advance().text));
            } else if (t.is_keyword("override")) {
                advance();
                AstNode ov = AstNode::node("OverrideSpecifier");
                if (accept_punct("(")) {
                    do {
                        ov.children.push_back(AstNode::leaf(parse_path()));
                    } while (accept_punct(","));
                    expect_punct(")");
                }
                owner.children.push_back(std::move(ov));
            } else if (t.kind == TokenKind::identifier) {
                AstNode inv = AstNode::node("ModifierInvocation");
                inv.children.push_back(AstNode::leaf(parse_path()));
                if (peek().is_punct("(")) parse_call_arguments(inv);
                owner.children.push_back(std::move(inv));
            } else {
                return;
            }
        }
    }

    std::string parse_path() {
        std::string path = expect_identifier();
        while (peek().is_punct(".") && peek(1).kind == TokenKind::identifier) {
            advance();
            path += "." + advance().text;
        }
        return path;
    }

    AstNode parse_parameter_list() {
        expect_punct("(");
        AstNode list = AstNode::node("ParameterList");
        if (!accept_punct(")")) {
            do {
                list.children.push_back(parse_parameter());
            } while (accept_punct(","));
            expect_punct(")");
        }
        return list;
    }

    AstNode parse_parameter() {
        AstNode p = AstNode::node("Parameter");
        p.children.push_back(parse_type_name());
        while (is_location(peek()) || peek().is_keyword("indexed")) {
            p.children.push_back(AstNode::leaf(advance().text));
        }
        if (peek().kind == TokenKind::identifier) p.children.push_back(AstNode::leaf(advance().text));
        return p;
    }

    // --- types ------------------------------------------------------------

    AstNode parse_type_name() {
        DepthGuard guard(*this);
        AstNode type;
        const Token& t = peek();
        if (t.is_keyword("mapping")) {
            advance();
            expect_punct("(");
            AstNode key = parse_type_name();
            if (peek().kind == TokenKind::identifier) advance();  // named key
            expect_punct("=>");
            AstNode value = parse_type_name();
            if (peek().kind == TokenKind::identifier) advance();  // named value
            expect_punct(")");
            type = AstNode::node("Mapping", {std::move(key), std::move(value)});
        } else if (t.is_keyword("function")) {
            fail("type name (function types are not supported)");
        } else if (t.kind == TokenKind::identifier && is_elementary_type(t.text)) {
            std::string name = advance().text;
            if (name == "address" && peek().is_keyword("payable")) name += " " + advance().text;
            type = AstNode::node("ElementaryTypeName", {AstNode::leaf(std::move(name))});
        } else if (t.is_keyword("var")) {
            type = AstNode::node("ElementaryTypeName", {AstNode::leaf(advance().text)});
        } else if (t.kind == TokenKind::identifier) {
            type = AstNode::node("UserDefinedTypeName", {AstNode::leaf(parse_path())});
        } else {
            fail("type name");
        }
        while (peek().is_punct("[")) {
            advance();
            AstNode arr = AstNode::node("ArrayTypeName", {std::move(type)});
            if (!peek().is_punct("]")) arr.children.push_back(parse_expression());
            expect_punct("]");
            type = std::move(arr);
        }
        return type;
    }

    // --- statements --------------------------------------------------------

    AstNode parse_block() {
        DepthGuard guard(*this);
        expect_punct("{");
        AstNode block = AstNode::node("Block");
        while (!accept_punct("}")) {
            if (at_end()) fail("'}'");
            block.children.push_back(parse_statement());
        }
        return block;
    }

    AstNode parse_statement() {
        DepthGuard guard(*this);
        const Token& t = peek();
        if (t.is_punct("{")) return parse_block();
        if (t.is_keyword("unchecked") && peek(1).is_punct("{")) {
            advance();
            return AstNode::node("UncheckedBlock", {parse_block()});
        }
        if (t.is_keyword("if")) {
            advance();
            expect_punct("(");
            AstNode cond = parse_expression();
            expect_punct(")");
            AstNode node = AstNode::node("IfStatement", {std::move(cond), parse_statement()});
            if (accept_keyword("else")) node.children.push_back(parse_statement());
            return node;
        }
        if (t.is_keyword("for")) return parse_for();
        if (t.is_keyword("while")) {
            advance();
            expect_punct("(");
            AstNode cond = parse_expression();
            expect_punct(")");
            return AstNode::node("WhileStatement", {std::move(cond), parse_statement()});
        }
        if (t.is_keyword("do")) {
            advance();
            AstNode body = parse_statement();
            if (!accept_keyword("while")) fail("'while'");
            expect_punct("(");
            AstNode cond = parse_expression();
            expect_punct(")");
            expect_punct(";");
            return AstNode::node("DoWhileStatement", {std::move(body), std::move(cond)});
        }
        if (t.is_keyword("return")) {
            advance();
            AstNode node = AstNode::node("Return");
            if (!peek().is_punct(";")) node.children.push_back(parse_expression());
            expect_punct(";");
            return node;
        }
        if (t.is_keyword("emit")) {
            advance();
            AstNode node = AstNode::node("EmitStatement", {parse_expression()});
            expect_punct(";");
            return node;
        }
        if (t.kind == TokenKind::identifier && t.text == "revert" &&
            peek(1).kind == TokenKind::identifier) {
            advance();
            AstNode node = AstNode::node("RevertStatement", {parse_expression()});
            expect_punct(";");
            return node;
        }
        if (t.is_keyword("break") || t.is_keyword("continue") || t.is_keyword("throw")) {
            std::string kind = t.text == "break" ? "Break" : t.text == "continue" ? "Continue" : "Throw";
            advance();
            expect_punct(";");
            return AstNode::node(std::move(kind));
        }
        if (t.kind == TokenKind::identifier && t.text == "_" && peek(1).is_punct(";")) {
            advance();
            advance();
            return AstNode::node("PlaceholderStatement");
        }
        if (t.is_keyword("assembly")) return parse_assembly();
        if (t.is_keyword("try")) return parse_try();

        if (auto decl = try_parse_declaration()) {
            expect_punct(";");
            return std::move(*decl);
        }
        AstNode node = AstNode::node("ExpressionStatement", {parse_expression()});
        expect_punct(";");
        return node;
    }

    AstNode parse_for() {
        advance();  // for
        expect_punct("(");
        AstNode node = AstNode::node("ForStatement");
        if (!accept_punct(";")) {
            if (auto decl = try_parse_declaration()) {
                node.children.push_back(std::move(*decl));
            } else {
                node.children.push_back(AstNode::node("ExpressionStatement", {parse_expression()}));
            }
            expect_punct(";");
        }
        if (!peek().is_punct(";")) node.children.push_back(parse_expression());
        expect_punct(";");
        if (!peek().is_punct(")")) node.children.push_back(parse_expression());
        expect_punct(")");
        node.children.push_back(parse_statement());
        return node;
    }

    AstNode parse_assembly() {
        advance();  // assembly
        if (peek().kind == TokenKind::string_literal) advance();
        if (accept_punct("(")) {
            while (!accept_punct(")")) {
                if (at_end()) fail("')'");
                advance();
            }
        }
        expect_punct("{");
        int depth = 1;
        while (depth > 0) {
            if (at_end()) fail("'}'");
            const Token& t = advance();
            if (t.is_punct("{")) ++depth;
            if (t.is_punct("}")) --depth;
        }
        return AstNode::node("InlineAssembly");
    }

    AstNode parse_try() {
        advance();  // try
        AstNode node = AstNode::node("TryStatement", {parse_expression()});
        if (accept_keyword("returns")) node.children.push_back(AstNode::node("Returns", {parse_parameter_list()}));
        node.children.push_back(parse_block());
        bool any = false;
        while (accept_keyword("catch")) {
            any = true;
            AstNode clause = AstNode::node("CatchClause");
            if (peek().kind == TokenKind::identifier) clause.children.push_back(AstNode::leaf(advance().text));
            if (peek().is_punct("(")) clause.children.push_back(parse_parameter_list());
            clause.children.push_back(parse_block());
            node.children.push_back(std::move(clause));
        }
        if (!any) fail("'catch'");
        return node;
    }

    // Returns a declaration if one starts here; otherwise restores position.
    std::optional<AstNode> try_parse_declaration() {
        const std::size_t saved = pos_;
        try {
            if (peek().is_punct("(")) return parse_tuple_declaration();
            AstNode decl = AstNode::node("VariableDeclarationStatement");
            AstNode var = AstNode::node("VariableDeclaration", {parse_type_name()});
            if (is_location(peek())) var.children.push_back(AstNode::leaf(advance().text));
            if (peek().kind != TokenKind::identifier) fail("identifier");
            var.children.push_back(AstNode::leaf(advance().text));
            if (!peek().is_punct("=") && !peek().is_punct(";")) fail("'=' or ';'");
            decl.children.push_back(std::move(var));
            if (accept_punct("=")) decl.children.push_back(parse_expression());
            return decl;
        } catch (const ParseError&) {
            pos_ = saved;
            return std::nullopt;
        }
    }

    AstNode parse_tuple_declaration() {
        expect_punct("(");
        AstNode decl = AstNode::node("VariableDeclarationStatement");
        bool any_decl = false;
        do {
            if (peek().is_punct(",") || peek().is_punct(")")) {
                decl.children.push_back(AstNode::node("EmptyComponent"));
                continue;
            }
            AstNode var = AstNode::node("VariableDeclaration", {parse_type_name()});
            if (is_location(peek())) var.children.push_back(AstNode::leaf(advance().text));
            var.children.push_back(AstNode::leaf(expect_identifier()));
            decl.children.push_back(std::move(var));
            any_decl = true;
        } while (accept_punct(","));
        expect_punct(")");
        if (!any_decl) fail("declaration");
        expect_punct("=");
        decl.children.push_back(parse_expression());
        return decl;
    }

    // --- expressions -------------------------------------------------------

    AstNode parse_expression() {
        DepthGuard guard(*this);
        AstNode lhs = parse_conditional();
        for (const char* op : kAssignOps) {
            if (peek().is_punct(op)) {
                advance();
                AstNode rhs = parse_expression();
                return AstNode::node("Assignment", {std::move(lhs), AstNode::leaf(op), std::move(rhs)});
            }
        }
        return lhs;
    }

    AstNode parse_conditional() {
        AstNode cond = parse_binary(0);
        if (accept_punct("?")) {
            AstNode a = parse_expression();
            expect_punct(":");
            AstNode b = parse_expression();
            return AstNode::node("Conditional", {std::move(cond), std::move(a), std::move(b)});
        }
        return cond;
    }

    std::optional<std::string> match_binary(std::size_t level) const {
        for (const char* op : kBinaryLevels[level].ops) {
            if (op != nullptr && peek().is_punct(op)) return std::string(op);
        }
        return std::nullopt;
    }

    AstNode parse_binary(std::size_t level) {
        if (level == kBinaryLevels.size()) return parse_unary();
        DepthGuard guard(*this);
        AstNode lhs = parse_binary(level + 1);
        while (auto op = match_binary(level)) {
            advance();
            AstNode rhs = kBinaryLevels[level].right_assoc ? parse_binary(level) : parse_binary(level + 1);
            lhs = AstNode::node("BinaryOperation",
                                {std::move(lhs), AstNode::leaf(std::move(*op)), std::move(rhs)});
            if (kBinaryLevels[level].right_assoc) break;
        }
        return lhs;
    }

    AstNode parse_unary() {
        DepthGuard guard(*this);
        const Token& t = peek();
        for (const char* op : {"!", "~", "-", "+", "++", "--"}) {
            if (t.is_punct(op)) {
                advance();
                return AstNode::node("UnaryOperation", {AstNode::leaf(op), parse_unary()});
            }
        }
        if (t.is_keyword("delete")) {
            advance();
            return AstNode::node("UnaryOperation", {AstNode::leaf("delete"), parse_unary()});
        }
        return parse_postfix(parse_primary());
    }

    void parse_call_arguments(AstNode& call) {
        expect_punct("(");
        if (accept_punct(")")) return;
        if (peek().is_punct("{")) {
            advance();
            AstNode named = AstNode::node("NamedArguments");
            if (!accept_punct("}")) {
                do {
                    named.children.push_back(AstNode::leaf(expect_identifier()));
                    expect_punct(":");
                    named.children.push_back(parse_expression());
                } while (accept_punct(","));
                expect_punct("}");
            }
            call.children.push_back(std::move(named));
            expect_punct(")");
            return;
        }
        do {
            call.children.push_back(parse_expression());
        } while (accept_punct(","));
        expect_punct(")");
    }

    AstNode parse_postfix(AstNode expr) {
        for (;;) {
            const Token& t = peek();
            if (t.is_punct("(")) {
                AstNode call = AstNode::node("FunctionCall", {std::move(expr)});
                parse_call_arguments(call);
                expr = std::move(call);
            } else if (t.is_punct("[")) {
                advance();
                AstNode access = AstNode::node("IndexAccess", {std::move(expr)});
                if (!peek().is_punct("]") && !peek().is_punct(":")) access.children.push_back(parse_expression());
                if (accept_punct(":")) {
                    access.kind = "IndexRangeAccess";
                    if (!peek().is_punct("]")) access.children.push_back(parse_expression());
                }
                expect_punct("]");
                expr = std::move(access);
            } else if (t.is_punct(".")) {
                advance();
                const Token& member = peek();
                if (member.kind != TokenKind::identifier && member.kind != TokenKind::keyword) {
                    fail("member name");
                }
                expr = AstNode::node("MemberAccess", {std::move(expr), AstNode::leaf(advance().text)});
            } else if (t.is_punct("{") && peek(1).kind == TokenKind::identifier && peek(2).is_punct(":")) {
                advance();
                AstNode opts = AstNode::node("FunctionCallOptions", {std::move(expr)});
                do {
                    opts.children.push_back(AstNode::leaf(expect_identifier()));
                    expect_punct(":");
                    opts.children.push_back(parse_expression());
                } while (accept_punct(","));
                expect_punct("}");
                expr = std::move(opts);
            } else if (t.is_punct("++") || t.is_punct("--")) {
                expr = AstNode::node("PostfixOperation", {std::move(expr), AstNode::leaf(advance().text)});
            } else {
                return expr;
            }
        }
    }

    AstNode parse_primary() {
        DepthGuard guard(*this);
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::number: {
                std::string text = advance().text;
                if (peek().kind == TokenKind::identifier) {
                    for (const char* unit : kUnits) {
                        if (peek().text == unit) {
                            text += " " + advance().text;
                            break;
                        }
                    }
                }
                return AstNode::leaf(std::move(text));
            }
            case TokenKind::string_literal: {
                std::string text = advance().text;
                while (peek().kind == TokenKind::string_literal) text += advance().text;
                return AstNode::leaf(std::move(text));
            }
            case TokenKind::identifier:
                if (peek(1).is_punct("[") && peek(2).is_punct("]")) {
                    // array type used as an expression, e.g. abi.decode(data, (uint[]))
                    return parse_type_name();
                }
                return AstNode::leaf(advance().text);
            case TokenKind::keyword:
                if (t.text == "true" || t.text == "false" || t.text == "payable") {
                    return AstNode::leaf(advance().text);
                }
                if (t.text == "new") {
                    advance();
                    return AstNode::node("NewExpression", {parse_type_name()});
                }
                if (t.text == "type") {
                    advance();
                    expect_punct("(");
                    AstNode node = AstNode::node("TypeExpression", {parse_type_name()});
                    expect_punct(")");
                    return node;
                }
                if (t.text == "mapping") return parse_type_name();
                fail("expression");
            case TokenKind::punct:
                if (t.is_punct("(")) {
                    advance();
                    std::vector<AstNode> items;
                    bool tuple = false;
                    if (peek().is_punct(")")) {
                        tuple = true;
                    } else {
                        do {
                            if (peek().is_punct(",") || peek().is_punct(")")) {
                                items.push_back(AstNode::node("EmptyComponent"));
                                tuple = true;
                            } else {
                                items.push_back(parse_expression());
                            }
                            if (peek().is_punct(",")) tuple = true;
                        } while (accept_punct(","));
                    }
                    expect_punct(")");
                    if (!tuple && items.size() == 1) return std::move(items.front());
                    return AstNode::node("TupleExpression", std::move(items));
                }
                if (t.is_punct("[")) {
                    advance();
                    AstNode arr = AstNode::node("InlineArray");
                    if (!accept_punct("]")) {
                        do {
                            arr.children.push_back(parse_expression());
                        } while (accept_punct(","));
                        expect_punct("]");
                    }
                    return arr;
                }
                fail("expression");
            case TokenKind::end:
                fail("expression");
        }
        fail("expression");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

}  // namespace

AstNode parse_solidity(std::string_view source) {
    Parser parser(source);
    return parser.parse_source_unit();
}

}  // namespace scc::codeform
