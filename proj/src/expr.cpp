#include "morseflow/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "morseflow/errors.hpp"

namespace morseflow {

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type;
    std::size_t pos;  // 1-based position of the first character
    double value = 0.0;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        tok_.pos = i_ + 1;
        if (i_ >= src_.size()) {
            tok_.type = Token::Type::End;
            return;
        }
        const char c = src_[i_];
        switch (c) {
            case '+': tok_.type = Token::Type::Plus; ++i_; return;
            case '-': tok_.type = Token::Type::Minus; ++i_; return;
            case '*': tok_.type = Token::Type::Star; ++i_; return;
            case '/': tok_.type = Token::Type::Slash; ++i_; return;
            case '^': tok_.type = Token::Type::Caret; ++i_; return;
            case '(': tok_.type = Token::Type::LParen; ++i_; return;
            case ')': tok_.type = Token::Type::RParen; ++i_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.c_str() + i_;
            char* end = nullptr;
            tok_.value = std::strtod(begin, &end);
            if (end == begin) throw SyntaxError(tok_.pos, "a number");
            i_ += static_cast<std::size_t>(end - begin);
            tok_.type = Token::Type::Number;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            tok_.type = Token::Type::Ident;
            tok_.text = src_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        throw SyntaxError(tok_.pos, "an operand or operator");
    }

    const std::string& src_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& src, int dim) : lex_(src), dim_(dim) {}

    FieldExpr run() {
        FieldExpr e;
        e.root_ = parse_sum(e);
        const Token& t = lex_.peek();
        if (t.type != Token::Type::End) throw SyntaxError(t.pos, "end of expression");
        e.arity_ = max_var_index(e, e.root_);
        return e;
    }

private:
    using Kind = FieldExpr::Kind;
    using Func = FieldExpr::Func;

    int parse_sum(FieldExpr& e) {
        int lhs = parse_term(e);
        for (;;) {
            const Token::Type t = lex_.peek().type;
            if (t != Token::Type::Plus && t != Token::Type::Minus) return lhs;
            lex_.take();
            const int rhs = parse_term(e);
            lhs = add_binary(e, t == Token::Type::Plus ? Kind::Add : Kind::Sub, lhs, rhs);
        }
    }

    int parse_term(FieldExpr& e) {
        int lhs = parse_unary(e);
        for (;;) {
            const Token::Type t = lex_.peek().type;
            if (t != Token::Type::Star && t != Token::Type::Slash) return lhs;
            lex_.take();
            const int rhs = parse_unary(e);
            lhs = add_binary(e, t == Token::Type::Star ? Kind::Mul : Kind::Div, lhs, rhs);
        }
    }

    int parse_unary(FieldExpr& e) {
        if (lex_.peek().type == Token::Type::Minus) {
            lex_.take();
            const int operand = parse_unary(e);
            FieldExpr::Node n;
            n.kind = Kind::Negate;
            n.lhs = operand;
            e.nodes_.push_back(n);
            return static_cast<int>(e.nodes_.size()) - 1;
        }
        return parse_power(e);
    }

    int parse_power(FieldExpr& e) {
        const int base = parse_atom(e);
        if (lex_.peek().type != Token::Type::Caret) return base;
        const Token caret = lex_.take();
        // Right-associative; the exponent may itself be a power or a negated
        // literal, but must not reference variables.
        const int exponent = parse_unary(e);
        if (references_variable(e, exponent))
            throw SyntaxError(caret.pos, "a numeric literal exponent");
        return add_binary(e, Kind::Pow, base, exponent);
    }

    int parse_atom(FieldExpr& e) {
        const Token t = lex_.take();
        switch (t.type) {
            case Token::Type::Number: {
                FieldExpr::Node n;
                n.kind = Kind::Number;
                n.value = t.value;
                e.nodes_.push_back(n);
                return static_cast<int>(e.nodes_.size()) - 1;
            }
            case Token::Type::LParen: {
                const int inner = parse_sum(e);
                const Token& close = lex_.peek();
                if (close.type != Token::Type::RParen) throw SyntaxError(close.pos, "')'");
                lex_.take();
                return inner;
            }
            case Token::Type::Ident:
                return parse_ident(e, t);
            default:
                throw SyntaxError(t.pos, "an operand");
        }
    }

    int parse_ident(FieldExpr& e, const Token& t) {
        static const struct { const char* name; Func f; } kFuncs[] = {
            {"sin", Func::Sin}, {"cos", Func::Cos},   {"exp", Func::Exp},
            {"tanh", Func::Tanh}, {"abs", Func::Abs}, {"sqrt", Func::Sqrt},
        };
        for (const auto& fn : kFuncs) {
            if (t.text == fn.name) {
                const Token& open = lex_.peek();
                if (open.type != Token::Type::LParen) throw SyntaxError(open.pos, "'('");
                lex_.take();
                const int arg = parse_sum(e);
                const Token& close = lex_.peek();
                if (close.type != Token::Type::RParen) throw SyntaxError(close.pos, "')'");
                lex_.take();
                FieldExpr::Node n;
                n.kind = Kind::Call;
                n.func = fn.f;
                n.lhs = arg;
                e.nodes_.push_back(n);
                return static_cast<int>(e.nodes_.size()) - 1;
            }
        }
        const int index = variable_index(t);
        if (index > dim_) throw ArityError(t.pos, t.text, dim_);
        FieldExpr::Node n;
        n.kind = Kind::Variable;
        n.var_index = index;
        e.nodes_.push_back(n);
        return static_cast<int>(e.nodes_.size()) - 1;
    }

    // x/y/z name the first three coordinates; x<k> names coordinate k.
    int variable_index(const Token& t) const {
        const std::string& s = t.text;
        if (s == "x") return 1;
        if (s == "y") return 2;
        if (s == "z") return 3;
        if (s.size() >= 2 && s[0] == 'x') {
            int idx = 0;
            for (std::size_t i = 1; i < s.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(s[i])))
                    throw UnknownIdentifierError(t.pos, s);
                idx = idx * 10 + (s[i] - '0');
            }
            if (idx >= 1) return idx;
        }
        throw UnknownIdentifierError(t.pos, s);
    }

    static bool references_variable(const FieldExpr& e, int node) {
        const auto& n = e.nodes_[static_cast<std::size_t>(node)];
        if (n.kind == Kind::Variable) return true;
        if (n.lhs >= 0 && references_variable(e, n.lhs)) return true;
        if (n.rhs >= 0 && references_variable(e, n.rhs)) return true;
        return false;
    }

    static int max_var_index(const FieldExpr& e, int node) {
        if (node < 0) return 0;
        const auto& n = e.nodes_[static_cast<std::size_t>(node)];
        int m = n.kind == Kind::Variable ? n.var_index : 0;
        m = std::max(m, max_var_index(e, n.lhs));
        m = std::max(m, max_var_index(e, n.rhs));
        return m;
    }

    int add_binary(FieldExpr& e, Kind kind, int lhs, int rhs) {
        FieldExpr::Node n;
        n.kind = kind;
        n.lhs = lhs;
        n.rhs = rhs;
        e.nodes_.push_back(n);
        return static_cast<int>(e.nodes_.size()) - 1;
    }

    Lexer lex_;
    int dim_;
};

double eval_node(const FieldExpr& e, int node, std::span<const double> p) {
    const auto& n = e.nodes()[static_cast<std::size_t>(node)];
    using Kind = FieldExpr::Kind;
    switch (n.kind) {
        case Kind::Number: return n.value;
        case Kind::Variable: return p[static_cast<std::size_t>(n.var_index - 1)];
        case Kind::Negate: return -eval_node(e, n.lhs, p);
        case Kind::Add: return eval_node(e, n.lhs, p) + eval_node(e, n.rhs, p);
        case Kind::Sub: return eval_node(e, n.lhs, p) - eval_node(e, n.rhs, p);
        case Kind::Mul: return eval_node(e, n.lhs, p) * eval_node(e, n.rhs, p);
        case Kind::Div: return eval_node(e, n.lhs, p) / eval_node(e, n.rhs, p);
        case Kind::Pow: return std::pow(eval_node(e, n.lhs, p), eval_node(e, n.rhs, p));
        case Kind::Call: {
            const double a = eval_node(e, n.lhs, p);
            switch (n.func) {
                case FieldExpr::Func::Sin: return std::sin(a);
                case FieldExpr::Func::Cos: return std::cos(a);
                case FieldExpr::Func::Exp: return std::exp(a);
                case FieldExpr::Func::Tanh: return std::tanh(a);
                case FieldExpr::Func::Abs: return std::fabs(a);
                case FieldExpr::Func::Sqrt: return std::sqrt(a);
            }
            break;
        }
    }
    return 0.0;  // unreachable
}

void print_node(const FieldExpr& e, int node, std::string& out) {
    const auto& n = e.nodes()[static_cast<std::size_t>(node)];
    using Kind = FieldExpr::Kind;
    switch (n.kind) {
        case Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            out += buf;
            return;
        }
        case Kind::Variable:
            out += "x" + std::to_string(n.var_index);
            return;
        case Kind::Negate:
            out += "(-";
            print_node(e, n.lhs, out);
            out += ")";
            return;
        case Kind::Call: {
            static const char* kNames[] = {"sin", "cos", "exp", "tanh", "abs", "sqrt"};
            out += kNames[static_cast<int>(n.func)];
            out += "(";
            print_node(e, n.lhs, out);
            out += ")";
            return;
        }
        default: {
            const char op = n.kind == Kind::Add   ? '+'
                            : n.kind == Kind::Sub ? '-'
                            : n.kind == Kind::Mul ? '*'
                            : n.kind == Kind::Div ? '/'
                                                  : '^';
            out += "(";
            print_node(e, n.lhs, out);
            out += op;
            print_node(e, n.rhs, out);
            out += ")";
            return;
        }
    }
}

bool same_node(const FieldExpr& a, int na, const FieldExpr& b, int nb) {
    if ((na < 0) != (nb < 0)) return false;
    if (na < 0) return true;
    const auto& x = a.nodes()[static_cast<std::size_t>(na)];
    const auto& y = b.nodes()[static_cast<std::size_t>(nb)];
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case FieldExpr::Kind::Number: return x.value == y.value;
        case FieldExpr::Kind::Variable: return x.var_index == y.var_index;
        case FieldExpr::Kind::Call:
            if (x.func != y.func) return false;
            break;
        default: break;
    }
    return same_node(a, x.lhs, b, y.lhs) && same_node(a, x.rhs, b, y.rhs);
}

}  // namespace

FieldExpr parse_field(const std::string& text, int dim) {
    if (text.empty()) throw SyntaxError(1, "a nonempty expression");
    return Parser(text, dim).run();
}

double eval_field(const FieldExpr& e, std::span<const double> point) {
    const double v = eval_node(e, e.root(), point);
    if (!std::isfinite(v)) throw NumericError("expression evaluated to a non-finite value");
    return v;
}

double eval_field_raw(const FieldExpr& e, std::span<const double> point) {
    return eval_node(e, e.root(), point);
}

std::string FieldExpr::to_string() const {
    std::string out;
    if (root_ >= 0) print_node(*this, root_, out);
    return out;
}

bool FieldExpr::same_structure(const FieldExpr& other) const {
    return same_node(*this, root_, other, other.root_);
}

}  // namespace morseflow
