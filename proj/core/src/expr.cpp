#include "qdx/expr.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace qdx::expr {

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Fn { Exp, Ln, Pow };

struct Node {
    enum class Kind { Number, Var, Param, Unary, Binary, Call } kind;

    double number = 0.0;
    std::string name;      // Param
    BinOp op = BinOp::Add; // Binary
    Fn fn = Fn::Exp;       // Call
    std::shared_ptr<const Node> lhs, rhs;

    static std::shared_ptr<const Node> make_number(double v) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Number;
        n->number = v;
        return n;
    }
    static std::shared_ptr<const Node> make_var() {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Var;
        return n;
    }
    static std::shared_ptr<const Node> make_param(std::string name) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Param;
        n->name = std::move(name);
        return n;
    }
    static std::shared_ptr<const Node> make_unary(std::shared_ptr<const Node> c) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Unary;
        n->lhs = std::move(c);
        return n;
    }
    static std::shared_ptr<const Node> make_binary(BinOp op, std::shared_ptr<const Node> l,
                                                   std::shared_ptr<const Node> r) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Binary;
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }
    static std::shared_ptr<const Node> make_call(Fn fn, std::shared_ptr<const Node> a,
                                                 std::shared_ptr<const Node> b = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Call;
        n->fn = fn;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }
};

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    std::shared_ptr<const Node> run() {
        auto e = sum();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError(pos_, "operator or end of input");
        return e;
    }

private:
    // sum   := term (('+'|'-') term)*
    // term  := unary (('*'|'/') unary)*
    // unary := '-' unary | power
    // power := atom ('^' unary)?          (right associative)
    // atom  := NUMBER | IDENT | IDENT '(' sum (',' sum)? ')' | '(' sum ')'
    std::shared_ptr<const Node> sum() {
        auto lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+')) lhs = Node::make_binary(BinOp::Add, lhs, term());
            else if (accept('-')) lhs = Node::make_binary(BinOp::Sub, lhs, term());
            else return lhs;
        }
    }

    std::shared_ptr<const Node> term() {
        auto lhs = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) lhs = Node::make_binary(BinOp::Mul, lhs, unary());
            else if (accept('/')) lhs = Node::make_binary(BinOp::Div, lhs, unary());
            else return lhs;
        }
    }

    std::shared_ptr<const Node> unary() {
        skip_ws();
        if (accept('-')) return Node::make_unary(unary());
        return power();
    }

    std::shared_ptr<const Node> power() {
        auto base = atom();
        skip_ws();
        if (accept('^')) return Node::make_binary(BinOp::Pow, base, unary());
        return base;
    }

    std::shared_ptr<const Node> atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, "number, identifier or '('");
        const char c = src_[pos_];

        if (accept('(')) {
            auto e = sum();
            expect(')');
            return e;
        }
        if (is_digit(c) || c == '.') return number();
        if (is_ident_start(c)) return identifier();
        throw ParseError(pos_, "number, identifier or '('");
    }

    std::shared_ptr<const Node> number() {
        std::size_t end = pos_;
        while (end < src_.size() && (is_digit(src_[end]) || src_[end] == '.')) ++end;
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t mark = end + 1;
            if (mark < src_.size() && (src_[mark] == '+' || src_[mark] == '-')) ++mark;
            if (mark < src_.size() && is_digit(src_[mark])) {
                end = mark;
                while (end < src_.size() && is_digit(src_[end])) ++end;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + end, v);
        if (ec != std::errc{} || ptr != src_.data() + end)
            throw ParseError(pos_, "numeric literal");
        pos_ = end;
        return Node::make_number(v);
    }

    std::shared_ptr<const Node> identifier() {
        std::size_t end = pos_;
        while (end < src_.size() && is_ident(src_[end])) ++end;
        std::string name(src_.substr(pos_, end - pos_));
        pos_ = end;
        skip_ws();

        if (pos_ < src_.size() && src_[pos_] == '(') {
            if (name == "exp" || name == "ln") {
                ++pos_;
                auto arg = sum();
                expect(')');
                return Node::make_call(name == "exp" ? Fn::Exp : Fn::Ln, arg);
            }
            if (name == "pow") {
                ++pos_;
                auto base = sum();
                expect(',');
                auto exponent = sum();
                expect(')');
                return Node::make_call(Fn::Pow, base, exponent);
            }
            throw ParseError(pos_, "one of the functions exp, ln, pow");
        }
        if (name == "x") return Node::make_var();
        return Node::make_param(std::move(name));
    }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw ParseError(pos_, std::string("'") + c + "'");
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_ident(char c) { return is_ident_start(c) || is_digit(c); }

    std::string_view src_;
    std::size_t pos_ = 0;
};

double eval_pow(double base, double exponent) {
    if (base > 0.0) return std::pow(base, exponent);
    if (base == 0.0) {
        if (exponent > 0.0) return 0.0;
        if (exponent == 0.0) return 1.0;
        throw DomainError("zero raised to a negative power");
    }
    if (exponent == std::floor(exponent) && std::abs(exponent) < 1e15)
        return std::pow(base, exponent);
    throw DomainError("fractional power of a negative value");
}

double eval_node(const Node& n, double x, const Params& params) {
    switch (n.kind) {
        case Node::Kind::Number: return n.number;
        case Node::Kind::Var: return x;
        case Node::Kind::Param: {
            auto it = params.find(n.name);
            if (it == params.end())
                throw DomainError("unbound parameter '" + n.name + "'");
            return it->second;
        }
        case Node::Kind::Unary: return -eval_node(*n.lhs, x, params);
        case Node::Kind::Binary: {
            const double l = eval_node(*n.lhs, x, params);
            const double r = eval_node(*n.rhs, x, params);
            switch (n.op) {
                case BinOp::Add: return l + r;
                case BinOp::Sub: return l - r;
                case BinOp::Mul: return l * r;
                case BinOp::Div:
                    if (r == 0.0) throw DomainError("division by zero");
                    return l / r;
                case BinOp::Pow: return eval_pow(l, r);
            }
            break;
        }
        case Node::Kind::Call: {
            const double a = eval_node(*n.lhs, x, params);
            switch (n.fn) {
                case Fn::Exp: return std::exp(a);
                case Fn::Ln:
                    if (!(a > 0.0)) throw DomainError("ln of a non-positive value");
                    return std::log(a);
                case Fn::Pow: return eval_pow(a, eval_node(*n.rhs, x, params));
            }
            break;
        }
    }
    throw std::logic_error("corrupt expression node");
}

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

int precedence(const Node& n) {
    if (n.kind == Node::Kind::Binary) {
        switch (n.op) {
            case BinOp::Add:
            case BinOp::Sub: return 1;
            case BinOp::Mul:
            case BinOp::Div: return 2;
            case BinOp::Pow: return 4;
        }
    }
    if (n.kind == Node::Kind::Unary) return 3;
    return 5; // atoms
}

void print_node(const Node& n, std::string& out, int parent_prec) {
    const int prec = precedence(n);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (n.kind) {
        case Node::Kind::Number:
            if (n.number < 0.0 || std::signbit(n.number)) {
                out += '(';
                out += format_number(n.number);
                out += ')';
            } else {
                out += format_number(n.number);
            }
            break;
        case Node::Kind::Var: out += 'x'; break;
        case Node::Kind::Param: out += n.name; break;
        case Node::Kind::Unary:
            out += '-';
            print_node(*n.lhs, out, 4); // operand binds at least as power
            break;
        case Node::Kind::Binary: {
            const char* sym = n.op == BinOp::Add ? "+"
                              : n.op == BinOp::Sub ? "-"
                              : n.op == BinOp::Mul ? "*"
                              : n.op == BinOp::Div ? "/"
                                                   : "^";
            if (n.op == BinOp::Pow) {
                print_node(*n.lhs, out, prec + 1); // left operand is an atom
                out += sym;
                print_node(*n.rhs, out, prec);     // right associative
            } else {
                print_node(*n.lhs, out, prec);
                out += sym;
                print_node(*n.rhs, out, prec + 1); // left associative
            }
            break;
        }
        case Node::Kind::Call:
            out += n.fn == Fn::Exp ? "exp" : n.fn == Fn::Ln ? "ln" : "pow";
            out += '(';
            print_node(*n.lhs, out, 0);
            if (n.rhs) {
                out += ',';
                print_node(*n.rhs, out, 0);
            }
            out += ')';
            break;
    }
    if (parens) out += ')';
}

} // namespace

Expr parse(std::string_view src) { return Expr(Parser(src).run()); }

double eval(const Expr& e, double x, const Params& params) {
    return eval_node(e.root(), x, params);
}

std::string to_string(const Expr& e) {
    std::string out;
    print_node(e.root(), out, 0);
    return out;
}

LatticeFn sample(const Expr& e, const QGrid& grid, const Params& params) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        try {
            v[i] = eval(e, grid.point(i), params);
        } catch (const DomainError& err) {
            throw DomainError(std::string("sampling failed: ") + err.what(), i);
        }
    }
    return LatticeFn(grid, std::move(v));
}

} // namespace qdx::expr
