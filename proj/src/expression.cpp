#include <tmreach/expression.hpp>

#include <cctype>
#include <sstream>

#include <tmreach/format.hpp>

namespace tmreach
{

using Node = Expr::Node;
using Kind = Expr::Kind;

Expr Expr::number(double v)
{
    Node n;
    n.kind = Kind::number;
    n.value = v;
    return Expr(std::make_shared<const Node>(n));
}

Expr Expr::variable(std::size_t index)
{
    Node n;
    n.kind = Kind::variable;
    n.var = index;
    return Expr(std::make_shared<const Node>(n));
}

Expr Expr::binary(Kind kind, const Expr &a, const Expr &b)
{
    Node n;
    n.kind = kind;
    n.a = a.root_;
    n.b = b.root_;
    return Expr(std::make_shared<const Node>(n));
}

namespace
{

const char *function_name(ElementaryFunction f)
{
    switch (f) {
    case ElementaryFunction::exp:
        return "exp";
    case ElementaryFunction::log:
        return "log";
    case ElementaryFunction::sqrt:
        return "sqrt";
    case ElementaryFunction::sin:
        return "sin";
    case ElementaryFunction::cos:
        return "cos";
    case ElementaryFunction::tanh:
        return "tanh";
    case ElementaryFunction::sigmoid:
        return "sigmoid";
    case ElementaryFunction::recip:
        return "recip";
    }
    return "?";
}

std::optional<ElementaryFunction> lookup_function(std::string_view name)
{
    for (auto f : {ElementaryFunction::sin, ElementaryFunction::cos, ElementaryFunction::exp, ElementaryFunction::log,
                   ElementaryFunction::sqrt, ElementaryFunction::tanh}) {
        if (name == function_name(f)) {
            return f;
        }
    }
    return std::nullopt;
}

void render(const Node &n, std::span<const std::string> names, std::ostream &os)
{
    switch (n.kind) {
    case Kind::number:
        os << format_double(n.value);
        return;
    case Kind::variable:
        if (n.var < names.size()) {
            os << names[n.var];
        } else {
            os << "$" << n.var;
        }
        return;
    case Kind::neg:
        os << "(-";
        render(*n.a, names, os);
        os << ")";
        return;
    case Kind::pow:
        os << "(";
        render(*n.a, names, os);
        os << "^" << n.exponent << ")";
        return;
    case Kind::func:
        os << function_name(n.fn) << "(";
        render(*n.a, names, os);
        os << ")";
        return;
    default:
        break;
    }
    const char *op = n.kind == Kind::add ? " + " : n.kind == Kind::sub ? " - " : n.kind == Kind::mul ? " * " : " / ";
    os << "(";
    render(*n.a, names, os);
    os << op;
    render(*n.b, names, os);
    os << ")";
}

void mark(const Node &n, std::vector<bool> &out)
{
    if (n.kind == Kind::variable) {
        if (n.var < out.size()) {
            out[n.var] = true;
        }
        return;
    }
    if (n.a) {
        mark(*n.a, out);
    }
    if (n.b) {
        mark(*n.b, out);
    }
}

class Parser
{
public:
    Parser(std::string_view text, std::span<const std::string> names) : s_(text), names_(names) {}

    Expr parse()
    {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, 1, pos_ + 1); }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    Expr expr()
    {
        Expr e = term();
        for (;;) {
            if (accept('+')) {
                e = Expr::binary(Kind::add, e, term());
            } else if (accept('-')) {
                e = Expr::binary(Kind::sub, e, term());
            } else {
                return e;
            }
        }
    }

    Expr term()
    {
        Expr e = unary();
        for (;;) {
            if (accept('*')) {
                e = Expr::binary(Kind::mul, e, unary());
            } else if (accept('/')) {
                e = Expr::binary(Kind::div, e, unary());
            } else {
                return e;
            }
        }
    }

    Expr unary()
    {
        if (accept('-')) {
            Node n;
    n.kind = Kind::neg;
            n.a = std::make_shared<const Node>(unary().root());
            return Expr(std::make_shared<const Node>(n));
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (!accept('^')) {
            return base;
        }
        return make_pow(base, integer_exponent());
    }

    static Expr make_pow(const Expr &base, int e)
    {
        Node n;
    n.kind = Kind::pow;
        n.exponent = e;
        n.a = std::make_shared<const Node>(base.root());
        return Expr(std::make_shared<const Node>(n));
    }

    int integer_exponent()
    {
        skip();
        const std::size_t start = pos_;
        bool paren = accept('(');
        skip();
        bool neg = false;
        if (accept('-')) {
            neg = true;
        }
        skip();
        const std::size_t digits = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        if (pos_ == digits || (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))) {
            pos_ = start;
            fail("exponent must be an integer literal");
        }
        const std::string lit(s_.substr(digits, pos_ - digits));
        if (lit.size() > 4) {
            pos_ = digits;
            fail("exponent too large");
        }
        if (paren) {
            expect(')');
        }
        const int v = std::stoi(lit);
        return neg ? -v : v;
    }

    Expr primary()
    {
        skip();
        if (pos_ >= s_.size()) {
            fail("unexpected end of expression");
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view id = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                if (id == "pow") {
                    ++pos_;
                    Expr base = expr();
                    expect(',');
                    const int e = integer_exponent();
                    expect(')');
                    return make_pow(base, e);
                }
                const auto f = lookup_function(id);
                if (!f) {
                    pos_ = start;
                    fail("unknown function '" + std::string(id) + "'");
                }
                ++pos_;
                Expr arg = expr();
                expect(')');
                Node n;
    n.kind = Kind::func;
                n.fn = *f;
                n.a = std::make_shared<const Node>(arg.root());
                return Expr(std::make_shared<const Node>(n));
            }
            for (std::size_t i = 0; i < names_.size(); ++i) {
                if (names_[i] == id) {
                    return Expr::variable(i);
                }
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(id) + "'");
        }
        if (accept('(')) {
            Expr e = expr();
            expect(')');
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
                ++pos_;
            }
            const std::size_t exp_start = pos_;
            digits();
            if (pos_ == exp_start) {
                pos_ = save;
            }
        }
        try {
            return Expr::number(parse_double(s_.substr(start, pos_ - start)));
        } catch (const ParseError &) {
            pos_ = start;
            fail("invalid number");
        }
    }

    std::string_view s_;
    std::span<const std::string> names_;
    std::size_t pos_ = 0;
};

} // namespace

std::string Expr::to_string(std::span<const std::string> names) const
{
    std::ostringstream os;
    render(*root_, names, os);
    return os.str();
}

std::vector<bool> Expr::uses(std::size_t nvars) const
{
    std::vector<bool> out(nvars, false);
    mark(*root_, out);
    return out;
}

Expr parse_expression(std::string_view text, std::span<const std::string> names)
{
    return Parser(text, names).parse();
}

Constraint parse_constraint(std::string_view text, std::span<const std::string> names)
{
    std::size_t at = std::string_view::npos;
    std::size_t len = 0;
    bool lower = false;
    bool strict = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '<' && c != '>') {
            continue;
        }
        if (at != std::string_view::npos) {
            throw ParseError("constraint has more than one comparison", 1, i + 1);
        }
        at = i;
        lower = c == '<';
        if (i + 1 < text.size() && text[i + 1] == '=') {
            len = 2;
            ++i;
        } else {
            len = 1;
            strict = true;
        }
    }
    if (at == std::string_view::npos) {
        throw ParseError("constraint needs one of <=, >=, <, >", 1, text.size() + 1);
    }
    Expr lhs;
    Expr rhs;
    try {
        lhs = parse_expression(text.substr(0, at), names);
    } catch (const ParseError &e) {
        throw ParseError("left side: " + std::string(e.what()), 1, e.column());
    }
    try {
        rhs = parse_expression(text.substr(at + len), names);
    } catch (const ParseError &e) {
        throw ParseError("right side: " + std::string(e.what()), 1, e.column() + at + len);
    }
    Constraint out;
    out.g = lower ? Expr::binary(Kind::sub, lhs, rhs) : Expr::binary(Kind::sub, rhs, lhs);
    out.strict = strict;
    out.text = std::string(text);
    return out;
}

Truth classify(const Constraint &c, const Interval &g)
{
    if (c.strict ? g.hi() < 0 : g.hi() <= 0) {
        return Truth::yes;
    }
    if (c.strict ? g.lo() >= 0 : g.lo() > 0) {
        return Truth::no;
    }
    return Truth::maybe;
}

Truth classify(const std::vector<Constraint> &conj, std::span<const Interval> g_ranges)
{
    if (g_ranges.size() != conj.size()) {
        throw ShapeError("classify: one range per constraint required");
    }
    Truth acc = Truth::yes;
    for (std::size_t i = 0; i < conj.size(); ++i) {
        const Truth t = classify(conj[i], g_ranges[i]);
        if (t == Truth::no) {
            return Truth::no;
        }
        if (t == Truth::maybe) {
            acc = Truth::maybe;
        }
    }
    return acc;
}

bool holds(const Constraint &c, double g) { return c.strict ? g < 0 : g <= 0; }

namespace algebra
{

double recip(double x)
{
    if (x == 0) {
        throw DomainError("division by zero");
    }
    return 1 / x;
}

double powi(double x, int n)
{
    if (n < 0) {
        return recip(powi(x, -n));
    }
    double r = 1;
    for (int i = 0; i < n; ++i) {
        r *= x;
    }
    return r;
}

double apply(ElementaryFunction f, double x)
{
    switch (f) {
    case ElementaryFunction::exp:
        return std::exp(x);
    case ElementaryFunction::recip:
        return recip(x);
    case ElementaryFunction::sqrt:
        if (x < 0) {
            throw DomainError("sqrt of a negative value");
        }
        return std::sqrt(x);
    case ElementaryFunction::log:
        if (x <= 0) {
            throw DomainError("log of a nonpositive value");
        }
        return std::log(x);
    case ElementaryFunction::sin:
        return std::sin(x);
    case ElementaryFunction::cos:
        return std::cos(x);
    case ElementaryFunction::tanh:
        return std::tanh(x);
    case ElementaryFunction::sigmoid:
        return sigmoid(x);
    }
    throw Error("unknown function");
}

Interval recip(const Interval &x) { return Interval(1) / x; }

Interval powi(const Interval &x, int n)
{
    if (n < 0) {
        return recip(pow(x, unsigned(-n)));
    }
    return pow(x, unsigned(n));
}

Interval apply(ElementaryFunction f, const Interval &x)
{
    switch (f) {
    case ElementaryFunction::exp:
        return exp(x);
    case ElementaryFunction::recip:
        return recip(x);
    case ElementaryFunction::sqrt:
        return sqrt(x);
    case ElementaryFunction::log:
        return log(x);
    case ElementaryFunction::sin:
        return sin(x);
    case ElementaryFunction::cos:
        return cos(x);
    case ElementaryFunction::tanh:
        return tanh(x);
    case ElementaryFunction::sigmoid:
        return sigmoid(x);
    }
    throw Error("unknown function");
}

} // namespace algebra

} // namespace tmreach
