#include "strauto/logic.hh"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace strauto {

FormulaPtr mk_true() {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::True;
    return f;
}

FormulaPtr mk_false() {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::False;
    return f;
}

FormulaPtr mk_atom(std::string rel, std::vector<std::string> vars) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Atom;
    f->rel = std::move(rel);
    f->vars = std::move(vars);
    return f;
}

FormulaPtr mk_eq(std::string a, std::string b) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Eq;
    f->vars = {std::move(a), std::move(b)};
    return f;
}

static FormulaPtr mk_unary(FormulaKind k, FormulaPtr c) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->child = {std::move(c)};
    return f;
}

static FormulaPtr mk_binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->child = {std::move(a), std::move(b)};
    return f;
}

FormulaPtr mk_not(FormulaPtr f) { return mk_unary(FormulaKind::Not, std::move(f)); }
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
    return mk_binary(FormulaKind::And, std::move(a), std::move(b));
}
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
    return mk_binary(FormulaKind::Or, std::move(a), std::move(b));
}
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) {
    return mk_binary(FormulaKind::Implies, std::move(a), std::move(b));
}

static FormulaPtr mk_quant(FormulaKind k, std::string v, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->vars = {std::move(v)};
    f->child = {std::move(body)};
    return f;
}

FormulaPtr mk_exists(std::string v, FormulaPtr f) {
    return mk_quant(FormulaKind::Exists, std::move(v), std::move(f));
}
FormulaPtr mk_forall(std::string v, FormulaPtr f) {
    return mk_quant(FormulaKind::Forall, std::move(v), std::move(f));
}

// ------------------------------------------------------------------ parser

namespace {

struct Token {
    enum Kind { Ident, LParen, RParen, Comma, Dot, Eq, Not, And, Or, Implies, End };
    Kind kind;
    std::string text;
    int line, col;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    [[noreturn]] void fail(int l, int c, const std::string& msg) const {
        std::ostringstream os;
        os << "formula syntax error at " << l << ":" << c << ": " << msg;
        throw Error(os.str());
    }

    void bump(char ch) {
        ++pos;
        if (ch == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }

    Token next() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
            bump(src[pos]);
        int l = line, c = col;
        if (pos >= src.size()) return {Token::End, "", l, c};
        char ch = src[pos];
        auto one = [&](Token::Kind k) {
            bump(ch);
            return Token{k, std::string(1, ch), l, c};
        };
        switch (ch) {
            case '(': return one(Token::LParen);
            case ')': return one(Token::RParen);
            case ',': return one(Token::Comma);
            case '.': return one(Token::Dot);
            case '=': return one(Token::Eq);
            case '!': return one(Token::Not);
            case '&': return one(Token::And);
            case '|': return one(Token::Or);
            case '-':
                bump(ch);
                if (pos < src.size() && src[pos] == '>') {
                    bump('>');
                    return {Token::Implies, "->", l, c};
                }
                fail(l, c, "expected '->'");
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string id;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                id += src[pos];
                bump(src[pos]);
            }
            return {Token::Ident, std::move(id), l, c};
        }
        fail(l, c, std::string("unexpected character '") + ch + "'");
    }
};

struct Parser {
    std::vector<Token> toks;
    size_t at = 0;
    Token tok;

    explicit Parser(const std::string& s) {
        Lexer lex(s);
        do toks.push_back(lex.next());
        while (toks.back().kind != Token::End);
        tok = toks[0];
    }

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "formula syntax error at " << tok.line << ":" << tok.col << ": " << msg;
        throw Error(os.str());
    }

    const Token& peek(size_t ahead) const {
        size_t i = at + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }

    void advance() {
        if (at + 1 < toks.size()) ++at;
        tok = toks[at];
    }

    std::string expect_ident(const char* what) {
        if (tok.kind != Token::Ident) fail(std::string("expected ") + what);
        std::string s = tok.text;
        advance();
        return s;
    }

    void expect(Token::Kind k, const char* what) {
        if (tok.kind != k) fail(std::string("expected ") + what);
        advance();
    }

    FormulaPtr formula() { return implies(); }

    FormulaPtr implies() {
        FormulaPtr a = disjunction();
        if (tok.kind == Token::Implies) {
            advance();
            return mk_implies(std::move(a), implies());
        }
        return a;
    }

    FormulaPtr disjunction() {
        FormulaPtr a = conjunction();
        while (tok.kind == Token::Or) {
            advance();
            a = mk_or(std::move(a), conjunction());
        }
        return a;
    }

    FormulaPtr conjunction() {
        FormulaPtr a = unary();
        while (tok.kind == Token::And) {
            advance();
            a = mk_and(std::move(a), unary());
        }
        return a;
    }

    FormulaPtr unary() {
        if (tok.kind == Token::Not) {
            advance();
            return mk_not(unary());
        }
        // "E"/"A" double as relation names; the quantifier form is
        // distinguished by the following "var ." shape.
        if (tok.kind == Token::Ident && (tok.text == "E" || tok.text == "A") &&
            peek(1).kind == Token::Ident && peek(2).kind == Token::Dot) {
            bool exists = tok.text == "E";
            advance();
            std::string v = expect_ident("a variable after the quantifier");
            expect(Token::Dot, "'.' after the quantified variable");
            FormulaPtr body = formula();  // quantifier bodies extend maximally
            return exists ? mk_exists(std::move(v), std::move(body))
                          : mk_forall(std::move(v), std::move(body));
        }
        return primary();
    }

    FormulaPtr primary() {
        if (tok.kind == Token::LParen) {
            advance();
            FormulaPtr f = formula();
            expect(Token::RParen, "')'");
            return f;
        }
        if (tok.kind != Token::Ident) fail("expected a formula");
        std::string name = tok.text;
        advance();
        if (name == "true") return mk_true();
        if (name == "false") return mk_false();
        if (tok.kind == Token::LParen) {
            advance();
            std::vector<std::string> args;
            args.push_back(expect_ident("a variable"));
            while (tok.kind == Token::Comma) {
                advance();
                args.push_back(expect_ident("a variable"));
            }
            expect(Token::RParen, "')' closing the argument list");
            return mk_atom(std::move(name), std::move(args));
        }
        if (tok.kind == Token::Eq) {
            advance();
            std::string rhs = expect_ident("a variable after '='");
            return mk_eq(std::move(name), std::move(rhs));
        }
        fail("expected '(' or '=' after identifier");
    }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
    Parser p(text);
    FormulaPtr f = p.formula();
    if (p.tok.kind != Token::End) p.fail("unexpected trailing input");
    return f;
}

// ----------------------------------------------------------------- printer

namespace {

// Precedence levels: -> 1, | 2, & 3, prefix 4, atoms 5.
void print(std::ostream& os, const FormulaPtr& f, int min_prec) {
    auto paren = [&](int prec, auto&& body) {
        if (prec < min_prec) {
            os << '(';
            body();
            os << ')';
        } else {
            body();
        }
    };
    switch (f->kind) {
        case FormulaKind::True: os << "true"; break;
        case FormulaKind::False: os << "false"; break;
        case FormulaKind::Atom:
            os << f->rel << '(';
            for (size_t i = 0; i < f->vars.size(); ++i)
                os << (i ? ", " : "") << f->vars[i];
            os << ')';
            break;
        case FormulaKind::Eq: os << f->vars[0] << " = " << f->vars[1]; break;
        case FormulaKind::Not:
            paren(4, [&] {
                os << '!';
                print(os, f->child[0], 5);
            });
            break;
        case FormulaKind::And:
            paren(3, [&] {
                print(os, f->child[0], 3);
                os << " & ";
                print(os, f->child[1], 4);
            });
            break;
        case FormulaKind::Or:
            paren(2, [&] {
                print(os, f->child[0], 2);
                os << " | ";
                print(os, f->child[1], 3);
            });
            break;
        case FormulaKind::Implies:
            paren(1, [&] {
                print(os, f->child[0], 2);
                os << " -> ";
                print(os, f->child[1], 1);
            });
            break;
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            paren(4, [&] {
                os << (f->kind == FormulaKind::Exists ? 'E' : 'A') << ' ' << f->vars[0]
                   << ". ";
                print(os, f->child[0], 1);
            });
            break;
    }
}

}  // namespace

std::string format_formula(const FormulaPtr& f) {
    std::ostringstream os;
    print(os, f, 0);
    return os.str();
}

// ------------------------------------------------------------ AST utilities

namespace {

void collect_free(const FormulaPtr& f, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
    auto see = [&](const std::string& v) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    switch (f->kind) {
        case FormulaKind::True:
        case FormulaKind::False: break;
        case FormulaKind::Atom:
        case FormulaKind::Eq:
            for (const auto& v : f->vars) see(v);
            break;
        case FormulaKind::Not:
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            for (const auto& c : f->child) collect_free(c, bound, out);
            break;
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            bound.push_back(f->vars[0]);
            collect_free(f->child[0], bound, out);
            bound.pop_back();
            break;
        }
    }
}

}  // namespace

std::vector<std::string> free_variables(const FormulaPtr& f) {
    std::vector<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

static int depth_of(const Formula* f) {
    switch (f->kind) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Atom:
        case FormulaKind::Eq: return 0;
        case FormulaKind::Not: return depth_of(f->child[0].get());
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            return std::max(depth_of(f->child[0].get()), depth_of(f->child[1].get()));
        case FormulaKind::Exists:
        case FormulaKind::Forall: return 1 + depth_of(f->child[0].get());
    }
    return 0;
}

int quantifier_depth(const FormulaPtr& f) { return depth_of(f.get()); }

FragmentClass classify_fragment(const FormulaPtr& f) {
    // Strip the quantifier prefix, recording the alternation pattern.
    std::vector<bool> blocks;  // true = existential block
    const Formula* cur = f.get();
    while (cur->kind == FormulaKind::Exists || cur->kind == FormulaKind::Forall) {
        bool ex = cur->kind == FormulaKind::Exists;
        if (blocks.empty() || blocks.back() != ex) blocks.push_back(ex);
        cur = cur->child[0].get();
    }
    if (depth_of(cur) != 0) return {FragmentClass::Unclassified, 0};
    if (blocks.empty()) return {FragmentClass::Sigma, 0};
    return {blocks.front() ? FragmentClass::Sigma : FragmentClass::Pi,
            static_cast<int>(blocks.size())};
}

FormulaPtr normalize(const FormulaPtr& f) {
    switch (f->kind) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Atom:
        case FormulaKind::Eq: return f;
        case FormulaKind::Not: {
            FormulaPtr c = normalize(f->child[0]);
            return c == f->child[0] ? f : mk_not(std::move(c));
        }
        case FormulaKind::Or: {
            FormulaPtr a = normalize(f->child[0]);
            FormulaPtr b = normalize(f->child[1]);
            if (a == f->child[0] && b == f->child[1]) return f;
            return mk_or(std::move(a), std::move(b));
        }
        case FormulaKind::And:
            return mk_not(mk_or(mk_not(normalize(f->child[0])),
                                mk_not(normalize(f->child[1]))));
        case FormulaKind::Implies:
            return mk_or(mk_not(normalize(f->child[0])), normalize(f->child[1]));
        case FormulaKind::Exists: {
            FormulaPtr c = normalize(f->child[0]);
            return c == f->child[0] ? f : mk_exists(f->vars[0], std::move(c));
        }
        case FormulaKind::Forall:
            return mk_not(mk_exists(f->vars[0], mk_not(normalize(f->child[0]))));
    }
    return f;
}

FormulaPtr power_path_formula(const std::string& rel, int m, const std::string& x,
                              const std::string& y) {
    if (m < 0) throw Error("power_path_formula needs m >= 0");
    if (m == 0) return mk_atom(rel, {x, y});
    std::string lvl = std::to_string(m);
    std::string z = "_z" + lvl, xp = "_x" + lvl, yp = "_y" + lvl;
    FormulaPtr inner = power_path_formula(rel, m - 1, xp, yp);
    FormulaPtr guard =
        mk_or(mk_and(mk_eq(xp, x), mk_eq(yp, z)), mk_and(mk_eq(xp, z), mk_eq(yp, y)));
    return mk_exists(z, mk_forall(xp, mk_forall(yp, mk_implies(std::move(guard),
                                                               std::move(inner)))));
}

FormulaPtr unary_path_formula(const std::string& rel, int n, const std::string& x,
                              const std::string& y) {
    if (n < 1) throw Error("unary_path_formula needs n >= 1");
    if (n == 1) return mk_atom(rel, {x, y});
    std::vector<std::string> zs;
    for (int i = 1; i < n; ++i) zs.push_back("_p" + std::to_string(i));
    FormulaPtr body = mk_atom(rel, {x, zs[0]});
    for (int i = 1; i < n - 1; ++i)
        body = mk_and(std::move(body), mk_atom(rel, {zs[i - 1], zs[i]}));
    body = mk_and(std::move(body), mk_atom(rel, {zs.back(), y}));
    for (int i = n - 2; i >= 0; --i) body = mk_exists(zs[i], std::move(body));
    return body;
}

}  // namespace strauto
