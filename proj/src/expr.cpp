#include "dyneval/expr.hpp"

#include <cctype>
#include <functional>
#include <utility>
#include <vector>

namespace dyneval {

namespace {

struct Token {
    enum Kind { Rational, Ident, Plus, Minus, Star, Caret, LParen, RParen, End } kind;
    std::string text;
    std::size_t pos = 0;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char ch = src[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            // "p/q" is one token; there is no division operator
            if (j < src.size() && src[j] == '/') {
                std::size_t k = j + 1;
                while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                if (k == j + 1) throw parse_error("expected digits after '/'", j + 1);
                j = k;
            }
            out.push_back({Token::Rational, src.substr(i, j - i), start});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({Token::Ident, src.substr(i, j - i), start});
            i = j;
            continue;
        }
        switch (ch) {
            case '+': out.push_back({Token::Plus, "+", start}); break;
            case '-': out.push_back({Token::Minus, "-", start}); break;
            case '*': out.push_back({Token::Star, "*", start}); break;
            case '^': out.push_back({Token::Caret, "^", start}); break;
            case '(': out.push_back({Token::LParen, "(", start}); break;
            case ')': out.push_back({Token::RParen, ")", start}); break;
            default:
                throw parse_error(std::string("unexpected character '") + ch + "'", start);
        }
        ++i;
    }
    out.push_back({Token::End, "", src.size()});
    return out;
}

// recursive-descent evaluator, generic over the value ring
template <class V>
struct Parser {
    std::vector<Token> toks;
    std::size_t at = 0;
    std::function<V(const BigRational&)> lit;
    std::function<V(const std::string&, std::size_t)> var;
    std::function<V(V, V)> add, sub, mul;
    std::function<V(V)> neg;
    V one;

    const Token& peek() const { return toks[at]; }
    Token next() { return toks[at++]; }

    V expr() {
        V acc = term();
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            const bool plus = next().kind == Token::Plus;
            V rhs = term();
            acc = plus ? add(std::move(acc), std::move(rhs)) : sub(std::move(acc), std::move(rhs));
        }
        return acc;
    }

    V term() {
        V acc = factor();
        while (peek().kind == Token::Star) {
            next();
            acc = mul(std::move(acc), factor());
        }
        return acc;
    }

    V factor() {
        if (peek().kind == Token::Minus) {
            next();
            return neg(factor());
        }
        V base = atom();
        if (peek().kind == Token::Caret) {
            const Token caret = next();
            if (peek().kind != Token::Rational || peek().text.find('/') != std::string::npos)
                throw parse_error("exponent must be a nonnegative integer", peek().pos);
            const Token e = next();
            long exp = 0;
            try {
                exp = std::stol(e.text);
            } catch (const std::exception&) {
                throw parse_error("exponent out of range", e.pos);
            }
            if (exp > 1024) throw parse_error("exponent too large", e.pos);
            (void)caret;
            V acc = one;
            V sq = std::move(base);
            while (exp > 0) {
                if (exp & 1) acc = mul(std::move(acc), sq);
                exp >>= 1;
                if (exp > 0) sq = mul(sq, sq);
            }
            return acc;
        }
        return base;
    }

    V atom() {
        const Token t = next();
        switch (t.kind) {
            case Token::Rational:
                return lit(BigRational::parse(t.text));
            case Token::Ident:
                return var(t.text, t.pos);
            case Token::LParen: {
                V inner = expr();
                if (peek().kind != Token::RParen) throw parse_error("expected ')'", peek().pos);
                next();
                return inner;
            }
            default:
                throw parse_error("expected a value", t.pos);
        }
    }

    V run() {
        V v = expr();
        if (peek().kind != Token::End) throw parse_error("trailing input", peek().pos);
        return v;
    }
};

AlgebraElement generator_or_throw(const SeparableTower& A, const std::string& name,
                                  std::size_t pos) {
    const auto level = A.generator_level(name);
    if (!level) throw parse_error("unknown variable '" + name + "'", pos);
    return AlgebraElement::generator(A, *level);
}

}  // namespace

AlgebraElement eval_element(const std::string& src, const SeparableTower& A) {
    Parser<AlgebraElement> p{lex(src), 0,
                             [&](const BigRational& q) { return AlgebraElement::from_rational(A, q); },
                             [&](const std::string& name, std::size_t pos) {
                                 return generator_or_throw(A, name, pos);
                             },
                             [](AlgebraElement a, AlgebraElement b) { return a + b; },
                             [](AlgebraElement a, AlgebraElement b) { return a - b; },
                             [](AlgebraElement a, AlgebraElement b) { return a * b; },
                             [](AlgebraElement a) { return -a; },
                             AlgebraElement::one(A)};
    return p.run();
}

ElemPoly eval_poly(const std::string& src, const SeparableTower& A, const std::string& var) {
    Parser<ElemPoly> p{lex(src), 0,
                       [&](const BigRational& q) {
                           return ElemPoly::constant(AlgebraElement::from_rational(A, q));
                       },
                       [&](const std::string& name, std::size_t pos) {
                           if (name == var)
                               return ElemPoly::monomial(AlgebraElement::one(A), 1);
                           return ElemPoly::constant(generator_or_throw(A, name, pos));
                       },
                       [](ElemPoly a, ElemPoly b) { return a + b; },
                       [](ElemPoly a, ElemPoly b) { return a - b; },
                       [](ElemPoly a, ElemPoly b) { return a * b; },
                       [](ElemPoly a) { return -a; },
                       ElemPoly::constant(AlgebraElement::one(A))};
    return p.run();
}

BiElemPoly eval_bipoly(const std::string& src, const SeparableTower& A, const std::string& outer,
                       const std::string& inner) {
    const ElemPoly one = ElemPoly::constant(AlgebraElement::one(A));
    Parser<BiElemPoly> p{lex(src), 0,
                         [&](const BigRational& q) {
                             return BiElemPoly::constant(
                                 ElemPoly::constant(AlgebraElement::from_rational(A, q)));
                         },
                         [&](const std::string& name, std::size_t pos) {
                             if (name == outer) return BiElemPoly::monomial(one, 1);
                             if (name == inner)
                                 return BiElemPoly::constant(
                                     ElemPoly::monomial(AlgebraElement::one(A), 1));
                             return BiElemPoly::constant(
                                 ElemPoly::constant(generator_or_throw(A, name, pos)));
                         },
                         [](BiElemPoly a, BiElemPoly b) { return a + b; },
                         [](BiElemPoly a, BiElemPoly b) { return a - b; },
                         [](BiElemPoly a, BiElemPoly b) { return a * b; },
                         [](BiElemPoly a) { return -a; },
                         BiElemPoly::constant(one)};
    return p.run();
}

SeparableTower parse_tower(const std::string& spec) {
    SeparableTower A = SeparableTower::rationals();
    std::size_t i = 0;
    while (i < spec.size()) {
        std::size_t comma = spec.find(',', i);
        if (comma == std::string::npos) comma = spec.size();
        const std::string segment = spec.substr(i, comma - i);
        const std::size_t colon = segment.find(':');
        if (colon == std::string::npos)
            throw parse_error("tower level needs the form name:minpoly", i);
        std::string name = segment.substr(0, colon);
        // trim surrounding blanks
        const auto ltrim = name.find_first_not_of(" \t");
        const auto rtrim = name.find_last_not_of(" \t");
        if (ltrim == std::string::npos) throw parse_error("empty generator name", i);
        name = name.substr(ltrim, rtrim - ltrim + 1);
        for (const char ch : name)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
                throw parse_error("generator name must be an identifier", i);
        if (std::isdigit(static_cast<unsigned char>(name[0])))
            throw parse_error("generator name must not start with a digit", i);
        if (name == "X" || name == "Y" || name == "T")
            throw parse_error("generator name '" + name + "' is reserved", i);
        const std::string body = segment.substr(colon + 1);
        ElemPoly min;
        try {
            min = eval_poly(body, A, name);
        } catch (const parse_error& pe) {
            throw parse_error(std::string(pe.what()) + " in minimal polynomial of " + name);
        }
        A = adjoin_root(A, name, min);
        i = comma + 1;
    }
    return A;
}

std::string render_elem_poly(const ElemPoly& p, const std::string& var) {
    return render_poly(p, var, [](const AlgebraElement& c) { return c.render_text(); });
}

std::string render_bi_elem_poly(const BiElemPoly& G, const std::string& outer,
                                const std::string& inner) {
    return render_poly(G, outer, [&](const ElemPoly& c) {
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!c[i].is_zero()) ++nonzero;
        CoeffText ct{render_elem_poly(c, inner), nonzero >= 2};
        return ct;
    });
}

}  // namespace dyneval
