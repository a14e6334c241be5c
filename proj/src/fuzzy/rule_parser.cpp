#include "subaudit/fuzzy/rule_parser.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <vector>

namespace subaudit::fuzzy {

DslError::DslError(std::size_t line, std::size_t column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column) {}

namespace {

enum class Tok { Ident, Number, Colon, LParen, RParen, Rule, If, Then, Is, And, Or, Weight, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string_view describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::Colon: return "':'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Rule: return "RULE";
        case Tok::If: return "IF";
        case Tok::Then: return "THEN";
        case Tok::Is: return "IS";
        case Tok::And: return "AND";
        case Tok::Or: return "OR";
        case Tok::Weight: return "WEIGHT";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    const auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        const std::size_t l = line, cl = col;
        if (c == ':' || c == '(' || c == ')') {
            out.push_back({c == ':' ? Tok::Colon : c == '(' ? Tok::LParen : Tok::RParen, std::string(1, src[i]), l, cl});
            advance(1);
            continue;
        }
        if (std::isdigit(c) || c == '.' || c == '-' || c == '+') {
            std::size_t j = i + 1;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '.' ||
                                      ((src[j] == '-' || src[j] == '+') && (src[j - 1] == 'e' || src[j - 1] == 'E')))) {
                ++j;
            }
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i + 1;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            const std::string word(src.substr(i, j - i));
            const std::string key = upper(word);
            Tok kind = Tok::Ident;
            if (key == "RULE") kind = Tok::Rule;
            else if (key == "IF") kind = Tok::If;
            else if (key == "THEN") kind = Tok::Then;
            else if (key == "IS") kind = Tok::Is;
            else if (key == "AND") kind = Tok::And;
            else if (key == "OR") kind = Tok::Or;
            else if (key == "WEIGHT") kind = Tok::Weight;
            out.push_back({kind, word, l, cl});
            advance(j - i);
            continue;
        }
        throw DslError(l, cl, std::string("unexpected character '") + src[i] + "'");
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::span<const LinguisticVariable> variables)
        : toks_(std::move(tokens)), vars_(variables) {}

    RuleBase parse() {
        RuleBase base;
        std::set<std::string> ids;
        while (peek().kind != Tok::End) {
            const Token& start = peek();
            Rule r = rule();
            if (!ids.insert(r.id).second) {
                throw DslError(start.line, start.column, "duplicate rule id '" + r.id + "'");
            }
            base.rules.push_back(std::move(r));
        }
        return base;
    }

private:
    const Token& peek() const { return toks_[pos_]; }

    const Token& expect(Tok kind) {
        const Token& t = toks_[pos_];
        if (t.kind != kind) {
            throw DslError(t.line, t.column, "expected " + std::string(describe(kind)) + ", found " +
                                                 (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
        }
        ++pos_;
        return t;
    }

    bool accept(Tok kind) {
        if (peek().kind != kind) return false;
        ++pos_;
        return true;
    }

    Rule rule() {
        Rule r;
        expect(Tok::Rule);
        const Token& id = peek();
        if (id.kind != Tok::Ident && id.kind != Tok::Number) expect(Tok::Ident);
        ++pos_;
        r.id = id.text;
        expect(Tok::Colon);
        expect(Tok::If);
        r.antecedent = disjunction();
        expect(Tok::Then);
        const auto [var, term] = atom_names();
        r.output_variable = var;
        r.output_term = term;
        if (accept(Tok::Weight)) {
            const Token& w = expect(Tok::Number);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(w.text.data(), w.text.data() + w.text.size(), value);
            if (ec != std::errc{} || ptr != w.text.data() + w.text.size()) {
                throw DslError(w.line, w.column, "invalid weight '" + w.text + "'");
            }
            if (!(value > 0.0 && value <= 1.0)) throw DslError(w.line, w.column, "weight must lie in (0, 1]");
            r.weight = value;
        }
        return r;
    }

    Expr disjunction() {
        std::vector<Expr> ops;
        ops.push_back(conjunction());
        while (accept(Tok::Or)) ops.push_back(conjunction());
        return Expr::any_of(std::move(ops));
    }

    Expr conjunction() {
        std::vector<Expr> ops;
        ops.push_back(primary());
        while (accept(Tok::And)) ops.push_back(primary());
        return Expr::all_of(std::move(ops));
    }

    Expr primary() {
        if (accept(Tok::LParen)) {
            Expr e = disjunction();
            expect(Tok::RParen);
            return e;
        }
        auto [var, term] = atom_names();
        return Expr::atom(std::move(var), std::move(term));
    }

    std::pair<std::string, std::string> atom_names() {
        const Token& v = expect(Tok::Ident);
        expect(Tok::Is);
        const Token& t = expect(Tok::Ident);
        const LinguisticVariable* var = nullptr;
        for (const auto& candidate : vars_) {
            if (candidate.name == v.text) var = &candidate;
        }
        if (!var) throw DslError(v.line, v.column, "unknown variable '" + v.text + "'");
        if (!var->find(t.text)) {
            throw DslError(t.line, t.column, "unknown term '" + t.text + "' for variable '" + v.text + "'");
        }
        return {v.text, t.text};
    }

    std::vector<Token> toks_;
    std::span<const LinguisticVariable> vars_;
    std::size_t pos_ = 0;
};

}  // namespace

RuleBase parse_rules(std::string_view text, std::span<const LinguisticVariable> variables) {
    return Parser(tokenize(text), variables).parse();
}

}  // namespace subaudit::fuzzy
