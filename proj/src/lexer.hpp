// Shared tokenizer for the process and formula grammars.
#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "pisym/errors.hpp"

namespace pisym::detail {

enum class Tok { End, Ident, Zero, Punct };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t pos = 0;
};

inline bool is_name(const std::string& s) {
    return !s.empty() && (std::islower(static_cast<unsigned char>(s[0])) || s == "_a");
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { run(); }

    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(i_ + k, toks_.size() - 1)];
    }
    Token next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
    bool at(std::string_view punct) const {
        return peek().kind == Tok::Punct && peek().text == punct;
    }
    bool at_ident(std::string_view word) const {
        return peek().kind == Tok::Ident && peek().text == word;
    }
    bool accept(std::string_view punct) {
        if (!at(punct)) return false;
        ++i_;
        return true;
    }
    void expect(std::string_view punct) {
        if (!accept(punct)) fail({std::string(punct)});
    }
    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& detail = {}) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(t.pos, std::move(expected), detail.empty() ? "unexpected " + got : detail);
    }
    std::size_t mark() const { return i_; }
    void reset(std::size_t m) { i_ = m; }

private:
    void run() {
        std::size_t i = 0;
        while (i < src_.size()) {
            unsigned char c = static_cast<unsigned char>(src_[i]);
            if (std::isspace(c)) {
                ++i;
                continue;
            }
            Token t;
            t.pos = i;
            if (std::isalpha(c) || (c == '_' && i + 1 < src_.size() && src_[i + 1] == 'a')) {
                std::size_t j = i + 1;
                while (j < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                    ++j;
                t.kind = Tok::Ident;
                t.text = std::string(src_.substr(i, j - i));
                if (t.text[0] == '_' && t.text != "_a")
                    throw SyntaxError(i, {"name"}, "identifiers may not start with '_'");
                i = j;
            } else if (c == '0') {
                t.kind = Tok::Zero;
                t.text = "0";
                ++i;
            } else if (src_.substr(i, 2) == ":=") {
                t.kind = Tok::Punct;
                t.text = ":=";
                i += 2;
            } else if (std::string_view("()[]<>=!?.+|&,#").find(static_cast<char>(c)) != std::string_view::npos) {
                t.kind = Tok::Punct;
                t.text = std::string(1, static_cast<char>(c));
                ++i;
            } else {
                throw SyntaxError(i, {}, std::string("unexpected character '") + static_cast<char>(c) + "'");
            }
            toks_.push_back(std::move(t));
        }
        toks_.push_back(Token{Tok::End, "", src_.size()});
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

}  // namespace pisym::detail
