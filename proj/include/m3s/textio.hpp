#pragma once

// Reader and writer for `.m3s` presentation documents.
//
//   document  := ("graph" | "tree" | "endspace") "{" statement* "}"
//   palette   := "palette" "[" id ("," id)* "]" ";"
//   graph     := palette | id ":" int ";" | "edge" id id ";"
//   tree      := palette | "root" id ";" | id ":" int "->" "[" (id ("," id)*)? "]" ";"
//   endspace  := palette | "E" "{" ("root" id ";" | id ":" bit "->" id ";")* "}"
//              | "subset" int "{" ("allow" id? bit ";")* "}" | "count" int "=" int ";"
//
// Whitespace is insignificant, `#` starts a comment that runs to the end of
// the line, CRLF is accepted. `allow b;` without a state allows symbol b at
// every E-state that has it. Serialization emits a single LF-terminated line.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "m3s/error.hpp"
#include "m3s/presentation.hpp"
#include "m3s/realize.hpp"

namespace m3s {

enum class DocumentKind { FiniteGraph, RegularTree, EndSpaceSpec };

using Document = std::variant<FiniteGraph, TreeAutomaton, EndSpaceSpec>;

namespace detail {

enum class Tok { Ident, Int, LBrace, RBrace, LBracket, RBracket, Semi, Colon, Comma, Arrow, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePosition pos;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Int: return "integer " + t.text;
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") advance(3);
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const SourcePosition pos = pos_;
      if (i_ >= text_.size()) {
        out.push_back({Tok::End, "", pos});
        return out;
      }
      const char c = text_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i_;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
        out.push_back({Tok::Ident, std::string(text_.substr(i_, j - i_)), pos});
        advance(j - i_);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i_;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        out.push_back({Tok::Int, std::string(text_.substr(i_, j - i_)), pos});
        advance(j - i_);
      } else if (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
        out.push_back({Tok::Arrow, "->", pos});
        advance(2);
      } else {
        Tok kind;
        switch (c) {
          case '{': kind = Tok::LBrace; break;
          case '}': kind = Tok::RBrace; break;
          case '[': kind = Tok::LBracket; break;
          case ']': kind = Tok::RBracket; break;
          case ';': kind = Tok::Semi; break;
          case ':': kind = Tok::Colon; break;
          case ',': kind = Tok::Comma; break;
          case '=': kind = Tok::Equals; break;
          default:
            throw SyntaxError(pos, "token", "character '" + std::string(1, c) + "'");
        }
        out.push_back({kind, std::string(1, c), pos});
        advance(1);
      }
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i_) {
      if (text_[i_] == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else {
        ++pos_.column;
      }
    }
  }

  void skip_space() {
    while (i_ < text_.size()) {
      const char c = text_[i_];
      if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') advance(1);
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePosition pos_;
};

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"graph", "tree", "endspace", "palette", "root",
                                       "edge",  "subset", "count", "allow"};
  return k;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Document document() {
    const Token& head = peek();
    if (is_word(head, "graph")) return graph();
    if (is_word(head, "tree")) return tree();
    if (is_word(head, "endspace")) return endspace();
    throw SyntaxError(head.pos, "'graph', 'tree' or 'endspace'", describe(head));
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(i_ + ahead, tokens_.size() - 1)]; }
  const Token& next() { return tokens_[i_ < tokens_.size() - 1 ? i_++ : i_]; }

  static bool is_word(const Token& t, std::string_view w) { return t.kind == Tok::Ident && t.text == w; }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) throw SyntaxError(peek().pos, what, describe(peek()));
    return next();
  }

  void expect_word(std::string_view w) {
    if (!is_word(peek(), w)) throw SyntaxError(peek().pos, "'" + std::string(w) + "'", describe(peek()));
    next();
  }

  std::string identifier() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || keywords().count(t.text)) throw SyntaxError(t.pos, "identifier", describe(t));
    return next().text;
  }

  std::uint64_t integer() {
    const Token& t = peek();
    if (t.kind != Tok::Int || t.text.size() > 18) throw SyntaxError(t.pos, "integer", describe(t));
    return std::stoull(next().text);
  }

  int bit() {
    const Token& t = peek();
    if (t.kind != Tok::Int || (t.text != "0" && t.text != "1")) throw SyntaxError(t.pos, "0 or 1", describe(t));
    return next().text == "1" ? 1 : 0;
  }

  void end_of_document() {
    expect(Tok::RBrace, "'}'");
    expect(Tok::End, "end of input");
  }

  Palette palette_statement(std::optional<Palette>& slot) {
    const Token& kw = next();
    if (slot) throw Error(Errc::DuplicateId, position(kw) + ": palette declared twice", {"palette"});
    expect(Tok::LBracket, "'['");
    std::vector<std::string> labels{identifier()};
    while (peek().kind == Tok::Comma) {
      next();
      labels.push_back(identifier());
    }
    expect(Tok::RBracket, "',' or ']'");
    expect(Tok::Semi, "';'");
    slot = Palette(std::move(labels));
    return *slot;
  }

  static std::string position(const Token& t) {
    return std::to_string(t.pos.line) + ":" + std::to_string(t.pos.column);
  }

  void claim(std::set<std::string>& ids, const std::string& id, const Token& at) {
    if (!ids.insert(id).second) throw Error(Errc::DuplicateId, position(at) + ": duplicate identifier " + id, {id});
  }

  template <typename F>
  static auto validated(F&& f) {
    try {
      return f();
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(e);
    }
  }

  Document graph() {
    next();
    expect(Tok::LBrace, "'{'");
    std::optional<Palette> palette;
    RawGraph raw;
    std::set<std::string> ids;
    while (peek().kind != Tok::RBrace) {
      const Token& t = peek();
      if (is_word(t, "palette")) {
        palette_statement(palette);
      } else if (is_word(t, "edge")) {
        next();
        std::string a = identifier();
        std::string b = identifier();
        expect(Tok::Semi, "';'");
        raw.edges.emplace_back(std::move(a), std::move(b));
      } else if (t.kind == Tok::Ident && !keywords().count(t.text)) {
        const Token at = t;
        std::string id = identifier();
        expect(Tok::Colon, "':'");
        const auto colour = integer();
        expect(Tok::Semi, "';'");
        claim(ids, id, at);
        raw.vertices.push_back({std::move(id), colour});
      } else {
        throw SyntaxError(t.pos, "statement or '}'", describe(t));
      }
    }
    end_of_document();
    raw.palette = palette.value_or(Palette{});
    return validated([&] { return Document(validate_finite(raw)); });
  }

  Document tree() {
    next();
    expect(Tok::LBrace, "'{'");
    std::optional<Palette> palette;
    std::optional<std::string> root;
    RawAutomaton raw;
    std::set<std::string> ids;
    while (peek().kind != Tok::RBrace) {
      const Token& t = peek();
      if (is_word(t, "palette")) {
        palette_statement(palette);
      } else if (is_word(t, "root")) {
        const Token at = next();
        if (root) throw Error(Errc::DuplicateId, position(at) + ": root declared twice", {"root"});
        root = identifier();
        expect(Tok::Semi, "';'");
      } else if (t.kind == Tok::Ident && !keywords().count(t.text)) {
        const Token at = t;
        RawState s{identifier(), 0, {}};
        expect(Tok::Colon, "':'");
        s.colour = integer();
        expect(Tok::Arrow, "'->'");
        expect(Tok::LBracket, "'['");
        if (peek().kind != Tok::RBracket) {
          s.children.push_back(identifier());
          while (peek().kind == Tok::Comma) {
            next();
            s.children.push_back(identifier());
          }
        }
        expect(Tok::RBracket, "',' or ']'");
        expect(Tok::Semi, "';'");
        claim(ids, s.id, at);
        raw.states.push_back(std::move(s));
      } else {
        throw SyntaxError(t.pos, "statement or '}'", describe(t));
      }
    }
    if (!root) throw SyntaxError(peek().pos, "root statement", describe(peek()));
    end_of_document();
    raw.palette = palette.value_or(Palette{});
    raw.root = *root;
    return validated([&] { return Document(validate_regular(raw)); });
  }

  Document endspace() {
    next();
    expect(Tok::LBrace, "'{'");
    std::optional<Palette> palette;
    EndSpaceSpec spec;
    bool have_e = false;
    struct Allow {
      std::optional<std::string> state;
      int symbol;
      Token at;
    };
    std::map<Colour, std::vector<Allow>> allows;
    std::map<std::pair<std::string, int>, Token> transitions_seen;
    while (peek().kind != Tok::RBrace) {
      const Token& t = peek();
      if (is_word(t, "palette")) {
        palette_statement(palette);
      } else if (is_word(t, "E")) {
        const Token at = next();
        if (have_e) throw Error(Errc::DuplicateId, position(at) + ": E declared twice", {"E"});
        have_e = true;
        expect(Tok::LBrace, "'{'");
        while (peek().kind != Tok::RBrace) {
          if (is_word(peek(), "root")) {
            const Token rt = next();
            if (spec.ends.root) throw Error(Errc::DuplicateId, position(rt) + ": root declared twice", {"root"});
            spec.ends.root = spec.ends.add_state(identifier());
            expect(Tok::Semi, "';'");
          } else if (peek().kind == Tok::Ident) {
            const Token st = peek();
            const std::string from = identifier();
            expect(Tok::Colon, "':'");
            const int sym = bit();
            expect(Tok::Arrow, "'->'");
            const std::string to = identifier();
            expect(Tok::Semi, "';'");
            const std::size_t a = spec.ends.add_state(from);
            const std::size_t b = spec.ends.add_state(to);
            if (spec.ends.next[a][sym])
              throw ValidationError(Error(Errc::InvalidSpec,
                                          position(st) + ": E is not deterministic at " + from + " " +
                                              std::to_string(sym),
                                          {from}));
            spec.ends.next[a][sym] = b;
          } else {
            throw SyntaxError(peek().pos, "E statement or '}'", describe(peek()));
          }
        }
        next();
      } else if (is_word(t, "subset")) {
        const Token at = next();
        const Colour i = integer();
        if (allows.count(i))
          throw Error(Errc::DuplicateId, position(at) + ": subset " + std::to_string(i) + " declared twice",
                      {std::to_string(i)});
        auto& list = allows[i];
        expect(Tok::LBrace, "'{'");
        while (peek().kind != Tok::RBrace) {
          const Token al = peek();
          expect_word("allow");
          std::optional<std::string> state;
          if (peek().kind == Tok::Ident) state = identifier();
          const int sym = bit();
          expect(Tok::Semi, "';'");
          list.push_back({state, sym, al});
        }
        next();
      } else if (is_word(t, "count")) {
        const Token at = next();
        const Colour j = integer();
        expect(Tok::Equals, "'='");
        const auto n = integer();
        expect(Tok::Semi, "';'");
        if (!spec.finite_counts.emplace(j, n).second)
          throw Error(Errc::DuplicateId, position(at) + ": count " + std::to_string(j) + " declared twice",
                      {std::to_string(j)});
      } else {
        throw SyntaxError(t.pos, "statement or '}'", describe(t));
      }
    }
    end_of_document();
    spec.palette = palette.value_or(Palette{});

    return validated([&] {
      for (const auto& [i, list] : allows) {
        TransitionMask mask(spec.ends.size(), {false, false});
        for (const auto& a : list) {
          if (a.state) {
            auto s = spec.ends.find(*a.state);
            if (!s) throw Error(Errc::InvalidSpec, position(a.at) + ": subset names unknown state " + *a.state, {*a.state});
            mask[*s][a.symbol] = true;
          } else {
            for (std::size_t s = 0; s < spec.ends.size(); ++s)
              if (spec.ends.next[s][a.symbol]) mask[s][a.symbol] = true;
          }
        }
        spec.subsets[i] = std::move(mask);
      }
      validate_spec(spec);
      return Document(spec);
    });
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
};

inline std::string palette_text(const Palette& p) {
  std::string out = "palette [";
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? ", " : "") + p.label(i);
  return out + "];";
}

}  // namespace detail

/// Kind of a document, from its leading keyword.
inline DocumentKind document_kind(std::string_view text) {
  const auto tokens = detail::Lexer(text).run();
  const auto& head = tokens.front();
  if (head.kind == detail::Tok::Ident) {
    if (head.text == "graph") return DocumentKind::FiniteGraph;
    if (head.text == "tree") return DocumentKind::RegularTree;
    if (head.text == "endspace") return DocumentKind::EndSpaceSpec;
  }
  throw SyntaxError(head.pos, "'graph', 'tree' or 'endspace'", detail::describe(head));
}

/// Parses and validates a document. Throws SyntaxError, Error(DuplicateId)
/// or ValidationError.
inline Document parse(std::string_view text) { return detail::Parser(text).document(); }

inline std::string serialize(const FiniteGraph& g) {
  std::string out = "graph { " + detail::palette_text(g.palette());
  for (const auto& v : g.vertices()) out += " " + v.id + ": " + std::to_string(v.colour) + ";";
  for (auto [a, b] : g.edges()) out += " edge " + g.id(a) + " " + g.id(b) + ";";
  return out + " }\n";
}

inline std::string serialize(const TreeAutomaton& p) {
  std::string out = "tree { " + detail::palette_text(p.palette()) + " root " + p.state(p.root()).id + ";";
  for (const auto& s : p.states()) {
    out += " " + s.id + ": " + std::to_string(s.colour) + " -> [";
    for (std::size_t i = 0; i < s.children.size(); ++i) out += (i ? ", " : "") + p.state(s.children[i]).id;
    out += "];";
  }
  return out + " }\n";
}

inline std::string serialize(const EndSpaceSpec& spec) {
  const auto& e = spec.ends;
  std::string out = "endspace { " + detail::palette_text(spec.palette) + " E {";
  if (e.root) out += " root " + e.ids[*e.root] + ";";
  for (std::size_t s = 0; s < e.size(); ++s)
    for (int sym = 0; sym < 2; ++sym)
      if (e.next[s][sym]) out += " " + e.ids[s] + ": " + std::to_string(sym) + " -> " + e.ids[*e.next[s][sym]] + ";";
  out += " }";
  for (const auto& [i, mask] : spec.subsets) {
    out += " subset " + std::to_string(i) + " {";
    for (std::size_t s = 0; s < e.size(); ++s)
      for (int sym = 0; sym < 2; ++sym)
        if (mask[s][sym]) out += " allow " + e.ids[s] + " " + std::to_string(sym) + ";";
    out += " }";
  }
  for (const auto& [j, n] : spec.finite_counts) out += " count " + std::to_string(j) + " = " + std::to_string(n) + ";";
  return out + " }\n";
}

inline std::string serialize(const Document& d) {
  return std::visit([](const auto& x) { return serialize(x); }, d);
}

}  // namespace m3s
