#include <cctype>
#include <set>

#include "relcat/dsl.hpp"

namespace relcat::dsl {

std::string to_string(const Loc& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

namespace {

std::string expected_list(const std::vector<std::string>& expected) {
  std::string s;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) s += i + 1 == expected.size() ? " or " : ", ";
    s += expected[i];
  }
  return s;
}

}  // namespace

ParseError::ParseError(Loc loc, std::string message, std::vector<std::string> expected)
    : Error(to_string(loc) + ": " + message +
            (expected.empty() ? std::string() : " (expected " + expected_list(expected) + ")")),
      loc_(loc),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Loc loc;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Int: return "integer " + t.text;
    case Tok::Sym: return "'" + t.text + "'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.loc = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j - i > 9) throw ParseError(t.loc, "integer literal too large");
      t.kind = Tok::Int;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (src.compare(i, 2, "->") == 0 || src.compare(i, 2, "==") == 0) {
      t.kind = Tok::Sym;
      t.text = src.substr(i, 2);
      advance(2);
    } else if (std::string("={}(),:;.*").find(c) != std::string::npos) {
      t.kind = Tok::Sym;
      t.text = std::string(1, c);
      advance(1);
    } else {
      const auto uc = static_cast<unsigned char>(c);
      throw ParseError(t.loc, uc < 0x80 ? std::string("unexpected character '") + c + "'"
                                        : std::string("non-ASCII character outside a comment"));
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {"set", "object", "gen", "builtin", "def", "check"};
const std::set<std::string> kTypeForms = {"left", "right", "region", "pub", "in"};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  SourceFile file() {
    SourceFile f;
    while (peek().kind != Tok::End) f.statements.push_back(statement());
    return f;
  }

  Term standalone_term() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool at_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool at_word(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(peek().loc, "unexpected " + describe(peek()), std::move(expected));
  }

  Token sym(const char* s) {
    if (!at_sym(s)) fail({std::string("'") + s + "'"});
    return next();
  }

  Token ident(const char* what = "identifier") {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail({what});
    return next();
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }

  Statement statement() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "set") return set_decl();
      if (t.text == "object") return object_decl();
      if (t.text == "gen") return gen_decl();
      if (t.text == "builtin") return builtin_decl();
      if (t.text == "def") return def_decl();
      if (t.text == "check") return check_decl();
    }
    fail({"'set'", "'object'", "'gen'", "'builtin'", "'def'", "'check'"});
  }

  SetDecl set_decl() {
    SetDecl d;
    d.loc = next().loc;
    d.name = ident().text;
    sym("=");
    if (peek().kind == Tok::Int) {
      d.size = std::stoul(next().text);
      return d;
    }
    if (!at_sym("{")) fail({"integer", "'{'"});
    next();
    d.labels.push_back(ident("label").text);
    while (at_sym(",")) {
      next();
      d.labels.push_back(ident("label").text);
    }
    sym("}");
    return d;
  }

  ObjectDecl object_decl() {
    ObjectDecl d;
    d.loc = next().loc;
    d.name = ident().text;
    sym("=");
    d.type = type();
    return d;
  }

  GenDecl gen_decl() {
    GenDecl g;
    g.loc = next().loc;
    g.name = ident().text;
    sym(":");
    if (at_word("controlled") && peek(1).kind == Tok::Sym && peek(1).text == "(") {
      next();
      g.controlled = true;
      sym("(");
      g.public_set = ident("set name").text;
      sym(")");
    }
    g.dom = type();
    sym("->");
    g.cod = type();
    sym("=");
    if (!g.controlled) {
      g.data = reldata();
      return g;
    }
    sym("{");
    if (!at_sym("}")) {
      do {
        if (at_sym(",")) next();
        Element e = element();
        sym(":");
        g.blocks.emplace_back(std::move(e), reldata());
      } while (at_sym(","));
    }
    sym("}");
    return g;
  }

  BuiltinDecl builtin_decl() {
    BuiltinDecl d;
    d.loc = next().loc;
    d.name = ident().text;
    sym("=");
    if (peek().kind != Tok::Ident || !(peek(1).kind == Tok::Sym && peek(1).text == "(")) {
      fail({"builtin call"});
    }
    d.call = atom();
    return d;
  }

  DefDecl def_decl() {
    DefDecl d;
    d.loc = next().loc;
    d.name = ident().text;
    sym("=");
    d.term = term();
    return d;
  }

  CheckDecl check_decl() {
    CheckDecl c;
    c.loc = next().loc;
    c.lhs = ident().text;
    sym("==");
    c.rhs = ident().text;
    return c;
  }

  // term := then (';' then)* ; then := par ('.' par)* ; par := atom ('*' atom)*
  Term term() { return binary(0); }

  Term binary(int level) {
    static const char* ops[] = {";", ".", "*"};
    static const Term::Kind kinds[] = {Term::Kind::Seq, Term::Kind::Then, Term::Kind::Par};
    Term lhs = level == 2 ? atom() : binary(level + 1);
    while (at_sym(ops[level])) {
      Term node;
      node.kind = kinds[level];
      node.loc = next().loc;
      Term rhs = level == 2 ? atom() : binary(level + 1);
      node.children = {std::move(lhs), std::move(rhs)};
      lhs = std::move(node);
    }
    return lhs;
  }

  Term atom() {
    if (at_sym("(")) {
      next();
      Term t = term();
      sym(")");
      return t;
    }
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail({"identifier", "'('"});
    Term t;
    t.loc = peek().loc;
    t.name = next().text;
    if (!at_sym("(")) return t;
    t.kind = Term::Kind::Call;
    next();
    if (!at_sym(")")) {
      t.args.push_back(type());
      while (at_sym(",")) {
        next();
        t.args.push_back(type());
      }
    }
    sym(")");
    return t;
  }

  // type := tfactor ('.' tfactor)* ; tfactor := tatom ('*' tatom)*
  TypeExpr type() {
    TypeExpr lhs = type_factor();
    while (at_sym(".")) {
      TypeExpr node;
      node.kind = TypeExpr::Kind::Compose;
      node.loc = next().loc;
      node.children = {std::move(lhs), type_factor()};
      lhs = std::move(node);
    }
    return lhs;
  }

  TypeExpr type_factor() {
    TypeExpr lhs = type_atom();
    while (at_sym("*")) {
      TypeExpr node;
      node.kind = TypeExpr::Kind::Tensor;
      node.loc = next().loc;
      node.children = {std::move(lhs), type_atom()};
      lhs = std::move(node);
    }
    return lhs;
  }

  TypeExpr type_atom() {
    TypeExpr t;
    t.loc = peek().loc;
    if (at_sym("(")) {
      next();
      t = type();
      sym(")");
      return t;
    }
    if (peek().kind == Tok::Int) {
      if (peek().text != "1") fail({"'1'", "type"});
      next();
      return t;
    }
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail({"type"});
    const std::string word = next().text;
    if (kTypeForms.count(word) && at_sym("(")) {
      next();
      t.name = ident("set name").text;
      if (word == "left") t.kind = TypeExpr::Kind::Left;
      if (word == "right") t.kind = TypeExpr::Kind::Right;
      if (word == "region") t.kind = TypeExpr::Kind::Region;
      if (word == "pub") t.kind = TypeExpr::Kind::Pub;
      if (word == "in") {
        t.kind = TypeExpr::Kind::In;
        sym(",");
        t.children.push_back(type());
      }
      sym(")");
      return t;
    }
    t.kind = TypeExpr::Kind::Name;
    t.name = word;
    return t;
  }

  Element element() {
    Element e;
    e.loc = peek().loc;
    if (peek().kind == Tok::Int) {
      e.index = std::stoul(next().text);
    } else if (peek().kind == Tok::Ident) {
      e.label = next().text;
    } else {
      fail({"element"});
    }
    return e;
  }

  Tuple tuple() {
    Tuple t;
    if (!at_sym("(")) {
      t.push_back(element());
      return t;
    }
    next();
    if (!at_sym(")")) {
      t.push_back(element());
      while (at_sym(",")) {
        next();
        t.push_back(element());
      }
    }
    sym(")");
    return t;
  }

  RelData reldata() {
    RelData d;
    sym("{");
    if (at_sym("}")) {
      next();
      return d;
    }
    do {
      if (at_sym(",")) next();
      RelPair p;
      p.from = tuple();
      sym("->");
      p.to = tuple();
      d.pairs.push_back(std::move(p));
    } while (at_sym(","));
    sym("}");
    return d;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SourceFile parse(const std::string& text) { return Parser(text).file(); }

Term parse_term(const std::string& text) { return Parser(text).standalone_term(); }

}  // namespace relcat::dsl
