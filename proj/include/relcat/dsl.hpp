#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relcat/cells.hpp"
#include "relcat/error.hpp"
#include "relcat/structures.hpp"

namespace relcat::dsl {

/// Source position, 1-based. Positions do not take part in structural
/// equality, so a reparsed file compares equal to the original.
struct Loc {
  int line = 1;
  int col = 1;
  friend bool operator==(const Loc&, const Loc&) { return true; }
};

std::string to_string(const Loc& loc);

/// Lexical or syntax error with the tokens that would have been accepted.
class ParseError : public Error {
 public:
  ParseError(Loc loc, std::string message, std::vector<std::string> expected = {});
  const Loc& loc() const { return loc_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Loc loc_;
  std::vector<std::string> expected_;
};

/// Unknown name, redeclaration, arity or composition mismatch.
class ElabError : public Error {
 public:
  ElabError(Loc loc, std::string message);
  const Loc& loc() const { return loc_; }

 private:
  Loc loc_;
};

// ---- syntax ----------------------------------------------------------------

/// 1-cell type expression.
struct TypeExpr {
  enum class Kind { Unit, Name, Left, Right, Region, Pub, In, Tensor, Compose };
  Kind kind = Kind::Unit;
  std::string name;                // Name; the set of Left/Right/Region/Pub/In
  std::vector<TypeExpr> children;  // In: {private type}; Tensor/Compose: {lhs, rhs}
  Loc loc;
  bool operator==(const TypeExpr&) const = default;
};

/// Element of a set, by index or by label.
struct Element {
  std::optional<std::size_t> index;
  std::string label;
  Loc loc;
  bool operator==(const Element&) const = default;
};

using Tuple = std::vector<Element>;

struct RelPair {
  Tuple from;
  Tuple to;
  bool operator==(const RelPair&) const = default;
};

struct RelData {
  std::vector<RelPair> pairs;
  bool operator==(const RelData&) const = default;
};

struct Term {
  enum class Kind { Name, Call, Seq, Then, Par };
  Kind kind = Kind::Name;
  std::string name;                // Name, or the builtin of a Call
  std::vector<TypeExpr> args;      // Call
  std::vector<Term> children;      // Seq/Then/Par: {lhs, rhs}
  Loc loc;
  bool operator==(const Term&) const = default;
};

struct SetDecl {
  std::string name;
  std::optional<std::size_t> size;
  std::vector<std::string> labels;
  Loc loc;
  bool operator==(const SetDecl&) const = default;
};

struct ObjectDecl {
  std::string name;
  TypeExpr type;
  Loc loc;
  bool operator==(const ObjectDecl&) const = default;
};

/// Plain generators relate scalar types; controlled ones give one block of
/// pairs per public value.
struct GenDecl {
  std::string name;
  bool controlled = false;
  std::string public_set;  // controlled only
  TypeExpr dom;
  TypeExpr cod;
  RelData data;                                      // plain
  std::vector<std::pair<Element, RelData>> blocks;  // controlled
  Loc loc;
  bool operator==(const GenDecl&) const = default;
};

struct BuiltinDecl {
  std::string name;
  Term call;
  Loc loc;
  bool operator==(const BuiltinDecl&) const = default;
};

struct DefDecl {
  std::string name;
  Term term;
  Loc loc;
  bool operator==(const DefDecl&) const = default;
};

struct CheckDecl {
  std::string lhs;
  std::string rhs;
  Loc loc;
  bool operator==(const CheckDecl&) const = default;
};

using Statement = std::variant<SetDecl, ObjectDecl, GenDecl, BuiltinDecl, DefDecl, CheckDecl>;

struct SourceFile {
  std::vector<Statement> statements;
  bool operator==(const SourceFile&) const = default;
};

SourceFile parse(const std::string& text);
Term parse_term(const std::string& text);

/// Canonical text: one statement per line, minimal parentheses, comments
/// dropped. parse(print(f)) == f.
std::string print(const SourceFile& f);
std::string print(const Term& t);
std::string print(const TypeExpr& t);

// ---- meaning ---------------------------------------------------------------

struct TypedTerm {
  OneCell dom;
  OneCell cod;
};

struct Elaborator;

/// Declarations resolved against the cells and structures modules.
class Program {
 public:
  const FiniteSet& set(const std::string& name, Loc loc) const;
  OneCell type(const TypeExpr& t) const;
  /// Domain and codomain without computing any relation.
  TypedTerm infer(const Term& t) const;
  TwoCell evaluate(const Term& t) const;
  TwoCell evaluate(const std::string& def_name) const;

  bool has_def(const std::string& name) const { return defs_.count(name) != 0; }
  /// The relation of a plain generator, nullopt for other names.
  std::optional<Rel> scalar_gen(const std::string& name) const;
  /// The family of a controlled generator, nullopt for other names.
  std::optional<ControlledOp> controlled_gen(const std::string& name) const;
  const std::vector<CheckDecl>& checks() const { return checks_; }
  const std::vector<std::string>& def_names() const { return def_order_; }

 private:
  friend Program elaborate(const SourceFile& f);
  friend struct Elaborator;

  struct Gen {
    std::optional<TwoCell> cell;
    std::optional<ControlledOp> op;
  };

  void declare(const std::string& name, Loc loc);
  TwoCell leaf(const Term& t) const;
  TwoCell builtin(const Term& call) const;
  const Gen* find_gen(const std::string& name) const;
  std::vector<FiniteSet> factors(const TypeExpr& t) const;
  Rel relation(const GenDecl& g, const std::vector<FiniteSet>& dom,
               const std::vector<FiniteSet>& cod, const RelData& data) const;

  std::map<std::string, FiniteSet> sets_;
  std::map<std::string, OneCell> objects_;
  std::map<std::string, Gen> gens_;
  std::map<std::string, TwoCell> builtins_;
  std::map<std::string, Term> defs_;
  std::map<std::string, TypedTerm> def_types_;
  std::vector<std::string> def_order_;
  std::vector<CheckDecl> checks_;
  std::map<std::string, Loc> declared_;
};

/// Resolves every name and types every definition; throws ElabError.
Program elaborate(const SourceFile& f);

struct CheckReport {
  enum class Verdict { Equal, Unequal, TypeError };
  std::string name;  // "lhs == rhs"
  Verdict verdict = Verdict::TypeError;
  std::string message;
  std::optional<Difference> difference;
  Loc loc;
};

const char* verdict_name(CheckReport::Verdict v);

CheckReport check_equation(const Program& p, const CheckDecl& c);

struct FileRun {
  std::vector<CheckReport> reports;
  /// 0 all checks equal, 1 some check unequal, 2 a type error in a check.
  int exit_code = 0;
};

/// Parses, elaborates and runs every check; ParseError and ElabError
/// propagate (exit status 2 for callers).
FileRun run_checks(const std::string& text);

}  // namespace relcat::dsl
