#include <sstream>

#include "relcat/dsl.hpp"

namespace relcat::dsl {

namespace {

// Binding strength; a child needs parentheses when it binds less tightly
// than its parent, or equally tightly on the right (operators associate left).
int strength(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Seq: return 0;
    case Term::Kind::Then: return 1;
    case Term::Kind::Par: return 2;
    default: return 3;
  }
}

int strength(const TypeExpr& t) {
  switch (t.kind) {
    case TypeExpr::Kind::Compose: return 0;
    case TypeExpr::Kind::Tensor: return 1;
    default: return 2;
  }
}

template <class T>
void child(std::ostream& os, const T& c, int parent, bool right);

void emit(std::ostream& os, const TypeExpr& t) {
  switch (t.kind) {
    case TypeExpr::Kind::Unit: os << "1"; return;
    case TypeExpr::Kind::Name: os << t.name; return;
    case TypeExpr::Kind::Left: os << "left(" << t.name << ")"; return;
    case TypeExpr::Kind::Right: os << "right(" << t.name << ")"; return;
    case TypeExpr::Kind::Region: os << "region(" << t.name << ")"; return;
    case TypeExpr::Kind::Pub: os << "pub(" << t.name << ")"; return;
    case TypeExpr::Kind::In:
      os << "in(" << t.name << ", ";
      emit(os, t.children[0]);
      os << ")";
      return;
    case TypeExpr::Kind::Tensor:
    case TypeExpr::Kind::Compose: {
      const int s = strength(t);
      child(os, t.children[0], s, false);
      os << (t.kind == TypeExpr::Kind::Tensor ? " * " : " . ");
      child(os, t.children[1], s, true);
      return;
    }
  }
}

void emit(std::ostream& os, const Term& t) {
  switch (t.kind) {
    case Term::Kind::Name: os << t.name; return;
    case Term::Kind::Call:
      os << t.name << "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) os << ", ";
        emit(os, t.args[i]);
      }
      os << ")";
      return;
    default: {
      static const char* ops[] = {" ; ", " . ", " * "};
      const int s = strength(t);
      child(os, t.children[0], s, false);
      os << ops[s];
      child(os, t.children[1], s, true);
    }
  }
}

template <class T>
void child(std::ostream& os, const T& c, int parent, bool right) {
  const int s = strength(c);
  const bool parens = s < parent || (right && s == parent);
  if (parens) os << "(";
  emit(os, c);
  if (parens) os << ")";
}

void emit(std::ostream& os, const Element& e) {
  if (e.index) {
    os << *e.index;
  } else {
    os << e.label;
  }
}

void emit(std::ostream& os, const Tuple& t) {
  if (t.size() == 1) {
    emit(os, t[0]);
    return;
  }
  os << "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ", ";
    emit(os, t[i]);
  }
  os << ")";
}

void emit(std::ostream& os, const RelData& d) {
  os << "{";
  for (std::size_t i = 0; i < d.pairs.size(); ++i) {
    if (i) os << ", ";
    emit(os, d.pairs[i].from);
    os << " -> ";
    emit(os, d.pairs[i].to);
  }
  os << "}";
}

struct StatementPrinter {
  std::ostream& os;

  void operator()(const SetDecl& d) {
    os << "set " << d.name << " = ";
    if (d.size) {
      os << *d.size;
      return;
    }
    os << "{";
    for (std::size_t i = 0; i < d.labels.size(); ++i) os << (i ? ", " : "") << d.labels[i];
    os << "}";
  }
  void operator()(const ObjectDecl& d) {
    os << "object " << d.name << " = ";
    emit(os, d.type);
  }
  void operator()(const GenDecl& g) {
    os << "gen " << g.name << " : ";
    if (g.controlled) os << "controlled(" << g.public_set << ") ";
    emit(os, g.dom);
    os << " -> ";
    emit(os, g.cod);
    os << " = ";
    if (!g.controlled) {
      emit(os, g.data);
      return;
    }
    os << "{";
    for (std::size_t i = 0; i < g.blocks.size(); ++i) {
      os << (i ? ",\n  " : "\n  ");
      emit(os, g.blocks[i].first);
      os << ": ";
      emit(os, g.blocks[i].second);
    }
    os << (g.blocks.empty() ? "}" : "\n}");
  }
  void operator()(const BuiltinDecl& d) {
    os << "builtin " << d.name << " = ";
    emit(os, d.call);
  }
  void operator()(const DefDecl& d) {
    os << "def " << d.name << " = ";
    emit(os, d.term);
  }
  void operator()(const CheckDecl& c) { os << "check " << c.lhs << " == " << c.rhs; }
};

}  // namespace

std::string print(const TypeExpr& t) {
  std::ostringstream os;
  emit(os, t);
  return os.str();
}

std::string print(const Term& t) {
  std::ostringstream os;
  emit(os, t);
  return os.str();
}

std::string print(const SourceFile& f) {
  std::ostringstream os;
  for (const auto& s : f.statements) {
    std::visit(StatementPrinter{os}, s);
    os << "\n";
  }
  return os.str();
}

}  // namespace relcat::dsl
