#include "relcat/dsl.hpp"

namespace relcat::dsl {

ElabError::ElabError(Loc loc, std::string message)
    : Error(to_string(loc) + ": " + message), loc_(loc) {}

namespace {

const OneCell& unit_cell() {
  static const OneCell u = OneCell::identity(FiniteSet::unit());
  return u;
}

std::string show(const OneCell& c) { return c.describe(); }

bool same_sizes(const OneCell& a, const OneCell& b) {
  if (a.src().size() != b.src().size() || a.dst().size() != b.dst().size()) return false;
  for (std::size_t i = 0; i < a.fibers().size(); ++i) {
    if (a.fibers()[i].size() != b.fibers()[i].size()) return false;
  }
  return true;
}

std::string arg_count(std::size_t n) { return std::to_string(n) + (n == 1 ? " argument" : " arguments"); }

}  // namespace

void Program::declare(const std::string& name, Loc loc) {
  auto it = declared_.find(name);
  if (it != declared_.end()) {
    throw ElabError(loc, "'" + name + "' is already declared at " + to_string(it->second));
  }
  declared_.emplace(name, loc);
}

const FiniteSet& Program::set(const std::string& name, Loc loc) const {
  auto it = sets_.find(name);
  if (it == sets_.end()) throw ElabError(loc, "unknown set '" + name + "'");
  return it->second;
}

OneCell Program::type(const TypeExpr& t) const {
  switch (t.kind) {
    case TypeExpr::Kind::Unit: return unit_cell();
    case TypeExpr::Kind::Name: {
      if (auto it = sets_.find(t.name); it != sets_.end()) return OneCell::scalar(it->second, t.name);
      if (auto it = objects_.find(t.name); it != objects_.end()) return it->second;
      throw ElabError(t.loc, "unknown set or object '" + t.name + "'");
    }
    case TypeExpr::Kind::Left: return left_edge(set(t.name, t.loc));
    case TypeExpr::Kind::Right: return right_edge(set(t.name, t.loc));
    case TypeExpr::Kind::Region: {
      const FiniteSet& s = set(t.name, t.loc);
      return hcompose(left_edge(s), right_edge(s));
    }
    case TypeExpr::Kind::Pub: return pub(set(t.name, t.loc));
    case TypeExpr::Kind::In: {
      const OneCell x = type(t.children[0]);
      if (!x.is_scalar()) throw ElabError(t.children[0].loc, "a private wire must have a scalar type");
      return private_wire(set(t.name, t.loc), x.fiber(0, 0));
    }
    case TypeExpr::Kind::Tensor: return tensor(type(t.children[0]), type(t.children[1]));
    case TypeExpr::Kind::Compose: {
      const OneCell a = type(t.children[0]);
      const OneCell b = type(t.children[1]);
      if (b.dst().size() != a.src().size()) {
        throw ElabError(t.loc, "cannot compose 1-cells " + show(a) + " and " + show(b));
      }
      return hcompose(a, b);
    }
  }
  throw ElabError(t.loc, "malformed type");
}

std::vector<FiniteSet> Program::factors(const TypeExpr& t) const {
  switch (t.kind) {
    case TypeExpr::Kind::Unit: return {};
    case TypeExpr::Kind::Name: {
      if (auto it = sets_.find(t.name); it != sets_.end()) return {it->second};
      const OneCell c = type(t);
      if (!c.is_scalar()) throw ElabError(t.loc, "generator types must be scalar, '" + t.name + "' is not");
      return {c.fiber(0, 0)};
    }
    case TypeExpr::Kind::Region: return {set(t.name, t.loc)};
    case TypeExpr::Kind::Tensor:
    case TypeExpr::Kind::Compose: {
      auto a = factors(t.children[0]);
      auto b = factors(t.children[1]);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    default: throw ElabError(t.loc, "generator types must be scalar: " + print(t));
  }
}

namespace {

std::size_t element_index(const FiniteSet& s, const Element& e) {
  if (e.index) {
    if (*e.index >= s.size()) {
      throw ElabError(e.loc, "element " + std::to_string(*e.index) + " out of range for a set of size " +
                                 std::to_string(s.size()));
    }
    return *e.index;
  }
  if (auto i = s.index_of(e.label)) return *i;
  throw ElabError(e.loc, "unknown element '" + e.label + "'");
}

std::size_t tuple_index(const std::vector<FiniteSet>& f, const Tuple& t, Loc loc) {
  if (t.size() != f.size()) {
    throw ElabError(t.empty() ? loc : t.front().loc,
                    "tuple has " + std::to_string(t.size()) + " components, the type has " +
                        std::to_string(f.size()));
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < f.size(); ++i) idx = idx * f[i].size() + element_index(f[i], t[i]);
  return idx;
}

std::size_t fiber_size(const std::vector<FiniteSet>& f) {
  std::size_t n = 1;
  for (const auto& s : f) n *= s.size();
  return n;
}

}  // namespace

Rel Program::relation(const GenDecl& g, const std::vector<FiniteSet>& dom,
                      const std::vector<FiniteSet>& cod, const RelData& data) const {
  Rel r(FiniteSet(fiber_size(dom)), FiniteSet(fiber_size(cod)));
  for (const auto& p : data.pairs) r.set(tuple_index(dom, p.from, g.loc), tuple_index(cod, p.to, g.loc));
  return r;
}

const Program::Gen* Program::find_gen(const std::string& name) const {
  auto it = gens_.find(name);
  return it == gens_.end() ? nullptr : &it->second;
}

std::optional<Rel> Program::scalar_gen(const std::string& name) const {
  const Gen* g = find_gen(name);
  if (g == nullptr || !g->cell || !g->cell->dom().is_scalar()) return std::nullopt;
  return g->cell->scalar_rel();
}

std::optional<ControlledOp> Program::controlled_gen(const std::string& name) const {
  const Gen* g = find_gen(name);
  if (g == nullptr || !g->op) return std::nullopt;
  return g->op;
}

TwoCell Program::builtin(const Term& call) const {
  const std::string& f = call.name;
  auto need = [&](std::size_t n) {
    if (call.args.size() != n) {
      throw ElabError(call.loc, "builtin '" + f + "' takes " + arg_count(n) + ", got " +
                                    std::to_string(call.args.size()));
    }
  };
  auto scalar_arg = [&](std::size_t i) {
    OneCell c = type(call.args[i]);
    if (!c.is_scalar()) {
      throw ElabError(call.args[i].loc, "builtin '" + f + "' needs a scalar type, got " + show(c));
    }
    return c;
  };
  auto set_arg = [&](std::size_t i) -> const FiniteSet& {
    const TypeExpr& a = call.args[i];
    if (a.kind != TypeExpr::Kind::Name) throw ElabError(a.loc, "builtin '" + f + "' needs a set name");
    return set(a.name, a.loc);
  };

  if (f == "id") {
    need(1);
    return TwoCell::identity(type(call.args[0]));
  }
  if (f == "cup" || f == "cap") {
    need(1);
    const OneCell x = scalar_arg(0);
    const DualityPair d = canonical_cup(x.fiber(0, 0));
    const OneCell xx = hcompose(x, x);
    return f == "cup" ? TwoCell(unit_cell(), xx, {d.cup}) : TwoCell(xx, unit_cell(), {d.cap});
  }
  if (f == "delete" || f == "create") {
    need(1);
    const OneCell x = scalar_arg(0);
    return f == "delete" ? TwoCell(x, unit_cell(), {deletion(x.fiber(0, 0))})
                         : TwoCell(unit_cell(), x, {creation(x.fiber(0, 0))});
  }
  if (f == "dup") {
    need(1);
    return dup(scalar_arg(0));
  }
  if (f == "swap") {
    need(2);
    return swap(scalar_arg(0), scalar_arg(1));
  }
  static const char* region_ops[] = {"copy",          "compare", "delete_region",
                                     "create_region", "publish", "sample"};
  for (const char* op : region_ops) {
    if (f != op) continue;
    need(1);
    const RegionStructure rs = region_structure(set_arg(0));
    if (f == "copy") return rs.copy;
    if (f == "compare") return rs.compare;
    if (f == "delete_region") return rs.delete_region;
    if (f == "create_region") return rs.create_region;
    if (f == "publish") return rs.publish;
    return rs.sample;
  }
  if (f == "controlled") {
    need(1);
    const TypeExpr& a = call.args[0];
    const Gen* g = a.kind == TypeExpr::Kind::Name ? find_gen(a.name) : nullptr;
    if (g == nullptr || !g->op) throw ElabError(a.loc, "controlled() needs a controlled generator");
    return controlled(*g->op);
  }
  throw ElabError(call.loc, "unknown builtin '" + f + "'");
}

TwoCell Program::leaf(const Term& t) const {
  if (const Gen* g = find_gen(t.name)) return g->cell ? *g->cell : controlled(*g->op);
  if (auto it = builtins_.find(t.name); it != builtins_.end()) return it->second;
  throw ElabError(t.loc, "unknown name '" + t.name + "'");
}

TypedTerm Program::infer(const Term& t) const {
  switch (t.kind) {
    case Term::Kind::Name: {
      if (auto it = def_types_.find(t.name); it != def_types_.end()) return it->second;
      const TwoCell c = leaf(t);
      return {c.dom(), c.cod()};
    }
    case Term::Kind::Call: {
      const TwoCell c = builtin(t);
      return {c.dom(), c.cod()};
    }
    case Term::Kind::Seq: {
      const TypedTerm a = infer(t.children[0]);
      const TypedTerm b = infer(t.children[1]);
      if (!(a.cod == b.dom)) {
        throw ElabError(t.loc, "cannot compose vertically: '" + print(t.children[0]) + "' ends in " +
                                   show(a.cod) + " but '" + print(t.children[1]) + "' starts from " +
                                   show(b.dom) +
                                   (same_sizes(a.cod, b.dom)
                                        ? " (same fiber sizes, different element order)"
                                        : ""));
      }
      return {a.dom, b.cod};
    }
    case Term::Kind::Then: {
      const TypedTerm a = infer(t.children[0]);
      const TypedTerm b = infer(t.children[1]);
      if (b.dom.dst().size() != a.dom.src().size()) {
        throw ElabError(t.loc, "cannot compose horizontally: '" + print(t.children[0]) + "' has type " +
                                   show(a.dom) + ", '" + print(t.children[1]) + "' has type " +
                                   show(b.dom) + " (middle 0-cells differ)");
      }
      return {hcompose(a.dom, b.dom), hcompose(a.cod, b.cod)};
    }
    case Term::Kind::Par: {
      const TypedTerm a = infer(t.children[0]);
      const TypedTerm b = infer(t.children[1]);
      return {tensor(a.dom, b.dom), tensor(a.cod, b.cod)};
    }
  }
  throw ElabError(t.loc, "malformed term");
}

TwoCell Program::evaluate(const Term& t) const {
  switch (t.kind) {
    case Term::Kind::Name:
      if (defs_.count(t.name)) return evaluate(t.name);
      return leaf(t);
    case Term::Kind::Call: return builtin(t);
    case Term::Kind::Seq: return vcompose(evaluate(t.children[0]), evaluate(t.children[1]));
    case Term::Kind::Then: return hcompose(evaluate(t.children[0]), evaluate(t.children[1]));
    case Term::Kind::Par: return tensor(evaluate(t.children[0]), evaluate(t.children[1]));
  }
  throw ElabError(t.loc, "malformed term");
}

TwoCell Program::evaluate(const std::string& def_name) const {
  auto it = defs_.find(def_name);
  if (it == defs_.end()) throw ElabError({}, "unknown definition '" + def_name + "'");
  return evaluate(it->second);
}

struct Elaborator {
  Program& p;

  void operator()(const SetDecl& d) {
    p.declare(d.name, d.loc);
    if (d.size) {
      p.sets_.emplace(d.name, FiniteSet(*d.size));
      return;
    }
    try {
      p.sets_.emplace(d.name, FiniteSet(d.labels));
    } catch (const ConstructionError& e) {
      throw ElabError(d.loc, e.what());
    }
  }

  void operator()(const ObjectDecl& d) {
    p.declare(d.name, d.loc);
    p.objects_.emplace(d.name, p.type(d.type));
  }

  void operator()(const GenDecl& g) {
    p.declare(g.name, g.loc);
    const auto dom = p.factors(g.dom);
    const auto cod = p.factors(g.cod);
    Program::Gen gen;
    if (!g.controlled) {
      const Rel r = p.relation(g, dom, cod, g.data);
      gen.cell = TwoCell(p.type(g.dom), p.type(g.cod), {r});
    } else {
      const FiniteSet& pubset = p.set(g.public_set, g.loc);
      const FiniteSet x(fiber_size(dom)), y(fiber_size(cod));
      std::vector<Rel> family(pubset.size(), Rel(x, y));
      std::vector<bool> seen(pubset.size(), false);
      for (const auto& [e, data] : g.blocks) {
        const std::size_t i = element_index(pubset, e);
        if (seen[i]) throw ElabError(e.loc, "block for public value " + pubset.label(i) + " given twice");
        seen[i] = true;
        family[i] = p.relation(g, dom, cod, data);
      }
      gen.op = ControlledOp{pubset, x, y, std::move(family)};
    }
    p.gens_.emplace(g.name, std::move(gen));
  }

  void operator()(const BuiltinDecl& d) {
    p.declare(d.name, d.loc);
    p.builtins_.emplace(d.name, p.builtin(d.call));
  }

  void operator()(const DefDecl& d) {
    p.declare(d.name, d.loc);
    p.def_types_.emplace(d.name, p.infer(d.term));
    p.defs_.emplace(d.name, d.term);
    p.def_order_.push_back(d.name);
  }

  void operator()(const CheckDecl& c) {
    for (const auto* n : {&c.lhs, &c.rhs}) {
      if (!p.declared_.count(*n) || p.sets_.count(*n) || p.objects_.count(*n)) {
        throw ElabError(c.loc, "check refers to '" + *n + "', which is not a declared term");
      }
    }
    p.checks_.push_back(c);
  }
};

Program elaborate(const SourceFile& f) {
  Program p;
  Elaborator el{p};
  for (const auto& s : f.statements) {
    try {
      std::visit(el, s);
    } catch (const ElabError&) {
      throw;
    } catch (const Error& e) {
      // Errors from the cells layer, located at the statement.
      Loc loc = std::visit([](const auto& d) { return d.loc; }, s);
      throw ElabError(loc, e.what());
    }
  }
  return p;
}

const char* verdict_name(CheckReport::Verdict v) {
  switch (v) {
    case CheckReport::Verdict::Equal: return "equal";
    case CheckReport::Verdict::Unequal: return "unequal";
    case CheckReport::Verdict::TypeError: return "type-error";
  }
  return "?";
}

CheckReport check_equation(const Program& p, const CheckDecl& c) {
  CheckReport r;
  r.name = c.lhs + " == " + c.rhs;
  r.loc = c.loc;
  Term lt, rt;
  lt.name = c.lhs;
  rt.name = c.rhs;
  try {
    const TypedTerm a = p.infer(lt);
    const TypedTerm b = p.infer(rt);
    if (!(a.dom == b.dom) || !(a.cod == b.cod)) {
      r.verdict = CheckReport::Verdict::TypeError;
      r.message = "sides have different types: " + show(a.dom) + " => " + show(a.cod) + " vs " +
                  show(b.dom) + " => " + show(b.cod);
      return r;
    }
    const EqualityReport eq = equal(p.evaluate(lt), p.evaluate(rt));
    r.verdict = eq.equal ? CheckReport::Verdict::Equal : CheckReport::Verdict::Unequal;
    r.message = eq.message;
    r.difference = eq.difference;
  } catch (const Error& e) {
    r.verdict = CheckReport::Verdict::TypeError;
    r.message = e.what();
  }
  return r;
}

FileRun run_checks(const std::string& text) {
  const Program p = elaborate(parse(text));
  FileRun run;
  for (const auto& c : p.checks()) {
    run.reports.push_back(check_equation(p, c));
    const auto v = run.reports.back().verdict;
    if (v == CheckReport::Verdict::TypeError) {
      run.exit_code = 2;
    } else if (v == CheckReport::Verdict::Unequal && run.exit_code == 0) {
      run.exit_code = 1;
    }
  }
  return run;
}

}  // namespace relcat::dsl
