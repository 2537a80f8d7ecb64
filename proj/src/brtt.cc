#include "lsst/brtt.h"

#include <algorithm>
#include <cctype>

namespace lsst {

Expr e_hole() { return std::make_shared<const ExprNode>(ExprNode{ExprKind::Hole, "", "", {}}); }

Expr e_reg(std::string reg, std::string child) {
  return std::make_shared<const ExprNode>(ExprNode{ExprKind::Reg, std::move(reg), std::move(child), {}});
}

Expr e_node(std::string letter, std::vector<Expr> kids) {
  return std::make_shared<const ExprNode>(ExprNode{ExprKind::Node, std::move(letter), "", std::move(kids)});
}

Expr e_subst(Expr outer, Expr inner) {
  return std::make_shared<const ExprNode>(ExprNode{ExprKind::Subst, "", "", {std::move(outer), std::move(inner)}});
}

namespace {

bool special(char c) {
  return c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '#' || c == '$' || c == '@' ||
         std::isspace(static_cast<unsigned char>(c));
}

struct ExprParser {
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at offset " + std::to_string(pos) + " in '" + s + "'");
  }

  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string name() {
    skip();
    size_t start = pos;
    while (pos < s.size() && !special(s[pos])) ++pos;
    if (pos == start) fail("expected a name");
    return s.substr(start, pos - start);
  }

  Expr atom() {
    if (eat('#')) return e_hole();
    if (eat('$')) {
      std::string r = name();
      std::string d = eat('@') ? name() : "";
      return e_reg(r, d);
    }
    std::string a = name();
    std::vector<Expr> kids;
    if (eat('(')) {
      if (!eat(')')) {
        do kids.push_back(expr());
        while (eat(','));
        if (!eat(')')) fail("expected ')'");
      }
    }
    return e_node(a, std::move(kids));
  }

  Expr expr() {
    Expr e = atom();
    while (eat('[')) {
      Expr inner = expr();
      if (!eat(']')) fail("expected ']'");
      e = e_subst(e, inner);
    }
    return e;
  }
};

void collect_variables(const Expr& e, std::vector<Variable>& out) {
  if (e->kind == ExprKind::Reg) out.push_back({e->name, e->child});
  for (const auto& k : e->kids) collect_variables(k, out);
}

int tree_holes(const Tree& t) {
  if (t.label == kHoleLabel && t.kids.empty()) return 1;
  int n = 0;
  for (const auto& k : t.kids) n += tree_holes(k);
  return n;
}

bool plug(Tree& outer, const Tree& inner) {
  if (outer.label == kHoleLabel && outer.kids.empty()) {
    outer = inner;
    return true;
  }
  for (auto& k : outer.kids)
    if (plug(k, inner)) return true;
  return false;
}

}  // namespace

Expr parse_expr(const std::string& text) {
  ExprParser p{text};
  Expr e = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

std::string format_expr(const Expr& e) {
  switch (e->kind) {
    case ExprKind::Hole:
      return "#";
    case ExprKind::Reg:
      return "$" + e->name + (e->child.empty() ? "" : "@" + e->child);
    case ExprKind::Node: {
      if (e->kids.empty()) return e->name;
      std::string out = e->name + "(";
      for (size_t i = 0; i < e->kids.size(); ++i) out += (i ? "," : "") + format_expr(e->kids[i]);
      return out + ")";
    }
    case ExprKind::Subst:
      return format_expr(e->kids[0]) + "[" + format_expr(e->kids[1]) + "]";
  }
  return "";
}

std::vector<Variable> expr_variables(const Expr& e) {
  std::vector<Variable> out;
  collect_variables(e, out);
  return out;
}

int expr_letters(const Expr& e) {
  int n = e->kind == ExprKind::Node ? 1 : 0;
  for (const auto& k : e->kids) n += expr_letters(k);
  return n;
}

int hole_count(const Expr& e, const std::set<std::string>& hole_registers) {
  switch (e->kind) {
    case ExprKind::Hole:
      return 1;
    case ExprKind::Reg:
      return hole_registers.count(e->name) ? 1 : 0;
    case ExprKind::Node: {
      int n = 0;
      for (const auto& k : e->kids) n += hole_count(k, hole_registers);
      return n;
    }
    case ExprKind::Subst: {
      if (hole_count(e->kids[0], hole_registers) != 1)
        throw HoleCountViolation("substitution into " + format_expr(e->kids[0]));
      return hole_count(e->kids[1], hole_registers);
    }
  }
  return 0;
}

ConflictRelation::ConflictRelation(const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& [x, y] : pairs) add(x, y);
}

void ConflictRelation::add(const std::string& x, const std::string& y) {
  if (x != y) pairs_.insert(std::minmax(x, y));
}

bool ConflictRelation::conflict(const std::string& x, const std::string& y) const {
  return x == y || pairs_.count(std::minmax(x, y)) > 0;
}

std::vector<std::pair<std::string, std::string>> ConflictRelation::pairs() const {
  return {pairs_.begin(), pairs_.end()};
}

bool expr_consistent(const Expr& e, const ConflictRelation& c) {
  std::vector<Variable> vs = expr_variables(e);
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j)
      if (vs[i].second == vs[j].second && c.conflict(vs[i].first, vs[j].first)) return false;
  return true;
}

bool check_single_use(const Assignment& a, const ConflictRelation& c) {
  std::vector<std::pair<std::string, std::vector<Variable>>> uses;
  for (const auto& [y, e] : a) {
    if (!expr_consistent(e, c)) return false;
    uses.push_back({y, expr_variables(e)});
  }
  for (size_t i = 0; i < uses.size(); ++i)
    for (size_t j = i + 1; j < uses.size(); ++j) {
      if (c.conflict(uses[i].first, uses[j].first)) continue;
      for (const auto& v1 : uses[i].second)
        for (const auto& v2 : uses[j].second)
          if (v1.second == v2.second && c.conflict(v1.first, v2.first)) return false;
    }
  return true;
}

bool SurBrtt::is_hole_register(const std::string& r) const {
  return std::find(hole_registers.begin(), hole_registers.end(), r) != hole_registers.end();
}

namespace {

// Letters of e in the output alphabet with the right number of children, and
// registers known and tagged by one of the allowed child labels.
void check_expr(const SurBrtt& m, const Expr& e, const std::vector<std::string>& children, const std::string& where,
                std::vector<std::string>& problems) {
  if (e->kind == ExprKind::Node) {
    int i = m.output.index_of(e->name);
    if (i < 0) problems.push_back(where + ": letter '" + e->name + "' not in the output alphabet");
    else if (m.output.rank(i) != static_cast<int>(e->kids.size()))
      problems.push_back(where + ": letter '" + e->name + "' expects " + std::to_string(m.output.rank(i)) +
                         " children");
  }
  if (e->kind == ExprKind::Reg) {
    bool known = std::find(m.tree_registers.begin(), m.tree_registers.end(), e->name) != m.tree_registers.end() ||
                 m.is_hole_register(e->name);
    if (!known) problems.push_back(where + ": unknown register '" + e->name + "'");
    if (std::find(children.begin(), children.end(), e->child) == children.end())
      problems.push_back(where + ": register '" + e->name + "' tagged by '" + e->child + "'");
  }
  for (const auto& k : e->kids) check_expr(m, k, children, where, problems);
}

void check_holes(const SurBrtt& m, const Expr& e, int expected, const std::string& where,
                 std::vector<std::string>& problems) {
  std::set<std::string> holes(m.hole_registers.begin(), m.hole_registers.end());
  try {
    int n = hole_count(e, holes);
    if (n != expected)
      problems.push_back(where + ": " + std::to_string(n) + " holes, expected " + std::to_string(expected));
  } catch (const HoleCountViolation& err) {
    problems.push_back(where + ": " + err.what());
  }
}

}  // namespace

std::vector<std::string> validate_brtt(const SurBrtt& m) {
  std::vector<std::string> problems;
  if (m.states.empty()) problems.push_back("no states");
  std::vector<std::string> regs = m.tree_registers;
  regs.insert(regs.end(), m.hole_registers.begin(), m.hole_registers.end());
  std::set<std::string> reg_set(regs.begin(), regs.end());
  if (reg_set.size() != regs.size()) problems.push_back("register names repeat");
  for (const auto& [x, y] : m.conflict.pairs())
    if (!reg_set.count(x) || !reg_set.count(y)) problems.push_back("conflict on unknown register " + x + "/" + y);
  for (const auto& [key, rule] : m.delta) {
    const auto& [a, qs] = key;
    if (a < 0 || a >= m.input.size()) {
      problems.push_back("transition on unknown letter");
      continue;
    }
    std::string where = "δ(" + m.input.letters[a] + ")";
    if (static_cast<int>(qs.size()) != m.input.rank(a)) problems.push_back(where + ": wrong number of child states");
    for (int q : qs)
      if (q < 0 || q >= m.num_states()) problems.push_back(where + ": child state out of range");
    if (rule.next < 0 || rule.next >= m.num_states()) problems.push_back(where + ": target state out of range");
    std::set<std::string> assigned;
    for (const auto& [r, e] : rule.assign) {
      assigned.insert(r);
      if (!reg_set.count(r)) {
        problems.push_back(where + ": assigns unknown register '" + r + "'");
        continue;
      }
      check_expr(m, e, m.input.arity[a], where + "(" + r + ")", problems);
      check_holes(m, e, m.is_hole_register(r) ? 1 : 0, where + "(" + r + ")", problems);
    }
    if (assigned != reg_set) problems.push_back(where + ": must assign every register");
    if (!check_single_use(rule.assign, m.conflict)) problems.push_back(where + ": not single-use-restricted");
  }
  if (static_cast<int>(m.output_fn.size()) != m.num_states()) problems.push_back("output function size");
  for (size_t q = 0; q < m.output_fn.size(); ++q) {
    if (!m.output_fn[q]) continue;
    std::string where = "F(" + (q < m.states.size() ? m.states[q] : std::to_string(q)) + ")";
    check_expr(m, *m.output_fn[q], {""}, where, problems);
    check_holes(m, *m.output_fn[q], 0, where, problems);
    if (!expr_consistent(*m.output_fn[q], m.conflict)) problems.push_back(where + ": inconsistent with the conflict");
  }
  return problems;
}

bool check_copyless_brtt(const SurBrtt& m) {
  ConflictRelation equality;
  for (const auto& [key, rule] : m.delta)
    if (!check_single_use(rule.assign, equality)) return false;
  for (const auto& f : m.output_fn)
    if (f && !expr_consistent(*f, equality)) return false;
  return true;
}

Tree eval_expr(const Expr& e, const std::map<std::string, const std::map<std::string, Tree>*>& children) {
  switch (e->kind) {
    case ExprKind::Hole:
      return Tree{kHoleLabel, {}};
    case ExprKind::Reg: {
      auto c = children.find(e->child);
      if (c == children.end()) throw DomainMismatch("no child '" + e->child + "'");
      auto v = c->second->find(e->name);
      if (v == c->second->end()) throw DomainMismatch("no register '" + e->name + "'");
      return v->second;
    }
    case ExprKind::Node: {
      Tree t{e->name, {}};
      for (const auto& k : e->kids) t.kids.push_back(eval_expr(k, children));
      return t;
    }
    case ExprKind::Subst: {
      Tree outer = eval_expr(e->kids[0], children);
      if (tree_holes(outer) != 1) throw HoleCountViolation("substitution into " + format_tree(outer));
      plug(outer, eval_expr(e->kids[1], children));
      return outer;
    }
  }
  return {};
}

BrttConfig brtt_config(const SurBrtt& m, const Tree& t) {
  int a = m.input.index_of(t.label);
  if (a < 0 || static_cast<int>(t.kids.size()) != m.input.rank(a))
    throw DomainMismatch("letter '" + t.label + "' does not fit the input alphabet");
  std::vector<BrttConfig> kids;
  std::vector<int> qs;
  for (const auto& k : t.kids) {
    kids.push_back(brtt_config(m, k));
    qs.push_back(kids.back().state);
  }
  auto it = m.delta.find({a, qs});
  if (it == m.delta.end()) throw UndefinedOutput("no transition for '" + t.label + "'");
  std::map<std::string, const std::map<std::string, Tree>*> env;
  for (size_t i = 0; i < kids.size(); ++i) env[m.input.arity[a][i]] = &kids[i].values;
  BrttConfig out{it->second.next, {}};
  for (const auto& [r, e] : it->second.assign) out.values[r] = eval_expr(e, env);
  return out;
}

Tree run_brtt(const SurBrtt& m, const Tree& t) {
  BrttConfig c = brtt_config(m, t);
  const auto& f = m.output_fn.at(c.state);
  if (!f) throw UndefinedOutput("no output in state " + m.states[c.state]);
  Tree out = eval_expr(*f, {{"", &c.values}});
  if (tree_holes(out) != 0) throw HoleCountViolation("output " + format_tree(out));
  return out;
}

SurBrtt mirror_machine() {
  SurBrtt m;
  m.input = parse_ranked_alphabet("a(l,r) b(l,r) e()");
  m.output = m.input;
  m.states = {"q"};
  m.tree_registers = {"r1", "r2"};
  for (int a = 0; a < 2; ++a) {
    const std::string& c = m.input.letters[a];
    m.delta[{a, {0, 0}}] = {0, {{"r1", parse_expr(c + "($r1@l,$r1@r)")}, {"r2", parse_expr(c + "($r2@r,$r2@l)")}}};
  }
  m.delta[{2, {}}] = {0, {{"r1", e_node("e")}, {"r2", e_node("e")}}};
  m.output_fn = {parse_expr("a($r1,$r2)")};
  return m;
}

SurBrtt condswap_machine() {
  SurBrtt m;
  m.input = parse_ranked_alphabet("a(l,r) b(l,r) c()");
  m.output = string_alphabet(U"abc");
  m.states = {"q"};
  m.hole_registers = {"x", "y"};
  m.conflict.add("x", "y");
  // x holds f(u), y the inorder traversal of u, both as one-hole strings
  m.delta[{0, {0, 0}}] = {0, {{"x", parse_expr("$x@r[a($x@l)]")}, {"y", parse_expr("$y@l[a($y@r)]")}}};
  m.delta[{1, {0, 0}}] = {0, {{"x", parse_expr("$y@l[b($y@r)]")}, {"y", parse_expr("$y@l[b($y@r)]")}}};
  m.delta[{2, {}}] = {0, {{"x", parse_expr("c(#)")}, {"y", parse_expr("c(#)")}}};
  m.output_fn = {parse_expr("$x[eps]")};
  return m;
}

}  // namespace lsst
