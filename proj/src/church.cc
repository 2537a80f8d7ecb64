#include "lsst/church.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "lsst/error.h"

namespace lsst {

int RankedAlphabet::index_of(const std::string& letter) const {
  for (int i = 0; i < size(); ++i)
    if (letters[i] == letter) return i;
  return -1;
}

RankedAlphabet string_alphabet(const Word& sigma) {
  RankedAlphabet a;
  for (char32_t c : sigma) {
    a.letters.push_back(to_utf8(c));
    a.arity.push_back({"next"});
  }
  a.letters.push_back(kEndLetter);
  a.arity.push_back({});
  return a;
}

RankedAlphabet parse_ranked_alphabet(const std::string& text) {
  RankedAlphabet a;
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    auto slash = item.find('/');
    auto paren = item.find('(');
    if (slash != std::string::npos) {
      int n = 0;
      try {
        n = std::stoi(item.substr(slash + 1));
      } catch (const std::exception&) {
        throw ParseError("bad arity in '" + item + "'");
      }
      a.letters.push_back(item.substr(0, slash));
      std::vector<std::string> labels;
      for (int k = 0; k < n; ++k) labels.push_back(std::to_string(k));
      a.arity.push_back(labels);
    } else if (paren != std::string::npos && item.back() == ')') {
      a.letters.push_back(item.substr(0, paren));
      std::vector<std::string> labels;
      std::string inner = item.substr(paren + 1, item.size() - paren - 2);
      std::stringstream ls(inner);
      std::string l;
      while (std::getline(ls, l, ','))
        if (!l.empty()) labels.push_back(l);
      a.arity.push_back(labels);
    } else {
      throw ParseError("expected letter/arity, got '" + item + "'");
    }
    if (a.letters.back().empty()) throw ParseError("empty letter name");
  }
  std::set<std::string> seen(a.letters.begin(), a.letters.end());
  if (seen.size() != a.letters.size()) throw ParseError("duplicate letter in ranked alphabet");
  return a;
}

std::string format_ranked_alphabet(const RankedAlphabet& a) {
  std::string out;
  for (int i = 0; i < a.size(); ++i) {
    if (i) out += ' ';
    out += a.letters[i] + "(";
    for (int k = 0; k < a.rank(i); ++k) out += (k ? "," : "") + a.arity[i][k];
    out += ")";
  }
  return out;
}

int tree_size(const Tree& t) {
  int n = 1;
  for (const auto& k : t.kids) n += tree_size(k);
  return n;
}

int tree_depth(const Tree& t) {
  int d = 0;
  for (const auto& k : t.kids) d = std::max(d, tree_depth(k));
  return d + 1;
}

std::string format_tree(const Tree& t) {
  if (t.kids.empty()) return t.label;
  std::string out = t.label + "(";
  for (size_t i = 0; i < t.kids.size(); ++i) out += (i ? "," : "") + format_tree(t.kids[i]);
  return out + ")";
}

namespace {

struct TreeParser {
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  Tree parse() {
    skip();
    size_t start = pos;
    while (pos < s.size() && s[pos] != '(' && s[pos] != ')' && s[pos] != ',' &&
           !std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos == start) throw ParseError("expected a letter at offset " + std::to_string(pos));
    Tree t{s.substr(start, pos - start), {}};
    skip();
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      skip();
      if (pos < s.size() && s[pos] == ')') {
        ++pos;
        return t;
      }
      for (;;) {
        t.kids.push_back(parse());
        skip();
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < s.size() && s[pos] == ')') {
          ++pos;
          break;
        }
        throw ParseError("expected ',' or ')' at offset " + std::to_string(pos));
      }
    }
    return t;
  }
};

}  // namespace

Tree parse_tree(const std::string& text) {
  TreeParser p{text};
  Tree t = p.parse();
  p.skip();
  if (p.pos != text.size()) throw ParseError("trailing input at offset " + std::to_string(p.pos));
  return t;
}

void check_tree(const Tree& t, const RankedAlphabet& a) {
  int i = a.index_of(t.label);
  if (i < 0) throw NotAStringTree("letter '" + t.label + "' not in alphabet");
  if (static_cast<int>(t.kids.size()) != a.rank(i))
    throw NotAStringTree("letter '" + t.label + "' expects " + std::to_string(a.rank(i)) + " children");
  for (const auto& k : t.kids) check_tree(k, a);
}

Tree string_as_tree(const Word& w) {
  Tree t{kEndLetter, {}};
  for (auto it = w.rbegin(); it != w.rend(); ++it) t = Tree{to_utf8(*it), {std::move(t)}};
  return t;
}

Word tree_as_string(const Tree& t) {
  Word out;
  const Tree* cur = &t;
  while (cur->label != kEndLetter || !cur->kids.empty()) {
    if (cur->kids.size() != 1) throw NotAStringTree(format_tree(t));
    Word c = to_u32(cur->label);
    if (c.size() != 1) throw NotAStringTree("letter '" + cur->label + "' is not a character");
    out += c;
    cur = &cur->kids[0];
  }
  return out;
}

Type tree_type(const RankedAlphabet& a) {
  Type result = t_base();
  for (int i = a.size() - 1; i >= 0; --i) {
    Type arg = t_base();
    for (int k = 0; k < a.rank(i); ++k) arg = t_lin(t_base(), arg);
    result = t_arrow(arg, result);
  }
  return result;
}

std::string letter_variable(const RankedAlphabet& a, int i) {
  const std::string& name = a.letters[i];
  static const std::set<std::string> kw = {"let", "in", "case", "of", "p1", "p2", "in1", "in2", "abort"};
  bool ident = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') &&
               std::all_of(name.begin(), name.end(),
                           [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
  if (ident && !kw.count(name)) return name;
  std::string v = "l";
  for (char32_t c : to_u32(name)) v += std::to_string(static_cast<unsigned long>(c)) + "_";
  return v;
}

TypingContext constants_context(const RankedAlphabet& a) {
  TypingContext ctx;
  for (int i = 0; i < a.size(); ++i) {
    Type ty = t_base();
    for (int k = 0; k < a.rank(i); ++k) ty = t_lin(t_base(), ty);
    ctx.nonlinear.push_back({letter_variable(a, i), ty});
  }
  return ctx;
}

namespace {

Term encode_body(const Tree& t, const RankedAlphabet& a) {
  int i = a.index_of(t.label);
  if (i < 0 || static_cast<int>(t.kids.size()) != a.rank(i)) throw NotAStringTree(format_tree(t));
  std::vector<Term> args;
  for (const auto& k : t.kids) args.push_back(encode_body(k, a));
  return app(var(letter_variable(a, i)), args);
}

Term bind_letters(const RankedAlphabet& a, Term body) {
  for (int i = a.size() - 1; i >= 0; --i) body = lam_bang(letter_variable(a, i), body);
  return body;
}

Tree decode_body(const Term& t, const std::vector<std::string>& names, const RankedAlphabet& a) {
  std::vector<Term> args;
  Term head = t;
  while (head->kind == TermKind::App) {
    args.push_back(head->kids[1]);
    head = head->kids[0];
  }
  if (head->kind != TermKind::Var) throw NotAnEncoding("unexpected " + format_term(head));
  auto it = std::find(names.begin(), names.end(), head->x);
  if (it == names.end()) throw NotAnEncoding("unbound head " + head->x);
  int i = static_cast<int>(it - names.begin());
  if (static_cast<int>(args.size()) != a.rank(i)) throw NotAnEncoding("wrong number of children for " + a.letters[i]);
  std::reverse(args.begin(), args.end());
  Tree out{a.letters[i], {}};
  for (const auto& x : args) out.kids.push_back(decode_body(x, names, a));
  return out;
}

// Renames the binders of λ!x₁…λ!x_k. body to the given names.
Term rename_binders(const std::vector<std::string>& from, const std::vector<std::string>& to, Term body) {
  std::vector<std::string> tmp;
  for (const auto& x : from) {
    tmp.push_back(fresh_variable("t"));
    body = substitute(body, x, var(tmp.back()));
  }
  for (size_t i = 0; i < to.size(); ++i) body = substitute(body, tmp[i], var(to[i]));
  return body;
}

// Opens k nonlinear binders, η-expanding as needed, so the body is typed under the given names.
Term open_nonlinear(Term t, const std::vector<std::string>& names) {
  std::vector<std::string> bound;
  while (bound.size() < names.size() && t->kind == TermKind::LamBang) {
    bound.push_back(t->x);
    t = t->kids[0];
  }
  t = rename_binders(bound, std::vector<std::string>(names.begin(), names.begin() + bound.size()), t);
  for (size_t i = bound.size(); i < names.size(); ++i) t = app(t, var(names[i]));
  return t;
}

std::vector<std::string> letter_variables(const RankedAlphabet& a) {
  std::vector<std::string> out;
  for (int i = 0; i < a.size(); ++i) out.push_back(letter_variable(a, i));
  return out;
}

}  // namespace

Term encode_tree(const Tree& t, const RankedAlphabet& a) { return bind_letters(a, encode_body(t, a)); }

Tree decode_tree(const Term& t, const RankedAlphabet& a, long fuel) {
  Term n = normalize(t, fuel);
  std::vector<std::string> names;
  for (int i = 0; i < a.size(); ++i) names.push_back(fresh_variable("c"));
  Term body = open_nonlinear(n, names);
  if (!n->free.empty()) throw NotAnEncoding("term is not closed");
  return decode_body(normalize(body, fuel), names, a);
}

void check_definable_type(const Term& f, const Type& kappa, const RankedAlphabet& sigma,
                          const RankedAlphabet& gamma) {
  if (!is_purely_linear(kappa)) throw NotPurelyLinear(format_type(kappa));
  Type expected = t_lin(substitute_type(tree_type(sigma), kappa), tree_type(gamma));
  typecheck(f, {}, expected);
}

Tree apply_definable(const Term& f, const Tree& t, const RankedAlphabet& sigma, const RankedAlphabet& gamma,
                     long fuel) {
  return decode_tree(app(f, encode_tree(t, sigma)), gamma, fuel);
}

namespace {

bool is_s_application(const Term& t, const std::string& s) {
  Term h = t;
  while (h->kind == TermKind::App) h = h->kids[0];
  return h->kind == TermKind::Var && h->x == s;
}

// Replaces the maximal application spine headed by s with z; collects its arguments.
// Arguments beyond the first n eliminate κ and stay in the output term.
Term abstract_spine(const Term& t, const std::string& s, const std::string& z, size_t n, std::vector<Term>& args,
                    int& hits) {
  if (!is_free(t, s)) return t;
  if (is_s_application(t, s)) {
    ++hits;
    std::vector<Term> all;
    Term h = t;
    while (h->kind == TermKind::App) {
      all.push_back(h->kids[1]);
      h = h->kids[0];
    }
    std::reverse(all.begin(), all.end());
    if (all.size() < n) throw ShapeExtractionFailed("input variable is partially applied");
    args.assign(all.begin(), all.begin() + n);
    return app(var(z), std::vector<Term>(all.begin() + n, all.end()));
  }
  std::vector<Term> kids;
  for (const auto& k : t->kids) kids.push_back(abstract_spine(k, s, z, n, args, hits));
  return rebuild(t, std::move(kids));
}

}  // namespace

Shape extract_shape(const Term& f, const RankedAlphabet& sigma, const RankedAlphabet& gamma, const Type& kappa,
                    long fuel) {
  if (!is_purely_linear(kappa)) throw NotPurelyLinear(format_type(kappa));
  bool has_leaf = false;
  for (int i = 0; i < sigma.size(); ++i) has_leaf = has_leaf || sigma.rank(i) == 0;
  if (!has_leaf) throw ShapeExtractionFailed("input alphabet has no nullary letter");
  Term n = normalize(f, fuel);
  std::string s = fresh_variable("s");
  Term body = n->kind == TermKind::LamLin ? substitute(n->kids[0], n->x, var(s)) : app(n, var(s));
  body = normalize(open_nonlinear(body, letter_variables(gamma)), fuel);

  std::string z = fresh_variable("z");
  std::vector<Term> args;
  int hits = 0;
  Term out_body = abstract_spine(body, s, z, sigma.size(), args, hits);
  if (hits != 1) throw ShapeExtractionFailed("input variable is applied " + std::to_string(hits) + " times");
  if (static_cast<int>(args.size()) != sigma.size())
    throw ShapeExtractionFailed("input variable applied to " + std::to_string(args.size()) + " arguments");
  for (const auto& a : args)
    if (is_free(a, s)) throw ShapeExtractionFailed("nested use of the input");
  Shape sh{lam(z, out_body), args};

  TypingContext ctx = constants_context(gamma);
  try {
    typecheck(sh.output, ctx, t_lin(kappa, t_base()));
    for (int i = 0; i < sigma.size(); ++i) {
      Type ty = kappa;
      for (int k = 0; k < sigma.rank(i); ++k) ty = t_lin(kappa, ty);
      typecheck(sh.step[i], ctx, ty);
    }
  } catch (const Error& e) {
    throw ShapeExtractionFailed(std::string("extracted component is ill-typed: ") + e.what());
  }
  return sh;
}

Term reconstruct(const Shape& sh, const RankedAlphabet& sigma, const RankedAlphabet& gamma) {
  (void)sigma;
  std::string s = fresh_variable("s");
  Term body = app(sh.output, app(var(s), sh.step));
  return lam(s, bind_letters(gamma, body));
}

}  // namespace lsst
