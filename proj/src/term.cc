#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <set>

#include "lsst/error.h"
#include "lsst/lambda.h"

namespace lsst {

namespace {

using Names = std::vector<std::string>;

Names merge(const Names& a, const Names& b) {
  Names out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Names remove(Names a, const std::string& x) {
  auto it = std::lower_bound(a.begin(), a.end(), x);
  if (it != a.end() && *it == x) a.erase(it);
  return a;
}

Term make(TermKind k, std::string x, std::string y, std::vector<Term> kids) {
  Names fv;
  switch (k) {
    case TermKind::Var:
      fv = {x};
      break;
    case TermKind::LamLin:
    case TermKind::LamBang:
      fv = remove(kids[0]->free, x);
      break;
    case TermKind::LetTensor:
      fv = merge(kids[0]->free, remove(remove(kids[1]->free, x), y));
      break;
    case TermKind::Case:
      fv = merge(kids[0]->free, merge(remove(kids[1]->free, x), remove(kids[2]->free, y)));
      break;
    default:
      for (const auto& kid : kids) fv = merge(fv, kid->free);
      break;
  }
  return std::make_shared<const TermNode>(
      TermNode{k, std::move(x), std::move(y), std::move(kids), std::move(fv)});
}

std::atomic<long> fresh_counter{0};

std::string fresh_name(const std::string& base) {
  std::string stem = base;
  auto pos = stem.rfind('_');
  if (pos != std::string::npos && pos + 1 < stem.size() &&
      std::all_of(stem.begin() + pos + 1, stem.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    stem = stem.substr(0, pos);
  }
  if (stem.empty()) stem = "v";
  return stem + "_" + std::to_string(++fresh_counter);
}

// ---------------------------------------------------------------------------
// Printing

enum class Ctx { Top, TensorLeft, AppFun, AppArg };

void print(const Term& t, Ctx ctx, std::string& out);

void print_binder_form(const Term& t, Ctx ctx, std::string& out, const std::string& body) {
  bool paren = ctx != Ctx::Top;
  if (paren) out += '(';
  out += body;
  if (paren) out += ')';
}

void print(const Term& t, Ctx ctx, std::string& out) {
  switch (t->kind) {
    case TermKind::Var:
      out += t->x;
      return;
    case TermKind::Unit:
      out += "()";
      return;
    case TermKind::TopIntro:
      out += "<>";
      return;
    case TermKind::WithPair: {
      out += '<';
      print(t->kids[0], Ctx::Top, out);
      out += ", ";
      print(t->kids[1], Ctx::Top, out);
      out += '>';
      return;
    }
    case TermKind::LamLin:
    case TermKind::LamBang: {
      std::string s = t->kind == TermKind::LamLin ? "\\" : "\\!";
      s += t->x + ". ";
      print(t->kids[0], Ctx::Top, s);
      print_binder_form(t, ctx, out, s);
      return;
    }
    case TermKind::LetTensor: {
      std::string s = "let " + t->x + "*" + t->y + " = ";
      print(t->kids[0], Ctx::Top, s);
      s += " in ";
      print(t->kids[1], Ctx::Top, s);
      print_binder_form(t, ctx, out, s);
      return;
    }
    case TermKind::LetUnit: {
      std::string s = "let () = ";
      print(t->kids[0], Ctx::Top, s);
      s += " in ";
      print(t->kids[1], Ctx::Top, s);
      print_binder_form(t, ctx, out, s);
      return;
    }
    case TermKind::Case: {
      std::string s = "case ";
      print(t->kids[0], Ctx::Top, s);
      s += " of {" + t->x + ". ";
      print(t->kids[1], Ctx::Top, s);
      s += " | " + t->y + ". ";
      print(t->kids[2], Ctx::Top, s);
      s += "}";
      print_binder_form(t, ctx, out, s);
      return;
    }
    case TermKind::TensorPair: {
      bool paren = ctx != Ctx::Top;
      if (paren) out += '(';
      print(t->kids[0], Ctx::TensorLeft, out);
      out += " * ";
      print(t->kids[1], Ctx::Top, out);
      if (paren) out += ')';
      return;
    }
    case TermKind::App: {
      bool paren = ctx == Ctx::AppArg;
      if (paren) out += '(';
      print(t->kids[0], Ctx::AppFun, out);
      out += ' ';
      print(t->kids[1], Ctx::AppArg, out);
      if (paren) out += ')';
      return;
    }
    case TermKind::Proj1:
    case TermKind::Proj2:
    case TermKind::Inj1:
    case TermKind::Inj2:
    case TermKind::Abort: {
      bool paren = ctx == Ctx::AppArg;
      if (paren) out += '(';
      switch (t->kind) {
        case TermKind::Proj1: out += "p1 "; break;
        case TermKind::Proj2: out += "p2 "; break;
        case TermKind::Inj1: out += "in1 "; break;
        case TermKind::Inj2: out += "in2 "; break;
        default: out += "abort "; break;
      }
      print(t->kids[0], Ctx::AppArg, out);
      if (paren) out += ')';
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing

class TermParser {
 public:
  explicit TermParser(const std::string& s) : s_(s) {}

  Term parse_all() {
    Term t = parse_term();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col));
  }

  void skip() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (s_.compare(pos_, 2, "--") == 0) {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }

  static bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
  static bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

  std::string peek_word() {
    skip();
    size_t p = pos_;
    if (p >= s_.size() || !ident_start(static_cast<unsigned char>(s_[p]))) return "";
    while (p < s_.size() && ident_char(static_cast<unsigned char>(s_[p]))) ++p;
    return s_.substr(pos_, p - pos_);
  }

  static bool is_keyword(const std::string& w) {
    static const std::set<std::string> kw = {"let", "in", "case", "of", "p1", "p2", "in1", "in2", "abort"};
    return kw.count(w) > 0;
  }

  bool eat_keyword(const std::string& kw) {
    if (peek_word() == kw) {
      pos_ += kw.size();
      return true;
    }
    return false;
  }

  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  }

  std::string ident() {
    std::string w = peek_word();
    if (w.empty() || is_keyword(w)) fail("expected an identifier");
    pos_ += w.size();
    return w;
  }

  bool at_binder_form() {
    skip();
    if (pos_ < s_.size() && (s_[pos_] == '\\' || s_.compare(pos_, 2, "λ") == 0)) return true;
    std::string w = peek_word();
    return w == "let" || w == "case";
  }

  Term parse_term() {
    if (at_binder_form()) return parse_binder_form();
    Term l = parse_app();
    if (eat("*")) return tensor_pair(l, parse_term());
    return l;
  }

  Term parse_binder_form() {
    skip();
    if (eat("\\") || eat("λ")) {
      bool bang = eat("!");
      std::vector<std::string> names;
      do {
        names.push_back(ident());
        skip();
      } while (pos_ < s_.size() && s_[pos_] != '.');
      expect(".");
      Term body = parse_term();
      for (auto it = names.rbegin(); it != names.rend(); ++it)
        body = bang ? lam_bang(*it, body) : lam(*it, body);
      return body;
    }
    if (eat_keyword("let")) {
      if (eat("(")) {
        expect(")");
        expect("=");
        Term t = parse_term();
        if (!eat_keyword("in")) fail("expected 'in'");
        return let_unit(t, parse_term());
      }
      std::string x = ident();
      expect("*");
      std::string y = ident();
      expect("=");
      Term t = parse_term();
      if (!eat_keyword("in")) fail("expected 'in'");
      return let_tensor(x, y, t, parse_term());
    }
    if (eat_keyword("case")) {
      Term t = parse_term();
      if (!eat_keyword("of")) fail("expected 'of'");
      expect("{");
      std::string x = ident();
      expect(".");
      Term l = parse_term();
      expect("|");
      std::string y = ident();
      expect(".");
      Term r = parse_term();
      expect("}");
      return case_of(t, x, l, y, r);
    }
    fail("expected a binder form");
  }

  bool at_item() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    if (c == '(' || c == '<') return true;
    std::string w = peek_word();
    if (w.empty()) return false;
    if (!is_keyword(w)) return true;
    return w == "p1" || w == "p2" || w == "in1" || w == "in2" || w == "abort";
  }

  Term parse_app() {
    Term head = parse_item();
    for (;;) {
      if (at_binder_form()) return app(head, parse_binder_form());
      if (!at_item()) return head;
      head = app(head, parse_item());
    }
  }

  Term parse_item() {
    if (eat_keyword("p1")) return proj(1, parse_item());
    if (eat_keyword("p2")) return proj(2, parse_item());
    if (eat_keyword("in1")) return inj(1, parse_item());
    if (eat_keyword("in2")) return inj(2, parse_item());
    if (eat_keyword("abort")) return abort_term(parse_item());
    return parse_atom();
  }

  Term parse_atom() {
    skip();
    if (eat("(")) {
      if (eat(")")) return unit();
      Term t = parse_term();
      expect(")");
      return t;
    }
    if (eat("<")) {
      if (eat(">")) return top_intro();
      Term a = parse_term();
      expect(",");
      Term b = parse_term();
      expect(">");
      return with_pair(a, b);
    }
    return var(ident());
  }

  const std::string& s_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Substitution

Term subst(const Term& t, const std::string& x, const Term& u);

// Rebinds a binder so that it neither captures a free variable of u nor
// collides with x. Returns the (possibly renamed) binder and body.
std::pair<std::string, Term> open_binder(const std::string& b, const Term& body, const std::string& x,
                                         const Term& u) {
  if (b == x || !is_free(u, b) || !is_free(body, x)) return {b, body};
  std::string nb = fresh_name(b);
  return {nb, subst(body, b, var(nb))};
}

Term subst(const Term& t, const std::string& x, const Term& u) {
  if (!is_free(t, x)) return t;
  switch (t->kind) {
    case TermKind::Var:
      return u;
    case TermKind::LamLin:
    case TermKind::LamBang: {
      auto [b, body] = open_binder(t->x, t->kids[0], x, u);
      return make(t->kind, b, "", {subst(body, x, u)});
    }
    case TermKind::LetTensor: {
      Term scrut = subst(t->kids[0], x, u);
      if (t->x == x || t->y == x) return make(t->kind, t->x, t->y, {scrut, t->kids[1]});
      auto [bx, body1] = open_binder(t->x, t->kids[1], x, u);
      auto [by, body2] = open_binder(t->y, body1, x, u);
      return make(t->kind, bx, by, {scrut, subst(body2, x, u)});
    }
    case TermKind::Case: {
      Term scrut = subst(t->kids[0], x, u);
      Term l = t->kids[1], r = t->kids[2];
      std::string bx = t->x, by = t->y;
      if (bx != x) {
        auto [nb, nl] = open_binder(bx, l, x, u);
        bx = nb;
        l = subst(nl, x, u);
      }
      if (by != x) {
        auto [nb, nr] = open_binder(by, r, x, u);
        by = nb;
        r = subst(nr, x, u);
      }
      return make(t->kind, bx, by, {scrut, l, r});
    }
    default: {
      std::vector<Term> kids;
      kids.reserve(t->kids.size());
      for (const auto& k : t->kids) kids.push_back(subst(k, x, u));
      return make(t->kind, t->x, t->y, std::move(kids));
    }
  }
}

bool alpha(const Term& a, const Term& b, std::map<std::string, std::string>& ab,
           std::map<std::string, std::string>& ba);

bool alpha_bound(const Term& a, const std::vector<std::string>& xa, const Term& b,
                 const std::vector<std::string>& xb, std::map<std::string, std::string>& ab,
                 std::map<std::string, std::string>& ba) {
  std::vector<std::pair<std::string, std::optional<std::string>>> saved_ab, saved_ba;
  for (size_t i = 0; i < xa.size(); ++i) {
    auto ia = ab.find(xa[i]);
    saved_ab.push_back({xa[i], ia == ab.end() ? std::nullopt : std::optional<std::string>(ia->second)});
    auto ib = ba.find(xb[i]);
    saved_ba.push_back({xb[i], ib == ba.end() ? std::nullopt : std::optional<std::string>(ib->second)});
    ab[xa[i]] = xb[i];
    ba[xb[i]] = xa[i];
  }
  bool r = alpha(a, b, ab, ba);
  for (auto it = saved_ab.rbegin(); it != saved_ab.rend(); ++it) {
    if (it->second) ab[it->first] = *it->second; else ab.erase(it->first);
  }
  for (auto it = saved_ba.rbegin(); it != saved_ba.rend(); ++it) {
    if (it->second) ba[it->first] = *it->second; else ba.erase(it->first);
  }
  return r;
}

bool alpha(const Term& a, const Term& b, std::map<std::string, std::string>& ab,
           std::map<std::string, std::string>& ba) {
  if (a->kind != b->kind || a->kids.size() != b->kids.size()) return false;
  switch (a->kind) {
    case TermKind::Var: {
      auto ia = ab.find(a->x);
      auto ib = ba.find(b->x);
      if (ia == ab.end() && ib == ba.end()) return a->x == b->x;
      return ia != ab.end() && ib != ba.end() && ia->second == b->x && ib->second == a->x;
    }
    case TermKind::LamLin:
    case TermKind::LamBang:
      return alpha_bound(a->kids[0], {a->x}, b->kids[0], {b->x}, ab, ba);
    case TermKind::LetTensor:
      if (a->x == a->y || b->x == b->y) return false;
      return alpha(a->kids[0], b->kids[0], ab, ba) &&
             alpha_bound(a->kids[1], {a->x, a->y}, b->kids[1], {b->x, b->y}, ab, ba);
    case TermKind::Case:
      return alpha(a->kids[0], b->kids[0], ab, ba) &&
             alpha_bound(a->kids[1], {a->x}, b->kids[1], {b->x}, ab, ba) &&
             alpha_bound(a->kids[2], {a->y}, b->kids[2], {b->y}, ab, ba);
    default:
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (!alpha(a->kids[i], b->kids[i], ab, ba)) return false;
      return true;
  }
}

}  // namespace

Term var(const std::string& x) { return make(TermKind::Var, x, "", {}); }
Term lam(const std::string& x, Term body) { return make(TermKind::LamLin, x, "", {std::move(body)}); }
Term lam_bang(const std::string& x, Term body) { return make(TermKind::LamBang, x, "", {std::move(body)}); }
Term app(Term f, Term a) { return make(TermKind::App, "", "", {std::move(f), std::move(a)}); }
Term app(Term f, const std::vector<Term>& args) {
  for (const auto& a : args) f = app(f, a);
  return f;
}
Term tensor_pair(Term a, Term b) { return make(TermKind::TensorPair, "", "", {std::move(a), std::move(b)}); }
Term let_tensor(const std::string& x, const std::string& y, Term t, Term body) {
  return make(TermKind::LetTensor, x, y, {std::move(t), std::move(body)});
}
Term unit() {
  static const Term u = make(TermKind::Unit, "", "", {});
  return u;
}
Term let_unit(Term t, Term body) { return make(TermKind::LetUnit, "", "", {std::move(t), std::move(body)}); }
Term with_pair(Term a, Term b) { return make(TermKind::WithPair, "", "", {std::move(a), std::move(b)}); }
Term proj(int i, Term t) { return make(i == 1 ? TermKind::Proj1 : TermKind::Proj2, "", "", {std::move(t)}); }
Term inj(int i, Term t) { return make(i == 1 ? TermKind::Inj1 : TermKind::Inj2, "", "", {std::move(t)}); }
Term case_of(Term t, const std::string& x, Term l, const std::string& y, Term r) {
  return make(TermKind::Case, x, y, {std::move(t), std::move(l), std::move(r)});
}
Term top_intro() {
  static const Term u = make(TermKind::TopIntro, "", "", {});
  return u;
}
Term abort_term(Term t) { return make(TermKind::Abort, "", "", {std::move(t)}); }

bool is_free(const Term& t, const std::string& x) {
  return std::binary_search(t->free.begin(), t->free.end(), x);
}

int term_size(const Term& t) {
  int n = 1;
  for (const auto& k : t->kids) n += term_size(k);
  return n;
}

std::string format_term(const Term& t) {
  std::string out;
  print(t, Ctx::Top, out);
  return out;
}

Term parse_term(const std::string& text) { return TermParser(text).parse_all(); }

Term substitute(const Term& t, const std::string& x, const Term& u) { return subst(t, x, u); }

bool alpha_equal(const Term& a, const Term& b) {
  std::map<std::string, std::string> ab, ba;
  return alpha(a, b, ab, ba);
}

std::string fresh_variable(const std::string& base) { return fresh_name(base); }

Term rebuild(const Term& t, std::vector<Term> kids) {
  switch (t->kind) {
    case TermKind::Var: return t;
    case TermKind::LamLin: return lam(t->x, kids[0]);
    case TermKind::LamBang: return lam_bang(t->x, kids[0]);
    case TermKind::App: return app(kids[0], kids[1]);
    case TermKind::TensorPair: return tensor_pair(kids[0], kids[1]);
    case TermKind::LetTensor: return let_tensor(t->x, t->y, kids[0], kids[1]);
    case TermKind::Unit: return t;
    case TermKind::LetUnit: return let_unit(kids[0], kids[1]);
    case TermKind::WithPair: return with_pair(kids[0], kids[1]);
    case TermKind::Proj1: return proj(1, kids[0]);
    case TermKind::Proj2: return proj(2, kids[0]);
    case TermKind::Inj1: return inj(1, kids[0]);
    case TermKind::Inj2: return inj(2, kids[0]);
    case TermKind::Case: return case_of(kids[0], t->x, kids[1], t->y, kids[2]);
    case TermKind::TopIntro: return t;
    case TermKind::Abort: return abort_term(kids[0]);
  }
  return t;
}

}  // namespace lsst
