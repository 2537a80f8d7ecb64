#include <algorithm>
#include <set>

#include "lsst/error.h"
#include "lsst/lambda.h"

namespace lsst {

namespace {

Term with_kid(const Term& t, size_t i, Term k) {
  std::vector<Term> kids = t->kids;
  kids[i] = std::move(k);
  return rebuild(t, std::move(kids));
}

bool is_lambda(const Term& t) { return t->kind == TermKind::LamLin || t->kind == TermKind::LamBang; }
bool is_let(const Term& t) { return t->kind == TermKind::LetTensor || t->kind == TermKind::LetUnit; }

// ---------------------------------------------------------------------------
// β

std::optional<Term> contract_beta(const Term& t) {
  switch (t->kind) {
    case TermKind::App:
      if (is_lambda(t->kids[0])) return substitute(t->kids[0]->kids[0], t->kids[0]->x, t->kids[1]);
      return std::nullopt;
    case TermKind::Proj1:
    case TermKind::Proj2:
      if (t->kids[0]->kind == TermKind::WithPair) return t->kids[0]->kids[t->kind == TermKind::Proj1 ? 0 : 1];
      return std::nullopt;
    case TermKind::Case: {
      const Term& s = t->kids[0];
      if (s->kind == TermKind::Inj1) return substitute(t->kids[1], t->x, s->kids[0]);
      if (s->kind == TermKind::Inj2) return substitute(t->kids[2], t->y, s->kids[0]);
      return std::nullopt;
    }
    case TermKind::LetTensor: {
      const Term& s = t->kids[0];
      if (s->kind != TermKind::TensorPair) return std::nullopt;
      Term body = t->kids[1];
      std::string y = t->y;
      if (is_free(s->kids[0], y) && is_free(body, y)) {
        std::string ny = fresh_variable(y);
        body = substitute(body, y, var(ny));
        y = ny;
      }
      body = substitute(body, t->x, s->kids[0]);
      return substitute(body, y, s->kids[1]);
    }
    case TermKind::LetUnit:
      if (t->kids[0]->kind == TermKind::Unit) return t->kids[1];
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Extrusion: a frame whose principal argument is a let, an abort or a case.

bool is_frame(const Term& t) {
  switch (t->kind) {
    case TermKind::App:
    case TermKind::Proj1:
    case TermKind::Proj2:
    case TermKind::LetTensor:
    case TermKind::LetUnit:
    case TermKind::Abort:
    case TermKind::Case:
      return true;
    default:
      return false;
  }
}

// Renames binder b of body if it would capture a free variable of the frame.
std::pair<std::string, Term> avoid(const std::string& b, const Term& body, const Term& frame_rest) {
  if (b.empty() || !is_free(frame_rest, b)) return {b, body};
  std::string nb = fresh_variable(b);
  return {nb, substitute(body, b, var(nb))};
}

std::optional<Term> contract_extrusion(const Term& t) {
  if (!is_frame(t)) return std::nullopt;
  const Term& c = t->kids[0];
  Term rest = with_kid(t, 0, unit());
  if (c->kind == TermKind::Abort) return c;
  if (c->kind == TermKind::LetTensor) {
    auto [x, b1] = avoid(c->x, c->kids[1], rest);
    auto [y, b2] = avoid(c->y, b1, rest);
    return let_tensor(x, y, c->kids[0], with_kid(t, 0, b2));
  }
  if (c->kind == TermKind::LetUnit) return let_unit(c->kids[0], with_kid(t, 0, c->kids[1]));
  if (c->kind == TermKind::Case) {
    auto [x, l] = avoid(c->x, c->kids[1], rest);
    auto [y, r] = avoid(c->y, c->kids[2], rest);
    return case_of(c->kids[0], x, with_kid(t, 0, l), y, with_kid(t, 0, r));
  }
  return std::nullopt;
}

template <class F>
std::optional<Term> rewrite_first(const Term& t, Strategy s, F& contract) {
  if (auto r = contract(t)) return r;
  size_t n = t->kids.size();
  for (size_t k = 0; k < n; ++k) {
    size_t i = s == Strategy::Leftmost ? k : n - 1 - k;
    if (auto r = rewrite_first(t->kids[i], s, contract)) return with_kid(t, i, *r);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Commuting-conversion canonical form


std::string level_name(int d) { return "_c" + std::to_string(d); }

Term canonical_names(const Term& t, int depth, std::vector<std::pair<std::string, std::string>>& scope) {
  auto lookup = [&](const std::string& x) -> std::string {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == x) return it->second;
    return x;
  };
  switch (t->kind) {
    case TermKind::Var:
      return var(lookup(t->x));
    case TermKind::LamLin:
    case TermKind::LamBang: {
      scope.push_back({t->x, level_name(depth)});
      Term b = canonical_names(t->kids[0], depth + 1, scope);
      scope.pop_back();
      return t->kind == TermKind::LamLin ? lam(level_name(depth), b) : lam_bang(level_name(depth), b);
    }
    case TermKind::LetTensor: {
      Term s = canonical_names(t->kids[0], depth, scope);
      scope.push_back({t->x, level_name(depth)});
      scope.push_back({t->y, level_name(depth + 1)});
      Term b = canonical_names(t->kids[1], depth + 2, scope);
      scope.pop_back();
      scope.pop_back();
      return let_tensor(level_name(depth), level_name(depth + 1), s, b);
    }
    case TermKind::Case: {
      Term s = canonical_names(t->kids[0], depth, scope);
      scope.push_back({t->x, level_name(depth)});
      Term l = canonical_names(t->kids[1], depth + 1, scope);
      scope.pop_back();
      scope.push_back({t->y, level_name(depth)});
      Term r = canonical_names(t->kids[2], depth + 1, scope);
      scope.pop_back();
      return case_of(s, level_name(depth), l, level_name(depth), r);
    }
    default: {
      std::vector<Term> kids;
      for (const auto& k : t->kids) kids.push_back(canonical_names(k, depth, scope));
      return rebuild(t, std::move(kids));
    }
  }
}

std::vector<std::string> binders(const Term& let) {
  if (let->kind == TermKind::LetTensor) return {let->x, let->y};
  return {};
}

bool mentions_any(const Term& t, const std::vector<std::string>& names) {
  for (const auto& n : names)
    if (is_free(t, n)) return true;
  return false;
}

Term rebind(const Term& let, Term scrut, Term body) {
  if (let->kind == TermKind::LetTensor) return let_tensor(let->x, let->y, std::move(scrut), std::move(body));
  return let_unit(std::move(scrut), std::move(body));
}

// Sorts a maximal chain of lets by scrutinee, respecting dependencies.
std::optional<Term> sort_let_chain(const Term& t) {
  std::vector<Term> items;
  Term cur = t;
  while (is_let(cur)) {
    items.push_back(cur);
    cur = cur->kids[1];
  }
  if (items.size() < 2) return std::nullopt;
  std::vector<std::string> keys;
  for (const auto& it : items) keys.push_back(format_term(it->kids[0]));
  std::vector<bool> placed(items.size(), false);
  std::vector<size_t> order;
  for (size_t step = 0; step < items.size(); ++step) {
    size_t best = items.size();
    for (size_t j = 0; j < items.size(); ++j) {
      if (placed[j]) continue;
      bool ready = true;
      for (size_t i = 0; i < j && ready; ++i)
        if (!placed[i] && mentions_any(items[j]->kids[0], binders(items[i]))) ready = false;
      if (!ready) continue;
      if (best == items.size() || keys[j] < keys[best]) best = j;
    }
    placed[best] = true;
    order.push_back(best);
  }
  bool identity = true;
  for (size_t i = 0; i < order.size(); ++i) identity = identity && order[i] == i;
  if (identity) return std::nullopt;
  Term body = cur;
  for (auto it = order.rbegin(); it != order.rend(); ++it) body = rebind(items[*it], items[*it]->kids[0], body);
  return body;
}

std::optional<Term> cc_local(const Term& t) {
  // case(u, x.abort a, y.abort b)  ->  abort(case(u, x.a, y.b))
  if (t->kind == TermKind::Case && t->kids[1]->kind == TermKind::Abort && t->kids[2]->kind == TermKind::Abort) {
    return abort_term(case_of(t->kids[0], t->x, t->kids[1]->kids[0], t->y, t->kids[2]->kids[0]));
  }
  // abort(let p = s in u)  ->  let p = s in abort u
  if (t->kind == TermKind::Abort && is_let(t->kids[0])) {
    const Term& l = t->kids[0];
    return rebind(l, l->kids[0], abort_term(l->kids[1]));
  }
  if (t->kind == TermKind::Case) {
    const Term& l = t->kids[1];
    const Term& r = t->kids[2];
    // case(u, x.let p = s in a, y.let p = s in b)  ->  let p = s in case(u, x.a, y.b)
    if (is_let(l) && l->kind == r->kind && alpha_equal(l->kids[0], r->kids[0]) && !is_free(l->kids[0], t->x) &&
        !is_free(r->kids[0], t->y) && binders(l) == binders(r)) {
      Term a = l->kids[1], b = r->kids[1];
      std::vector<std::string> bs = binders(l);
      std::vector<std::string> fresh_bs;
      for (const auto& n : bs) {
        std::string nn = fresh_variable(n);
        a = substitute(a, n, var(nn));
        b = substitute(b, n, var(nn));
        fresh_bs.push_back(nn);
      }
      Term inner = case_of(t->kids[0], t->x, a, t->y, b);
      if (l->kind == TermKind::LetTensor) return let_tensor(fresh_bs[0], fresh_bs[1], l->kids[0], inner);
      return let_unit(l->kids[0], inner);
    }
    // case(t, x.case(u, ..), y.case(u, ..)) with u independent: order by scrutinee.
    if (l->kind == TermKind::Case && r->kind == TermKind::Case && alpha_equal(l->kids[0], r->kids[0]) &&
        !is_free(l->kids[0], t->x) && !is_free(r->kids[0], t->y) &&
        format_term(l->kids[0]) < format_term(t->kids[0])) {
      std::string a = fresh_variable("a"), b = fresh_variable("b");
      Term v = substitute(l->kids[1], l->x, var(a));
      Term v2 = substitute(r->kids[1], r->x, var(a));
      Term w = substitute(l->kids[2], l->y, var(b));
      Term w2 = substitute(r->kids[2], r->y, var(b));
      std::string x = fresh_variable("x"), y = fresh_variable("y");
      Term tl = substitute(v, t->x, var(x)), tr = substitute(v2, t->y, var(y));
      Term ul = substitute(w, t->x, var(x)), ur = substitute(w2, t->y, var(y));
      return case_of(l->kids[0], a, case_of(t->kids[0], x, tl, y, tr), b, case_of(t->kids[0], x, ul, y, ur));
    }
  }
  if (is_let(t)) return sort_let_chain(t);
  return std::nullopt;
}

Term cc_pass(const Term& t) {
  std::vector<Term> kids;
  bool changed = false;
  for (const auto& k : t->kids) {
    kids.push_back(cc_pass(k));
    changed = changed || kids.back() != k;
  }
  Term cur = changed ? rebuild(t, std::move(kids)) : t;
  if (auto r = cc_local(cur)) return *r;
  return cur;
}

}  // namespace

std::optional<Term> beta_extr_step(const Term& t, Strategy s) {
  auto beta = [](const Term& u) { return contract_beta(u); };
  if (auto r = rewrite_first(t, s, beta)) return r;
  auto ext = [](const Term& u) { return contract_extrusion(u); };
  return rewrite_first(t, s, ext);
}

Term normalize(const Term& t, long fuel, Strategy s, NormalizeStats* stats) {
  Term cur = t;
  auto beta = [](const Term& u) { return contract_beta(u); };
  auto ext = [](const Term& u) { return contract_extrusion(u); };
  long steps = 0;
  for (;;) {
    if (auto r = rewrite_first(cur, s, beta)) {
      cur = *r;
      if (stats) ++stats->beta_steps;
    } else if (auto e = rewrite_first(cur, s, ext)) {
      cur = *e;
      if (stats) ++stats->extrusion_steps;
    } else {
      return cur;
    }
    if (++steps > fuel) throw StepBudgetExceeded("no normal form within " + std::to_string(fuel) + " steps");
  }
}

bool check_neutral(const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
      return true;
    case TermKind::App:
      return check_neutral(t->kids[0]) && check_normal(t->kids[1]);
    case TermKind::Proj1:
    case TermKind::Proj2:
    case TermKind::Abort:
      return check_neutral(t->kids[0]);
    case TermKind::LetTensor:
    case TermKind::LetUnit:
      return check_neutral(t->kids[0]) && check_neutral(t->kids[1]);
    case TermKind::Case:
      return check_neutral(t->kids[0]) && check_neutral(t->kids[1]) && check_neutral(t->kids[2]);
    default:
      return false;
  }
}

bool check_normal(const Term& t) {
  if (check_neutral(t)) return true;
  switch (t->kind) {
    case TermKind::LamLin:
    case TermKind::LamBang:
    case TermKind::Inj1:
    case TermKind::Inj2:
      return check_normal(t->kids[0]);
    case TermKind::TensorPair:
    case TermKind::WithPair:
      return check_normal(t->kids[0]) && check_normal(t->kids[1]);
    case TermKind::Unit:
    case TermKind::TopIntro:
      return true;
    case TermKind::LetTensor:
    case TermKind::LetUnit:
      return check_neutral(t->kids[0]) && check_normal(t->kids[1]);
    case TermKind::Case:
      return check_neutral(t->kids[0]) && check_normal(t->kids[1]) && check_normal(t->kids[2]);
    default:
      return false;
  }
}

Term cc_canonical(const Term& t) {
  std::vector<std::pair<std::string, std::string>> scope;
  Term cur = canonical_names(t, 0, scope);
  for (int round = 0; round < 64; ++round) {
    Term next = cc_pass(cur);
    scope.clear();
    next = canonical_names(next, 0, scope);
    if (alpha_equal(next, cur)) return next;
    cur = next;
  }
  return cur;
}

bool cc_equal(const Term& a, const Term& b) { return alpha_equal(cc_canonical(a), cc_canonical(b)); }

}  // namespace lsst
