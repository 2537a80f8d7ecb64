#include "lsst/compile.h"

#include <algorithm>
#include <map>

#include "lsst/error.h"
#include "lsst/streaming.h"

namespace lsst {

Obj denote_type(const Type& t) {
  switch (t->kind) {
    case TypeKind::Base:
      return obj_base(1);
    case TypeKind::One:
      return obj_unit();
    case TypeKind::Top:
      return obj_top();
    case TypeKind::Zero:
      return obj_zero();
    case TypeKind::Tensor:
      return obj_tensor({denote_type(t->left), denote_type(t->right)});
    case TypeKind::With:
      return obj_with({denote_type(t->left), denote_type(t->right)});
    case TypeKind::Plus:
      return obj_plus({denote_type(t->left), denote_type(t->right)});
    case TypeKind::Lin:
      return obj_lin(denote_type(t->left), denote_type(t->right));
    case TypeKind::Arrow:
      break;
  }
  throw NotPurelyLinear(format_type(t));
}

Mor denote_constant(const RankedAlphabet& gamma, int i) {
  const std::string& letter = gamma.letters.at(i);
  if (gamma.rank(i) == 0) return mor_point(RT{0, {RegWord{}}});
  if (gamma.rank(i) > 1) throw DomainMismatch("letter '" + letter + "' of rank > 1 has no string denotation");
  Word w = to_u32(letter);
  if (w.size() != 1) throw DomainMismatch("letter '" + letter + "' is not a single character");
  return name_of(mor_embed(RT{1, {RegWord{Sym::letter(w[0]), Sym::reg(0)}}}));
}

namespace {

// Every binder renamed apart, and no node shared, so that annotations and
// free-variable routing are unambiguous.
Term rename_apart(const Term& t, std::map<std::string, std::string>& names) {
  auto bind = [&](const std::string& x, const Term& body) {
    std::string fresh = fresh_variable(x);
    auto saved = names.find(x) == names.end() ? std::nullopt : std::optional<std::string>(names[x]);
    names[x] = fresh;
    Term b = rename_apart(body, names);
    if (saved) names[x] = *saved;
    else names.erase(x);
    return std::make_pair(fresh, b);
  };
  switch (t->kind) {
    case TermKind::Var: {
      auto it = names.find(t->x);
      return var(it == names.end() ? t->x : it->second);
    }
    case TermKind::LamLin: {
      auto [x, b] = bind(t->x, t->kids[0]);
      return lam(x, b);
    }
    case TermKind::LamBang:
      throw NotPurelyLinear("nonlinear abstraction over '" + t->x + "'");
    case TermKind::LetTensor: {
      Term s = rename_apart(t->kids[0], names);
      std::string x = fresh_variable(t->x);
      std::string y = fresh_variable(t->y);
      auto sx = names.count(t->x) ? std::optional<std::string>(names[t->x]) : std::nullopt;
      auto sy = names.count(t->y) ? std::optional<std::string>(names[t->y]) : std::nullopt;
      names[t->x] = x;
      names[t->y] = y;
      Term b = rename_apart(t->kids[1], names);
      if (sx) names[t->x] = *sx;
      else names.erase(t->x);
      if (sy) names[t->y] = *sy;
      else names.erase(t->y);
      return let_tensor(x, y, s, b);
    }
    case TermKind::Case: {
      Term s = rename_apart(t->kids[0], names);
      auto [x, l] = bind(t->x, t->kids[1]);
      auto [y, r] = bind(t->y, t->kids[2]);
      return case_of(s, x, l, y, r);
    }
    default: {
      std::vector<Term> kids;
      for (const auto& k : t->kids) kids.push_back(rename_apart(k, names));
      return rebuild(t, kids);
    }
  }
}

using Ctx = LinearContext;

bool free_in(const Term& t, const std::string& x) { return std::binary_search(t->free.begin(), t->free.end(), x); }

// Whether t can take unused linear variables (through ⊤ or abort).
bool absorbs(const Term& t) {
  switch (t->kind) {
    case TermKind::TopIntro:
    case TermKind::Abort:
      return true;
    case TermKind::Var:
    case TermKind::Unit:
      return false;
    case TermKind::WithPair:
      return absorbs(t->kids[0]) && absorbs(t->kids[1]);
    case TermKind::Case:
      return absorbs(t->kids[0]) || (absorbs(t->kids[1]) && absorbs(t->kids[2]));
    default:
      return std::any_of(t->kids.begin(), t->kids.end(), absorbs);
  }
}

class Denoter {
 public:
  Denoter(const RankedAlphabet& gamma, const TypeAnnotations& types) : types_(types) {
    for (int i = 0; i < gamma.size(); ++i) constants_.emplace(letter_variable(gamma, i), memoize(denote_constant(gamma, i)));
  }

  Mor denote(const Term& t, const Ctx& ctx) {
    switch (t->kind) {
      case TermKind::Var: {
        for (size_t k = 0; k < ctx.size(); ++k)
          if (ctx[k].first == t->x) return weaken(ctx, {k});
        auto c = constants_.find(t->x);
        if (c == constants_.end()) throw TypeMismatch("unbound variable '" + t->x + "'");
        return mor_compose(weaken(ctx, {}), c->second);
      }
      case TermKind::Unit:
        return weaken(ctx, {});
      case TermKind::TopIntro:
        return mor_to_top(context_obj(ctx));
      case TermKind::LamLin: {
        const Type& ty = type_of(t);
        Ctx inner = ctx;
        inner.push_back({t->x, ty->left});
        // cached: a curried body is evaluated over every summand of its domain
        return memoize(curry(denote(t->kids[0], inner), context_obj(ctx), denote_type(ty->left)));
      }
      case TermKind::App: {
        auto parts = split(ctx, {{t->kids[0]}, {t->kids[1]}});
        const Type& ft = type_of(t->kids[0]);
        Mor both = mor_tensor(denote(t->kids[0], parts[0].first), denote(t->kids[1], parts[1].first));
        return mor_compose({reorder(ctx, parts), both, eval(denote_type(ft->left), denote_type(ft->right))});
      }
      case TermKind::TensorPair: {
        auto parts = split(ctx, {{t->kids[0]}, {t->kids[1]}});
        return mor_compose(reorder(ctx, parts),
                           mor_tensor(denote(t->kids[0], parts[0].first), denote(t->kids[1], parts[1].first)));
      }
      case TermKind::LetTensor: {
        auto parts = split(ctx, {{t->kids[0]}, {t->kids[1]}});
        const Type& pt = type_of(t->kids[0]);
        const Ctx& rest = parts[1].first;
        Ctx inner{{t->x, pt->left}, {t->y, pt->right}};
        inner.insert(inner.end(), rest.begin(), rest.end());
        return mor_compose({reorder(ctx, parts), mor_tensor(denote(t->kids[0], parts[0].first), mor_id(context_obj(rest))),
                            denote(t->kids[1], inner)});
      }
      case TermKind::LetUnit: {
        auto parts = split(ctx, {{t->kids[0]}, {t->kids[1]}});
        const Ctx& rest = parts[1].first;
        return mor_compose({reorder(ctx, parts), mor_tensor(denote(t->kids[0], parts[0].first), mor_id(context_obj(rest))),
                            denote(t->kids[1], rest)});
      }
      case TermKind::WithPair:
        return mor_pair(context_obj(ctx), {denote(t->kids[0], ctx), denote(t->kids[1], ctx)});
      case TermKind::Proj1:
      case TermKind::Proj2: {
        const Type& wt = type_of(t->kids[0]);
        int i = t->kind == TermKind::Proj1 ? 0 : 1;
        return mor_compose(denote(t->kids[0], ctx), mor_proj({denote_type(wt->left), denote_type(wt->right)}, i));
      }
      case TermKind::Inj1:
      case TermKind::Inj2: {
        const Type& pt = type_of(t);
        int i = t->kind == TermKind::Inj1 ? 0 : 1;
        return mor_compose(denote(t->kids[0], ctx), mor_inj({denote_type(pt->left), denote_type(pt->right)}, i));
      }
      case TermKind::Case: {
        // branches' context first, then the scrutinee: ctx ⊗ (A ⊕ B)
        auto parts = split(ctx, {{t->kids[1], t->kids[2]}, {t->kids[0]}});
        const Type& st = type_of(t->kids[0]);
        const Ctx& rest = parts[0].first;
        Obj a = denote_type(st->left);
        Obj b = denote_type(st->right);
        Ctx left = rest, right = rest;
        left.push_back({t->x, st->left});
        right.push_back({t->y, st->right});
        Mor scrutinee = mor_tensor(mor_id(context_obj(rest)), denote(t->kids[0], parts[1].first));
        Mor branches = mor_case(context_obj(rest), {a, b}, {denote(t->kids[1], left), denote(t->kids[2], right)},
                                denote_type(type_of(t)));
        return mor_compose({reorder(ctx, parts), scrutinee, branches});
      }
      case TermKind::Abort: {
        auto parts = split(ctx, {{t->kids[0]}, {}});
        Mor m = mor_tensor(denote(t->kids[0], parts[0].first), mor_id(context_obj(parts[1].first)));
        return mor_compose({reorder(ctx, parts), m, mor_from_empty(m.cod, denote_type(type_of(t)))});
      }
      case TermKind::LamBang:
        break;
    }
    throw NotPurelyLinear("nonlinear abstraction over '" + t->x + "'");
  }

 private:
  using Part = std::pair<Ctx, std::vector<size_t>>;  // variables and their positions in ctx

  const Type& type_of(const Term& t) const {
    auto it = types_.find(t.get());
    if (it == types_.end()) throw TypeMismatch("subterm without a type: " + format_term(t));
    return it->second;
  }

  static Obj context_obj(const Ctx& ctx) {
    std::vector<Obj> parts;
    for (const auto& [x, ty] : ctx) parts.push_back(denote_type(ty));
    return obj_tensor(parts);
  }

  // Routes each variable to the group where it is free. Unused ones go to
  // the first group that absorbs (a group with several terms absorbs when
  // all of them do), else to group 0.
  static std::vector<Part> split(const Ctx& ctx, const std::vector<std::vector<Term>>& groups) {
    std::vector<Part> out(groups.size());
    int sink = 0;
    for (size_t g = 0; g < groups.size(); ++g) {
      if (!groups[g].empty() && std::all_of(groups[g].begin(), groups[g].end(), absorbs)) {
        sink = static_cast<int>(g);
        break;
      }
    }
    for (size_t k = 0; k < ctx.size(); ++k) {
      int target = sink;
      for (size_t g = 0; g < groups.size(); ++g) {
        bool used = std::any_of(groups[g].begin(), groups[g].end(),
                                [&](const Term& t) { return free_in(t, ctx[k].first); });
        if (used) {
          target = static_cast<int>(g);
          break;
        }
      }
      out[target].first.push_back(ctx[k]);
      out[target].second.push_back(k);
    }
    return out;
  }

  static Mor reorder(const Ctx& ctx, const std::vector<Part>& parts) {
    std::vector<Obj> groups;
    for (const auto& [x, ty] : ctx) groups.push_back(denote_type(ty));
    std::vector<int> perm;
    for (const auto& p : parts)
      for (size_t k : p.second) perm.push_back(static_cast<int>(k));
    return mor_permute(groups, perm);
  }

  // Keeps the listed variables in order and discards the rest.
  static Mor weaken(const Ctx& ctx, const std::vector<size_t>& keep) {
    Part kept, dropped;
    for (size_t k = 0; k < ctx.size(); ++k) {
      Part& p = std::find(keep.begin(), keep.end(), k) != keep.end() ? kept : dropped;
      p.first.push_back(ctx[k]);
      p.second.push_back(k);
    }
    Mor rest = dropped.first.empty() ? mor_id(obj_unit()) : mor_discard(context_obj(dropped.first));
    return mor_compose(reorder(ctx, {kept, dropped}), mor_tensor(mor_id(context_obj(kept.first)), rest));
  }

  const TypeAnnotations& types_;
  std::map<std::string, Mor> constants_;
};

}  // namespace

Mor denote_term(const Term& t, const RankedAlphabet& gamma, const LinearContext& linear, const Type& expected) {
  for (const auto& [x, ty] : linear) denote_type(ty);
  std::map<std::string, std::string> names;
  LinearContext ctx;
  for (const auto& [x, ty] : linear) {
    names[x] = fresh_variable(x);
    ctx.push_back({names[x], ty});
  }
  Term u = rename_apart(t, names);
  TypingContext tc = constants_context(gamma);
  tc.linear = ctx;
  TypeAnnotations types;
  Type ty = typecheck(u, tc, expected, &types);
  denote_type(ty);
  return Denoter(gamma, types).denote(u, ctx);
}

GenSst<OplusWithSr> string_term_machine(const Shape& shape, const Type& kappa, const Word& sigma,
                                        const Word& gamma) {
  RankedAlphabet ga = string_alphabet(gamma);
  Obj k = denote_type(kappa);
  EndoMonoid endo = endo_monoid(k);
  int n = static_cast<int>(sigma.size());
  if (static_cast<int>(shape.step.size()) != n + 1) throw DomainMismatch("shape does not match the input alphabet");
  GenSst<OplusWithSr> m;
  m.states = 1;
  m.initial = 0;
  m.memory = endo.carrier;
  m.letters = n;
  std::vector<std::pair<int, Mor>> row;
  for (int a = 0; a < n; ++a) {
    Mor point = denote_term(shape.step[a], ga, {}, t_lin(kappa, kappa));
    // h ↦ h ∘ d_a: d_a acts first
    row.push_back({0, memoize(mor_compose(mor_tensor(point, mor_id(endo.carrier)), endo.mu))});
  }
  m.delta.push_back(row);
  m.init = endo.eta;
  Mor v = denote_term(shape.step[n], ga, {}, kappa);
  Mor o = denote_term(shape.output, ga, {}, t_lin(kappa, t_base()));
  m.output.push_back(memoize(mor_compose(appto(v, k), uncurry(o))));
  return m;
}

SstMachine compile_string_term(const Term& f, const Type& kappa, const Word& sigma, const Word& gamma, long fuel,
                               size_t max_states) {
  if (!is_purely_linear(kappa)) throw NotPurelyLinear(format_type(kappa));
  Shape shape = extract_shape(f, string_alphabet(sigma), string_alphabet(gamma), kappa, fuel);
  return lower_to_sst(string_term_machine(shape, kappa, sigma, gamma), sigma, gamma, max_states);
}

}  // namespace lsst
