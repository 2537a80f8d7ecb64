#include <algorithm>
#include <map>
#include <set>

#include "lsst/error.h"
#include "lsst/lambda.h"

namespace lsst {

namespace {

// Inference types: TypeKind plus metavariables resolved by unification.
struct INode;
using ITy = std::shared_ptr<INode>;

struct INode {
  bool meta = false;
  int id = 0;
  TypeKind kind = TypeKind::Base;
  ITy left, right;
  ITy link;  // set once a metavariable is solved
};

ITy resolve(ITy t) {
  while (t->meta && t->link) t = t->link;
  return t;
}

bool binary(TypeKind k) {
  return k == TypeKind::Lin || k == TypeKind::Arrow || k == TypeKind::Tensor ||
         k == TypeKind::With || k == TypeKind::Plus;
}

struct Entry {
  std::string name;
  ITy type;
  bool linear;
  int id;
};

struct Usage {
  ITy type;
  std::set<int> used;
  bool flexible = false;  // may absorb any further linear variables
};

class Checker {
 public:
  explicit Checker(TypeAnnotations* ann) : ann_(ann) {}

  ITy fresh() {
    auto n = std::make_shared<INode>();
    n->meta = true;
    n->id = next_meta_++;
    return n;
  }

  ITy node(TypeKind k, ITy l = nullptr, ITy r = nullptr) {
    auto n = std::make_shared<INode>();
    n->kind = k;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
  }

  ITy import(const Type& t) {
    if (!binary(t->kind)) return node(t->kind);
    return node(t->kind, import(t->left), import(t->right));
  }

  Type export_type(ITy t) {
    t = resolve(t);
    if (t->meta) return t_base();
    switch (t->kind) {
      case TypeKind::Base: return t_base();
      case TypeKind::One: return t_one();
      case TypeKind::Top: return t_top();
      case TypeKind::Zero: return t_zero();
      case TypeKind::Lin: return t_lin(export_type(t->left), export_type(t->right));
      case TypeKind::Arrow: return t_arrow(export_type(t->left), export_type(t->right));
      case TypeKind::Tensor: return t_tensor(export_type(t->left), export_type(t->right));
      case TypeKind::With: return t_with(export_type(t->left), export_type(t->right));
      case TypeKind::Plus: return t_plus(export_type(t->left), export_type(t->right));
    }
    return t_base();
  }

  bool occurs(const ITy& m, ITy t) {
    t = resolve(t);
    if (t == m) return true;
    if (t->meta) return false;
    if (!binary(t->kind)) return false;
    return occurs(m, t->left) || occurs(m, t->right);
  }

  void unify(ITy a, ITy b, const Term& at) {
    a = resolve(a);
    b = resolve(b);
    if (a == b) return;
    if (a->meta) {
      if (occurs(a, b)) mismatch(a, b, at);
      a->link = b;
      return;
    }
    if (b->meta) {
      unify(b, a, at);
      return;
    }
    if (a->kind != b->kind) mismatch(a, b, at);
    if (binary(a->kind)) {
      unify(a->left, b->left, at);
      unify(a->right, b->right, at);
    }
  }

  [[noreturn]] void mismatch(const ITy& a, const ITy& b, const Term& at) {
    throw TypeMismatch("cannot match " + format_type(export_type(a)) + " with " +
                       format_type(export_type(b)) + " in '" + format_term(at) + "'");
  }

  int bind(const std::string& name, ITy type, bool linear) {
    int id = next_var_++;
    env_.push_back({name, std::move(type), linear, id});
    return id;
  }

  void unbind(size_t n) { env_.resize(env_.size() - n); }

  const Entry* lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  static void require_disjoint(const Usage& a, const Usage& b, const Term& at) {
    for (int v : a.used) {
      if (b.used.count(v)) {
        throw LinearityViolation("a linear variable is used twice in '" + format_term(at) + "'");
      }
    }
  }

  // Binders introduced by a rule must be consumed unless the body can absorb.
  void require_consumed(Usage& u, int id, const std::string& name, const Term& at) {
    if (u.used.count(id)) {
      u.used.erase(id);
    } else if (!u.flexible) {
      throw LinearityViolation("linear variable '" + name + "' is unused in '" + format_term(at) + "'");
    }
  }

  // Additive rules: both premises consume the same linear context.
  Usage share(Usage a, Usage b, const Term& at) {
    Usage out;
    if (!a.flexible && !b.flexible) {
      if (a.used != b.used) {
        throw LinearityViolation("additive premises consume different linear variables in '" +
                                 format_term(at) + "'");
      }
      out.used = a.used;
    } else if (a.flexible && b.flexible) {
      out.used = a.used;
      out.used.insert(b.used.begin(), b.used.end());
      out.flexible = true;
    } else {
      const Usage& flex = a.flexible ? a : b;
      const Usage& rigid = a.flexible ? b : a;
      if (!std::includes(rigid.used.begin(), rigid.used.end(), flex.used.begin(), flex.used.end())) {
        throw LinearityViolation("additive premises consume different linear variables in '" +
                                 format_term(at) + "'");
      }
      out.used = rigid.used;
    }
    return out;
  }

  Usage infer(const Term& t, ITy expected) {
    Usage u = infer_raw(t, expected);
    unify(u.type, expected, t);
    if (ann_) annotated_.push_back({t.get(), u.type});
    return u;
  }

  Usage infer_raw(const Term& t, const ITy& expected) {
    switch (t->kind) {
      case TermKind::Var: {
        const Entry* e = lookup(t->x);
        if (!e) throw UnboundVariable("'" + t->x + "'");
        Usage u;
        u.type = e->type;
        if (e->linear) u.used.insert(e->id);
        return u;
      }
      case TermKind::LamLin:
      case TermKind::LamBang: {
        bool linear = t->kind == TermKind::LamLin;
        TypeKind k = linear ? TypeKind::Lin : TypeKind::Arrow;
        ITy a = fresh(), b = fresh();
        unify(expected, node(k, a, b), t);
        int id = bind(t->x, a, linear);
        Usage body = infer(t->kids[0], b);
        unbind(1);
        if (linear) require_consumed(body, id, t->x, t);
        body.type = node(k, a, b);
        return body;
      }
      case TermKind::App: {
        Usage f = infer(t->kids[0], fresh());
        ITy ft = resolve(f.type);
        if (ft->meta) {
          // Unknown head: default to the linear arrow.
          unify(ft, node(TypeKind::Lin, fresh(), fresh()), t);
          ft = resolve(ft);
        }
        if (ft->kind != TypeKind::Lin && ft->kind != TypeKind::Arrow) {
          throw TypeMismatch("applying a term of type " + format_type(export_type(ft)) + " in '" +
                             format_term(t) + "'");
        }
        Usage a = infer(t->kids[1], ft->left);
        Usage out;
        out.type = ft->right;
        if (ft->kind == TypeKind::Arrow) {
          if (!a.used.empty()) {
            throw LinearityViolation("argument of a nonlinear application uses linear variables in '" +
                                     format_term(t) + "'");
          }
          out.used = f.used;
          out.flexible = f.flexible;
        } else {
          require_disjoint(f, a, t);
          out.used = f.used;
          out.used.insert(a.used.begin(), a.used.end());
          out.flexible = f.flexible || a.flexible;
        }
        return out;
      }
      case TermKind::TensorPair: {
        ITy a = fresh(), b = fresh();
        unify(expected, node(TypeKind::Tensor, a, b), t);
        Usage l = infer(t->kids[0], a);
        Usage r = infer(t->kids[1], b);
        require_disjoint(l, r, t);
        Usage out;
        out.type = node(TypeKind::Tensor, a, b);
        out.used = l.used;
        out.used.insert(r.used.begin(), r.used.end());
        out.flexible = l.flexible || r.flexible;
        return out;
      }
      case TermKind::LetTensor: {
        if (t->x == t->y) throw LinearityViolation("pattern binds '" + t->x + "' twice");
        ITy a = fresh(), b = fresh();
        Usage s = infer(t->kids[0], node(TypeKind::Tensor, a, b));
        int ix = bind(t->x, a, true);
        int iy = bind(t->y, b, true);
        Usage body = infer(t->kids[1], expected);
        unbind(2);
        require_consumed(body, ix, t->x, t);
        require_consumed(body, iy, t->y, t);
        require_disjoint(s, body, t);
        body.used.insert(s.used.begin(), s.used.end());
        body.flexible = body.flexible || s.flexible;
        return body;
      }
      case TermKind::Unit: {
        Usage u;
        u.type = node(TypeKind::One);
        return u;
      }
      case TermKind::LetUnit: {
        Usage s = infer(t->kids[0], node(TypeKind::One));
        Usage body = infer(t->kids[1], expected);
        require_disjoint(s, body, t);
        body.used.insert(s.used.begin(), s.used.end());
        body.flexible = body.flexible || s.flexible;
        return body;
      }
      case TermKind::WithPair: {
        ITy a = fresh(), b = fresh();
        unify(expected, node(TypeKind::With, a, b), t);
        Usage l = infer(t->kids[0], a);
        Usage r = infer(t->kids[1], b);
        Usage out = share(l, r, t);
        out.type = node(TypeKind::With, a, b);
        return out;
      }
      case TermKind::Proj1:
      case TermKind::Proj2: {
        ITy a = fresh(), b = fresh();
        Usage s = infer(t->kids[0], node(TypeKind::With, a, b));
        s.type = t->kind == TermKind::Proj1 ? a : b;
        return s;
      }
      case TermKind::Inj1:
      case TermKind::Inj2: {
        ITy a = fresh(), b = fresh();
        unify(expected, node(TypeKind::Plus, a, b), t);
        Usage s = infer(t->kids[0], t->kind == TermKind::Inj1 ? a : b);
        s.type = node(TypeKind::Plus, a, b);
        return s;
      }
      case TermKind::Case: {
        ITy a = fresh(), b = fresh();
        Usage s = infer(t->kids[0], node(TypeKind::Plus, a, b));
        int ix = bind(t->x, a, true);
        Usage l = infer(t->kids[1], expected);
        unbind(1);
        require_consumed(l, ix, t->x, t);
        int iy = bind(t->y, b, true);
        Usage r = infer(t->kids[2], expected);
        unbind(1);
        require_consumed(r, iy, t->y, t);
        Usage out = share(l, r, t);
        require_disjoint(s, out, t);
        out.used.insert(s.used.begin(), s.used.end());
        out.flexible = out.flexible || s.flexible;
        out.type = expected;
        return out;
      }
      case TermKind::TopIntro: {
        Usage u;
        u.type = node(TypeKind::Top);
        u.flexible = true;
        return u;
      }
      case TermKind::Abort: {
        Usage s = infer(t->kids[0], node(TypeKind::Zero));
        s.type = expected;
        s.flexible = true;
        return s;
      }
    }
    throw TypeMismatch("unknown term");
  }

  void flush_annotations() {
    if (!ann_) return;
    for (auto& [node, ty] : annotated_) (*ann_)[node] = export_type(ty);
  }

  std::vector<Entry> env_;

 private:
  TypeAnnotations* ann_;
  std::vector<std::pair<const TermNode*, ITy>> annotated_;
  int next_meta_ = 0;
  int next_var_ = 0;
};

}  // namespace

Type typecheck(const Term& t, const TypingContext& ctx, const Type& expected, TypeAnnotations* annotations) {
  Checker c(annotations);
  std::set<std::string> names;
  for (const auto& [x, ty] : ctx.nonlinear) {
    if (!names.insert(x).second) throw LinearityViolation("context declares '" + x + "' twice");
    c.bind(x, c.import(ty), false);
  }
  std::vector<std::pair<std::string, int>> linear_ids;
  for (const auto& [x, ty] : ctx.linear) {
    if (!names.insert(x).second) throw LinearityViolation("context declares '" + x + "' twice");
    linear_ids.push_back({x, c.bind(x, c.import(ty), true)});
  }
  ITy want = expected ? c.import(expected) : c.fresh();
  Usage u = c.infer(t, want);
  if (!u.flexible) {
    for (const auto& [x, id] : linear_ids) {
      if (!u.used.count(id)) throw LinearityViolation("linear variable '" + x + "' is unused");
    }
  }
  c.flush_annotations();
  return c.export_type(u.type);
}

}  // namespace lsst
