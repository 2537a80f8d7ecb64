#include "lsst/closure.h"

#include <algorithm>
#include <numeric>

#include "lsst/error.h"

namespace lsst {

// ---------------------------------------------------------------------------
// Sr homsets

std::vector<int> HomShape::domain() const {
  std::vector<int> out;
  for (int r = 0; r < dom(); ++r)
    if (target[r] >= 0) out.push_back(r);
  return out;
}

int HomShape::domain_size() const {
  return static_cast<int>(std::count_if(target.begin(), target.end(), [](int t) { return t >= 0; }));
}

std::vector<HomShape> hom_shapes(int r, int s) {
  std::vector<HomShape> out;
  std::vector<int> target(r, -1);
  while (true) {
    std::vector<std::vector<int>> fibers(s);
    for (int i = 0; i < r; ++i)
      if (target[i] >= 0) fibers[target[i]].push_back(i);
    std::vector<std::vector<int>> ranks;
    std::vector<int> base(r, -1);
    std::function<void(int, std::vector<int>&)> fill = [&](int f, std::vector<int>& rank) {
      if (f == s) {
        ranks.push_back(rank);
        return;
      }
      std::vector<int> order(fibers[f].size());
      std::iota(order.begin(), order.end(), 0);
      do {
        for (size_t k = 0; k < order.size(); ++k) rank[fibers[f][k]] = order[k];
        fill(f + 1, rank);
      } while (std::next_permutation(order.begin(), order.end()));
    };
    fill(0, base);
    std::sort(ranks.begin(), ranks.end());
    for (auto& rk : ranks) out.push_back(HomShape{s, target, rk});
    int i = r - 1;
    while (i >= 0 && target[i] == s - 1) target[i--] = -1;
    if (i < 0) break;
    ++target[i];
  }
  return out;
}

Curried curry_sr(const RT& f, int t_regs) {
  int r = f.dom - t_regs;
  if (r < 0) throw DomainMismatch("curry: transition domain smaller than the context");
  int s = f.cod();
  HomShape sh{s, std::vector<int>(r, -1), std::vector<int>(r, -1)};
  std::vector<RegWord> slot(r);
  std::vector<RegWord> head(s);
  for (int o = 0; o < s; ++o) {
    RegWord* cur = &head[o];
    int rank = 0;
    for (const auto& sym : f.assign[o]) {
      if (sym.is_reg() && sym.reg_index() >= t_regs) {
        int x = sym.reg_index() - t_regs;
        if (sh.target[x] >= 0) throw DomainMismatch("curry: register used twice");
        sh.target[x] = o;
        sh.rank[x] = rank++;
        cur = &slot[x];
      } else {
        cur->push_back(sym);
      }
    }
  }
  Curried out;
  out.shape = sh;
  out.h.dom = t_regs;
  out.h.assign = std::move(head);
  for (int x : sh.domain()) out.h.assign.push_back(std::move(slot[x]));
  return out;
}

RT eval_sr(const HomShape& sh) {
  std::vector<int> dom = sh.domain();
  int d = static_cast<int>(dom.size());
  RT t;
  t.dom = sh.cod + d + sh.dom();
  t.assign.resize(sh.cod);
  std::vector<std::vector<std::pair<int, int>>> fiber(sh.cod);  // (rank, position in domain)
  for (int k = 0; k < d; ++k) fiber[sh.target[dom[k]]].push_back({sh.rank[dom[k]], k});
  for (int s = 0; s < sh.cod; ++s) {
    std::sort(fiber[s].begin(), fiber[s].end());
    t.assign[s].push_back(Sym::reg(s));
    for (auto [rank, k] : fiber[s]) {
      t.assign[s].push_back(Sym::reg(sh.cod + d + dom[k]));
      t.assign[s].push_back(Sym::reg(sh.cod + k));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Objects

std::strong_ordering Idx::operator<=>(const Idx& o) const {
  if (auto c = tag <=> o.tag; c != 0) return c;
  if (auto c = data <=> o.data; c != 0) return c;
  return std::lexicographical_compare_three_way(kids.begin(), kids.end(), o.kids.begin(), o.kids.end());
}

bool Idx::operator==(const Idx& o) const { return tag == o.tag && data == o.data && kids == o.kids; }

std::string format_idx(const Idx& i) {
  std::string out = std::to_string(i.tag);
  if (!i.data.empty()) {
    out += '[';
    for (size_t k = 0; k < i.data.size(); ++k) out += (k ? "," : "") + std::to_string(i.data[k]);
    out += ']';
  }
  if (!i.kids.empty()) {
    out += '(';
    for (size_t k = 0; k < i.kids.size(); ++k) out += (k ? " " : "") + format_idx(i.kids[k]);
    out += ')';
  }
  return out;
}

namespace {

Obj make(ObjKind kind, std::vector<Obj> parts, int regs = 0) {
  auto n = std::make_shared<ObjNode>();
  n->kind = kind;
  n->parts = std::move(parts);
  n->regs = regs;
  return n;
}

std::vector<Obj> flatten(ObjKind kind, const std::vector<Obj>& parts) {
  std::vector<Obj> out;
  for (const auto& p : parts) {
    if (p->kind == kind)
      out.insert(out.end(), p->parts.begin(), p->parts.end());
    else
      out.push_back(p);
  }
  return out;
}

// Factors of a flattened n-ary node: a node of that kind, or the object itself.
size_t factor_count(const Obj& a, ObjKind kind) { return a->kind == kind ? a->parts.size() : 1; }

std::vector<Idx> factor_idx(const Obj& a, ObjKind kind, const Idx& i) {
  if (a->kind == kind) return i.kids;
  return {i};
}

Idx from_factor_idx(const Obj& a, ObjKind kind, std::vector<Idx> kids) {
  if (a->kind == kind) return Idx{0, {}, std::move(kids)};
  return kids.at(0);
}

// Split the summand index of ⊗groups / &groups into per-group indices.
std::vector<Idx> split_groups(ObjKind kind, const Obj& whole, const std::vector<Obj>& groups,
                              const Idx& i) {
  std::vector<Idx> flat = factor_idx(whole, kind, i);
  std::vector<Idx> out;
  size_t pos = 0;
  for (const auto& g : groups) {
    size_t k = factor_count(g, kind);
    if (pos + k > flat.size()) throw IndexMismatch("summand index does not match object");
    std::vector<Idx> slice(flat.begin() + pos, flat.begin() + pos + k);
    out.push_back(from_factor_idx(g, kind, std::move(slice)));
    pos += k;
  }
  return out;
}

Idx join_groups(ObjKind kind, const Obj& whole, const std::vector<Obj>& groups,
                const std::vector<Idx>& idxs) {
  std::vector<Idx> flat;
  for (size_t g = 0; g < groups.size(); ++g) {
    auto f = factor_idx(groups[g], kind, idxs[g]);
    flat.insert(flat.end(), f.begin(), f.end());
  }
  return from_factor_idx(whole, kind, std::move(flat));
}

// ⊕: flat alternative of (part, index in part) and back.
Idx plus_inject(const std::vector<Obj>& parts, const Obj& whole, int i, const Idx& inner) {
  int offset = 0;
  for (int k = 0; k < i; ++k) offset += static_cast<int>(factor_count(parts[k], ObjKind::Plus));
  int alt = offset;
  Idx leaf = inner;
  if (parts[i]->kind == ObjKind::Plus) {
    alt += inner.tag;
    leaf = inner.kids.at(0);
  }
  if (whole->kind != ObjKind::Plus) return leaf;
  return Idx{alt, {}, {leaf}};
}

std::pair<int, Idx> plus_locate(const std::vector<Obj>& parts, const Obj& whole, const Idx& i) {
  int alt = 0;
  Idx leaf = i;
  if (whole->kind == ObjKind::Plus) {
    alt = i.tag;
    leaf = i.kids.at(0);
  }
  for (int k = 0; k < static_cast<int>(parts.size()); ++k) {
    int n = static_cast<int>(factor_count(parts[k], ObjKind::Plus));
    if (alt < n) {
      if (parts[k]->kind == ObjKind::Plus) return {k, Idx{alt, {}, {leaf}}};
      return {k, leaf};
    }
    alt -= n;
  }
  throw IndexMismatch("alternative out of range");
}

HomShape choice_shape(const Idx& choice, int r, int s) {
  HomShape sh;
  sh.cod = s;
  sh.target.assign(choice.data.begin(), choice.data.begin() + r);
  sh.rank.assign(choice.data.begin() + r, choice.data.end());
  return sh;
}

Idx shape_choice(int x, const HomShape& sh) {
  Idx c;
  c.tag = x;
  c.data = sh.target;
  c.data.insert(c.data.end(), sh.rank.begin(), sh.rank.end());
  return c;
}

int lin_ordinal(const Obj& a, const Idx& u) {
  const auto& ord = a->lin_domain->ordinal;
  auto it = ord.find(u);
  if (it == ord.end()) throw IndexMismatch("unknown summand of a linear domain: " + format_idx(u));
  return it->second;
}

std::vector<Idx> product(const std::vector<std::vector<Idx>>& lists, size_t limit) {
  std::vector<Idx> out{Idx{}};
  for (const auto& l : lists) {
    std::vector<Idx> next;
    for (const auto& p : out) {
      for (const auto& e : l) {
        Idx q = p;
        q.kids.push_back(e);
        next.push_back(std::move(q));
        if (next.size() > limit) throw IndexMismatch("too many summands");
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Obj obj_base(int n) {
  if (n == 0) return obj_unit();
  return make(ObjKind::Base, {}, n);
}

Obj obj_unit() {
  static const Obj u = make(ObjKind::Tensor, {});
  return u;
}

Obj obj_top() {
  static const Obj t = make(ObjKind::With, {});
  return t;
}

Obj obj_zero() {
  static const Obj z = make(ObjKind::Plus, {});
  return z;
}

Obj obj_tensor(const std::vector<Obj>& parts) {
  auto flat = flatten(ObjKind::Tensor, parts);
  if (flat.size() == 1) return flat[0];
  if (flat.empty()) return obj_unit();
  return make(ObjKind::Tensor, std::move(flat));
}

Obj obj_with(const std::vector<Obj>& parts) {
  auto flat = flatten(ObjKind::With, parts);
  if (flat.size() == 1) return flat[0];
  if (flat.empty()) return obj_top();
  return make(ObjKind::With, std::move(flat));
}

Obj obj_plus(const std::vector<Obj>& parts) {
  auto flat = flatten(ObjKind::Plus, parts);
  if (flat.size() == 1) return flat[0];
  if (flat.empty()) return obj_zero();
  return make(ObjKind::Plus, std::move(flat));
}

Obj obj_lin(const Obj& a, const Obj& b) {
  auto n = std::make_shared<ObjNode>();
  n->kind = ObjKind::Lin;
  n->parts = {a, b};
  auto dom = std::make_shared<LinDomain>();
  dom->summands = summands(a);
  for (size_t k = 0; k < dom->summands.size(); ++k) dom->ordinal[dom->summands[k]] = static_cast<int>(k);
  n->lin_domain = dom;
  return n;
}

Obj hom_obj_oplus(int r, int s) {
  std::vector<Obj> parts;
  for (const auto& sh : hom_shapes(r, s)) parts.push_back(obj_base(hom_registers(sh)));
  return obj_plus(parts);
}

bool obj_equal(const Obj& a, const Obj& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->regs != b->regs || a->parts.size() != b->parts.size()) return false;
  for (size_t k = 0; k < a->parts.size(); ++k)
    if (!obj_equal(a->parts[k], b->parts[k])) return false;
  return true;
}

std::string format_obj(const Obj& a) {
  auto join = [&](const char* sep, const char* empty) {
    if (a->parts.empty()) return std::string(empty);
    std::string out = "(";
    for (size_t k = 0; k < a->parts.size(); ++k) out += (k ? sep : "") + format_obj(a->parts[k]);
    return out + ")";
  };
  switch (a->kind) {
    case ObjKind::Base: return "i" + std::to_string(a->regs);
    case ObjKind::Tensor: return join(" * ", "1");
    case ObjKind::With: return join(" & ", "T");
    case ObjKind::Plus: return join(" + ", "0");
    case ObjKind::Lin: return "(" + format_obj(a->parts[0]) + " -o " + format_obj(a->parts[1]) + ")";
  }
  return "?";
}

std::vector<int> component_registers(const Obj& a, const Idx& i) {
  switch (a->kind) {
    case ObjKind::Base:
      return {a->regs};
    case ObjKind::Tensor: {
      if (i.kids.size() != a->parts.size()) throw IndexMismatch("tensor summand arity");
      std::vector<int> out{0};
      for (size_t k = 0; k < a->parts.size(); ++k) {
        auto f = component_registers(a->parts[k], i.kids[k]);
        std::vector<int> next;
        next.reserve(out.size() * f.size());
        for (int p : out)
          for (int q : f) next.push_back(p + q);
        out = std::move(next);
      }
      return out;
    }
    case ObjKind::With: {
      if (i.kids.size() != a->parts.size()) throw IndexMismatch("with summand arity");
      std::vector<int> out;
      for (size_t k = 0; k < a->parts.size(); ++k) {
        auto f = component_registers(a->parts[k], i.kids[k]);
        out.insert(out.end(), f.begin(), f.end());
      }
      return out;
    }
    case ObjKind::Plus:
      if (i.tag < 0 || i.tag >= static_cast<int>(a->parts.size()) || i.kids.size() != 1)
        throw IndexMismatch("plus summand " + format_idx(i));
      return component_registers(a->parts[i.tag], i.kids[0]);
    case ObjKind::Lin: {
      const Obj& da = a->parts[0];
      const Obj& cb = a->parts[1];
      const auto& us = a->lin_domain->summands;
      if (i.kids.size() != us.size()) throw IndexMismatch("linear summand arity");
      std::vector<int> out;
      for (size_t u = 0; u < us.size(); ++u) {
        const Idx& entry = i.kids[u];
        auto sy = component_registers(cb, entry.kids.at(0));
        auto rx = component_registers(da, us[u]);
        if (entry.kids.size() != sy.size() + 1) throw IndexMismatch("linear summand components");
        for (size_t y = 0; y < sy.size(); ++y) {
          const Idx& c = entry.kids[y + 1];
          int r = rx.at(c.tag);
          int d = 0;
          for (int k = 0; k < r; ++k) d += c.data.at(k) >= 0;
          out.push_back(sy[y] + d);
        }
      }
      return out;
    }
  }
  return {};
}

int component_count(const Obj& a, const Idx& i) {
  switch (a->kind) {
    case ObjKind::Base: return 1;
    case ObjKind::Tensor: {
      int n = 1;
      for (size_t k = 0; k < a->parts.size(); ++k) n *= component_count(a->parts[k], i.kids.at(k));
      return n;
    }
    case ObjKind::With: {
      int n = 0;
      for (size_t k = 0; k < a->parts.size(); ++k) n += component_count(a->parts[k], i.kids.at(k));
      return n;
    }
    case ObjKind::Plus: return component_count(a->parts.at(i.tag), i.kids.at(0));
    case ObjKind::Lin: {
      int n = 0;
      for (const auto& e : i.kids) n += component_count(a->parts[1], e.kids.at(0));
      return n;
    }
  }
  return 0;
}

std::vector<Idx> summands(const Obj& a, size_t limit) {
  switch (a->kind) {
    case ObjKind::Base: return {Idx{}};
    case ObjKind::Tensor:
    case ObjKind::With: {
      std::vector<std::vector<Idx>> lists;
      for (const auto& p : a->parts) lists.push_back(summands(p, limit));
      return product(lists, limit);
    }
    case ObjKind::Plus: {
      std::vector<Idx> out;
      for (size_t k = 0; k < a->parts.size(); ++k) {
        for (auto& s : summands(a->parts[k], limit)) {
          out.push_back(Idx{static_cast<int>(k), {}, {std::move(s)}});
          if (out.size() > limit) throw IndexMismatch("too many summands");
        }
      }
      return out;
    }
    case ObjKind::Lin: {
      const Obj& da = a->parts[0];
      const Obj& cb = a->parts[1];
      auto vs = summands(cb, limit);
      std::vector<std::vector<Idx>> per_u;
      for (const auto& u : a->lin_domain->summands) {
        auto rx = component_registers(da, u);
        std::vector<Idx> options;
        for (const auto& v : vs) {
          auto sy = component_registers(cb, v);
          std::vector<std::vector<Idx>> choices;
          for (int s : sy) {
            std::vector<Idx> cy;
            for (size_t x = 0; x < rx.size(); ++x)
              for (const auto& sh : hom_shapes(rx[x], s)) cy.push_back(shape_choice(static_cast<int>(x), sh));
            choices.push_back(std::move(cy));
          }
          for (auto& p : product(choices, limit)) {
            p.kids.insert(p.kids.begin(), v);
            options.push_back(std::move(p));
            if (options.size() > limit) throw IndexMismatch("too many summands");
          }
        }
        per_u.push_back(std::move(options));
      }
      return product(per_u, limit);
    }
  }
  return {};
}

bool valid_summand(const Obj& a, const Idx& i) {
  switch (a->kind) {
    case ObjKind::Base: return i == Idx{};
    case ObjKind::Tensor:
    case ObjKind::With:
      if (i.tag != 0 || !i.data.empty() || i.kids.size() != a->parts.size()) return false;
      for (size_t k = 0; k < a->parts.size(); ++k)
        if (!valid_summand(a->parts[k], i.kids[k])) return false;
      return true;
    case ObjKind::Plus:
      return i.tag >= 0 && i.tag < static_cast<int>(a->parts.size()) && i.data.empty() &&
             i.kids.size() == 1 && valid_summand(a->parts[i.tag], i.kids[0]);
    case ObjKind::Lin: {
      const auto& us = a->lin_domain->summands;
      if (i.tag != 0 || !i.data.empty() || i.kids.size() != us.size()) return false;
      for (size_t u = 0; u < us.size(); ++u) {
        const Idx& e = i.kids[u];
        if (e.kids.empty() || !valid_summand(a->parts[1], e.kids[0])) return false;
        auto sy = component_registers(a->parts[1], e.kids[0]);
        auto rx = component_registers(a->parts[0], us[u]);
        if (e.kids.size() != sy.size() + 1) return false;
        for (size_t y = 0; y < sy.size(); ++y) {
          const Idx& c = e.kids[y + 1];
          if (c.tag < 0 || c.tag >= static_cast<int>(rx.size())) return false;
          int r = rx[c.tag];
          if (static_cast<int>(c.data.size()) != 2 * r || !c.kids.empty()) return false;
          auto shapes = hom_shapes(r, sy[y]);
          if (!std::binary_search(shapes.begin(), shapes.end(), choice_shape(c, r, sy[y]))) return false;
        }
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Morphisms

std::pair<Idx, Idx> split_tensor(const Obj& a, const Obj& b, const Idx& i) {
  auto parts = split_groups(ObjKind::Tensor, obj_tensor({a, b}), {a, b}, i);
  return {parts[0], parts[1]};
}

Idx join_tensor(const Obj& a, const Obj& b, const Idx& ia, const Idx& ib) {
  return join_groups(ObjKind::Tensor, obj_tensor({a, b}), {a, b}, {ia, ib});
}

Mor mor_id(const Obj& a) {
  return Mor{a, a, [a](const Idx& i) {
               MorAt out{i, {}};
               auto regs = component_registers(a, i);
               for (size_t x = 0; x < regs.size(); ++x)
                 out.comps.push_back({static_cast<int>(x), identity_rt(regs[x])});
               return out;
             }};
}

Mor mor_compose(const Mor& f, const Mor& g) {
  if (!obj_equal(f.cod, g.dom))
    throw DomainMismatch("compose " + format_obj(f.cod) + " with " + format_obj(g.dom));
  auto fa = f.at;
  auto ga = g.at;
  return Mor{f.dom, g.cod, [fa, ga](const Idx& u) {
               MorAt m = fa(u);
               MorAt n = ga(m.cod);
               MorAt out{n.cod, {}};
               out.comps.reserve(n.comps.size());
               for (auto& [y, rt] : n.comps) {
                 const auto& [x, first] = m.comps.at(y);
                 out.comps.push_back({x, compose_rt(first, rt)});
               }
               return out;
             }};
}

Mor mor_compose(const std::vector<Mor>& chain) {
  Mor out = chain.at(0);
  for (size_t k = 1; k < chain.size(); ++k) out = mor_compose(out, chain[k]);
  return out;
}

Mor mor_tensor(const std::vector<Mor>& fs) {
  std::vector<Obj> doms, cods;
  for (const auto& f : fs) {
    doms.push_back(f.dom);
    cods.push_back(f.cod);
  }
  Obj dom = obj_tensor(doms);
  Obj cod = obj_tensor(cods);
  return Mor{dom, cod, [fs, doms, cods, dom, cod](const Idx& i) {
               auto parts = split_groups(ObjKind::Tensor, dom, doms, i);
               size_t n = fs.size();
               std::vector<MorAt> ats(n);
               std::vector<Idx> cod_idx(n);
               std::vector<int> ndom(n);
               for (size_t k = 0; k < n; ++k) {
                 ats[k] = fs[k].at(parts[k]);
                 cod_idx[k] = ats[k].cod;
                 ndom[k] = component_count(doms[k], parts[k]);
               }
               MorAt out{join_groups(ObjKind::Tensor, cod, cods, cod_idx), {}};
               size_t total = 1;
               for (const auto& a : ats) total *= a.comps.size();
               out.comps.reserve(total);
               std::vector<size_t> digit(n, 0);
               for (size_t c = 0; c < total; ++c) {
                 int x = 0;
                 RT rt;
                 for (size_t k = 0; k < n; ++k) {
                   const auto& [xk, rk] = ats[k].comps[digit[k]];
                   x = x * ndom[k] + xk;
                   rt = k == 0 ? rk : tensor_rt(rt, rk);
                 }
                 out.comps.push_back({x, std::move(rt)});
                 for (size_t k = n; k-- > 0;) {
                   if (++digit[k] < ats[k].comps.size()) break;
                   digit[k] = 0;
                 }
               }
               return out;
             }};
}

Mor mor_tensor(const Mor& f, const Mor& g) { return mor_tensor(std::vector<Mor>{f, g}); }

Mor mor_permute(const std::vector<Obj>& groups, const std::vector<int>& perm) {
  std::vector<Obj> permuted;
  for (int p : perm) permuted.push_back(groups.at(p));
  Obj dom = obj_tensor(groups);
  Obj cod = obj_tensor(permuted);
  return Mor{dom, cod, [groups, perm, permuted, dom, cod](const Idx& i) {
               auto parts = split_groups(ObjKind::Tensor, dom, groups, i);
               size_t n = groups.size();
               std::vector<std::vector<int>> regs(n);
               for (size_t k = 0; k < n; ++k) regs[k] = component_registers(groups[k], parts[k]);
               std::vector<Idx> cod_idx;
               for (int p : perm) cod_idx.push_back(parts[p]);
               MorAt out{join_groups(ObjKind::Tensor, cod, permuted, cod_idx), {}};
               size_t total = 1;
               for (const auto& r : regs) total *= r.size();
               std::vector<size_t> digit(n, 0);  // per cod position
               for (size_t c = 0; c < total; ++c) {
                 std::vector<size_t> dom_digit(n);
                 for (size_t j = 0; j < n; ++j) dom_digit[perm[j]] = digit[j];
                 int x = 0;
                 std::vector<int> offset(n);
                 int reg_total = 0;
                 for (size_t k = 0; k < n; ++k) {
                   x = x * static_cast<int>(regs[k].size()) + static_cast<int>(dom_digit[k]);
                   offset[k] = reg_total;
                   reg_total += regs[k][dom_digit[k]];
                 }
                 RT rt;
                 rt.dom = reg_total;
                 for (size_t j = 0; j < n; ++j) {
                   int g = perm[j];
                   for (int r = 0; r < regs[g][dom_digit[g]]; ++r) rt.assign.push_back({Sym::reg(offset[g] + r)});
                 }
                 out.comps.push_back({x, std::move(rt)});
                 for (size_t k = n; k-- > 0;) {
                   if (++digit[k] < regs[perm[k]].size()) break;
                   digit[k] = 0;
                 }
               }
               return out;
             }};
}

Mor mor_pair(const Obj& dom, const std::vector<Mor>& fs) {
  std::vector<Obj> cods;
  for (const auto& f : fs) {
    if (!obj_equal(f.dom, dom)) throw DomainMismatch("pair components with different domains");
    cods.push_back(f.cod);
  }
  Obj cod = obj_with(cods);
  return Mor{dom, cod, [fs, cods, cod](const Idx& i) {
               MorAt out;
               std::vector<Idx> idxs;
               for (const auto& f : fs) {
                 MorAt m = f.at(i);
                 idxs.push_back(m.cod);
                 for (auto& c : m.comps) out.comps.push_back(std::move(c));
               }
               out.cod = join_groups(ObjKind::With, cod, cods, idxs);
               return out;
             }};
}

Mor mor_proj(const std::vector<Obj>& parts, int i) {
  Obj dom = obj_with(parts);
  return Mor{dom, parts.at(i), [parts, i, dom](const Idx& idx) {
               auto split = split_groups(ObjKind::With, dom, parts, idx);
               int offset = 0;
               for (int k = 0; k < i; ++k) offset += component_count(parts[k], split[k]);
               MorAt out{split[i], {}};
               auto regs = component_registers(parts[i], split[i]);
               for (size_t y = 0; y < regs.size(); ++y)
                 out.comps.push_back({offset + static_cast<int>(y), identity_rt(regs[y])});
               return out;
             }};
}

Mor mor_inj(const std::vector<Obj>& parts, int i) {
  Obj cod = obj_plus(parts);
  Obj part = parts.at(i);
  return Mor{part, cod, [parts, i, cod, part](const Idx& idx) {
               MorAt out = mor_id(part).at(idx);
               out.cod = plus_inject(parts, cod, i, idx);
               return out;
             }};
}

Mor mor_copair(const std::vector<Obj>& parts, const std::vector<Mor>& fs, const Obj& cod) {
  Obj dom = obj_plus(parts);
  for (size_t k = 0; k < fs.size(); ++k)
    if (!obj_equal(fs[k].cod, cod) || !obj_equal(fs[k].dom, parts[k]))
      throw DomainMismatch("copair component of the wrong type");
  return Mor{dom, cod, [parts, fs, dom](const Idx& idx) {
               auto [k, inner] = plus_locate(parts, dom, idx);
               return fs[k].at(inner);
             }};
}

Mor mor_case(const Obj& ctx, const std::vector<Obj>& parts, const std::vector<Mor>& fs, const Obj& cod) {
  Obj sum = obj_plus(parts);
  Obj dom = obj_tensor({ctx, sum});
  for (size_t k = 0; k < fs.size(); ++k)
    if (!obj_equal(fs[k].cod, cod) || !obj_equal(fs[k].dom, obj_tensor({ctx, parts[k]})))
      throw DomainMismatch("case branch of the wrong type");
  return Mor{dom, cod, [ctx, parts, fs, sum](const Idx& idx) {
               auto [c, s] = split_tensor(ctx, sum, idx);
               auto [k, inner] = plus_locate(parts, sum, s);
               return fs[k].at(join_tensor(ctx, parts[k], c, inner));
             }};
}

Mor mor_to_top(const Obj& a) {
  return Mor{a, obj_top(), [](const Idx&) { return MorAt{Idx{}, {}}; }};
}

Mor mor_discard(const Obj& a) {
  return Mor{a, obj_unit(), [a](const Idx& i) {
               auto regs = component_registers(a, i);
               if (regs.empty()) throw IndexMismatch("cannot discard a summand without components");
               return MorAt{Idx{}, {{0, terminal_rt(regs[0])}}};
             }};
}

Mor mor_from_empty(const Obj& a, const Obj& b) {
  return Mor{a, b, [](const Idx& i) -> MorAt {
               throw IndexMismatch("morphism out of an empty object applied to " + format_idx(i));
             }};
}

Mor mor_point(const RT& constant) {
  if (constant.dom != 0) throw DomainMismatch("point from a nonempty register set");
  return mor_embed(constant);
}

Mor mor_embed(const RT& t) {
  return Mor{obj_base(t.dom), obj_base(t.cod()), [t](const Idx&) { return MorAt{Idx{}, {{0, t}}}; }};
}

Mor curry(const Mor& f, const Obj& c, const Obj& a) {
  Obj ca = obj_tensor({c, a});
  if (!obj_equal(f.dom, ca)) throw DomainMismatch("curry: domain is not " + format_obj(ca));
  Obj lin = obj_lin(a, f.cod);
  auto fa = f.at;
  return Mor{c, lin, [fa, c, a, lin](const Idx& ci) {
               const auto& us = lin->lin_domain->summands;
               auto tz = component_registers(c, ci);
               MorAt out;
               out.cod.kids.reserve(us.size());
               for (const auto& u : us) {
                 int na = component_count(a, u);
                 MorAt m = fa(join_tensor(c, a, ci, u));
                 Idx entry;
                 entry.kids.push_back(m.cod);
                 for (auto& [k, rt] : m.comps) {
                   int z = k / na;
                   int x = k % na;
                   Curried cu = curry_sr(rt, tz.at(z));
                   entry.kids.push_back(shape_choice(x, cu.shape));
                   out.comps.push_back({z, std::move(cu.h)});
                 }
                 out.cod.kids.push_back(std::move(entry));
               }
               return out;
             }};
}

Mor eval(const Obj& a, const Obj& b) {
  Obj lin = obj_lin(a, b);
  Obj dom = obj_tensor({lin, a});
  return Mor{dom, b, [a, b, lin](const Idx& i) {
               auto [phi, u] = split_tensor(lin, a, i);
               int ord = lin_ordinal(lin, u);
               int offset = 0;
               for (int k = 0; k < ord; ++k) offset += component_count(b, phi.kids.at(k).kids.at(0));
               const Idx& entry = phi.kids.at(ord);
               auto rx = component_registers(a, u);
               int na = static_cast<int>(rx.size());
               auto sy = component_registers(b, entry.kids.at(0));
               MorAt out{entry.kids[0], {}};
               for (size_t y = 0; y < sy.size(); ++y) {
                 const Idx& c = entry.kids.at(y + 1);
                 HomShape sh = choice_shape(c, rx.at(c.tag), sy[y]);
                 out.comps.push_back({(offset + static_cast<int>(y)) * na + c.tag, eval_sr(sh)});
               }
               return out;
             }};
}

Mor uncurry(const Mor& g) {
  if (g.cod->kind != ObjKind::Lin) throw DomainMismatch("uncurry: codomain is not an internal hom");
  const Obj& a = g.cod->parts[0];
  const Obj& b = g.cod->parts[1];
  Mor ev = eval(a, b);
  return mor_compose(mor_tensor(g, mor_id(a)), ev);
}

Mor memoize(const Mor& f) {
  struct Cache {
    std::mutex mu;
    std::map<Idx, MorAt> table;
  };
  auto cache = std::make_shared<Cache>();
  auto fa = f.at;
  return Mor{f.dom, f.cod, [cache, fa](const Idx& i) {
               {
                 std::lock_guard<std::mutex> lock(cache->mu);
                 auto it = cache->table.find(i);
                 if (it != cache->table.end()) return it->second;
               }
               MorAt m = fa(i);
               std::lock_guard<std::mutex> lock(cache->mu);
               cache->table.emplace(i, m);
               return m;
             }};
}

bool mor_equal(const Mor& f, const Mor& g, size_t limit) {
  if (!obj_equal(f.dom, g.dom) || !obj_equal(f.cod, g.cod)) return false;
  for (const auto& i : summands(f.dom, limit))
    if (!(f.at(i) == g.at(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// (†) and (♥)

MorAt dagger_forward(const std::vector<Obj>& d, int i, const MorAt& g) {
  MorAt out = g;
  out.cod = plus_inject(d, obj_plus(d), i, g.cod);
  return out;
}

std::pair<int, MorAt> dagger_backward(const std::vector<Obj>& d, const MorAt& f) {
  auto [i, inner] = plus_locate(d, obj_plus(d), f.cod);
  MorAt out = f;
  out.cod = inner;
  return {i, out};
}

HeartPart heart_forward(const Obj& cod, const MorAt& f) {
  if (f.comps.size() != 1) throw IndexMismatch("(♥) expects a single codomain component");
  return HeartPart{f.comps[0].first, cod->kind == ObjKind::Plus ? f.cod.tag : 0, f.comps[0].second};
}

MorAt heart_backward(const Obj& cod, const HeartPart& p) {
  MorAt out;
  out.cod = cod->kind == ObjKind::Plus ? Idx{p.u, {}, {Idx{}}} : Idx{};
  out.comps = {{p.x, p.map}};
  return out;
}

// ---------------------------------------------------------------------------
// Internal monoids

Mor name_of(const Mor& f) { return curry(f, obj_unit(), f.dom); }

Mor appto(const Mor& phi, const Obj& c) {
  Obj b = phi.cod;
  return mor_compose(mor_tensor(mor_id(obj_lin(b, c)), phi), eval(b, c));
}

Mor internal_compose(const Obj& a, const Obj& b, const Obj& c) {
  Obj ab = obj_lin(a, b);
  Obj bc = obj_lin(b, c);
  // (φ, ψ, a) ↦ (ψ, φ, a) ↦ (ψ, φ a) ↦ ψ (φ a)
  Mor swap = mor_permute({ab, bc, a}, {1, 0, 2});
  Mor inner = mor_tensor(mor_id(bc), eval(a, b));
  Mor body = mor_compose({swap, inner, eval(b, c)});
  return memoize(curry(body, obj_tensor({ab, bc}), a));
}

EndoMonoid endo_monoid(const Obj& a) {
  EndoMonoid out;
  out.carrier = obj_lin(a, a);
  out.mu = internal_compose(a, a, a);
  out.eta = curry(mor_id(a), obj_unit(), a);
  return out;
}

EndoMonoid with_unit_monoid(const EndoMonoid& m) {
  Obj one = obj_unit();
  Obj mw = obj_with({m.carrier, one});
  std::vector<Obj> parts{m.carrier, one};
  Mor p1 = mor_proj(parts, 0);
  Mor p2 = mor_proj(parts, 1);
  Mor first = mor_compose(mor_tensor(p1, p1), m.mu);
  Mor second = mor_tensor(p2, p2);
  EndoMonoid out;
  out.carrier = mw;
  out.mu = memoize(mor_pair(obj_tensor({mw, mw}), {first, second}));
  out.eta = mor_pair(one, {m.eta, mor_id(one)});
  return out;
}

}  // namespace lsst
