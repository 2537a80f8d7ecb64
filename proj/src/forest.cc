#include "lsst/forest.h"

#include <algorithm>
#include <deque>
#include <map>

#include "lsst/error.h"

namespace lsst {

int Forest::add(int parent_vertex, int label_value, int registers, bool is_output) {
  parent.push_back(parent_vertex);
  label.push_back(label_value);
  regs.push_back(registers);
  output.push_back(is_output);
  return size() - 1;
}

std::vector<int> Forest::children(int v) const {
  std::vector<int> out;
  for (int c = 0; c < size(); ++c)
    if (parent[c] == v) out.push_back(c);
  return out;
}

std::vector<int> Forest::edges() const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v)
    if (parent[v] >= 0) out.push_back(v);
  return out;
}

Obj edge_type(const Forest& f, int v) { return obj_lin(obj_base(f.regs[f.parent[v]]), obj_base(f.regs[v])); }

Obj forest_type(const Forest& f) {
  std::vector<Obj> parts;
  for (int v : f.edges()) parts.push_back(edge_type(f, v));
  return obj_tensor(parts);
}

int forest_root(const Forest& f, int v) {
  while (f.parent[v] >= 0) v = f.parent[v];
  return v;
}

namespace {

int edge_position(const Forest& f, int v) {
  int pos = 0;
  for (int u = 0; u < v; ++u) pos += f.parent[u] >= 0;
  return pos;
}

std::vector<Obj> edge_types(const Forest& f) {
  std::vector<Obj> out;
  for (int v : f.edges()) out.push_back(edge_type(f, v));
  return out;
}

// Ty(f) → ⊗ pieces, where each new edge is an old edge (one source) or the
// composite of two consecutive old edges (two sources); dropped edges are
// discarded.
Mor edge_map(const Forest& f, const std::vector<std::vector<int>>& sources, const std::vector<int>& dropped) {
  std::vector<int> edges = f.edges();
  std::vector<Obj> lins = edge_types(f);
  std::vector<int> order;
  std::vector<Mor> pieces;
  for (const auto& src : sources) {
    order.insert(order.end(), src.begin(), src.end());
    if (src.size() == 1) {
      pieces.push_back(mor_id(lins[src[0]]));
    } else {
      int v = edges[src[0]];
      int c = edges[src[1]];
      pieces.push_back(internal_compose(obj_base(f.regs[f.parent[v]]), obj_base(f.regs[v]), obj_base(f.regs[c])));
    }
  }
  for (int d : dropped) {
    order.push_back(d);
    pieces.push_back(mor_discard(lins[d]));
  }
  return mor_compose(mor_permute(lins, order), mor_tensor(pieces));
}

Forest remove_vertex(const Forest& f, int v) {
  Forest out;
  for (int u = 0; u < f.size(); ++u) {
    if (u == v) continue;
    int p = f.parent[u];
    if (p == v) throw IndexMismatch("removing a vertex with children");
    out.add(p > v ? p - 1 : p, f.label[u], f.regs[u], f.output[u]);
  }
  return out;
}

std::vector<int> removal_image(int n, int v) {
  std::vector<int> out(n);
  for (int u = 0; u < n; ++u) out[u] = u < v ? u : u == v ? -1 : u - 1;
  return out;
}

std::vector<int> identity_image(int n) {
  std::vector<int> out(n);
  for (int u = 0; u < n; ++u) out[u] = u;
  return out;
}

std::string subtree_shape(const Forest& f, int v, const std::vector<std::vector<int>>& kids,
                          std::vector<std::string>& memo) {
  std::vector<std::string> parts;
  for (int c : kids[v]) parts.push_back(subtree_shape(f, c, kids, memo));
  std::sort(parts.begin(), parts.end());
  std::string s = "(" + std::to_string(f.label[v]) + ":" + std::to_string(f.regs[v]) + (f.output[v] ? "*" : "");
  for (const auto& p : parts) s += p;
  s += ")";
  memo[v] = s;
  return s;
}

}  // namespace

Mor forest_semantics(const Forest& f, int o) {
  std::vector<int> path;
  for (int v = o; f.parent[v] >= 0; v = f.parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  int root = forest_root(f, o);
  std::vector<Obj> lins = edge_types(f);
  std::vector<int> order;
  std::vector<Mor> pieces;
  std::vector<bool> on_path(lins.size(), false);
  for (int v : path) {
    int pos = edge_position(f, v);
    on_path[pos] = true;
    order.push_back(pos);
    pieces.push_back(mor_id(lins[pos]));
  }
  for (size_t k = 0; k < lins.size(); ++k) {
    if (on_path[k]) continue;
    order.push_back(static_cast<int>(k));
    pieces.push_back(mor_discard(lins[k]));
  }
  Mor cur = mor_compose(mor_permute(lins, order), mor_tensor(pieces));
  Obj c0 = obj_base(f.regs[root]);
  if (path.empty()) return mor_compose(cur, name_of(mor_id(c0)));
  for (size_t j = 1; j < path.size(); ++j) {
    std::vector<Mor> step{internal_compose(c0, obj_base(f.regs[path[j - 1]]), obj_base(f.regs[path[j]]))};
    for (size_t k = j + 1; k < path.size(); ++k) step.push_back(mor_id(edge_type(f, path[k])));
    cur = mor_compose(cur, mor_tensor(step));
  }
  return cur;
}

bool prunable(const Forest& f, int v) { return !f.output[v] && f.children(v).empty(); }

bool contractible(const Forest& f, int v) {
  return !f.output[v] && f.parent[v] >= 0 && f.children(v).size() == 1;
}

ForestMap prune(const Forest& f, int v) {
  if (v < 0 || v >= f.size() || !prunable(f, v)) throw NotPrunable("vertex " + std::to_string(v));
  Forest g = remove_vertex(f, v);
  std::vector<std::vector<int>> sources;
  std::vector<int> dropped;
  for (int u : f.edges()) {
    if (u == v)
      dropped.push_back(edge_position(f, u));
    else
      sources.push_back({edge_position(f, u)});
  }
  return {g, edge_map(f, sources, dropped), removal_image(f.size(), v)};
}

ForestMap contract(const Forest& f, int v) {
  if (v < 0 || v >= f.size() || !contractible(f, v)) throw NotContractible("vertex " + std::to_string(v));
  int c = f.children(v)[0];
  Forest h = f;
  h.parent[c] = f.parent[v];
  h.parent[v] = -1;
  Forest g = remove_vertex(h, v);
  std::vector<std::vector<int>> sources;
  for (int u : f.edges()) {
    if (u == v) continue;
    if (u == c)
      sources.push_back({edge_position(f, v), edge_position(f, c)});
    else
      sources.push_back({edge_position(f, u)});
  }
  return {g, edge_map(f, sources, {}), removal_image(f.size(), v)};
}

bool is_normal(const Forest& f) {
  for (int v = 0; v < f.size(); ++v)
    if (prunable(f, v) || contractible(f, v)) return false;
  return true;
}

ForestMap normalize_forest(const Forest& f, ForestStrategy strategy) {
  ForestMap cur{f, mor_id(forest_type(f)), identity_image(f.size())};
  while (true) {
    int pick = -1;
    for (int v = 0; v < cur.forest.size(); ++v) {
      if (prunable(cur.forest, v) || contractible(cur.forest, v)) {
        pick = v;
        if (strategy == ForestStrategy::Leftmost) break;
      }
    }
    if (pick < 0) return cur;
    ForestMap step = prunable(cur.forest, pick) ? prune(cur.forest, pick) : contract(cur.forest, pick);
    for (int& v : cur.image)
      if (v >= 0) v = step.image[v];
    cur = {step.forest, mor_compose(cur.map, step.map), cur.image};
  }
}

ForestMap canonicalize(const Forest& f) {
  int n = f.size();
  std::vector<std::vector<int>> kids(n);
  std::vector<int> roots;
  for (int v = 0; v < n; ++v) {
    if (f.parent[v] >= 0)
      kids[f.parent[v]].push_back(v);
    else
      roots.push_back(v);
  }
  std::vector<std::string> shape(n);
  for (int r : roots) subtree_shape(f, r, kids, shape);
  auto by_shape = [&](int a, int b) { return shape[a] < shape[b]; };
  std::vector<int> order;
  std::function<void(int)> visit = [&](int v) {
    order.push_back(v);
    std::stable_sort(kids[v].begin(), kids[v].end(), by_shape);
    for (int c : kids[v]) visit(c);
  };
  std::stable_sort(roots.begin(), roots.end(), by_shape);
  for (int r : roots) visit(r);
  std::vector<int> new_index(n);
  for (int k = 0; k < n; ++k) new_index[order[k]] = k;
  Forest g;
  std::vector<int> edge_order;
  for (int v : order) {
    int p = f.parent[v];
    g.add(p >= 0 ? new_index[p] : -1, f.label[v], f.regs[v], f.output[v]);
    if (p >= 0) edge_order.push_back(edge_position(f, v));
  }
  return {g, mor_permute(edge_types(f), edge_order), new_index};
}

std::string forest_key(const Forest& f) {
  std::string s;
  for (int v = 0; v < f.size(); ++v) {
    s += std::to_string(f.parent[v]) + "," + std::to_string(f.label[v]) + "," + std::to_string(f.regs[v]) +
         (f.output[v] ? "*" : "") + ";";
  }
  return s;
}

ForestMap compose_forests(const Forest& f, const Forest& g) {
  Forest out = f;
  for (int v = 0; v < out.size(); ++v) out.output[v] = false;
  std::vector<int> place(g.size(), -1);
  for (int r = 0; r < g.size(); ++r) {
    if (g.parent[r] >= 0) continue;
    int found = -1;
    for (int v = 0; v < f.size(); ++v) {
      if (!f.output[v] || f.label[v] != g.label[r]) continue;
      if (found >= 0) throw LabelMismatch("several outputs labelled " + std::to_string(g.label[r]));
      found = v;
    }
    if (found < 0) throw LabelMismatch("no output labelled " + std::to_string(g.label[r]));
    if (f.regs[found] != g.regs[r]) throw LabelMismatch("register counts differ at label " + std::to_string(g.label[r]));
    place[r] = found;
    out.output[found] = g.output[r];
  }
  for (int v = 0; v < g.size(); ++v) {
    if (g.parent[v] < 0) continue;
    if (place[g.parent[v]] < 0) throw IndexMismatch("forest vertices are not in parent-first order");
    place[v] = out.add(place[g.parent[v]], g.label[v], g.regs[v], g.output[v]);
  }
  Obj dom = obj_tensor({forest_type(f), forest_type(g)});
  Mor map = mor_id(dom);
  map.cod = forest_type(out);
  return {out, map, identity_image(f.size())};
}

std::string forest_dot(const Forest& f, const std::vector<std::string>* state_names) {
  std::string s = "digraph forest {\n";
  for (int v = 0; v < f.size(); ++v) {
    std::string name = f.label[v] < 0 ? "root"
                       : state_names && f.label[v] < static_cast<int>(state_names->size())
                           ? (*state_names)[f.label[v]]
                           : std::to_string(f.label[v]);
    s += "  v" + std::to_string(v) + " [label=\"" + name + " /" + std::to_string(f.regs[v]) + "\"" +
         (f.output[v] ? ", shape=doublecircle" : "") + "];\n";
  }
  for (int v : f.edges()) s += "  v" + std::to_string(f.parent[v]) + " -> v" + std::to_string(v) + ";\n";
  return s + "}\n";
}

// ---------------------------------------------------------------------------
// Uniformization

namespace {

// ⪯ on candidate transitions: source state, then the printed update.
using TieKey = std::pair<int, std::string>;

ForestMap finish(const Forest& f, const Mor& map) {
  ForestMap n = normalize_forest(f);
  ForestMap c = canonicalize(n.forest);
  std::vector<int> image = n.image;
  for (int& v : image)
    if (v >= 0) v = c.image[v];
  return {c.forest, mor_compose({map, n.map, c.map}), image};
}

}  // namespace

Uniformizer::Uniformizer(NdSdmSst<SrCat> m, size_t max_states) : m_(std::move(m)), max_states_(max_states) {
  // initial forest: a register-free root with one edge per initial state
  std::map<int, std::pair<std::string, RT>> init_pick;
  for (const auto& [q, i] : m_.initial) {
    std::string key = format_rt(i);
    auto it = init_pick.find(q);
    if (it == init_pick.end() || key < it->second.first) init_pick[q] = {key, i};
  }
  Forest f0;
  f0.add(-1, -1, 0, false);
  std::vector<Mor> names;
  for (const auto& [q, pick] : init_pick) {
    f0.add(0, q, m_.memory[q], true);
    names.push_back(name_of(mor_embed(pick.second)));
  }
  ForestMap start = finish(f0, mor_tensor(names));
  MorAt at = start.map.at(Idx{});
  init_ = at.comps.at(0).second;
  intern(start.forest, at.cod);
}

int Uniformizer::intern(const Forest& f, const Idx& i) {
  auto key = std::make_pair(forest_key(f), i);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(states_.size());
  if (static_cast<size_t>(id) >= max_states_) throw IndexMismatch("uniformization exceeds the state limit");
  index_.emplace(std::move(key), id);
  State st;
  st.forest = f;
  st.summand = i;
  st.registers = component_registers(forest_type(f), i).at(0);
  states_.push_back(std::move(st));
  return id;
}

const ForestMap& Uniformizer::forest_step(const Forest& f, int a) {
  auto key = std::make_pair(forest_key(f), a);
  auto it = steps_.find(key);
  if (it != steps_.end()) return it->second;
  std::map<int, int> leaf_of;  // ND state → output vertex
  for (int v = 0; v < f.size(); ++v)
    if (f.output[v]) leaf_of[f.label[v]] = v;
  std::map<int, std::pair<TieKey, RT>> pick;
  for (const auto& t : m_.delta[a]) {
    if (!leaf_of.count(t.from)) continue;
    TieKey k{t.from, format_rt(t.update)};
    auto p = pick.find(t.to);
    if (p == pick.end() || k < p->second.first) pick[t.to] = {k, t.update};
  }
  Forest g = f;
  for (int v = 0; v < g.size(); ++v) g.output[v] = false;
  std::vector<Mor> parts{mor_id(forest_type(f))};
  for (const auto& [to, choice] : pick) {
    g.add(leaf_of[choice.first.first], to, m_.memory[to], true);
    parts.push_back(name_of(mor_embed(choice.second)));
  }
  ForestMap r = finish(g, mor_tensor(parts));
  return steps_.emplace(std::move(key), std::move(r)).first->second;
}

void Uniformizer::expand(int s) {
  if (states_[s].expanded) return;
  std::vector<std::pair<int, RT>> row;
  for (int a = 0; a < m_.letters; ++a) {
    const ForestMap& st = forest_step(states_[s].forest, a);
    MorAt at = st.map.at(states_[s].summand);
    int next = intern(st.forest, at.cod);
    row.push_back({next, at.comps.at(0).second});
  }
  // output: the least ND state among the outputs with a defined output
  const Forest& f = states_[s].forest;
  std::optional<RT> out;
  int best = -1;
  for (int v = 0; v < f.size(); ++v)
    if (f.output[v] && m_.output[f.label[v]] && (best < 0 || f.label[v] < f.label[best])) best = v;
  if (best >= 0) {
    Mor o = mor_compose(uncurry(forest_semantics(f, best)), mor_embed(*m_.output[f.label[best]]));
    out = o.at(states_[s].summand).comps.at(0).second;
  }
  states_[s].delta = std::move(row);
  states_[s].output = std::move(out);
  states_[s].expanded = true;
}

const std::pair<int, RT>& Uniformizer::step(int s, int a) {
  expand(s);
  return states_[s].delta.at(a);
}

const std::optional<RT>& Uniformizer::output(int s) {
  expand(s);
  return states_[s].output;
}

std::optional<RT> Uniformizer::run(const std::vector<int>& w) {
  RT acc = init_;
  int q = 0;
  for (int a : w) {
    const auto& [next, t] = step(q, a);
    acc = compose_rt(acc, t);
    q = next;
  }
  const auto& o = output(q);
  if (!o) return std::nullopt;
  return compose_rt(acc, *o);
}

Uniformized Uniformizer::materialize() {
  for (size_t s = 0; s < states_.size(); ++s) expand(static_cast<int>(s));
  Uniformized out;
  SdmSst<SrCat>& u = out.machine;
  u.letters = m_.letters;
  u.initial = 0;
  u.init = init_;
  for (const State& st : states_) {
    u.memory.push_back(st.registers);
    u.delta.push_back(st.delta);
    u.output.push_back(st.output);
    out.forests.push_back(st.forest);
    out.summands.push_back(st.summand);
  }
  return out;
}

Uniformized uniformize_detailed(const NdSdmSst<SrCat>& m, size_t max_states) {
  return Uniformizer(m, max_states).materialize();
}

SdmSst<SrCat> uniformize(const NdSdmSst<SrCat>& m, size_t max_states) {
  return uniformize_detailed(m, max_states).machine;
}

NdSdmSst<SrCat> with_to_nd(const SdmSst<WithCat<SrCat>>& m) {
  int n = m.states();
  // live[q][x]: component x of state q flows into some output
  std::vector<std::vector<bool>> live(n);
  for (int q = 0; q < n; ++q) {
    live[q].assign(m.memory[q].size(), false);
    if (m.output[q]) live[q][m.output[q]->at.at(0).first] = true;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int q = 0; q < n; ++q) {
      for (int a = 0; a < m.letters; ++a) {
        const auto& [next, f] = m.delta[q][a];
        for (size_t y = 0; y < f.at.size(); ++y) {
          int x = f.at[y].first;
          if (live[next][y] && !live[q][x]) live[q][x] = changed = true;
        }
      }
    }
  }
  std::vector<std::vector<int>> id(n);
  NdSdmSst<SrCat> nd;
  nd.letters = m.letters;
  for (int q = 0; q < n; ++q) {
    id[q].assign(m.memory[q].size(), -1);
    for (size_t x = 0; x < m.memory[q].size(); ++x) {
      if (!live[q][x]) continue;
      id[q][x] = nd.states();
      nd.memory.push_back(m.memory[q][x]);
      bool out = m.output[q] && m.output[q]->at.at(0).first == static_cast<int>(x);
      nd.output.push_back(out ? std::optional<RT>(m.output[q]->at[0].second) : std::nullopt);
    }
  }
  for (size_t y = 0; y < m.init.at.size(); ++y)
    if (id[m.initial][y] >= 0) nd.initial.push_back({id[m.initial][y], m.init.at[y].second});
  nd.delta.resize(m.letters);
  for (int q = 0; q < n; ++q) {
    for (int a = 0; a < m.letters; ++a) {
      const auto& [next, f] = m.delta[q][a];
      for (size_t y = 0; y < f.at.size(); ++y) {
        int from = id[q][f.at[y].first];
        int to = id[next][y];
        if (from >= 0 && to >= 0) nd.delta[a].push_back({from, to, f.at[y].second});
      }
    }
  }
  return nd;
}

SdmSst<SrCat> collapse_with(const SdmSst<WithCat<SrCat>>& m, size_t max_states) {
  return uniformize(with_to_nd(m), max_states);
}

std::vector<std::string> validate_nd_sst(const NdSstMachine& m) {
  std::vector<std::string> problems;
  int n = m.num_registers();
  auto check = [&](const RT& t, int dom, int cod, const std::string& at) {
    if (t.dom != dom || t.cod() != cod) {
      problems.push_back(at + ": wrong register counts");
      return;
    }
    if (!check_copyless(t)) problems.push_back(at + ": not copyless");
    for (const auto& w : t.assign)
      for (const auto& s : w)
        if (!s.is_reg() && m.alphabet_out.find(s.value) == Word::npos)
          problems.push_back(at + ": letter '" + to_utf8(s.value) + "' not in output alphabet");
  };
  if (m.states.empty()) problems.push_back("machine has no states");
  for (const auto& [q, t] : m.initial) {
    if (q < 0 || q >= m.num_states()) problems.push_back("initial state out of range");
    check(t, 0, n, "init");
  }
  if (static_cast<int>(m.delta.size()) != m.num_states())
    problems.push_back("transition table has wrong number of states");
  for (int q = 0; q < static_cast<int>(m.delta.size()); ++q) {
    if (m.delta[q].size() != m.alphabet_in.size()) {
      problems.push_back("state " + m.states[q] + ": one row of choices per letter expected");
      continue;
    }
    for (size_t k = 0; k < m.delta[q].size(); ++k)
      for (const auto& tr : m.delta[q][k]) {
        std::string at = "state " + m.states[q] + " on '" + to_utf8(m.alphabet_in[k]) + "'";
        if (tr.next < 0 || tr.next >= m.num_states()) problems.push_back(at + ": target out of range");
        check(tr.update, n, n, at);
      }
  }
  if (static_cast<int>(m.output.size()) != m.num_states())
    problems.push_back("output table has wrong number of states");
  for (int q = 0; q < static_cast<int>(m.output.size()); ++q)
    if (m.output[q]) check(*m.output[q], n, 1, "state " + m.states[q] + " output");
  return problems;
}

NdSdmSst<SrCat> nd_sst_as_sdm(const NdSstMachine& m) {
  NdSdmSst<SrCat> nd;
  nd.memory.assign(m.num_states(), m.num_registers());
  nd.letters = static_cast<int>(m.alphabet_in.size());
  nd.initial = m.initial;
  nd.delta.resize(nd.letters);
  for (int q = 0; q < m.num_states(); ++q)
    for (int a = 0; a < nd.letters; ++a)
      for (const auto& tr : m.delta[q][a]) nd.delta[a].push_back({q, tr.next, tr.update});
  nd.output = m.output;
  return nd;
}

std::vector<Word> run_nd_sst(const NdSstMachine& m, const Word& w) {
  std::vector<Word> out;
  for (const RT& f : run_nd_sdm(nd_sst_as_sdm(m), letter_indices(m.alphabet_in, w)))
    out.push_back(interpret_sr(f));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SstMachine determinize(const NdSstMachine& m, size_t max_states) {
  return pad_registers(uniformize(nd_sst_as_sdm(m), max_states), m.alphabet_in, m.alphabet_out);
}

}  // namespace lsst
