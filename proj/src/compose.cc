#include "lsst/compose.h"

#include <deque>
#include <map>

namespace lsst {

SrSetting sr_setting(const SstMachine& f) {
  int n = f.num_registers();
  std::vector<Obj> parts(f.num_states(), obj_base(n));
  Obj a = obj_plus(parts);
  SrSetting out;
  out.memory = a;

  EndoMonoid endo = endo_monoid(a);
  EndoMonoid lifted = with_unit_monoid(endo);
  std::vector<Obj> with_parts{endo.carrier, obj_unit()};
  MonoidSetting<OplusWithSr>& s = out.monoid;
  s.carrier = lifted.carrier;
  s.mu = lifted.mu;
  s.eta = lifted.eta;
  s.discard = mor_proj(with_parts, 1);
  s.letters = f.alphabet_in;
  for (size_t k = 0; k < f.alphabet_in.size(); ++k) {
    std::vector<Mor> fs;
    for (int q = 0; q < f.num_states(); ++q) {
      const SstTransition& t = f.delta[q][k];
      fs.push_back(mor_compose(mor_embed(t.update), mor_inj(parts, t.next)));
    }
    Mor step = mor_copair(parts, fs, a);
    s.points.push_back(memoize(mor_pair(obj_unit(), {name_of(step), mor_id(obj_unit())})));
  }
  Mor init = mor_compose(mor_embed(f.init), mor_inj(parts, f.initial));
  s.apply = mor_compose(mor_proj(with_parts, 0), appto(init, a));

  std::vector<Obj> result{obj_base(1), obj_top()};
  std::vector<Mor> outs;
  for (int q = 0; q < f.num_states(); ++q) {
    if (f.output[q])
      outs.push_back(mor_compose(mor_embed(*f.output[q]), mor_inj(result, 0)));
    else
      outs.push_back(mor_compose(mor_to_top(obj_base(n)), mor_inj(result, 1)));
  }
  out.output = mor_copair(parts, outs, obj_plus(result));
  return out;
}

SdmSst<WithCat<SrCat>> lower_to_with(const GenSst<OplusWithSr>& m, size_t max_states) {
  using W = WithCat<SrCat>;
  SdmSst<W> out;
  out.letters = m.letters;
  std::map<std::pair<int, Idx>, int> index;
  std::vector<std::pair<int, Idx>> states;
  std::deque<int> queue;
  auto intern = [&](int q, const Idx& u) {
    auto key = std::make_pair(q, u);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(states.size());
    if (static_cast<size_t>(id) >= max_states) throw IndexMismatch("too many reachable memory summands");
    index.emplace(key, id);
    states.push_back(key);
    queue.push_back(id);
    return id;
  };
  MorAt init = m.init.at(Idx{});
  out.initial = intern(m.initial, init.cod);
  out.init = W::Mor{{0}, component_registers(m.memory, init.cod), init.comps};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    auto [q, u] = states[s];
    auto regs = component_registers(m.memory, u);
    std::vector<std::pair<int, W::Mor>> row;
    for (int a = 0; a < m.letters; ++a) {
      const auto& [next, f] = m.delta[q][a];
      MorAt at = f.at(u);
      int t = intern(next, at.cod);
      row.push_back({t, W::Mor{regs, component_registers(m.memory, at.cod), std::move(at.comps)}});
    }
    out.memory.resize(states.size());
    out.delta.resize(states.size());
    out.output.resize(states.size());
    out.memory[s] = regs;
    out.delta[s] = std::move(row);
    if (m.output[q]) {
      MorAt o = m.output[q]->at(u);
      if (!o.comps.empty()) out.output[s] = W::Mor{regs, {1}, std::move(o.comps)};
    }
  }
  out.memory.resize(states.size());
  out.delta.resize(states.size());
  out.output.resize(states.size());
  return out;
}

SstMachine lower_to_sst(const GenSst<OplusWithSr>& m, const Word& alphabet_in, const Word& alphabet_out,
                        size_t max_states) {
  return pad_registers(collapse_with(lower_to_with(m, max_states), max_states), alphabet_in, alphabet_out);
}

LazyComposition::LazyComposition(const SstMachine& f, const SstMachine& g, size_t max_states)
    : in_(g.alphabet_in), out_(f.alphabet_out) {
  for (char32_t c : g.alphabet_out)
    if (f.alphabet_in.find(c) == Word::npos)
      throw DomainMismatch("output letter '" + to_utf8(c) + "' is not an input letter of the outer machine");
  SrSetting s = sr_setting(f);
  GenSst<OplusWithSr> pre = precompose(s.monoid, s.output, g);
  SdmSst<WithCat<SrCat>> w = lower_to_with(pre, max_states);
  NdSdmSst<SrCat> nd = with_to_nd(w);
  with_states_ = w.memory.size();
  nd_states_ = nd.memory.size();
  u_ = std::make_unique<Uniformizer>(std::move(nd), max_states);
}

std::optional<Word> LazyComposition::run(const Word& w) {
  auto r = u_->run(letter_indices(in_, w));
  if (!r) return std::nullopt;
  return interpret_sr(*r);
}

SstMachine LazyComposition::materialize(ComposeStats* stats) {
  SstMachine out = pad_registers(u_->materialize().machine, in_, out_);
  if (stats) {
    stats->with_states = with_states_;
    stats->nd_states = nd_states_;
    stats->result_states = out.num_states();
    stats->result_registers = out.num_registers();
  }
  return out;
}

SstMachine compose_copyless(const SstMachine& f, const SstMachine& g, ComposeStats* stats, size_t max_states) {
  return LazyComposition(f, g, max_states).materialize(stats);
}

// ---------------------------------------------------------------------------
// DFAs

bool Dfa::accepts(const Word& w) const {
  int q = initial;
  for (char32_t c : w) {
    auto k = alphabet.find(c);
    if (k == Word::npos) throw DomainMismatch("letter '" + to_utf8(c) + "' not in the automaton's alphabet");
    q = delta[k][q];
  }
  return accepting[q];
}

namespace {

// Endofunctions of [n] numbered with f(0) as the most significant digit.
int function_count(int n) {
  int m = 1;
  for (int k = 0; k < n; ++k) m *= n;
  return m;
}

std::vector<int> decode_function(int code, int n) {
  std::vector<int> f(n);
  for (int k = n; k-- > 0;) {
    f[k] = code % n;
    code /= n;
  }
  return f;
}

int encode_function(const std::vector<int>& f) {
  int n = static_cast<int>(f.size());
  int code = 0;
  for (int x : f) code = code * n + x;
  return code;
}

}  // namespace

MonoidSetting<FinSetCat> dfa_setting(const Dfa& d) {
  int n = d.states;
  int m = function_count(n);
  MonoidSetting<FinSetCat> s;
  s.carrier = m;
  s.mu = FinSetCat::Mor{m * m, m, {}};
  for (int p = 0; p < m; ++p) {
    auto phi = decode_function(p, n);
    for (int r = 0; r < m; ++r) {
      auto psi = decode_function(r, n);
      std::vector<int> h(n);
      for (int x = 0; x < n; ++x) h[x] = psi[phi[x]];
      s.mu.map.push_back(encode_function(h));
    }
  }
  std::vector<int> id(n);
  for (int x = 0; x < n; ++x) id[x] = x;
  s.eta = FinSetCat::Mor{1, m, {encode_function(id)}};
  s.discard = FinSetCat::terminal(m);
  s.letters = d.alphabet;
  for (size_t k = 0; k < d.alphabet.size(); ++k) s.points.push_back(FinSetCat::Mor{1, m, {encode_function(d.delta[k])}});
  s.apply = FinSetCat::Mor{m, n, {}};
  for (int p = 0; p < m; ++p) s.apply.map.push_back(decode_function(p, n)[d.initial]);
  return s;
}

FinSetCat::Mor dfa_output(const Dfa& d) {
  FinSetCat::Mor o{d.states, 2, {}};
  for (int q = 0; q < d.states; ++q) o.map.push_back(d.accepting[q] ? 1 : 0);
  return o;
}

std::optional<bool> preimage_accepts(const GenSst<FinSetCat>& m, const SstMachine& g, const Word& w) {
  auto r = run_gen_sst(m, letter_indices(g.alphabet_in, w));
  if (!r) return std::nullopt;
  return r->map.at(0) == 1;
}

}  // namespace lsst
