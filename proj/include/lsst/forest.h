#ifndef LSST_FOREST_H
#define LSST_FOREST_H

// Transformation forests over Sr and the uniformization of nondeterministic
// machines. A forest's edge u → v carries an element of ι(C_u) ⊸ ι(C_v);
// the forest's type Ty(F) is the tensor of these over the edges, ordered by
// child vertex. Prune, contract and canonicalize are Sr_⊕& morphisms
// between forest types, so a deterministic state (F, summand of Ty(F)) can
// be advanced by evaluating them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsst/closure.h"
#include "lsst/streaming.h"

namespace lsst {

struct Forest {
  std::vector<int> parent;  // -1 for roots
  std::vector<int> label;
  std::vector<int> regs;    // C_v, a register count
  std::vector<bool> output;

  int size() const { return static_cast<int>(parent.size()); }
  int add(int parent_vertex, int label_value, int registers, bool is_output);
  std::vector<int> children(int v) const;
  // Child vertices of the edges, in edge order.
  std::vector<int> edges() const;
  bool operator==(const Forest&) const = default;
};

struct ForestMap {
  Forest forest;
  Mor map;                 // Ty(F) → Ty(F′)
  std::vector<int> image;  // vertex of F ↦ vertex of F′, -1 when removed
};

Obj edge_type(const Forest& f, int v);
Obj forest_type(const Forest& f);
// Ty(F) → ι(C_root) ⊸ ι(C_o), composing the slots along the path to o.
Mor forest_semantics(const Forest& f, int o);
// Root of the tree containing v.
int forest_root(const Forest& f, int v);

bool prunable(const Forest& f, int v);
bool contractible(const Forest& f, int v);
ForestMap prune(const Forest& f, int v);
ForestMap contract(const Forest& f, int v);

enum class ForestStrategy { Leftmost, Rightmost };
bool is_normal(const Forest& f);
ForestMap normalize_forest(const Forest& f, ForestStrategy strategy = ForestStrategy::Leftmost);
// Reorders vertices into preorder with siblings sorted by subtree shape.
ForestMap canonicalize(const Forest& f);
std::string forest_key(const Forest& f);

// Glues each root of g onto the output of f with the same label. The map is
// Ty(f) ⊗ Ty(g) → Ty(result). Throws LabelMismatch.
ForestMap compose_forests(const Forest& f, const Forest& g);

std::string forest_dot(const Forest& f, const std::vector<std::string>* state_names = nullptr);

// ---------------------------------------------------------------------------
// Uniformization

struct Uniformized {
  SdmSst<SrCat> machine;
  std::vector<Forest> forests;  // per state
  std::vector<Idx> summands;    // per state, in Ty(forest)
};

// The uniformized machine, explored on demand. State 0 is initial.
class Uniformizer {
 public:
  explicit Uniformizer(NdSdmSst<SrCat> m, size_t max_states = 1000000);

  const RT& init() const { return init_; }
  int letters() const { return m_.letters; }
  size_t size() const { return states_.size(); }
  int registers(int s) const { return states_.at(s).registers; }
  const Forest& forest(int s) const { return states_.at(s).forest; }
  const Idx& summand(int s) const { return states_.at(s).summand; }

  // Throw IndexMismatch when a new state would pass the limit.
  const std::pair<int, RT>& step(int s, int a);
  const std::optional<RT>& output(int s);
  std::optional<RT> run(const std::vector<int>& w);
  // Explores every reachable state.
  Uniformized materialize();

 private:
  struct State {
    Forest forest;
    Idx summand;
    int registers = 0;
    bool expanded = false;
    std::vector<std::pair<int, RT>> delta;
    std::optional<RT> output;
  };

  int intern(const Forest& f, const Idx& i);
  const ForestMap& forest_step(const Forest& f, int a);
  void expand(int s);

  NdSdmSst<SrCat> m_;
  size_t max_states_;
  RT init_;
  std::vector<State> states_;
  std::map<std::pair<std::string, Idx>, int> index_;
  std::map<std::pair<std::string, int>, ForestMap> steps_;
};

// A partial deterministic machine whose output, where defined, is one of the
// outputs of m; it is defined exactly where m has an accepting run.
Uniformized uniformize_detailed(const NdSdmSst<SrCat>& m, size_t max_states = 1000000);
SdmSst<SrCat> uniformize(const NdSdmSst<SrCat>& m, size_t max_states = 1000000);

// Encodes an &-memory machine as a nondeterministic one on (state,
// component) pairs, keeping only components that can reach an output.
NdSdmSst<SrCat> with_to_nd(const SdmSst<WithCat<SrCat>>& m);
SdmSst<SrCat> collapse_with(const SdmSst<WithCat<SrCat>>& m, size_t max_states = 1000000);

// A nondeterministic copyless SST over a shared register set.
struct NdSstMachine {
  std::vector<std::string> states;
  std::vector<std::string> registers;
  Word alphabet_in;
  Word alphabet_out;
  std::vector<std::pair<int, RT>> initial;                    // (q, i_q)
  std::vector<std::vector<std::vector<SstTransition>>> delta;  // [q][letter] choices
  std::vector<std::optional<RT>> output;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_registers() const { return static_cast<int>(registers.size()); }
};

std::vector<std::string> validate_nd_sst(const NdSstMachine& m);
NdSdmSst<SrCat> nd_sst_as_sdm(const NdSstMachine& m);
// Every output of an accepting run, sorted and without repeats.
std::vector<Word> run_nd_sst(const NdSstMachine& m, const Word& w);
// A deterministic copyless machine defined exactly where m has an accepting
// run, with one of m's outputs there.
SstMachine determinize(const NdSstMachine& m, size_t max_states = 1000000);

}  // namespace lsst

#endif  // LSST_FOREST_H
