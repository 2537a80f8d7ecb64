// Command-line front end: sst run|compose|determinize|validate,
// lam typecheck|normalize|run|compile, brtt run|check.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "lsst/brtt.h"
#include "lsst/compile.h"
#include "lsst/compose.h"
#include "lsst/error.h"
#include "lsst/forest.h"
#include "lsst/io.h"

using namespace lsst;
using nlohmann::json;

namespace {

struct Options {
  bool json_out = false;
  long fuel = kDefaultFuel;
  unsigned seed = 1;
  int verify = 0;
  size_t max_states = 200000;
  std::string out;
  std::string dot;
  std::string expect;
};

// Successful results: printed as text lines, or as {"ok": true, ...}.
struct Report {
  json fields = json::object();
  std::vector<std::string> lines;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("IOError", "cannot write " + path);
  f << text;
}

// A machine file is written to -o, or printed when there is none.
void emit_machine(const Options& o, Report& r, const std::string& text) {
  if (!o.out.empty()) {
    write_file(o.out, text);
    r.fields["written"] = o.out;
    r.lines.push_back("wrote " + o.out);
  } else {
    r.fields["machine"] = json::parse(text);
    r.lines.push_back(text.substr(0, text.size() - 1));
  }
}

void fail_validation(const std::vector<std::string>& problems) {
  std::string msg;
  for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
  throw ValidationError(msg);
}

// Output alphabet of a term file as a word, without eps.
Word string_letters(const RankedAlphabet& a) {
  Word w;
  for (int i = 0; i < a.size(); ++i) {
    if (a.rank(i) == 0) continue;
    if (a.rank(i) != 1) throw NotAStringTree("alphabet " + format_ranked_alphabet(a) + " is not a string alphabet");
    w += to_u32(a.letters[i]);
  }
  return w;
}

bool is_string_alphabet(const RankedAlphabet& a) {
  for (int i = 0; i < a.size(); ++i)
    if (a.rank(i) > 1 || (a.rank(i) == 0 && a.letters[i] != kEndLetter)) return false;
  return true;
}

TermFile load_term(const std::string& path) {
  TermFile f = load_term_file(path);
  if (!f.sigma || !f.gamma) throw ParseError(path + ": the header must give sigma and gamma");
  return f;
}

Word random_word(std::mt19937& rng, const Word& alphabet, int max_len) {
  Word w;
  for (int n = static_cast<int>(rng() % (max_len + 1)); n > 0 && !alphabet.empty(); --n)
    w += alphabet[rng() % alphabet.size()];
  return w;
}

std::string show(const std::optional<Word>& w) { return w ? to_utf8(*w) : "<undefined>"; }

// ---------------------------------------------------------------------------

Report sst_run(const Options&, const std::string& file, const std::vector<std::string>& words) {
  std::string text = read_file(file);
  Report r;
  r.fields["outputs"] = json::array();
  if (machine_kind(text) == "nd-sst") {
    NdSstMachine m = nd_sst_from_json(text);
    if (auto p = validate_nd_sst(m); !p.empty()) fail_validation(p);
    for (const auto& s : words) {
      std::vector<std::string> outs;
      for (const Word& w : run_nd_sst(m, parse_cli_word(s))) outs.push_back(to_utf8(w));
      r.fields["outputs"].push_back(outs);
      std::string line;
      for (const auto& o : outs) line += (line.empty() ? "" : " ") + ("\"" + o + "\"");
      r.lines.push_back(outs.empty() ? "<undefined>" : line);
    }
    return r;
  }
  SstMachine m = sst_from_json(text);
  if (auto p = validate_sst(m); !p.empty()) fail_validation(p);
  for (const auto& s : words) {
    Word out = run_sst(m, parse_cli_word(s));
    r.fields["outputs"].push_back(to_utf8(out));
    r.lines.push_back(to_utf8(out));
  }
  return r;
}

Report sst_validate(const Options& o, const std::string& file) {
  std::string text = read_file(file);
  std::string kind = machine_kind(text);
  std::vector<std::string> problems;
  Report r;
  if (kind == "nd-sst") {
    problems = validate_nd_sst(nd_sst_from_json(text));
  } else {
    SstMachine m = sst_from_json(text);
    problems = validate_sst(m);
    if (!o.dot.empty()) write_file(o.dot, sst_dot(m));
  }
  if (!problems.empty()) fail_validation(problems);
  r.fields["kind"] = kind;
  r.lines.push_back("ok: valid copyless " + kind);
  return r;
}

Report sst_compose(const Options& o, const std::string& f_file, const std::string& g_file) {
  SstMachine f = sst_from_json(read_file(f_file));
  SstMachine g = sst_from_json(read_file(g_file));
  for (const auto* m : {&f, &g})
    if (auto p = validate_sst(*m); !p.empty()) fail_validation(p);
  ComposeStats stats;
  SstMachine fg = compose_copyless(f, g, &stats, o.max_states);
  if (auto p = validate_sst(fg); !p.empty()) fail_validation(p);
  Report r;
  r.fields["states"] = fg.num_states();
  r.fields["registers"] = fg.num_registers();
  std::optional<SstMachine> reference;
  if (!o.expect.empty()) reference = sst_from_json(read_file(o.expect));
  std::mt19937 rng(o.seed);
  for (int k = 0; k < o.verify; ++k) {
    Word w = random_word(rng, g.alphabet_in, 12);
    std::optional<Word> expect;
    if (auto mid = run_sst_partial(g, w)) expect = run_sst_partial(f, *mid);
    std::optional<Word> got = run_sst_partial(fg, w);
    if (got != expect)
      throw ValidationError("composition disagrees on '" + to_utf8(w) + "': " + show(got) + " vs " + show(expect));
    if (reference && got != run_sst_partial(*reference, w))
      throw ValidationError("composition differs from " + o.expect + " on '" + to_utf8(w) + "'");
  }
  if (o.verify) r.lines.push_back("verified on " + std::to_string(o.verify) + " words");
  if (!o.dot.empty()) write_file(o.dot, sst_dot(fg));
  emit_machine(o, r, sst_to_json(fg));
  return r;
}

Report sst_determinize(const Options& o, const std::string& file) {
  NdSstMachine m = nd_sst_from_json(read_file(file));
  if (auto p = validate_nd_sst(m); !p.empty()) fail_validation(p);
  Uniformized u = uniformize_detailed(nd_sst_as_sdm(m), o.max_states);
  SstMachine d = pad_registers(u.machine, m.alphabet_in, m.alphabet_out);
  if (auto p = validate_sst(d); !p.empty()) fail_validation(p);
  Report r;
  r.fields["states"] = d.num_states();
  std::mt19937 rng(o.seed);
  for (int k = 0; k < o.verify; ++k) {
    Word w = random_word(rng, m.alphabet_in, 8);
    auto all = run_nd_sst(m, w);
    auto got = run_sst_partial(d, w);
    bool ok = got ? std::find(all.begin(), all.end(), *got) != all.end() : all.empty();
    if (!ok) throw ValidationError("determinized machine disagrees on '" + to_utf8(w) + "'");
  }
  if (o.verify) r.lines.push_back("verified on " + std::to_string(o.verify) + " words");
  if (!o.dot.empty()) {
    std::string s = sst_dot(d);
    for (size_t q = 0; q < u.forests.size(); ++q) {
      std::string g = forest_dot(u.forests[q], &m.states);
      s += "// forest of " + d.states[q] + "\n" + g;
    }
    write_file(o.dot, s);
  }
  emit_machine(o, r, sst_to_json(d));
  return r;
}

Report lam_typecheck(const Options&, const std::string& file) {
  TermFile f = load_term_file(file);
  Type t = typecheck(f.term, {}, f.type ? *f.type : nullptr);
  Report r;
  r.fields["type"] = format_type(t);
  r.lines.push_back(format_type(t));
  return r;
}

Report lam_normalize(const Options& o, const std::string& file) {
  TermFile f = load_term_file(file);
  typecheck(f.term, {}, f.type ? *f.type : nullptr);
  NormalizeStats stats;
  Term n = normalize(f.term, o.fuel, Strategy::Leftmost, &stats);
  Report r;
  r.fields["normal_form"] = format_term(n);
  r.fields["beta_steps"] = stats.beta_steps;
  r.fields["extrusion_steps"] = stats.extrusion_steps;
  r.lines.push_back(format_term(n));
  return r;
}

Report lam_run(const Options& o, const std::string& file, const std::vector<std::string>& inputs) {
  TermFile f = load_term(file);
  if (f.kappa) check_definable_type(f.term, *f.kappa, *f.sigma, *f.gamma);
  Report r;
  r.fields["outputs"] = json::array();
  for (const auto& s : inputs) {
    Tree in = is_string_alphabet(*f.sigma) ? string_as_tree(parse_cli_word(s)) : parse_tree(s);
    check_tree(in, *f.sigma);
    Tree out = apply_definable(f.term, in, *f.sigma, *f.gamma, o.fuel);
    std::string shown = is_string_alphabet(*f.gamma) ? to_utf8(tree_as_string(out)) : format_tree(out);
    r.fields["outputs"].push_back(shown);
    r.lines.push_back(shown);
  }
  return r;
}

Report lam_compile(const Options& o, const std::string& file, const std::string& kappa_text) {
  TermFile f = load_term(file);
  Type kappa = !kappa_text.empty() ? parse_type(kappa_text) : f.kappa ? *f.kappa : nullptr;
  if (!kappa) throw ParseError("no kappa: pass --kappa or add a '-- kappa:' header");
  Word sigma = string_letters(*f.sigma);
  Word gamma = string_letters(*f.gamma);
  SstMachine m = compile_string_term(f.term, kappa, sigma, gamma, o.fuel, o.max_states);
  if (auto p = validate_sst(m); !p.empty()) fail_validation(p);
  Report r;
  r.fields["states"] = m.num_states();
  r.fields["registers"] = m.num_registers();
  std::mt19937 rng(o.seed);
  for (int k = 0; k < o.verify; ++k) {
    Word w = random_word(rng, sigma, 10);
    Word expect = tree_as_string(apply_definable(f.term, string_as_tree(w), *f.sigma, *f.gamma, o.fuel));
    if (run_sst(m, w) != expect) throw ValidationError("compiled machine disagrees on '" + to_utf8(w) + "'");
  }
  if (o.verify) r.lines.push_back("verified on " + std::to_string(o.verify) + " words");
  if (!o.dot.empty()) write_file(o.dot, sst_dot(m));
  emit_machine(o, r, sst_to_json(m));
  return r;
}

Report brtt_run(const Options&, const std::string& file, const std::vector<std::string>& trees) {
  SurBrtt m = brtt_from_json(read_file(file));
  if (auto p = validate_brtt(m); !p.empty()) fail_validation(p);
  Report r;
  r.fields["outputs"] = json::array();
  for (const auto& s : trees) {
    Tree out = run_brtt(m, parse_tree(s));
    std::string shown = is_string_alphabet(m.output) ? to_utf8(tree_as_string(out)) : format_tree(out);
    r.fields["outputs"].push_back(shown);
    r.lines.push_back(shown);
  }
  return r;
}

Report brtt_check(const Options&, const std::string& file) {
  SurBrtt m = brtt_from_json(read_file(file));
  auto problems = validate_brtt(m);
  if (!problems.empty()) fail_validation(problems);
  bool copyless = check_copyless_brtt(m);
  Report r;
  r.fields["single_use"] = true;
  r.fields["copyless"] = copyless;
  r.lines.push_back("single-use-restricted: yes");
  r.lines.push_back(std::string("copyless: ") + (copyless ? "yes" : "no"));
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Copyless streaming transducers, linear λ-terms and tree transducers"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json_out, "Machine-readable results and diagnostics");
  app.add_option("--fuel", o.fuel, "Reduction step budget");
  app.add_option("--seed", o.seed, "Seed for --verify words");
  app.add_option("--max-states", o.max_states, "State limit for compose, determinize and compile");

  std::string file, file2, kappa;
  std::vector<std::string> inputs;
  std::function<Report()> action;

  CLI::App* sst = app.add_subcommand("sst", "Copyless SSTs in JSON files");
  sst->require_subcommand(1);
  CLI::App* run = sst->add_subcommand("run", "Run a machine on words ('|' spells ‖)");
  run->add_option("file", file)->required();
  run->add_option("words", inputs)->required();
  run->callback([&] { action = [&] { return sst_run(o, file, inputs); }; });
  CLI::App* val = sst->add_subcommand("validate", "Check well-formedness and copylessness");
  val->add_option("file", file)->required();
  val->add_option("--dot", o.dot, "Write the machine as Graphviz");
  val->callback([&] { action = [&] { return sst_validate(o, file); }; });
  CLI::App* comp = sst->add_subcommand("compose", "f ∘ g: run g, then f");
  comp->add_option("f", file)->required();
  comp->add_option("g", file2)->required();
  comp->add_option("-o,--output", o.out, "Machine file to write");
  comp->add_option("--verify", o.verify, "Check against running both machines on N random words");
  comp->add_option("--expect", o.expect, "With --verify, also compare against this machine");
  comp->add_option("--dot", o.dot, "Write the machine as Graphviz");
  comp->callback([&] { action = [&] { return sst_compose(o, file, file2); }; });
  CLI::App* det = sst->add_subcommand("determinize", "Uniformize a nondeterministic machine");
  det->add_option("file", file)->required();
  det->add_option("-o,--output", o.out, "Machine file to write");
  det->add_option("--verify", o.verify, "Check membership on N random words");
  det->add_option("--dot", o.dot, "Write the machine and its state forests as Graphviz");
  det->callback([&] { action = [&] { return sst_determinize(o, file); }; });

  CLI::App* lam = app.add_subcommand("lam", "λ-term files");
  lam->require_subcommand(1);
  CLI::App* tc = lam->add_subcommand("typecheck", "Print the type");
  tc->add_option("file", file)->required();
  tc->callback([&] { action = [&] { return lam_typecheck(o, file); }; });
  CLI::App* nf = lam->add_subcommand("normalize", "Print the normal form");
  nf->add_option("file", file)->required();
  nf->callback([&] { action = [&] { return lam_normalize(o, file); }; });
  CLI::App* lrun = lam->add_subcommand("run", "Apply to encoded inputs and decode");
  lrun->add_option("file", file)->required();
  lrun->add_option("inputs", inputs)->required();
  lrun->callback([&] { action = [&] { return lam_run(o, file, inputs); }; });
  CLI::App* lc = lam->add_subcommand("compile", "Compile a string term to a copyless SST");
  lc->add_option("file", file)->required();
  lc->add_option("--kappa", kappa, "Memory type κ (defaults to the header)");
  lc->add_option("-o,--output", o.out, "Machine file to write");
  lc->add_option("--verify", o.verify, "Check against the term on N random words");
  lc->add_option("--dot", o.dot, "Write the machine as Graphviz");
  lc->callback([&] { action = [&] { return lam_compile(o, file, kappa); }; });

  CLI::App* brtt = app.add_subcommand("brtt", "Tree transducers in JSON files");
  brtt->require_subcommand(1);
  CLI::App* brun = brtt->add_subcommand("run", "Run on s-expression trees");
  brun->add_option("file", file)->required();
  brun->add_option("trees", inputs)->required();
  brun->callback([&] { action = [&] { return brtt_run(o, file, inputs); }; });
  CLI::App* bcheck = brtt->add_subcommand("check", "Check the single use restriction and copylessness");
  bcheck->add_option("file", file)->required();
  bcheck->callback([&] { action = [&] { return brtt_check(o, file); }; });

  CLI11_PARSE(app, argc, argv);

  try {
    Report r = action();
    if (o.json_out) {
      r.fields["ok"] = true;
      std::cout << r.fields.dump(2) << "\n";
    } else {
      for (const auto& line : r.lines) std::cout << line << "\n";
    }
    return 0;
  } catch (const Error& e) {
    if (o.json_out) {
      json j{{"ok", false}, {"error", {{"kind", e.kind()}, {"message", e.what()}}}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << e.what() << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    if (o.json_out) {
      json j{{"ok", false}, {"error", {{"kind", "Error"}, {"message", e.what()}}}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << e.what() << "\n";
    }
    return 1;
  }
}
