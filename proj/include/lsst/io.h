#ifndef LSST_IO_H
#define LSST_IO_H

#include <optional>
#include <string>
#include <vector>

#include "lsst/brtt.h"
#include "lsst/church.h"
#include "lsst/forest.h"
#include "lsst/lambda.h"
#include "lsst/sst.h"

namespace lsst {

// A λ-term file: header comments `-- key: value` (type, kappa, sigma,
// sigma-tree, gamma, gamma-tree), macros `def NAME = term ;`, then the term.
struct TermFile {
  Term term;
  std::optional<Type> type;
  std::optional<Type> kappa;
  std::optional<RankedAlphabet> sigma;
  std::optional<RankedAlphabet> gamma;
};

TermFile parse_term_file(const std::string& text);
TermFile load_term_file(const std::string& path);
std::string read_file(const std::string& path);

// Input words on the command line spell the separator letter ‖ as '|';
// "\|" and "\\" escape.
Word parse_cli_word(const std::string& s);

// A word over letters and `$name` register occurrences, as printed by
// format_word. Spaces separate; `\` escapes the next letter.
RegWord parse_reg_word(const std::string& s, const std::vector<std::string>& registers);

// JSON machine documents with sorted keys. "kind" is "sst", "nd-sst" or
// "brtt". Readers throw ParseError with the offending field.
std::string machine_kind(const std::string& json_text);
std::string sst_to_json(const SstMachine& m);
SstMachine sst_from_json(const std::string& json_text);
std::string nd_sst_to_json(const NdSstMachine& m);
NdSstMachine nd_sst_from_json(const std::string& json_text);
std::string brtt_to_json(const SurBrtt& m);
SurBrtt brtt_from_json(const std::string& json_text);

// Graphviz digraph of the states, edges labeled "letter / update".
std::string sst_dot(const SstMachine& m);

}  // namespace lsst

#endif  // LSST_IO_H
