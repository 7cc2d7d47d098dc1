#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "reparse/engine.hpp"

namespace reparse {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFragments = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Non-blank, non-comment lines of a corpus file.
std::vector<std::string> read_corpus(const std::string& path);

inline const char* corpus_header() {
  return "sentence\ttokens\tstatus\trecoveries\tretained_peak\tnode_constructions\t"
         "attachments\tdetachments\tword_events";
}

// One TSV row for a processed sentence.
std::string corpus_row(const std::string& sentence, const Interpretation& interp);

}  // namespace reparse
