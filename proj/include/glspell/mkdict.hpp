#pragma once

// The dictionary compiler: GWDL sources plus an optional frequency list to a
// .gwd image and a build report.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glspell/dictstore.hpp"
#include "glspell/gwdl.hpp"

namespace glspell::mkdict {

enum ExitCode : int { kOk = 0, kDiagnostics = 1, kIoError = 2 };

struct BuildReport {
  std::size_t entry_count = 0;
  std::uint64_t surface_form_count = 0;
  std::size_t infix_count = 0;
  std::size_t inflection_count = 0;
  std::size_t stress_tuple_count = 0;
  std::size_t form_count = 0;  // distinct (infix, inflection, stress) triples
  std::size_t trie_node_count = 0;
  std::size_t record_count = 0;
  std::size_t memory_word_count = 0;
  std::size_t total_bytes = 0;
  std::vector<dict::SectionInfo> sections;
  std::vector<gwdl::Diagnostic> diagnostics;

  std::string to_text() const;
};

// Counts read back from a compiled dictionary.
BuildReport report_for(const dict::CompiledDictionary& dictionary);

struct CompileOptions {
  std::vector<std::string> sources;
  std::optional<std::string> frequency_path;
  std::size_t memory_size = dict::kDefaultMemorySize;
};

struct CompileResult {
  int exit_code = kOk;
  BuildReport report;
  std::vector<std::uint8_t> image;  // empty unless exit_code == kOk
  std::string error;                // I/O failure description
};

// Parses, validates and builds in memory.
CompileResult compile(const CompileOptions& options);

// compile() followed by an atomic write of the image. Nothing is written
// unless the build succeeds.
CompileResult compile_to(const CompileOptions& options, const std::string& out_path);

// Writes through a temporary file in the same directory, then renames.
// Throws dict::DictError(Io).
void write_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes);

// Parses and validates sources; diagnostics only.
std::vector<gwdl::Diagnostic> validate_sources(const std::vector<std::string>& sources,
                                               bool* io_failed = nullptr);

}  // namespace glspell::mkdict
