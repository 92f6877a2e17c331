#include "glspell/mkdict.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

namespace glspell::mkdict {

namespace fs = std::filesystem;

std::string BuildReport::to_text() const {
  std::ostringstream out;
  out << "entries\t" << entry_count << '\n'
      << "surface_forms\t" << surface_form_count << '\n'
      << "infixes\t" << infix_count << '\n'
      << "inflections\t" << inflection_count << '\n'
      << "stress_tuples\t" << stress_tuple_count << '\n'
      << "forms\t" << form_count << '\n'
      << "trie_nodes\t" << trie_node_count << '\n'
      << "records\t" << record_count << '\n'
      << "memory_words\t" << memory_word_count << '\n';
  for (const auto& s : sections) out << "section\t" << s.tag << '\t' << s.offset << '\t' << s.length << '\n';
  out << "total_bytes\t" << total_bytes << '\n';
  return out.str();
}

BuildReport report_for(const dict::CompiledDictionary& d) {
  BuildReport r;
  r.entry_count = d.entry_count();
  r.surface_form_count = d.surface_form_count();
  r.infix_count = d.symbols().infixes.size();
  r.inflection_count = d.symbols().inflections.size();
  r.stress_tuple_count = d.symbols().stress_tuples.size();
  r.form_count = d.symbols().forms.size();
  r.trie_node_count = d.trie_node_count();
  r.record_count = d.record_count();
  r.memory_word_count = d.memory_size();
  r.total_bytes = d.bytes().size();
  r.sections = d.sections();
  return r;
}

std::vector<gwdl::Diagnostic> validate_sources(const std::vector<std::string>& sources, bool* io_failed) {
  const gwdl::ParseResult parsed = gwdl::parse_files(sources, io_failed);
  return gwdl::validate(parsed.file, parsed.diagnostics);
}

CompileResult compile(const CompileOptions& options) {
  CompileResult result;
  bool io_failed = false;
  const gwdl::ParseResult parsed = gwdl::parse_files(options.sources, &io_failed);
  if (io_failed) {
    result.exit_code = kIoError;
    result.report.diagnostics = parsed.diagnostics;
    result.error = "cannot read lexicon sources";
    return result;
  }
  result.report.diagnostics = gwdl::validate(parsed.file, parsed.diagnostics);
  if (gwdl::has_errors(result.report.diagnostics)) {
    result.exit_code = kDiagnostics;
    return result;
  }

  std::vector<dict::FrequencyItem> frequency;
  if (options.frequency_path) {
    std::ifstream in(*options.frequency_path, std::ios::binary);
    if (!in) {
      result.exit_code = kIoError;
      result.error = "cannot read " + *options.frequency_path;
      return result;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      frequency = dict::parse_frequency(buf.str());
    } catch (const dict::DictError& e) {
      result.exit_code = kDiagnostics;
      result.report.diagnostics.push_back(
          {*options.frequency_path, {}, gwdl::Severity::Error, e.what()});
      return result;
    }
  }

  const gwdl::ResolvedRuleSet rules = gwdl::resolve(parsed.file);
  try {
    result.image = dict::build_image(rules, frequency, options.memory_size);
  } catch (const dict::DictError& e) {
    result.exit_code = kDiagnostics;
    result.report.diagnostics.push_back({"", {}, gwdl::Severity::Error, e.what()});
    result.image.clear();
    return result;
  }
  const auto dictionary = dict::CompiledDictionary::from_bytes(result.image);
  auto diagnostics = std::move(result.report.diagnostics);
  result.report = report_for(*dictionary);
  result.report.diagnostics = std::move(diagnostics);
  return result;
}

void write_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw dict::DictError(dict::DictError::Kind::Io, "cannot create " + tmp.string());
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n <= 0) {
      ::close(fd);
      ::unlink(tmp.c_str());
      throw dict::DictError(dict::DictError::Kind::Io, "cannot write " + tmp.string());
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    ::unlink(tmp.c_str());
    throw dict::DictError(dict::DictError::Kind::Io, "cannot flush " + tmp.string());
  }
  if (std::rename(tmp.c_str(), target.c_str()) != 0) {
    ::unlink(tmp.c_str());
    throw dict::DictError(dict::DictError::Kind::Io, "cannot rename to " + path);
  }
}

CompileResult compile_to(const CompileOptions& options, const std::string& out_path) {
  CompileResult result = compile(options);
  if (result.exit_code != kOk) return result;
  try {
    write_atomic(out_path, result.image);
  } catch (const dict::DictError& e) {
    result.exit_code = kIoError;
    result.error = e.what();
  }
  return result;
}

}  // namespace glspell::mkdict
