#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glspell/mkdict.hpp"
#include "glspell/morphgen.hpp"

namespace {

using namespace glspell;

void print_diagnostics(const std::vector<gwdl::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << d.format() << '\n';
}

int run_build(const std::string& out, const std::optional<std::string>& freq, std::size_t mem_size,
              const std::vector<std::string>& sources) {
  mkdict::CompileOptions options;
  options.sources = sources;
  options.frequency_path = freq;
  options.memory_size = mem_size;
  const auto result = mkdict::compile_to(options, out);
  print_diagnostics(result.report.diagnostics);
  if (!result.error.empty()) std::cerr << "mkdict: " << result.error << '\n';
  if (result.exit_code == mkdict::kOk) std::cout << result.report.to_text();
  return result.exit_code;
}

int run_report(const std::string& path) {
  try {
    const auto d = dict::CompiledDictionary::open(path);
    std::cout << mkdict::report_for(*d).to_text();
    return mkdict::kOk;
  } catch (const dict::DictError& e) {
    std::cerr << "mkdict: " << path << ": " << e.what() << '\n';
    return e.kind() == dict::DictError::Kind::Io ? mkdict::kIoError : mkdict::kDiagnostics;
  }
}

int run_expand(const std::vector<std::string>& sources) {
  bool io_failed = false;
  const auto parsed = gwdl::parse_files(sources, &io_failed);
  const auto diagnostics = gwdl::validate(parsed.file, parsed.diagnostics);
  print_diagnostics(diagnostics);
  if (io_failed) return mkdict::kIoError;
  if (gwdl::has_errors(diagnostics)) return mkdict::kDiagnostics;
  const auto rules = gwdl::resolve(parsed.file);
  morph::expand_all(rules, [](const morph::SurfaceForm& f) {
    std::cout << f.display << '\t' << f.entry_id << '\n';
  });
  return mkdict::kOk;
}

int run_validate(const std::vector<std::string>& sources) {
  bool io_failed = false;
  const auto diagnostics = mkdict::validate_sources(sources, &io_failed);
  print_diagnostics(diagnostics);
  if (io_failed) return mkdict::kIoError;
  return gwdl::has_errors(diagnostics) ? mkdict::kDiagnostics : mkdict::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile GWDL lexicon sources into a .gwd dictionary"};
  app.require_subcommand(1);

  std::string out;
  std::optional<std::string> freq;
  std::size_t mem_size = dict::kDefaultMemorySize;
  std::vector<std::string> build_sources;
  auto* build = app.add_subcommand("build", "Build a dictionary");
  build->add_option("-o,--output", out, "Output .gwd path")->required();
  build->add_option("--freq", freq, "Frequency list (count TAB form)");
  build->add_option("--mem-size", mem_size, "Memory dictionary size");
  build->add_option("sources", build_sources, "GWDL sources")->required();

  std::string report_path;
  auto* report = app.add_subcommand("report", "Print statistics of a .gwd file");
  report->add_option("dictionary", report_path, "Compiled dictionary")->required();

  std::vector<std::string> expand_sources;
  auto* expand = app.add_subcommand("expand", "Print every generated form");
  expand->add_option("sources", expand_sources, "GWDL sources")->required();

  std::vector<std::string> validate_sources;
  auto* validate = app.add_subcommand("validate", "Check GWDL sources");
  validate->add_option("sources", validate_sources, "GWDL sources")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mkdict::kDiagnostics;
  }

  if (*build) return run_build(out, freq, mem_size, build_sources);
  if (*report) return run_report(report_path);
  if (*expand) return run_expand(expand_sources);
  return run_validate(validate_sources);
}
