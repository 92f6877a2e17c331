#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "glspell/correct.hpp"
#include "glspell/http_service.hpp"
#include "glspell/session.hpp"

namespace {

using namespace glspell;

constexpr int kFlagsFound = 1;
constexpr int kFailure = 2;

struct Common {
  std::string dict_path;
  std::optional<std::string> user_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const correct::Checker> make_checker(const Common& c) {
  auto main = dict::CompiledDictionary::open(c.dict_path);
  auto user = std::make_shared<dict::UserDictionary>();
  if (c.user_path && std::filesystem::exists(*c.user_path)) user->load(*c.user_path);
  return std::make_shared<correct::Checker>(std::move(main), std::move(user));
}

std::string joined_suggestions(const session::Flag& f) {
  std::string out;
  for (const auto& s : f.suggestions) {
    if (!out.empty()) out += ';';
    out += s.display;
  }
  return out;
}

int run_check(const Common& c, const std::string& file, const std::string& report) {
  const auto checker = make_checker(c);
  const std::string text = read_file(file);
  const auto flags = session::check_document(*checker, text);
  for (const auto& f : flags) {
    if (report == "pretty") {
      std::cout << file << ':' << f.line << ':' << f.column << ": " << f.word;
      if (f.suggestions.empty()) {
        std::cout << " (no suggestions)\n";
        continue;
      }
      std::cout << '\n';
      for (const auto& s : f.suggestions) {
        std::cout << "  " << s.rank << ". " << s.display << " [" << correct::class_name(s.error_class) << "]\n";
      }
    } else {
      std::cout << f.line << '\t' << f.column << '\t' << f.word << '\t' << joined_suggestions(f) << '\n';
    }
  }
  return flags.empty() ? 0 : kFlagsFound;
}

void show_flag(const std::string& text, const session::Flag& f) {
  const std::size_t line_begin = text.rfind('\n', f.begin == 0 ? 0 : f.begin - 1);
  const std::size_t from = line_begin == std::string::npos || f.begin == 0 ? 0 : line_begin + 1;
  std::size_t to = text.find('\n', f.end);
  if (to == std::string::npos) to = text.size();
  std::cerr << '\n'
            << f.line << ':' << f.column << ": " << text.substr(from, f.begin - from) << ">>" << f.word << "<<"
            << text.substr(f.end, to - f.end) << '\n';
  for (const auto& s : f.suggestions) {
    std::cerr << "  " << s.rank << ") " << s.display << " [" << correct::class_name(s.error_class) << "]\n";
  }
  std::cerr << "[s]kip  [e]dit  s[t]ore  [1-" << f.suggestions.size() << "] correct  e[x]it > " << std::flush;
}

std::optional<session::Action> read_action(const session::Flag& f) {
  std::string line;
  while (std::getline(std::cin, line)) {
    session::Action a;
    if (line == "s") return a;
    if (line == "t") {
      a.kind = session::ActionKind::Store;
      return a;
    }
    if (line == "x") {
      a.kind = session::ActionKind::Exit;
      return a;
    }
    if (line == "e" || line.rfind("e ", 0) == 0) {
      a.kind = session::ActionKind::Edit;
      if (line.size() > 2) {
        a.replacement = line.substr(2);
      } else {
        std::cerr << "replacement> " << std::flush;
        if (!std::getline(std::cin, a.replacement)) return std::nullopt;
      }
      return a;
    }
    try {
      std::size_t used = 0;
      const unsigned long n = std::stoul(line, &used);
      if (used == line.size() && n >= 1 && n <= f.suggestions.size()) {
        a.kind = session::ActionKind::Correct;
        a.index = n;
        return a;
      }
    } catch (const std::exception&) {
    }
    std::cerr << "? " << std::flush;
  }
  return std::nullopt;
}

int run_fix(const Common& c, const std::string& file, const std::optional<std::string>& output,
            const std::optional<std::string>& journal_path) {
  const auto checker = make_checker(c);
  const std::string text = read_file(file);
  session::CorrectionSession s("local", text, checker);

  std::ofstream journal;
  if (journal_path) {
    if (std::ifstream previous(*journal_path); previous) {
      const std::size_t n = s.replay(previous);
      if (n) std::cerr << "resumed " << n << " decisions from " << *journal_path << '\n';
    }
    journal.open(*journal_path, std::ios::app);
    if (!journal) throw std::runtime_error("cannot open journal " + *journal_path);
    s.set_journal(&journal);
  }

  while (s.status() == session::Status::Active) {
    const auto flag = s.next_flag();
    if (!flag) break;
    show_flag(text, *flag);
    auto action = read_action(*flag);
    if (!action) action = session::Action{session::ActionKind::Exit, {}, 0};
    s.apply(*action);
    if (action->kind == session::ActionKind::Store && c.user_path) checker->user()->save(*c.user_path);
  }

  const std::string corrected = s.export_text();
  if (output) {
    std::ofstream out(*output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + *output);
    out << corrected;
  } else {
    std::cout << corrected;
  }
  return 0;
}

http::HttpService* g_service = nullptr;

void handle_signal(int) {
  if (g_service) g_service->stop();
}

int run_serve(const Common& c, const std::string& listen, const std::optional<std::string>& static_dir) {
  const auto checker = make_checker(c);
  const auto [host, port] = http::parse_listen_address(listen);
  http::HttpService service(checker, {c.user_path, static_dir});
  const int bound = service.bind(host, port);
  if (bound < 0) throw std::runtime_error("cannot listen on " + listen);
  g_service = &service;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "glspell: listening on " << host << ':' << bound << '\n';
  service.listen_after_bind();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modern Greek spelling checker"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--dict", common.dict_path, "Compiled .gwd dictionary")->required();
    sub->add_option("--user", common.user_path, "User dictionary (one word per line)");
  };

  std::string file;
  std::string report = "tsv";
  auto* check = app.add_subcommand("check", "Report misspelled words");
  check->add_option("file", file, "UTF-8 text file")->required();
  add_common(check);
  check->add_option("--report", report, "Output format")->check(CLI::IsMember({"tsv", "pretty"}));

  std::optional<std::string> output;
  std::optional<std::string> journal;
  auto* fix = app.add_subcommand("fix", "Correct a file interactively");
  fix->add_option("file", file, "UTF-8 text file")->required();
  add_common(fix);
  fix->add_option("-o,--output", output, "Write the corrected text here instead of stdout");
  fix->add_option("--journal", journal, "Decision journal for resuming");

  std::string listen = "127.0.0.1:8080";
  std::optional<std::string> static_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  add_common(serve);
  serve->add_option("--listen", listen, "host:port");
  serve->add_option("--static", static_dir, "Directory served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kFailure;
  }

  try {
    if (*check) return run_check(common, file, report);
    if (*fix) return run_fix(common, file, output, journal);
    return run_serve(common, listen, static_dir);
  } catch (const std::exception& e) {
    std::cerr << "glspell: " << e.what() << '\n';
    return kFailure;
  }
}
