// valint: run, check or format integration scripts.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "valint/dsl/runner.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact C(Gamma)-valued integration on valued fields"};
  app.require_subcommand(1);

  valint::dsl::Options opt;
  std::string path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("script", path, "Script file")->required();
    sub->add_option("--rank", opt.rank, "Default rank of Gamma")->check(CLI::Range(1, 9));
    sub->add_option("--prec", opt.prec, "Default field precision")->check(CLI::Range(1, 1000));
    sub->add_option("--depth-limit", opt.depth_limit, "Coset enumeration limit (0 keeps the default)");
    sub->add_option("--seed", opt.seed, "Seed for 'check random' statements");
  };
  CLI::App* run = app.add_subcommand("run", "Execute a script and print its transcript");
  CLI::App* check = app.add_subcommand("check", "Execute a script; report only through the exit code");
  CLI::App* fmt = app.add_subcommand("fmt", "Print the canonical form of a script");
  add_common(run);
  add_common(check);
  add_common(fmt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string source;
  if (!read_file(path, source)) {
    std::cerr << "valint: cannot read " << path << "\n";
    return 2;
  }
  valint::dsl::RunResult res =
      fmt->parsed() ? valint::dsl::format_source(source) : valint::dsl::run_source(source, opt);
  if (!check->parsed()) std::cout << res.transcript;
  return res.exit_code;
}
