#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "openq/cli.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format = "json";
  bool quiet = false;
  unsigned threads = 1;
  double lmax = -1.0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "INI scenario file (defaults when omitted)");
  sub->add_option("--out", f.out, "directory for the report and CSV files");
  sub->add_option("--format", f.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--quiet", f.quiet, "print nothing on success");
  sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

int write_outputs(const openq::cli::Outcome& out, const Flags& f) {
  if (!f.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(f.out, ec);
    if (ec) {
      std::cerr << "openq: cannot create " << f.out << ": " << ec.message() << '\n';
      return openq::cli::ExitCode::runtime_error;
    }
    for (const auto& [name, body] : out.files) {
      std::ofstream(std::filesystem::path(f.out) / name, std::ios::binary) << body;
    }
    std::ofstream(std::filesystem::path(f.out) / "report.json", std::ios::binary)
        << out.report.dump(2) << '\n';
  }
  if (!f.quiet) {
    if (f.format == "csv") {
      if (out.files.contains(out.primary_csv)) std::cout << out.files.at(out.primary_csv);
    } else {
      std::cout << out.report.dump(2) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"openq: elementary components of open quantum states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(openq::cli::kVersion));
  Flags flags;
  for (const auto& name : openq::cli::commands()) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, flags);
    if (name == "rotations-table" || name == "run") {
      sub->add_option("--lmax", flags.lmax, "largest l (multiple of 1/2)");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : openq::cli::ExitCode::config_error;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  openq::cli::Config config;
  try {
    if (!flags.config.empty()) config = openq::cli::Config::load(flags.config);
  } catch (const openq::Error& e) {
    std::cerr << "openq: " << e.what() << '\n';
    return openq::cli::exit_code_for(e.code());
  }

  openq::cli::Options opts;
  opts.format = flags.format;
  opts.quiet = flags.quiet;
  opts.threads = flags.threads;
  if (flags.lmax >= 0.0) opts.lmax = flags.lmax;
  if (!flags.out.empty()) opts.out_dir = flags.out;

  const auto outcome = openq::cli::execute(command, config, opts);
  if (const int rc = write_outputs(outcome, flags); rc != 0) return rc;
  if (outcome.exit_code != 0) std::cerr << "openq: " << outcome.error << '\n';
  return outcome.exit_code;
}
