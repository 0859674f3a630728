// finharm: batch driver for the finite-group harmonic analysis suites.
//
//   finharm verify --group S3 --sigma data/indicator-A3.json
//   finharm ideals --group D4 --sigma gen:pd --mu gen:adapted --seed 7 --format markdown
//
// Exit status: 0 all checks pass, 1 some check failed, 2 usage or input error.

#include <iostream>

#include <CLI11.hpp>

#include "finharm/cli.hpp"

namespace {

using finharm::cli::Command;
using finharm::cli::Format;
using finharm::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format) {
  sub->add_option("--group", cfg.group, "builtin kind (Z6, D4, S3, Q8, Z2xZ4, ...) or group JSON file")
      ->capture_default_str();
  sub->add_option("--sigma", cfg.sigma, "function JSON file, gen:pd or gen:nonpd");
  sub->add_option("--mu", cfg.mu, "measure JSON file, gen:adapted, gen:uniform or gen:nonadapted");
  sub->add_option("--tol", cfg.tol.eq_tol, "equality tolerance for projector distances")->capture_default_str();
  sub->add_option("--rank-tol", cfg.tol.rank_tol, "relative singular-value cutoff")->capture_default_str();
  sub->add_option("--entry-tol", cfg.tol.entry_tol, "absolute zero threshold for entries")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "seed for the random generators")->capture_default_str();
  sub->add_option("--format", format, "json or markdown")
      ->check(CLI::IsMember({"json", "markdown"}))
      ->capture_default_str();
  sub->add_option("--max-n", cfg.max_n, "step cap for limit products")->capture_default_str();
  sub->add_option("--cases", cfg.cases, "random cases for fuzz")->capture_default_str();
}

bool is_input_error(finharm::ErrorKind k) {
  using finharm::ErrorKind;
  switch (k) {
    case ErrorKind::SizeCap:
    case ErrorKind::Schema:
    case ErrorKind::Associativity:
    case ErrorKind::Identity:
    case ErrorKind::Inverse:
    case ErrorKind::GroupMismatch:
    case ErrorKind::Dimension:
    case ErrorKind::NotProbability:
    case ErrorKind::Tolerance:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-group harmonic analysis verification suites"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "json";
  const std::pair<Command, const char*> commands[] = {
      {Command::Verify, "three-way check of the harmonic operator space"},
      {Command::Support, "operator support against the annihilator hull"},
      {Command::FixedPoints, "fixed points of Θ̂(σ) and Θ(μ)"},
      {Command::Ideals, "ideals of the predual under the bullet product"},
      {Command::LimitProduct, "Cesàro limit products on harmonic spaces"},
      {Command::Fuzz, "inclusion checks for random non-positive-definite σ"},
  };
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(finharm::cli::to_string(cmd), help);
    add_common(sub, cfg, format);
    if (cmd == Command::Support) sub->add_option("--operator", cfg.op, "operator JSON file (default: random)");
    sub->callback([&cfg, cmd] { cfg.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  cfg.format = format == "markdown" ? Format::Markdown : Format::Json;

  try {
    const auto report = finharm::cli::run(cfg);
    std::cout << finharm::cli::emit(report, cfg.format);
    return finharm::cli::exit_code(report);
  } catch (const finharm::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const finharm::Error& e) {
    std::cerr << "error (" << finharm::to_string(e.kind()) << "): " << e.what() << "\n";
    return is_input_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
