// hydrostat: run, validate and re-check primitive-equation experiments.
//
//   hydrostat run <config.ini> [--out DIR] [--seed N] [--threads N]
//   hydrostat validate <config.ini>
//   hydrostat report <run-dir>
//
// Exit status: 0 all checks pass, 1 a check failed (or the run died),
// 2 configuration error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hydrostat/config.hpp"
#include "hydrostat/experiments.hpp"
#include "hydrostat/kernels.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kConfigError = 2;

void print_checks(const std::vector<hydrostat::Check>& checks) {
  for (const auto& c : checks) {
    std::printf("%s %-32s %.6g  [%.3g, %.3g]\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.value, c.lo, c.hi);
  }
}

int apply_threads(std::optional<int> flag) {
  int n = 0;
  if (flag) {
    n = *flag;
  } else if (const char* env = std::getenv("HYDROSTAT_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: HYDROSTAT_THREADS is not an integer\n";
      return kConfigError;
    }
  }
  if (n < 0) {
    std::cerr << "error: thread count must be positive\n";
    return kConfigError;
  }
  if (n > 0) hydrostat::kernels::set_thread_count(n);
  return kOk;
}

hydrostat::RunConfig load(const std::string& positional, const std::string& flag) {
  if (!positional.empty() && !flag.empty() && positional != flag) {
    throw hydrostat::ConfigError("two different config files given");
  }
  const std::string path = flag.empty() ? positional : flag;
  if (path.empty()) throw hydrostat::ConfigError("no config file given");
  return hydrostat::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primitive-equation experiment harness"};
  app.require_subcommand(1);

  std::string config_pos, config_flag, out_dir, run_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config_file", config_pos, "Config file");
  run->add_option("--config", config_flag, "Config file");
  run->add_option("--out", out_dir, "Output directory (overrides run.output)");
  run->add_option("--seed", seed, "RNG seed (overrides run.seed)");
  run->add_option("--threads", threads, "Worker threads (default: HYDROSTAT_THREADS)");

  auto* val = app.add_subcommand("validate", "Check a config file and print its canonical form");
  val->add_option("config_file", config_pos, "Config file");
  val->add_option("--config", config_flag, "Config file");
  val->add_option("--seed", seed, "RNG seed (overrides run.seed)");

  auto* rep = app.add_subcommand("report", "Re-evaluate the checks of a finished run");
  rep->add_option("run_dir", run_dir, "Run directory")->required();
  rep->add_option("--threads", threads, "Ignored; accepted for symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run || *val) {
      hydrostat::RunConfig cfg = load(config_pos, config_flag);
      if (seed) cfg.seed = *seed;
      if (!out_dir.empty()) cfg.output = out_dir;
      hydrostat::validate(cfg);
      if (*val) {
        std::cout << hydrostat::canonical_form(cfg) << "config_hash = "
                  << hydrostat::config_hash(cfg) << "\n";
        return kOk;
      }
      if (const int rc = apply_threads(threads); rc != kOk) return rc;
      if (cfg.output.empty()) throw hydrostat::ConfigError("no output directory (run.output or --out)");
      const hydrostat::Report r = hydrostat::execute_run(cfg, cfg.output);
      std::printf("%s -> %s\n", r.experiment.c_str(), cfg.output.string().c_str());
      print_checks(r.checks);
      return r.all_pass() ? kOk : kFailed;
    }
    const hydrostat::ReplayResult r = hydrostat::replay_run(run_dir);
    print_checks(r.checks);
    if (!r.matches_manifest) std::printf("FAIL manifest verdicts disagree with the data\n");
    return r.all_pass() ? kOk : kFailed;
  } catch (const hydrostat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const hydrostat::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}
