#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>

#include "CLI11.hpp"
#include "orbimorse/config.hpp"
#include "orbimorse/errors.hpp"
#include "orbimorse/parallel.hpp"
#include "orbimorse/run.hpp"

namespace {

// UTC time, or SOURCE_DATE_EPOCH when set
std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::atoll(e));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbimorse: orbifold holomorphic Morse inequalities lab"};
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  unsigned threads = 0;
  bool strict = false;
  bool no_timestamp = false;

  std::string names;
  for (const auto& s : orbimorse::subcommands()) names += (names.empty() ? "" : ", ") + s;
  app.add_option("subcommand", subcommand, "one of: " + names)->required();
  app.add_option("--config", config_path, "run configuration (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "random seed (overrides the config)")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "worker threads, 0 = hardware concurrency");
  app.add_flag("--strict", strict, "treat warnings as failures");
  app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp from the report header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : orbimorse::kExitConfigError;
  }

  orbimorse::set_thread_count(threads);
  orbimorse::RunConfig cfg;
  try {
    cfg = orbimorse::load_config(config_path);
  } catch (const orbimorse::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return orbimorse::kExitConfigError;
  }
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  orbimorse::RunOptions opts;
  opts.strict = strict;
  if (!no_timestamp) opts.timestamp = timestamp();
  const orbimorse::RunOutcome outcome = orbimorse::run(subcommand, cfg, opts);
  for (const auto& f : outcome.failures) std::cerr << "error: " << f << '\n';
  try {
    orbimorse::write_artifacts(outcome, cfg.output_dir);
  } catch (const orbimorse::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return orbimorse::kExitConfigError;
  }
  std::cout << subcommand << ": exit " << outcome.exit_code << ", " << outcome.report["results"].size()
            << " results, artifacts in " << cfg.output_dir << '\n';
  return outcome.exit_code;
}
