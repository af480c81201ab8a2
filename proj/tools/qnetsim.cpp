// qnetsim command line front end. Talks to the library only through the C API.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnetsim/qnetsim.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

int exit_code(qnetsim_status s) {
  switch (s) {
    case QNETSIM_OK: return kExitOk;
    case QNETSIM_ERR_NUMERICAL:
    case QNETSIM_ERR_INTERNAL: return kExitNumerical;
    default: return kExitConfig;
  }
}

int report(qnetsim_status s) {
  std::cerr << "qnetsim: " << qnetsim_status_name(s) << ": " << qnetsim_last_error() << "\n";
  return exit_code(s);
}

fs::path preset_dir() {
  if (const char* env = std::getenv("QNETSIM_PRESETS"); env && *env) return env;
  return QNETSIM_PRESET_DIR;
}

std::string default_preset(const std::string& command) {
  if (command == "eig") return "network_eig";
  if (command == "evolve") return "jc_resonant";
  if (command == "fig3") return "fig3";
  if (command == "protocol") return "protocol";
  if (command == "entropy") return "entropy";
  return "";
}

struct Options {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  unsigned jobs = 1;
};

fs::path resolve_config(const Options& o, const std::string& command) {
  if (!o.config.empty()) return o.config;
  const std::string name = o.preset.empty() ? default_preset(command) : o.preset;
  return preset_dir() / (name + ".yaml");
}

class Config {
 public:
  ~Config() { qnetsim_config_free(handle_); }
  qnetsim_status load(const fs::path& p) { return qnetsim_config_load(p.c_str(), &handle_); }
  qnetsim_config* get() const { return handle_; }

 private:
  qnetsim_config* handle_ = nullptr;
};

class Result {
 public:
  ~Result() { qnetsim_result_free(handle_); }
  qnetsim_result** out() { return &handle_; }
  qnetsim_result* get() const { return handle_; }

 private:
  qnetsim_result* handle_ = nullptr;
};

qnetsim_status write(const qnetsim_result* r, size_t index, const std::string& path) {
  if (path != "-") return qnetsim_result_write_csv(r, index, path.c_str());
  char* text = nullptr;
  const qnetsim_status s = qnetsim_result_csv(r, index, &text);
  if (s != QNETSIM_OK) return s;
  std::fputs(text, stdout);
  qnetsim_string_free(text);
  return QNETSIM_OK;
}

int run_command(const std::string& command, const Options& o) {
  Config config;
  const fs::path path = resolve_config(o, command);
  if (qnetsim_status s = config.load(path); s != QNETSIM_OK) {
    std::cerr << "qnetsim: " << path.string() << ":\n";
    return report(s);
  }
  if (o.seed) qnetsim_config_set_seed(config.get(), *o.seed);
  if (o.samples)
    if (qnetsim_status s = qnetsim_config_set_samples(config.get(), *o.samples); s != QNETSIM_OK)
      return report(s);

  Result result;
  if (qnetsim_status s = qnetsim_run(config.get(), command.c_str(), o.jobs, result.out());
      s != QNETSIM_OK)
    return report(s);

  const size_t n = qnetsim_result_count(result.get());
  double seconds = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double dt = 0.0;
    qnetsim_result_seconds(result.get(), i, &dt);
    seconds += dt;
  }

  if (!o.out.empty()) {
    if (command == "protocol" && n > 1) {
      std::cerr << "qnetsim: --out takes one protocol scenario; the config has " << n
                << " (drop --out to write one file per scenario)\n";
      return kExitConfig;
    }
    if (qnetsim_status s = write(result.get(), QNETSIM_ALL, o.out); s != QNETSIM_OK) return report(s);
    size_t rows = 0;
    qnetsim_result_rows(result.get(), QNETSIM_ALL, &rows);
    std::cerr << command << ": " << n << " scenario(s), " << rows << " rows, " << seconds
              << " s -> " << o.out << "\n";
    return kExitOk;
  }

  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    const char* output = nullptr;
    qnetsim_result_scenario(result.get(), i, &name);
    qnetsim_result_output(result.get(), i, &output);
    const std::string target = *output ? output : std::string(name) + ".csv";
    if (qnetsim_status s = write(result.get(), i, target); s != QNETSIM_OK) return report(s);
    size_t rows = 0;
    qnetsim_result_rows(result.get(), i, &rows);
    std::cerr << command << ": " << name << ", " << rows << " rows -> " << target << "\n";
  }
  return kExitOk;
}

int run_validate(const Options& o) {
  std::vector<fs::path> files;
  if (!o.config.empty()) {
    files.emplace_back(o.config);
  } else if (!o.preset.empty()) {
    files.push_back(preset_dir() / (o.preset + ".yaml"));
  } else {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(preset_dir(), ec))
      if (entry.path().extension() == ".yaml") files.push_back(entry.path());
    if (ec) {
      std::cerr << "qnetsim: cannot list presets in " << preset_dir().string() << ": " << ec.message()
                << "\n";
      return kExitConfig;
    }
    std::sort(files.begin(), files.end());
  }
  int worst = kExitOk;
  for (const fs::path& f : files) {
    Config config;
    if (qnetsim_status s = config.load(f); s != QNETSIM_OK) {
      std::cerr << f.string() << ":\n" << qnetsim_last_error() << "\n";
      worst = std::max(worst, exit_code(s));
      continue;
    }
    std::cout << f.string() << ": ok (" << qnetsim_config_count(config.get()) << " scenarios)\n";
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position-based qubit / cavity network simulator"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", qnetsim_version());

  Options o;
  app.add_option("--config", o.config, "Scenario file (YAML)")->check(CLI::ExistingFile);
  app.add_option("--preset", o.preset, "Bundled preset name, e.g. fig3");
  app.add_option("--out", o.out, "Write all scenarios to one CSV ('-' for stdout)");
  app.add_option("--seed", o.seed, "Override every scenario's seed");
  app.add_option("--samples", o.samples, "Override every scenario's grid sample count")
      ->check(CLI::Range(2, 100000000));
  app.add_option("--jobs", o.jobs, "Scenarios run in parallel")->check(CLI::Range(1u, 1024u));

  const std::vector<std::pair<std::string, std::string>> commands{
      {"eig", "Analytic vs numeric eigensystems"},
      {"evolve", "Time evolution and occupations"},
      {"fig3", "Energy-transfer coefficient for detuning schedules"},
      {"protocol", "Repeated prepare-and-measure shots"},
      {"entropy", "Entanglement entropy of eigenstates"},
      {"validate", "Parse and validate scenario files"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "validate") return run_validate(o);
  if (!o.config.empty() && !o.preset.empty()) {
    std::cerr << "qnetsim: give --config or --preset, not both\n";
    return kExitConfig;
  }
  return run_command(command, o);
}
