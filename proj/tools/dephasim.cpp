// dephasim: stationary-state entanglement sweeps under collective dephasing.
//
// Exit codes: 0 success, 1 usage/parse error, 2 numerical validation
// failure, 3 I/O failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dephasim/io.hpp"
#include "dephasim/sweep.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

int exit_code_for(dephasim::ErrorCode code) {
  using dephasim::ErrorCode;
  switch (code) {
    case ErrorCode::IoError:
      return kExitIo;
    case ErrorCode::NonHermitian:
    case ErrorCode::NotHermitian:
    case ErrorCode::TraceNotOne:
    case ErrorCode::NotPositive:
    case ErrorCode::NotXForm:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

constexpr const char* kKetHelp = R"help(Initial states are ket expressions, e.g.
  "(|10> - |01>)/sqrt(2)"       qubit pair, basis |1>,|0>
  "(|1,-1> + |0,0>)/sqrt(2)"    qutrit pair, basis |1>,|0>,|-1>
Terms are combined with + and -, scaled by numbers, i, sqrt(n), products
and quotients ("0.6|11> + 0.8 * i |00>", "1/sqrt(2) (|11> + |00>)").
Compact labels ("|10>") take one digit per party; use commas for -1.
The result is normalized automatically.

Config files hold `key = value` lines (`#` starts a comment); keys are the
long option names (dashes or underscores). Flags override the file.)help";

// Flag values that override the config file when given.
struct Overrides {
  std::string config_path;
  std::string initial_state;
  double omega_ratio = 0.0;
  double gamma_t_max = 0.0;
  std::size_t samples = 0;
  std::string output;
  std::size_t workers = 0;
};

struct OptionSet {
  CLI::Option* initial_state = nullptr;
  CLI::Option* omega_ratio = nullptr;
  CLI::Option* gamma_t_max = nullptr;
  CLI::Option* samples = nullptr;
  CLI::Option* output = nullptr;
  CLI::Option* workers = nullptr;
};

dephasim::SweepConfig resolve(const Overrides& flags, const OptionSet& opts,
                              dephasim::SweepMode mode) {
  dephasim::SweepConfig config;
  config.mode = mode;
  if (!flags.config_path.empty())
    dephasim::apply_config(
        dephasim::parse_config_text(dephasim::read_text(flags.config_path), flags.config_path),
        config);
  const auto given = [](CLI::Option* o) { return o != nullptr && o->count() > 0; };
  if (given(opts.initial_state)) config.initial_state = flags.initial_state;
  if (given(opts.omega_ratio)) config.omega_ratio = flags.omega_ratio;
  if (given(opts.gamma_t_max)) config.gamma_t_max = flags.gamma_t_max;
  if (given(opts.samples)) config.samples = flags.samples;
  if (given(opts.output)) config.output_path = flags.output;
  if (given(opts.workers)) config.workers = flags.workers;
  if (config.mode != mode)
    throw dephasim::Error(dephasim::ErrorCode::InvalidArgument,
                          "config file mode does not match the subcommand");
  if (config.initial_state.empty())
    throw dephasim::Error(dephasim::ErrorCode::InvalidArgument,
                          "an initial state is required (--initial-state or config)");
  return config;
}

int run_sweep_command(const dephasim::SweepConfig& config) {
  const dephasim::SweepResult result = dephasim::run_sweep(config);
  if (config.output_path.empty())
    std::cout << dephasim::format_csv(result);
  else
    dephasim::write_csv(result, config.output_path);

  std::size_t zero_windows = 0;
  for (const auto& w : dephasim::windows(result))
    zero_windows += (!w.entangled && w.complete) ? 1 : 0;
  std::cerr << "samples: " << result.rows.size() << ", transitions: " << result.transitions.size()
            << ", separable windows: " << zero_windows
            << ", interior maxima: " << result.maxima.size() << '\n';
  return 0;
}

int run_qutrit_command(const dephasim::SweepConfig& config) {
  const dephasim::QutritScan scan = dephasim::run_qutrit_scan(config);
  const std::string text = dephasim::format_report(scan.report, config.initial_state);
  if (!config.output_path.empty()) dephasim::write_text(config.output_path, text);
  std::cout << text;
  return 0;
}

int run_compare_command(const std::string& path_a, const std::string& path_b, double threshold) {
  const dephasim::SweepResult a = dephasim::read_csv(path_a);
  const dephasim::SweepResult b = dephasim::read_csv(path_b);
  const dephasim::WindowOverlap overlap = dephasim::compare_windows(a, b, threshold);
  std::cout << "grid_points = " << a.rows.size() << '\n'
            << "a_entangled_points = " << overlap.a_entangled_points << '\n'
            << "b_entangled_points = " << overlap.b_entangled_points << '\n'
            << "overlap_points = " << overlap.overlap_points << '\n';
  for (std::size_t k = 0; k < overlap.both_entangled.size(); ++k)
    if (overlap.both_entangled[k])
      std::cout << "# overlap," << dephasim::format_number(a.rows[k].gamma_t) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary-state entanglement and mutual information under collective dephasing"};
  app.require_subcommand(1);
  app.footer(kKetHelp);

  Overrides sweep_flags;
  OptionSet sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Sweep gamma*T for a driven qubit pair, write CSV");
  sweep->add_option("--config", sweep_flags.config_path, "key = value config file");
  sweep_opts.initial_state =
      sweep->add_option("--initial-state", sweep_flags.initial_state, "ket expression (qubits)");
  sweep_opts.omega_ratio =
      sweep->add_option("--omega-ratio", sweep_flags.omega_ratio, "drive ratio Omega1/gamma")
          ->check(CLI::NonNegativeNumber);
  sweep_opts.gamma_t_max =
      sweep->add_option("--gamma-t-max", sweep_flags.gamma_t_max, "upper end of the gamma*T grid")
          ->check(CLI::PositiveNumber);
  sweep_opts.samples =
      sweep->add_option("--samples", sweep_flags.samples, "grid points (default 2000)")
          ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  sweep_opts.output = sweep->add_option("--output", sweep_flags.output, "CSV path (default stdout)");
  sweep_opts.workers =
      sweep->add_option("--workers", sweep_flags.workers, "worker threads, 0 = all cores");

  Overrides qutrit_flags;
  OptionSet qutrit_opts;
  auto* qutrit =
      app.add_subcommand("qutrit", "Evaluate the qutrit entanglement condition on the stationary state");
  qutrit->add_option("--config", qutrit_flags.config_path, "key = value config file");
  qutrit_opts.initial_state =
      qutrit->add_option("--initial-state", qutrit_flags.initial_state, "ket expression (qutrits)");
  qutrit_opts.output =
      qutrit->add_option("--output", qutrit_flags.output, "report path (also printed)");

  std::string path_a;
  std::string path_b;
  double threshold = dephasim::kEntanglementThreshold;
  auto* compare = app.add_subcommand("compare", "Count grid points entangled in both sweeps");
  compare->add_option("--a", path_a, "first sweep CSV")->required();
  compare->add_option("--b", path_b, "second sweep CSV")->required();
  compare->add_option("--threshold", threshold, "concurrence threshold")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sweep)
      return run_sweep_command(resolve(sweep_flags, sweep_opts, dephasim::SweepMode::qubit_sweep));
    if (*qutrit)
      return run_qutrit_command(
          resolve(qutrit_flags, qutrit_opts, dephasim::SweepMode::qutrit_criterion));
    if (*compare) return run_compare_command(path_a, path_b, threshold);
  } catch (const dephasim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
