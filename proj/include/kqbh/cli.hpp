#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kqbh/charts.hpp"
#include "kqbh/flow.hpp"
#include "kqbh/verify.hpp"

namespace kqbh::cli {

/// Bad command line; `flag` names the offending option when there is one.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string flag, const std::string& msg)
      : std::runtime_error(flag.empty() ? msg : flag + ": " + msg), flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

enum class Command { verify, trajectory, point_report, help };

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

struct CliConfig {
  Command command = Command::help;
  std::string help_text;

  // verify
  std::string suite = "all";
  RunConfig run;
  std::uint64_t seed = 42;
  std::optional<std::string> json_out;  // "-" is stdout; unset prints a text summary

  // trajectory, point-report
  ChartId chart = ChartId::polar;
  std::optional<Vec4> at;  // raw coordinates; the chart guard is applied at execution
  double g = 1.0;
  double alpha0 = 1.0;
  IntegratorConfig integrator;
  std::string out = "-";
};

/// args excludes the program name.
CliConfig parse_args(const std::vector<std::string>& args);

/// Runs a validated config. Errors from the library propagate.
int execute(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + execute with the exit-code contract: 2 usage, 1 failed
/// checks, 3 runtime error (message on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// CSV header for a trajectory in the given chart.
std::vector<std::string> trajectory_columns(ChartId chart);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

}  // namespace kqbh::cli
