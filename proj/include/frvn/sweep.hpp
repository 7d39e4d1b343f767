#ifndef FRVN_SWEEP_HPP_
#define FRVN_SWEEP_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "frvn/basis.hpp"

namespace frvn {

/// Parses "v", "start:stop:step" or a comma-separated list of either. A range
/// runs from start in steps of `step` and includes stop when the step divides
/// the interval (up to 1e-9 of a step). Throws InvalidInput on bad syntax,
/// non-positive steps and stop < start.
std::vector<double> parse_range(const std::string& text);
std::vector<int> parse_int_range(const std::string& text);

enum class Command { Dispersion, Cfl, Condition, FullyDiscrete, Verify, Mesh };

std::string command_name(Command command);

enum class OutputFormat { Csv, Json };

/// One invocation. Angles are in degrees. The central cell is dx = 1,
/// dy = dy_ratio, dz = dz_ratio with expansion factors gx, gy, gz.
struct SweepSpec {
  Command command = Command::Dispersion;
  int dim = 1;
  std::vector<int> orders{3};
  std::vector<std::string> families{"huynh"};  // dg | huynh | osfr
  std::vector<double> iotas{0.0};               // used by osfr only
  std::vector<double> alphas{1.0};
  std::vector<double> gx{1.0}, gy{1.0}, gz{1.0};
  std::vector<double> dy_ratio{1.0}, dz_ratio{1.0};
  std::vector<double> theta{0.0}, phi{0.0};
  std::vector<double> khat;  // empty: command default
  PointRule rule = PointRule::GaussLegendre;
  std::string rk = "rk44";
  double tau = 1e-3;

  int cells = 16;            // verify
  double tolerance = 1e-6;   // verify

  std::vector<int> mesh_dims{20, 20, 20};
  std::vector<double> jitter{0.5};
  std::uint64_t seed = 1;

  int threads = 1;
  OutputFormat format = OutputFormat::Csv;

  /// Throws InvalidInput naming the offending field.
  void validate() const;
};

using Cell = std::variant<std::monostate, long long, double, std::string>;

/// Rows in canonical order: the nesting order of the parameter lists, with
/// k_hat innermost.
struct SweepTable {
  Command command = Command::Dispersion;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::size_t failed_rows = 0;  // rows carrying an error marker
  std::size_t failed_checks = 0;  // verify rows that did not pass
};

/// Runs every job of the spec, using spec.threads workers. Numerical errors
/// are caught per job and reported in the row's `error` column.
SweepTable run_sweep(const SweepSpec& spec);

/// CSV with a header line; reals in %.16e, missing values empty.
void write_csv(std::ostream& out, const SweepTable& table);

/// {"tool", "version", "command", "spec", "columns", "rows"}; rows are
/// objects keyed by column name.
void write_json(std::ostream& out, const SweepSpec& spec, const SweepTable& table);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace frvn

#endif  // FRVN_SWEEP_HPP_
