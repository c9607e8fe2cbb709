#pragma once

#include <boost/property_tree/ptree.hpp>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcd/config.hpp"
#include "lcd/decay.hpp"

namespace lcd {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitPass = 0, kExitError = 1, kExitTheoryFail = 2 };

/// Column-oriented contents of a series.csv file.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(const std::string& name) const;
  NormSeries series(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

SeriesTable read_series_csv(const std::string& path);
/// One row per record, values printed with %.17g so reruns compare byte for byte.
std::string format_csv_row(const std::vector<double>& values);

/// Structural checks evaluated over a recorded series.
struct SeriesChecks {
  double max_energy_increase_rel = 0.0;  ///< of energy_doubled between consecutive samples
  bool energy_monotone = true;
  double max_div_defect = 0.0;
  bool solenoidal = true;
  double max_partition_error = 0.0;
  bool partition = true;
  double low_mode_initial = 0.0;
  double low_mode_max = 0.0;
  bool low_mode_bounded = true;
  double min_alignment_late = 0.0;  ///< min over t >= alignment_from
  bool alignment_nonnegative = true;

  bool all() const {
    return energy_monotone && solenoidal && partition && low_mode_bounded && alignment_nonnegative;
  }
  nlohmann::json to_json() const;
};

inline constexpr double kEnergyIncreaseTol = 1e-10;
inline constexpr double kSolenoidalTol = 1e-12;
inline constexpr double kPartitionTol = 1e-12;
inline constexpr double kAlignmentFrom = 5.0;

SeriesChecks check_series(const SeriesTable& table);

/// Fits of every predicted series in [t_lo, t_hi], verdicts for the judged
/// ones, and structural checks. Series that are zero or nonpositive in the
/// window are listed as degenerate; judged ones among them are reported as
/// skipped rather than given a verdict.
nlohmann::json summarize(const SeriesTable& table, const FitConfig& fit, double t_lo, double t_hi,
                         int m_max, const std::vector<double>& p_list);

/// True when the summary's verdicts and checks pass.
bool summary_passes(const nlohmann::json& summary);

/// Run a parsed configuration, writing series.csv, summary.json and
/// checkpoints into config.output.directory.
int run(const RunConfig& config, std::ostream& log);
int cli_run(const std::string& config_path, std::ostream& log);

/// Continue from a checkpoint with the given configuration. Rows of an
/// existing series.csv up to the checkpoint time are kept. A checkpoint at or
/// past t_end finalizes without stepping.
int cli_resume(const std::string& checkpoint_path, const std::string& config_path, std::ostream& log);

struct OracleArgs {
  std::string profile = "flat";
  double level = 1.0;
  double cutoff = 1.0;
  double width = 1.0;
  std::vector<double> times;
};

/// Print t, norm and squared norm of the heat-semigroup oracle per time.
int cli_oracle(const OracleArgs& args, std::ostream& out, std::ostream& err);

/// Re-fit an existing series.csv. The configuration, when given, supplies
/// judged series and tolerances.
int cli_fit(const std::string& series_path, double t_lo, double t_hi,
            const std::string& config_path, const std::string& out_path, std::ostream& out);

/// Expand a sweep file into runs over the Cartesian product of its [vary]
/// lists and aggregate their summaries into sweep_report.json. Every
/// configuration is validated before anything is written. The base path is
/// relative to the sweep file; the output directory to the working directory.
int cli_sweep(const std::string& sweep_path, std::ostream& log);

}  // namespace lcd
