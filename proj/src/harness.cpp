#include "lcd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/algorithm/string.hpp>

#include "lcd/checkpoint.hpp"
#include "lcd/errors.hpp"
#include "lcd/grid.hpp"

namespace lcd {

namespace fs = std::filesystem;

int SeriesTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DataError("series table has no column '" + name + "'");
  return static_cast<int>(it - columns.begin());
}

std::vector<double> SeriesTable::column(const std::string& name) const {
  const int j = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

NormSeries SeriesTable::series(const std::string& name) const {
  const int jt = column_index("t");
  const int j = column_index(name);
  NormSeries s;
  s.name = name;
  for (const auto& r : rows) s.samples.emplace_back(r[jt], r[j]);
  return s;
}

SeriesTable read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open series file " + path);
  SeriesTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("series file " + path + " is empty");
  boost::split(table.columns, line, boost::is_any_of(","));
  for (auto& c : table.columns) boost::trim(c);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    boost::split(cells, line, boost::is_any_of(","));
    if (cells.size() != table.columns.size())
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.columns.size()) + " values, got " +
                      std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad number '" + c + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_csv_row(const std::vector<double>& values) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

nlohmann::json SeriesChecks::to_json() const {
  return {{"energy_monotone", {{"pass", energy_monotone}, {"max_rel_increase", max_energy_increase_rel}}},
          {"solenoidal", {{"pass", solenoidal}, {"max_div_defect", max_div_defect}}},
          {"partition", {{"pass", partition}, {"max_rel_error", max_partition_error}}},
          {"low_mode_bound",
           {{"pass", low_mode_bounded}, {"initial", low_mode_initial}, {"max", low_mode_max}}},
          {"alignment", {{"pass", alignment_nonnegative}, {"min_late", min_alignment_late}}}};
}

SeriesChecks check_series(const SeriesTable& table) {
  SeriesChecks c;
  if (table.rows.empty()) throw DataError("series table has no rows");
  const auto t = table.column("t");
  const auto energy = table.column("energy_doubled");
  const auto div = table.column("div_defect");
  const auto l2 = table.column("l2_u_sq");
  const auto low = table.column("split_low_energy_u");
  const auto high = table.column("split_high_energy_u");
  const auto uhat_low = table.column("split_max_uhat_low");
  const auto align = table.column("min_dir_alignment");

  for (std::size_t i = 1; i < energy.size(); ++i) {
    const double rel = (energy[i] - energy[i - 1]) / std::max(std::abs(energy[i - 1]), 1e-300);
    c.max_energy_increase_rel = std::max(c.max_energy_increase_rel, rel);
  }
  c.energy_monotone = c.max_energy_increase_rel <= kEnergyIncreaseTol;

  c.max_div_defect = *std::max_element(div.begin(), div.end());
  c.solenoidal = c.max_div_defect <= kSolenoidalTol;

  for (std::size_t i = 0; i < l2.size(); ++i) {
    if (!(l2[i] > 0.0)) continue;
    c.max_partition_error = std::max(c.max_partition_error, std::abs(low[i] + high[i] - l2[i]) / l2[i]);
  }
  c.partition = c.max_partition_error <= kPartitionTol;

  c.low_mode_initial = uhat_low.front();
  c.low_mode_max = *std::max_element(uhat_low.begin(), uhat_low.end());
  c.low_mode_bounded = c.low_mode_max <= 2.0 * std::max(c.low_mode_initial, 1.0);

  c.min_alignment_late = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= kAlignmentFrom) c.min_alignment_late = std::min(c.min_alignment_late, align[i]);
  if (!std::isfinite(c.min_alignment_late)) c.min_alignment_late = 0.0;
  c.alignment_nonnegative = c.min_alignment_late >= 0.0;
  return c;
}

nlohmann::json summarize(const SeriesTable& table, const FitConfig& fit, double t_lo, double t_hi,
                         int m_max, const std::vector<double>& p_list) {
  ExpectationTable expectations = default_expectations(m_max, p_list);
  for (const auto& [name, tol] : fit.tolerance) {
    const auto it = expectations.find(name);
    if (it == expectations.end()) throw MappingError("tolerance given for unknown series '" + name + "'");
    it->second.tolerance = tol;
  }

  nlohmann::json fits = nlohmann::json::object();
  nlohmann::json degenerate = nlohmann::json::array();
  std::map<std::string, FitResult> fitted;
  for (const auto& [name, expectation] : expectations) {
    if (std::find(table.columns.begin(), table.columns.end(), name) == table.columns.end()) continue;
    try {
      const FitResult r = fit_power_law(table.series(name), t_lo, t_hi);
      fitted[name] = r;
      auto j = to_json(r);
      j["predicted"] = expectation.alpha;
      fits[name] = j;
    } catch (const DataError& e) {
      degenerate.push_back({{"series", name}, {"reason", e.what()}});
    } catch (const FitError& e) {
      degenerate.push_back({{"series", name}, {"reason", e.what()}});
    }
  }

  std::vector<FitResult> judged;
  nlohmann::json missing = nlohmann::json::array();  // judged but degenerate
  for (const auto& name : fit.judged) {
    if (!expectations.count(name)) throw MappingError("judged series '" + name + "' has no prediction");
    const auto it = fitted.find(name);
    if (it == fitted.end())
      missing.push_back(name);
    else
      judged.push_back(it->second);
  }

  // Degenerate judged series are skipped, never silently passed: they are listed.
  nlohmann::json theory = {{"verdicts", nlohmann::json::array()}, {"pass", true}};
  if (!judged.empty()) theory = compare_to_theory(judged, expectations, fit.tol_l2, fit.tol_linf).to_json();
  theory["skipped"] = missing;
  theory["status"] = judged.empty() ? "skipped" : "judged";

  const SeriesChecks checks = check_series(table);
  nlohmann::json out;
  out["fit_window"] = {t_lo, t_hi};
  out["fits"] = fits;
  out["degenerate"] = degenerate;
  out["theory"] = theory;
  out["checks"] = checks.to_json();
  out["checks_pass"] = checks.all();
  out["pass"] = theory["pass"].get<bool>() && checks.all();
  return out;
}

bool summary_passes(const nlohmann::json& summary) {
  return summary.value("pass", false);
}

namespace {

std::string checkpoint_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "chk_t%012.6f.lcdchk", t);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

// Integrates from `state`, appending samples to an already prepared series file.
int run_segment(const RunConfig& config, State state, bool sample_initial,
                const nlohmann::json& extra, std::ostream& log) {
  const fs::path dir(config.output.directory);
  const fs::path csv_path = dir / "series.csv";
  std::ofstream csv(csv_path, std::ios::app);
  if (!csv) throw DataError("cannot open " + csv_path.string());

  const auto& diag = config.sampling.diagnostics;
  long steps = 0;
  Hooks hooks;
  hooks.sample_interval = config.sampling.sample_interval;
  hooks.sample_initial = sample_initial;
  hooks.on_sample = [&](const State& s) {
    const DiagnosticsRecord rec = measure(s, config.physics, diag);
    csv << format_csv_row(rec.column_values()) << '\n';
    csv.flush();
    log << "t=" << rec.t << " |u|^2=" << rec.l2_u_sq << " |d-w0|^2=" << rec.l2_dev_d_sq
        << " E=" << rec.energy_doubled << '\n';
  };
  hooks.checkpoint_interval = config.output.checkpoint_interval;
  hooks.on_checkpoint = [&](const State& s) {
    save_checkpoint((dir / "checkpoints" / checkpoint_name(s.t)).string(), s, config.physics);
  };
  hooks.on_step = [&](const State&, double) { ++steps; };
  hooks.on_blowup = [&](const State& s) {
    save_checkpoint((dir / "blowup_last_good.lcdchk").string(), s, config.physics);
  };

  State final_state;
  try {
    final_state = integrate(std::move(state), config.physics, config.stepper, hooks);
  } catch (BlowUpError& e) {
    e.checkpoint_path = (dir / "blowup_last_good.lcdchk").string();
    csv.close();
    const nlohmann::json summary = {{"run_id", config.run_id},
                                    {"status", "blowup"},
                                    {"blowup_time", e.time()},
                                    {"last_good_checkpoint", e.checkpoint_path},
                                    {"message", e.what()},
                                    {"pass", false}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    log << "blow-up: " << e.what() << '\n';
    return kExitError;
  }
  csv.close();
  save_checkpoint((dir / "final.lcdchk").string(), final_state, config.physics);

  const SeriesTable table = read_series_csv(csv_path.string());
  nlohmann::json summary = summarize(table, config.fit, config.fit.t_lo, config.fit_t_hi(),
                                     diag.m_max, diag.p_list);
  summary["run_id"] = config.run_id;
  summary["status"] = "completed";
  summary["t_final"] = final_state.t;
  summary["steps"] = steps;
  summary["grid"] = {{"L", config.grid.L}, {"N", config.grid.N}};
  summary.update(extra);
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  log << "theory " << (summary["theory"]["pass"].get<bool>() ? "pass" : "fail") << ", checks "
      << (summary["checks_pass"].get<bool>() ? "pass" : "fail") << '\n';
  return summary_passes(summary) ? kExitPass : kExitTheoryFail;
}

void prepare_directory(const RunConfig& config) {
  const fs::path dir(config.output.directory);
  fs::create_directories(dir);
  if (config.output.checkpoint_interval > 0.0) fs::create_directories(dir / "checkpoints");
}

std::string header_line(const DiagnosticsConfig& diag) {
  return boost::join(DiagnosticsRecord::column_names(diag), ",");
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  config.physics.validate();
  config.stepper.validate();
  config.sampling.diagnostics.validate();
  const GridPtr grid = Grid::create(config.grid.L, config.grid.N);
  InitConfig init = config.init;
  init.eta = config.physics.eta;
  const State initial = make_initial_state(init, grid);

  const double smallness = smallness_report(initial.u_hat, initial.d_hat);
  const nlohmann::json small = {{"value", smallness},
                                {"budget", config.smallness_budget},
                                {"within_budget", smallness <= config.smallness_budget}};
  if (smallness > config.smallness_budget)
    log << "warning: initial smallness " << smallness << " exceeds budget "
        << config.smallness_budget << '\n';

  prepare_directory(config);
  write_text(fs::path(config.output.directory) / "series.csv",
             header_line(config.sampling.diagnostics) + "\n");
  return run_segment(config, initial, true, {{"smallness", small}}, log);
}

int cli_run(const std::string& config_path, std::ostream& log) {
  return run(load_config(config_path), log);
}

int cli_resume(const std::string& checkpoint_path, const std::string& config_path,
               std::ostream& log) {
  const RunConfig config = load_config(config_path);
  const GridPtr grid = Grid::create(config.grid.L, config.grid.N);
  Checkpoint chk = load_checkpoint(checkpoint_path, grid);
  if (chk.header.eta != config.physics.eta || chk.header.nu != config.physics.nu)
    throw CheckpointError("checkpoint physics (eta, nu) differ from the configuration");
  const double t_c = chk.state.t;

  prepare_directory(config);
  const fs::path csv_path = fs::path(config.output.directory) / "series.csv";
  const std::string header = header_line(config.sampling.diagnostics);
  std::string kept = header + "\n";
  bool has_tc = false;
  if (fs::exists(csv_path)) {
    const SeriesTable old = read_series_csv(csv_path.string());
    if (boost::join(old.columns, ",") != header)
      throw DataError("existing series.csv columns differ from the configuration");
    for (const auto& r : old.rows) {
      if (r[0] > t_c) break;
      kept += format_csv_row(r) + "\n";
      has_tc = has_tc || r[0] == t_c;
    }
  }
  write_text(csv_path, kept);
  log << "resuming from t=" << t_c << '\n';
  return run_segment(config, std::move(chk.state), !has_tc, {{"resumed_from", t_c}}, log);
}

int cli_oracle(const OracleArgs& args, std::ostream& out, std::ostream& err) {
  if (args.times.empty()) {
    err << "oracle: at least one time is required\n";
    return kExitError;
  }
  RadialProfile profile;
  if (args.profile == "flat")
    profile = RadialProfile::flat(args.level, args.cutoff);
  else if (args.profile == "gaussian")
    profile = RadialProfile::gaussian(args.level, args.width);
  else {
    err << "oracle: unknown profile '" << args.profile << "' (flat, gaussian)\n";
    return kExitError;
  }
  out << "t,norm,norm_sq\n";
  for (double t : args.times) {
    const double v = heat_oracle_l2(profile, t);
    out << format_csv_row({t, v, v * v}) << '\n';
  }
  return kExitPass;
}

int cli_fit(const std::string& series_path, double t_lo, double t_hi,
            const std::string& config_path, const std::string& out_path, std::ostream& out) {
  const SeriesTable table = read_series_csv(series_path);
  FitConfig fit;
  DiagnosticsConfig diag;
  if (!config_path.empty()) {
    const RunConfig config = load_config(config_path);
    fit = config.fit;
    diag = config.sampling.diagnostics;
    if (t_hi < 0.0) t_hi = config.fit_t_hi();
  }
  if (t_hi < 0.0) {
    const auto t = table.column("t");
    if (t.empty()) throw DataError("series has no rows");
    t_hi = t.back();
  }
  const nlohmann::json summary = summarize(table, fit, t_lo, t_hi, diag.m_max, diag.p_list);
  const std::string text = summary.dump(2) + "\n";
  if (out_path.empty())
    out << text;
  else
    write_text(out_path, text);
  return summary_passes(summary) ? kExitPass : kExitTheoryFail;
}

namespace {

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

}  // namespace

int cli_sweep(const std::string& sweep_path, std::ostream& log) {
  const auto tree = read_config_tree(sweep_path);
  const fs::path sweep_dir = fs::path(sweep_path).parent_path();
  std::string base;
  std::string directory = "sweep";
  int workers = 1;
  std::vector<SweepAxis> axes;
  for (const auto& [section, body] : tree) {
    if (section == "sweep") {
      for (const auto& [key, value] : body) {
        const std::string v = value.get_value<std::string>();
        if (key == "base")
          base = v;
        else if (key == "directory")
          directory = v;
        else if (key == "workers") {
          try {
            workers = std::stoi(v);
          } catch (const std::exception&) {
            throw ConfigError("sweep.workers: not an integer: '" + v + "'");
          }
          if (workers < 1) throw ConfigError("sweep.workers: must be at least 1");
        } else
          throw ConfigError("sweep." + key + ": unknown key");
      }
    } else if (section == "vary") {
      for (const auto& [key, value] : body) {
        SweepAxis axis;
        axis.key = key;
        boost::split(axis.values, value.get_value<std::string>(), boost::is_any_of(","));
        for (auto& v : axis.values) boost::trim(v);
        if (axis.values.empty() || axis.values.front().empty())
          throw ConfigError("vary." + key + ": empty value list");
        axes.push_back(std::move(axis));
      }
    } else {
      throw ConfigError(section + ": unknown section in sweep file");
    }
  }
  if (base.empty()) throw ConfigError("sweep.base: missing base configuration");
  const fs::path base_path = fs::path(base).is_absolute() ? fs::path(base) : sweep_dir / base;
  const auto base_tree = read_config_tree(base_path.string());

  // Expand the Cartesian product, last axis fastest.
  std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& c : combos)
      for (const auto& v : axis.values) {
        auto e = c;
        e.emplace_back(axis.key, v);
        next.push_back(std::move(e));
      }
    combos = std::move(next);
  }

  // Build and validate every configuration before starting any run.
  struct Job {
    std::string id;
    RunConfig config;
    nlohmann::json overrides;
    int exit_code = kExitError;
    std::string error;
  };
  std::vector<Job> jobs;
  std::vector<boost::property_tree::ptree> trees;
  const fs::path out_dir(directory);
  for (std::size_t i = 0; i < combos.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "run_%03zu", i);
    auto t = base_tree;
    Job job;
    job.id = id;
    job.overrides = nlohmann::json::object();
    for (const auto& [key, value] : combos[i]) {
      t.put(boost::property_tree::ptree::path_type(key, '.'), value);
      job.overrides[key] = value;
    }
    const fs::path run_dir = out_dir / id;
    t.put("output.directory", run_dir.string());
    t.put("run.id", job.id);
    job.config = parse_config(t);
    jobs.push_back(std::move(job));
    trees.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const fs::path run_dir(jobs[i].config.output.directory);
    fs::create_directories(run_dir);
    write_config_tree(trees[i], (run_dir / "config.ini").string());
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      Job& job = jobs[i];
      std::ofstream run_log(fs::path(job.config.output.directory) / "run.log");
      try {
        job.exit_code = run(job.config, run_log);
      } catch (const std::exception& e) {
        job.exit_code = kExitError;
        job.error = e.what();
        run_log << "error: " << e.what() << '\n';
      }
      std::lock_guard lock(log_mutex);
      log << job.id << " exit " << job.exit_code << '\n';
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::min<int>(workers, static_cast<int>(jobs.size()));
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  }

  nlohmann::json runs = nlohmann::json::array();
  std::map<std::string, std::vector<double>> alphas;
  int exit = kExitPass;
  for (const auto& job : jobs) {
    nlohmann::json entry = {{"id", job.id}, {"overrides", job.overrides}, {"exit_code", job.exit_code}};
    if (!job.error.empty()) entry["error"] = job.error;
    const fs::path summary_path = fs::path(job.config.output.directory) / "summary.json";
    if (fs::exists(summary_path)) {
      std::ifstream in(summary_path);
      const auto summary = nlohmann::json::parse(in);
      entry["pass"] = summary.value("pass", false);
      if (summary.contains("fits")) {
        nlohmann::json a = nlohmann::json::object();
        for (const auto& [name, f] : summary["fits"].items()) {
          a[name] = f["alpha"];
          alphas[name].push_back(f["alpha"].get<double>());
        }
        entry["alpha"] = a;
      }
    }
    if (job.exit_code == kExitError)
      exit = kExitError;
    else if (job.exit_code == kExitTheoryFail && exit == kExitPass)
      exit = kExitTheoryFail;
    runs.push_back(entry);
  }
  nlohmann::json aggregate = nlohmann::json::object();
  for (const auto& [name, v] : alphas) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    aggregate[name] = {{"mean", mean},
                       {"min", *std::min_element(v.begin(), v.end())},
                       {"max", *std::max_element(v.begin(), v.end())},
                       {"count", v.size()}};
  }
  const nlohmann::json report = {{"runs", runs}, {"alpha", aggregate}, {"exit_code", exit}};
  write_text(out_dir / "sweep_report.json", report.dump(2) + "\n");
  return exit;
}

}  // namespace lcd
