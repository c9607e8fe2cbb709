#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lcd/errors.hpp"
#include "lcd/harness.hpp"

using namespace lcd;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lcd_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

// A 16^3 run that finishes in about a second.
std::string tiny_config(const fs::path& out, double t_end, const std::string& extra = "") {
  std::ostringstream s;
  s << "[run]\nid = tiny\n"
    << "[grid]\nL = 16pi\nN = 16\n"
    << "[init]\nu_amplitude = 1e-3\nu_k_hi = 0.6\nd_perturb_amplitude = 5e-3\nd_k_hi = 0.6\n"
    << "[stepper]\ndt_max = 0.2\nt_end = " << t_end << "\n"
    << "[diagnostics]\nsample_interval = 0.5\n"
    << "[fit]\nt_lo = 2\nt_hi = 12\n"
    << "[output]\ndirectory = " << out.string() << "\ncheckpoint_interval = 4\n"
    << extra;
  return s.str();
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

bool completed(int code) { return code == kExitPass || code == kExitTheoryFail; }

}  // namespace

TEST_CASE("CSV rows round trip") {
  const fs::path dir = fresh_dir("csv");
  const std::vector<double> row{0.1, 1.0 / 3.0, 1e-300, -2.5e17};
  write_file(dir / "s.csv", "t,a,b,c\n" + format_csv_row(row) + "\n\n" + format_csv_row(row) + "\n");
  const SeriesTable t = read_series_csv((dir / "s.csv").string());
  CHECK(t.columns == std::vector<std::string>{"t", "a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == row);
  CHECK(t.column("b") == std::vector<double>{1e-300, 1e-300});
  CHECK(t.series("a").samples.front() == std::pair<double, double>(0.1, 1.0 / 3.0));
  CHECK_THROWS_AS(t.column("zz"), DataError);

  write_file(dir / "short.csv", "t,a\n1\n");
  CHECK_THROWS_AS(read_series_csv((dir / "short.csv").string()), DataError);
  write_file(dir / "bad.csv", "t,a\n1,x\n");
  CHECK_THROWS_AS(read_series_csv((dir / "bad.csv").string()), DataError);
  CHECK_THROWS_AS(read_series_csv((dir / "missing.csv").string()), DataError);
}

TEST_CASE("run writes series, checkpoints and summary") {
  const fs::path dir = fresh_dir("run");
  std::ostringstream log;
  const int code = cli_run(write_file(dir / "c.ini", tiny_config(dir / "out", 12)).string(), log);
  CHECK(completed(code));
  const fs::path out = dir / "out";
  CHECK(fs::exists(out / "final.lcdchk"));
  for (const char* name : {"chk_t00004.000000.lcdchk", "chk_t00008.000000.lcdchk", "chk_t00012.000000.lcdchk"})
    CHECK_MESSAGE(fs::exists(out / "checkpoints" / name), name);

  const SeriesTable t = read_series_csv((out / "series.csv").string());
  CHECK(t.rows.size() == 25);
  CHECK(t.rows.front()[0] == 0.0);
  CHECK(t.rows.back()[0] == 12.0);
  CHECK(t.columns == std::vector<std::string>{
                         "t", "l2_u_sq", "linf_u", "linf_grad_u", "phi0_sq", "phi1_sq", "phi2_sq",
                         "psi0_sq", "psi1_sq", "psi2_sq", "l2_D0u_sq", "l2_D1u_sq", "l2_D2u_sq",
                         "l2_D0dev_d_sq", "l2_D1dev_d_sq", "l2_D2dev_d_sq", "l2_D3dev_d_sq",
                         "l2_grad_d_sq", "l2_dev_d_sq", "lp_dev_d_p2", "lp_dev_d_p4", "lp_dev_d_p7",
                         "linf_dev_d", "linf_grad_d", "linf_d2_d", "energy_total", "energy_kinetic",
                         "energy_elastic", "energy_penalty", "energy_doubled", "split_low_energy_u",
                         "split_high_energy_u", "split_radius", "split_max_uhat_low",
                         "min_dir_alignment", "div_defect"});

  const auto s = read_json(out / "summary.json");
  CHECK(s["status"] == "completed");
  CHECK(s["run_id"] == "tiny");
  CHECK(s["t_final"] == 12.0);
  CHECK(s["theory"]["status"] == "judged");
  CHECK(s["checks_pass"] == true);
  CHECK(s["smallness"]["within_budget"] == true);
  CHECK(s["fits"].contains("l2_u_sq"));
  CHECK(s["fit_window"] == nlohmann::json::array({2.0, 12.0}));
  CHECK(summary_passes(s) == (code == kExitPass));
}

TEST_CASE("identical configurations give byte-identical series") {
  const fs::path dir = fresh_dir("rerun");
  std::ostringstream log;
  cli_run(write_file(dir / "a.ini", tiny_config(dir / "a", 6)).string(), log);
  cli_run(write_file(dir / "b.ini", tiny_config(dir / "b", 6)).string(), log);
  CHECK(slurp(dir / "a" / "series.csv") == slurp(dir / "b" / "series.csv"));
  CHECK(slurp(dir / "a" / "final.lcdchk") == slurp(dir / "b" / "final.lcdchk"));
}

TEST_CASE("zero initial data is degenerate, not a pass or a failure") {
  const fs::path dir = fresh_dir("zero");
  std::ostringstream log;
  std::string text = tiny_config(dir / "out", 4);
  text.replace(text.find("u_amplitude = 1e-3"), 18, "u_amplitude = 0");
  text.replace(text.find("d_perturb_amplitude = 5e-3"), 26, "d_perturb_amplitude = 0");
  const int code = cli_run(write_file(dir / "c.ini", text).string(), log);
  CHECK(code == kExitPass);
  const auto s = read_json(dir / "out" / "summary.json");
  CHECK(s["theory"]["status"] == "skipped");
  CHECK(s["theory"]["skipped"].size() == 7);
  CHECK(s["fits"].empty());
  CHECK(s["degenerate"].size() > 0);
}

TEST_CASE("resume reproduces an unsplit run") {
  const fs::path dir = fresh_dir("resume");
  std::ostringstream log;
  cli_run(write_file(dir / "whole.ini", tiny_config(dir / "whole", 12)).string(), log);

  cli_run(write_file(dir / "first.ini", tiny_config(dir / "split", 4)).string(), log);
  const fs::path rest = write_file(dir / "rest.ini", tiny_config(dir / "split", 12));
  const int code = cli_resume((dir / "split" / "checkpoints" / "chk_t00004.000000.lcdchk").string(),
                              rest.string(), log);
  CHECK(completed(code));
  CHECK(slurp(dir / "whole" / "series.csv") == slurp(dir / "split" / "series.csv"));
  CHECK(slurp(dir / "whole" / "final.lcdchk") == slurp(dir / "split" / "final.lcdchk"));
  const auto a = read_json(dir / "whole" / "summary.json");
  const auto b = read_json(dir / "split" / "summary.json");
  CHECK(b["resumed_from"] == 4.0);
  CHECK(a["fits"] == b["fits"]);

  SUBCASE("resuming from a later checkpoint regenerates the same series") {
    const std::string before = slurp(dir / "split" / "series.csv");
    CHECK(completed(cli_resume((dir / "split" / "checkpoints" / "chk_t00008.000000.lcdchk").string(),
                               rest.string(), log)));
    CHECK(slurp(dir / "split" / "series.csv") == before);
  }

  SUBCASE("a checkpoint at t_end finalizes without stepping") {
    const std::string before = slurp(dir / "split" / "series.csv");
    CHECK(completed(cli_resume((dir / "split" / "final.lcdchk").string(), rest.string(), log)));
    CHECK(read_json(dir / "split" / "summary.json")["steps"] == 0);
    CHECK(slurp(dir / "split" / "series.csv") == before);
  }

  SUBCASE("mismatched grid or physics is refused") {
    const fs::path other = write_file(dir / "other.ini", tiny_config(dir / "other", 12, "[physics]\neta = 0.5\n"));
    CHECK_THROWS_AS(cli_resume((dir / "split" / "final.lcdchk").string(), other.string(), log), CheckpointError);
    std::string text = tiny_config(dir / "other", 12);
    text.replace(text.find("N = 16"), 6, "N = 24");
    const fs::path wide = write_file(dir / "wide.ini", text);
    CHECK_THROWS_AS(cli_resume((dir / "split" / "final.lcdchk").string(), wide.string(), log), CheckpointError);
  }
}

TEST_CASE("blow-up keeps the last good state") {
  const fs::path dir = fresh_dir("blowup");
  const std::string text =
      "[grid]\nL = 2pi\nN = 8\n[physics]\neta = 1e-3\n"
      "[init]\nu_amplitude = 0\nu_k_hi = 1\nd_perturb_amplitude = 0.4\nd_k_hi = 1\nnormalize_d = false\n"
      "[stepper]\ndt_init = 0.5\ndt_max = 0.5\nt_end = 50\n"
      "[output]\ndirectory = " + (dir / "out").string() + "\n";
  std::ostringstream log;
  CHECK(cli_run(write_file(dir / "c.ini", text).string(), log) == kExitError);
  CHECK(fs::exists(dir / "out" / "blowup_last_good.lcdchk"));
  const auto s = read_json(dir / "out" / "summary.json");
  CHECK(s["status"] == "blowup");
  CHECK(s["pass"] == false);
}

TEST_CASE("oracle subcommand") {
  OracleArgs args;
  args.cutoff = 0.5;
  args.times = {10.0, 100.0};
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cli_oracle(args, out, err) == kExitPass);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,norm,norm_sq");
  std::vector<double> sq;
  while (std::getline(lines, line)) sq.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  REQUIRE(sq.size() == 2);
  CHECK(std::abs(sq[0] / sq[1] / std::pow(10.0, 1.5) - 1.0) < 0.02);

  args.times.clear();
  CHECK(cli_oracle(args, out, err) == kExitError);
  args.times = {1.0};
  args.profile = "box";
  CHECK(cli_oracle(args, out, err) == kExitError);
}

TEST_CASE("fit subcommand matches the run summary") {
  const fs::path dir = fresh_dir("fit");
  std::ostringstream log;
  const fs::path cfg = write_file(dir / "c.ini", tiny_config(dir / "out", 12));
  const int code = cli_run(cfg.string(), log);
  const fs::path series = dir / "out" / "series.csv";
  std::ostringstream out;
  CHECK(cli_fit(series.string(), 2.0, -1.0, cfg.string(), (dir / "fit.json").string(), out) == code);
  const auto refit = read_json(dir / "fit.json");
  const auto summary = read_json(dir / "out" / "summary.json");
  CHECK(refit["fits"] == summary["fits"]);

  const int wide = cli_fit(series.string(), 1.0, -1.0, "", "", out);
  CHECK(completed(wide));
  const auto printed = nlohmann::json::parse(out.str());
  CHECK(printed["fit_window"] == nlohmann::json::array({1.0, 12.0}));
}

TEST_CASE("sweep expands the Cartesian product") {
  const fs::path dir = fresh_dir("sweep");
  write_file(dir / "base.ini", tiny_config(dir / "unused", 12));
  std::ostringstream log;
  const fs::path sweep = write_file(dir / "s.ini", "[sweep]\nbase = base.ini\ndirectory = " +
                                                      (dir / "out").string() +
                                                      "\nworkers = 2\n[vary]\nphysics.eta = 1, 0.5\ninit.seed = 1, 2\n");
  CHECK(completed(cli_sweep(sweep.string(), log)));
  const auto report = read_json(dir / "out" / "sweep_report.json");
  REQUIRE(report["runs"].size() == 4);
  for (int i = 0; i < 4; ++i) {
    const fs::path run = dir / "out" / ("run_00" + std::to_string(i));
    CHECK(fs::exists(run / "summary.json"));
    CHECK(fs::exists(run / "config.ini"));
    CHECK(completed(report["runs"][i]["exit_code"].get<int>()));
  }
  CHECK(report["runs"][1]["overrides"]["physics.eta"] == "1");
  CHECK(report["runs"][1]["overrides"]["init.seed"] == "2");
  CHECK(report["alpha"]["l2_u_sq"]["count"] == 4);

  SUBCASE("a single-entry sweep matches a direct run") {
    const fs::path one = write_file(dir / "one.ini", "[sweep]\nbase = base.ini\ndirectory = " +
                                                         (dir / "one").string() + "\n");
    cli_sweep(one.string(), log);
    cli_run(write_file(dir / "direct.ini", tiny_config(dir / "direct", 12)).string(), log);
    CHECK(slurp(dir / "one" / "run_000" / "series.csv") == slurp(dir / "direct" / "series.csv"));
  }

  SUBCASE("a failing run makes the sweep fail") {
    const fs::path strict = write_file(dir / "strict.ini", "[sweep]\nbase = base.ini\ndirectory = " +
                                                               (dir / "strict").string() +
                                                               "\n[vary]\nfit.tol_l2 = 10, 1e-9\n");
    CHECK(cli_sweep(strict.string(), log) == kExitTheoryFail);
    const auto r = read_json(dir / "strict" / "sweep_report.json");
    CHECK(r["runs"][1]["exit_code"] == kExitTheoryFail);
    CHECK(r["exit_code"] == kExitTheoryFail);
  }

  SUBCASE("malformed sweep files") {
    CHECK_THROWS_AS(cli_sweep(write_file(dir / "nobase.ini", "[sweep]\nworkers = 1\n").string(), log), ConfigError);
    const fs::path bad = write_file(dir / "badkey.ini", "[sweep]\nbase = base.ini\ndirectory = " +
                                                            (dir / "bad").string() + "\n[vary]\nphysics.viscosity = 1\n");
    CHECK_THROWS_AS(cli_sweep(bad.string(), log), ConfigError);
    CHECK_FALSE(fs::exists(dir / "bad"));
  }
}

TEST_CASE("velocity exponent is stable under changes of eta") {
  const fs::path dir = fresh_dir("eta");
  write_file(dir / "base.ini",
             "[grid]\nL = 32pi\nN = 32\n"
             "[init]\nu_amplitude = 1e-3\nu_k_hi = 0.6\nd_perturb_amplitude = 5e-3\nd_k_hi = 0.6\n"
             "[stepper]\ndt_max = 0.2\nt_end = 25\n"
             "[fit]\nt_lo = 5\nt_hi = 25\n");
  const fs::path sweep = write_file(dir / "s.ini", "[sweep]\nbase = base.ini\ndirectory = " +
                                                      (dir / "out").string() +
                                                      "\nworkers = 2\n[vary]\nphysics.eta = 0.5, 1\n");
  std::ostringstream log;
  cli_sweep(sweep.string(), log);
  const auto report = read_json(dir / "out" / "sweep_report.json");
  const auto& alpha = report["alpha"]["l2_u_sq"];
  REQUIRE(alpha["count"] == 2);
  CHECK(alpha["max"].get<double>() - alpha["min"].get<double>() <= 0.1);
}
