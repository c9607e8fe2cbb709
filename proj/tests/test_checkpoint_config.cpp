#include <doctest.h>

#include <boost/property_tree/ini_parser.hpp>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "lcd/checkpoint.hpp"
#include "lcd/config.hpp"
#include "lcd/errors.hpp"
#include "support.hpp"

using namespace lcd;
using lcd::test::kTwoPi;

namespace {

State random_state(const GridPtr& g) {
  State s = State::rest(g, Eigen::Vector3d(0.0, 0.6, 0.8));
  s.t = 12.375;
  s.u_hat = test::random_velocity(g, 11, 0.1, 3);
  s.d_hat = test::random_field(g, 3, 12, 3);
  return s;
}

RunConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  boost::property_tree::ptree tree;
  boost::property_tree::read_ini(in, tree);
  return parse_config(tree);
}

std::string config_error(const std::string& text) {
  try {
    parse_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const std::string kMinimal = "[grid]\nL = 2pi\nN = 16\n";

}  // namespace

TEST_CASE("checkpoint round trip is bit-exact") {
  const auto g = Grid::create(3.0 * kTwoPi, 16);
  const State s = random_state(g);
  const PhysicsParams params{0.5, 1.25};
  const auto bytes = encode_checkpoint(s, params);
  CHECK(bytes.size() == kCheckpointHeaderBytes + 2 * 3 * 16 * 16 * 16 * 16 + 4);

  const Checkpoint c = decode_checkpoint(bytes);
  CHECK(c.header.N == 16);
  CHECK(c.header.L == 3.0 * kTwoPi);
  CHECK(c.header.t == s.t);
  CHECK(c.header.eta == 0.5);
  CHECK(c.header.nu == 1.25);
  CHECK(c.state.w0 == s.w0);
  CHECK(c.state.t == s.t);
  CHECK((c.state.u_hat.coeffs() == s.u_hat.coeffs()).all());
  CHECK((c.state.d_hat.coeffs() == s.d_hat.coeffs()).all());
  CHECK(encode_checkpoint(c.state, params) == bytes);

  const Checkpoint shared = decode_checkpoint(bytes, g);
  CHECK(&shared.state.grid() == g.get());
  CHECK(decode_checkpoint_header(bytes).t == s.t);

  const auto path = std::filesystem::temp_directory_path() / "lcd_test_roundtrip.lcdchk";
  save_checkpoint(path.string(), s, params);
  const Checkpoint loaded = load_checkpoint(path.string(), g);
  CHECK((loaded.state.u_hat.coeffs() == s.u_hat.coeffs()).all());
  std::filesystem::remove(path);
}

TEST_CASE("damaged checkpoints are refused") {
  const auto g = Grid::create(kTwoPi, 8);
  const auto bytes = encode_checkpoint(random_state(g), PhysicsParams{});

  auto corrupt = [&](std::size_t offset) {
    auto copy = bytes;
    copy[offset] ^= 0x01;
    return copy;
  };
  CHECK_THROWS_AS(decode_checkpoint(corrupt(0)), CheckpointError);
  CHECK_THROWS_AS(decode_checkpoint(corrupt(30)), CheckpointError);
  CHECK_THROWS_AS(decode_checkpoint(corrupt(kCheckpointHeaderBytes + 100)), CheckpointError);
  CHECK_THROWS_AS(decode_checkpoint(corrupt(bytes.size() - 1)), CheckpointError);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_checkpoint(truncated), CheckpointError);
  CHECK_THROWS_AS(decode_checkpoint({bytes.begin(), bytes.begin() + 40}), CheckpointError);

  CHECK_THROWS_AS(decode_checkpoint(bytes, Grid::create(kTwoPi, 16)), CheckpointError);
  CHECK_THROWS_AS(decode_checkpoint(bytes, Grid::create(2.0, 8)), CheckpointError);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/lcd.lcdchk"), CheckpointError);
}

TEST_CASE("reals accept a pi factor") {
  CHECK(parse_real("64pi", "f") == 64.0 * std::numbers::pi);
  CHECK(parse_real("2 * pi", "f") == 2.0 * std::numbers::pi);
  CHECK(parse_real("pi", "f") == std::numbers::pi);
  CHECK(parse_real(" 1e-3 ", "f") == 1e-3);
  CHECK_THROWS_AS(parse_real("3x", "f"), ConfigError);
  CHECK_THROWS_AS(parse_real("", "f"), ConfigError);
}

TEST_CASE("full configuration") {
  const RunConfig c = parse_text(R"(
[run]
id = demo
smallness_budget = 0.05
[grid]
L = 4pi
N = 32
[physics]
eta = 0.5
nu = 2
nonlinear = false
[init]
seed = 9
u_amplitude = 1e-3
u_k_hi = 0.75
u_profile = gaussian
u_phases = random
d_perturb_amplitude = 0.01
w0 = 0, 0.6, 0.8
normalize_d = no
[stepper]
scheme = if-euler
dt_max = 0.3
t_end = 20
[diagnostics]
sample_interval = 0.5
m_max = 2
p_list = 2, 3
[fit]
t_lo = 4
t_hi = 18
series = l2_u_sq, linf_u
tolerances = l2_u_sq:0.1, linf_u : 0.4
[output]
directory = out/demo
checkpoint_interval = 5
)");
  CHECK(c.run_id == "demo");
  CHECK(c.smallness_budget == 0.05);
  CHECK(c.grid.L == 4.0 * std::numbers::pi);
  CHECK(c.grid.N == 32);
  CHECK(c.physics.eta == 0.5);
  CHECK(c.init.eta == 0.5);
  CHECK(c.physics.nu == 2.0);
  CHECK_FALSE(c.physics.nonlinear);
  CHECK(c.init.seed == 9);
  CHECK(c.init.u_profile == SpectrumProfile::Gaussian);
  CHECK(c.init.u_phases == PhaseMode::Random);
  CHECK(c.init.w0 == Eigen::Vector3d(0.0, 0.6, 0.8));
  CHECK_FALSE(c.init.normalize_d);
  CHECK(c.stepper.scheme == Scheme::IfEuler);
  CHECK(c.sampling.sample_interval == 0.5);
  CHECK(c.sampling.diagnostics.p_list == std::vector<double>{2.0, 3.0});
  CHECK(c.fit.judged == std::vector<std::string>{"l2_u_sq", "linf_u"});
  CHECK(c.fit.tolerance.at("linf_u") == 0.4);
  CHECK(c.fit_t_hi() == 18.0);
  CHECK(c.output.directory == "out/demo");
  CHECK(c.output.checkpoint_interval == 5.0);
}

TEST_CASE("fit window default") {
  RunConfig c = parse_text(kMinimal + "[stepper]\nt_end = 100\n");
  CHECK(c.fit_t_hi() == doctest::Approx(0.1));
  c = parse_text("[grid]\nL = 200pi\nN = 16\n[stepper]\nt_end = 100\n");
  CHECK(c.fit_t_hi() == 100.0);
}

TEST_CASE("configuration errors name the field") {
  CHECK(config_error("[grid]\nN = 16\n").find("grid.L") != std::string::npos);
  CHECK(config_error(kMinimal + "[gird]\nx = 1\n").find("[gird]") != std::string::npos);
  CHECK(config_error(kMinimal + "[physics]\nviscosity = 1\n").find("physics.viscosity") != std::string::npos);
  CHECK(config_error(kMinimal + "[physics]\neta = fast\n").find("physics.eta") != std::string::npos);
  CHECK(config_error("[grid]\nL = 2pi\nN = 16.5\n").find("grid.N") != std::string::npos);
  CHECK(config_error(kMinimal + "[init]\nw0 = 0, 1\n").find("init.w0") != std::string::npos);
  CHECK(config_error(kMinimal + "[init]\nu_profile = box\n").find("init.u_profile") != std::string::npos);
  CHECK(config_error(kMinimal + "[stepper]\nscheme = rk4\n").find("stepper.scheme") != std::string::npos);
  CHECK(config_error(kMinimal + "[fit]\ntolerances = l2_u_sq\n").find("fit.tolerances") != std::string::npos);
  CHECK(config_error(kMinimal + "[physics]\nnonlinear = maybe\n").find("physics.nonlinear") != std::string::npos);
  CHECK(config_error(kMinimal + "[diagnostics]\nsample_interval = 0\n").find("sample_interval") != std::string::npos);
  CHECK(config_error(kMinimal + "[stepper]\ncfl_number = 2\n").find("stepper") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/lcd.ini"), ConfigError);
}

TEST_CASE("shipped configurations parse") {
  for (const char* name : {"desk.ini", "full.ini"}) {
    const RunConfig c = load_config(std::string(LCD_CONFIG_DIR) + "/" + name);
    CHECK(c.grid.N > 0);
    CHECK(c.fit_t_hi() <= c.stepper.t_end);
  }
}
