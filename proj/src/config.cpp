#include "lcd/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "lcd/errors.hpp"

namespace lcd {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& p : parts) boost::trim(p);
  parts.erase(std::remove(parts.begin(), parts.end(), std::string{}), parts.end());
  return parts;
}

int parse_int(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(field + ": expected an integer, got '" + text + "'");
  }
}

bool parse_bool(const std::string& text, const std::string& field) {
  const std::string v = boost::to_lower_copy(text);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError(field + ": expected a boolean, got '" + text + "'");
}

template <typename Fn>
auto rethrow_as_config(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

using Setter = std::function<void(RunConfig&, const std::string& value, const std::string& field)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"run",
       {{"id", [](RunConfig& c, const std::string& v, const std::string&) { c.run_id = v; }},
        {"smallness_budget", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.smallness_budget = parse_real(v, f);
         }}}},
      {"grid",
       {{"L", [](RunConfig& c, const std::string& v, const std::string& f) { c.grid.L = parse_real(v, f); }},
        {"N", [](RunConfig& c, const std::string& v, const std::string& f) { c.grid.N = parse_int(v, f); }}}},
      {"physics",
       {{"eta", [](RunConfig& c, const std::string& v, const std::string& f) { c.physics.eta = parse_real(v, f); }},
        {"nu", [](RunConfig& c, const std::string& v, const std::string& f) { c.physics.nu = parse_real(v, f); }},
        {"nonlinear", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.physics.nonlinear = parse_bool(v, f);
         }}}},
      {"init",
       {{"seed", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.init.seed = static_cast<std::uint64_t>(parse_int(v, f));
         }},
        {"u_amplitude", [](RunConfig& c, const std::string& v, const std::string& f) { c.init.u_amplitude = parse_real(v, f); }},
        {"u_k_lo", [](RunConfig& c, const std::string& v, const std::string& f) { c.init.u_k_lo = parse_real(v, f); }},
        {"u_k_hi", [](RunConfig& c, const std::string& v, const std::string& f) { c.init.u_k_hi = parse_real(v, f); }},
        {"u_profile", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.init.u_profile = rethrow_as_config(f, [&] { return parse_profile(v); });
         }},
        {"u_gauss_width", [](RunConfig& c, const std::string& v, const std::string& f) { c.init.u_gauss_width = parse_real(v, f); }},
        {"u_phases", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.init.u_phases = rethrow_as_config(f, [&] { return parse_phase_mode(v); });
         }},
        {"d_perturb_amplitude", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.init.d_perturb_amplitude = parse_real(v, f);
         }},
        {"d_k_lo", [](RunConfig& c, const std::string& v, const std::string& f) { c.init.d_k_lo = parse_real(v, f); }},
        {"d_k_hi", [](RunConfig& c, const std::string& v, const std::string& f) { c.init.d_k_hi = parse_real(v, f); }},
        {"d_profile", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.init.d_profile = rethrow_as_config(f, [&] { return parse_profile(v); });
         }},
        {"d_gauss_width", [](RunConfig& c, const std::string& v, const std::string& f) { c.init.d_gauss_width = parse_real(v, f); }},
        {"d_phases", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.init.d_phases = rethrow_as_config(f, [&] { return parse_phase_mode(v); });
         }},
        {"w0", [](RunConfig& c, const std::string& v, const std::string& f) {
           const auto parts = split_list(v);
           if (parts.size() != 3) throw ConfigError(f + ": expected three comma-separated components");
           for (int i = 0; i < 3; ++i) c.init.w0(i) = parse_real(parts[i], f);
         }},
        {"normalize_d", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.init.normalize_d = parse_bool(v, f);
         }}}},
      {"stepper",
       {{"dt_init", [](RunConfig& c, const std::string& v, const std::string& f) { c.stepper.dt_init = parse_real(v, f); }},
        {"cfl_number", [](RunConfig& c, const std::string& v, const std::string& f) { c.stepper.cfl_number = parse_real(v, f); }},
        {"dt_max", [](RunConfig& c, const std::string& v, const std::string& f) { c.stepper.dt_max = parse_real(v, f); }},
        {"t_end", [](RunConfig& c, const std::string& v, const std::string& f) { c.stepper.t_end = parse_real(v, f); }},
        {"scheme", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.stepper.scheme = rethrow_as_config(f, [&] { return parse_scheme(v); });
         }}}},
      {"diagnostics",
       {{"sample_interval", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.sampling.sample_interval = parse_real(v, f);
         }},
        {"m_max", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.sampling.diagnostics.m_max = parse_int(v, f);
         }},
        {"p_list", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.sampling.diagnostics.p_list.clear();
           for (const auto& p : split_list(v)) c.sampling.diagnostics.p_list.push_back(parse_real(p, f));
         }},
        {"split_k_const", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.sampling.diagnostics.split_k_const = parse_real(v, f);
         }}}},
      {"fit",
       {{"t_lo", [](RunConfig& c, const std::string& v, const std::string& f) { c.fit.t_lo = parse_real(v, f); }},
        {"t_hi", [](RunConfig& c, const std::string& v, const std::string& f) { c.fit.t_hi = parse_real(v, f); }},
        {"tol_l2", [](RunConfig& c, const std::string& v, const std::string& f) { c.fit.tol_l2 = parse_real(v, f); }},
        {"tol_linf", [](RunConfig& c, const std::string& v, const std::string& f) { c.fit.tol_linf = parse_real(v, f); }},
        {"series", [](RunConfig& c, const std::string& v, const std::string&) { c.fit.judged = split_list(v); }},
        {"tolerances", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.fit.tolerance.clear();
           for (const auto& item : split_list(v)) {
             const auto colon = item.find(':');
             if (colon == std::string::npos) throw ConfigError(f + ": expected name:tolerance, got '" + item + "'");
             c.fit.tolerance[boost::trim_copy(item.substr(0, colon))] =
                 parse_real(boost::trim_copy(item.substr(colon + 1)), f);
           }
         }}}},
      {"output",
       {{"directory", [](RunConfig& c, const std::string& v, const std::string&) { c.output.directory = v; }},
        {"checkpoint_interval", [](RunConfig& c, const std::string& v, const std::string& f) {
           c.output.checkpoint_interval = parse_real(v, f);
         }}}},
  };
  return s;
}

void validate(const RunConfig& c) {
  if (c.grid.N == 0 || c.grid.L == 0.0) throw ConfigError("grid.L and grid.N are required");
  if (!(c.sampling.sample_interval > 0.0))
    throw ConfigError("diagnostics.sample_interval: must be positive");
  if (c.output.checkpoint_interval < 0.0)
    throw ConfigError("output.checkpoint_interval: must be non-negative");
  rethrow_as_config("physics", [&] { c.physics.validate(); return 0; });
  rethrow_as_config("stepper", [&] { c.stepper.validate(); return 0; });
  rethrow_as_config("diagnostics", [&] { c.sampling.diagnostics.validate(); return 0; });
}

}  // namespace

double parse_real(const std::string& raw, const std::string& field) {
  std::string text = boost::algorithm::to_lower_copy(boost::trim_copy(raw));
  double factor = 1.0;
  if (boost::ends_with(text, "pi")) {
    factor = std::numbers::pi;
    text.erase(text.size() - 2);
    boost::trim(text);
    if (boost::ends_with(text, "*")) text.pop_back();
    boost::trim(text);
    if (text.empty()) return factor;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v * factor;
  } catch (const std::exception&) {
    throw ConfigError(field + ": expected a number, got '" + raw + "'");
  }
}

double RunConfig::fit_t_hi() const {
  if (fit.t_hi > 0.0) return fit.t_hi;
  const double gap = 0.1 * std::pow(grid.L / (2.0 * std::numbers::pi), 2);
  return std::min(stepper.t_end, gap);
}

RunConfig parse_config(const pt::ptree& tree) {
  RunConfig config;
  const auto& sections = schema();
  for (const auto& [section, body] : tree) {
    const auto sec = sections.find(section);
    if (sec == sections.end()) throw ConfigError("unknown section [" + section + "]");
    if (!body.data().empty() && body.empty())
      throw ConfigError("'" + section + "' must be a section, not a top-level key");
    for (const auto& [key, node] : body) {
      const std::string field = section + "." + key;
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end()) throw ConfigError("unknown key " + field);
      setter->second(config, boost::trim_copy(node.data()), field);
    }
  }
  config.init.eta = config.physics.eta;
  validate(config);
  return config;
}

pt::ptree read_config_tree(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  return tree;
}

void write_config_tree(const pt::ptree& tree, const std::string& path) {
  pt::write_ini(path, tree);
}

RunConfig load_config(const std::string& path) { return parse_config(read_config_tree(path)); }

}  // namespace lcd
