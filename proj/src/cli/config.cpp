#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <sstream>

#include "openq/cli.hpp"

namespace openq::cli {
namespace {

const std::map<std::string, Config::Section>& schema() {
  static const std::map<std::string, Config::Section> s{
      {"scenario", {{"name", "evolve-component"}, {"schedule", ""}}},
      {"domain",
       {{"m", "1"}, {"hbar", "1"}, {"nu", "1"}, {"xi", "0"}, {"d0", "2"}, {"d2", "1"}, {"f", "0"},
        {"strict_positivity", "false"}}},
      {"grid", {{"nx", "128"}, {"lx", "64"}, {"nxd", "256"}, {"lxd", "32"}}},
      {"state",
       {{"q_re", "1"}, {"q_im", "0"}, {"sigma", "1"}, {"center", "0"}, {"carrier", "0"},
        {"delta_q", "0.5"}, {"coherence", "4"}}},
      {"integrator",
       {{"dt", "0.001"}, {"stencil", "4"}, {"boundary", "clamped"}, {"safety", "0.9"},
        {"edge_threshold", "1e-10"}}},
      {"propagator", {{"provenance", "rederived"}}},
      {"residual", {{"t_samples", "0.5,1,2"}, {"h_t", "0.02"}, {"levels", "4"}}},
      {"symmetry", {{"shifts", "0.5:0.5,0.5:-0.5"}, {"sigma", "1"}, {"dt", "0.005"}}},
      {"rotations", {{"lmax", "2"}}},
  };
  return s;
}

double to_double(const std::string& section, const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* b = text.data();
  const auto* e = b + text.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || b == e) {
    throw Error(ErrorCode::config_parse, section + "." + key + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::config_parse: return ExitCode::config_error;
    case ErrorCode::invalid_argument:
    case ErrorCode::non_positive_mass:
    case ErrorCode::non_positive_hbar:
    case ErrorCode::negative_rate:
    case ErrorCode::positivity_violation:
    case ErrorCode::zero_friction:
    case ErrorCode::zero_decoherence:
    case ErrorCode::invalid_label:
    case ErrorCode::grid_mismatch:
    case ErrorCode::shape_mismatch: return ExitCode::validation_error;
    case ErrorCode::domain_escape:
    case ErrorCode::stability_violation:
    case ErrorCode::boundary_leak:
    case ErrorCode::zero_norm:
    case ErrorCode::fit_failure:
    case ErrorCode::ill_posed: return ExitCode::runtime_error;
  }
  return ExitCode::runtime_error;
}

Config::Config() : sections_(schema()) {}

Config Config::parse(std::istream& is) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::config_parse, e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  Config c;
  for (const auto& [section, body] : tree) {
    if (!schema().contains(section)) {
      throw Error(ErrorCode::config_parse, "unknown section [" + section + "]");
    }
    if (body.empty() && !body.data().empty()) {
      throw Error(ErrorCode::config_parse, "key '" + section + "' outside any section");
    }
    for (const auto& [key, value] : body) {
      if (!schema().at(section).contains(key)) {
        throw Error(ErrorCode::config_parse, "unknown key '" + key + "' in [" + section + "]");
      }
      c.sections_[section][key] = value.data();
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_parse, "cannot open config '" + path + "'");
  return parse(in);
}

const std::string& Config::get(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end() || !s->second.contains(key)) {
    throw Error(ErrorCode::config_parse, "no such key " + section + "." + key);
  }
  return s->second.at(key);
}

double Config::number(const std::string& section, const std::string& key) const {
  return to_double(section, key, get(section, key));
}

long Config::integer(const std::string& section, const std::string& key) const {
  const double v = number(section, key);
  if (v != static_cast<double>(static_cast<long>(v))) {
    throw Error(ErrorCode::config_parse, section + "." + key + " must be an integer");
  }
  return static_cast<long>(v);
}

void Config::set(const std::string& section, const std::string& key, std::string value) {
  if (!schema().contains(section) || !schema().at(section).contains(key)) {
    throw Error(ErrorCode::config_parse, "no such key " + section + "." + key);
  }
  sections_[section][key] = std::move(value);
}

nlohmann::json Config::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [s, body] : sections_) {
    for (const auto& [k, v] : body) j[s][k] = v;
  }
  return j;
}

std::vector<double> parse_list(const std::string& section, const std::string& key,
                               const std::string& text) {
  std::vector<double> out;
  if (text.find_first_not_of(' ') == std::string::npos) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(section, key, item));
  return out;
}

std::vector<double> parse_schedule(const std::string& text) {
  auto t = parse_list("scenario", "schedule", text);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= 0.0) || (i > 0 && !(t[i] > t[i - 1]))) {
      throw Error(ErrorCode::invalid_argument, "schedule must be non-negative and strictly increasing");
    }
  }
  return t;
}

PhysicalParams params_of(const Config& c) {
  return params_from_config(c.sections().at("domain"));
}

Grid x_grid_of(const Config& c) {
  const long n = c.integer("grid", "nx");
  if (n < 8) throw Error(ErrorCode::invalid_argument, "grid.nx must be >= 8");
  return Grid(static_cast<std::size_t>(n), c.number("grid", "lx"));
}

Grid xd_grid_of(const Config& c) {
  const long n = c.integer("grid", "nxd");
  if (n < 8) throw Error(ErrorCode::invalid_argument, "grid.nxd must be >= 8");
  return Grid(static_cast<std::size_t>(n), c.number("grid", "lxd"));
}

IntegratorConfig integrator_of(const Config& c) {
  IntegratorConfig cfg;
  cfg.dt = c.number("integrator", "dt");
  const auto& st = c.get("integrator", "stencil");
  if (st == "2") cfg.stencil = Stencil::order2;
  else if (st == "4") cfg.stencil = Stencil::order4;
  else if (st == "spectral") cfg.stencil = Stencil::spectral;
  else throw Error(ErrorCode::config_parse, "integrator.stencil must be 2, 4 or spectral");
  const auto& bd = c.get("integrator", "boundary");
  if (bd == "periodic") cfg.boundary = Boundary::periodic;
  else if (bd == "clamped") cfg.boundary = Boundary::clamped_decay;
  else throw Error(ErrorCode::config_parse, "integrator.boundary must be periodic or clamped");
  cfg.safety = c.number("integrator", "safety");
  cfg.edge_threshold = c.number("integrator", "edge_threshold");
  cfg.validate();
  return cfg;
}

}  // namespace openq::cli
