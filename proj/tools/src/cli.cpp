#include "fracrte/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "fracrte/ctrw.hpp"
#include "fracrte/diffusion.hpp"
#include "fracrte/errors.hpp"
#include "fracrte/parallel.hpp"
#include "fracrte/subordination.hpp"
#include "fracrte/transport.hpp"

namespace fracrte::cli {
namespace {

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void malformed(const std::string& key, const std::string& value) {
  throw UsageError(key + ": malformed value '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string s = trim(value);
  double d = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty() || !std::isfinite(d)) malformed(key, value);
  return d;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& value) {
  const std::string s = trim(value);
  Int i = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) malformed(key, value);
  return i;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) malformed(key, value);
  return out;
}

std::string fmt17(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
  return s;
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;  // empty: not emitted
};

PhaseFunction make_phase(const std::string& key, std::vector<double> beta) {
  try {
    return PhaseFunction(std::move(beta));
  } catch (const Error& e) {
    throw UsageError(key + ": " + e.what());
  }
}

const std::vector<Key>& key_table() {
  static const std::vector<Key> table = {
      {"subcommand", [](RunConfig& c, const std::string& s) {
         try {
           c.subcommand = subcommand_from_string(trim(s));
         } catch (const UsageError&) {
           malformed("subcommand", s);
         }
       },
       [](const RunConfig& c) { return std::string(to_string(c.subcommand)); }},
      {"alpha", [](RunConfig& c, const std::string& s) { c.medium.alpha = parse_double("alpha", s); },
       [](const RunConfig& c) { return fmt17(c.medium.alpha); }},
      {"v", [](RunConfig& c, const std::string& s) { c.medium.v = parse_double("v", s); },
       [](const RunConfig& c) { return fmt17(c.medium.v); }},
      {"sigma_s", [](RunConfig& c, const std::string& s) { c.medium.sigma_s = parse_double("sigma_s", s); },
       [](const RunConfig& c) { return fmt17(c.medium.sigma_s); }},
      {"sigma_a", [](RunConfig& c, const std::string& s) { c.medium.sigma_a = parse_double("sigma_a", s); },
       [](const RunConfig& c) { return fmt17(c.medium.sigma_a); }},
      // g and beta both set the phase function; the last one applied wins.
      {"g", [](RunConfig& c, const std::string& s) {
         const double g = parse_double("g", s);
         c.medium.phase = make_phase("g", {1.0, 3.0 * g});
       },
       nullptr},
      {"beta", [](RunConfig& c, const std::string& s) { c.medium.phase = make_phase("beta", parse_list("beta", s)); },
       [](const RunConfig& c) { return join(c.medium.phase.beta()); }},
      {"N", [](RunConfig& c, const std::string& s) { c.N = parse_int<int>("N", s); },
       [](const RunConfig& c) { return std::to_string(c.N); }},
      {"x_min", [](RunConfig& c, const std::string& s) { c.x_min = parse_double("x_min", s); },
       [](const RunConfig& c) { return fmt17(c.x_min); }},
      {"x_max", [](RunConfig& c, const std::string& s) { c.x_max = parse_double("x_max", s); },
       [](const RunConfig& c) { return fmt17(c.x_max); }},
      {"n_x", [](RunConfig& c, const std::string& s) { c.n_x = parse_int<int>("n_x", s); },
       [](const RunConfig& c) { return std::to_string(c.n_x); }},
      {"t", [](RunConfig& c, const std::string& s) { c.times = parse_list("t", s); },
       [](const RunConfig& c) { return join(c.times); }},
      {"k_max", [](RunConfig& c, const std::string& s) { c.quadrature.k_max = parse_double("k_max", s); },
       [](const RunConfig& c) { return fmt17(c.quadrature.k_max); }},
      {"nodes_per_halfperiod",
       [](RunConfig& c, const std::string& s) {
         c.quadrature.nodes_per_halfperiod = parse_int<int>("nodes_per_halfperiod", s);
       },
       [](const RunConfig& c) { return std::to_string(c.quadrature.nodes_per_halfperiod); }},
      {"acceleration_order",
       [](RunConfig& c, const std::string& s) {
         c.quadrature.acceleration_order = parse_int<int>("acceleration_order", s);
       },
       [](const RunConfig& c) { return std::to_string(c.quadrature.acceleration_order); }},
      {"tail_mode", [](RunConfig& c, const std::string& s) {
         try {
           c.quadrature.tail_mode = tail_mode_from_string(trim(s));
         } catch (const Error&) {
           malformed("tail_mode", s);
         }
       },
       [](const RunConfig& c) { return std::string(to_string(c.quadrature.tail_mode)); }},
      {"mollifier_width",
       [](RunConfig& c, const std::string& s) { c.quadrature.mollifier_width = parse_double("mollifier_width", s); },
       [](const RunConfig& c) { return fmt17(c.quadrature.mollifier_width); }},
      {"mode", [](RunConfig& c, const std::string& s) {
         try {
           c.mode = evolution_mode_from_string(trim(s));
         } catch (const Error&) {
           malformed("mode", s);
         }
       },
       [](const RunConfig& c) { return std::string(to_string(c.mode)); }},
      {"seed", [](RunConfig& c, const std::string& s) { c.seed = parse_int<std::uint64_t>("seed", s); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"output", [](RunConfig& c, const std::string& s) {
         c.output_path = trim(s);
         if (c.output_path.empty()) malformed("output", s);
       },
       [](const RunConfig& c) { return c.output_path; }},
      {"threads", [](RunConfig& c, const std::string& s) { c.threads = parse_int<int>("threads", s); },
       [](const RunConfig& c) { return std::to_string(c.threads); }},
      {"walkers", [](RunConfig& c, const std::string& s) { c.walkers = parse_int<std::uint64_t>("walkers", s); },
       [](const RunConfig& c) { return std::to_string(c.walkers); }},
      {"xi_t", [](RunConfig& c, const std::string& s) { c.xi_t = parse_double("xi_t", s); },
       [](const RunConfig& c) { return fmt17(c.xi_t); }},
  };
  return table;
}

const Key& find_key(const std::string& name) {
  for (const Key& k : key_table())
    if (k.name == name) return k;
  throw UsageError("unknown key '" + name + "'");
}

const std::map<std::string, std::string>& key_help() {
  static const std::map<std::string, std::string> help = {
      {"alpha", "fractional order in (0, 1]"},
      {"v", "transport speed"},
      {"sigma_s", "scattering coefficient"},
      {"sigma_a", "absorption coefficient"},
      {"g", "anisotropy; sets beta = {1, 3g}"},
      {"beta", "Legendre coefficients of the phase function, comma separated"},
      {"N", "P_N truncation order"},
      {"x_min", "left end of the output grid"},
      {"x_max", "right end of the output grid"},
      {"n_x", "number of grid points"},
      {"t", "output times, comma separated, increasing"},
      {"k_max", "end of the direct k quadrature (0: automatic)"},
      {"nodes_per_halfperiod", "Gauss nodes per half period of cos(kx)"},
      {"acceleration_order", "epsilon-algorithm order for the oscillatory tail"},
      {"tail_mode", "none|accelerated tail of the cosine inversion"},
      {"mollifier_width", "Gaussian k-space mollifier width (0: automatic)"},
      {"mode", "exact|paper mode weights"},
      {"seed", "CTRW random seed"},
      {"output", "output directory"},
      {"threads", "worker threads (0: FRACRTE_THREADS or hardware)"},
      {"walkers", "number of CTRW walkers"},
      {"xi_t", "CTRW event probability per waiting time"},
  };
  return help;
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  for (char& ch : f)
    if (ch == '_') ch = '-';
  return "--" + f;
}

void apply_text(RunConfig& c, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    find_key(trim(line.substr(0, eq))).set(c, line.substr(eq + 1));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_g(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", d);
  return buf;
}

std::string csv_path(const RunConfig& c, const std::string& stem, double alpha, double t) {
  return (std::filesystem::path(c.output_path) / (stem + "_alpha" + format_g(alpha) + "_t" + format_g(t) + ".csv"))
      .string();
}

void write_field(const RunConfig& c, const std::string& stem, const DensityField& f, double alpha, int n,
                 const std::string& mode, std::ostream& out) {
  for (std::size_t j = 0; j < f.times.size(); ++j) {
    std::vector<double> u(f.x_grid.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = f.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    const std::string path = csv_path(c, stem, alpha, f.times[j]);
    write_csv(path, f.x_grid, u, {to_string(f.method), alpha, f.times[j], n, mode});
    out << path << "\n";
  }
}

struct Panel {
  double alpha;
  std::vector<double> times;
};

const std::vector<Panel>& figure_panels() {
  static const std::vector<Panel> panels = {
      {0.25, {1e-4, 0.0025, 0.01}}, {0.5, {0.01, 0.05, 0.1}}, {0.75, {0.05, 0.1, 0.2}}};
  return panels;
}

}  // namespace

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::transport: return "transport";
    case Subcommand::diffusion: return "diffusion";
    case Subcommand::ctrw: return "ctrw";
    case Subcommand::subordinate: return "subordinate";
    case Subcommand::validate: return "validate";
    case Subcommand::figures: return "figures";
  }
  return "?";
}

Subcommand subcommand_from_string(const std::string& s) {
  for (Subcommand c : {Subcommand::transport, Subcommand::diffusion, Subcommand::ctrw, Subcommand::subordinate,
                       Subcommand::validate, Subcommand::figures})
    if (s == to_string(c)) return c;
  throw UsageError("unknown subcommand '" + s + "'");
}

std::vector<double> RunConfig::x_grid() const {
  std::vector<double> x(static_cast<std::size_t>(n_x));
  const double h = (x_max - x_min) / (n_x - 1);
  for (int i = 0; i < n_x; ++i) x[static_cast<std::size_t>(i)] = i == n_x - 1 ? x_max : x_min + i * h;
  return x;
}

void RunConfig::validate() const {
  if (!(medium.alpha > 0.0 && medium.alpha <= 1.0)) throw UsageError("alpha: must lie in (0, 1]");
  if (!(medium.v > 0.0)) throw UsageError("v: must be positive");
  if (!(medium.sigma_s > 0.0)) throw UsageError("sigma_s: must be positive");
  if (!(medium.sigma_a >= 0.0)) throw UsageError("sigma_a: must be non-negative");
  if (!(anisotropy_g(medium.phase) < 1.0)) throw UsageError("g: must be below 1");
  if (N < 1 || N < medium.phase.degree()) throw UsageError("N: must be at least 1 and at least the phase degree L");
  if (n_x < 2) throw UsageError("n_x: must be at least 2");
  if (!(x_min < x_max)) throw UsageError("x_min: must be below x_max");
  if (times.empty()) throw UsageError("t: at least one time is required");
  for (std::size_t j = 0; j < times.size(); ++j)
    if (!(times[j] > 0.0) || (j > 0 && !(times[j] > times[j - 1])))
      throw UsageError("t: times must be positive and strictly increasing");
  try {
    quadrature.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("quadrature: ") + e.what());
  }
  if (threads < 0) throw UsageError("threads: must be non-negative");
  if (walkers < 1) throw UsageError("walkers: must be positive");
  if (!(xi_t > 0.0 && xi_t < 1.0)) throw UsageError("xi_t: must lie in (0, 1)");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Key& key : key_table()) k.push_back(key.name);
    return k;
  }();
  return keys;
}

RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& config_text) {
  CLI::App app{"Time-fractional radiative transport in a 1D slab", "fracrte"};
  app.allow_windows_style_options(false);
  std::string positional, config_file;
  app.add_option("subcommand", positional, "transport|diffusion|ctrw|subordinate|validate|figures");
  app.add_option("--config", config_file, "key=value configuration file");
  std::map<std::string, std::string> flags;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const Key& k : key_table()) {
    if (k.name == "subcommand") continue;
    const std::string names = k.name == "output" ? "-o," + flag_name(k.name) : flag_name(k.name);
    const auto h = key_help().find(k.name);
    options.emplace_back(k.name, app.add_option(names, flags[k.name], h == key_help().end() ? "" : h->second));
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig c;
  if (config_text) apply_text(c, *config_text);
  if (!config_file.empty()) apply_text(c, read_file(config_file));
  if (!positional.empty()) find_key("subcommand").set(c, positional);
  // Flags in the order given on the command line, so "--g" after "--beta" wins.
  std::vector<std::pair<std::size_t, std::string>> given;
  for (const auto& [name, opt] : options)
    if (opt->count() > 0) {
      std::size_t pos = 0;
      for (std::size_t i = 0; i < args.size(); ++i)
        if (args[i] == flag_name(name) || args[i].rfind(flag_name(name) + "=", 0) == 0 ||
            (name == "output" && args[i].rfind("-o", 0) == 0))
          pos = i;
      given.emplace_back(pos, name);
    }
  std::sort(given.begin(), given.end());
  for (const auto& [pos, name] : given) find_key(name).set(c, flags[name]);
  c.validate();
  return c;
}

std::string emit_config(const RunConfig& config) {
  std::string s;
  for (const Key& k : key_table())
    if (k.get) s += k.name + " = " + k.get(config) + "\n";
  return s;
}

void write_csv(const std::string& path, const std::vector<double>& x, const std::vector<double>& u,
               const CsvColumns& cols) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot write '" + path + "'");
  bool ok = std::fprintf(f, "x,U,method,alpha,t,N,mode\n") > 0;
  for (std::size_t i = 0; i < x.size() && ok; ++i)
    ok = std::fprintf(f, "%.12g,%.12g,%s,%.12g,%.12g,%d,%s\n", x[i], u[i], cols.method.c_str(), cols.alpha, cols.t,
                      cols.N, cols.mode.c_str()) > 0;
  if (std::fclose(f) != 0 || !ok) throw IoError("write failed for '" + path + "'");
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  c.validate();
  set_thread_count(c.threads);
  if (c.subcommand == Subcommand::validate) return run_validation_suite(out) ? kOk : kValidationFailed;

  std::error_code ec;
  std::filesystem::create_directories(c.output_path, ec);
  if (ec || !std::filesystem::is_directory(c.output_path))
    throw IoError("cannot create output directory '" + c.output_path + "'");

  const std::vector<double> x = c.x_grid();
  const double alpha = c.medium.alpha;
  switch (c.subcommand) {
    case Subcommand::transport: {
      const DensityField f = energy_density(x, c.times, c.medium, c.N, c.mode, c.quadrature);
      write_field(c, "transport", f, alpha, c.N, to_string(c.mode), out);
      break;
    }
    case Subcommand::diffusion: {
      const DiffusionParams dp = DiffusionParams::from_medium(c.medium);
      const DensityField f = dp.sigma_a == 0.0 ? diffusion_density_mwright(x, c.times, dp)
                                               : diffusion_density_quadrature(x, c.times, dp, c.quadrature);
      write_field(c, "diffusion", f, alpha, 0, "na", out);
      break;
    }
    case Subcommand::ctrw: {
      const double tau = tau_for_xi(c.medium, c.xi_t);
      const CTRWResult r = simulate_density(c.walkers, c.times, x, c.medium, tau, c.seed);
      write_field(c, "ctrw", r.field, alpha, 0, "na", out);
      for (std::size_t j = 0; j < r.survival.size(); ++j)
        err << "t=" << c.times[j] << " survival " << r.survival[j] << " +- " << r.survival_sigma[j] << "\n";
      break;
    }
    case Subcommand::subordinate: {
      if (!(alpha < 1.0)) throw UsageError("alpha: subordinate needs alpha < 1");
      const DensityField f = subordinated_energy_density(x, c.times, c.medium, c.N, c.mode, c.quadrature);
      write_field(c, "subordinate", f, alpha, c.N, to_string(c.mode), out);
      break;
    }
    case Subcommand::figures: {
      for (const Panel& p : figure_panels()) {
        MediumParams m = c.medium;
        m.alpha = p.alpha;
        const DensityField u = energy_density(x, p.times, m, c.N, c.mode, c.quadrature);
        write_field(c, "figures_transport", u, p.alpha, c.N, to_string(c.mode), out);
        const DensityField d = diffusion_density_mwright(x, p.times, DiffusionParams::from_medium(m));
        write_field(c, "figures_diffusion", d, p.alpha, 0, "na", out);
      }
      break;
    }
    case Subcommand::validate: break;
  }
  return kOk;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  }
  try {
    return run(config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailed;
  }
}

}  // namespace fracrte::cli
