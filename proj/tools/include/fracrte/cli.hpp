#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracrte/quadrature.hpp"
#include "fracrte/spectral.hpp"

namespace fracrte::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kIo = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { transport, diffusion, ctrw, subordinate, validate, figures };

const char* to_string(Subcommand s);
Subcommand subcommand_from_string(const std::string& s);

struct RunConfig {
  Subcommand subcommand = Subcommand::transport;
  MediumParams medium = MediumParams::reference(0.5);
  int N = 1;
  double x_min = -1.0;
  double x_max = 1.0;
  int n_x = 161;
  std::vector<double> times{0.01, 0.05, 0.1};
  QuadratureSpec quadrature{};
  EvolutionMode mode = EvolutionMode::paper;
  std::uint64_t seed = 1;
  std::string output_path = ".";
  int threads = 0;  // 0: FRACRTE_THREADS, else hardware parallelism
  std::uint64_t walkers = 100000;
  double xi_t = 0.02;  // CTRW event probability sigma_t tau^alpha

  std::vector<double> x_grid() const;
  void validate() const;  // UsageError naming the offending key

  bool operator==(const RunConfig&) const = default;
};

// args excludes the program name. A "--config FILE" flag reads key=value
// lines from FILE; config_text supplies the same content directly. Flags
// override file values, which override defaults. The subcommand is the first
// positional argument or the "subcommand" key.
RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& config_text = {});

// key=value text accepted by parse_config; doubles are written round-trip exact.
std::string emit_config(const RunConfig& config);

// Known configuration keys, in emission order.
const std::vector<std::string>& config_keys();

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full entry point: parse, run, map exceptions to exit codes.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

// Invariant suite behind the validate subcommand; prints a table to out and
// returns true when every check passes.
bool run_validation_suite(std::ostream& out);

// CSV writer shared by the subcommands; throws IoError.
struct CsvColumns {
  std::string method;
  double alpha = 0.0;
  double t = 0.0;
  int N = 0;
  std::string mode;
};
void write_csv(const std::string& path, const std::vector<double>& x, const std::vector<double>& u,
               const CsvColumns& cols);

}  // namespace fracrte::cli
