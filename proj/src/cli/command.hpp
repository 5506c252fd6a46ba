#pragma once

// Shared plumbing for the subcommands: option registration with config-file
// defaults, echo of the resolved inputs, grid parsing and record output.

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace casimir::cli {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One subcommand's option set. Options are echoed into the record's
/// `inputs` block in registration order; keys equal the long flag names.
class Command {
public:
  Command(std::string name, std::string description);

  void number(const std::string &key, double &target, const std::string &help,
              bool required = false);
  void optional_number(const std::string &key, std::optional<double> &target,
                       const std::string &help);
  void integer(const std::string &key, std::int64_t &target, const std::string &help);
  void text(const std::string &key, std::string &target, const std::string &help,
            bool required = false);
  void optional_text(const std::string &key, std::optional<std::string> &target,
                     const std::string &help);
  void flag(const std::string &key, bool &target, const std::string &help);
  /// Repeatable string option.
  void texts(const std::string &key, std::vector<std::string> &target, const std::string &help);
  /// Not echoed into inputs: output locations do not change results.
  void output_path(const std::string &key, std::string &target, const std::string &help);
  void positional(const std::string &key, std::string &target, const std::string &help);

  /// Adds --hbar-c, --length-unit, --tol, --diagnostics and --workers.
  void common(double default_tol);

  /// Parses the arguments after the subcommand name. A --config file
  /// (flat key = value lines, or JSON whose `inputs` object or top level
  /// holds the keys) supplies defaults that explicit flags override.
  /// Returns false when help was printed.
  bool parse(const std::vector<std::string> &args, std::ostream &out);

  json inputs() const;

  double hbar_c = 1.0;
  double length_unit = 1.0;
  double tol = 1e-10;
  bool diagnostics = false;
  std::int64_t workers = 0;

  double energy_scale() const { return hbar_c / length_unit; }
  /// --workers, else CASIMIR_WORKERS, else 1.
  unsigned worker_count() const;

private:
  CLI::App app_;
  std::vector<std::function<void(json &)>> echo_;
};

/// Grid specification: "v1,v2,..." or "log:start:stop:count" or
/// "lin:start:stop:count".
std::vector<double> parse_grid(const std::string &spec);

/// Reads a config file into flag-style arguments.
std::vector<std::string> config_arguments(const std::string &path);

/// Builds {schema_version, command, inputs, results, diagnostics}.
json make_record(const std::string &command, const Command &cmd, json results, json diagnostics);

/// Writes text to `path` or, when empty, to `out`.
void emit(const std::string &path, const std::string &text, std::ostream &out);

/// %.17g formatting; non-finite values become empty fields.
std::string csv_number(double v);

/// JSON number, or null when not finite.
json json_number(double v);

int run_pair(const std::vector<std::string> &args, std::ostream &out);
int run_sphere(const std::vector<std::string> &args, std::ostream &out);
int run_self_energy(const std::vector<std::string> &args, std::ostream &out);
int run_dielectric(const std::vector<std::string> &args, std::ostream &out);
int run_sweep(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run_verify(const std::vector<std::string> &args, std::ostream &out);

} // namespace casimir::cli
