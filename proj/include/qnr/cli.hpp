#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qnr/arith.hpp"

namespace qnr::cli {

inline constexpr std::string_view kToolName = "qnr";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kWorkersEnv = "QNR_WORKERS";

enum class Subcommand { nres, dp, dup, gaps, charsum, rough, sfree, erdos, exceptional, trace, crt };
enum class OutputFormat { csv, json };

std::string_view to_string(Subcommand s);

struct RunConfig {
  Subcommand subcommand = Subcommand::nres;
  // Canonical text of every parameter in force, defaults included. These
  // are echoed verbatim into the output metadata.
  std::map<std::string, std::string> params;
  OutputFormat format = OutputFormat::csv;
  int workers = 1;
  bool zero_as_residue = true;
  std::optional<std::filesystem::path> output_path;
  std::optional<u64> seed;
  u64 checkpoint_every = 0;
  std::optional<std::filesystem::path> checkpoint_path;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  u64 integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::vector<u64> integer_list(const std::string& key) const;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by parse_args for --help; carries the rendered help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments after the program name. Throws UsageError naming the offending
/// flag; every numeric parameter is validated here, before any computation.
RunConfig parse_args(std::span<const std::string> args);

/// Executes a validated config. Output is written only on success; errors go
/// to `err`. Returns 0 on success and 2 on a computation or resource error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the documented exit codes (0 ok, 1 usage, 2 compute).
int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qnr::cli
