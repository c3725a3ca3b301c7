#include "qnr/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qnr/charsums.hpp"
#include "qnr/error.hpp"
#include "qnr/experiments.hpp"
#include "qnr/residue_scan.hpp"
#include "qnr/sampling.hpp"
#include "qnr/sieve.hpp"

namespace qnr::cli {

using Json = nlohmann::ordered_json;

std::string_view to_string(Subcommand s) {
  switch (s) {
    case Subcommand::nres: return "nres";
    case Subcommand::dp: return "dp";
    case Subcommand::dup: return "dup";
    case Subcommand::gaps: return "gaps";
    case Subcommand::charsum: return "charsum";
    case Subcommand::rough: return "rough";
    case Subcommand::sfree: return "sfree";
    case Subcommand::erdos: return "erdos";
    case Subcommand::exceptional: return "exceptional";
    case Subcommand::trace: return "trace";
    case Subcommand::crt: return "crt";
  }
  return "?";
}

// ---- typed parameter access ----------------------------------------------

namespace {

u64 parse_u64(const std::string& text, const std::string& flag) {
  u64 v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw UsageError("--" + flag + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(v)) {
    throw UsageError("--" + flag + ": expected a real number, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string join(const std::vector<u64>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

// shortest representation that reads back to the same double
std::string format_real(double x) { return fmt::format("{}", x); }

}  // namespace

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw UsageError("missing parameter --" + key);
  return it->second;
}

u64 RunConfig::integer(const std::string& key) const { return parse_u64(text(key), key); }

double RunConfig::real(const std::string& key) const { return parse_real(text(key), key); }

std::vector<u64> RunConfig::integer_list(const std::string& key) const {
  std::vector<u64> out;
  for (const auto& item : split(text(key), ',')) out.push_back(parse_u64(item, key));
  return out;
}

// ---- parsing ---------------------------------------------------------------

namespace {

struct SubcommandSpec {
  Subcommand id;
  const char* name;
  const char* description;
};

constexpr SubcommandSpec kSubcommands[] = {
    {Subcommand::nres, "nres", "least quadratic non-residue n(p)"},
    {Subcommand::dp, "dp", "longest run of consecutive quadratic residues d(p)"},
    {Subcommand::dup, "dup", "first non-residue offset d_u(p) after u"},
    {Subcommand::gaps, "gaps", "non-residue sequence n_k(p) and gaps, or gap tails with --h"},
    {Subcommand::charsum, "charsum", "incomplete Jacobi symbol sums against the Burgess main term"},
    {Subcommand::rough, "rough", "rough numbers P(eta, M) and their character partition"},
    {Subcommand::sfree, "sfree", "square-free integers and pairs in [u+1, u+h]"},
    {Subcommand::erdos, "erdos", "mean of n(p) over odd primes p <= x"},
    {Subcommand::exceptional, "exceptional", "primes p in [Q, 2Q] with d_u(p) > h"},
    {Subcommand::trace, "trace", "numeric trace of the exceptional-set bound (JSON only)"},
    {Subcommand::crt, "crt", "glue residue windows of several primes by CRT"},
};

constexpr const char* kSharedFlagsHelp =
    "Shared flags (before or after the subcommand):\n"
    "  --format csv|json        output format (default csv)\n"
    "  --workers N              worker threads (default 1, or $QNR_WORKERS)\n"
    "  --out PATH               write to PATH instead of standard output\n"
    "  --zero-as-residue BOOL   count multiples of p as residues (default true)\n"
    "  --seed S                 seed for sampling runs (charsum --sweep, exceptional --samples)\n"
    "Conventions: p = 2 is never scanned; d_u(p) is the least h with a non-residue\n"
    "in [u+1, u+h]; every output starts with a metadata record.";

// Raw option text captured by CLI11, keyed by option name.
struct RawOptions {
  std::map<std::string, std::string> values;
  std::map<std::string, std::vector<std::string>> lists;
  std::map<std::string, bool> flags;
};

void add_value(CLI::App* sub, RawOptions& raw, const std::string& name, const std::string& help,
               const char* type = "N") {
  sub->add_option("--" + name, raw.values[name], help)->type_name(type);
}

void add_list(CLI::App* sub, RawOptions& raw, const std::string& name, const std::string& help) {
  sub->add_option("--" + name, raw.lists[name], help)
      ->delimiter(',')
      ->allow_extra_args(false)
      ->type_name("LIST");
}

void add_flag(CLI::App* sub, RawOptions& raw, const std::string& name, const std::string& help) {
  raw.flags[name] = false;
  sub->add_flag("--" + name, raw.flags[name], help);
}

void add_prime_selection(CLI::App* sub, RawOptions& raw) {
  add_value(sub, raw, "p", "odd prime");
  add_value(sub, raw, "lo", "scan all odd primes in [lo, hi] (with --hi)");
  add_value(sub, raw, "hi", "upper end of the prime scan");
}

class Validator {
 public:
  Validator(Subcommand id, CLI::App* sub, const RawOptions& raw, RunConfig& config)
      : id_(id), sub_(sub), raw_(raw), config_(config) {}

  bool given(const std::string& name) const { return sub_->count("--" + name) > 0; }

  std::optional<u64> integer(const std::string& name, std::optional<u64> fallback = {}) {
    if (!given(name)) {
      if (fallback) config_.params[name] = std::to_string(*fallback);
      return fallback;
    }
    const u64 v = parse_u64(raw_.values.at(name), name);
    config_.params[name] = std::to_string(v);
    return v;
  }

  u64 required_integer(const std::string& name) {
    if (!given(name)) throw UsageError(std::string(to_string(id_)) + ": --" + name + " is required");
    return *integer(name);
  }

  double required_real(const std::string& name) {
    if (!given(name)) throw UsageError(std::string(to_string(id_)) + ": --" + name + " is required");
    const double v = parse_real(raw_.values.at(name), name);
    config_.params[name] = format_real(v);
    return v;
  }

  std::vector<u64> integer_list(const std::string& name) {
    std::vector<u64> out;
    for (const auto& item : raw_.lists.at(name)) out.push_back(parse_u64(item, name));
    if (!out.empty()) config_.params[name] = join(out);
    return out;
  }

  bool flag(const std::string& name) {
    const bool v = raw_.flags.at(name);
    if (v) config_.params[name] = "true";
    return v;
  }

  const std::vector<std::string>& list_text(const std::string& name) const {
    return raw_.lists.at(name);
  }

  void odd_prime(u64 p, const std::string& name) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) {
      throw UsageError("--" + name + ": " + std::to_string(p) + " is not an odd prime");
    }
  }

  // Either --p or --lo/--hi; returns the largest prime-candidate value.
  u64 prime_selection(u64 max_hi) {
    const bool single = given("p");
    const bool range = given("lo") || given("hi");
    if (single == range) {
      throw UsageError(std::string(to_string(id_)) + ": give either --p or both --lo and --hi");
    }
    if (single) {
      const u64 p = *integer("p");
      odd_prime(p, "p");
      if (p > max_hi) throw UsageError("--p: " + std::to_string(p) + " exceeds the budget");
      return p;
    }
    const u64 lo = required_integer("lo");
    const u64 hi = required_integer("hi");
    if (lo > hi) throw UsageError("--lo must not exceed --hi");
    if (hi > max_hi) throw UsageError("--hi: " + std::to_string(hi) + " exceeds the budget");
    if (hi - lo > kMaxRangeWidth) throw UsageError("--hi: range wider than 10^9");
    return hi;
  }

  void charsum_modulus(u64 q) {
    if (q < 3 || q % 2 == 0) throw UsageError("--q: modulus must be odd and >= 3");
    if (is_perfect_square(q)) throw UsageError("--q: q is a perfect square");
    if (q > (u64{1} << 42)) throw UsageError("--q: modulus exceeds 2^42");
  }

 private:
  Subcommand id_;
  CLI::App* sub_;
  const RawOptions& raw_;
  RunConfig& config_;
};

void validate(Subcommand id, Validator& v, RunConfig& config) {
  const u64 kMaxP = u64{1} << 40;
  switch (id) {
    case Subcommand::nres:
      v.prime_selection(kMaxP);
      break;
    case Subcommand::dp:
      v.prime_selection(kMaxMapPrime);
      break;
    case Subcommand::dup:
      v.prime_selection(kMaxP);
      v.integer("u", 0);
      break;
    case Subcommand::gaps: {
      v.prime_selection(kMaxMapPrime);
      const auto h = v.integer("h");
      const bool quartic = v.flag("quartic");
      if (h && quartic) throw UsageError("gaps: --h and --quartic are exclusive");
      if (h && *h < 1) throw UsageError("--h must be >= 1");
      break;
    }
    case Subcommand::charsum: {
      const bool sweep = v.given("sweep");
      if (sweep == v.given("q")) throw UsageError("charsum: give either --q or --sweep");
      const u64 nu = *v.integer("nu", 2);
      if (nu < 1 || nu > 64) throw UsageError("--nu must lie in [1, 64]");
      if (v.given("M") && *v.integer("M") < 1) throw UsageError("--M must be >= 1");
      if (sweep) {
        if (!config.seed) throw UsageError("charsum --sweep requires --seed");
        if (*v.integer("sweep") < 1) throw UsageError("--sweep must be >= 1");
        const u64 lo = *v.integer("qmin", 10'000);
        const u64 hi = *v.integer("qmax", 1'000'000);
        if (lo > hi || hi < 3) throw UsageError("--qmin/--qmax: empty modulus range");
        if (hi > (u64{1} << 42)) throw UsageError("--qmax exceeds 2^42");
        if (hi - lo < 2) throw UsageError("--qmin/--qmax: range too narrow to sample");
      } else {
        v.charsum_modulus(*v.integer("q"));
      }
      break;
    }
    case Subcommand::rough: {
      const double eta = v.required_real("eta");
      if (!(eta > 0.0 && eta < 1.0)) throw UsageError("--eta must lie in (0, 1)");
      const u64 M = v.required_integer("M");
      if (M < 2) throw UsageError("--M must be >= 2");
      if (M > (u64{1} << 32)) throw UsageError("--M exceeds 2^32");
      if (const auto q = v.integer("q")) {
        if (*q < 3 || *q % 2 == 0) throw UsageError("--q: modulus must be odd and >= 3");
      }
      break;
    }
    case Subcommand::sfree: {
      const u64 u = *v.integer("u", 0);
      const u64 h = v.required_integer("h");
      if (h < 1) throw UsageError("--h must be >= 1");
      if (h > kMaxRangeWidth) throw UsageError("--h exceeds 10^9");
      if (u > ~u64{0} - h - 1) throw UsageError("--u: u + h + 1 overflows");
      break;
    }
    case Subcommand::erdos: {
      const u64 x = v.required_integer("x");
      if (x < 3) throw UsageError("--x must be >= 3");
      if (x > kMaxErdosX) throw UsageError("--x exceeds 10^8");
      break;
    }
    case Subcommand::exceptional: {
      const u64 Q = v.required_integer("q");
      if (Q < 10) throw UsageError("--q must be >= 10");
      if (Q > kMaxRangeWidth) throw UsageError("--q exceeds 10^9");
      const bool sampled = v.given("samples");
      if (sampled && v.given("u")) throw UsageError("exceptional: --u and --samples are exclusive");
      if (sampled) {
        if (!config.seed) throw UsageError("exceptional --samples requires --seed");
        const u64 k = *v.integer("samples");
        if (k < 1 || k > 100'000) throw UsageError("--samples must lie in [1, 100000]");
      } else {
        v.integer("u", 0);
      }
      const bool sweep = v.given("sweep");
      const auto hs = v.integer_list("h");
      if (sweep == !hs.empty()) throw UsageError("exceptional: give either --h or --sweep");
      for (const u64 h : hs) {
        if (h < 1) throw UsageError("--h values must be >= 1");
      }
      if (sweep) {
        const u64 steps = *v.integer("sweep");
        if (steps < 1 || steps > 1000) throw UsageError("--sweep must lie in [1, 1000]");
      }
      break;
    }
    case Subcommand::trace: {
      const u64 Q = v.required_integer("q");
      const u64 u = *v.integer("u", 0);
      const u64 h = v.required_integer("h");
      const double eta = v.required_real("eta");
      if (Q < 10) throw UsageError("--q must be >= 10");
      if (Q > (u64{1} << 31)) throw UsageError("--q exceeds 2^31");
      if (h < 1 || h >= Q) throw UsageError("--h must satisfy 1 <= h < Q");
      if (u + h >= (u64{1} << 32)) throw UsageError("--u: u + h must stay below 2^32");
      if (!(eta > 0.0 && eta < 1.0)) throw UsageError("--eta must lie in (0, 1)");
      const u64 cutoff = rough_prime_cutoff(eta, 2 * Q);
      if (cutoff >= Q) throw UsageError("--eta: (2Q)^eta must be below Q");
      if (cutoff < 2) throw UsageError("--eta: (2Q)^eta must be at least 2");
      break;
    }
    case Subcommand::crt: {
      std::vector<std::string> canonical;
      std::vector<u64> seen;
      for (const auto& item : v.list_text("pair")) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw UsageError("--pair: expected prime:residue, got '" + item + "'");
        const u64 l = parse_u64(parts[0], "pair");
        const u64 r = parse_u64(parts[1], "pair");
        v.odd_prime(l, "pair");
        if (std::find(seen.begin(), seen.end(), l) != seen.end()) {
          throw UsageError("--pair: duplicate prime " + std::to_string(l));
        }
        seen.push_back(l);
        canonical.push_back(std::to_string(l) + ":" + std::to_string(r));
      }
      if (canonical.empty()) throw UsageError("crt: at least one --pair is required");
      std::string joined;
      for (std::size_t i = 0; i < canonical.size(); ++i) joined += (i ? "," : "") + canonical[i];
      config.params["pair"] = joined;
      break;
    }
  }
}

}  // namespace

RunConfig parse_args(std::span<const std::string> args) {
  CLI::App app{"Quadratic residue and non-residue statistics over primes", std::string(kToolName)};
  // "-h" is left free: --h is a window-length option on several subcommands.
  app.set_help_flag("--help", "print help for the tool or a subcommand");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string format = "csv";
  std::string zero = "true";
  std::string workers_text;
  std::string out_path;
  std::string seed_text;
  std::string checkpoint_every_text;
  std::string checkpoint_path;
  CLI::Option* format_option =
      app.add_option("--format", format, "output format: csv or json (trace is json only)");
  format_option->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", workers_text, "worker threads (default 1, or $QNR_WORKERS)")
      ->type_name("N")
      ->envname(std::string(kWorkersEnv));
  app.add_option("--out", out_path, "write output to PATH instead of standard output")
      ->type_name("PATH");
  app.add_option("--zero-as-residue", zero,
                 "classify multiples of p as residues (default true)")
      ->check(CLI::IsMember({"true", "false"}));
  app.add_option("--seed", seed_text, "generator seed (sampling subcommands only)")
      ->type_name("S");

  std::map<Subcommand, std::pair<CLI::App*, RawOptions>> subs;
  for (const auto& spec : kSubcommands) {
    auto& [sub, raw] = subs[spec.id];
    sub = app.add_subcommand(spec.name, spec.description);
    sub->footer(kSharedFlagsHelp);
    switch (spec.id) {
      case Subcommand::nres:
      case Subcommand::dp:
        add_prime_selection(sub, raw);
        break;
      case Subcommand::dup:
        add_prime_selection(sub, raw);
        add_value(sub, raw, "u", "window offset (default 0)");
        break;
      case Subcommand::gaps:
        add_prime_selection(sub, raw);
        add_value(sub, raw, "h", "report the gap tail N(h,p), S(h,p) at this threshold");
        add_flag(sub, raw, "quartic", "gap tail at h = ceil(p^(1/4)) per prime");
        break;
      case Subcommand::charsum:
        add_value(sub, raw, "q", "odd non-square modulus");
        add_value(sub, raw, "M", "sum length (default ceil(q^(2/3)))");
        add_value(sub, raw, "nu", "Burgess parameter (default 2)");
        add_value(sub, raw, "sweep", "sample this many moduli (needs --seed)");
        add_value(sub, raw, "qmin", "sweep modulus lower end (default 10000)");
        add_value(sub, raw, "qmax", "sweep modulus upper end (default 1000000)");
        break;
      case Subcommand::rough:
        add_value(sub, raw, "eta", "exponent in (0, 1)", "X");
        add_value(sub, raw, "M", "height");
        add_value(sub, raw, "q", "odd modulus for the (m/q) partition");
        break;
      case Subcommand::sfree:
        add_value(sub, raw, "u", "window offset (default 0)");
        add_value(sub, raw, "h", "window length");
        break;
      case Subcommand::erdos:
        add_value(sub, raw, "x", "upper end of the prime range");
        break;
      case Subcommand::exceptional:
        add_value(sub, raw, "q", "dyadic range [Q, 2Q]");
        add_value(sub, raw, "u", "window offset (default 0)");
        add_value(sub, raw, "samples", "draw this many u from [0, 2Q] (needs --seed)");
        add_list(sub, raw, "h", "window lengths, comma separated");
        add_value(sub, raw, "sweep", "use h = k*ceil(log Q) for k = 1..N");
        sub->add_option("--checkpoint-every", checkpoint_every_text,
                        "write a resumable progress file every N blocks of 4096 primes")
            ->type_name("N");
        sub->add_option("--checkpoint", checkpoint_path,
                        "progress file prefix (default qnr-exceptional.ckpt)")
            ->type_name("PATH");
        break;
      case Subcommand::trace:
        add_value(sub, raw, "q", "dyadic range [Q, 2Q]");
        add_value(sub, raw, "u", "window offset (default 0)");
        add_value(sub, raw, "h", "window length");
        add_value(sub, raw, "eta", "rough-set exponent", "X");
        break;
      case Subcommand::crt:
        add_list(sub, raw, "pair", "prime:residue, repeatable or comma separated");
        break;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string(kToolName) + " " + std::string(kToolVersion) + "\n");
  } catch (const CLI::ParseError& e) {
    if (app.get_subcommands().empty()) {
      // every shared option takes a value, so the first bare word is the subcommand
      for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) throw UsageError("unknown subcommand '" + a + "'");
        if (a != "--help" && a != "--version" && a.find('=') == std::string::npos) ++i;
      }
    }
    throw UsageError(e.what());
  }

  RunConfig config;
  config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  config.zero_as_residue = zero == "true";
  if (!out_path.empty()) config.output_path = out_path;
  if (!workers_text.empty()) {
    const u64 w = parse_u64(workers_text, "workers");
    if (w < 1 || w > 4096) throw UsageError("--workers must lie in [1, 4096]");
    config.workers = static_cast<int>(w);
  }
  if (!seed_text.empty()) config.seed = parse_u64(seed_text, "seed");

  for (auto& [id, entry] : subs) {
    auto& [sub, raw] = entry;
    if (!sub->parsed()) continue;
    config.subcommand = id;
    Validator v(id, sub, raw, config);
    validate(id, v, config);
  }

  const bool sampling = (config.subcommand == Subcommand::charsum && config.has("sweep")) ||
                        (config.subcommand == Subcommand::exceptional && config.has("samples"));
  if (config.seed && !sampling) {
    throw UsageError("--seed applies only to sampling runs (charsum --sweep, exceptional --samples)");
  }
  if (config.seed) config.params["seed"] = std::to_string(*config.seed);

  if (config.subcommand == Subcommand::trace) {
    if (format == "csv" && format_option->count() > 0) {
      throw UsageError("trace: output is a JSON document; CSV is not offered");
    }
    config.format = OutputFormat::json;
  }

  if (config.subcommand == Subcommand::exceptional) {
    if (!checkpoint_every_text.empty()) {
      config.checkpoint_every = parse_u64(checkpoint_every_text, "checkpoint-every");
      if (config.checkpoint_every < 1) throw UsageError("--checkpoint-every must be >= 1");
      config.checkpoint_path = checkpoint_path.empty() ? "qnr-exceptional.ckpt" : checkpoint_path;
    } else if (!checkpoint_path.empty()) {
      throw UsageError("--checkpoint needs --checkpoint-every");
    }
  }
  return config;
}

// ---- output ----------------------------------------------------------------

namespace {

struct Document {
  std::vector<std::pair<std::string, std::string>> conventions;
  std::vector<std::string> warnings;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json summary = Json::object();
  std::optional<Json> body;  // single nested document (trace)

  void add_row(std::vector<Json> row) { rows.push_back(std::move(row)); }
};

std::string cell_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_real(v.get<double>());
  return v.dump();
}

void dump_json(const Json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(key).dump() + ": ";
      dump_json(value, out, indent + 1);
    }
    out += "\n" + pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    const bool scalar = std::none_of(v.begin(), v.end(),
                                     [](const Json& e) { return e.is_structured(); });
    if (scalar) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        dump_json(v[i], out, indent + 1);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += inner;
      dump_json(v[i], out, indent + 1);
    }
    out += "\n" + pad + "]";
  } else if (v.is_number_float()) {
    const double x = v.get<double>();
    out += std::isfinite(x) ? format_real(x) : "null";
  } else {
    out += v.dump();
  }
}

std::string render(const RunConfig& config, const Document& doc) {
  std::string out;
  if (config.format == OutputFormat::csv) {
    out += fmt::format("# tool: {} {}\n", kToolName, kToolVersion);
    out += fmt::format("# subcommand: {}\n", to_string(config.subcommand));
    for (const auto& [k, v] : config.params) out += fmt::format("# param: {}={}\n", k, v);
    out += fmt::format("# convention: zero_as_residue={}\n", config.zero_as_residue);
    for (const auto& [k, v] : doc.conventions) out += fmt::format("# convention: {}={}\n", k, v);
    for (const auto& w : doc.warnings) out += fmt::format("# warning: {}\n", w);
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
      out += (i ? "," : "") + doc.columns[i];
    }
    out += '\n';
    for (const auto& row : doc.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
      out += '\n';
    }
    for (const auto& [k, v] : doc.summary.items()) {
      out += fmt::format("# summary: {}={}\n", k, cell_text(v));
    }
    return out;
  }

  Json root = Json::object();
  Json meta = Json::object();
  meta["tool"] = std::string(kToolName);
  meta["version"] = std::string(kToolVersion);
  meta["subcommand"] = std::string(to_string(config.subcommand));
  Json params = Json::object();
  for (const auto& [k, v] : config.params) params[k] = v;
  meta["params"] = params;
  Json conventions = Json::object();
  conventions["zero_as_residue"] = config.zero_as_residue;
  for (const auto& [k, v] : doc.conventions) conventions[k] = v;
  meta["conventions"] = conventions;
  meta["warnings"] = doc.warnings;
  root["metadata"] = meta;
  if (doc.body) {
    root["result"] = *doc.body;
  } else {
    root["columns"] = doc.columns;
    Json rows = Json::array();
    for (const auto& row : doc.rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[doc.columns[i]] = row[i];
      rows.push_back(obj);
    }
    root["rows"] = rows;
    root["summary"] = doc.summary;
  }
  dump_json(root, out, 0);
  out += '\n';
  return out;
}

// ---- subcommand execution ----------------------------------------------------

std::vector<u64> selected_primes(const RunConfig& c) {
  if (c.has("p")) return {c.integer("p")};
  std::vector<u64> out = primes_in({std::max<u64>(c.integer("lo"), 3), std::max<u64>(c.integer("hi"), 3)});
  std::erase_if(out, [](u64 p) { return p < 3; });
  return out;
}

const char* convention_label(bool zero_as_residue) {
  return zero_as_residue ? "zero_as_residue_cyclic" : "nonzero_only";
}

void run_nres(const RunConfig& c, Document& doc) {
  doc.columns = {"p", "n_p"};
  const auto primes = selected_primes(c);
  const auto nres = kernels::omp::least_nonresidues(primes, c.workers);
  for (std::size_t i = 0; i < primes.size(); ++i) doc.add_row({primes[i], nres[i]});
}

void run_dp(const RunConfig& c, Document& doc) {
  doc.columns = {"p", "d_p", "convention"};
  doc.conventions.emplace_back("d_p", "longest run of consecutive residues (= max_u d_u - 1)");
  for (const u64 p : selected_primes(c)) {
    doc.add_row({p, longest_qr_run(p, c.zero_as_residue), convention_label(c.zero_as_residue)});
  }
}

void run_dup(const RunConfig& c, Document& doc) {
  doc.columns = {"p", "u", "d_u"};
  doc.conventions.emplace_back("d_u", "least h with a non-residue in [u+1, u+h]");
  const u64 u = c.integer("u");
  for (const u64 p : selected_primes(c)) {
    doc.add_row({p, u, first_nonresidue_after(p, u, c.zero_as_residue)});
  }
}

void run_gaps(const RunConfig& c, Document& doc) {
  const auto primes = selected_primes(c);
  if (!c.has("h") && !c.has("quartic")) {
    doc.columns = {"p", "k", "n_k", "delta_k"};
    doc.conventions.emplace_back("delta_k", "n_{k+1} - n_k, empty on the last non-residue");
    for (const u64 p : primes) {
      const GapStats s = gap_stats(p);
      for (std::size_t k = 0; k < s.n_seq.size(); ++k) {
        const Json delta = k < s.deltas.size() ? Json(s.deltas[k]) : Json(nullptr);
        doc.add_row({p, k + 1, s.n_seq[k], delta});
      }
    }
    return;
  }
  doc.columns = {"p", "h", "N_h", "S_h", "c1", "c2"};
  const GapTailScan scan = c.has("quartic") ? gap_tail_scan_quartic(primes, c.workers)
                                            : gap_tail_scan(primes, c.integer("h"), c.workers);
  if (c.has("quartic")) doc.conventions.emplace_back("h", "ceil(p^(1/4)) per prime");
  for (const auto& r : scan.rows) doc.add_row({r.p, r.h, r.count, r.sum, r.c1, r.c2});
  doc.summary["max_c1"] = scan.max_c1;
  doc.summary["max_c2"] = scan.max_c2;
}

void run_charsum(const RunConfig& c, Document& doc) {
  doc.columns = {"q", "M", "nu", "sum", "bound", "ratio"};
  const int nu = static_cast<int>(c.integer("nu"));
  if (nu > 3) doc.warnings.push_back("nu > 3: Burgess exponent used beyond nu = 1, 2, 3");
  doc.conventions.emplace_back("bound", "M^(1-1/nu) q^((nu+1)/(4 nu^2)), o(1) dropped");
  if (!c.has("M")) doc.conventions.emplace_back("M", "ceil(q^(2/3))");
  std::vector<u64> moduli;
  if (c.has("sweep")) {
    moduli = sample_odd_nonsquares(*c.seed, c.integer("sweep"), c.integer("qmin"), c.integer("qmax"));
    doc.conventions.emplace_back("generator", "mt19937_64, multiply-high reduction, odd non-square rejection");
  } else {
    moduli = {c.integer("q")};
  }
  std::vector<double> ratios;
  for (const u64 q : moduli) {
    const u64 M = c.has("M") ? c.integer("M") : ceil_two_thirds_power(q);
    const CharSumReport r = burgess_report(M, q, nu);
    doc.add_row({r.q, r.M, r.nu, r.sum, r.burgess_main, r.ratio});
    ratios.push_back(r.ratio);
  }
  if (c.has("sweep")) {
    std::sort(ratios.begin(), ratios.end());
    const std::size_t n = ratios.size();
    const double median = n % 2 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    doc.summary["max_ratio"] = ratios.back();
    doc.summary["median_ratio"] = median;
  }
}

void run_rough(const RunConfig& c, Document& doc) {
  const double eta = c.real("eta");
  const u64 M = c.integer("M");
  const RoughSet set = rough_set(eta, M);
  doc.conventions.emplace_back("rough", "m <= M with no prime factor p <= M^eta; 1 included");
  if (!c.has("q")) {
    doc.columns = {"eta", "M", "count", "ratio_c0"};
    doc.add_row({eta, M, set.size(), set.ratio_c0});
    return;
  }
  doc.columns = {"eta", "M", "q", "plus", "minus", "zero", "main_term"};
  const RoughPartition part = rough_partition(set, c.integer("q"));
  doc.add_row({eta, M, part.q, part.count_plus, part.count_minus, part.count_zero, part.main_term});
  doc.summary["error_scale"] = part.error_scale;
  doc.summary["deviation_plus"] = part.deviation_plus;
  doc.summary["deviation_minus"] = part.deviation_minus;
}

void run_sfree(const RunConfig& c, Document& doc) {
  doc.columns = {"u", "h", "count", "pair_count", "ratio"};
  doc.conventions.emplace_back("ratio", "pair_count / (A h), A = prod_{p <= 10^6} (1 - 2/p^2)");
  const SquarefreePairDensity d = squarefree_pair_density(c.integer("u"), c.integer("h"));
  doc.add_row({d.u, d.h, d.count, d.pair_count, d.ratio});
}

void run_erdos(const RunConfig& c, Document& doc) {
  doc.columns = {"x", "primes", "mean", "constant_partial"};
  doc.conventions.emplace_back("primes", "odd primes only; p = 2 excluded");
  const ErdosMean e = erdos_mean(c.integer("x"), c.workers);
  doc.add_row({e.x, e.primes, e.mean, e.constant_partial});
}

void run_exceptional(const RunConfig& c, Document& doc) {
  doc.columns = {"Q", "u", "h", "exceptional", "total", "density"};
  doc.conventions.emplace_back("exceptional", "p in [Q, 2Q] with d_u(p) > h");
  const u64 Q = c.integer("q");
  const std::vector<u64> us =
      c.has("samples") ? sample_u_values(*c.seed, c.integer("samples"), 2 * Q)
                       : std::vector<u64>{c.integer("u")};
  if (c.has("samples")) doc.conventions.emplace_back("generator", "mt19937_64, multiply-high reduction on [0, 2Q]");
  const std::vector<u64> hs = c.has("sweep") ? log_h_sweep(Q, c.integer("sweep")) : c.integer_list("h");
  const double logQ = std::log(static_cast<double>(Q));
  if (std::any_of(us.begin(), us.end(), [&](u64 u) { return u > 2 * Q; })) {
    doc.warnings.push_back("u > 2Q: beyond the usual range u <= 2Q");
  }
  if (std::any_of(hs.begin(), hs.end(), [&](u64 h) { return static_cast<double>(h) > logQ; })) {
    doc.warnings.push_back("h > log Q");
  }

  const std::vector<u64> primes = primes_in({Q, 2 * Q});
  for (const u64 u : us) {
    for (const u64 h : hs) {
      ScanOptions options;
      options.workers = c.workers;
      options.zero_as_residue = c.zero_as_residue;
      if (c.checkpoint_path) {
        options.checkpoint = c.checkpoint_path->string() + fmt::format(".u{}.h{}", u, h);
        options.checkpoint_every = c.checkpoint_every;
      }
      const ExceptionalDensity d = exceptional_density(primes, Q, u, h, options);
      doc.add_row({d.Q, d.u, d.h, d.exceptional, d.total, d.density});
    }
  }
}

Json trace_json(const TraceReport& r) {
  Json j = Json::object();
  j["Q"] = r.Q;
  j["u"] = r.u;
  j["h"] = r.h;
  j["eta"] = r.eta;
  j["M"] = r.M;
  j["regime"] = std::string(to_string(r.regime));
  j["regime_forced"] = r.regime_forced;
  Json set = Json::object();
  set["members"] = r.N;
  set["size"] = r.N_size;
  set["N1_size"] = r.N1_size;
  set["N3_size"] = r.N3_size;
  j["N"] = set;
  j["T"] = r.T;
  Json rough = Json::object();
  rough["size"] = r.rough_size;
  rough["prime_cutoff"] = r.rough_prime_cutoff;
  j["rough_set"] = rough;
  j["primes_in_range"] = r.primes_in_range;
  Json sums = Json::object();
  sums["S_direct"] = r.S_direct;
  sums["S_rough"] = r.S_rough;
  sums["S_rough_swapped"] = r.S_rough_swapped;
  sums["diagonal"] = r.T * r.rough_size;
  sums["off_diagonal"] = r.off_diagonal;
  j["sums"] = sums;
  Json rhs = Json::object();
  rhs["sieve"] = r.rhs_terms.sieve;
  rhs["charsum"] = r.rhs_terms.charsum;
  rhs["tail"] = r.rhs_terms.tail;
  rhs["diagonal_exact"] = r.rhs_terms.diagonal_exact;
  j["rhs_terms"] = rhs;
  j["exceptional_bound"] = r.exceptional_bound;
  j["exceptional_count"] = r.exceptional_count;
  Json checks = Json::object();
  checks["S_direct_le_S_rough"] = r.S_direct <= r.S_rough;
  checks["count_le_bound"] = static_cast<double>(r.exceptional_count) <= r.exceptional_bound;
  j["checks"] = checks;
  return j;
}

void run_trace(const RunConfig& c, Document& doc) {
  const TraceReport r = proof_trace(c.integer("q"), c.integer("u"), c.integer("h"), c.real("eta"),
                                    c.workers);
  doc.conventions.emplace_back("M", "rough-set height fixed at 2Q");
  doc.conventions.emplace_back("N_tie", "N1 chosen when #N1 = #N3");
  doc.conventions.emplace_back("constants", "unknown absolute constants set to 1 in rhs_terms");
  if (r.h_beyond_logQ) doc.warnings.push_back("h > log Q");
  if (r.regime_forced) doc.warnings.push_back("u < 3: large-h regime forced");
  doc.body = trace_json(r);
}

void run_crt(const RunConfig& c, Document& doc) {
  doc.columns = {"u"};
  std::vector<Congruence> congruences;
  for (const auto& item : split(c.text("pair"), ',')) {
    const auto parts = split(item, ':');
    congruences.push_back({parse_u64(parts[0], "pair"), parse_u64(parts[1], "pair")});
  }
  const u128 u = crt_adversarial_u(congruences);
  if (u <= ~u64{0}) {
    doc.add_row({static_cast<u64>(u)});
  } else {
    doc.add_row({qnr::to_string(u)});
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Document doc;
  try {
    switch (config.subcommand) {
      case Subcommand::nres: run_nres(config, doc); break;
      case Subcommand::dp: run_dp(config, doc); break;
      case Subcommand::dup: run_dup(config, doc); break;
      case Subcommand::gaps: run_gaps(config, doc); break;
      case Subcommand::charsum: run_charsum(config, doc); break;
      case Subcommand::rough: run_rough(config, doc); break;
      case Subcommand::sfree: run_sfree(config, doc); break;
      case Subcommand::erdos: run_erdos(config, doc); break;
      case Subcommand::exceptional: run_exceptional(config, doc); break;
      case Subcommand::trace: run_trace(config, doc); break;
      case Subcommand::crt: run_crt(config, doc); break;
    }
  } catch (const Error& e) {
    err << kToolName << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << kToolName << ": " << e.what() << '\n';
    return 2;
  }

  const std::string text = render(config, doc);
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text) || !file.flush()) {
      err << kToolName << ": cannot write " << config.output_path->string() << '\n';
      return 2;
    }
  } else {
    out << text;
    out.flush();
  }
  return 0;
}

int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return 0;
  } catch (const UsageError& e) {
    err << kToolName << ": usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << kToolName << ": usage error: " << e.what() << '\n';
    return 1;
  }
  return run(config, out, err);
}

}  // namespace qnr::cli
