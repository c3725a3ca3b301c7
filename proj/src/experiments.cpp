#include "qnr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qnr/error.hpp"
#include "qnr/residue_scan.hpp"
#include "qnr/sieve.hpp"

namespace qnr {

// ---- Erdős mean ----------------------------------------------------------

ErdosConstant erdos_constant_partial(u64 terms) {
  // p_K < K (ln K + ln ln K) for K >= 6.
  const double k = static_cast<double>(std::max<u64>(terms, 6));
  const u64 bound = static_cast<u64>(k * (std::log(k) + std::log(std::log(k)))) + 16;
  const std::vector<u64> primes = primes_in({2, bound});
  detail::LogAccumulator acc;  // plain compensated sum of the terms
  double scale = 1.0;
  for (u64 i = 0; i < terms; ++i) {
    scale *= 0.5;
    acc.add(static_cast<double>(primes[i]) * scale);
  }
  return {acc.sum(), terms};
}

ErdosConstant erdos_constant() {
  const std::vector<u64> primes = primes_in({2, 10'000});
  u64 terms = 0;
  double scale = 2.0;  // 2^-(K-1)
  for (const u64 p : primes) {
    ++terms;
    scale *= 0.5;
    if (static_cast<double>(p) * scale < 1e-12) break;
  }
  return erdos_constant_partial(terms);
}

ErdosMean erdos_mean(u64 x, int workers) {
  if (x < 3) fail(ErrorKind::parameter, "erdos_mean: x must be >= 3");
  if (x > kMaxErdosX) fail(ErrorKind::resource, "erdos_mean: x exceeds 10^8");
  const std::vector<u64> primes = primes_in({3, x});
  const std::vector<u64> nres = kernels::omp::least_nonresidues(primes, workers);
  ErdosMean out;
  out.x = x;
  out.primes = primes.size();
  out.nres_sum = std::accumulate(nres.begin(), nres.end(), u64{0});
  out.mean = static_cast<double>(out.nres_sum) / static_cast<double>(out.primes);
  out.constant_partial = erdos_constant().value;
  return out;
}

// ---- exceptional set -----------------------------------------------------

namespace {

struct Checkpoint {
  std::string signature;
  u64 blocks_done = 0;
  kernels::ExceptionalTally tally;
};

std::string checkpoint_signature(u64 Q, u64 u, u64 h, bool zero, std::size_t primes) {
  std::ostringstream s;
  s << "Q " << Q << " u " << u << " h " << h << " zero_as_residue " << zero << " primes "
    << primes;
  return s.str();
}

std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string magic, line, key;
  Checkpoint c;
  if (!std::getline(in, magic) || magic != "qnr-checkpoint 1") return std::nullopt;
  if (!std::getline(in, c.signature)) return std::nullopt;
  i64 last = -1;
  std::size_t witnesses = 0;
  if (!(in >> key >> last) || key != "last_completed_block") return std::nullopt;
  if (!(in >> key >> c.tally.exceptional) || key != "exceptional") return std::nullopt;
  if (!(in >> key >> c.tally.total) || key != "total") return std::nullopt;
  if (!(in >> key >> witnesses) || key != "witnesses") return std::nullopt;
  c.tally.witnesses.resize(witnesses);
  for (auto& w : c.tally.witnesses) {
    if (!(in >> w)) return std::nullopt;
  }
  c.blocks_done = static_cast<u64>(last + 1);
  return c;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(ErrorKind::resource, "cannot write checkpoint " + tmp.string());
    out << "qnr-checkpoint 1\n" << c.signature << '\n';
    out << "last_completed_block " << static_cast<i64>(c.blocks_done) - 1 << '\n';
    out << "exceptional " << c.tally.exceptional << '\n';
    out << "total " << c.tally.total << '\n';
    out << "witnesses " << c.tally.witnesses.size();
    for (const u64 w : c.tally.witnesses) out << ' ' << w;
    out << '\n';
  }
  std::filesystem::rename(tmp, path);
}

void validate_scan(u64 Q, u64 h) {
  if (Q < 10) fail(ErrorKind::parameter, "exceptional_density: Q must be >= 10");
  if (h < 1) fail(ErrorKind::parameter, "exceptional_density: h must be >= 1");
  if (Q > kMaxRangeWidth) fail(ErrorKind::resource, "exceptional_density: 2Q exceeds the sieve budget");
}

}  // namespace

ExceptionalDensity exceptional_density(u64 Q, u64 u, u64 h, const ScanOptions& options) {
  validate_scan(Q, h);
  const std::vector<u64> primes = primes_in({Q, 2 * Q});
  return exceptional_density(primes, Q, u, h, options);
}

ExceptionalDensity exceptional_density(std::span<const u64> primes, u64 Q, u64 u, u64 h,
                                       const ScanOptions& options) {
  validate_scan(Q, h);
  const u64 n = primes.size();
  const u64 blocks = (n + kernels::kBlockSize - 1) / kernels::kBlockSize;
  const std::string signature =
      checkpoint_signature(Q, u, h, options.zero_as_residue, primes.size());
  const bool checkpointing = options.checkpoint.has_value() && options.checkpoint_every > 0;

  Checkpoint state;
  state.signature = signature;
  if (checkpointing) {
    if (auto prior = read_checkpoint(*options.checkpoint);
        prior && prior->signature == signature && prior->blocks_done <= blocks) {
      state = std::move(*prior);
    }
  }

  const u64 wave = checkpointing ? options.checkpoint_every : std::max<u64>(blocks, 1);
  const u64 stop = options.stop_after_blocks.value_or(blocks);
  u64 b = state.blocks_done;
  while (b < blocks && b < stop) {
    const u64 end = std::min({blocks, b + wave, stop});
    const u64 lo = b * kernels::kBlockSize;
    const u64 hi = std::min(n, end * kernels::kBlockSize);
    state.tally.merge(kernels::omp::count_exceptional(primes.subspan(lo, hi - lo), u, h,
                                                      options.workers,
                                                      options.zero_as_residue));
    b = end;
    state.blocks_done = b;
    if (checkpointing) write_checkpoint(*options.checkpoint, state);
  }

  ExceptionalDensity out;
  out.Q = Q;
  out.u = u;
  out.h = h;
  out.exceptional = state.tally.exceptional;
  out.total = state.tally.total;
  out.density = out.total ? static_cast<double>(out.exceptional) / static_cast<double>(out.total) : 0.0;
  out.witnesses = std::move(state.tally.witnesses);
  out.u_beyond_2Q = u > 2 * Q;
  out.h_beyond_logQ = static_cast<double>(h) > std::log(static_cast<double>(Q));
  out.complete = b >= blocks;
  return out;
}

std::vector<u64> log_h_sweep(u64 Q, u64 steps) {
  if (Q < 3) fail(ErrorKind::parameter, "log_h_sweep: Q must be >= 3");
  const u64 step = static_cast<u64>(std::ceil(std::log(static_cast<double>(Q))));
  std::vector<u64> out;
  for (u64 k = 1; k <= steps; ++k) out.push_back(k * step);
  return out;
}

// ---- gap tails -----------------------------------------------------------

namespace {

GapTailScan summarize(std::vector<kernels::GapTailRow> rows) {
  GapTailScan out;
  out.rows = std::move(rows);
  for (const auto& r : out.rows) {
    out.max_c1 = std::max(out.max_c1, r.c1);
    out.max_c2 = std::max(out.max_c2, r.c2);
  }
  return out;
}

}  // namespace

GapTailScan gap_tail_scan(std::span<const u64> primes, u64 h, int workers) {
  if (h < 1) fail(ErrorKind::parameter, "gap_tail_scan: h must be >= 1");
  const std::vector<u64> hs(primes.size(), h);
  return summarize(kernels::omp::gap_tails(primes, hs, workers));
}

u64 ceil_fourth_root(u64 p) {
  u64 h = isqrt(isqrt(p));
  while (static_cast<u128>(h) * h * h * h < p) ++h;
  return h;
}

GapTailScan gap_tail_scan_quartic(std::span<const u64> primes, int workers) {
  std::vector<u64> hs;
  hs.reserve(primes.size());
  for (const u64 p : primes) hs.push_back(ceil_fourth_root(p));
  return summarize(kernels::omp::gap_tails(primes, hs, workers));
}

// ---- square-free pairs ---------------------------------------------------

SquarefreePairDensity squarefree_pair_density(u64 u, u64 h) {
  static const double A = feller_tornier_A(kFellerTornierCutoff);
  const SquarefreeWindow w = squarefree_in_interval(u, h);
  SquarefreePairDensity out;
  out.u = u;
  out.h = h;
  out.count = w.count();
  out.pair_count = w.pair_count;
  out.expected = A * static_cast<double>(h);
  out.ratio = static_cast<double>(out.pair_count) / out.expected;
  return out;
}

// ---- proof trace ---------------------------------------------------------

std::string_view to_string(Regime regime) {
  return regime == Regime::large_h ? "large-h" : "small-h";
}

u64 count_square_products(std::span<const u64> ns) {
  u64 t = 0;
  for (const u64 a : ns) {
    for (const u64 b : ns) {
      const u64 d = std::gcd(a, b);
      if (is_perfect_square(a / d) && is_perfect_square(b / d)) ++t;
    }
  }
  return t;
}

TraceReport proof_trace(u64 Q, u64 u, u64 h, double eta, int workers) {
  if (Q < 10) fail(ErrorKind::parameter, "proof_trace: Q must be >= 10");
  if (Q > (u64{1} << 31)) fail(ErrorKind::resource, "proof_trace: 2Q exceeds the sieve budget");
  if (h < 1 || h >= Q) fail(ErrorKind::parameter, "proof_trace: need 1 <= h < Q");
  if (u + h >= (u64{1} << 32)) {
    fail(ErrorKind::parameter, "proof_trace: u + h must stay below 2^32");
  }
  if (!(eta > 0.0 && eta < 1.0)) fail(ErrorKind::parameter, "proof_trace: eta must lie in (0, 1)");

  TraceReport r;
  r.Q = Q;
  r.u = u;
  r.h = h;
  r.eta = eta;
  r.M = 2 * Q;
  r.rough_prime_cutoff = rough_prime_cutoff(eta, r.M);
  if (r.rough_prime_cutoff >= Q) {
    fail(ErrorKind::parameter, "proof_trace: (2Q)^eta must be below Q");
  }
  if (r.rough_prime_cutoff < 2) {
    fail(ErrorKind::parameter, "proof_trace: (2Q)^eta must be at least 2");
  }

  r.regime_forced = u < 3;
  if (r.regime_forced) {
    r.regime = Regime::large_h;
  } else {
    const double ud = static_cast<double>(u);
    r.regime = static_cast<double>(h) >= std::sqrt(ud) / std::log(ud) ? Regime::large_h
                                                                       : Regime::small_h;
  }

  if (r.regime == Regime::large_h) {
    const SquarefreeWindow w = squarefree_in_interval(u, h);
    std::vector<u64> n1 = w.members_in_class(1);
    std::vector<u64> n3 = w.members_in_class(3);
    r.N1_size = n1.size();
    r.N3_size = n3.size();
    r.N = n1.size() >= n3.size() ? std::move(n1) : std::move(n3);
  } else {
    for (u64 n = u + 1; n <= u + h; ++n) {
      if (n % 4 == 1) r.N.push_back(n);
    }
  }
  r.N_size = r.N.size();
  if (r.N_size < 2) fail(ErrorKind::degenerate_set, "proof_trace: the set N has fewer than 2 elements");

  r.T = count_square_products(r.N);
  const std::vector<u64> primes = primes_in({Q, 2 * Q});
  r.primes_in_range = primes.size();
  const RoughSet rough = rough_set(eta, r.M);
  r.rough_size = rough.size();

  r.S_direct = kernels::omp::squared_symbol_sum(primes, r.N, workers);
  r.S_rough = kernels::omp::squared_symbol_sum(rough.members, r.N, workers);
  r.S_rough_swapped = kernels::omp::swapped_symbol_sum(rough.members, r.N, workers);
  if (static_cast<i64>(r.S_rough) != r.S_rough_swapped) {
    fail(ErrorKind::internal, "proof_trace: reciprocity route disagrees with the direct sum");
  }
  r.off_diagonal = static_cast<i64>(r.S_rough) - static_cast<i64>(r.T * r.rough_size);
  r.exceptional_count = kernels::omp::count_exceptional(primes, u, h, workers).exceptional;

  const double d = static_cast<double>((r.N_size - 1) * (r.N_size - 1));
  const double Qd = static_cast<double>(Q);
  const double hh = static_cast<double>(h) * static_cast<double>(h);
  r.exceptional_bound = static_cast<double>(r.S_direct) / d;
  r.rhs_terms.sieve = Qd * static_cast<double>(r.T) / (eta * d * std::log(Qd));
  r.rhs_terms.charsum =
      hh / d * std::pow(eta, std::pow(eta, -0.5) / 4.0 - 1.0) * Qd / std::log(2.0 * Qd);
  r.rhs_terms.tail = hh / d * std::pow(Qd, 1.0 - eta);
  r.rhs_terms.diagonal_exact =
      static_cast<double>(r.T) * static_cast<double>(r.rough_size) / d;
  r.h_beyond_logQ = static_cast<double>(h) > std::log(Qd);
  return r;
}

}  // namespace qnr
