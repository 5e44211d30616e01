// cli.hpp
// Command implementations behind the pufqas tool: closed-form bound tables
// (with the two built-in figure sweeps), Monte Carlo verification of the
// cloner against the closed form, and protocol simulation. Kept out of
// main() so tests can drive commands directly and compare output bytes.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pufqas/bounds.hpp"
#include "pufqas/cloning.hpp"
#include "pufqas/protocol.hpp"
#include "pufqas/report.hpp"

namespace pufqas {

// Exit codes of the command layer.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitStatFailure = 3;

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Integer range grammar: "start:stop:step" (stop inclusive when hit) or a
// comma-separated list, or a single value.
inline std::vector<std::int64_t> parse_int_range(const std::string& text) {
  if (text.empty()) throw UsageError("empty range");
  std::vector<std::int64_t> out;
  const auto to_int = [](const std::string& tok) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad integer in range: '" + tok + "'");
    }
    if (used != tok.size()) throw UsageError("bad integer in range: '" + tok + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw UsageError("range must be start:stop:step");
    const std::int64_t start = to_int(parts[0]);
    const std::int64_t stop = to_int(parts[1]);
    const std::int64_t step = to_int(parts[2]);
    if (step == 0) throw UsageError("range step must be nonzero");
    if (step > 0)
      for (std::int64_t v = start; v <= stop; v += step) out.push_back(v);
    else
      for (std::int64_t v = start; v >= stop; v += step) out.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) throw UsageError("empty element in range list");
      out.push_back(to_int(tok));
    }
  }
  if (out.empty()) throw UsageError("range produced no values");
  return out;
}

// "fixed:N" or "poisson:MEAN".
inline PhotonSource parse_source(const std::string& text) {
  const auto sep = text.find(':');
  if (sep == std::string::npos) throw UsageError("source must be fixed:N or poisson:MEAN");
  const std::string kind = text.substr(0, sep);
  const std::string value = text.substr(sep + 1);
  try {
    if (kind == "fixed") return PhotonSource::fixed(std::stoll(value));
    if (kind == "poisson") return PhotonSource::poisson(std::stod(value));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad source value: ") + e.what());
  }
  throw UsageError("source kind must be fixed or poisson");
}

struct RunConfig {
  std::string command;  // bounds | sweep | simulate | verify-cloner
  std::vector<std::int64_t> n_values;
  std::vector<std::int64_t> m_values;  // clone counts
  std::vector<std::int64_t> d_values;
  std::int64_t rounds = 20;
  double epsilon = 0.25;
  double eta = 1.0;
  std::optional<PhotonSource> source;
  std::int64_t trials = 1000;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  std::string format = "csv";  // csv | json
  std::string out_path;        // empty writes to stdout
  std::string preset;          // fig2a | fig2b
  std::string strategy = "honest";
};

namespace detail {

inline std::string source_label(const PhotonSource& s) {
  if (s.kind == PhotonSource::Kind::fixed)
    return "fixed:" + std::to_string(s.fixed_n);
  return "poisson:" + format_double(s.mean);
}

// Guarded z-score; clone-count-equal rows have almost-zero spread.
inline double z_score(double observed, double expected, double std_error) {
  return (observed - expected) / std::max(std_error, 1e-12);
}

}  // namespace detail

// Closed-form table over an explicit (N, M, d) grid. Rows with N > M are
// skipped. When a Poisson source is configured its averaged bound columns
// are appended.
inline Table run_bounds(const RunConfig& cfg) {
  if (cfg.n_values.empty() || cfg.m_values.empty() || cfg.d_values.empty())
    throw UsageError("bounds needs --n, --clones and --dim ranges");
  const bool with_poisson =
      cfg.source.has_value() && cfg.source->kind == PhotonSource::Kind::poisson;

  Table table;
  table.columns = {"n", "clones", "dim", "uqcm_fidelity", "est_fidelity",
                   "pqcm_fidelity_1to2", "rounds", "epsilon", "total_false_accept"};
  if (with_poisson) {
    table.columns.push_back("lambda");
    table.columns.push_back("poisson_exact");
    table.columns.push_back("poisson_jensen");
  }
  table.columns.push_back("provenance");

  std::vector<std::int64_t> ns = cfg.n_values, ms = cfg.m_values, ds = cfg.d_values;
  std::sort(ns.begin(), ns.end());
  std::sort(ms.begin(), ms.end());
  std::sort(ds.begin(), ds.end());

  for (const auto n : ns)
    for (const auto m : ms) {
      if (n > m) continue;
      for (const auto d : ds) {
        AttackBoundInputs inputs;
        inputs.n_photons = n;
        inputs.m_clones = m;
        inputs.d = d;
        inputs.m_rounds = cfg.rounds;
        inputs.epsilon = cfg.epsilon;
        if (with_poisson) inputs.n_avg = cfg.source->mean;
        try {
          inputs.validate();
        } catch (const std::domain_error& e) {
          throw UsageError(e.what());
        }
        const double uqcm = uqcm_fidelity(n, m, d);
        std::vector<Cell> row = {n,
                                 m,
                                 d,
                                 uqcm,
                                 est_fidelity(n, d),
                                 pqcm_fidelity_1to2(d),
                                 cfg.rounds,
                                 cfg.epsilon,
                                 total_false_accept(uqcm, n, cfg.rounds, cfg.epsilon)};
        if (with_poisson) {
          const PhotonAvgBound avg = poisson_avg_bound(cfg.source->mean, m, d);
          row.emplace_back(cfg.source->mean);
          row.emplace_back(avg.exact);
          row.emplace_back(avg.jensen);
        }
        row.emplace_back(std::string("analytic"));
        table.rows.push_back(std::move(row));
      }
    }
  if (table.rows.empty()) throw UsageError("grid produced no valid (N, M, d) rows");
  return table;
}

// The two built-in sweeps: clone count at a single input copy, and input
// copies at a large fixed clone count, both across several dimensions.
inline Table run_sweep(const RunConfig& cfg) {
  if (cfg.preset != "fig2a" && cfg.preset != "fig2b")
    throw UsageError("sweep requires --preset fig2a or fig2b");

  Table table;
  table.columns = {"n", "clones", "dim", "uqcm_fidelity", "est_fidelity", "provenance"};
  const std::vector<std::int64_t> dims_a = {2, 10, 50, 100, 1000};
  const std::vector<std::int64_t> dims_b = {10, 50, 100, 1100};
  if (cfg.preset == "fig2a") {
    for (std::int64_t m = 1; m <= 200; ++m)
      for (const auto d : dims_a)
        table.rows.push_back({std::int64_t{1}, m, d, uqcm_fidelity(1, m, d),
                              est_fidelity(1, d), std::string("analytic")});
  } else {
    for (std::int64_t n = 1; n <= 500; ++n)
      for (const auto d : dims_b)
        table.rows.push_back({n, std::int64_t{2000}, d, uqcm_fidelity(n, 2000, d),
                              est_fidelity(n, d), std::string("analytic")});
  }
  return table;
}

// Monte Carlo cloner check: sampled mean single-clone fidelity against the
// closed form, one row per grid point. stats_ok goes false when any
// successful row lands more than four standard errors away.
inline Table run_verify_cloner(const RunConfig& cfg, bool& stats_ok) {
  std::vector<std::int64_t> ns = cfg.n_values.empty()
                                     ? std::vector<std::int64_t>{1, 2}
                                     : cfg.n_values;
  std::vector<std::int64_t> ms = cfg.m_values.empty()
                                     ? std::vector<std::int64_t>{2, 3, 4}
                                     : cfg.m_values;
  std::vector<std::int64_t> ds = cfg.d_values.empty()
                                     ? std::vector<std::int64_t>{2, 3}
                                     : cfg.d_values;
  std::sort(ns.begin(), ns.end());
  std::sort(ms.begin(), ms.end());
  std::sort(ds.begin(), ds.end());

  Table table;
  table.columns = {"n",           "clones",      "dim",
                   "samples",     "seed",        "analytic_fidelity",
                   "oracle_mean", "oracle_std_error", "z_score",
                   "status",      "provenance"};
  stats_ok = true;
  std::uint64_t row_index = 0;
  for (const auto n : ns)
    for (const auto m : ms) {
      if (n > m) continue;
      for (const auto d : ds) {
        const double analytic = uqcm_fidelity(n, m, d);
        std::vector<Cell> row = {n,
                                 m,
                                 d,
                                 cfg.samples,
                                 static_cast<std::int64_t>(cfg.seed),
                                 analytic};
        try {
          const CloneParams params(static_cast<int>(n), static_cast<int>(m),
                                   static_cast<int>(d));
          const SeededRng rng(cfg.seed, row_index);
          const McEstimate mc = avg_clone_fidelity_mc(params, cfg.samples, rng);
          const double z = detail::z_score(mc.mean, analytic, mc.std_error);
          if (std::abs(z) > 4.0) stats_ok = false;
          row.emplace_back(mc.mean);
          row.emplace_back(mc.std_error);
          row.emplace_back(z);
          row.emplace_back(std::string("ok"));
        } catch (const capacity_error& e) {
          row.emplace_back(std::monostate{});
          row.emplace_back(std::monostate{});
          row.emplace_back(std::monostate{});
          row.emplace_back(std::string("capacity_error: ") + e.what());
        }
        row.emplace_back(std::string("oracle"));
        table.rows.push_back(std::move(row));
        ++row_index;
      }
    }
  if (table.rows.empty()) throw UsageError("grid produced no valid (N, M, d) rows");
  return table;
}

namespace detail {

inline ProverStrategy strategy_from_name(const std::string& name, std::int64_t m_clones) {
  if (name == "honest") return ProverStrategy::honest();
  if (name == "random-key") return ProverStrategy::random_key();
  if (name == "estimation") return ProverStrategy::estimation();
  if (name == "uqcm-analytic")
    return ProverStrategy::uqcm(static_cast<int>(m_clones), AttackMode::analytic_rate);
  if (name == "uqcm-exact")
    return ProverStrategy::uqcm(static_cast<int>(m_clones), AttackMode::exact_oracle);
  throw UsageError("unknown strategy '" + name + "'");
}

// Flat per-photon rate of a strategy, when one exists; the closed-form
// accept prediction only applies to flat-rate provers with a fixed source
// and a lossless detector.
inline std::optional<double> flat_rate(const ProverStrategy& s, const PhotonSource& src,
                                       std::int64_t d) {
  if (src.kind != PhotonSource::Kind::fixed) return std::nullopt;
  switch (s.kind) {
    case ProverKind::honest: return 1.0;
    case ProverKind::estimation_attack: return est_fidelity(src.fixed_n, d);
    case ProverKind::uqcm_attack:
      if (s.mode != AttackMode::analytic_rate) return std::nullopt;
      return uqcm_fidelity(std::min<std::int64_t>(src.fixed_n, s.m_clones), s.m_clones, d);
    default: return std::nullopt;
  }
}

}  // namespace detail

// Protocol simulation over a (dim x clones) grid. Rows carry the empirical
// decision rates and, where the closed form applies, its prediction and the
// discrepancy z-score.
inline Table run_simulate(const RunConfig& cfg) {
  std::vector<std::int64_t> ds = cfg.d_values.empty() ? std::vector<std::int64_t>{2}
                                                      : cfg.d_values;
  std::vector<std::int64_t> ms = cfg.m_values.empty() ? std::vector<std::int64_t>{2}
                                                      : cfg.m_values;
  std::sort(ds.begin(), ds.end());
  std::sort(ms.begin(), ms.end());
  const PhotonSource source = cfg.source.value_or(PhotonSource::fixed(1));

  Table table;
  table.columns = {"strategy",   "source",      "dim",
                   "clones",     "rounds",      "epsilon",
                   "eta",        "trials",      "seed",
                   "accept_rate", "accept_std_error", "reject_rate",
                   "abort_rate", "mean_n1",     "mean_n2",
                   "predicted_accept", "z_score", "status",
                   "provenance"};

  std::uint64_t row_index = 0;
  for (const auto d : ds)
    for (const auto m : ms) {
      std::vector<Cell> row = {cfg.strategy,
                               detail::source_label(source),
                               d,
                               m,
                               cfg.rounds,
                               cfg.epsilon,
                               cfg.eta,
                               cfg.trials,
                               static_cast<std::int64_t>(cfg.seed)};
      try {
        const ProverStrategy strategy = detail::strategy_from_name(cfg.strategy, m);
        ProtocolParams params;
        params.m_rounds = cfg.rounds;
        params.epsilon = cfg.epsilon;
        params.eta = cfg.eta;
        params.source = source;
        params.seed = cfg.seed;
        params.validate();

        SeededRng row_rng(cfg.seed, row_index);
        PufRegistry registry;
        const PufRecord& puf = registry.enroll(static_cast<int>(d), row_rng);
        const RateEstimate est =
            estimate_rates(puf, strategy, params, cfg.trials, row_rng);

        row.emplace_back(est.accept_rate);
        row.emplace_back(est.accept_std_error);
        row.emplace_back(est.reject_rate);
        row.emplace_back(est.abort_rate);
        row.emplace_back(est.mean_n1);
        row.emplace_back(est.mean_n2);
        const auto rate = detail::flat_rate(strategy, source, d);
        if (rate.has_value() && cfg.eta == 1.0) {
          const double predicted =
              total_false_accept(*rate, source.fixed_n, cfg.rounds, cfg.epsilon);
          row.emplace_back(predicted);
          row.emplace_back(detail::z_score(est.accept_rate, predicted,
                                           est.accept_std_error));
        } else {
          row.emplace_back(std::monostate{});
          row.emplace_back(std::monostate{});
        }
        row.emplace_back(std::string("ok"));
      } catch (const UsageError&) {
        throw;
      } catch (const std::domain_error& e) {
        throw UsageError(e.what());
      } catch (const capacity_error& e) {
        while (row.size() < table.columns.size() - 2) row.emplace_back(std::monostate{});
        row.emplace_back(std::string("capacity_error: ") + e.what());
      }
      row.emplace_back(std::string("simulation"));
      table.rows.push_back(std::move(row));
      ++row_index;
    }
  return table;
}

// Dispatch a parsed configuration, emit the table in the requested format,
// and map statistical verification onto the exit code.
inline int run_config(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json")
    throw UsageError("format must be csv or json");

  Table table;
  bool stats_ok = true;
  if (cfg.command == "bounds") {
    table = cfg.preset.empty() ? run_bounds(cfg) : run_sweep(cfg);
  } else if (cfg.command == "sweep") {
    table = run_sweep(cfg);
  } else if (cfg.command == "verify-cloner") {
    table = run_verify_cloner(cfg, stats_ok);
  } else if (cfg.command == "simulate") {
    table = run_simulate(cfg);
  } else {
    throw UsageError("unknown command '" + cfg.command + "'");
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + cfg.out_path + "'");
    out = &file;
  }
  if (cfg.format == "csv")
    write_csv(table, *out);
  else
    write_json(table, *out);
  out->flush();

  return stats_ok ? kExitOk : kExitStatFailure;
}

}  // namespace pufqas
