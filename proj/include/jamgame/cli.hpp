#pragma once

// The `jamgame` command-line front end. Kept in a header so the test suites
// can drive every subcommand in-process.
//
//   jamgame nash|best-response|oracle|dynamics|sweep --config <path>
//           [--format json|table|csv] [--out <path>] [command flags]
//
// Exit codes: 0 success, 2 input error, 3 verification failure.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jamgame/best_response.hpp"
#include "jamgame/equilibrium.hpp"
#include "jamgame/io.hpp"
#include "jamgame/oracle.hpp"

namespace jamgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitVerify = 3;

using io::json;

struct CommonOptions {
  std::string config;
  std::string format = "json";
  std::string out;
};

struct Output {
  std::string text;
  int code = kExitOk;
};

namespace detail {

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Left-aligned text table.
inline std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c + 1 < r.size()) os << std::left << std::setw(static_cast<int>(width[c])) << r[c] << "  ";
      else os << r[c] << "\n";
    }
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

inline std::vector<double> parse_vector(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw io::InputError("--fixed: cannot parse '" + item + "' as a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw io::InputError("--fixed: cannot parse '" + item + "' as a number");
    out.push_back(x);
  }
  return out;
}

inline std::string joined(std::span<const double> xs) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + io::fmt12(xs[k]);
  return s;
}

inline void require_format(const std::string& f, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (f == a) return;
  throw io::InputError("format '" + f + "' is not supported by this command");
}

}  // namespace detail

// --- nash -------------------------------------------------------------------

struct NashOptions {
  bool verify = false;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
};

inline Output cmd_nash(const CommonOptions& common, const NashOptions& opt) {
  detail::require_format(common.format, {"json", "table", "csv"});
  io::Config cfg = io::load_config(common.config);
  GameParams p = cfg.params();
  NashSolution s = solve_nash(p);

  Output o;
  json verification;
  bool verified = true;
  if (opt.verify) {
    NashReport rep = verify_nash(p, s, {opt.trials, opt.seed, kOptTol});
    verified = rep.pass();
    verification = io::to_json(rep, opt.seed);
  }
  if (!verified) o.code = kExitVerify;

  if (common.format == "json") {
    o.text = detail::dump(io::nash_record(cfg, p, s, verification));
  } else if (common.format == "csv") {
    std::ostringstream os;
    os << "k,noise,tx,jam,regime\n";
    for (std::size_t k = 0; k < p.size(); ++k) {
      os << k + 1 << ',' << io::fmt12(p.channels().noise(k)) << ',' << io::fmt12(s.tx[k]) << ','
         << io::fmt12(s.jam[k]) << ',' << to_string(s.regimes[k]) << '\n';
    }
    o.text = os.str();
  } else {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < p.size(); ++k) {
      rows.push_back({std::to_string(k + 1), io::fmt12(p.channels().noise(k)), io::fmt12(s.tx[k]),
                      io::fmt12(s.jam[k]), std::string(to_string(s.regimes[k]))});
    }
    std::ostringstream os;
    os << detail::table({"k", "noise", "tx", "jam", "regime"}, rows);
    os << "v = " << io::fmt12(s.v) << "\nw = " << io::fmt12(s.w) << "\nu = " << io::fmt12(s.u)
       << "\nvalue = " << io::fmt12(s.value) << " nats\n";
    if (opt.verify) os << "verification: " << (verified ? "pass" : "FAIL") << "\n" << verification.dump(2) << "\n";
    o.text = os.str();
  }
  return o;
}

// --- best-response ----------------------------------------------------------

struct BestResponseOptions {
  std::string player;  // "tx" or "jam"
  std::string fixed;   // comma-separated opponent allocation
};

inline constexpr const char* kDegenerateNote =
    "degenerate: any allocation optimal; canonical noise-waterfilling returned";

inline Output cmd_best_response(const CommonOptions& common, const BestResponseOptions& opt) {
  detail::require_format(common.format, {"json", "table"});
  io::Config cfg = io::load_config(common.config);
  GameParams p = cfg.params();
  if (opt.player != "tx" && opt.player != "jam") throw io::InputError("--player must be tx or jam");

  Allocation fixed;
  fixed.powers = detail::parse_vector(opt.fixed);
  fixed.budget = opt.player == "tx" ? p.j_budget() : p.t_budget();
  auto rep = validate_allocation(fixed, p.size());
  const bool zero_tx = opt.player == "jam" && rep.length_ok && jamgame::detail::all_zero(fixed);
  if (!rep.ok() && !zero_tx) throw io::InputError("--fixed is not a feasible allocation: " + rep.describe());

  Output o;
  json j{{"command", "best-response"}, {"config", io::to_json(cfg)}, {"player", opt.player},
         {"fixed", io::nums(fixed.powers)}};
  std::ostringstream table;
  if (opt.player == "tx") {
    auto br = tx_best_response(p, fixed);
    const double resid = tx_waterfill_residual(p, br.tx, fixed, br.level);
    if (resid > kOptTol) o.code = kExitVerify;
    j["response"] = io::nums(br.tx.powers);
    j["v"] = io::num(br.level);
    j["value"] = io::num(utility(p, br.tx, fixed));
    j["waterfill_residual"] = io::num(resid);
    table << "tx = " << detail::joined(br.tx.powers) << "\nv = " << io::fmt12(br.level)
          << "\nvalue = " << io::fmt12(utility(p, br.tx, fixed)) << "\nwaterfill residual = " << io::fmt12(resid)
          << "\n";
  } else {
    auto br = jam_best_response(p, fixed);
    if (!br.degenerate && br.kkt.max_residual() > kKktTol) o.code = kExitVerify;
    j["response"] = io::nums(br.jam.powers);
    j["u"] = io::num(br.kkt.u);
    j["lambdas"] = io::nums(br.kkt.lambdas);
    // the fixed tx may be the all-zero degenerate input, so skip the budget check
    const double value = utility_unchecked(p.channels(), fixed.powers, br.jam.powers);
    j["value"] = io::num(value);
    j["kkt"] = {{"stationarity", io::num(br.kkt.stationarity)},
                {"complementarity", io::num(br.kkt.complementarity)},
                {"budget", io::num(br.kkt.budget)}};
    j["degenerate"] = br.degenerate;
    if (br.degenerate) j["note"] = kDegenerateNote;
    table << "jam = " << detail::joined(br.jam.powers) << "\nu = " << io::fmt12(br.kkt.u)
          << "\nlambda = " << detail::joined(br.kkt.lambdas) << "\nvalue = " << io::fmt12(value)
          << "\nkkt residual = " << io::fmt12(br.kkt.max_residual()) << "\n";
    if (br.degenerate) table << kDegenerateNote << "\n";
  }
  o.text = common.format == "json" ? detail::dump(j) : table.str();
  return o;
}

// --- oracle -----------------------------------------------------------------

inline Output cmd_oracle(const CommonOptions& common, std::size_t resolution) {
  detail::require_format(common.format, {"json", "table"});
  io::Config cfg = io::load_config(common.config);
  GameParams p = cfg.params();
  if (p.size() > kMaxGridChannels) {
    throw io::InputError("oracle supports at most " + std::to_string(kMaxGridChannels) + " channels (config has " +
                         std::to_string(p.size()) + "); the grid grows as resolution^(M-1)");
  }
  GridResult g;
  try {
    g = grid_minimax(p, {resolution, p.size()});
  } catch (const std::invalid_argument& e) {
    throw io::InputError(e.what());
  }
  NashSolution s = solve_nash(p);
  const double gap = g.value - s.value;

  Output o;
  if (common.format == "json") {
    json j{{"command", "oracle"},       {"config", io::to_json(cfg)},     {"resolution", resolution},
           {"points", g.points},        {"grid_value", io::num(g.value)}, {"nash_value", io::num(s.value)},
           {"gap", io::num(gap)},       {"gap_bound", io::num(g.gap_bound)}, {"spacing", io::num(g.spacing)},
           {"lipschitz", io::num(g.lipschitz)}, {"argmin_jam", io::nums(g.argmin_jam.powers)},
           {"best_tx", io::nums(g.best_tx.powers)}};
    o.text = detail::dump(j);
  } else {
    std::ostringstream os;
    os << "grid points = " << g.points << "\ngrid value = " << io::fmt12(g.value)
       << "\nnash value = " << io::fmt12(s.value) << "\ngap = " << io::fmt12(gap)
       << "\ngap bound = " << io::fmt12(g.gap_bound) << "\nargmin jam = " << detail::joined(g.argmin_jam.powers)
       << "\nbest tx = " << detail::joined(g.best_tx.powers) << "\n";
    o.text = os.str();
  }
  return o;
}

// --- dynamics ---------------------------------------------------------------

struct DynamicsCliOptions {
  double gamma = 0.5;
  std::uint64_t seed = 1;
  std::size_t max_iters = 10'000;
  std::string order = "simultaneous";
  bool trace = false;
};

inline Output cmd_dynamics(const CommonOptions& common, const DynamicsCliOptions& opt) {
  detail::require_format(common.format, {"json", "table"});
  io::Config cfg = io::load_config(common.config);
  GameParams p = cfg.params();
  if (!(opt.gamma > 0.0 && opt.gamma <= 1.0)) throw io::InputError("--gamma must be in (0, 1]");
  if (opt.order != "simultaneous" && opt.order != "alternating") {
    throw io::InputError("--order must be simultaneous or alternating");
  }

  std::mt19937_64 rng(opt.seed);
  Allocation tx0 = sample_simplex(rng, p.size(), p.t_budget());
  Allocation jam0 = sample_simplex(rng, p.size(), p.j_budget());
  DynamicsOptions dopt;
  dopt.damping = opt.gamma;
  dopt.max_iters = opt.max_iters;
  dopt.alternating = opt.order == "alternating";
  DynamicsTrace tr = run_dynamics(p, tx0, jam0, dopt);
  NashSolution s = solve_nash(p);

  const auto& last = tr.iterates.empty() ? DynamicsIterate{tx0.powers, jam0.powers, 0.0} : tr.iterates.back();
  Output o;
  if (common.format == "json") {
    json j{{"command", "dynamics"},
           {"config", io::to_json(cfg)},
           {"gamma", io::num(opt.gamma)},
           {"seed", opt.seed},
           {"order", opt.order},
           {"max_iters", opt.max_iters},
           {"start_tx", io::nums(tx0.powers)},
           {"start_jam", io::nums(jam0.powers)},
           {"iterations", tr.iterations},
           {"converged", tr.converged},
           {"last_step", io::num(tr.last_step)},
           {"final_distance", io::num(tr.final_distance)},
           {"final_tx", io::nums(last.tx)},
           {"final_jam", io::nums(last.jam)},
           {"final_utility", io::num(last.utility)},
           {"nash_value", io::num(s.value)}};
    if (opt.trace) {
      json it = json::array();
      for (const auto& x : tr.iterates) it.push_back({{"tx", io::nums(x.tx)}, {"jam", io::nums(x.jam)}, {"utility", io::num(x.utility)}});
      j["trace"] = it;
    }
    o.text = detail::dump(j);
  } else {
    std::ostringstream os;
    os << "gamma = " << io::fmt12(opt.gamma) << " (" << opt.order << ")\niterations = " << tr.iterations
       << "\nconverged = " << (tr.converged ? "true" : "false") << "\nfinal distance = " << io::fmt12(tr.final_distance)
       << "\nfinal tx = " << detail::joined(last.tx) << "\nfinal jam = " << detail::joined(last.jam) << "\n";
    o.text = os.str();
  }
  return o;
}

// --- sweep ------------------------------------------------------------------

struct SweepOptions {
  std::string vary;  // t_budget | j_budget | noise:K (1-based)
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 2;
  std::string scale = "linear";
};

inline std::vector<double> sweep_values(const SweepOptions& opt) {
  if (!(opt.from < opt.to)) throw io::InputError("--from must be less than --to");
  if (opt.steps < 2) throw io::InputError("--steps must be at least 2");
  if (opt.scale != "linear" && opt.scale != "log") throw io::InputError("--scale must be linear or log");
  if (opt.scale == "log" && !(opt.from > 0.0)) throw io::InputError("--scale log needs --from > 0");
  std::vector<double> xs(opt.steps);
  const double n = static_cast<double>(opt.steps - 1);
  for (std::size_t i = 0; i < opt.steps; ++i) {
    const double t = static_cast<double>(i) / n;
    xs[i] = opt.scale == "linear" ? opt.from + (opt.to - opt.from) * t
                                  : std::exp(std::log(opt.from) + (std::log(opt.to) - std::log(opt.from)) * t);
  }
  xs.front() = opt.from;
  xs.back() = opt.to;
  return xs;
}

inline std::string sweep_header(std::size_t m) {
  std::string h = "varied,value,v,w,u";
  for (std::size_t k = 1; k <= m; ++k) h += ",T_" + std::to_string(k);
  for (std::size_t k = 1; k <= m; ++k) h += ",J_" + std::to_string(k);
  for (std::size_t k = 1; k <= m; ++k) h += ",regime_" + std::to_string(k);
  return h;
}

inline Output cmd_sweep(const CommonOptions& common, const SweepOptions& opt) {
  detail::require_format(common.format, {"csv", "json"});
  io::Config base = io::load_config(common.config);
  std::size_t noise_index = 0;
  if (opt.vary.rfind("noise:", 0) == 0) {
    const std::string idx = opt.vary.substr(6);
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(idx, &used);
      if (used != idx.size()) k = 0;
    } catch (const std::exception&) {
      k = 0;
    }
    if (k < 1 || k > base.channels.size()) {
      throw io::InputError("--vary noise:K needs 1 <= K <= " + std::to_string(base.channels.size()));
    }
    noise_index = k;
  } else if (opt.vary != "t_budget" && opt.vary != "j_budget") {
    throw io::InputError("unknown --vary key '" + opt.vary + "' (expected t_budget, j_budget or noise:K)");
  }

  const auto xs = sweep_values(opt);
  std::vector<io::Config> configs;
  for (double x : xs) {
    io::Config c = base;
    if (opt.vary == "t_budget") c.t_budget = x;
    else if (opt.vary == "j_budget") c.j_budget = x;
    else c.channels[noise_index - 1] = x;
    configs.push_back(c);
  }
  // Validate every step before solving any.
  std::vector<GameParams> params;
  for (const auto& c : configs) params.push_back(c.params());

  const std::size_t m = base.channels.size();
  std::ostringstream csv;
  json rows = json::array();
  csv << sweep_header(m) << "\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    NashSolution s = solve_nash(params[i]);
    csv << io::fmt12(xs[i]) << ',' << io::fmt12(s.value) << ',' << io::fmt12(s.v) << ',' << io::fmt12(s.w) << ','
        << io::fmt12(s.u);
    for (double t : s.tx.powers) csv << ',' << io::fmt12(t);
    for (double j : s.jam.powers) csv << ',' << io::fmt12(j);
    for (Regime r : s.regimes) csv << ',' << to_string(r);
    csv << "\n";
    json regimes = json::array();
    for (Regime r : s.regimes) regimes.push_back(std::string(to_string(r)));
    rows.push_back({{"varied", io::num(xs[i])}, {"value", io::num(s.value)}, {"v", io::num(s.v)}, {"w", io::num(s.w)},
                    {"u", io::num(s.u)}, {"tx", io::nums(s.tx.powers)}, {"jam", io::nums(s.jam.powers)},
                    {"regimes", regimes}});
  }
  Output o;
  if (common.format == "csv") {
    o.text = csv.str();
  } else {
    o.text = detail::dump(json{{"command", "sweep"}, {"config", io::to_json(base)}, {"vary", opt.vary}, {"rows", rows}});
  }
  return o;
}

// --- entry point ------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmitter-vs-jammer power allocation game over parallel Gaussian channels"};
  app.name("jamgame");
  app.require_subcommand(1);

  CommonOptions common;
  common.format.clear();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "game config (JSON)")->required();
    sub->add_option("--format", common.format, "json, table or csv (sweep: csv or json)");
    sub->add_option("--out", common.out, "write output to this file instead of stdout");
  };

  NashOptions nash_opt;
  auto* nash = app.add_subcommand("nash", "solve for the Nash equilibrium");
  add_common(nash);
  nash->add_flag("--verify", nash_opt.verify, "attach verification residuals; exit 3 if any check fails");
  nash->add_option("--trials", nash_opt.trials, "saddle-probe deviations per player");
  nash->add_option("--seed", nash_opt.seed, "saddle-probe seed");

  BestResponseOptions br_opt;
  auto* br = app.add_subcommand("best-response", "best response against a fixed opponent allocation");
  add_common(br);
  br->add_option("--player", br_opt.player, "responding player: tx or jam")->required();
  br->add_option("--fixed", br_opt.fixed, "opponent allocation, comma-separated")->required();

  std::size_t resolution = 101;
  auto* oracle = app.add_subcommand("oracle", "brute-force grid minimax (M <= 4)");
  add_common(oracle);
  oracle->add_option("--resolution", resolution, "grid points per simplex edge");

  DynamicsCliOptions dyn_opt;
  auto* dyn = app.add_subcommand("dynamics", "damped best-response dynamics from a seeded random start");
  add_common(dyn);
  dyn->add_option("--gamma", dyn_opt.gamma, "damping in (0, 1]");
  dyn->add_option("--seed", dyn_opt.seed);
  dyn->add_option("--max-iters", dyn_opt.max_iters);
  dyn->add_option("--order", dyn_opt.order, "simultaneous or alternating");
  dyn->add_flag("--trace", dyn_opt.trace, "include every iterate");

  SweepOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "solve the equilibrium along a parameter sweep");
  add_common(sweep);
  sweep->add_option("--vary", sweep_opt.vary, "t_budget, j_budget or noise:K")->required();
  sweep->add_option("--from", sweep_opt.from)->required();
  sweep->add_option("--to", sweep_opt.to)->required();
  sweep->add_option("--steps", sweep_opt.steps)->required();
  sweep->add_option("--scale", sweep_opt.scale, "linear or log");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "jamgame: " << e.what() << "\n";
    return kExitInput;
  }

  if (common.format.empty()) common.format = sweep->parsed() ? "csv" : "json";

  Output result;
  try {
    if (nash->parsed()) result = cmd_nash(common, nash_opt);
    else if (br->parsed()) result = cmd_best_response(common, br_opt);
    else if (oracle->parsed()) result = cmd_oracle(common, resolution);
    else if (dyn->parsed()) result = cmd_dynamics(common, dyn_opt);
    else result = cmd_sweep(common, sweep_opt);
  } catch (const std::invalid_argument& e) {
    err << "jamgame: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "jamgame: internal error: " << e.what() << "\n";
    return kExitVerify;
  }

  if (!common.out.empty()) {
    std::ofstream f(common.out, std::ios::binary);
    if (!f) {
      err << "jamgame: cannot write '" << common.out << "'\n";
      return kExitInput;
    }
    f << result.text;
  } else {
    out << result.text;
  }
  if (result.code == kExitVerify) err << "jamgame: verification failed\n";
  return result.code;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("jamgame");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace jamgame::cli
