#pragma once

// Config ingestion and result serialization for the command-line front end.
//
// Config: one flat JSON object
//   { "alpha_t": 1, "alpha_j": 1, "t_budget": 2, "j_budget": 1,
//     "channels": [1, 1], "noise_unit": "linear" }
// noise_unit is optional ("linear" or "db"); dB values are converted once,
// here, as N = 10^(N_dB / 10).
//
// Every number written out is rounded to 12 significant digits.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jamgame/equilibrium.hpp"
#include "jamgame/game.hpp"

namespace jamgame::io {

using json = nlohmann::json;

/// Malformed or invalid user input. The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  double alpha_t = 1.0;
  double alpha_j = 1.0;
  double t_budget = 0.0;
  double j_budget = 0.0;
  std::vector<double> channels;      // as written in the file
  std::string noise_unit = "linear";

  std::vector<double> linear_noise() const {
    if (noise_unit == "linear") return channels;
    std::vector<double> out;
    out.reserve(channels.size());
    for (double db : channels) out.push_back(std::pow(10.0, db / 10.0));
    return out;
  }

  GameParams params() const {
    try {
      return GameParams(ChannelSet(linear_noise(), alpha_t, alpha_j), t_budget, j_budget);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
};

inline double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline json num(double x) { return std::isfinite(x) ? json(round12(x)) : json(nullptr); }

inline json nums(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

namespace detail {

inline double positive_field(const json& j, const char* name) {
  if (!j.contains(name)) throw InputError(std::string("missing field '") + name + "'");
  const auto& v = j.at(name);
  if (!v.is_number()) throw InputError(std::string(name) + " must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x) || x <= 0.0) throw InputError(std::string(name) + " must be positive");
  return x;
}

}  // namespace detail

inline Config parse_config(const json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  static const char* known[] = {"alpha_t", "alpha_j", "t_budget", "j_budget", "channels", "noise_unit"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw InputError("unknown field '" + it.key() + "'");
  }
  Config c;
  c.alpha_t = detail::positive_field(j, "alpha_t");
  c.alpha_j = detail::positive_field(j, "alpha_j");
  c.t_budget = detail::positive_field(j, "t_budget");
  c.j_budget = detail::positive_field(j, "j_budget");
  if (j.contains("noise_unit")) {
    if (!j.at("noise_unit").is_string()) throw InputError("noise_unit must be \"linear\" or \"db\"");
    c.noise_unit = j.at("noise_unit").get<std::string>();
    if (c.noise_unit != "linear" && c.noise_unit != "db") throw InputError("noise_unit must be \"linear\" or \"db\"");
  }
  if (!j.contains("channels")) throw InputError("missing field 'channels'");
  const auto& ch = j.at("channels");
  if (!ch.is_array()) throw InputError("channels must be an array of noise powers");
  if (ch.empty()) throw InputError("channels must be non-empty");
  for (std::size_t k = 0; k < ch.size(); ++k) {
    if (!ch[k].is_number()) throw InputError("channels[" + std::to_string(k) + "] must be a number");
    double x = ch[k].get<double>();
    if (!std::isfinite(x)) throw InputError("channels[" + std::to_string(k) + "] must be finite");
    if (c.noise_unit == "linear" && x <= 0.0) {
      throw InputError("channels[" + std::to_string(k) + "] must be positive");
    }
    c.channels.push_back(x);
  }
  return c;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

inline json to_json(const Config& c) {
  return json{{"alpha_t", num(c.alpha_t)}, {"alpha_j", num(c.alpha_j)}, {"t_budget", num(c.t_budget)},
              {"j_budget", num(c.j_budget)}, {"channels", nums(c.channels)}, {"noise_unit", c.noise_unit}};
}

inline json to_json(const NashReport& r, std::uint64_t seed) {
  json issues = json::array();
  for (const auto& i : r.regime_issues) issues.push_back({{"k", i.channel + 1}, {"what", i.what}});
  return json{{"pass", r.pass()},
              {"tolerance", num(r.tol)},
              {"tx_fixed_point", num(r.tx_fixed_point)},
              {"jam_fixed_point", num(r.jam_fixed_point)},
              {"kkt_stationarity", num(r.kkt.stationarity)},
              {"kkt_complementarity", num(r.kkt.complementarity)},
              {"kkt_budget", num(r.kkt.budget)},
              {"threshold_residual", num(r.threshold_residual)},
              {"value_residual", num(r.value_residual)},
              {"regime_issues", issues},
              {"saddle",
               {{"trials", r.saddle.trials},
                {"seed", seed},
                {"worst_jam_margin", num(r.saddle.worst_jam_margin)},
                {"worst_tx_margin", num(r.saddle.worst_tx_margin)},
                {"violations", r.saddle.jam_violations.size() + r.saddle.tx_violations.size()}}}};
}

/// The nash result record. `verification` is attached only when not null.
inline json nash_record(const Config& c, const GameParams& p, const NashSolution& s, const json& verification = {}) {
  json rows = json::array();
  for (std::size_t k = 0; k < p.size(); ++k) {
    rows.push_back({{"k", k + 1},
                    {"noise", num(p.channels().noise(k))},
                    {"tx", num(s.tx[k])},
                    {"jam", num(s.jam[k])},
                    {"regime", std::string(to_string(s.regimes[k]))}});
  }
  json out{{"command", "nash"}, {"config", to_json(c)}, {"channels", rows}, {"v", num(s.v)},
           {"w", num(s.w)},     {"u", num(s.u)},        {"value", num(s.value)}};
  if (!verification.is_null()) out["verification"] = verification;
  return out;
}

/// Reads a nash record back into the game and its solution.
inline std::pair<GameParams, NashSolution> parse_nash_record(const json& j) {
  try {
    Config c = parse_config(j.at("config"));
    GameParams p = c.params();
    NashSolution s;
    s.tx.budget = p.t_budget();
    s.jam.budget = p.j_budget();
    const auto& rows = j.at("channels");
    if (rows.size() != p.size()) throw InputError("record has " + std::to_string(rows.size()) + " channel rows");
    for (const auto& row : rows) {
      s.tx.powers.push_back(row.at("tx").get<double>());
      s.jam.powers.push_back(row.at("jam").get<double>());
      Regime r;
      if (!parse_regime(row.at("regime").get<std::string>(), r)) throw InputError("unknown regime label");
      s.regimes.push_back(r);
    }
    s.v = j.at("v").get<double>();
    s.w = j.at("w").get<double>();
    s.u = j.at("u").get<double>();
    s.value = j.at("value").get<double>();
    return {std::move(p), std::move(s)};
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed nash record: ") + e.what());
  }
}

}  // namespace jamgame::io
