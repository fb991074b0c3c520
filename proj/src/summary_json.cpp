#include <json.hpp>

#include "delgame/config.hpp"
#include "delgame/simulate.hpp"

namespace delgame {

namespace {

using json = nlohmann::ordered_json;

json complex_to_json(Complex z) {
  if (z.imag() == 0.0) return json(z.real());
  return json{{"re", z.real()}, {"im", z.imag()}};
}

json table_to_json(const DistributionTable& t) {
  json out;
  out["support"] = t.support;
  out["mass"] = t.values;
  if (!t.stderrs.empty()) out["stderr"] = t.stderrs;
  return out;
}

}  // namespace

std::string summary_to_json(const SimSummary& s, const GameParams& p) {
  json out;
  out["params"] = json::parse(params_to_json_text(p));
  out["n_paths"] = s.n_paths;
  out["seed"] = s.seed;
  out["mode"] = s.mode == SimMode::Interval ? "interval" : "event";
  json fns = json::array();
  for (const auto& est : s.functional_estimates) {
    json e;
    e["u"] = complex_to_json(est.u);
    e["v"] = complex_to_json(est.v);
    e["theta"] = complex_to_json(est.theta);
    e["mean"] = complex_to_json(est.mean);
    e["stderr"] = est.stderr_est;
    fns.push_back(e);
  }
  out["functional_estimates"] = fns;
  out["pmf_A"] = table_to_json(s.pmf_a);
  out["pmf_B"] = table_to_json(s.pmf_b);
  json hist;
  hist["bin_width"] = s.tau_hist.bin_width;
  hist["lo"] = s.tau_hist.lo;
  hist["counts"] = s.tau_hist.counts;
  out["tau_histogram"] = hist;
  out["tau_mean"] = s.tau_mean;
  out["tau_stderr"] = s.tau_stderr;
  json wins;
  wins["a_defeated"] = s.wins_a_defeated;
  wins["b_defeated"] = s.wins_b_defeated;
  wins["simultaneous"] = s.wins_simultaneous;
  out["win_counts"] = wins;
  return out.dump(2);
}

}  // namespace delgame
