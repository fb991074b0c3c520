// Command-line front end over the shared-library C API.

#include <delgame/delgame.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitDomainError = 3;

int exit_code_for(int rc) {
  return rc == DG_ERR_INVALID_CONFIG ? kExitConfigError : kExitDomainError;
}

int report_api_error(int rc) {
  std::fprintf(stderr, "error: %s (%s)\n", dg_last_error_message(),
               dg_error_name(rc));
  return exit_code_for(rc);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_complex(dg_complex z) {
  if (std::abs(z.im) < 1e-15) return fmt17(z.re);
  return fmt17(z.re) + (z.im < 0 ? " - " : " + ") + fmt17(std::abs(z.im)) + "i";
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return false;
  }
  return true;
}

struct ModelHandle {
  dg_model* model = nullptr;
  json params;
  ~ModelHandle() { dg_model_destroy(model); }
};

// returns 0 or a process exit code
int load_model(const std::string& config_path, ModelHandle& out) {
  std::ifstream f(config_path, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot read config %s\n", config_path.c_str());
    return kExitConfigError;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  if (int rc = dg_model_create_from_json(buf.str().c_str(), &out.model))
    return report_api_error(rc);
  char* pj = nullptr;
  if (int rc = dg_model_to_json(out.model, &pj)) return report_api_error(rc);
  out.params = json::parse(pj);
  dg_string_free(pj);
  return 0;
}

void write_metadata(const std::string& out_path, const std::string& command,
                    const json& params, const json& options,
                    const std::string& method) {
  if (out_path.empty()) return;
  json meta;
  meta["command"] = command;
  meta["params"] = params;
  meta["options"] = options;
  meta["method"] = method;
  write_output(out_path + ".meta.json", meta.dump(2) + "\n");
}

int cmd_eval(const std::string& config, const std::string& out_path, double u,
             double v, double theta, const std::string& path) {
  ModelHandle mh;
  if (int rc = load_model(config, mh)) return rc;
  const dg_complex cu{u, 0.0}, cv{v, 0.0}, ct{theta, 0.0};

  std::ostringstream os;
  dg_complex gamma{};
  if (int rc = dg_gamma_joint(mh.model, cu, cv, ct, &gamma))
    return report_api_error(rc);
  os << "u = " << fmt17(u) << ", v = " << fmt17(v) << ", theta = " << fmt17(theta)
     << "\n";
  os << "gamma(u,v,theta) = " << fmt_complex(gamma) << "\n";

  dg_complex closed{}, viaop{};
  const bool want_closed = path == "both" || path == "closed";
  const bool want_op = path == "both" || path == "operator";
  bool have_closed = false;
  if (want_closed) {
    if (int rc = dg_phi_closed(mh.model, cu, cv, ct, &closed)) {
      if (path == "closed") return report_api_error(rc);
      os << "phi_closed = unavailable (" << dg_error_name(rc) << ")\n";
    } else {
      have_closed = true;
      os << "phi_closed = " << fmt_complex(closed) << "\n";
    }
  }
  if (want_op) {
    if (int rc = dg_phi_operator(mh.model, cu, cv, ct, &viaop))
      return report_api_error(rc);
    os << "phi_operator = " << fmt_complex(viaop) << "\n";
  }
  bool disagree = false;
  if (have_closed && want_op) {
    const double diff = std::hypot(closed.re - viaop.re, closed.im - viaop.im);
    os << "abs_diff = " << fmt17(diff) << "\n";
    disagree = diff > 1e-6;
    if (disagree) os << "WARNING: analytic paths disagree beyond 1e-6\n";
  }
  if (!write_output(out_path, os.str())) return kExitDomainError;
  return disagree ? kExitCheckFailed : 0;
}

int cmd_pmf(const std::string& config, const std::string& out_path,
            const std::string& side, long max_k) {
  ModelHandle mh;
  if (int rc = load_model(config, mh)) return rc;
  if (max_k < 0)
    max_k = mh.params["M"].get<long>() + mh.params["N"].get<long>() + 60;
  std::vector<double> mass(static_cast<size_t>(max_k) + 1);
  const int side_id = side == "A" ? DG_SIDE_A : DG_SIDE_B;
  if (int rc = dg_pmf(mh.model, side_id, max_k, mass.data()))
    return report_api_error(rc);
  std::ostringstream os;
  os << "k,mass\n";
  for (long k = 0; k <= max_k; ++k)
    os << k << "," << fmt17(mass[static_cast<size_t>(k)]) << "\n";
  if (!write_output(out_path, os.str())) return kExitDomainError;
  write_metadata(out_path, "pmf", mh.params,
                 json{{"side", side}, {"max_k", max_k}},
                 "pgf-coefficient-extraction-dft");
  return 0;
}

int cmd_pdf(const std::string& config, const std::string& out_path,
            double t_max, double t_step) {
  ModelHandle mh;
  if (int rc = load_model(config, mh)) return rc;
  if (!(t_step > 0.0) || !(t_max >= 0.0)) {
    std::fprintf(stderr, "error: need t-step > 0 and t-max >= 0\n");
    return kExitConfigError;
  }
  const auto n = static_cast<size_t>(std::floor(t_max / t_step)) + 1;
  std::vector<double> density(n);
  if (int rc = dg_tau_pdf_grid(mh.model, 0.0, t_step, n, density.data()))
    return report_api_error(rc);
  std::ostringstream os;
  os << "t,density\n";
  for (size_t i = 0; i < n; ++i)
    os << fmt17(t_step * static_cast<double>(i)) << "," << fmt17(density[i])
       << "\n";
  if (!write_output(out_path, os.str())) return kExitDomainError;
  write_metadata(out_path, "pdf", mh.params,
                 json{{"t_max", t_max}, {"t_step", t_step}},
                 "partial-fraction-inversion");
  return 0;
}

int cmd_simulate(const std::string& config, const std::string& out_path,
                 uint64_t paths, uint64_t seed, const std::string& mode,
                 const std::vector<std::string>& queries) {
  ModelHandle mh;
  if (int rc = load_model(config, mh)) return rc;
  std::vector<double> uvt;
  if (queries.empty()) {
    for (double u : {0.5, 0.8, 1.0})
      for (double v : {0.5, 0.8, 1.0})
        for (double theta : {0.0, 0.5, 1.0}) {
          uvt.push_back(u);
          uvt.push_back(v);
          uvt.push_back(theta);
        }
  } else {
    for (const auto& q : queries) {
      double u, v, theta;
      if (std::sscanf(q.c_str(), "%lf,%lf,%lf", &u, &v, &theta) != 3) {
        std::fprintf(stderr, "error: bad --query '%s', expected u,v,theta\n",
                     q.c_str());
        return kExitConfigError;
      }
      uvt.push_back(u);
      uvt.push_back(v);
      uvt.push_back(theta);
    }
  }
  char* out_json = nullptr;
  const int mode_id = mode == "event" ? DG_MODE_EVENT : DG_MODE_INTERVAL;
  if (int rc = dg_simulate_to_json(mh.model, paths, seed, mode_id, uvt.data(),
                                   uvt.size() / 3, &out_json))
    return report_api_error(rc);
  const std::string text = std::string(out_json) + "\n";
  dg_string_free(out_json);
  if (!write_output(out_path, text)) return kExitDomainError;
  return 0;
}

int cmd_validate(const std::string& config, const std::string& out_path,
                 uint64_t paths, uint64_t seed) {
  ModelHandle mh;
  if (int rc = load_model(config, mh)) return rc;
  char* out_json = nullptr;
  int all_pass = 0;
  if (int rc = dg_validate_to_json(mh.model, paths, seed, &out_json, &all_pass))
    return report_api_error(rc);
  const json report = json::parse(out_json);
  dg_string_free(out_json);
  std::ostringstream os;
  int n_pass = 0;
  for (const auto& check : report["checks"]) {
    const bool pass = check["pass"].get<bool>();
    n_pass += pass ? 1 : 0;
    os << "[" << check["id"].get<int>() << "] " << (pass ? "PASS" : "FAIL")
       << " " << check["name"].get<std::string>() << ": "
       << check["detail"].get<std::string>() << "\n";
  }
  os << "result: " << (all_pass ? "ALL PASS" : "FAILED") << " (" << n_pass
     << "/" << report["checks"].size() << ")\n";
  if (!write_output(out_path, os.str())) return kExitDomainError;
  return all_pass ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and simulated laws of the observed ruin time and "
               "terminal casualties in a delayed two-player attrition game"};
  app.require_subcommand(1);

  struct {
    std::string config, out;
    double u = 1.0, v = 1.0, theta = 0.0;
    std::string path = "both";
    std::string side = "A";
    long max_k = -1;
    double t_max = 10.0, t_step = 0.01;
    uint64_t paths = 100000, seed = 1;
    std::string mode = "interval";
    std::vector<std::string> queries;
    uint64_t v_paths = 1000000, v_seed = 7;
  } o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "parameter config (JSON)")->required();
    cmd->add_option("--out", o.out, "output path (default: stdout)");
  };

  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate the joint transform by both analytic routes");
  add_common(eval);
  eval->add_option("--u", o.u, "transform argument u");
  eval->add_option("--v", o.v, "transform argument v");
  eval->add_option("--theta", o.theta, "transform argument theta");
  eval->add_option("--path", o.path, "both|closed|operator")
      ->check(CLI::IsMember({"both", "closed", "operator"}));

  CLI::App* pmf = app.add_subcommand(
      "pmf", "casualty distribution at the observed end of the game (CSV)");
  add_common(pmf);
  pmf->add_option("--side", o.side, "A or B")
      ->check(CLI::IsMember({"A", "B"}));
  pmf->add_option("--max-k", o.max_k, "largest casualty count (default M+N+60)");

  CLI::App* pdf = app.add_subcommand(
      "pdf", "density of the observed ruin time on a uniform grid (CSV)");
  add_common(pdf);
  pdf->add_option("--t-max", o.t_max, "grid end");
  pdf->add_option("--t-step", o.t_step, "grid step");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo summary (JSON)");
  add_common(sim);
  sim->add_option("--paths", o.paths, "number of simulated games");
  sim->add_option("--seed", o.seed, "random seed");
  sim->add_option("--mode", o.mode, "interval|event")
      ->check(CLI::IsMember({"interval", "event"}));
  sim->add_option("--query", o.queries,
                  "transform query point 'u,v,theta' (repeatable)");

  CLI::App* val = app.add_subcommand(
      "validate", "run the full cross-validation suite and report pass/fail");
  add_common(val);
  val->add_option("--paths", o.v_paths, "paths per Monte Carlo check");
  val->add_option("--seed", o.v_seed, "random seed for the Monte Carlo checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  if (eval->parsed()) return cmd_eval(o.config, o.out, o.u, o.v, o.theta, o.path);
  if (pmf->parsed()) return cmd_pmf(o.config, o.out, o.side, o.max_k);
  if (pdf->parsed()) return cmd_pdf(o.config, o.out, o.t_max, o.t_step);
  if (sim->parsed())
    return cmd_simulate(o.config, o.out, o.paths, o.seed, o.mode, o.queries);
  if (val->parsed()) return cmd_validate(o.config, o.out, o.v_paths, o.v_seed);
  return kExitConfigError;
}
