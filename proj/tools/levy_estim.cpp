// levy_estim: simulate, estimate and tabulate stable and subordinator models.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "levy/error.hpp"
#include "levy/io.hpp"
#include "levy/kernels.hpp"
#include "levy/mc_harness.hpp"
#include "levy/skewed.hpp"
#include "levy/stable.hpp"
#include "levy/stable_density.hpp"
#include "levy/subordinator.hpp"
#include "levy/symmetric.hpp"
#include "levy/transforms.hpp"

using namespace levy;

namespace {

[[noreturn]] void usage_error(const std::string& msg, const std::string& ctx) {
  fail(ErrorCode::InvalidConfig, msg, ctx);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') usage_error("not a number: '" + s + "'", ctx);
  return v;
}

std::map<std::string, double> parse_params(const std::string& spec, const std::vector<std::string>& allowed) {
  std::map<std::string, double> out;
  for (const auto& kv : split(spec, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) usage_error("expected key=value, got '" + kv + "'", "--params");
    const std::string key = kv.substr(0, eq);
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) usage_error("unknown parameter '" + key + "'", "--params");
    out[key] = to_double(kv.substr(eq + 1), "--params");
  }
  return out;
}

double get(const std::map<std::string, double>& m, const std::string& key, double fallback) {
  const auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

/// "a:b:step" or a comma list.
std::vector<double> parse_grid(const std::string& spec, const std::string& ctx) {
  const auto parts = split(spec, ':');
  if (parts.size() == 3) {
    const double a = to_double(parts[0], ctx), b = to_double(parts[1], ctx), step = to_double(parts[2], ctx);
    if (!(step > 0.0) || b < a) usage_error("grid needs a <= b and step > 0", ctx);
    const long k = std::lround((b - a) / step);
    std::vector<double> out;
    for (long i = 0; i <= k; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& s : split(spec, ',')) out.push_back(to_double(s, ctx));
  if (out.empty()) usage_error("empty grid", ctx);
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_output(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_text_file(out, text);
}

std::string canonical_model(const std::string& m) {
  if (m == "stable" || m == "symmetric_stable") return "stable";
  if (m == "skewed" || m == "skewed_stable") return "skewed";
  if (m == "timevarying" || m == "timevarying_stable") return "timevarying";
  if (m == "gamma" || m == "gamma_sub") return "gamma";
  if (m == "ig" || m == "ig_sub") return "ig";
  usage_error("unknown model '" + m + "' (stable, skewed, timevarying, gamma, ig)", "--model");
}

// Shared by simulate and montecarlo.
struct ModelFlags {
  std::string model;
  std::string params;
  std::string path = "cosine";
};

Truth truth_from(const ModelFlags& f, ModelKind* kind) {
  const std::string m = canonical_model(f.model);
  Truth t;
  if (m == "stable") {
    const auto p = parse_params(f.params, {"beta", "sigma", "rho", "gamma"});
    t.beta = get(p, "beta", 1.5);
    t.sigma = get(p, "sigma", 1.0);
    t.rho = get(p, "rho", 0.0);
    t.gamma_trend = get(p, "gamma", 0.0);
    *kind = ModelKind::SymmetricStable;
  } else if (m == "skewed" || m == "timevarying") {
    const auto p = parse_params(f.params, {"beta", "p", "rho", "sigma"});
    t.beta = get(p, "beta", 1.5);
    t.sigma = get(p, "sigma", 1.0);
    if (p.count("p") && p.count("rho")) usage_error("give either p or rho, not both", "--params");
    t.rho = get(p, "rho", -0.5);
    t.p_pos = p.count("p") ? p.at("p") : skew_to_positivity(t.beta, t.rho);
    *kind = m == "skewed" ? ModelKind::SkewedStable : ModelKind::TimeVaryingStable;
    if (m == "timevarying") {
      if (f.path != "cosine" && f.path != "constant") usage_error("--path must be cosine or constant", "--path");
      t.cosine_path = f.path == "cosine";
      t.sigma_star = t.cosine_path ? 0.6 : std::pow(t.sigma, t.beta);
    } else {
      t.sigma_star = std::pow(t.sigma, t.beta);
    }
  } else {
    const auto p = parse_params(f.params, {"delta", "gamma"});
    t.delta = get(p, "delta", 1.0);
    t.gamma_sub = get(p, "gamma", 1.0);
    *kind = m == "gamma" ? ModelKind::GammaSub : ModelKind::IgSub;
  }
  return t;
}

HRule h_rule_from(std::optional<double> h, std::optional<double> T, std::optional<double> h_power, ModelKind kind,
                  std::size_t n_for_h) {
  if (kind == ModelKind::SkewedStable || kind == ModelKind::TimeVaryingStable) {
    if (h || T || h_power) usage_error("skewed and time-varying models always use h = 1/n", "--h/--T");
    return HRule{HRule::Kind::Power, 1.0};
  }
  const int given = (h ? 1 : 0) + (T ? 1 : 0) + (h_power ? 1 : 0);
  if (given != 1) usage_error("give exactly one of --h, --T, --h-power", "--h/--T");
  if (T) return HRule{HRule::Kind::FixedT, *T};
  if (h_power) return HRule{HRule::Kind::Power, *h_power};
  if (!(*h > 0.0)) usage_error("--h must be > 0", "--h");
  return HRule{HRule::Kind::FixedT, *h * static_cast<double>(n_for_h)};
}

IncrementSample simulate_model(ModelKind kind, const Truth& t, std::size_t n, double h, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::SymmetricStable:
      return sample_increments(StableParams{t.beta, t.sigma, t.rho, t.gamma_trend}, h, n, seed);
    case ModelKind::SkewedStable:
      return sample_timevarying(constant_path(std::pow(t.sigma, t.beta)), PositivityStable{t.beta, t.p_pos}, n, seed);
    case ModelKind::TimeVaryingStable:
      return sample_timevarying(t.cosine_path ? cosine_path() : constant_path(std::pow(t.sigma, t.beta)),
                                PositivityStable{t.beta, t.p_pos}, n, seed);
    case ModelKind::GammaSub: return sample_gamma_sub(GammaSubParams{t.delta, t.gamma_sub}, h, n, seed);
    case ModelKind::IgSub: return sample_ig_sub(IGSubParams{t.delta, t.gamma_sub}, h, n, seed);
  }
  usage_error("unknown model", "simulate");
}

std::vector<EstimatorSpec> parse_estimators(const std::string& spec) {
  std::vector<EstimatorSpec> out;
  for (const auto& item : split(spec, ',')) {
    const auto colon = item.find(':');
    EstimatorSpec e;
    e.id = item.substr(0, colon);
    for (auto& c : e.id)
      if (c == '-') c = '_';
    if (colon != std::string::npos) e.tuning = to_double(item.substr(colon + 1), "--estimators");
    if ((e.id == "sign_bipower" || e.id == "tripower") && colon == std::string::npos) e.tuning = 0.25;
    if (e.id == "frac" && colon == std::string::npos) usage_error("frac needs an order, e.g. frac:0.1", "--estimators");
    out.push_back(e);
  }
  if (out.empty()) usage_error("no estimators given", "--estimators");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimation of stable Levy processes and subordinators from high-frequency increments"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "levy_estim 1.0");
  app.add_flag_callback("--print-simd", [] { std::cerr << "kernels: " << kernels::active().name << "\n"; },
                        "Print the selected kernel variant to stderr");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate increments and write them as CSV");
  ModelFlags sim_model;
  std::size_t sim_n = 0;
  std::optional<double> sim_h, sim_T;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  sim->add_option("--model", sim_model.model, "stable, skewed, timevarying, gamma or ig")->required();
  sim->add_option("--params", sim_model.params, "key=value list, e.g. beta=1.5,sigma=0.5,rho=0,gamma=-0.5");
  sim->add_option("--path", sim_model.path, "time-varying scale path: cosine or constant");
  sim->add_option("--n", sim_n, "number of increments")->required()->check(CLI::PositiveNumber);
  sim->add_option("--h", sim_h, "sampling step");
  sim->add_option("--T", sim_T, "terminal time (h = T/n)");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "output CSV ('-' for stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate parameters from an increment CSV");
  std::string est_in, est_method, est_out;
  double est_p = 0.1, est_q = 0.25;
  std::optional<double> est_sigma;
  est->add_option("--in", est_in, "increment CSV")->required();
  est->add_option("--method", est_method,
                  "log, frac, known-scale, median, sign-bipower, tripower, gamma-mle, gamma-moment, ig-mle, pipeline")
      ->required();
  est->add_option("--p", est_p, "fractional order for frac (and pipeline step 1 when given)");
  est->add_option("--q", est_q, "multipower order for sign-bipower and tripower");
  est->add_option("--sigma", est_sigma, "known scale for known-scale");
  est->add_option("--out", est_out, "output JSON (default stdout)");

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Run a Monte Carlo experiment and emit a summary");
  ModelFlags mc_model;
  std::string mc_n = "1001", mc_estimators, mc_out, mc_format = "csv";
  std::optional<double> mc_h, mc_T, mc_hp;
  std::size_t mc_reps = 1000;
  std::uint64_t mc_seed = 20240607;
  unsigned mc_threads = 0;
  mc->add_option("--model", mc_model.model, "stable, skewed, timevarying, gamma or ig")->required();
  mc->add_option("--params", mc_model.params, "key=value list of true parameters");
  mc->add_option("--path", mc_model.path, "time-varying scale path: cosine or constant");
  mc->add_option("--n", mc_n, "comma-separated sample sizes");
  mc->add_option("--h", mc_h, "sampling step (with the first n, held as T fixed)");
  mc->add_option("--T", mc_T, "fixed terminal time");
  mc->add_option("--h-power", mc_hp, "h = n^-a");
  mc->add_option("--estimators", mc_estimators, "e.g. log,frac:0.1,median")->required();
  mc->add_option("--reps", mc_reps, "replications")->check(CLI::PositiveNumber);
  mc->add_option("--seed", mc_seed, "master seed");
  mc->add_option("--threads", mc_threads, "worker threads (0 = all cores)");
  mc->add_option("--format", mc_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  mc->add_option("--out", mc_out, "output file (default stdout)");

  // table
  auto* tab = app.add_subcommand("table", "Reproduce one of the published simulation tables");
  std::string tab_id, tab_out, tab_format = "csv";
  std::optional<double> tab_beta;
  std::size_t tab_reps = 1000;
  std::uint64_t tab_seed = 20240607;
  unsigned tab_threads = 0;
  tab->add_option("--id", tab_id, "table1, table2, table3 or table4")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "table3", "table4"}));
  tab->add_option("--reps", tab_reps, "replications per cell")->check(CLI::PositiveNumber);
  tab->add_option("--seed", tab_seed, "master seed");
  tab->add_option("--beta", tab_beta, "run only the cell with this true beta");
  tab->add_option("--threads", tab_threads, "worker threads (0 = all cores)");
  tab->add_option("--format", tab_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  tab->add_option("--out", tab_out, "output file (default stdout)");

  // fisher / variance
  auto* fis = app.add_subcommand("fisher", "Dump the asymptotic Fisher information of (beta, sigma, gamma)");
  auto* var = app.add_subcommand("variance", "Dump asymptotic variances of the moment estimators");
  std::string grid = "0.5:1.95:0.05", p_list = "0.05,0.1,0.2", grid_out;
  double grid_sigma = 1.0;
  for (auto* sc : {fis, var}) {
    sc->add_option("--beta-grid", grid, "a:b:step or comma list");
    sc->add_option("--sigma", grid_sigma, "scale")->check(CLI::PositiveNumber);
    sc->add_option("--out", grid_out, "output CSV (default stdout)");
  }
  var->add_option("--p", p_list, "comma-separated fractional orders");

  // density
  auto* den = app.add_subcommand("density", "Dump the standard symmetric stable density on a grid");
  double den_beta = 1.5;
  std::string den_grid = "-20:20:0.01", den_out;
  den->add_option("--beta", den_beta, "stable index in (0, 2]")->required();
  den->add_option("--y-grid", den_grid, "a:b:step or comma list");
  den->add_option("--out", den_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*sim) {
      ModelKind kind;
      const Truth t = truth_from(sim_model, &kind);
      const HRule rule = h_rule_from(sim_h, sim_T, std::nullopt, kind, sim_n);
      const IncrementSample s = simulate_model(kind, t, sim_n, rule.h(sim_n), sim_seed);
      write_output(sim_out, format_increments(s));
    } else if (*est) {
      const IncrementSample s = read_increments(est_in);
      nlohmann::json report;
      const std::string& m = est_method;
      if (m == "log") {
        report = to_json(log_moment_estimate(s));
      } else if (m == "frac") {
        report = to_json(frac_moment_estimate(s, est_p));
      } else if (m == "known-scale") {
        if (!est_sigma) usage_error("known-scale needs --sigma", "--sigma");
        report = {{"method", "known_scale"}, {"n", s.n()}, {"h", s.h}, {"estimates", {{"beta", known_scale_beta(s, *est_sigma)}}}};
      } else if (m == "median") {
        report = {{"method", "median"}, {"n", s.n()}, {"h", s.h}, {"estimates", {{"gamma", median_gamma(s)}}}};
      } else if (m == "sign-bipower") {
        report = to_json(sign_bipower_estimate(s, est_q));
      } else if (m == "tripower") {
        report = to_json(tripower_estimate(s, est_q));
      } else if (m == "gamma-mle") {
        report = to_json(gamma_mle(s), "gamma_mle", s.n(), s.h);
      } else if (m == "gamma-moment") {
        report = to_json(gamma_moment_estimate(s), "gamma_moment", s.n(), s.h);
      } else if (m == "ig-mle") {
        report = to_json(ig_mle(s), "ig_mle", s.n(), s.h);
      } else if (m == "pipeline") {
        PipelineOptions o;
        if (est->count("--p")) {
          o.step1 = "frac";
          o.p = est_p;
        }
        report = to_json(full_pipeline(s, o));
      } else {
        usage_error("unknown method '" + m + "'", "--method");
      }
      write_output(est_out, report.dump(2) + "\n");
    } else if (*mc) {
      ExperimentConfig c;
      c.table = "montecarlo";
      c.truth = truth_from(mc_model, &c.model);
      for (const auto& s : split(mc_n, ',')) {
        const double v = to_double(s, "--n");
        if (!(v >= 3.0) || v != std::floor(v)) usage_error("sample sizes must be integers >= 3", "--n");
        c.n_list.push_back(static_cast<std::size_t>(v));
      }
      if (c.n_list.empty()) usage_error("no sample sizes given", "--n");
      c.h_rule = h_rule_from(mc_h, mc_T, mc_hp, c.model, c.n_list.front());
      c.replications = mc_reps;
      c.estimators = parse_estimators(mc_estimators);
      c.master_seed = mc_seed;
      c.threads = mc_threads;
      c.validate();
      const auto rows = run_experiment(c);
      const std::vector<std::string> comments = {"model=" + to_string(c.model) + " params=" + mc_model.params,
                                                 c.h_rule.describe()};
      write_output(mc_out, format_rows(rows, mc_format, comments));
    } else if (*tab) {
      std::vector<SummaryRow> rows;
      std::vector<std::string> comments = {tab_id + " reps=" + std::to_string(tab_reps) +
                                           " seed=" + std::to_string(tab_seed)};
      bool matched = false;
      for (auto c : preset(tab_id)) {
        if (tab_beta && std::fabs(c.truth.beta - *tab_beta) > 1e-9) continue;
        matched = true;
        c.replications = tab_reps;
        c.master_seed = tab_seed;
        c.threads = tab_threads;
        comments.push_back(c.cell + " model=" + to_string(c.model) + " " + c.h_rule.describe());
        const auto part = run_experiment(c);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      if (!matched) usage_error("no cell of " + tab_id + " has that beta", "--beta");
      write_output(tab_out, format_rows(rows, tab_format, comments));
    } else if (*fis) {
      std::string text = "beta,sigma,i_bb,i_bs,i_bg,i_ss,i_sg,i_gg,det_beta_sigma\n";
      for (double b : parse_grid(grid, "--beta-grid")) {
        const Mat3 f = fisher_matrix(b, grid_sigma);
        const double det2 = f[0] * f[4] - f[1] * f[3];
        text += fmt(b) + "," + fmt(grid_sigma) + "," + fmt(f[0]) + "," + fmt(f[1]) + "," + fmt(f[2]) + "," +
                fmt(f[4]) + "," + fmt(f[5]) + "," + fmt(f[8]) + "," + fmt(det2) + "\n";
      }
      write_output(grid_out, text);
    } else if (*var) {
      const std::vector<double> ps = parse_grid(p_list, "--p");
      std::string text = "beta,sigma,v_log_beta,v_log_sigma";
      for (double p : ps) text += ",v_p" + fmt(p) + "_beta,v_p" + fmt(p) + "_sigma";
      text += ",median_sd\n";
      for (double b : parse_grid(grid, "--beta-grid")) {
        const Mat3 vl = v_log(b, grid_sigma);
        text += fmt(b) + "," + fmt(grid_sigma) + "," + fmt(vl[0]) + "," + fmt(vl[4]);
        for (double p : ps) {
          if (p < b / 6.0) {
            const Mat3 vp = v_p(b, grid_sigma, p);
            text += "," + fmt(vp[0]) + "," + fmt(vp[4]);
          } else {
            text += ",nan,nan";
          }
        }
        text += "," + fmt(median_asymptotic_sd(b, grid_sigma)) + "\n";
      }
      write_output(grid_out, text);
    } else if (*den) {
      const StableDensity d(den_beta);
      const std::vector<double> ys = parse_grid(den_grid, "--y-grid");
      std::string text = "y,phi,trapezoid_mass\n";
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double left = i > 0 ? ys[i] - ys[i - 1] : 0.0;
        const double right = i + 1 < ys.size() ? ys[i + 1] - ys[i] : 0.0;
        const double f = d.phi(ys[i]);
        text += fmt(ys[i]) + "," + fmt(f) + "," + fmt(0.5 * (left + right) * f) + "\n";
      }
      write_output(den_out, text);
    }
  } catch (const Error& e) {
    std::cerr << to_json(e).dump() << "\n";
    return e.code() == ErrorCode::InvalidConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"code", "Internal"}, {"message", e.what()}, {"context", ""}}.dump() << "\n";
    return 1;
  }
  return 0;
}
