#include "levy/mc_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "levy/error.hpp"
#include "levy/skewed.hpp"
#include "levy/stable.hpp"
#include "levy/subordinator.hpp"
#include "levy/symmetric.hpp"
#include "levy/transforms.hpp"

namespace levy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double round6(double v) { return std::isfinite(v) ? std::strtod(fmt6(v).c_str(), nullptr) : v; }

bool is_stable_model(ModelKind m) {
  return m == ModelKind::SymmetricStable || m == ModelKind::SkewedStable || m == ModelKind::TimeVaryingStable;
}

struct Slot {
  std::size_t estimator;
  std::string param;
  double truth;
};

// Names and truths of the parameters each estimator reports.
std::vector<std::pair<std::string, double>> estimator_params(const EstimatorSpec& e, const ExperimentConfig& c) {
  const Truth& t = c.truth;
  const bool from_sprime = c.model == ModelKind::SkewedStable || c.model == ModelKind::TimeVaryingStable;
  const double p_truth = from_sprime ? t.p_pos
                         : (t.beta > 0.0 && t.beta < 2.0 && t.beta != 1.0) ? skew_to_positivity(t.beta, t.rho)
                                                                           : 0.5;
  if (e.id == "log") return {{"beta", t.beta}, {"sigma", t.sigma}, {"gamma", t.gamma_trend}};
  if (e.id == "frac") return {{"beta", t.beta}, {"sigma", t.sigma}};
  if (e.id == "known_scale") return {{"beta", t.beta}};
  if (e.id == "median") return {{"gamma", t.gamma_trend}};
  if (e.id == "sign_bipower") return {{"p", p_truth}, {"beta", t.beta}, {"sigma", t.sigma}};
  if (e.id == "tripower") return {{"p", p_truth}, {"beta", t.beta}, {"sigma_star", t.sigma_star}};
  if (e.id == "gamma_mle" || e.id == "gamma_moment" || e.id == "ig_mle")
    return {{"delta", t.delta}, {"gamma", t.gamma_sub}};
  if (e.id == "pipeline") return {{"beta", t.beta}, {"sigma", t.sigma}, {"p", p_truth}, {"gamma", t.gamma_trend}};
  fail(ErrorCode::InvalidConfig, "unknown estimator id '" + e.id + "'", "run_experiment");
}

IncrementSample simulate(const ExperimentConfig& c, std::size_t n, std::uint64_t seed) {
  const Truth& t = c.truth;
  const double h = c.h_rule.h(n);
  switch (c.model) {
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
  fail(ErrorCode::InvalidConfig, "unknown model", "run_experiment");
}

// Point estimates in the order of estimator_params; throws on failure.
std::vector<double> apply(const EstimatorSpec& e, const ExperimentConfig& c, const IncrementSample& s) {
  auto beta_ok = [](double b) {
    if (!(b > 0.0 && b <= 2.0)) fail(ErrorCode::DomainError, "beta estimate outside (0, 2]", "run_experiment");
  };
  if (e.id == "log") {
    const SymmetricEstimate r = log_moment_estimate(s);
    beta_ok(r.beta_hat);
    return {r.beta_hat, r.sigma_hat, r.gamma_hat};
  }
  if (e.id == "frac") {
    const SymmetricEstimate r = frac_moment_estimate(s, e.tuning);
    beta_ok(r.beta_hat);
    return {r.beta_hat, r.sigma_hat};
  }
  if (e.id == "known_scale") return {known_scale_beta(s, c.truth.sigma)};
  if (e.id == "median") return {median_gamma(s)};
  if (e.id == "sign_bipower") {
    const SkewedEstimate r = sign_bipower_estimate(s, e.tuning);
    return {r.p_hat, r.beta_hat, r.scale_hat};
  }
  if (e.id == "tripower") {
    const SkewedEstimate r = tripower_estimate(s, e.tuning);
    return {r.p_hat, r.beta_hat, r.scale_hat};
  }
  if (e.id == "gamma_mle") {
    const SubordinatorEstimate r = gamma_mle(s);
    return {r.delta_hat, r.gamma_hat};
  }
  if (e.id == "gamma_moment") {
    const SubordinatorEstimate r = gamma_moment_estimate(s);
    return {r.delta_hat, r.gamma_hat};
  }
  if (e.id == "ig_mle") {
    const SubordinatorEstimate r = ig_mle(s);
    return {r.delta_hat, r.gamma_hat};
  }
  if (e.id == "pipeline") {
    PipelineOptions o;
    if (e.tuning > 0.0) {
      o.step1 = "frac";
      o.p = e.tuning;
    }
    const PipelineResult r = full_pipeline(s, o);
    return {r.beta_hat, r.sigma_hat, r.p_hat, r.gamma_hat};
  }
  fail(ErrorCode::InvalidConfig, "unknown estimator id '" + e.id + "'", "run_experiment");
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SymmetricStable: return "symmetric_stable";
    case ModelKind::SkewedStable: return "skewed_stable";
    case ModelKind::TimeVaryingStable: return "timevarying_stable";
    case ModelKind::GammaSub: return "gamma_sub";
    case ModelKind::IgSub: return "ig_sub";
  }
  return "unknown";
}

ModelKind model_from_string(const std::string& name) {
  for (ModelKind k : {ModelKind::SymmetricStable, ModelKind::SkewedStable, ModelKind::TimeVaryingStable,
                      ModelKind::GammaSub, ModelKind::IgSub})
    if (to_string(k) == name) return k;
  fail(ErrorCode::InvalidConfig, "unknown model '" + name + "'", "model_from_string");
}

double HRule::h(std::size_t n) const {
  const double nn = static_cast<double>(n);
  return kind == Kind::FixedT ? value / nn : std::pow(nn, -value);
}

std::string HRule::describe() const {
  return kind == Kind::FixedT ? "h=T/n with T=" + fmt6(value) : "h=n^-" + fmt6(value);
}

std::string EstimatorSpec::label() const {
  if (id == "frac" || (id == "pipeline" && tuning > 0.0)) return id + "(p=" + fmt6(tuning) + ")";
  if (id == "sign_bipower" || id == "tripower") return id + "(q=" + fmt6(tuning) + ")";
  return id;
}

void ExperimentConfig::validate() const {
  const char* ctx = "ExperimentConfig";
  if (replications < 1) fail(ErrorCode::InvalidConfig, "replications must be >= 1", ctx);
  if (n_list.empty()) fail(ErrorCode::InvalidConfig, "n_list is empty", ctx);
  if (estimators.empty()) fail(ErrorCode::InvalidConfig, "no estimators configured", ctx);
  for (std::size_t n : n_list)
    if (n < 3) fail(ErrorCode::InvalidConfig, "every n must be >= 3", ctx);
  if (!(h_rule.value > 0.0)) fail(ErrorCode::InvalidConfig, "h rule parameter must be > 0", ctx);
  if ((model == ModelKind::SkewedStable || model == ModelKind::TimeVaryingStable) &&
      !(h_rule.kind == HRule::Kind::Power && h_rule.value == 1.0))
    fail(ErrorCode::InvalidConfig, "skewed and time-varying models are sampled on [0,1] with h = 1/n", ctx);
  if (is_stable_model(model)) {
    if (!(truth.beta > 0.0 && truth.beta <= 2.0)) fail(ErrorCode::InvalidConfig, "beta must lie in (0, 2]", ctx);
    if (!(truth.sigma > 0.0)) fail(ErrorCode::InvalidConfig, "sigma must be > 0", ctx);
  } else if (!(truth.delta > 0.0 && truth.gamma_sub > 0.0)) {
    fail(ErrorCode::InvalidConfig, "subordinator parameters must be > 0", ctx);
  }
  for (const auto& e : estimators) estimator_params(e, *this);
}

unsigned resolve_threads(unsigned requested) {
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LEVY_ESTIM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1)
      t = std::min<unsigned>(t, static_cast<unsigned>(cap));
    else
      warn(std::string("ignoring invalid LEVY_ESTIM_THREADS='") + env + "'");
  }
  return t;
}

std::vector<SummaryRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<Slot> slots;
  std::vector<std::size_t> first_slot;
  for (std::size_t e = 0; e < config.estimators.size(); ++e) {
    first_slot.push_back(slots.size());
    for (auto& [name, truth] : estimator_params(config.estimators[e], config)) slots.push_back({e, name, truth});
  }
  const std::size_t n_slots = slots.size();
  const std::size_t reps = config.replications;
  const std::size_t jobs = config.n_list.size() * reps;
  std::vector<double> results(jobs * n_slots, kNaN);

  const std::uint64_t table_key = fnv1a(config.table), cell_key = fnv1a(config.cell);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t ni = job / reps, rep = job % reps;
      const std::size_t n = config.n_list[ni];
      try {
        const std::uint64_t seed = derive_seed({config.master_seed, table_key, cell_key, n, rep});
        const IncrementSample s = simulate(config, n, seed);
        double* out = &results[job * n_slots];
        for (std::size_t e = 0; e < config.estimators.size(); ++e) {
          try {
            const std::vector<double> v = apply(config.estimators[e], config, s);
            bool finite = true;
            for (double x : v) finite = finite && std::isfinite(x);
            if (finite) std::copy(v.begin(), v.end(), out + first_slot[e]);
          } catch (const Error&) {
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(jobs);
        return;
      }
    }
  };

  const unsigned n_threads = std::min<std::size_t>(resolve_threads(config.threads), jobs);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const std::string table = config.cell.empty() ? config.table : config.table + ":" + config.cell;
  std::vector<SummaryRow> rows;
  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
    const std::size_t n = config.n_list[ni];
    for (std::size_t k = 0; k < n_slots; ++k) {
      SummaryRow row;
      row.table = table;
      row.estimator = config.estimators[slots[k].estimator].label();
      row.param = slots[k].param;
      row.n = n;
      row.T = static_cast<double>(n) * config.h_rule.h(n);
      if (config.model == ModelKind::SkewedStable || config.model == ModelKind::TimeVaryingStable) row.T = 1.0;
      row.truth = slots[k].truth;
      row.replications = reps;
      row.seed = config.master_seed;
      double sum = 0.0, sq = 0.0;
      std::size_t ok = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const double v = results[(ni * reps + rep) * n_slots + k];
        if (std::isnan(v)) continue;
        ++ok;
        sum += v;
        sq += (v - row.truth) * (v - row.truth);
      }
      row.failures = reps - ok;
      row.mean = ok ? sum / static_cast<double>(ok) : kNaN;
      row.rmse = ok ? std::sqrt(sq / static_cast<double>(ok)) : kNaN;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ExperimentConfig> preset(const std::string& table_id) {
  std::vector<ExperimentConfig> cells;
  if (table_id == "table1" || table_id == "table2") {
    for (double beta : {0.8, 1.0, 1.5, 1.8}) {
      ExperimentConfig c;
      c.table = table_id;
      c.cell = "beta=" + fmt6(beta);
      c.model = ModelKind::SymmetricStable;
      c.truth.beta = beta;
      c.truth.sigma = 0.5;
      c.truth.gamma_trend = -0.5;
      c.n_list = {501, 1001, 2001};
      c.h_rule = table_id == "table1" ? HRule{HRule::Kind::FixedT, 5.0} : HRule{HRule::Kind::Power, 0.6};
      c.estimators.push_back({"log", 0.0});
      for (double p : {0.05, 0.1, 0.2})
        if (p < beta / 6.0) c.estimators.push_back({"frac", p});
      c.estimators.push_back({"known_scale", 0.0});
      c.estimators.push_back({"median", 0.0});
      cells.push_back(c);
    }
    return cells;
  }
  if (table_id == "table3" || table_id == "table4") {
    for (double beta : {1.2, 1.5, 1.7, 1.9}) {
      ExperimentConfig c;
      c.table = table_id;
      c.cell = "beta=" + fmt6(beta);
      c.model = table_id == "table3" ? ModelKind::SkewedStable : ModelKind::TimeVaryingStable;
      c.truth.beta = beta;
      c.truth.rho = -0.5;
      c.truth.p_pos = skew_to_positivity(beta, -0.5);
      c.truth.sigma = 1.0;
      c.truth.cosine_path = table_id == "table4";
      c.truth.sigma_star = table_id == "table4" ? 0.6 : 1.0;
      c.n_list = {500, 1000, 2000, 5000};
      c.h_rule = HRule{HRule::Kind::Power, 1.0};
      c.estimators.push_back({table_id == "table3" ? "sign_bipower" : "tripower", 0.25});
      cells.push_back(c);
    }
    return cells;
  }
  fail(ErrorCode::InvalidConfig, "unknown table id '" + table_id + "'", "preset");
}

std::string format_rows(const std::vector<SummaryRow>& rows, const std::string& format,
                        const std::vector<std::string>& comments) {
  if (rows.empty()) fail(ErrorCode::InvalidConfig, "no rows to emit", "emit");
  std::ostringstream os;
  if (format == "csv") {
    for (const auto& c : comments) os << "# " << c << '\n';
    os << kSummaryCsvHeader << '\n';
    for (const auto& r : rows)
      os << r.table << ',' << r.estimator << ',' << r.param << ',' << r.n << ',' << fmt6(r.T) << ','
         << fmt6(r.truth) << ',' << fmt6(r.mean) << ',' << fmt6(r.rmse) << ',' << r.failures << ','
         << r.replications << ',' << r.seed << '\n';
    return os.str();
  }
  if (format == "json") {
    auto num = [](double v) -> nlohmann::json {
      if (!std::isfinite(v)) return nullptr;
      return round6(v);
    };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
      arr.push_back({{"table", r.table},
                     {"estimator", r.estimator},
                     {"param", r.param},
                     {"n", r.n},
                     {"t", num(r.T)},
                     {"truth", num(r.truth)},
                     {"mean", num(r.mean)},
                     {"rmse", num(r.rmse)},
                     {"failures", r.failures},
                     {"replications", r.replications},
                     {"seed", r.seed}});
    nlohmann::json doc = {{"comments", comments}, {"rows", arr}};
    return doc.dump(2) + "\n";
  }
  fail(ErrorCode::InvalidConfig, "unknown output format '" + format + "'", "emit");
}

void emit(const std::vector<SummaryRow>& rows, const std::string& format, const std::string& path,
          const std::vector<std::string>& comments) {
  const std::string text = format_rows(rows, format, comments);
  std::ofstream f(path);
  if (!f) fail(ErrorCode::IoError, "cannot open output file", path);
  f << text;
  if (!f) fail(ErrorCode::IoError, "write failed", path);
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  bool header = false;
  std::vector<SummaryRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kSummaryCsvHeader) fail(ErrorCode::ParseError, "unexpected CSV header '" + line + "'", "summary csv");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 11) fail(ErrorCode::ParseError, "expected 11 fields in '" + line + "'", "summary csv");
    try {
      SummaryRow r;
      r.table = f[0];
      r.estimator = f[1];
      r.param = f[2];
      r.n = std::stoull(f[3]);
      r.T = std::strtod(f[4].c_str(), nullptr);
      r.truth = std::strtod(f[5].c_str(), nullptr);
      r.mean = std::strtod(f[6].c_str(), nullptr);
      r.rmse = std::strtod(f[7].c_str(), nullptr);
      r.failures = std::stoull(f[8]);
      r.replications = std::stoull(f[9]);
      r.seed = std::stoull(f[10]);
      rows.push_back(r);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "malformed row '" + line + "'", "summary csv");
    }
  }
  if (!header) fail(ErrorCode::ParseError, "missing CSV header", "summary csv");
  return rows;
}

std::vector<SummaryRow> parse_summary_json(const std::string& text) {
  auto num = [](const nlohmann::json& j) { return j.is_null() ? kNaN : j.get<double>(); };
  std::vector<SummaryRow> rows;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("rows")) {
      SummaryRow r;
      r.table = j.at("table").get<std::string>();
      r.estimator = j.at("estimator").get<std::string>();
      r.param = j.at("param").get<std::string>();
      r.n = j.at("n").get<std::size_t>();
      r.T = num(j.at("t"));
      r.truth = num(j.at("truth"));
      r.mean = num(j.at("mean"));
      r.rmse = num(j.at("rmse"));
      r.failures = j.at("failures").get<std::size_t>();
      r.replications = j.at("replications").get<std::size_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      rows.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, e.what(), "summary json");
  }
  return rows;
}

}  // namespace levy
