#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace levy {

enum class ModelKind { SymmetricStable, SkewedStable, TimeVaryingStable, GammaSub, IgSub };

std::string to_string(ModelKind kind);
ModelKind model_from_string(const std::string& name);

/// Sampling step as a function of n: either T fixed (h = T/n) or h = n^{−a}.
struct HRule {
  enum class Kind { FixedT, Power } kind = Kind::FixedT;
  double value = 5.0;
  double h(std::size_t n) const;
  std::string describe() const;
};

/// True parameters. Only the fields relevant to `model` are read.
struct Truth {
  double beta = 1.5;
  double sigma = 1.0;        // constant scale; S′ scale for the skewed model
  double rho = 0.0;
  double gamma_trend = 0.0;
  double p_pos = 0.5;        // skewed / time-varying models
  bool cosine_path = false;  // time-varying model: (2/5)(cos 2πs + 3/2)
  double sigma_star = 1.0;   // ∫σ_s^β ds, truth for the integrated scale
  double delta = 1.0;        // subordinators
  double gamma_sub = 1.0;
};

/// Estimator ids: log, frac (tuning = p), known_scale, median, sign_bipower
/// (tuning = q), tripower (tuning = q), gamma_mle, gamma_moment, ig_mle,
/// pipeline (tuning = p, 0 selects the log step).
struct EstimatorSpec {
  std::string id;
  double tuning = 0.0;
  std::string label() const;
};

struct ExperimentConfig {
  std::string table;  // e.g. "table1"
  std::string cell;   // e.g. "beta=0.8"
  ModelKind model = ModelKind::SymmetricStable;
  Truth truth;
  std::vector<std::size_t> n_list;
  HRule h_rule;
  std::size_t replications = 1000;
  std::vector<EstimatorSpec> estimators;
  std::uint64_t master_seed = 20240607;
  unsigned threads = 0;  // 0 picks hardware concurrency, capped by LEVY_ESTIM_THREADS
  void validate() const;
};

struct SummaryRow {
  std::string table;  // "<table>:<cell>" when a cell is set
  std::string estimator;
  std::string param;
  std::size_t n = 0;
  double T = 0.0;
  double truth = 0.0;
  double mean = 0.0;
  double rmse = 0.0;
  std::size_t failures = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
};

/// One experiment cell's worth of rows ordered by (n, estimator, param).
/// Every replication simulates one path shared by all estimators, seeded
/// from (master_seed, table, cell, n, replication).
std::vector<SummaryRow> run_experiment(const ExperimentConfig& config);

/// The simulation designs behind the four published tables, one config per
/// true β.
std::vector<ExperimentConfig> preset(const std::string& table_id);

/// Worker count after applying LEVY_ESTIM_THREADS.
unsigned resolve_threads(unsigned requested);

inline constexpr const char* kSummaryCsvHeader = "table,estimator,param,n,T,truth,mean,rmse,failures,replications,seed";

/// CSV (with '#' comment lines from `comments`) or JSON; numbers at 6
/// significant digits.
void emit(const std::vector<SummaryRow>& rows, const std::string& format, const std::string& path,
          const std::vector<std::string>& comments = {});
std::string format_rows(const std::vector<SummaryRow>& rows, const std::string& format,
                        const std::vector<std::string>& comments = {});
std::vector<SummaryRow> parse_summary_csv(const std::string& text);
std::vector<SummaryRow> parse_summary_json(const std::string& text);

}  // namespace levy
