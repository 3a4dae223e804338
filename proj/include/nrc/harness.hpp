#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nrc/architecture.hpp"
#include "nrc/noise.hpp"
#include "nrc/rng.hpp"

namespace nrc {

inline constexpr const char* kEngineVersion = "nrclab 0.1.0";
inline constexpr const char* kWorkersEnvVar = "NRCLAB_WORKERS";

/// Grid + execution settings for one experiment run. Pauli channels are
/// zipped across (qx, qy, qz); (n, d) and (p, q) form cross products.
struct ExperimentConfig {
  std::string experiment;
  std::vector<int> n_list;
  std::vector<int> d_list;
  std::string layout = "brickwork1d";
  std::vector<double> qx_list, qy_list, qz_list;
  std::vector<double> p_list, q_list;
  std::vector<double> alpha_list;
  std::string engine = "dense";  // dense | clifford
  long samples = 2000;
  std::uint64_t seed = 20260810;
  int workers = 0;  // 0: NRCLAB_WORKERS env var, then hardware concurrency
  std::string out_dir = "results";
  std::string format = "both";  // csv | jsonl | both
  int dense_cap = 10;

  void validate() const;

  /// Flat key=value text, lists comma-separated, '#' comments. Every key
  /// mirrors a CLI flag.
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text);
  void set_key(const std::string& key, const std::string& value);
};

/// One estimator evaluated in one grid cell. NaN doubles mean
/// "not applicable" and serialize as empty CSV fields.
struct ResultRecord {
  std::string experiment;
  int n = -1;
  int d = -1;
  std::string layout;
  double qx, qy, qz, p, q, alpha;  // NaN-initialized in the constructor
  std::string estimator;
  double value = 0.0;
  double stderror = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string bound_name;
  double bound_value;
  std::string verdict;  // pass | fail | vacuous | info | skipped
  std::string engine_version = kEngineVersion;

  ResultRecord();
};

std::vector<ResultRecord> run_tvd_scan(const ExperimentConfig& config);
std::vector<ResultRecord> run_anticonc_scan(const ExperimentConfig& config);
std::vector<ResultRecord> run_logprob_moments(const ExperimentConfig& config);
std::vector<ResultRecord> run_statmech_crosscheck(
    const ExperimentConfig& config);
std::vector<ResultRecord> run_typicality_scan(const ExperimentConfig& config);

/// Dispatch on config.experiment.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

/// CSV with the fixed column order
/// experiment,n,d,layout,qx,qy,qz,p,q,alpha,estimator,value,stderr,samples,
/// seed,bound_name,bound_value,verdict. Byte-stable across reruns.
std::string to_csv(const std::vector<ResultRecord>& records);

/// One JSON object per line, full fidelity (engine version included),
/// byte-stable across reruns.
std::string to_jsonl(const std::vector<ResultRecord>& records);

/// Writes <experiment>.csv / <experiment>.jsonl under out_dir per
/// config.format; returns the paths written.
std::vector<std::string> emit_report(const std::vector<ResultRecord>& records,
                                     const ExperimentConfig& config);

/// True iff every bound-checking record passed (vacuous/info/skipped rows
/// do not count against).
bool all_checks_passed(const std::vector<ResultRecord>& records);

/// Deterministic parallel map: body(i) for i in [0, count), any worker
/// count, results must be written to per-index slots by the caller.
void parallel_for(long count, int workers,
                  const std::function<void(long)>& body);

int resolve_workers(int configured);

/// Shortest round-trip decimal formatting (empty string for NaN).
std::string format_double(double v);

struct Summary {
  double mean = 0.0;
  double stderror = 0.0;
  long count = 0;
};
Summary summarize(const std::vector<double>& samples);

}  // namespace nrc
