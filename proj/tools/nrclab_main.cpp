#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nrc/bounds.hpp"
#include "nrc/clifford.hpp"
#include "nrc/harness.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string seed;
  std::string workers;
  std::string out_dir;
  std::string format;
  std::string samples;
  std::string n;
  std::string d;
  std::string layout;
  std::string engine;
  std::string qx, qy, qz, p, q, alpha;
  std::string dense_cap;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "flat key=value config file");
  cmd->add_option("--seed", opts.seed, "master seed");
  cmd->add_option("--workers", opts.workers,
                  "worker threads (default: NRCLAB_WORKERS, then all cores)");
  cmd->add_option("--out-dir", opts.out_dir, "report directory");
  cmd->add_option("--format", opts.format, "csv | jsonl | both");
  cmd->add_option("--samples", opts.samples, "Monte Carlo samples per cell");
  cmd->add_option("--n", opts.n, "comma list of qubit counts");
  cmd->add_option("--d", opts.d, "comma list of depths");
  cmd->add_option("--layout", opts.layout,
                  "brickwork1d | fixed_matching | random_matching_per_layer");
  cmd->add_option("--engine", opts.engine, "dense | clifford");
  cmd->add_option("--qx", opts.qx, "comma list, zipped with qy/qz");
  cmd->add_option("--qy", opts.qy, "comma list, zipped with qx/qz");
  cmd->add_option("--qz", opts.qz, "comma list, zipped with qx/qy");
  cmd->add_option("--p", opts.p, "comma list of heralding rates");
  cmd->add_option("--q", opts.q, "comma list of dephasing parameters");
  cmd->add_option("--alpha", opts.alpha, "comma list of anticonc thresholds");
  cmd->add_option("--dense-cap", opts.dense_cap,
                  "density-matrix qubit cap (hard ceiling 12)");
}

nrc::ExperimentConfig build_config(const std::string& experiment,
                                   const CommonOptions& opts) {
  nrc::ExperimentConfig config;
  if (!opts.config_path.empty()) {
    config = nrc::ExperimentConfig::from_file(opts.config_path);
  }
  config.experiment = experiment;
  auto override_key = [&](const char* key, const std::string& value) {
    if (!value.empty()) config.set_key(key, value);
  };
  override_key("seed", opts.seed);
  override_key("workers", opts.workers);
  override_key("out_dir", opts.out_dir);
  override_key("format", opts.format);
  override_key("samples", opts.samples);
  override_key("n", opts.n);
  override_key("d", opts.d);
  override_key("layout", opts.layout);
  override_key("engine", opts.engine);
  override_key("qx", opts.qx);
  override_key("qy", opts.qy);
  override_key("qz", opts.qz);
  override_key("p", opts.p);
  override_key("q", opts.q);
  override_key("alpha", opts.alpha);
  override_key("dense_cap", opts.dense_cap);
  return config;
}

int run_scan(const std::string& experiment, const CommonOptions& opts) {
  nrc::ExperimentConfig config = build_config(experiment, opts);
  config.validate();
  const auto records = nrc::run_experiment(config);
  const auto paths = nrc::emit_report(records, config);
  for (const auto& path : paths) std::cout << "wrote " << path << "\n";
  int fails = 0;
  for (const auto& rec : records) {
    if (rec.verdict == "fail") {
      ++fails;
      std::cout << "FAIL " << rec.estimator << " n=" << rec.n
                << " d=" << rec.d << " value=" << rec.value
                << " bound=" << rec.bound_value << "\n";
    }
  }
  std::cout << records.size() << " records, " << fails << " failed checks\n";
  return fails == 0 ? 0 : 1;
}

int run_bounds_table(const CommonOptions& opts) {
  nrc::ExperimentConfig config;
  if (!opts.config_path.empty()) {
    config = nrc::ExperimentConfig::from_file(opts.config_path);
  }
  auto override_key = [&](const char* key, const std::string& value) {
    if (!value.empty()) config.set_key(key, value);
  };
  override_key("n", opts.n);
  override_key("d", opts.d);
  override_key("qx", opts.qx);
  override_key("qy", opts.qy);
  override_key("qz", opts.qz);
  override_key("p", opts.p);
  override_key("q", opts.q);
  if (config.n_list.empty()) config.n_list = {6, 8, 12};
  if (config.d_list.empty()) config.d_list = {1, 2, 3, 4, 6, 8};

  std::cout << "bound,n,d,params,value,side\n";
  for (int n : config.n_list) {
    for (int d : config.d_list) {
      for (std::size_t i = 0; i < config.qx_list.size(); ++i) {
        const nrc::PauliChannel channel(config.qx_list[i], config.qy_list[i],
                                        config.qz_list[i]);
        std::cout << "tvd_lower_depth," << n << ',' << d << ",b="
                  << channel.bias_b() << ','
                  << nrc::bounds::tvd_lower_bound(channel, d) << ",lower\n";
        const auto tail = nrc::bounds::typicality_tail(n, d, channel);
        std::cout << "typicality_tail," << n << ',' << d << ",b="
                  << channel.bias_b() << ',' << tail.value << ",upper\n";
        if (d >= 1) {
          std::cout << "anticonc_threshold," << n << ',' << d << ",,"
                    << nrc::bounds::anticoncentration_threshold(n, d)
                    << ",upper\n";
        }
      }
      for (double p : config.p_list) {
        for (double q : config.q_list) {
          std::cout << "tvd_upper_dephasing," << n << ',' << d << ",p=" << p
                    << ";q=" << q << ','
                    << nrc::bounds::tvd_upper_bound(n, d, p, q) << ",upper\n";
        }
      }
    }
    const auto ref = nrc::bounds::reference_constants(n);
    std::cout << "haar_collision," << n << ",,," << ref.haar_collision
              << ",reference\n";
  }
  return 0;
}

int run_enumerate_cliffords(const std::string& out_path) {
  const nrc::CliffordGroup& group = nrc::CliffordGroup::instance();
  std::FILE* out = out_path.empty() ? stdout : std::fopen(out_path.c_str(), "w");
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  std::fprintf(out, "# id key images(X1,Z1,X2,Z2 as x|z<<2|sign<<4)\n");
  for (std::size_t id = 0; id < group.size(); ++id) {
    const auto& e = group.elements()[id];
    std::fprintf(out, "%zu %u", id, e.key());
    for (const auto& img : e.images) {
      std::fprintf(out, " %u",
                   static_cast<unsigned>(img.x | (img.z << 2) | (img.sign << 4)));
    }
    std::fprintf(out, "\n");
  }
  std::fprintf(out, "# total %zu\n", group.size());
  std::fprintf(out, "# z1_fixing_count %ld (fraction %ld/%zu >= 1/30)\n",
               group.z1_fixing_count(), group.z1_fixing_count(), group.size());
  if (out != stdout) std::fclose(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nrclab: numerics for noisy random circuit convergence to "
               "the uniform distribution"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string clifford_out;

  auto* tvd = app.add_subcommand("tvd-scan",
                                 "Monte Carlo E[delta] vs the depth bounds");
  auto* anticonc =
      app.add_subcommand("anticonc-scan", "anticoncentration statistics");
  auto* moments =
      app.add_subcommand("moments", "log-probability moment estimates");
  auto* statmech = app.add_subcommand(
      "statmech-check", "exact configuration-space collision averages "
                        "against the dense engine");
  auto* typicality =
      app.add_subcommand("typicality", "empirical TVD tail vs the tail bound");
  for (CLI::App* cmd : {tvd, anticonc, moments, statmech, typicality}) {
    add_common_flags(cmd, opts);
  }

  auto* table = app.add_subcommand("bounds-table",
                                   "print closed-form bound values");
  add_common_flags(table, opts);

  auto* enumerate = app.add_subcommand(
      "enumerate-cliffords", "emit the two-qubit Clifford group table");
  enumerate->add_option("--out", clifford_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tvd->parsed()) return run_scan("tvd-scan", opts);
    if (anticonc->parsed()) return run_scan("anticonc-scan", opts);
    if (moments->parsed()) return run_scan("moments", opts);
    if (statmech->parsed()) return run_scan("statmech-check", opts);
    if (typicality->parsed()) return run_scan("typicality", opts);
    if (table->parsed()) return run_bounds_table(opts);
    if (enumerate->parsed()) return run_enumerate_cliffords(clifford_out);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
