#include "lswspec/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "lswspec/adaptive.hpp"
#include "lswspec/csv.hpp"
#include "lswspec/errors.hpp"

namespace lswspec {

namespace fs = std::filesystem;

namespace {

void write_manifest_copy(const RunManifest& m)
{
  fs::create_directories(m.output_dir);
  m.write((fs::path(m.output_dir) / "manifest.txt").string());
}

AdaptiveConfig config_from(const RunManifest& m)
{
  AdaptiveConfig cfg;
  if (m.eta_scale >= 0.0)
    cfg.eta_scale = m.eta_scale;
  cfg.k_t = m.k_t;
  cfg.delta_points = m.delta_points;
  cfg.grid_ratio = m.grid_ratio;
  cfg.c2 = m.c2;
  cfg.m_t = m.m_t;
  cfg.window_len = m.window_len;
  if (m.variance_mode == "exact")
    cfg.variance_mode = AdaptiveConfig::VarianceMode::exact_oracle;
  else if (m.variance_mode == "plugin")
    cfg.variance_mode = AdaptiveConfig::VarianceMode::plugin;
  else
    throw InputError("variance mode must be 'exact' or 'plugin'");
  cfg.noise_seed = m.seed;
  return cfg;
}

int exit_code_for(const std::exception& e, std::ostream& log)
{
  log << "error: " << e.what() << '\n';
  if (dynamic_cast<const NumericalError*>(&e))
    return kExitNumericalError;
  if (dynamic_cast<const ResourceError*>(&e))
    return kExitNumericalError;
  return kExitInputError;
}

//! Nearest-rank quantile; with n = 2 this degenerates to min/max.
double quantile(std::vector<double> sorted, double p)
{
  const auto n = static_cast<long>(sorted.size());
  long rank = static_cast<long>(std::ceil(p * static_cast<double>(n)));
  rank = std::clamp(rank, 1L, n);
  return sorted[static_cast<size_t>(rank - 1)];
}

double median_of(std::vector<double> sorted)
{
  const size_t n = sorted.size();
  if (n % 2 == 1)
    return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

} // namespace

std::vector<double> estimation_points(long count)
{
  std::vector<double> z;
  z.reserve(static_cast<size_t>(count));
  for (long i = 1; i <= count; ++i)
    z.push_back(static_cast<double>(i) / static_cast<double>(count + 1));
  return z;
}

int run_simulate(const RunManifest& m, std::ostream& log)
{
  try {
    if (m.spec_path.empty())
      throw InputError("simulate needs --spec");
    if (m.t < 16)
      throw InputError("simulate needs --t >= 16");
    auto spec =
      std::make_shared<const SpectrumSpec>(SpectrumSpec::parse_file(m.spec_path));
    const SeriesSample sample = simulate(spec, m.t, m.seed);

    write_manifest_copy(m);
    CsvWriter csv((fs::path(m.output_dir) / "series.csv").string());
    csv.header({"x"});
    for (double v : sample.values) {
      csv.cell(v);
      csv.end_row();
    }
    log << "wrote " << m.t << " samples to " << m.output_dir << "/series.csv\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return exit_code_for(e, log);
  }
}

namespace {

struct EstimateOutputs {
  EstimateGrid table;
  long T = 0;
};

EstimateOutputs estimate_series(const std::vector<double>& series,
                                const RunManifest& m,
                                const SpectrumSpec* oracle_spec)
{
  const long T = static_cast<long>(series.size());
  if (T < 16)
    throw InputError("series too short (need T >= 16)");
  int deepest = 1;
  for (int s : m.scales) {
    if (s >= 0)
      throw InputError("estimation scales must be negative");
    deepest = std::max(deepest, -s);
  }
  const int J = std::max(deepest, max_scale_count(T));
  if (deepest > max_scale_count(T))
    throw InputError("estimation scale deeper than floor(log2 T)");

  const PeriodogramGrid grid = PeriodogramGrid::compute(series, J);
  AdaptiveSession session(grid, config_from(m), oracle_spec);

  EstimateOutputs out;
  out.T = T;
  out.table = session.estimate_spectrum(m.scales, estimation_points(m.points));
  return out;
}

} // namespace

int run_estimate(const RunManifest& m, std::ostream& log)
{
  try {
    if (m.input_path.empty())
      throw InputError("estimate needs --in (a series CSV)");
    const std::vector<double> series = read_csv_column(m.input_path, "x");

    const SpectrumSpec* oracle = nullptr;
    SpectrumSpec oracle_storage;
    if (m.variance_mode == "exact") {
      if (m.spec_path.empty())
        throw InputError("exact variance mode needs --spec (the true spectrum)");
      oracle_storage = SpectrumSpec::parse_file(m.spec_path);
      oracle = &oracle_storage;
    }

    const EstimateOutputs out = estimate_series(series, m, oracle);

    write_manifest_copy(m);
    CsvWriter csv((fs::path(m.output_dir) / "estimates.csv").string());
    csv.header({"scale", "z0", "shat", "lo", "hi", "sigma2"});
    for (const auto& row : out.table.rows) {
      csv.cell(static_cast<long>(row.paper_scale))
        .cell(row.z0)
        .cell(row.value)
        .cell(row.selected.lo)
        .cell(row.selected.hi)
        .cell(row.sigma2);
      csv.end_row();
    }

    if (m.dump_periodogram) {
      const long T = out.T;
      const int J = max_scale_count(T);
      const PeriodogramGrid grid = PeriodogramGrid::compute(series, J);
      CsvWriter dump((fs::path(m.output_dir) / "periodogram.csv").string());
      dump.header({"scale", "k", "raw", "corrected"});
      for (int i = 1; i <= J; ++i)
        for (long k = 0; k < T; ++k) {
          dump.cell(static_cast<long>(-i))
            .cell(k)
            .cell(grid.raw()(i - 1, k))
            .cell(grid.corrected()(i - 1, k));
          dump.end_row();
        }
    }
    log << "wrote estimates for " << m.scales.size() << " scale(s) at "
        << m.points << " points\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return exit_code_for(e, log);
  }
}

int run_montecarlo(const RunManifest& m, std::ostream& log,
                   MetricsReport* report, MetricsReport* baseline_report)
{
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  try {
    if (m.spec_path.empty())
      throw InputError("montecarlo needs --spec");
    if (m.replications < 2)
      throw InputError("montecarlo needs --reps >= 2");
    if (m.t < 16)
      throw InputError("montecarlo needs --t >= 16");

    auto spec =
      std::make_shared<const SpectrumSpec>(SpectrumSpec::parse_file(m.spec_path));
    const auto scale = ScaleIndex::from_paper(m.scales.at(0));
    const std::vector<double> z0s = estimation_points(m.points);
    const long reps = m.replications;
    const long n_pts = m.points;

    // one estimate row per (replication, point), plus the baseline value
    std::vector<std::vector<double>> adaptive(
      static_cast<size_t>(reps), std::vector<double>(static_cast<size_t>(n_pts)));
    std::vector<std::vector<double>> baseline = adaptive;

    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    const auto worker = [&]() {
      while (!failed.load()) {
        const long r = next.fetch_add(1);
        if (r >= reps)
          return;
        try {
          RunManifest rep_manifest = m;
          rep_manifest.seed = m.seed + static_cast<std::uint64_t>(r);
          const SeriesSample sample =
            simulate(spec, m.t, rep_manifest.seed);
          rep_manifest.scales = {scale.paper()};
          const SpectrumSpec* oracle =
            (m.variance_mode == "exact") ? spec.get() : nullptr;
          const EstimateOutputs out =
            estimate_series(sample.values, rep_manifest, oracle);
          for (long p = 0; p < n_pts; ++p)
            adaptive[static_cast<size_t>(r)][static_cast<size_t>(p)] =
              out.table.rows[static_cast<size_t>(p)].value;

          // naive baseline: running-mean smoothing of the corrected row
          const PeriodogramGrid grid =
            PeriodogramGrid::compute(sample.values, max_scale_count(m.t));
          const long bw = default_smooth_bandwidth(m.t);
          for (long p = 0; p < n_pts; ++p) {
            const long c = std::clamp(
              static_cast<long>(std::floor(z0s[static_cast<size_t>(p)] *
                                           static_cast<double>(m.t))),
              0L, m.t - 1);
            const long a = std::max(0L, c - bw);
            const long b = std::min(m.t, c + bw + 1);
            double acc = 0.0;
            for (long k = a; k < b; ++k)
              acc += grid.corrected()(scale.row(), k);
            baseline[static_cast<size_t>(r)][static_cast<size_t>(p)] =
              acc / static_cast<double>(b - a);
          }
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true))
            first_error = e.what();
        }
      }
    };

    const int n_threads = std::max(1, m.threads);
    if (n_threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<size_t>(n_threads));
      for (int i = 0; i < n_threads; ++i)
        pool.emplace_back(worker);
      for (auto& th : pool)
        th.join();
    }
    if (failed.load())
      throw NumericalError("replication failed: " + first_error);

    // aggregate in replication order (thread-count independent)
    MetricsReport adaptive_metrics;
    MetricsReport baseline_metrics;
    double se_a = 0.0, ad_a = 0.0, se_b = 0.0, ad_b = 0.0;
    for (long p = 0; p < n_pts; ++p) {
      const double z0 = z0s[static_cast<size_t>(p)];
      const double truth = spec->evaluate(scale, z0);
      std::vector<double> vals(static_cast<size_t>(reps));
      for (long r = 0; r < reps; ++r) {
        const double v = adaptive[static_cast<size_t>(r)][static_cast<size_t>(p)];
        vals[static_cast<size_t>(r)] = v;
        se_a += (v - truth) * (v - truth);
        ad_a += std::abs(v - truth);
        const double b = baseline[static_cast<size_t>(r)][static_cast<size_t>(p)];
        se_b += (b - truth) * (b - truth);
        ad_b += std::abs(b - truth);
      }
      std::sort(vals.begin(), vals.end());
      MetricsReport::PerPoint pp;
      pp.z0 = z0;
      pp.median = median_of(vals);
      pp.q05 = quantile(vals, 0.05);
      pp.q95 = quantile(vals, 0.95);
      adaptive_metrics.per_point.push_back(pp);
    }
    const double denom = static_cast<double>(reps * n_pts);
    adaptive_metrics.mse = se_a / denom;
    adaptive_metrics.mad = ad_a / denom;
    baseline_metrics.mse = se_b / denom;
    baseline_metrics.mad = ad_b / denom;
    adaptive_metrics.runtime_seconds =
      std::chrono::duration<double>(clock::now() - t_start).count();
    baseline_metrics.runtime_seconds = adaptive_metrics.runtime_seconds;

    write_manifest_copy(m);
    {
      CsvWriter csv((fs::path(m.output_dir) / "montecarlo.csv").string());
      csv.header({"z0", "median", "q05", "q95"});
      for (const auto& pp : adaptive_metrics.per_point) {
        csv.cell(pp.z0).cell(pp.median).cell(pp.q05).cell(pp.q95);
        csv.end_row();
      }
    }
    {
      CsvWriter csv((fs::path(m.output_dir) / "metrics.csv").string());
      csv.header({"mse", "mad", "runtime"});
      csv.cell(adaptive_metrics.mse)
        .cell(adaptive_metrics.mad)
        .cell(adaptive_metrics.runtime_seconds);
      csv.end_row();
    }
    {
      CsvWriter csv((fs::path(m.output_dir) / "baseline_metrics.csv").string());
      csv.header({"mse", "mad", "runtime"});
      csv.cell(baseline_metrics.mse)
        .cell(baseline_metrics.mad)
        .cell(baseline_metrics.runtime_seconds);
      csv.end_row();
    }
    log << "montecarlo: mse " << adaptive_metrics.mse << " mad "
        << adaptive_metrics.mad << " (baseline mse " << baseline_metrics.mse
        << " mad " << baseline_metrics.mad << ")\n";
    if (report)
      *report = adaptive_metrics;
    if (baseline_report)
      *baseline_report = baseline_metrics;
    return kExitOk;
  } catch (const std::exception& e) {
    return exit_code_for(e, log);
  }
}

int run_identities(const RunManifest& m, std::ostream& log)
{
  try {
    const int J = static_cast<int>(std::clamp(m.max_depth, 4L, 12L));
    bool all_ok = true;
    std::string report;
    const auto check = [&](const std::string& name, bool ok,
                           const std::string& detail) {
      report += (ok ? "PASS " : "FAIL ") + name;
      if (!detail.empty())
        report += " (" + detail + ")";
      report += '\n';
      all_ok = all_ok && ok;
    };

    // Psi tables, optionally corrupted through the fault-injection hook.
    std::vector<std::vector<double>> tables;
    for (int i = 1; i <= J; ++i) {
      const long len = 1L << i;
      std::vector<double> t(static_cast<size_t>(2 * len - 1));
      for (long tau = -(len - 1); tau <= len - 1; ++tau)
        t[static_cast<size_t>(tau + len - 1)] =
          autocorrelation_wavelet(ScaleIndex::from_depth(i), tau);
      tables.push_back(std::move(t));
    }
    if (m.inject_fault == "psi-sign" && J >= 2)
      tables[1][0] = -tables[1][0];  // Psi_{-2}(-3)
    else if (!m.inject_fault.empty() && m.inject_fault != "psi-sign")
      throw InputError("unknown fault '" + m.inject_fault + "'");

    // symmetry of every table
    {
      double worst = 0.0;
      for (int i = 1; i <= J; ++i) {
        const long len = 1L << i;
        for (long tau = 1; tau <= len - 1; ++tau)
          worst = std::max(worst,
                           std::abs(tables[static_cast<size_t>(i - 1)]
                                          [static_cast<size_t>(tau + len - 1)] -
                                    tables[static_cast<size_t>(i - 1)]
                                          [static_cast<size_t>(-tau + len - 1)]));
      }
      check("psi-symmetry Psi_j(tau) == Psi_j(-tau)", worst == 0.0,
            "max asymmetry " + format_double(worst));
    }

    // unit value at lag zero
    {
      double worst = 0.0;
      for (int i = 1; i <= J; ++i) {
        const long len = 1L << i;
        worst = std::max(
          worst, std::abs(tables[static_cast<size_t>(i - 1)]
                                [static_cast<size_t>(len - 1)] - 1.0));
      }
      check("psi-origin Psi_j(0) == 1", worst <= 1e-12,
            "max deviation " + format_double(worst));
    }

    // truncated delta identity, from the (possibly faulted) tables
    {
      bool ok = true;
      std::string detail;
      for (int jj = 4; jj <= J; ++jj) {
        const AutocorrSystem system(jj);
        double origin = 0.0;
        for (int i = 1; i <= jj; ++i)
          origin += std::pow(2.0, -i) *
                    system.psi(ScaleIndex::from_depth(i), 0);
        const double origin_residual = std::abs(origin - 1.0);
        const double expected = std::pow(2.0, -jj);
        const double off =
          check_delta_identity(system, jj, 2L * (1L << jj));
        if (std::abs(origin_residual - expected) > 1e-12 ||
            off > expected * 8.0 + 1e-12) {
          ok = false;
          detail = "J=" + std::to_string(jj) +
                   " origin residual " + format_double(origin_residual) +
                   " off-origin max " + format_double(off);
          break;
        }
      }
      check("delta-identity sum 2^j Psi_j(tau) -> delta_0", ok, detail);
    }

    // Gram positivity and inverse quality
    {
      bool ok = true;
      std::string detail;
      double worst_rowsum = 0.0;
      try {
        for (int jj = 1; jj <= J; ++jj) {
          const GramMatrix g = gram_matrix(jj);
          if (jj == J)
            worst_rowsum = check_inverse_rowsum(g).front();
        }
        detail = "deepest rowsum deviation " + format_double(worst_rowsum);
      } catch (const NumericalError& e) {
        ok = false;
        detail = e.what();
      }
      check("gram-inverse positive definite, residual <= 1e-8", ok, detail);
    }

    // quadratic-form identity on random series
    {
      const long T = 256;
      const GramMatrix gram = gram_matrix(std::min(J, max_scale_count(T)));
      double worst = 0.0;
      const GaussianStream gs(m.seed, StreamTag::simulation);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x(static_cast<size_t>(T));
        for (long t = 0; t < T; ++t)
          x[static_cast<size_t>(t)] =
            gs.normal(static_cast<std::uint32_t>(trial + 100),
                      static_cast<std::uint64_t>(t));
        const PeriodogramGrid grid = PeriodogramGrid::compute(x, gram);
        const TimeInterval r{32 + 8 * trial, 160 + 8 * trial};
        const auto scale = ScaleIndex::from_depth(1 + trial % gram.scale_count);
        const Eigen::Map<const Eigen::VectorXd> xv(x.data(), T);
        const Eigen::MatrixXd u = u_matrix(scale, r, T, gram);
        const double quad = xv.transpose() * u * xv;
        const double avg = QAverager(grid, 0.0, 0).average(scale, r);
        worst = std::max(worst, std::abs(quad - avg));
      }
      check("quadratic-form X'UX == interval-averaged corrected periodogram",
            worst <= 1e-10, "max deviation " + format_double(worst));
    }

    write_manifest_copy(m);
    {
      std::ofstream out(fs::path(m.output_dir) / "identities.txt",
                        std::ios::binary);
      out << report;
    }
    log << report;
    return all_ok ? kExitOk : kExitCheckFailed;
  } catch (const std::exception& e) {
    return exit_code_for(e, log);
  }
}

int run_command(const RunManifest& m, std::ostream& log)
{
  if (m.command == "simulate")
    return run_simulate(m, log);
  if (m.command == "estimate")
    return run_estimate(m, log);
  if (m.command == "montecarlo")
    return run_montecarlo(m, log);
  if (m.command == "identities")
    return run_identities(m, log);
  log << "error: unknown command '" << m.command << "'\n";
  return kExitInputError;
}

} // namespace lswspec
