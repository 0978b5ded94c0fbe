#include "lswspec/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "lswspec/errors.hpp"

namespace lswspec {

double AdaptiveConfig::resolved_k_t(long T) const
{
  if (k_t > 0.0)
    return k_t;
  return std::log2(static_cast<double>(T));
}

double AdaptiveConfig::eta(ScaleIndex scale) const
{
  return eta_scale * std::pow(2.0, -scale.paper() / 2.0) * 5.0 *
         (2.0 * alpha + p);
}

namespace {

//! Offsets 0, ceil(d r^i) until the clip boundary is reached.
std::vector<long> geometric_offsets(long delta, double ratio, long limit)
{
  std::vector<long> out{0};
  double step = static_cast<double>(delta);
  while (true) {
    const long d = static_cast<long>(std::ceil(step));
    if (out.back() != d)
      out.push_back(d);
    if (d >= limit)
      break;
    step *= ratio;
  }
  if (out.back() > limit)
    out.back() = limit;
  // dedupe after clipping
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

long symmetry_defect(const TimeInterval& r, long centre)
{
  return std::labs((r.hi - 1 - centre) - (centre - r.lo));
}

//! Preference order: longer first, then more symmetric, then smaller lo.
bool better_candidate(const TimeInterval& a, const TimeInterval& b,
                      long centre)
{
  if (a.count() != b.count())
    return a.count() > b.count();
  const long da = symmetry_defect(a, centre);
  const long db = symmetry_defect(b, centre);
  if (da != db)
    return da < db;
  return a.lo < b.lo;
}

} // namespace

CandidateGrids build_grids(double z0, long T, const AdaptiveConfig& cfg)
{
  if (!(z0 > 0.0 && z0 < 1.0))
    throw std::domain_error("estimation point z0 must lie in (0,1)");
  if (cfg.delta_points < 1 || cfg.grid_ratio <= 1.0)
    throw std::domain_error("grid needs delta_points >= 1 and grid_ratio > 1");

  CandidateGrids g;
  const long centre =
    std::clamp(static_cast<long>(std::floor(z0 * static_cast<double>(T))), 0L,
               T - 1);
  g.z0_point = centre;

  for (long d : geometric_offsets(cfg.delta_points, cfg.grid_ratio, centre))
    g.left_points.push_back(centre - d);
  std::sort(g.left_points.begin(), g.left_points.end());
  for (long d :
       geometric_offsets(cfg.delta_points, cfg.grid_ratio, T - centre - 1))
    g.right_points.push_back(centre + 1 + d);
  std::sort(g.right_points.begin(), g.right_points.end());

  // all grid intervals of admissible length, as the sub-interval pool
  std::vector<long> points;
  points.reserve(g.left_points.size() + g.right_points.size());
  points.insert(points.end(), g.left_points.begin(), g.left_points.end());
  points.insert(points.end(), g.right_points.begin(), g.right_points.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<TimeInterval> pool;
  for (size_t a = 0; a < points.size(); ++a)
    for (size_t b = a + 1; b < points.size(); ++b)
      if (points[b] - points[a] >= cfg.delta_points)
        pool.push_back(TimeInterval{points[a], points[b]});

  for (long lo : g.left_points)
    for (long hi : g.right_points)
      if (hi - lo >= cfg.delta_points)
        g.lambda.push_back(TimeInterval{lo, hi});

  // scan order: shortest first; among equals, preferred one last
  std::sort(g.lambda.begin(), g.lambda.end(),
            [&](const TimeInterval& a, const TimeInterval& b) {
              return better_candidate(b, a, centre);
            });

  g.test_sets.resize(g.lambda.size());
  for (size_t i = 0; i < g.lambda.size(); ++i) {
    const auto& r = g.lambda[i];
    for (const auto& u : pool)
      if (r.contains(u) && u != r)
        g.test_sets[i].push_back(u);
  }
  return g;
}

TestRecord homogeneity_reject(const AveragedEstimate& q_r,
                              const AveragedEstimate& q_u, double eta,
                              double k_t)
{
  if (!(q_r.sigma2 > 0.0) || !(q_u.sigma2 > 0.0))
    throw NumericalError("homogeneity test needs positive variances");
  TestRecord rec;
  rec.r = q_r.interval;
  rec.u = q_u.interval;
  rec.statistic = std::abs(q_r.q - q_u.q);
  rec.threshold =
    2.0 * eta * (std::sqrt(q_r.sigma2) + std::sqrt(q_u.sigma2)) * k_t;
  rec.rejected = rec.statistic > rec.threshold;
  return rec;
}

AdaptiveSession::AdaptiveSession(const PeriodogramGrid& grid,
                                 AdaptiveConfig cfg,
                                 const SpectrumSpec* oracle_spec)
  : grid_(grid), cfg_(cfg)
{
  if (!grid.has_corrected())
    throw std::domain_error("adaptive estimation needs a corrected grid");
  k_t_ = cfg_.resolved_k_t(grid.T());

  c2_ = cfg_.c2;
  if (c2_ < 0.0)
    c2_ = estimate_nuisance(grid, default_smooth_bandwidth(grid.T())).c2;

  q_ = std::make_unique<QAverager>(grid, c2_, cfg_.noise_seed);

  if (cfg_.variance_mode == AdaptiveConfig::VarianceMode::exact_oracle) {
    if (oracle_spec == nullptr)
      throw InputError("exact-oracle variance mode needs the true spectrum");
    sigma_ = std::make_unique<BandedSymmetric>(
      covariance_banded(*oracle_spec, grid.T()));
  } else {
    sigma_ = std::make_unique<BandedSymmetric>(build_sigma_tilde(
      grid, cfg_.m_t, cfg_.window_len, c2_, cfg_.noise_seed));
  }
}

const VarianceKernel& AdaptiveSession::kernel(ScaleIndex scale)
{
  auto it = kernels_.find(scale.depth());
  if (it == kernels_.end())
    it = kernels_
           .emplace(scale.depth(),
                    VarianceKernel(grid_.scale_count(), scale, grid_.gram(),
                                   *sigma_))
           .first;
  return it->second;
}

AdaptiveEstimate AdaptiveSession::select_interval(ScaleIndex scale, double z0,
                                                  bool keep_trace)
{
  const CandidateGrids grids = build_grids(z0, grid_.T(), cfg_);
  if (grids.lambda.empty())
    throw InputError("no candidate intervals; sample too short for the grid");

  const VarianceKernel& kern = kernel(scale);
  const double eta = cfg_.eta(scale);

  const auto estimate_on = [&](const TimeInterval& r) {
    AveragedEstimate est;
    est.scale = scale;
    est.interval = r;
    est.q = q_->average(scale, r);
    est.sigma2 = kern.variance(r, c2_);
    est.sigma_source =
      cfg_.variance_mode == AdaptiveConfig::VarianceMode::exact_oracle
        ? AveragedEstimate::SigmaSource::exact_oracle
        : AveragedEstimate::SigmaSource::plugin;
    return est;
  };

  AdaptiveEstimate out;
  out.scale = scale;
  out.z0 = z0;

  std::optional<TimeInterval> best;
  for (size_t i = 0; i < grids.lambda.size(); ++i) {
    const auto& r = grids.lambda[i];
    const AveragedEstimate q_r = estimate_on(r);
    bool rejected = false;
    for (const auto& u : grids.test_sets[i]) {
      const TestRecord rec =
        homogeneity_reject(q_r, estimate_on(u), eta, k_t_);
      if (keep_trace)
        out.trace.push_back(rec);
      if (rec.rejected) {
        rejected = true;
        break;
      }
    }
    if (!rejected &&
        (!best || better_candidate(r, *best, grids.z0_point)))
      best = r;
    if (rejected && cfg_.sequential)
      break;
  }
  if (!best)
    best = grids.lambda.front();  // everything rejected: keep the smallest

  out.selected = *best;
  out.value = q_->average(scale, *best);
  out.sigma2 = kern.variance(*best, c2_);
  return out;
}

EstimateGrid AdaptiveSession::estimate_spectrum(
  const std::vector<int>& paper_scales, const std::vector<double>& z0s)
{
  EstimateGrid table;
  for (int ps : paper_scales) {
    const auto scale = ScaleIndex::from_paper(ps);
    for (double z0 : z0s) {
      const AdaptiveEstimate est = select_interval(scale, z0, false);
      table.rows.push_back(EstimateGrid::Row{ps, z0, est.value, est.selected,
                                             est.sigma2});
    }
  }
  return table;
}

} // namespace lswspec
