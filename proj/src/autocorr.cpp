#include "lswspec/autocorr.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdlib>
#include <string>

#include "lswspec/errors.hpp"

namespace lswspec {

namespace {

std::vector<double> autocorrelate(const std::vector<double>& v)
{
  const long len = static_cast<long>(v.size());
  std::vector<double> table(static_cast<size_t>(2 * len - 1), 0.0);
  for (long tau = -(len - 1); tau <= len - 1; ++tau) {
    double s = 0.0;
    for (long m = 0; m < len; ++m) {
      const long n = m - tau;
      if (n >= 0 && n < len)
        s += v[static_cast<size_t>(m)] * v[static_cast<size_t>(n)];
    }
    table[static_cast<size_t>(tau + len - 1)] = s;
  }
  return table;
}

} // namespace

AutocorrSystem::AutocorrSystem(int max_depth) : max_depth_(max_depth)
{
  if (max_depth <= 0)
    throw std::domain_error("AutocorrSystem needs at least one scale");
  tables_.reserve(static_cast<size_t>(max_depth));
  for (int i = 1; i <= max_depth; ++i)
    tables_.push_back(autocorrelate(haar_wavelet(ScaleIndex::from_depth(i)).values));
}

double AutocorrSystem::psi(ScaleIndex scale, long tau) const
{
  if (scale.depth() > max_depth_)
    throw std::domain_error("scale deeper than the autocorrelation system");
  const long len = scale.support_length();
  if (tau <= -len || tau >= len)
    return 0.0;
  return tables_[static_cast<size_t>(scale.row())][static_cast<size_t>(tau + len - 1)];
}

double autocorrelation_wavelet(ScaleIndex scale, long tau)
{
  const long len = scale.support_length();
  if (tau <= -len || tau >= len)
    return 0.0;
  const auto v = haar_wavelet(scale).values;
  double s = 0.0;
  for (long m = 0; m < len; ++m) {
    const long n = m - tau;
    if (n >= 0 && n < len)
      s += v[static_cast<size_t>(m)] * v[static_cast<size_t>(n)];
  }
  return s;
}

GramMatrix gram_matrix(const AutocorrSystem& system, int scale_count,
                       double residual_tol)
{
  if (scale_count < 1)
    throw std::domain_error("gram_matrix needs scale_count >= 1");
  if (scale_count > system.max_depth())
    throw std::domain_error("gram_matrix deeper than the autocorrelation system");

  GramMatrix g;
  g.scale_count = scale_count;
  g.a = Eigen::MatrixXd(scale_count, scale_count);
  for (int ri = 0; ri < scale_count; ++ri) {
    for (int ci = ri; ci < scale_count; ++ci) {
      const auto sa = ScaleIndex::from_depth(ri + 1);
      const auto sb = ScaleIndex::from_depth(ci + 1);
      const long hw = std::min(system.support_halfwidth(sa),
                               system.support_halfwidth(sb));
      double s = 0.0;
      for (long tau = -hw; tau <= hw; ++tau)
        s += system.psi(sa, tau) * system.psi(sb, tau);
      g.a(ri, ci) = s;
      g.a(ci, ri) = s;
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g.a);
  g.a_inv = lu.solve(Eigen::MatrixXd::Identity(scale_count, scale_count));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.a,
                                                    Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  g.condition_number = (lo > 0.0) ? hi / lo
                                  : std::numeric_limits<double>::infinity();

  const double residual =
    (g.a * g.a_inv - Eigen::MatrixXd::Identity(scale_count, scale_count))
      .cwiseAbs()
      .maxCoeff();
  if (!(residual <= residual_tol) || lo <= 0.0)
    throw NumericalError("Gram inverse residual " + std::to_string(residual) +
                         " exceeds tolerance (condition number " +
                         std::to_string(g.condition_number) + ")");
  return g;
}

GramMatrix gram_matrix(int scale_count, double residual_tol)
{
  return gram_matrix(AutocorrSystem(scale_count), scale_count, residual_tol);
}

double check_delta_identity(const AutocorrSystem& system, int scale_count,
                            long tau_max)
{
  double worst = 0.0;
  for (long tau = -tau_max; tau <= tau_max; ++tau) {
    double s = 0.0;
    for (int i = 1; i <= scale_count; ++i)
      s += std::pow(2.0, -i) * system.psi(ScaleIndex::from_depth(i), tau);
    const double target = (tau == 0) ? 1.0 : 0.0;
    worst = std::max(worst, std::abs(s - target));
  }
  return worst;
}

std::vector<double> check_inverse_rowsum(const GramMatrix& gram)
{
  std::vector<double> dev(static_cast<size_t>(gram.scale_count));
  for (int ri = 0; ri < gram.scale_count; ++ri) {
    const double rowsum = gram.a_inv.row(ri).sum();
    dev[static_cast<size_t>(ri)] = std::abs(rowsum - std::pow(2.0, -(ri + 1)));
  }
  return dev;
}

} // namespace lswspec
