#include "landau/smoothing.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "landau/errors.hpp"

namespace landau {

namespace {

double factorial(int m)
{
  double f = 1.0;
  for (int k = 2; k <= m; ++k) {
    f *= k;
  }
  return f;
}

std::string alpha_label(const MultiIndex& a)
{
  return std::to_string(a[0]) + ":" + std::to_string(a[1]) + ":" + std::to_string(a[2]);
}

}  // namespace

double weighted_derivative_raw(const NormEvaluator& evaluator, const SpectralFunction& f, const MultiIndex& alpha)
{
  const int need = f.degree_cap() + alpha.order();
  if (need > evaluator.max_degree()) {
    throw CapacityError("derivative of order " + std::to_string(alpha.order()) + " on cap " +
                        std::to_string(f.degree_cap()) + " needs headroom " + std::to_string(need) +
                        ", evaluator has " + std::to_string(evaluator.max_degree()));
  }
  return evaluator.weighted_l2(derivative(f, alpha), 0.5 * evaluator.gamma() * alpha.order());
}

double weighted_derivative_norm(const NormEvaluator& evaluator, const SpectralFunction& f, const MultiIndex& alpha,
                                double t)
{
  return std::pow(time_factor(t), 0.5 * alpha.order()) * weighted_derivative_raw(evaluator, f, alpha);
}

double SmoothingReport::n(std::size_t a, std::size_t t) const
{
  return std::pow(time_factor(times[t]), 0.5 * alphas[a].order()) * raw[a][t];
}

std::size_t SmoothingReport::reference_index() const
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(std::log(times[i] / options.reference_time))
        < std::abs(std::log(times[best] / options.reference_time))) {
      best = i;
    }
  }
  return best;
}

double SmoothingReport::resolved_fraction(double t_min) const
{
  std::size_t total = 0;
  std::size_t ok = 0;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    for (std::size_t t = 0; t < times.size(); ++t) {
      if (times[t] >= t_min) {
        ++total;
        ok += resolved[a][t] != 0 ? 1 : 0;
      }
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(total);
}

bool SmoothingReport::aggregate_bound_holds() const
{
  for (int m = 1; m <= m_max; ++m) {
    const auto mi = static_cast<std::size_t>(m - 1);
    for (std::size_t t = 0; t < times.size(); ++t) {
      if (m_resolved[mi][t] != 0 && aggregate[mi][t] > std::pow(3.0 * c_hat[t], m + 1) * factorial(m)) {
        return false;
      }
    }
  }
  return true;
}

bool SmoothingReport::c_fit_bounded() const
{
  if (m_max < 2) {
    return true;
  }
  const std::size_t r = reference_index();
  for (int m = 1; m <= m_max; ++m) {
    if (c_fit[static_cast<std::size_t>(m - 1)][r] > 3.0 * c_fit[1][r]) {
      return false;
    }
  }
  return true;
}

double SmoothingReport::min_slope(int order) const
{
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    if (alphas[a].order() == order) {
      s = std::isnan(slope[a]) ? slope[a] : std::min(s, slope[a]);
      if (std::isnan(s)) {
        return s;
      }
    }
  }
  return s;
}

double SmoothingReport::max_slope(int order) const
{
  double s = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    if (alphas[a].order() == order) {
      if (std::isnan(slope[a])) {
        return slope[a];
      }
      s = std::max(s, slope[a]);
    }
  }
  return s;
}

SmoothingReport fit_analytic_constant(const EvolutionTrace& trace, const EvolutionTrace& refined,
                                      const NormEvaluator& evaluator, const NormEvaluator& refined_evaluator,
                                      int m_max, SmoothingOptions options)
{
  if (trace.times != refined.times) {
    throw ConfigError("coarse and refined traces must share snapshot times");
  }
  if (m_max < 1) {
    throw ConfigError("m_max must be at least 1");
  }
  SmoothingReport rep;
  rep.gamma = evaluator.gamma();
  rep.times = trace.times;
  rep.horizon = trace.times.empty() ? 0.0 : trace.times.back();
  rep.degree_cap = trace.system != nullptr ? trace.system->degree_cap : trace.initial.degree_cap();
  rep.refined_cap = refined.system != nullptr ? refined.system->degree_cap : refined.initial.degree_cap();
  rep.m_max = m_max;
  rep.options = options;

  const BasisIndex basis(m_max);
  for (std::size_t i = 1; i < basis.size(); ++i) {
    rep.alphas.push_back(basis[i]);
  }
  const std::size_t nt = rep.times.size();
  for (const auto& a : rep.alphas) {
    std::vector<double> c(nt), f(nt);
    std::vector<char> ok(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      c[t] = weighted_derivative_raw(evaluator, trace.snapshots[t], a);
      f[t] = weighted_derivative_raw(refined_evaluator, refined.snapshots[t], a);
      ok[t] = std::abs(c[t] - f[t]) <= options.resolve_tolerance * std::abs(f[t]) ? 1 : 0;
    }
    rep.raw.push_back(std::move(c));
    rep.raw_refined.push_back(std::move(f));
    rep.resolved.push_back(std::move(ok));
  }

  rep.c_fit.assign(static_cast<std::size_t>(m_max), std::vector<double>(nt, 0.0));
  rep.aggregate.assign(static_cast<std::size_t>(m_max), std::vector<double>(nt, 0.0));
  rep.m_resolved.assign(static_cast<std::size_t>(m_max), std::vector<char>(nt, 1));
  rep.c_hat.assign(nt, 0.0);
  for (std::size_t a = 0; a < rep.alphas.size(); ++a) {
    const int m = rep.alphas[a].order();
    const auto mi = static_cast<std::size_t>(m - 1);
    const double af = factorial(rep.alphas[a]);
    for (std::size_t t = 0; t < nt; ++t) {
      const double n = rep.n(a, t);
      rep.c_fit[mi][t] = std::max(rep.c_fit[mi][t], std::pow(n / af, 1.0 / (m + 1)));
      const double w = factorial(m) / af * n;
      rep.aggregate[mi][t] += w * w;
      rep.m_resolved[mi][t] = static_cast<char>(rep.m_resolved[mi][t] & rep.resolved[a][t]);
    }
  }
  for (auto& row : rep.aggregate) {
    for (double& v : row) {
      v = std::sqrt(v);
    }
  }
  for (std::size_t t = 0; t < nt; ++t) {
    for (int m = 1; m <= m_max; ++m) {
      rep.c_hat[t] = std::max(rep.c_hat[t], rep.c_fit[static_cast<std::size_t>(m - 1)][t]);
    }
  }

  for (const auto& a : rep.alphas) {
    double s = std::numeric_limits<double>::quiet_NaN();
    try {
      s = shorttime_slope(rep, a, options.slope_t_min, options.slope_t_max);
    } catch (const InsufficientDataError&) {
    }
    rep.slope.push_back(s);
  }
  return rep;
}

double loglog_slope(const std::vector<double>& t, const std::vector<double>& y)
{
  if (t.size() != y.size() || t.size() < 2) {
    throw InsufficientDataError("log-log fit needs at least two points");
  }
  const auto n = static_cast<double>(t.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mx += std::log(t[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dx = std::log(t[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) {
    throw InsufficientDataError("log-log fit needs distinct times");
  }
  return sxy / sxx;
}

double shorttime_slope(const SmoothingReport& report, const MultiIndex& alpha, double t_min, double t_max)
{
  std::size_t a = report.alphas.size();
  for (std::size_t i = 0; i < report.alphas.size(); ++i) {
    if (report.alphas[i] == alpha) {
      a = i;
    }
  }
  if (a == report.alphas.size()) {
    throw CapacityError("multi-index of order " + std::to_string(alpha.order()) + " not in the report");
  }
  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    const double tk = report.times[k];
    if (tk > 0.0 && tk >= t_min && tk <= t_max && report.resolved[a][k] != 0 && report.raw[a][k] > 0.0) {
      t.push_back(tk);
      y.push_back(report.raw[a][k]);
    }
  }
  if (t.size() < 4) {
    throw InsufficientDataError("short-time slope for alpha " + alpha_label(alpha) + " has " +
                                std::to_string(t.size()) + " resolved points in the window, need 4");
  }
  return loglog_slope(t, y);
}

double first_derivative_energy_constant(const EvolutionTrace& trace, const NormEvaluator& evaluator)
{
  const double f0 = trace.initial.norm2();
  if (f0 == 0.0) {
    return 0.0;
  }
  const double g = evaluator.gamma();
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    const MultiIndex a = MultiIndex::unit(j);
    double integral = 0.0;
    double t_prev = 0.0;
    double v_prev = 0.0;  // τ‖∂f‖²_A vanishes at τ = 0
    for (std::size_t k = 0; k < trace.size(); ++k) {
      const double t = trace.times[k];
      const SpectralFunction d = derivative(trace.snapshots[k], a);
      if (d.degree_cap() > evaluator.max_degree()) {
        throw CapacityError("first-derivative energy needs headroom " + std::to_string(d.degree_cap()));
      }
      const double v = t * evaluator.anorm_parts(d, 0.0).total();
      integral += 0.5 * (t - t_prev) * (v + v_prev);
      t_prev = t;
      v_prev = v;
      const double w = evaluator.weighted_l2(d, 0.5 * g);
      worst = std::max(worst, (t * w * w + integral) / f0);
    }
  }
  return worst;
}

std::string smoothing_csv(const SmoothingReport& report, const Provenance& provenance)
{
  std::ostringstream out;
  provenance.write_comment_header(out);
  out << "gamma,T,D,m,alpha,t,N,N_refined,C_fit,slope,resolved\n";
  for (std::size_t a = 0; a < report.alphas.size(); ++a) {
    const int m = report.alphas[a].order();
    for (std::size_t t = 0; t < report.times.size(); ++t) {
      const double scale = std::pow(time_factor(report.times[t]), 0.5 * m);
      out << fmt17(report.gamma) << ',' << fmt17(report.horizon) << ',' << report.degree_cap << ',' << m << ','
          << alpha_label(report.alphas[a]) << ',' << fmt17(report.times[t]) << ',' << fmt17(report.n(a, t)) << ','
          << fmt17(scale * report.raw_refined[a][t]) << ',' << fmt17(report.c_fit[static_cast<std::size_t>(m - 1)][t])
          << ',' << fmt17(report.slope[a]) << ',' << static_cast<int>(report.resolved[a][t]) << '\n';
    }
  }
  return out.str();
}

nlohmann::ordered_json smoothing_summary(const SmoothingReport& report, const Provenance& provenance)
{
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr); };
  nlohmann::ordered_json j;
  j["provenance"] = provenance.to_json();
  j["gamma"] = report.gamma;
  j["T"] = report.horizon;
  j["D"] = report.degree_cap;
  j["D_refined"] = report.refined_cap;
  j["m_max"] = report.m_max;
  j["resolve_tolerance"] = report.options.resolve_tolerance;
  const std::size_t r = report.reference_index();
  j["reference_time"] = report.times.empty() ? 0.0 : report.times[r];
  nlohmann::ordered_json per_m = nlohmann::ordered_json::array();
  for (int m = 1; m <= report.m_max; ++m) {
    const auto mi = static_cast<std::size_t>(m - 1);
    nlohmann::ordered_json e;
    e["m"] = m;
    e["C_fit_reference"] = num(report.c_fit[mi][r]);
    e["aggregate_reference"] = num(report.aggregate[mi][r]);
    e["aggregate_constant_reference"] = num(std::pow(report.aggregate[mi][r] / factorial(m), 1.0 / (m + 1)) / 3.0);
    e["resolved_reference"] = report.m_resolved[mi][r] != 0;
    e["slope_min"] = num(report.min_slope(m));
    e["slope_max"] = num(report.max_slope(m));
    per_m.push_back(e);
  }
  j["orders"] = per_m;
  double c_hat = 0.0;
  for (std::size_t t = 0; t < report.times.size(); ++t) {
    c_hat = std::max(c_hat, report.c_hat[t]);
  }
  j["C_hat_max"] = c_hat;
  j["c_fit_bounded"] = report.c_fit_bounded();
  j["aggregate_bound_holds"] = report.aggregate_bound_holds();
  j["resolved_fraction_t_ge_0.05"] = report.resolved_fraction(0.05);
  return j;
}

}  // namespace landau
