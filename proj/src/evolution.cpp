#include "landau/evolution.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "landau/errors.hpp"

namespace landau {

namespace {

Eigen::VectorXd as_vector(const SpectralFunction& f, int cap)
{
  if (f.degree_cap() > cap) {
    throw CapacityError("initial datum of cap " + std::to_string(f.degree_cap()) + " exceeds system cap "
                        + std::to_string(cap));
  }
  const SpectralFunction g = f.degree_cap() == cap ? f : f.padded(cap);
  return Eigen::Map<const Eigen::VectorXd>(g.coefficients().data(), static_cast<Eigen::Index>(g.size()));
}

SpectralFunction as_function(const Eigen::VectorXd& x, int cap)
{
  return SpectralFunction(cap, std::vector<double>(x.data(), x.data() + x.size()));
}

}  // namespace

Propagator::Propagator(const GalerkinSystem& system)
    : system_(&system)
{
  const InvariantReport rep = check_invariants(system, false);
  if (!(rep.asymmetry <= 1e-10)) {
    throw InvariantViolation("propagator needs a symmetric generator, asymmetry " + std::to_string(rep.asymmetry));
  }
  for (const auto& idx : system.blocks) {
    if (idx.empty()) {
      continue;
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        sub(i, j) = system.matrix(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    if (es.info() != Eigen::Success) {
      throw InvariantViolation("symmetric eigendecomposition failed");
    }
    blocks_.push_back({idx, es.eigenvalues(), es.eigenvectors()});
  }
}

Eigen::VectorXd Propagator::coefficients(const SpectralFunction& f) const
{
  return as_vector(f, degree_cap());
}

SpectralFunction Propagator::apply(const SpectralFunction& f, double t) const
{
  const Eigen::VectorXd x = coefficients(f);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.index.size());
    Eigen::VectorXd xb(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      xb[i] = x[b.index[static_cast<std::size_t>(i)]];
    }
    Eigen::VectorXd c = b.vectors.transpose() * xb;
    for (Eigen::Index k = 0; k < m; ++k) {
      c[k] *= std::exp(-t * b.lambda[k]);
    }
    const Eigen::VectorXd yb = b.vectors * c;
    for (Eigen::Index i = 0; i < m; ++i) {
      y[b.index[static_cast<std::size_t>(i)]] = yb[i];
    }
  }
  return as_function(y, degree_cap());
}

double Propagator::norm2_at(const SpectralFunction& f0, double t) const
{
  const Eigen::VectorXd x = coefficients(f0);
  double s = 0.0;
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.index.size());
    Eigen::VectorXd xb(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      xb[i] = x[b.index[static_cast<std::size_t>(i)]];
    }
    const Eigen::VectorXd c = b.vectors.transpose() * xb;
    for (Eigen::Index k = 0; k < m; ++k) {
      s += c[k] * c[k] * std::exp(-2.0 * t * b.lambda[k]);
    }
  }
  return s;
}

double Propagator::dissipation(const SpectralFunction& f0, double t) const
{
  // 2∫₀ᵗ λ c² e^{−2λs} ds = c²(1 − e^{−2λt})
  const Eigen::VectorXd x = coefficients(f0);
  double s = 0.0;
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.index.size());
    Eigen::VectorXd xb(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      xb[i] = x[b.index[static_cast<std::size_t>(i)]];
    }
    const Eigen::VectorXd c = b.vectors.transpose() * xb;
    for (Eigen::Index k = 0; k < m; ++k) {
      s -= c[k] * c[k] * std::expm1(-2.0 * t * b.lambda[k]);
    }
  }
  return s;
}

double Propagator::form_integral(const Eigen::MatrixXd& gram, const SpectralFunction& f0, double t) const
{
  if (gram.rows() != system_->matrix.rows() || gram.cols() != system_->matrix.cols()) {
    throw CapacityError("form_integral: Gram size does not match the system");
  }
  const Eigen::VectorXd x = coefficients(f0);
  double s = 0.0;
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.index.size());
    Eigen::VectorXd xb(m);
    Eigen::MatrixXd gb(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      xb[i] = x[b.index[static_cast<std::size_t>(i)]];
      for (Eigen::Index j = 0; j < m; ++j) {
        gb(i, j) = gram(b.index[static_cast<std::size_t>(i)], b.index[static_cast<std::size_t>(j)]);
      }
    }
    const Eigen::VectorXd c = b.vectors.transpose() * xb;
    const Eigen::MatrixXd g = b.vectors.transpose() * gb * b.vectors;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        // ∫₀ᵗ e^{−σs} ds
        const double sigma = b.lambda[i] + b.lambda[j];
        const double phi = std::abs(sigma * t) < 1e-14 ? t : -std::expm1(-sigma * t) / sigma;
        s += c[i] * c[j] * g(i, j) * phi;
      }
    }
  }
  return s;
}

std::vector<double> Propagator::eigenvalues() const
{
  std::vector<double> out;
  for (const auto& b : blocks_) {
    out.insert(out.end(), b.lambda.data(), b.lambda.data() + b.lambda.size());
  }
  return out;
}

double EvolutionTrace::energy_residual(std::size_t i) const
{
  return std::abs(norm2[i] + dissipation[i] - initial.norm2());
}

double EvolutionTrace::max_energy_residual() const
{
  double r = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    r = std::max(r, energy_residual(i));
  }
  return r;
}

bool EvolutionTrace::monotone() const
{
  for (std::size_t i = 1; i < size(); ++i) {
    if (norm2[i] > norm2[i - 1] * (1.0 + 1e-12) + 1e-300) {
      return false;
    }
  }
  return true;
}

EvolutionTrace evolve_exact(const Propagator& propagator, const SpectralFunction& f0, const std::vector<double>& times)
{
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      throw ConfigError("snapshot times must be nonnegative and ascending");
    }
  }
  const Eigen::MatrixXd& b = propagator.system().matrix;
  EvolutionTrace tr;
  tr.system = &propagator.system();
  tr.initial = f0.degree_cap() == propagator.degree_cap() ? f0 : as_function(as_vector(f0, propagator.degree_cap()),
                                                                             propagator.degree_cap());
  tr.times = times;
  for (double t : times) {
    SpectralFunction f = propagator.apply(tr.initial, t);
    const Eigen::Map<const Eigen::VectorXd> x(f.coefficients().data(), static_cast<Eigen::Index>(f.size()));
    tr.norm2.push_back(f.norm2());
    tr.form.push_back(x.dot(b * x));
    tr.dissipation.push_back(propagator.dissipation(tr.initial, t));
    tr.snapshots.push_back(std::move(f));
  }
  return tr;
}

EvolutionTrace evolve_exact(const GalerkinSystem& system, const SpectralFunction& f0, const std::vector<double>& times)
{
  const Propagator p(system);
  return evolve_exact(p, f0, times);
}

std::vector<double> geometric_times(double t_min, double t_max, int count)
{
  if (!(t_min > 0.0) || !(t_max >= t_min) || count < 1) {
    throw ConfigError("geometric schedule needs 0 < t_min ≤ t_max and at least one point");
  }
  std::vector<double> t(static_cast<std::size_t>(count));
  const double ratio = std::log(t_max / t_min);
  for (int i = 0; i < count; ++i) {
    t[static_cast<std::size_t>(i)] = count == 1 ? t_max : t_min * std::exp(ratio * i / (count - 1));
  }
  t.back() = t_max;
  return t;
}

Stepper::Stepper(const GalerkinSystem& system, double dt, Scheme scheme)
    : system_(&system), dt_(dt), scheme_(scheme)
{
  if (!(dt > 0.0)) {
    throw ConfigError("time step must be positive");
  }
  const double c = scheme == Scheme::trapezoidal ? 0.5 * dt : dt;
  const auto n = system.matrix.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(Eigen::MatrixXd::Identity(n, n) + c * system.matrix);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("implicit step matrix is not positive definite");
  }
  lhs_factor_ = llt.matrixL();
}

SpectralFunction Stepper::step(const SpectralFunction& f) const
{
  Eigen::VectorXd x = as_vector(f, system_->degree_cap);
  if (scheme_ == Scheme::trapezoidal) {
    x -= 0.5 * dt_ * (system_->matrix * x);
  }
  const auto l = lhs_factor_.triangularView<Eigen::Lower>();
  l.solveInPlace(x);
  l.transpose().solveInPlace(x);
  return as_function(x, system_->degree_cap);
}

SpectralFunction Stepper::advance(SpectralFunction f, int steps) const
{
  for (int i = 0; i < steps; ++i) {
    f = step(f);
  }
  return f;
}

SpectralFunction evolve_step(const GalerkinSystem& system, const SpectralFunction& f, double dt, Scheme scheme)
{
  return Stepper(system, dt, scheme).step(f);
}

CommutationCheck projection_commutation(const GalerkinSystem& system, const SpectralFunction& f0, int coarse_cap,
                                        double t, double tolerance)
{
  if (coarse_cap < 0 || coarse_cap >= system.degree_cap) {
    throw ConfigError("coarse cap must lie below the system cap");
  }
  GalerkinSystem coarse = system;
  coarse.degree_cap = coarse_cap;
  const auto n = static_cast<Eigen::Index>(basis_size(coarse_cap));
  coarse.matrix = system.matrix.topLeftCorner(n, n);  // graded ordering: |α| ≤ D' comes first
  coarse.blocks = parity_blocks(coarse_cap);

  const SpectralFunction fine = Propagator(system).apply(f0, t).truncated(coarse_cap);
  const SpectralFunction direct = Propagator(coarse).apply(f0.truncated(coarse_cap), t);
  const double diff = std::sqrt((fine - direct).norm2());
  const double scale = std::sqrt(fine.norm2());
  CommutationCheck c{coarse_cap, t, scale > 0.0 ? diff / scale : diff, false};
  c.flagged = c.mismatch > tolerance;
  return c;
}

std::string trace_csv(const EvolutionTrace& trace, const Provenance& provenance)
{
  std::ostringstream out;
  provenance.write_comment_header(out);
  out << "t,norm2,form,dissipation,energy_residual\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << fmt17(trace.times[i]) << ',' << fmt17(trace.norm2[i]) << ',' << fmt17(trace.form[i]) << ','
        << fmt17(trace.dissipation[i]) << ',' << fmt17(trace.energy_residual(i)) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json trace_manifest(const EvolutionTrace& trace, const Provenance& provenance)
{
  nlohmann::ordered_json j;
  j["provenance"] = provenance.to_json();
  j["degree_cap"] = trace.system != nullptr ? trace.system->degree_cap : -1;
  j["gamma"] = trace.system != nullptr ? trace.system->gamma : 0.0;
  j["table_key"] = trace.system != nullptr ? trace.system->table_key : "";
  j["snapshots"] = trace.size();
  j["initial_norm2"] = trace.initial.norm2();
  j["final_norm2"] = trace.size() > 0 ? trace.norm2.back() : trace.initial.norm2();
  j["max_energy_residual"] = trace.max_energy_residual();
  j["monotone"] = trace.monotone();
  return j;
}

}  // namespace landau
