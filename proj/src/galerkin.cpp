#include "landau/galerkin.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "landau/errors.hpp"
#include "landau/quadrature.hpp"

namespace landau {

std::array<std::vector<int>, 8> parity_blocks(int degree_cap)
{
  std::array<std::vector<int>, 8> out;
  const BasisIndex basis(degree_cap);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& a = basis[i];
    const int cls = 4 * (a[0] % 2) + 2 * (a[1] % 2) + (a[2] % 2);
    out[static_cast<std::size_t>(cls)].push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

int points_for(int degree_cap, const GalerkinSettings& settings)
{
  int q = std::max(3 * degree_cap + 16, settings.min_points);
  return q + q % 2;
}

// Coefficient data at the positive-octant nodes of the tensor rule; the other
// seven octants are mirror images and enter as a factor 8.
struct OctantData
{
  int half = 0;
  std::vector<double> weight;  // 8 × product weight
  std::vector<Vec3> node;
  std::vector<double> l1, l2, q, d;
  std::vector<std::array<Vec3, 3>> frame;  // v̂, u₁, u₂
  // 1-d tables at the positive nodes: ψ_n and ψ_n'
  std::vector<std::vector<double>> psi, dpsi;

  std::size_t size() const { return weight.size(); }
  std::size_t axis(std::size_t n, int j) const
  {
    const auto h = static_cast<std::size_t>(half);
    return j == 0 ? n / (h * h) : (j == 1 ? (n / h) % h : n % h);
  }
};

OctantData octant_data(int degree_cap, int q, const CoefficientField& field)
{
  const GaussHermiteRule rule(q);
  OctantData od;
  od.half = q / 2;
  const auto h = static_cast<std::size_t>(od.half);
  std::vector<double> x(h), w(h);
  for (std::size_t i = 0; i < h; ++i) {
    x[i] = rule.nodes()[h + i];
    w[i] = rule.weights()[h + i];
  }
  const auto cols = static_cast<std::size_t>(degree_cap) + 2;
  od.psi.assign(h, std::vector<double>(cols));
  od.dpsi.assign(h, std::vector<double>(cols - 1));
  for (std::size_t i = 0; i < h; ++i) {
    hermite_values_1d(x[i], od.psi[i]);
    for (std::size_t n = 0; n + 1 < cols; ++n) {
      const double lower = n > 0 ? std::sqrt(static_cast<double>(n)) * od.psi[i][n - 1] : 0.0;
      od.dpsi[i][n] = 0.5 * (lower - std::sqrt(static_cast<double>(n + 1)) * od.psi[i][n + 1]);
    }
  }
  const std::size_t total = h * h * h;
  od.weight.resize(total);
  od.node.resize(total);
  od.l1.resize(total);
  od.l2.resize(total);
  od.q.resize(total);
  od.d.resize(total);
  od.frame.resize(total);
  for (std::size_t n = 0; n < total; ++n) {
    const std::size_t i = n / (h * h);
    const std::size_t j = (n / h) % h;
    const std::size_t k = n % h;
    const Vec3 v{x[i], x[j], x[k]};
    od.node[n] = v;
    od.weight[n] = 8.0 * w[i] * w[j] * w[k];
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    const Profiles p = field.profiles(r);
    od.l1[n] = p.l1;
    od.l2[n] = p.l2;
    od.q[n] = p.l1 * r * r;
    od.d[n] = field.drift_divergence(r);
    // positive octant: r > 0 and no component vanishes
    const Vec3 e{v[0] / r, v[1] / r, v[2] / r};
    // u₁ ⟂ e in the plane of e and the axis least aligned with it
    int m = 0;
    for (int a = 1; a < 3; ++a) {
      if (e[static_cast<std::size_t>(a)] < e[static_cast<std::size_t>(m)]) {
        m = a;
      }
    }
    Vec3 u{-e[static_cast<std::size_t>(m)] * e[0], -e[static_cast<std::size_t>(m)] * e[1],
           -e[static_cast<std::size_t>(m)] * e[2]};
    u[static_cast<std::size_t>(m)] += 1.0;
    const double un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    for (double& c : u) {
      c /= un;
    }
    const Vec3 t{e[1] * u[2] - e[2] * u[1], e[2] * u[0] - e[0] * u[2], e[0] * u[1] - e[1] * u[0]};
    od.frame[n] = {e, u, t};
  }
  return od;
}

GalerkinSystem empty_system(int degree_cap, const CoefficientField& field, AssemblyPath path, int q)
{
  if (degree_cap < 0) {
    throw ConfigError("Galerkin degree cap must be nonnegative");
  }
  GalerkinSystem s;
  s.degree_cap = degree_cap;
  s.gamma = field.config().gamma();
  s.path = path;
  s.points_per_axis = q;
  s.table_key = field.cache_key();
  s.blocks = parity_blocks(degree_cap);
  const auto n = static_cast<Eigen::Index>(basis_size(degree_cap));
  s.matrix = Eigen::MatrixXd::Zero(n, n);
  return s;
}

constexpr std::size_t kChunk = 2048;

}  // namespace

GalerkinSystem assemble(int degree_cap, const CoefficientField& field, GalerkinSettings settings)
{
  const int q = points_for(degree_cap, settings);
  GalerkinSystem sys = empty_system(degree_cap, field, AssemblyPath::factorized, q);
  const OctantData od = octant_data(degree_cap, q, field);
  const BasisIndex basis(degree_cap);

  for (const auto& block : sys.blocks) {
    const auto m = static_cast<Eigen::Index>(block.size());
    if (m == 0) {
      continue;
    }
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t start = 0; start < od.size(); start += kChunk) {
      const std::size_t stop = std::min(od.size(), start + kChunk);
      // rows √(w λ_e) e·(√α_k Ψ_{α−e_k})_k for the three eigenpairs of ā
      Eigen::MatrixXd w_rows(static_cast<Eigen::Index>(3 * (stop - start)), m);
      for (std::size_t n = start; n < stop; ++n) {
        const std::array<std::size_t, 3> ax = {od.axis(n, 0), od.axis(n, 1), od.axis(n, 2)};
        const auto& fr = od.frame[n];
        const std::array<double, 3> lam = {od.l1[n], od.l2[n], od.l2[n]};
        for (Eigen::Index c = 0; c < m; ++c) {
          const auto& a = basis[static_cast<std::size_t>(block[static_cast<std::size_t>(c)])];
          std::array<double, 3> low{};  // √α_k Ψ_{α−e_k}(v)
          for (int k = 0; k < 3; ++k) {
            if (a[k] == 0) {
              continue;
            }
            double val = std::sqrt(static_cast<double>(a[k]));
            for (int j = 0; j < 3; ++j) {
              const int deg = a[j] - (j == k ? 1 : 0);
              val *= od.psi[ax[static_cast<std::size_t>(j)]][static_cast<std::size_t>(deg)];
            }
            low[static_cast<std::size_t>(k)] = val;
          }
          for (std::size_t e = 0; e < 3; ++e) {
            const double proj = fr[e][0] * low[0] + fr[e][1] * low[1] + fr[e][2] * low[2];
            w_rows(static_cast<Eigen::Index>(3 * (n - start) + e), c) = std::sqrt(od.weight[n] * lam[e]) * proj;
          }
        }
      }
      acc.selfadjointView<Eigen::Lower>().rankUpdate(w_rows.transpose());
    }
    const Eigen::MatrixXd full = acc.selfadjointView<Eigen::Lower>();
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        sys.matrix(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]) = full(i, j);
      }
    }
  }
  return sys;
}

GalerkinSystem assemble_direct(int degree_cap, const CoefficientField& field, GalerkinSettings settings)
{
  const int q = points_for(degree_cap, settings);
  GalerkinSystem sys = empty_system(degree_cap, field, AssemblyPath::direct, q);
  const OctantData od = octant_data(degree_cap, q, field);
  const BasisIndex basis(degree_cap);

  for (const auto& block : sys.blocks) {
    const auto m = static_cast<Eigen::Index>(block.size());
    if (m == 0) {
      continue;
    }
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t start = 0; start < od.size(); start += kChunk) {
      const std::size_t stop = std::min(od.size(), start + kChunk);
      const auto rows = static_cast<Eigen::Index>(stop - start);
      Eigen::MatrixXd phi(rows, m);
      std::array<Eigen::MatrixXd, 3> grad;
      for (auto& g : grad) {
        g.resize(rows, m);
      }
      for (std::size_t n = start; n < stop; ++n) {
        const auto r = static_cast<Eigen::Index>(n - start);
        const std::size_t ix = od.axis(n, 0);
        const std::size_t iy = od.axis(n, 1);
        const std::size_t iz = od.axis(n, 2);
        for (Eigen::Index c = 0; c < m; ++c) {
          const auto& a = basis[static_cast<std::size_t>(block[static_cast<std::size_t>(c)])];
          const auto a0 = static_cast<std::size_t>(a[0]);
          const auto a1 = static_cast<std::size_t>(a[1]);
          const auto a2 = static_cast<std::size_t>(a[2]);
          phi(r, c) = od.psi[ix][a0] * od.psi[iy][a1] * od.psi[iz][a2];
          grad[0](r, c) = od.dpsi[ix][a0] * od.psi[iy][a1] * od.psi[iz][a2];
          grad[1](r, c) = od.psi[ix][a0] * od.dpsi[iy][a1] * od.psi[iz][a2];
          grad[2](r, c) = od.psi[ix][a0] * od.psi[iy][a1] * od.dpsi[iz][a2];
        }
      }
      Eigen::VectorXd scalar(rows);
      for (std::size_t n = start; n < stop; ++n) {
        scalar[static_cast<Eigen::Index>(n - start)] = od.weight[n] * (0.25 * od.q[n] - 0.5 * od.d[n]);
      }
      acc.noalias() += phi.transpose() * scalar.asDiagonal() * phi;
      Eigen::VectorXd wjk(rows);
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          for (std::size_t n = start; n < stop; ++n) {
            const Vec3& e = od.frame[n][0];
            wjk[static_cast<Eigen::Index>(n - start)] =
                od.weight[n]
                * ((j == k ? od.l2[n] : 0.0)
                   + (od.l1[n] - od.l2[n]) * e[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(k)]);
          }
          acc.noalias() += grad[static_cast<std::size_t>(j)].transpose() * wjk.asDiagonal()
                           * grad[static_cast<std::size_t>(k)];
        }
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        sys.matrix(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]) = acc(i, j);
      }
    }
  }
  return sys;
}

InvariantReport check_invariants(const GalerkinSystem& system, bool throw_on_failure)
{
  const Eigen::MatrixXd& b = system.matrix;
  const double scale = std::max(b.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  InvariantReport rep{};
  rep.asymmetry = (b - b.transpose()).cwiseAbs().maxCoeff() / scale;
  rep.kernel_row = std::max(b.row(0).cwiseAbs().maxCoeff(), b.col(0).cwiseAbs().maxCoeff());
  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& block : system.blocks) {
    if (block.empty()) {
      continue;
    }
    const auto m = static_cast<Eigen::Index>(block.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        sub(i, j) = b(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    lmin = std::min(lmin, es.eigenvalues()[0]);
  }
  rep.min_eigenvalue = lmin / scale;
  rep.ok = rep.asymmetry <= 1e-10 && rep.min_eigenvalue >= -1e-10 && rep.kernel_row <= 1e-10 * scale;
  if (!rep.ok && throw_on_failure) {
    std::ostringstream msg;
    msg << "Galerkin invariants violated: asymmetry " << rep.asymmetry << ", min eigenvalue " << rep.min_eigenvalue
        << ", kernel row " << rep.kernel_row;
    throw InvariantViolation(msg.str());
  }
  return rep;
}

double spectral_gap(const GalerkinSystem& system)
{
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < 8; ++c) {
    std::vector<int> idx = system.blocks[c];
    if (c == 0 && !idx.empty()) {
      idx.erase(idx.begin());  // Ψ₀
    }
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
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    gap = std::min(gap, es.eigenvalues()[0]);
  }
  return gap;
}

double quadratic_form(const GalerkinSystem& system, const SpectralFunction& f)
{
  if (f.size() != system.size()) {
    throw CapacityError("quadratic_form: function cap " + std::to_string(f.degree_cap()) + " does not match system cap "
                        + std::to_string(system.degree_cap));
  }
  const Eigen::Map<const Eigen::VectorXd> x(f.coefficients().data(), static_cast<Eigen::Index>(f.size()));
  return x.dot(system.matrix * x);
}

void save_system(const GalerkinSystem& system, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  char gamma[40];
  std::snprintf(gamma, sizeof gamma, "%.17g", system.gamma);
  out << "# landau galerkin system\n"
      << "# format=" << kSystemFormatVersion << "\n"
      << "# degree_cap=" << system.degree_cap << "\n"
      << "# gamma=" << gamma << "\n"
      << "# path=" << (system.path == AssemblyPath::factorized ? "factorized" : "direct") << "\n"
      << "# points_per_axis=" << system.points_per_axis << "\n"
      << "# ordering_version=" << system.ordering_version << "\n"
      << "# table_key=" << system.table_key << "\n"
      << "# rows=" << system.matrix.rows() << "\n"
      << "# end\n";
  // row-major raw doubles (B is symmetric, so this is also column-major)
  for (Eigen::Index i = 0; i < system.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < system.matrix.cols(); ++j) {
      const double v = system.matrix(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
}

GalerkinSystem load_system(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  GalerkinSystem s;
  Eigen::Index rows = -1;
  std::string line;
  while (std::getline(in, line) && line != "# end") {
    const auto eq = line.find('=');
    if (line.rfind("# ", 0) != 0 || eq == std::string::npos) {
      continue;
    }
    const std::string key = line.substr(2, eq - 2);
    const std::string val = line.substr(eq + 1);
    if (key == "format" && std::stoi(val) != kSystemFormatVersion) {
      throw ConfigError("unsupported system format " + val);
    } else if (key == "degree_cap") {
      s.degree_cap = std::stoi(val);
    } else if (key == "gamma") {
      s.gamma = std::strtod(val.c_str(), nullptr);
    } else if (key == "path") {
      s.path = val == "direct" ? AssemblyPath::direct : AssemblyPath::factorized;
    } else if (key == "points_per_axis") {
      s.points_per_axis = std::stoi(val);
    } else if (key == "ordering_version") {
      s.ordering_version = std::stoi(val);
      if (s.ordering_version != BasisIndex::kOrderingVersion) {
        throw ConfigError("basis ordering version " + val + " is not supported");
      }
    } else if (key == "table_key") {
      s.table_key = val;
    } else if (key == "rows") {
      rows = std::stol(val);
    }
  }
  if (rows != static_cast<Eigen::Index>(basis_size(s.degree_cap))) {
    throw std::runtime_error("system file " + path.string() + " has an inconsistent header");
  }
  s.matrix.resize(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < rows; ++j) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), sizeof v);
      s.matrix(i, j) = v;
    }
  }
  if (!in) {
    throw std::runtime_error("system file " + path.string() + " is truncated");
  }
  s.blocks = parity_blocks(s.degree_cap);
  return s;
}

}  // namespace landau
