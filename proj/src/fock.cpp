#include "tcyl/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "tcyl/errors.hpp"

namespace tcyl {

namespace {

constexpr int kMaxInteractionDegree = 8;
constexpr double kCommutatorTolerance = 1e-10;
constexpr double kHermitianTolerance = 1e-10;

// All occupation vectors over `modes` modes with total `total`, reverse lexicographic.
void compositions(int modes, int total, Occupation& cur, int pos, std::vector<Occupation>& out) {
  if (pos == modes - 1) {
    cur[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(total);
    out.push_back(cur);
    return;
  }
  for (int v = total; v >= 0; --v) {
    cur[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(v);
    compositions(modes, total - v, cur, pos + 1, out);
  }
  cur[static_cast<std::size_t>(pos)] = 0;
}

std::vector<Occupation> compositions(int modes, int total) {
  std::vector<Occupation> out;
  Occupation cur(static_cast<std::size_t>(modes), 0);
  compositions(modes, total, cur, 0, out);
  return out;
}

int total_of(const Occupation& o) { return std::accumulate(o.begin(), o.end(), 0); }

double factorial(int n) { return std::tgamma(n + 1.0); }

// Monomial a^dagger{e} a{d} with weight prod c^{e+d} / (prod e! prod d!) and its
// momentum index sum (in units of 2 pi / beta).
struct Multiset {
  Occupation occ;
  int momentum = 0;
  double weight = 1.0;
};

std::vector<Multiset> multisets(const FockBasis& basis, int size) {
  std::vector<Multiset> out;
  for (auto& occ : compositions(basis.mode_count(), size)) {
    Multiset m;
    m.occ = occ;
    for (int i = 0; i < basis.mode_count(); ++i) {
      const int nu = occ[static_cast<std::size_t>(i)];
      if (nu == 0) continue;
      const int n = i - basis.k_max();
      const double c = 1.0 / std::sqrt(2.0 * basis.frequency(n) * basis.beta());
      m.momentum += nu * n;
      m.weight *= std::pow(c, nu) / factorial(nu);
    }
    out.push_back(std::move(m));
  }
  return out;
}

OperatorMatrix zero_operator(const FockBasis& basis, bool hermitian) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  return {Eigen::MatrixXd::Zero(n, n), hermitian};
}

void require_mode(const FockBasis& basis, int n, const char* who) {
  if (std::abs(n) > basis.k_max()) {
    throw InvalidParameter(std::string(who) + ": mode " + std::to_string(n) + " outside [-k_max, k_max]");
  }
}

void require_square(const OperatorMatrix& a, const OperatorMatrix& b, const char* who) {
  if (a.matrix.rows() != a.matrix.cols() || a.matrix.rows() != b.matrix.rows() ||
      b.matrix.rows() != b.matrix.cols()) {
    throw DimensionError(std::string(who) + ": operators live on different bases");
  }
}

void require_hermitian(const Eigen::MatrixXd& m, const char* who) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kHermitianTolerance * scale) {
    throw InvalidParameter(std::string(who) + ": operator is not hermitian");
  }
}

double min_eig(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return es.eigenvalues()(0);
}

}  // namespace

FockBasis::FockBasis(double beta, double mass, int k_max, int n_max, double energy_cutoff)
    : beta_(beta), mass_(mass), k_max_(k_max), n_max_(n_max) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidParameter("FockBasis: beta must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidParameter("FockBasis: mass must be positive");
  if (k_max < 0) throw InvalidParameter("FockBasis: k_max must be non-negative");
  if (n_max < 1 || n_max > 255) throw InvalidParameter("FockBasis: n_max must be in [1, 255]");
  if (std::isnan(energy_cutoff)) throw InvalidParameter("FockBasis: energy cutoff is NaN");
  for (int n = -k_max; n <= k_max; ++n) frequencies_.push_back(dispersion(momentum(n), mass));
  for (int total = 0; total <= n_max; ++total) {
    for (auto& occ : compositions(mode_count(), total)) {
      double energy = 0.0;
      for (int i = 0; i < mode_count(); ++i) energy += occ[static_cast<std::size_t>(i)] * frequencies_[static_cast<std::size_t>(i)];
      if (energy > energy_cutoff) continue;
      if (states_.size() >= kMaxFockStates) {
        throw Unsupported("FockBasis: more than " + std::to_string(kMaxFockStates) +
                          " states; dense diagonalization not supported");
      }
      index_.emplace(occ, states_.size());
      states_.push_back(std::move(occ));
    }
  }
}

double FockBasis::momentum(int n) const { return 2.0 * std::numbers::pi * n / beta_; }

std::optional<std::size_t> FockBasis::find(const Occupation& occ) const {
  const auto it = index_.find(occ);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

OperatorMatrix build_free_hamiltonian(const FockBasis& basis) {
  OperatorMatrix h = zero_operator(basis, true);
  for (std::size_t s = 0; s < basis.size(); ++s) {
    double e = 0.0;
    for (int n = -basis.k_max(); n <= basis.k_max(); ++n) {
      e += basis.state(s)[static_cast<std::size_t>(n + basis.k_max())] * basis.frequency(n);
    }
    h.matrix(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = e;
  }
  return h;
}

OperatorMatrix build_momentum(const FockBasis& basis) {
  OperatorMatrix p = zero_operator(basis, true);
  for (std::size_t s = 0; s < basis.size(); ++s) {
    double v = 0.0;
    for (int n = -basis.k_max(); n <= basis.k_max(); ++n) {
      v += basis.state(s)[static_cast<std::size_t>(n + basis.k_max())] * basis.momentum(n);
    }
    p.matrix(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = v;
  }
  return p;
}

OperatorMatrix build_ladder(const FockBasis& basis, int n, bool creation) {
  require_mode(basis, n, "build_ladder");
  OperatorMatrix op = zero_operator(basis, false);
  const auto i = static_cast<std::size_t>(n + basis.k_max());
  for (std::size_t s = 0; s < basis.size(); ++s) {
    Occupation occ = basis.state(s);
    double amp = 0.0;
    if (creation) {
      if (total_of(occ) >= basis.n_max()) continue;
      ++occ[i];
      amp = std::sqrt(static_cast<double>(occ[i]));
    } else {
      if (occ[i] == 0) continue;
      amp = std::sqrt(static_cast<double>(occ[i]));
      --occ[i];
    }
    if (const auto t = basis.find(occ)) {
      op.matrix(static_cast<Eigen::Index>(*t), static_cast<Eigen::Index>(s)) = amp;
    }
  }
  return op;
}

OperatorMatrix build_field_mode(const FockBasis& basis, int n) {
  require_mode(basis, n, "build_field_mode");
  OperatorMatrix op = zero_operator(basis, n == 0);
  op.matrix = (build_ladder(basis, n, false).matrix + build_ladder(basis, -n, true).matrix) /
              std::sqrt(2.0 * basis.frequency(n) * basis.beta());
  return op;
}

OperatorMatrix build_interaction(const FockBasis& basis, const Polynomial& poly) {
  if (poly.degree() > kMaxInteractionDegree) {
    throw Unsupported("build_interaction: degree " + std::to_string(poly.degree()) + " exceeds " +
                      std::to_string(kMaxInteractionDegree));
  }
  if (!poly.is_zero() && poly.degree() % 2 != 0) {
    throw InvalidParameter("build_interaction: P must have even degree");
  }
  OperatorMatrix v = zero_operator(basis, true);
  if (poly.is_zero()) return v;

  const int modes = basis.mode_count();
  std::vector<std::vector<Multiset>> by_size(static_cast<std::size_t>(poly.degree() + 1));
  for (int s = 0; s <= poly.degree(); ++s) by_size[static_cast<std::size_t>(s)] = multisets(basis, s);

  for (std::size_t col = 0; col < basis.size(); ++col) {
    const Occupation& nu = basis.state(col);
    const int n_nu = total_of(nu);
    for (int j = 0; j <= poly.degree(); ++j) {
      const double aj = poly.coeffs()[static_cast<std::size_t>(j)];
      if (aj == 0.0) continue;
      const double prefactor = aj * basis.beta() * factorial(j);
      for (int s = 0; s <= std::min(j, n_nu); ++s) {
        for (const auto& d : by_size[static_cast<std::size_t>(s)]) {
          double amp_d = 1.0;
          Occupation mu = nu;
          bool ok = true;
          for (int i = 0; i < modes && ok; ++i) {
            const int k = d.occ[static_cast<std::size_t>(i)];
            if (k == 0) continue;
            if (mu[static_cast<std::size_t>(i)] < k) {
              ok = false;
              break;
            }
            for (int r = 0; r < k; ++r) amp_d *= std::sqrt(static_cast<double>(mu[static_cast<std::size_t>(i)]--));
          }
          if (!ok) continue;
          if (n_nu - s + (j - s) > basis.n_max()) continue;
          for (const auto& e : by_size[static_cast<std::size_t>(j - s)]) {
            if (e.momentum != d.momentum) continue;
            Occupation target = mu;
            double amp = amp_d;
            for (int i = 0; i < modes; ++i) {
              const int k = e.occ[static_cast<std::size_t>(i)];
              for (int r = 0; r < k; ++r) amp *= std::sqrt(static_cast<double>(++target[static_cast<std::size_t>(i)]));
            }
            const auto row = basis.find(target);
            if (!row) continue;
            v.matrix(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) +=
                prefactor * d.weight * e.weight * amp;
          }
        }
      }
    }
  }
  require_hermitian(v.matrix, "build_interaction");
  v.matrix = 0.5 * (v.matrix + v.matrix.transpose()).eval();
  return v;
}

GroundState ground_state(const OperatorMatrix& h, EnergyShift policy) {
  if (h.matrix.rows() == 0 || h.matrix.rows() != h.matrix.cols()) {
    throw DimensionError("ground_state: empty or non-square operator");
  }
  require_hermitian(h.matrix, "ground_state");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
  if (es.info() != Eigen::Success) throw NumericalError("ground_state: eigensolver did not converge");
  GroundState g;
  g.e_c = es.eigenvalues()(0);
  const double shift = policy == EnergyShift::SubtractGround ? g.e_c : 0.0;
  g.eigenvalues = es.eigenvalues().array() - shift;
  g.energy0 = g.eigenvalues(0);
  g.vector = es.eigenvectors().col(0);
  Eigen::Index arg = 0;
  g.vector.cwiseAbs().maxCoeff(&arg);
  if (g.vector(arg) < 0.0) g.vector = -g.vector;
  if (g.eigenvalues.size() > 1) {
    g.gap = g.eigenvalues(1) - g.eigenvalues(0);
    const double tol = kHermitianTolerance * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (g.gap < 10.0 * tol) {
      std::ostringstream os;
      os << "degenerate vacuum: gap " << g.gap << " below " << 10.0 * tol << " (truncation trouble?)";
      g.warnings.push_back(os.str());
    }
  } else {
    g.gap = std::numeric_limits<double>::infinity();
  }
  return g;
}

CircleModel solve_circle(const ModelParams& params, int k_max, int n_max, double energy_cutoff) {
  params.validate();
  FockBasis basis(params.beta, params.mass, k_max, n_max, energy_cutoff);
  OperatorMatrix h = build_free_hamiltonian(basis);
  h.matrix += build_interaction(basis, params.poly).matrix;
  GroundState g = ground_state(h, EnergyShift::SubtractGround);
  h.matrix.diagonal().array() -= g.e_c;
  OperatorMatrix p = build_momentum(basis);
  return {std::move(basis), std::move(h), std::move(p), std::move(g)};
}

CheckReport spectrum_condition_check(const OperatorMatrix& h, const OperatorMatrix& p, double tol) {
  require_square(h, p, "spectrum_condition_check");
  if (!(tol >= 0.0)) throw InvalidParameter("spectrum_condition_check: tolerance must be non-negative");
  CheckReport r;
  r.name = "spectrum_condition";
  const double minus = min_eig(h.matrix - p.matrix);
  const double plus = min_eig(h.matrix + p.matrix);
  r.statistic = std::min(minus, plus);
  r.threshold = -tol;
  r.values = {{"min_eig_h_minus_p", minus}, {"min_eig_h_plus_p", plus}, {"tolerance", tol}};
  r.verdict = r.statistic >= -tol ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os << "min eig(H - P) = " << minus << ", min eig(H + P) = " << plus << ", allowance " << tol;
  r.message = os.str();
  return r;
}

double truncation_drift(const ModelParams& params, int k_max, int n_max) {
  if (n_max < 3) throw InvalidParameter("truncation_drift: n_max must be >= 3");
  const auto lo = solve_circle(params, k_max, n_max - 2);
  const auto hi = solve_circle(params, k_max, n_max);
  return std::max(std::abs(hi.ground.e_c - lo.ground.e_c), std::abs(hi.ground.gap - lo.ground.gap));
}

JointSpectrum joint_eigenbasis(const OperatorMatrix& h, const OperatorMatrix& p) {
  require_square(h, p, "joint_eigenbasis");
  const Eigen::Index n = h.matrix.rows();
  Eigen::MatrixXd off = p.matrix;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 0.0) throw BasisError("joint_eigenbasis: momentum is not diagonal in the Fock basis");
  const double comm = (h.matrix * p.matrix - p.matrix * h.matrix).norm();
  if (comm > kCommutatorTolerance) {
    std::ostringstream os;
    os << "joint_eigenbasis: ||[H, P]|| = " << comm << " exceeds " << kCommutatorTolerance;
    throw BasisError(os.str());
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::VectorXd pd = p.matrix.diagonal();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return pd(a) < pd(b); });

  JointSpectrum js;
  js.energies.resize(n);
  js.momenta.resize(n);
  js.vectors = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index out = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    const double p0 = pd(order[start]);
    while (end < order.size() && std::abs(pd(order[end]) - p0) <= 1e-9 * (1.0 + std::abs(p0))) ++end;
    const auto m = static_cast<Eigen::Index>(end - start);
    Eigen::MatrixXd block(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) block(a, b) = h.matrix(order[start + a], order[start + b]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
    if (es.info() != Eigen::Success) throw NumericalError("joint_eigenbasis: eigensolver did not converge");
    for (Eigen::Index k = 0; k < m; ++k, ++out) {
      js.energies(out) = es.eigenvalues()(k);
      js.momenta(out) = p0;
      for (Eigen::Index a = 0; a < m; ++a) js.vectors(order[start + a], out) = es.eigenvectors()(a, k);
    }
    start = end;
  }
  return js;
}

Eigen::VectorXd smeared_field_state(const FockBasis& basis, const Eigen::VectorXd& omega, int k) {
  if (k < 0 || k > basis.k_max()) throw InvalidParameter("smeared_field_state: k must be in [0, k_max]");
  if (static_cast<std::size_t>(omega.size()) != basis.size()) {
    throw DimensionError("smeared_field_state: vector does not match basis");
  }
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(omega.size());
  for (int n = -k; n <= k; ++n) psi += build_field_mode(basis, n).matrix * omega;
  return psi;
}

std::complex<double> circle_two_point(const JointSpectrum& js, const Eigen::VectorXd& psi, double t, double y) {
  if (!(y > 0.0)) throw DomainError("circle_two_point: y must be positive");
  if (psi.size() != js.vectors.rows()) throw DimensionError("circle_two_point: vector does not match basis");
  const Eigen::VectorXd overlap = js.vectors.transpose() * psi;
  std::complex<double> w{0.0, 0.0};
  for (Eigen::Index j = 0; j < overlap.size(); ++j) {
    const double weight = overlap(j) * overlap(j);
    if (weight == 0.0) continue;
    w += weight * std::exp(-y * js.energies(j)) * std::polar(1.0, t * js.momenta(j));
  }
  return w;
}

CheckReport joint_spectral_support_check(const JointSpectrum& js, const Eigen::VectorXd& psi, double tol) {
  if (psi.size() != js.vectors.rows()) throw DimensionError("joint_spectral_support_check: vector does not match basis");
  CheckReport r;
  r.name = "joint_spectral_support";
  const Eigen::VectorXd overlap = js.vectors.transpose() * psi;
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidParameter("joint_spectral_support_check: zero vector");
  double outside = 0.0;
  for (Eigen::Index j = 0; j < overlap.size(); ++j) {
    if (std::abs(js.momenta(j)) > js.energies(j) + tol) outside += overlap(j) * overlap(j);
  }
  r.statistic = outside / norm2;
  r.threshold = 1e-10;
  r.values = {{"weight_outside_cone", r.statistic}, {"norm2", norm2}, {"tolerance", tol}};
  r.verdict = r.statistic < r.threshold ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os << "relative weight outside |p| <= E: " << r.statistic;
  r.message = os.str();
  return r;
}

}  // namespace tcyl
