#pragma once

// Open-system dynamics of the wire-mediated axial exchange.
//
// Two truncated harmonic modes, S (spectroscopy) and L (logic), in the
// rotating frame at omega_z:
//
//   H/hbar = omega_ex (a^dag b + a b^dag) + detuning b^dag b
//   drho/dt = -i[H, rho] + sum_{m in {a,b}} gamma_m (n+1) D[m] rho + gamma_m n D[m^dag] rho
//
// with a acting on S, b on L, and D[c] rho = c rho c^dag - {c^dag c, rho}/2.
// Basis ordering is |n_S, n_L> -> n_S * (n_max + 1) + n_L.
//
// Two independent propagation routes are provided: a fixed-step RK4 on the
// matrix form of the master equation (evolve), and exact exponentiation of
// the Liouvillian (evolve_exact). The generator conserves the excitation
// imbalance N(row) - N(col) of each density-matrix element, so the exact
// route exponentiates one small block per imbalance sector.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qls/circuit.hpp"
#include "qls/error.hpp"

namespace qls {

using cplx = std::complex<double>;

struct ExchangeParams {
  double omega_ex = 0.0;  // [rad/s]
  double gamma_L = 0.0;   // [1/s]
  double gamma_S = 0.0;   // [1/s]
  double n_bar = 0.0;
  double detuning = 0.0;  // logic-trap axial mismatch [rad/s]

  void validate() const {
    if (!(omega_ex >= 0.0) || !(gamma_L >= 0.0) || !(gamma_S >= 0.0))
      throw DomainError("ExchangeParams: rates must be non-negative");
    if (!(n_bar >= 0.0)) throw DomainError("ExchangeParams: n_bar must be non-negative");
    if (!std::isfinite(detuning)) throw DomainError("ExchangeParams: detuning must be finite");
  }

  static ExchangeParams from_budget(const ExchangeBudget& b) {
    return {b.omega_ex, b.gamma_L, b.gamma_S, b.n_bar, 0.0};
  }

  bool operator==(const ExchangeParams&) const = default;
};

class TwoModeState {
 public:
  /// Joint vacuum.
  explicit TwoModeState(int n_max = 4) : n_max_(n_max) {
    if (n_max < 2) throw DomainError("TwoModeState: n_max must be >= 2");
    rho_ = Eigen::MatrixXcd::Zero(dim(), dim());
    rho_(0, 0) = 1.0;
  }

  static TwoModeState fock(int n_max, int n_S, int n_L) {
    TwoModeState s(n_max);
    if (n_S < 0 || n_L < 0 || n_S > n_max || n_L > n_max)
      throw DomainError("TwoModeState::fock: occupation outside truncation");
    s.rho_(0, 0) = 0.0;
    const int i = s.index(n_S, n_L);
    s.rho_(i, i) = 1.0;
    return s;
  }

  static TwoModeState from_density_matrix(int n_max, Eigen::MatrixXcd rho) {
    TwoModeState s(n_max);
    if (rho.rows() != s.dim() || rho.cols() != s.dim())
      throw DomainError("TwoModeState: density matrix has wrong dimension");
    s.rho_ = std::move(rho);
    return s;
  }

  int n_max() const { return n_max_; }
  int levels() const { return n_max_ + 1; }
  int dim() const { return levels() * levels(); }
  int index(int n_S, int n_L) const { return n_S * levels() + n_L; }
  int n_S_of(int i) const { return i / levels(); }
  int n_L_of(int i) const { return i % levels(); }

  const Eigen::MatrixXcd& rho() const { return rho_; }

  double population(int n_S, int n_L) const {
    const int i = index(n_S, n_L);
    return rho_(i, i).real();
  }

  /// Marginal P(n_L = n).
  double probability_logic(int n) const {
    double p = 0.0;
    for (int s = 0; s < levels(); ++s) p += population(s, n);
    return p;
  }

  /// Marginal P(n_S = n).
  double probability_spectroscopy(int n) const {
    double p = 0.0;
    for (int l = 0; l < levels(); ++l) p += population(n, l);
    return p;
  }

  double mean_quanta_S() const {
    double m = 0.0;
    for (int i = 0; i < dim(); ++i) m += n_S_of(i) * rho_(i, i).real();
    return m;
  }

  double mean_quanta_L() const {
    double m = 0.0;
    for (int i = 0; i < dim(); ++i) m += n_L_of(i) * rho_(i, i).real();
    return m;
  }

  double trace() const { return rho_.trace().real(); }

  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

  double min_eigenvalue() const {
    const Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Population in states where either mode sits at the truncation level.
  double edge_population() const {
    double p = 0.0;
    for (int i = 0; i < dim(); ++i)
      if (n_S_of(i) == n_max_ || n_L_of(i) == n_max_) p += rho_(i, i).real();
    return p;
  }

 private:
  int n_max_;
  Eigen::MatrixXcd rho_;
};

struct EvolveOptions {
  double step_fraction = 1.0 / 100.0;  // step <= step_fraction / fastest rate
  double truncation_limit = 1e-3;
};

namespace detail {

using SparseC = Eigen::SparseMatrix<cplx>;

struct Channel {
  SparseC op;
  SparseC op_dag;
  Eigen::VectorXcd number;  // diagonal of op^dag op
  double rate;
};

struct ModeOperators {
  SparseC a;  // annihilation on S
  SparseC b;  // annihilation on L
};

inline ModeOperators ladder_operators(int n_max) {
  const int lv = n_max + 1;
  const int dim = lv * lv;
  std::vector<Eigen::Triplet<cplx>> ta, tb;
  for (int s = 0; s < lv; ++s) {
    for (int l = 0; l < lv; ++l) {
      const int col = s * lv + l;
      if (s > 0) ta.emplace_back((s - 1) * lv + l, col, std::sqrt(static_cast<double>(s)));
      if (l > 0) tb.emplace_back(s * lv + (l - 1), col, std::sqrt(static_cast<double>(l)));
    }
  }
  ModeOperators m{SparseC(dim, dim), SparseC(dim, dim)};
  m.a.setFromTriplets(ta.begin(), ta.end());
  m.b.setFromTriplets(tb.begin(), tb.end());
  return m;
}

class Lindbladian {
 public:
  Lindbladian(int n_max, const ExchangeParams& p) {
    const auto ops = ladder_operators(n_max);
    const SparseC a_dag = ops.a.adjoint();
    const SparseC b_dag = ops.b.adjoint();
    SparseC nb = b_dag * ops.b;
    hamiltonian_ = (p.omega_ex * (a_dag * ops.b + ops.a * b_dag) + p.detuning * nb).pruned();

    auto add = [this](const SparseC& c, double rate) {
      if (rate <= 0.0) return;
      SparseC cd = c.adjoint();
      SparseC n = cd * c;
      channels_.push_back({c, cd, Eigen::VectorXcd(n.diagonal()), rate});
    };
    add(ops.a, p.gamma_S * (p.n_bar + 1.0));
    add(a_dag, p.gamma_S * p.n_bar);
    add(ops.b, p.gamma_L * (p.n_bar + 1.0));
    add(b_dag, p.gamma_L * p.n_bar);
  }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const {
    const cplx minus_i{0.0, -1.0};
    Eigen::MatrixXcd out = minus_i * (hamiltonian_ * rho - rho * hamiltonian_);
    for (const auto& ch : channels_) {
      const Eigen::MatrixXcd lowered = ch.op * rho;
      out += ch.rate * (lowered * ch.op_dag);
      out -= 0.5 * ch.rate * (ch.number.asDiagonal() * rho + rho * ch.number.asDiagonal());
    }
    return out;
  }

 private:
  SparseC hamiltonian_;
  std::vector<Channel> channels_;
};

inline double fastest_rate(const ExchangeParams& p) {
  const double damping = std::max(p.gamma_L, p.gamma_S) * (p.n_bar + 1.0);
  return std::max({p.omega_ex, std::abs(p.detuning), damping});
}

inline void check_truncation(double edge, double limit) {
  if (edge > limit)
    throw TruncationError("population at the truncation level (" + std::to_string(edge) +
                              ") exceeds the limit; increase n_max",
                          edge);
}

}  // namespace detail

/// Largest RK4 step used by evolve() for these parameters [s]; 0 when the
/// generator vanishes.
inline double integrator_step(const ExchangeParams& p, const EvolveOptions& opt = {}) {
  const double rate = detail::fastest_rate(p);
  return rate > 0.0 ? opt.step_fraction / rate : 0.0;
}

/// Fixed-step RK4 propagation of the master equation.
inline TwoModeState evolve(const TwoModeState& state, const ExchangeParams& params, double t,
                           const EvolveOptions& opt = {}) {
  params.validate();
  if (!(t >= 0.0)) throw DomainError("evolve: duration must be non-negative");
  const double h_max = integrator_step(params, opt);
  if (t == 0.0 || h_max == 0.0) return state;

  const detail::Lindbladian L(state.n_max(), params);
  const auto steps = static_cast<long>(std::ceil(t / h_max));
  const double h = t / static_cast<double>(steps);

  Eigen::MatrixXcd rho = state.rho();
  TwoModeState probe = state;
  double worst_edge = state.edge_population();
  for (long s = 0; s < steps; ++s) {
    const Eigen::MatrixXcd k1 = L.apply(rho);
    const Eigen::MatrixXcd k2 = L.apply(rho + 0.5 * h * k1);
    const Eigen::MatrixXcd k3 = L.apply(rho + 0.5 * h * k2);
    const Eigen::MatrixXcd k4 = L.apply(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    probe = TwoModeState::from_density_matrix(state.n_max(), rho);
    worst_edge = std::max(worst_edge, probe.edge_population());
  }
  detail::check_truncation(worst_edge, opt.truncation_limit);
  return probe;
}

/// Exact propagation exp(L t) rho, one dense block per excitation-imbalance
/// sector. Builds the superoperator element-wise from dense H and jump
/// operators, independently of the RK4 path.
inline TwoModeState evolve_exact(const TwoModeState& state, const ExchangeParams& params,
                                 double t, const EvolveOptions& opt = {}) {
  params.validate();
  if (!(t >= 0.0)) throw DomainError("evolve_exact: duration must be non-negative");
  const int n_max = state.n_max();
  const int lv = n_max + 1;
  const int dim = state.dim();

  // Dense single-mode ladder, lifted to S and L by Kronecker products.
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(lv, lv);
  for (int n = 1; n < lv; ++n) lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(lv, lv);
  auto kron = [lv](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    Eigen::MatrixXcd out(lv * lv, lv * lv);
    for (int i = 0; i < lv; ++i)
      for (int j = 0; j < lv; ++j) out.block(i * lv, j * lv, lv, lv) = x(i, j) * y;
    return out;
  };
  const Eigen::MatrixXcd a = kron(lower, id);
  const Eigen::MatrixXcd b = kron(id, lower);
  const Eigen::MatrixXcd H = params.omega_ex * (a.adjoint() * b + a * b.adjoint()) +
                             params.detuning * (b.adjoint() * b);

  struct Jump {
    Eigen::MatrixXcd c;
    Eigen::MatrixXcd cdc;
    double rate;
  };
  std::vector<Jump> jumps;
  auto add = [&jumps](const Eigen::MatrixXcd& c, double rate) {
    if (rate > 0.0) jumps.push_back({c, c.adjoint() * c, rate});
  };
  add(a, params.gamma_S * (params.n_bar + 1.0));
  add(a.adjoint(), params.gamma_S * params.n_bar);
  add(b, params.gamma_L * (params.n_bar + 1.0));
  add(b.adjoint(), params.gamma_L * params.n_bar);

  auto quanta = [lv](int i) { return i / lv + i % lv; };
  std::map<int, std::vector<std::pair<int, int>>> sectors;
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) sectors[quanta(m) - quanta(n)].emplace_back(m, n);

  const Eigen::MatrixXcd& rho0 = state.rho();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  const cplx minus_i{0.0, -1.0};
  for (const auto& [imbalance, pairs] : sectors) {
    const auto size = static_cast<Eigen::Index>(pairs.size());
    Eigen::VectorXcd v(size);
    bool occupied = false;
    for (Eigen::Index p = 0; p < size; ++p) {
      v(p) = rho0(pairs[p].first, pairs[p].second);
      occupied = occupied || v(p) != cplx{0.0, 0.0};
    }
    if (!occupied) continue;

    // Matrix element <m| L(|m'><n'|) |n>.
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(size, size);
    for (Eigen::Index p = 0; p < size; ++p) {
      const auto [m, n] = pairs[p];
      for (Eigen::Index q = 0; q < size; ++q) {
        const auto [mp, np] = pairs[q];
        cplx value{0.0, 0.0};
        if (n == np) value += minus_i * H(m, mp);
        if (m == mp) value -= minus_i * H(np, n);
        for (const auto& j : jumps) {
          value += j.rate * j.c(m, mp) * std::conj(j.c(n, np));
          if (n == np) value -= 0.5 * j.rate * j.cdc(m, mp);
          if (m == mp) value -= 0.5 * j.rate * j.cdc(np, n);
        }
        block(p, q) = value;
      }
    }
    const Eigen::MatrixXcd propagator = (block * t).exp();
    const Eigen::VectorXcd out = propagator * v;
    for (Eigen::Index p = 0; p < size; ++p) rho(pairs[p].first, pairs[p].second) = out(p);
  }
  auto result = TwoModeState::from_density_matrix(n_max, std::move(rho));
  detail::check_truncation(result.edge_population(), opt.truncation_limit);
  return result;
}

enum class Propagator { integrator, exact };

/// P(n_L = 1) at t = pi / (2 omega_ex) starting from |n_S, n_L> = |1, 0>.
inline double swap_fidelity(const ExchangeParams& params, int n_max = 4,
                            Propagator route = Propagator::integrator,
                            const EvolveOptions& opt = {}) {
  params.validate();
  if (!(params.omega_ex > 0.0)) throw DomainError("swap_fidelity: omega_ex must be positive");
  const double t = std::numbers::pi / (2.0 * params.omega_ex);
  const auto initial = TwoModeState::fock(n_max, 1, 0);
  const auto final_state = route == Propagator::exact ? evolve_exact(initial, params, t, opt)
                                                      : evolve(initial, params, t, opt);
  return final_state.probability_logic(1);
}

}  // namespace qls
