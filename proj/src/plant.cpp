#include "shapeservo/plant.hpp"

#include <cmath>
#include <numbers>

namespace shapeservo::plant {

namespace {

// Gripper clamp pose from joint angles. q[4] and q[5] intentionally do
// not move the grasped end.
struct ClampPose {
  Eigen::Vector2d p0;
  double theta;
};

ClampPose clamp_pose(const Vector6& q) {
  ClampPose c;
  c.p0 = Eigen::Vector2d(0.05 + 0.1 * q[0], 0.30 + 0.1 * q[1]);
  c.theta = q[2] + 0.5 * q[3];
  return c;
}

}  // namespace

Plant Plant::make_linear(LinearPlantParams params, const VectorX& s0) {
  if (params.j0.cols() != kJointDim) {
    throw std::invalid_argument("linear plant jacobian must have 6 columns");
  }
  if (s0.size() != params.j0.rows()) {
    throw std::invalid_argument("s0 dimension must match jacobian rows");
  }
  Plant p;
  p.state_ = LinearState{std::move(params), s0};
  return p;
}

Plant Plant::make_chain(ChainPlantParams params) {
  if (params.nodes < 3) {
    throw std::invalid_argument("chain needs at least 3 nodes");
  }
  Plant p;
  ChainState cs;
  cs.params = params;
  const int n = params.nodes;
  cs.nodes.resize(2, n);
  const ClampPose c = clamp_pose(Vector6::Zero());
  for (int i = 0; i < n; ++i) {
    cs.nodes.col(i) = c.p0 + i * params.rest_length *
                                 Eigen::Vector2d(std::cos(c.theta),
                                                 std::sin(c.theta));
  }
  solve_equilibrium(cs, Vector6::Zero());
  p.state_ = std::move(cs);
  return p;
}

bool Plant::is_chain() const {
  return std::holds_alternative<ChainState>(state_);
}

int Plant::feature_dim(const FeatureMapSpec& map) const {
  if (const auto* ls = std::get_if<LinearState>(&state_)) {
    return static_cast<int>(ls->s.size());
  }
  return map.p;
}

MatrixX Plant::jacobian_at(double t) const {
  const auto& ls = std::get<LinearState>(state_);
  double scale = 1.0;
  if (ls.params.tv_amplitude != 0.0) {
    scale += ls.params.tv_amplitude *
             std::sin(2.0 * std::numbers::pi * ls.params.tv_frequency * t);
  }
  return scale * ls.params.j0;
}

Centerline Plant::centerline() const {
  if (const auto* cs = std::get_if<ChainState>(&state_)) {
    const int n = cs->params.nodes;
    Centerline c;
    c.coords.resize(2 * n);
    for (int i = 0; i < n; ++i) {
      c.coords.segment<2>(2 * i) =
          cs->params.px_scale * cs->nodes.col(i) + cs->params.px_offset;
    }
    return c;
  }
  // Synthetic straight line driven by q; kept for interface parity, the
  // closed loop reads features() directly on this variant.
  const ClampPose c = clamp_pose(q_);
  Centerline out;
  const int n = 20;
  out.coords.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d pt =
        c.p0 + 0.02 * i * Eigen::Vector2d(std::cos(c.theta), std::sin(c.theta));
    out.coords.segment<2>(2 * i) = 500.0 * pt + Eigen::Vector2d(320.0, 240.0);
  }
  return out;
}

VectorX Plant::features(const FeatureMapSpec& map) const {
  if (const auto* ls = std::get_if<LinearState>(&state_)) {
    return ls->s;
  }
  return extract_features(centerline(), map).s;
}

MatrixX Plant::true_jacobian(const FeatureMapSpec& map) const {
  if (std::holds_alternative<LinearState>(state_)) {
    return jacobian_at(t_);
  }
  const auto& cs = std::get<ChainState>(state_);
  const double h = cs.params.fd_step;
  MatrixX jac(map.p, kJointDim);
  for (int j = 0; j < kJointDim; ++j) {
    ChainState plus = cs;
    ChainState minus = cs;
    Vector6 qp = q_;
    Vector6 qm = q_;
    qp[j] += h;
    qm[j] -= h;
    solve_equilibrium(plus, qp);
    solve_equilibrium(minus, qm);
    Plant pp = *this;
    pp.state_ = plus;
    pp.q_ = qp;
    Plant pm = *this;
    pm.state_ = minus;
    pm.q_ = qm;
    jac.col(j) = (pp.features(map) - pm.features(map)) / (2.0 * h);
  }
  return jac;
}

Plant Plant::step(const Vector6& u, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("step requires dt > 0");
  if (!u.allFinite()) throw std::invalid_argument("step requires finite u");
  Plant next = *this;
  next.q_ = q_ + dt * u;
  next.t_ = t_ + dt;
  if (auto* ls = std::get_if<LinearState>(&next.state_)) {
    ls->s += dt * jacobian_at(t_) * u;
  } else {
    auto& cs = std::get<ChainState>(next.state_);
    solve_equilibrium(cs, next.q_);
  }
  return next;
}

double Plant::equilibrium_residual() const {
  if (const auto* cs = std::get_if<ChainState>(&state_)) return cs->residual;
  return 0.0;
}

// Damped Newton on the nodal force balance of
//   E = sum 1/2 ks (|d_i| - L0)^2 + sum 1/2 kb |x_{i+1}-2x_i+x_{i-1}|^2
//       + sum m g y_i
// over free nodes 2..N-1 (nodes 0 and 1 clamped to the gripper).
void Plant::solve_equilibrium(ChainState& cs, const Vector6& q) {
  const auto& pr = cs.params;
  const int n = pr.nodes;
  const int nfree = n - 2;
  const ClampPose clamp = clamp_pose(q);
  cs.nodes.col(0) = clamp.p0;
  cs.nodes.col(1) =
      clamp.p0 + pr.rest_length * Eigen::Vector2d(std::cos(clamp.theta),
                                                  std::sin(clamp.theta));

  auto energy_grad = [&](const MatrixX& x, VectorX* grad) -> double {
    double e = 0.0;
    if (grad) grad->setZero();
    auto add_g = [&](int node, const Eigen::Vector2d& g) {
      if (grad && node >= 2) grad->segment<2>(2 * (node - 2)) += g;
    };
    for (int i = 0; i + 1 < n; ++i) {
      const Eigen::Vector2d d = x.col(i + 1) - x.col(i);
      const double len = d.norm();
      const double stretch = len - pr.rest_length;
      e += 0.5 * pr.stretch_stiffness * stretch * stretch;
      const Eigen::Vector2d f = pr.stretch_stiffness * stretch * d / len;
      add_g(i + 1, f);
      add_g(i, -f);
    }
    for (int i = 1; i + 1 < n; ++i) {
      const Eigen::Vector2d b = x.col(i + 1) - 2.0 * x.col(i) + x.col(i - 1);
      e += 0.5 * pr.bend_stiffness * b.squaredNorm();
      add_g(i + 1, pr.bend_stiffness * b);
      add_g(i, -2.0 * pr.bend_stiffness * b);
      add_g(i - 1, pr.bend_stiffness * b);
    }
    for (int i = 2; i < n; ++i) {
      e += pr.node_mass * pr.gravity * x(1, i);
      add_g(i, Eigen::Vector2d(0.0, pr.node_mass * pr.gravity));
    }
    return e;
  };

  auto hessian = [&](const MatrixX& x) -> MatrixX {
    MatrixX h = MatrixX::Zero(2 * nfree, 2 * nfree);
    auto add_h = [&](int a, int b, const Eigen::Matrix2d& blk) {
      if (a >= 2 && b >= 2) {
        h.block<2, 2>(2 * (a - 2), 2 * (b - 2)) += blk;
      }
    };
    const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
    for (int i = 0; i + 1 < n; ++i) {
      const Eigen::Vector2d d = x.col(i + 1) - x.col(i);
      const double len = d.norm();
      const Eigen::Vector2d dh = d / len;
      const Eigen::Matrix2d proj = dh * dh.transpose();
      const Eigen::Matrix2d blk =
          pr.stretch_stiffness *
          (proj + (1.0 - pr.rest_length / len) * (eye - proj));
      add_h(i, i, blk);
      add_h(i + 1, i + 1, blk);
      add_h(i, i + 1, -blk);
      add_h(i + 1, i, -blk);
    }
    for (int i = 1; i + 1 < n; ++i) {
      const int idx[3] = {i - 1, i, i + 1};
      const double w[3] = {1.0, -2.0, 1.0};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          add_h(idx[a], idx[b], pr.bend_stiffness * w[a] * w[b] * eye);
        }
      }
    }
    return h;
  };

  VectorX grad(2 * nfree);
  double e = energy_grad(cs.nodes, &grad);
  double mu = 1e-8;
  int iter = 0;
  while (grad.norm() > pr.solver_tol) {
    if (++iter > pr.solver_max_iter) {
      throw EquilibriumFailure(
          "chain equilibrium did not converge, residual " +
              std::to_string(grad.norm()),
          grad.norm());
    }
    const MatrixX h = hessian(cs.nodes);
    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      MatrixX hd = h;
      hd.diagonal().array() += mu;
      const VectorX dx = hd.ldlt().solve(-grad);
      MatrixX trial = cs.nodes;
      for (int i = 0; i < nfree; ++i) {
        trial.col(i + 2) += dx.segment<2>(2 * i);
      }
      VectorX tgrad(2 * nfree);
      const double te = energy_grad(trial, &tgrad);
      if (te < e || tgrad.norm() < grad.norm()) {
        cs.nodes = trial;
        e = te;
        grad = tgrad;
        mu = std::max(mu * 0.25, 1e-12);
        accepted = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted) {
      throw EquilibriumFailure(
          "chain equilibrium stalled, residual " + std::to_string(grad.norm()),
          grad.norm());
    }
  }
  cs.residual = grad.norm();
}

}  // namespace shapeservo::plant
