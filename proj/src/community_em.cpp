#include "lnncomm/community_em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lnncomm/error.hpp"
#include "lnncomm/parallel.hpp"

namespace lnncomm {

namespace {

constexpr double kEmptyMass = 1e-12;

void check_model(const CommunityModel& model, const SignedAdjacency& adj) {
  const auto c = model.pi.size();
  const bool ok = c >= 1 && model.tau_in_pos.rows() == c && model.tau_in_neg.rows() == c &&
                  model.tau_out_pos.rows() == c && model.tau_out_neg.rows() == c &&
                  model.tau_in_pos.cols() == adj.a_pos.rows() && model.tau_in_neg.cols() == adj.a_neg.rows() &&
                  model.tau_out_pos.cols() == adj.b_pos.cols() && model.tau_out_neg.cols() == adj.b_neg.cols();
  if (!ok) throw Error(ErrorKind::Dimension, "community model does not match the adjacency of layer " + std::to_string(adj.depth));
}

// Adds sum_m [x_{k,m} ln tau_{c,m} + (1 - x_{k,m}) ln(1 - tau_{c,m})] to log_r,
// with `unit_rows` holding one row per focal unit.
void add_side(MatrixXd& log_r, const MatrixXd& unit_rows, const MatrixXd& tau) {
  if (tau.cols() == 0) return;
  const MatrixXd log_tau = tau.array().log().matrix();
  const MatrixXd log_comp = (1.0 - tau.array()).log().matrix();
  log_r.noalias() += unit_rows * (log_tau - log_comp).transpose();
  log_r.rowwise() += log_comp.rowwise().sum().transpose();
}

MatrixXd log_joint(const CommunityModel& model, const SignedAdjacency& adj) {
  check_model(model, adj);
  const auto k0 = static_cast<Eigen::Index>(adj.units());
  MatrixXd log_r(k0, model.pi.size());
  log_r.rowwise() = model.pi.array().log().matrix().transpose();
  add_side(log_r, adj.a_pos.transpose(), model.tau_in_pos);
  add_side(log_r, adj.a_neg.transpose(), model.tau_in_neg);
  add_side(log_r, adj.b_pos, model.tau_out_pos);
  add_side(log_r, adj.b_neg, model.tau_out_neg);
  return log_r;
}

MatrixXd weighted_means(const MatrixXd& unit_by_target, const MatrixXd& q, const VectorXd& mass) {
  // unit_by_target: k0 x m. Result: C x m.
  MatrixXd tau = q.transpose() * unit_by_target;
  for (Eigen::Index c = 0; c < tau.rows(); ++c)
    if (mass(c) >= kEmptyMass) tau.row(c) /= mass(c);
  return tau;
}

}  // namespace

void EMConfig::validate() const {
  if (communities < 1) throw Error(ErrorKind::Config, "C must be >= 1");
  if (iterations < 1) throw Error(ErrorKind::Config, "a2 must be >= 1");
  if (restarts < 1) throw Error(ErrorKind::Config, "a3 must be >= 1");
}

EStep responsibilities(const CommunityModel& model, const SignedAdjacency& adj) {
  if (!adj.softened) throw Error(ErrorKind::Config, "responsibilities need a softened adjacency");
  EStep out;
  out.log_r = log_joint(model, adj);
  out.q.resize(out.log_r.rows(), out.log_r.cols());
  out.log_likelihood = 0.0;
  for (Eigen::Index k = 0; k < out.log_r.rows(); ++k) {
    const double peak = out.log_r.row(k).maxCoeff();
    if (!std::isfinite(peak))
      throw Error(ErrorKind::Numerical, "all-zero responsibility row for unit " + std::to_string(k) + " at depth " +
                                            std::to_string(adj.depth));
    const auto shifted = (out.log_r.row(k).array() - peak).exp();
    const double total = shifted.sum();
    out.q.row(k) = shifted / total;
    out.log_likelihood += peak + std::log(total);
  }
  return out;
}

MStep m_step(const MatrixXd& q, const SignedAdjacency& adj) {
  const auto k0 = static_cast<Eigen::Index>(adj.units());
  if (q.rows() != k0 || q.cols() < 1)
    throw Error(ErrorKind::Dimension, "q has shape " + std::to_string(q.rows()) + "x" + std::to_string(q.cols()) +
                                          ", layer has " + std::to_string(k0) + " units");
  const VectorXd mass = q.colwise().sum().transpose();

  MStep out;
  CommunityModel& m = out.model;
  m.q = q;
  m.pi = mass / static_cast<double>(k0);
  m.tau_in_pos = weighted_means(adj.a_pos.transpose(), q, mass);
  m.tau_in_neg = weighted_means(adj.a_neg.transpose(), q, mass);
  m.tau_out_pos = weighted_means(adj.b_pos, q, mass);
  m.tau_out_neg = weighted_means(adj.b_neg, q, mass);

  for (Eigen::Index c = 0; c < mass.size(); ++c) {
    if (mass(c) >= kEmptyMass) continue;
    out.repaired.push_back(static_cast<std::size_t>(c));
    m.pi(c) = kEmptyMass;
    if (m.tau_in_pos.cols() > 0) {
      m.tau_in_pos.row(c) = adj.a_pos.rowwise().mean().transpose();
      m.tau_in_neg.row(c) = adj.a_neg.rowwise().mean().transpose();
    }
    if (m.tau_out_pos.cols() > 0) {
      m.tau_out_pos.row(c) = adj.b_pos.colwise().mean();
      m.tau_out_neg.row(c) = adj.b_neg.colwise().mean();
    }
  }
  if (!out.repaired.empty()) m.pi /= m.pi.sum();
  return out;
}

double expected_log_likelihood(const CommunityModel& model, const SignedAdjacency& adj) {
  const MatrixXd log_r = log_joint(model, adj);
  if (model.q.rows() != log_r.rows() || model.q.cols() != log_r.cols())
    throw Error(ErrorKind::Dimension, "q does not match the community model");
  return (model.q.array() * log_r.array()).sum();
}

EMRun run_em(const SignedAdjacency& adj, const EMConfig& config, Rng& rng) {
  config.validate();
  if (!adj.softened) throw Error(ErrorKind::Config, "EM needs a softened adjacency");
  const auto k0 = static_cast<Eigen::Index>(adj.units());
  const auto c = static_cast<Eigen::Index>(config.communities);

  // Uniform on the simplex: normalised i.i.d. Exp(1) draws.
  std::exponential_distribution<double> exp1(1.0);
  MatrixXd q(k0, c);
  for (Eigen::Index k = 0; k < k0; ++k) {
    for (Eigen::Index s = 0; s < c; ++s) q(k, s) = exp1(rng);
    q.row(k) /= q.row(k).sum();
  }

  EMRun run;
  run.log_likelihood.reserve(config.iterations);
  CommunityModel model;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    MStep ms = m_step(q, adj);
    run.repairs += ms.repaired.size();
    model = std::move(ms.model);
    EStep es = responsibilities(model, adj);
    q = std::move(es.q);
    run.log_likelihood.push_back(es.log_likelihood);
  }
  model.q = q;
  run.expected_log_likelihood = expected_log_likelihood(model, adj);
  run.model = std::move(model);
  return run;
}

std::vector<std::size_t> CommunityAssignment::members(std::size_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < community.size(); ++k)
    if (community[k] == c) out.push_back(k);
  return out;
}

std::vector<std::size_t> hard_assign(const MatrixXd& q) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(q.rows()));
  for (Eigen::Index k = 0; k < q.rows(); ++k) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < q.cols(); ++c)
      if (q(k, c) > q(k, best)) best = c;
    labels[static_cast<std::size_t>(k)] = static_cast<std::size_t>(best);
  }
  return labels;
}

CommunityAssignment detect(const SignedAdjacency& adj, const EMConfig& config) {
  config.validate();
  std::vector<EMRun> runs(config.restarts);
  parallel_for(config.restarts, config.threads, [&](std::size_t r) {
    Rng rng = make_rng(config.seed, r);
    runs[r] = run_em(adj, config, rng);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].expected_log_likelihood > runs[best].expected_log_likelihood) best = r;

  CommunityAssignment out;
  out.depth = adj.depth;
  out.q = runs[best].model.q;
  out.community = hard_assign(out.q);
  out.expected_log_likelihood = runs[best].expected_log_likelihood;
  out.best_restart = best;
  out.communities = config.communities;
  return out;
}

std::vector<CommunityAssignment> detect_all_layers(const NetworkParams& params, double xi, const EMConfig& config,
                                                   const std::vector<std::size_t>& communities_per_layer) {
  params.validate();
  const std::size_t depth = params.depth();
  if (!communities_per_layer.empty() && communities_per_layer.size() != depth)
    throw Error(ErrorKind::Config, "per-layer community counts must list " + std::to_string(depth) + " layers");

  std::vector<CommunityAssignment> out;
  out.reserve(depth);
  for (std::size_t d = 1; d <= depth; ++d) {
    EMConfig layer = config;
    layer.seed = derive_seed(config.seed, d);
    if (!communities_per_layer.empty()) layer.communities = communities_per_layer[d - 1];
    out.push_back(detect(soften(extract(params, d, xi)), layer));
  }
  return out;
}

}  // namespace lnncomm
