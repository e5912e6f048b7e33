#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lnncomm/adjacency.hpp"
#include "lnncomm/random.hpp"

namespace lnncomm {

/// Block-model state for one focal layer with C communities.
///
///   pi          length C, community priors
///   tau_in_*    C x i0, probability of a positive/negative edge to input-side unit i
///   tau_out_*   C x j0, same toward output-side unit j
///   q           k0 x C responsibilities
struct CommunityModel {
  VectorXd pi;
  MatrixXd tau_in_pos, tau_in_neg;
  MatrixXd tau_out_pos, tau_out_neg;
  MatrixXd q;

  std::size_t communities() const noexcept { return static_cast<std::size_t>(pi.size()); }
};

struct EMConfig {
  std::size_t communities = 3;  // C
  std::size_t iterations = 200; // a2
  std::size_t restarts = 300;   // a3
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
};

struct EStep {
  MatrixXd log_r;         // k0 x C, ln r_{k,c}
  MatrixXd q;             // k0 x C, rows sum to 1
  double log_likelihood;  // sum_k ln sum_c r_{k,c}
};

/// q_{k,c} = r_{k,c} / sum_s r_{k,s}, evaluated in log space. The adjacency
/// must be softened.
EStep responsibilities(const CommunityModel& model, const SignedAdjacency& adj);

struct MStep {
  CommunityModel model;                     // q copied from the input
  std::vector<std::size_t> repaired;        // communities that had no mass
};

/// Closed-form maximiser of the expected log-likelihood for fixed q.
///
/// A community with sum_k q_{k,c} < 1e-12 gets its tau rows reset to the
/// column means of the adjacency and pi_c = 1e-12 before pi is renormalised.
MStep m_step(const MatrixXd& q, const SignedAdjacency& adj);

/// Expected complete-data log-likelihood for the model's own q.
double expected_log_likelihood(const CommunityModel& model, const SignedAdjacency& adj);

struct EMRun {
  CommunityModel model;                      // parameters of the last M-step, q of the last E-step
  std::vector<double> log_likelihood;        // observed-data log-likelihood after each E-step
  double expected_log_likelihood = 0.0;      // L-bar at the final iteration
  std::size_t repairs = 0;
};

/// One EM trajectory: q rows drawn uniformly on the simplex, then `iterations`
/// rounds of (M-step, E-step).
EMRun run_em(const SignedAdjacency& adj, const EMConfig& config, Rng& rng);

struct CommunityAssignment {
  std::size_t depth = 0;
  std::vector<std::size_t> community;  // 0-based community per unit
  MatrixXd q;
  double expected_log_likelihood = 0.0;
  std::size_t best_restart = 0;
  std::size_t communities = 0;

  std::vector<std::size_t> members(std::size_t c) const;
};

/// argmax_c q_{k,c} per row; ties go to the lowest community index.
std::vector<std::size_t> hard_assign(const MatrixXd& q);

/// Runs `restarts` independent EM trajectories (stream r seeded from
/// (seed, r)) and keeps the one with the largest final L-bar, lowest restart
/// index on ties.
CommunityAssignment detect(const SignedAdjacency& adj, const EMConfig& config);

/// extract -> soften -> detect for every depth 1..D. `communities_per_layer`
/// overrides config.communities when non-empty (one entry per layer). Layer d
/// uses seed derive_seed(config.seed, d).
std::vector<CommunityAssignment> detect_all_layers(const NetworkParams& params, double xi, const EMConfig& config,
                                                   const std::vector<std::size_t>& communities_per_layer = {});

}  // namespace lnncomm
