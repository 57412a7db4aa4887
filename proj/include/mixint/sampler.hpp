#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mixint/basis.hpp"
#include "mixint/rng.hpp"
#include "mixint/types.hpp"

namespace mixint {

struct SamplerConfig {
  int n_iter = 10000;
  int burn_in = 2000;
  int thin = 8;
  int n_chains = 2;

  enum class ZetaUpdate { kMetropolisHastings, kGibbsScan };
  ZetaUpdate zeta_update_mode = ZetaUpdate::kMetropolisHastings;

  int subset_cap = 4;    // largest set size proposed as a decomposition
  int max_order = 4;     // largest active set the sampler will propose
  int closure_budget = 64;
  std::optional<double> fix_tau;  // hold all tau_h fixed (calibration runs)
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// The models evaluated together when one inclusion coordinate is updated.
struct CandidateSet {
  int j = 0;
  int h = 0;
  std::vector<ZetaMatrix> models;   // always contains the current matrix
  std::vector<double> log_weights;  // filled by GibbsSampler::score_candidates
  int current_index = -1;
  int skipped_no_slot = 0;
  int multi_decomposition = 0;
};

/// Candidate models for updating coordinate (j, h) of `zeta`.
///
/// Adding exposure j to a nonempty set A also puts on the table every model
/// that explains the same fit with lower-order structure: for each proper
/// subset B of A, the model keeping A in place and activating B ∪ {j} in a
/// spare function. When j currently sits in such a decomposition function,
/// that function's slot is recognized so the same family is produced from
/// every member, which is what makes the moves reversible.
CandidateSet candidate_models(const ZetaMatrix& zeta, int j, int h, int subset_cap,
                              int max_order);

std::vector<int> differing_functions(const ZetaMatrix& a, const ZetaMatrix& b);

/// One MCMC chain over the model: conjugate draws for sigma^2, tau, the
/// coefficient blocks and covariate coefficients, plus constrained updates
/// of the inclusion matrix through candidate sets.
class GibbsSampler {
 public:
  GibbsSampler(const Dataset& data, const SplineSpec& spec, const PriorConfig& prior,
               const SamplerConfig& cfg);

  const ModelState& state() const { return state_; }
  void set_state(ModelState st);

  double sigma_beta2() const { return prior_.sigma_beta2; }
  void set_sigma_beta2(double v);

  const PriorConfig& prior() const { return prior_; }
  const SamplerConfig& config() const { return cfg_; }
  Index n() const { return y_.size(); }
  int p() const { return static_cast<int>(spec_.p()); }
  int k() const { return prior_.k; }

  /// Shape and rate of the sigma^2 full conditional at the current state.
  std::pair<double, double> sigma2_shape_rate() const;
  double sample_sigma2(Rng& rng);
  void sample_tau(Rng& rng);
  void sample_beta_blocks(Rng& rng);
  void sample_beta_c(Rng& rng);

  CandidateSet candidates(int j, int h) const;

  /// Log conditional posterior of `cand`, up to a constant shared by all
  /// candidates scored with the same block of functions. The block's
  /// coefficients are integrated out against the partial residual that
  /// removes every function outside the block.
  double zeta_block_log_prob(const ZetaMatrix& cand, const std::vector<int>& block_functions);

  /// Scores every model in `cs` over the union of functions the family
  /// touches, writing cs.log_weights.
  void score_candidates(CandidateSet& cs);

  bool update_zeta_mh(int j, int h, Rng& rng);
  bool update_zeta_gibbs_scan(int j, int h, Rng& rng);
  void zeta_sweep(Rng& rng);

  /// One full scan: sigma^2, tau, p*k zeta attempts, coefficient blocks,
  /// covariate coefficients.
  void iterate(Rng& rng);

  const Vector& fitted_f() const { return f_total_; }
  const Vector& fitted_cbeta() const { return cbeta_; }
  Vector loglik_row() const;

  ViolationCounters& violations() { return violations_; }
  long& saturation_events() { return saturation_events_; }
  long mh_attempts = 0;
  long mh_accepts = 0;
  long asymmetric_rejects = 0;
  long symmetry_fallbacks = 0;
  long skipped_no_slot = 0;
  long multi_decomposition_events = 0;

 private:
  struct BlockSolve {
    int q = 0;
    double lw_lik = 0.0;
    Eigen::LLT<Matrix> llt;
    Vector half;  // L^{-1} X' y*
  };

  BlockSolve solve_block(const ZetaMatrix& cand, const std::vector<int>& block,
                         const Vector& ystar);
  double block_log_prob(const ZetaMatrix& cand, const std::vector<int>& block,
                        const Vector& ystar);
  Vector partial_residual(const std::vector<int>& block) const;
  void apply_model(const ZetaMatrix& next, const std::vector<int>& block, const Vector& ystar,
                   Rng& rng);
  void refresh_fits();
  double log_prior_zeta_block(const ZetaMatrix& cand, const std::vector<int>& block) const;
  bool closure(int j, int h, std::vector<ZetaMatrix>& family) const;

  Vector y_;
  Matrix c_;  // intercept column first
  mutable DesignCache cache_;
  SplineSpec spec_;
  PriorConfig prior_;
  SamplerConfig cfg_;

  ModelState state_;
  std::vector<Vector> fx_;  // fitted values per function
  Vector f_total_;
  Vector cbeta_;
  Matrix ctc_;

  ViolationCounters violations_;
  long saturation_events_ = 0;
};

ChainSamples run_chain(const Dataset& data, const SplineSpec& spec, const PriorConfig& prior,
                       const SamplerConfig& cfg, int chain_id = 0);

/// Runs cfg.n_chains chains concurrently (bounded by `threads`); chain i
/// draws from an independent stream derived from (cfg.rng_seed, i).
std::vector<ChainSamples> run_chains(const Dataset& data, const SplineSpec& spec,
                                     const PriorConfig& prior, const SamplerConfig& cfg,
                                     int threads = 1);

}  // namespace mixint
