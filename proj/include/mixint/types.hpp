#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mixint/subset.hpp"

namespace mixint {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntMatrix = Eigen::MatrixXi;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outcome vector, exposure matrix and optional covariate matrix.
struct Dataset {
  Vector y;   // length n
  Matrix x;   // n x p exposures
  Matrix c;   // n x m covariates, m may be 0
  std::vector<std::string> exposure_names;
  std::vector<std::string> covariate_names;
  std::string outcome_name = "y";

  Index n() const { return y.size(); }
  Index p() const { return x.cols(); }
  Index m() const { return c.size() == 0 ? 0 : c.cols(); }
};

/// Checks dimensions, finiteness and non-constant exposure columns.
/// Returns the dataset unchanged when everything holds, throws Error
/// with the offending row/column otherwise.
Dataset validate_dataset(Dataset raw);

struct PriorConfig {
  double M = 1.0;
  double gamma = -1.0;  // < 0 means "use p"
  double a0 = 0.001;
  double b0 = 0.001;
  int k = 0;  // 0 means "use min(p, 20)"
  double sigma_beta2 = 1.0;
  double beta_c_prior_variance = 1e6;

  /// Resolves data-dependent defaults and validates positivity.
  PriorConfig resolved(Index p) const;
};

/// p x k binary inclusion matrix, stored as per-function active sets.
class ZetaMatrix {
 public:
  ZetaMatrix() : p_(0) {}
  ZetaMatrix(int p, int k) : p_(p), sets_(static_cast<std::size_t>(k)) {}

  int p() const { return p_; }
  int k() const { return static_cast<int>(sets_.size()); }

  bool entry(int j, int h) const { return sets_[static_cast<std::size_t>(h)].contains(j); }
  const Subset& active_set(int h) const { return sets_[static_cast<std::size_t>(h)]; }
  void set_active(int h, const Subset& s) { sets_[static_cast<std::size_t>(h)] = s; }

  int n_active_functions() const {
    int c = 0;
    for (const auto& s : sets_) c += !s.empty();
    return c;
  }

  IntMatrix to_matrix() const;
  static ZetaMatrix from_matrix(const IntMatrix& zm);

  bool operator==(const ZetaMatrix&) const = default;

 private:
  int p_;
  std::vector<Subset> sets_;
};

/// True iff no nonempty active set is contained in (or equal to) another.
bool check_zeta_constraint(const ZetaMatrix& zeta);

/// Per-subset block sizes for the stacked coefficient vector of an active
/// set, in size-lex subset order. `dof[j]` is the marginal basis dimension
/// of exposure j.
std::vector<std::pair<Subset, int>> subset_block_layout(const Subset& active,
                                                        const std::vector<int>& dof);

int stacked_dim(const Subset& active, const std::vector<int>& dof);

/// Coefficients of one function: the active set plus the stacked vector
/// over all nonempty subsets of it. Empty active set means no coefficients.
struct FunctionCoeffs {
  Subset active;
  Vector coef;
};

/// Everything sampled at one MCMC iteration.
struct ModelState {
  ZetaMatrix zeta;
  std::vector<FunctionCoeffs> funcs;  // one per function
  Vector beta_c;                      // intercept first, then covariates
  double sigma2 = 1.0;
  Vector tau;                         // length k, each in (0,1)

  /// View of the coefficient block for subset `s` of function `h`.
  /// Throws if `s` is not a nonempty subset of the active set.
  Eigen::VectorBlock<const Vector> beta_block(int h, const Subset& s,
                                              const std::vector<int>& dof) const;
};

ModelState make_initial_state(int p, int k, Index m_cov, double tau0, double sigma2_0);

struct ViolationCounters {
  long zeta_constraint = 0;
  long beta_closure = 0;
  long tau_range = 0;
  long sigma2_range = 0;

  long total() const { return zeta_constraint + beta_closure + tau_range + sigma2_range; }
  ViolationCounters& operator+=(const ViolationCounters& o) {
    zeta_constraint += o.zeta_constraint;
    beta_closure += o.beta_closure;
    tau_range += o.tau_range;
    sigma2_range += o.sigma2_range;
    return *this;
  }
};

/// Checks the state invariants (constraint, subset closure of coefficient
/// blocks, parameter ranges) and bumps counters for anything violated.
/// Returns true when clean.
bool audit_state(const ModelState& state, const std::vector<int>& dof,
                 ViolationCounters& counters);

/// Column-wise standardization to mean 0 / variance 1.
struct Standardizer {
  Vector mean;
  Vector sd;

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
  double apply_one(Index col, double v) const { return (v - mean[col]) / sd[col]; }
  double invert_one(Index col, double v) const { return v * sd[col] + mean[col]; }
};

/// Thinned post-burn-in draws of one chain plus per-observation log
/// densities and fitted f values (rows follow `draws`).
struct ChainSamples {
  std::vector<ModelState> draws;
  Matrix loglik;  // S x n
  Matrix fvals;   // S x n
  int chain_id = 0;
  std::uint64_t rng_seed = 0;

  ViolationCounters violations;
  long saturation_events = 0;
  long mh_attempts = 0;
  long mh_accepts = 0;
  long asymmetric_rejects = 0;
  long symmetry_fallbacks = 0;
  long skipped_no_slot = 0;
  long multi_decomposition_events = 0;
};

}  // namespace mixint
