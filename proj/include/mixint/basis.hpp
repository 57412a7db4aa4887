#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "mixint/types.hpp"

namespace mixint {

/// Marginal basis setup shared by every exposure: requested degrees of
/// freedom, realized per-exposure dimensions, knot locations on the
/// standardized scale and the training column means used for centering.
struct SplineSpec {
  int d = 3;
  Standardizer scaler;
  std::vector<int> dof;        // realized dof per exposure
  std::vector<Vector> knots;   // all knots (boundary included), standardized scale; empty when dof == 1
  std::vector<Vector> centers; // training column means, subtracted at evaluation
  int dedup_warnings = 0;

  Index p() const { return static_cast<Index>(dof.size()); }
  bool uniform_dof() const;
};

/// Natural cubic spline basis of `x` with `d` degrees of freedom: interior
/// knots at equally spaced quantiles, boundary knots at min/max, columns
/// centered to mean zero. d = 1 gives the standardized linear column.
/// Coincident quantile knots are dropped, shrinking the basis; the number
/// of dropped knots is reported through `dropped_knots` when non-null.
Matrix natural_spline_basis(const Vector& x, int d, int* dropped_knots = nullptr);

/// Raw (uncentered) natural cubic basis over given knots; `knots` holds all
/// knot locations in ascending order, boundary first/last. Returns
/// knots.size() - 1 columns: x itself, then the constrained cubic terms.
Matrix natural_cubic_columns(const Vector& x, const Vector& knots);

struct DesignBlock {
  Subset subset;
  Matrix columns;
};

/// All elementwise products taking one column from each basis, in
/// lexicographic order of per-basis column indices (first basis slowest).
Matrix tensor_columns(const std::vector<const Matrix*>& bases);

DesignBlock tensor_block(const std::vector<const Matrix*>& bases, const Subset& subset);

/// Fits knots/centers on the (validated) dataset's exposures.
SplineSpec make_spline_spec(const Dataset& data, int d);

/// Centered marginal basis of exposure `j` evaluated at raw values.
Matrix marginal_basis(const SplineSpec& spec, int j, const Vector& x_raw);

/// Marginal bases for all exposures at the given raw exposure matrix.
std::vector<Matrix> marginal_bases(const SplineSpec& spec, const Matrix& x_raw);

/// One DesignBlock per nonempty subset of `active`, in size-lex order.
std::vector<DesignBlock> design_for_set(const Subset& active, const SplineSpec& spec,
                                        const Dataset& data);

Matrix block_from_marginals(const std::vector<Matrix>& bases, const Subset& subset);

/// Training-data design assembly with block and Gram caching. Blocks of
/// order <= 2 are cached permanently, higher orders are rebuilt on demand.
/// Gram entries are cached for any block pair.
class DesignCache {
 public:
  DesignCache(const Dataset& data, const SplineSpec& spec);

  Index n() const { return n_; }
  const SplineSpec& spec() const { return spec_; }
  const std::vector<int>& dof() const { return spec_.dof; }
  const Matrix& marginal(int j) const { return bases_[static_cast<std::size_t>(j)]; }

  Matrix build_block(const Subset& s) const;

  /// Gram matrix of the stacked design over the given active sets
  /// (functions in order, size-lex subsets within each).
  Matrix stacked_gram(const std::vector<Subset>& actives);

  Vector stacked_xty(const std::vector<Subset>& actives, const Vector& ystar);

  /// Stacked design times a stacked coefficient vector.
  Vector apply_design(const std::vector<Subset>& actives, const Vector& beta);

  int stacked_cols(const std::vector<Subset>& actives) const;

 private:
  const Matrix& cached_block(const Subset& s);
  // Reference into the cache for low-order blocks, otherwise builds into
  // `scratch` and returns that.
  const Matrix& block_ref(const Subset& s, Matrix& scratch);
  const Matrix& pair_gram(const Subset& a, const Subset& b);

  Index n_;
  SplineSpec spec_;
  std::vector<Matrix> bases_;
  std::unordered_map<Subset, Matrix, Subset::Hash> block_cache_;

  struct PairKey {
    Subset a, b;
    bool operator==(const PairKey&) const = default;
  };
  struct PairHash {
    std::size_t operator()(const PairKey& k) const {
      return Subset::Hash{}(k.a) * 1315423911u ^ Subset::Hash{}(k.b);
    }
  };
  std::unordered_map<PairKey, Matrix, PairHash> gram_cache_;
  static constexpr std::size_t kGramCacheCap = 4096;
};

}  // namespace mixint
