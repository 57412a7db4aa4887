#include "mixint/basis.hpp"

#include <algorithm>
#include <cmath>

namespace mixint {

namespace {

double quantile_type7(std::vector<double> sorted, double prob) {
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - std::floor(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

// Interior knots at quantiles i/d, deduplicated and kept strictly inside
// the boundary.
Vector pick_knots(const Vector& z, int d, int* dropped) {
  std::vector<double> sorted(z.data(), z.data() + z.size());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  std::vector<double> interior;
  for (int i = 1; i < d; ++i) {
    double q = quantile_type7(sorted, static_cast<double>(i) / d);
    if (q > lo && q < hi) interior.push_back(q);
  }
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  if (dropped) *dropped += d - 1 - static_cast<int>(interior.size());
  Vector knots(interior.size() + 2);
  knots[0] = lo;
  for (std::size_t i = 0; i < interior.size(); ++i) knots[static_cast<Index>(i) + 1] = interior[i];
  knots[knots.size() - 1] = hi;
  return knots;
}

}  // namespace

bool SplineSpec::uniform_dof() const {
  for (int dj : dof)
    if (dj != d) return false;
  return true;
}

Matrix natural_cubic_columns(const Vector& x, const Vector& knots) {
  const Index n = x.size();
  const Index K = knots.size();
  Matrix out(n, K - 1);
  out.col(0) = x;
  if (K == 2) return out;
  const double tK = knots[K - 1];
  auto cube_pos = [](double v) { return v > 0 ? v * v * v : 0.0; };
  // d_k(x) = ((x - t_k)_+^3 - (x - t_K)_+^3) / (t_K - t_k)
  Vector dlast(n);
  const double tKm1 = knots[K - 2];
  for (Index i = 0; i < n; ++i)
    dlast[i] = (cube_pos(x[i] - tKm1) - cube_pos(x[i] - tK)) / (tK - tKm1);
  for (Index k = 0; k + 2 < K; ++k) {
    const double tk = knots[k];
    for (Index i = 0; i < n; ++i) {
      double dk = (cube_pos(x[i] - tk) - cube_pos(x[i] - tK)) / (tK - tk);
      out(i, k + 1) = dk - dlast[i];
    }
  }
  return out;
}

Matrix natural_spline_basis(const Vector& x, int d, int* dropped_knots) {
  if (d < 1) throw Error("natural_spline_basis: d must be >= 1");
  const Index n = x.size();
  double mean = x.mean();
  double var = (x.array() - mean).square().sum() / static_cast<double>(n > 1 ? n - 1 : 1);
  if (!(var > 0)) throw Error("natural_spline_basis: x is constant");
  double sd = std::sqrt(var);
  Vector z = (x.array() - mean) / sd;
  if (d == 1) return z;
  int dropped = 0;
  Vector knots = pick_knots(z, d, &dropped);
  if (dropped_knots) *dropped_knots = dropped;
  Matrix cols = natural_cubic_columns(z, knots);
  cols.rowwise() -= cols.colwise().mean();
  return cols;
}

Matrix tensor_columns(const std::vector<const Matrix*>& bases) {
  if (bases.empty()) throw Error("tensor_columns: empty basis list");
  const Index n = bases[0]->rows();
  Index total = 1;
  for (const Matrix* b : bases) {
    if (b->rows() != n) throw Error("tensor_columns: row mismatch across bases");
    total *= b->cols();
  }
  if (bases.size() == 1) return *bases[0];
  Matrix out(n, total);
  std::vector<Index> idx(bases.size(), 0);
  for (Index c = 0; c < total; ++c) {
    Vector col = bases[0]->col(idx[0]);
    for (std::size_t b = 1; b < bases.size(); ++b)
      col.array() *= bases[b]->col(idx[b]).array();
    out.col(c) = col;
    // advance mixed-radix counter, last basis fastest
    for (std::size_t b = bases.size(); b-- > 0;) {
      if (++idx[b] < bases[b]->cols()) break;
      idx[b] = 0;
    }
  }
  return out;
}

DesignBlock tensor_block(const std::vector<const Matrix*>& bases, const Subset& subset) {
  return DesignBlock{subset, tensor_columns(bases)};
}

SplineSpec make_spline_spec(const Dataset& data, int d) {
  if (d < 1) throw Error("spline spec: d must be >= 1");
  SplineSpec spec;
  spec.d = d;
  spec.scaler = Standardizer::fit(data.x);
  Matrix xs = spec.scaler.apply(data.x);
  const Index p = data.p();
  spec.dof.resize(static_cast<std::size_t>(p));
  spec.knots.resize(static_cast<std::size_t>(p));
  spec.centers.resize(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) {
    Vector z = xs.col(j);
    if (d == 1) {
      spec.dof[static_cast<std::size_t>(j)] = 1;
      spec.centers[static_cast<std::size_t>(j)] = Vector::Zero(1);
      continue;
    }
    int dropped = 0;
    Vector knots = pick_knots(z, d, &dropped);
    spec.dedup_warnings += dropped;
    Matrix cols = natural_cubic_columns(z, knots);
    spec.dof[static_cast<std::size_t>(j)] = static_cast<int>(cols.cols());
    spec.knots[static_cast<std::size_t>(j)] = knots;
    spec.centers[static_cast<std::size_t>(j)] = cols.colwise().mean();
  }
  return spec;
}

Matrix marginal_basis(const SplineSpec& spec, int j, const Vector& x_raw) {
  const auto ju = static_cast<std::size_t>(j);
  Vector z = (x_raw.array() - spec.scaler.mean[j]) / spec.scaler.sd[j];
  if (spec.dof[ju] == 1) return z;
  Matrix cols = natural_cubic_columns(z, spec.knots[ju]);
  cols.rowwise() -= spec.centers[ju].transpose();
  return cols;
}

std::vector<Matrix> marginal_bases(const SplineSpec& spec, const Matrix& x_raw) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(x_raw.cols()));
  for (Index j = 0; j < x_raw.cols(); ++j)
    out.push_back(marginal_basis(spec, static_cast<int>(j), x_raw.col(j)));
  return out;
}

Matrix block_from_marginals(const std::vector<Matrix>& bases, const Subset& subset) {
  std::vector<const Matrix*> parts;
  for (int j : subset.indices()) parts.push_back(&bases[static_cast<std::size_t>(j)]);
  return tensor_columns(parts);
}

std::vector<DesignBlock> design_for_set(const Subset& active, const SplineSpec& spec,
                                        const Dataset& data) {
  if (active.empty()) throw Error("design_for_set: empty exposure set");
  std::vector<Matrix> bases;
  bases.reserve(static_cast<std::size_t>(data.p()));
  for (Index j = 0; j < data.p(); ++j)
    bases.push_back(active.contains(static_cast<int>(j))
                        ? marginal_basis(spec, static_cast<int>(j), data.x.col(j))
                        : Matrix());
  std::vector<DesignBlock> out;
  for (const Subset& s : nonempty_subsets(active))
    out.push_back(DesignBlock{s, block_from_marginals(bases, s)});
  return out;
}

DesignCache::DesignCache(const Dataset& data, const SplineSpec& spec)
    : n_(data.n()), spec_(spec), bases_(marginal_bases(spec, data.x)) {}

Matrix DesignCache::build_block(const Subset& s) const {
  return block_from_marginals(bases_, s);
}

const Matrix& DesignCache::cached_block(const Subset& s) {
  auto it = block_cache_.find(s);
  if (it != block_cache_.end()) return it->second;
  return block_cache_.emplace(s, build_block(s)).first->second;
}

const Matrix& DesignCache::block_ref(const Subset& s, Matrix& scratch) {
  if (s.count() <= 2) return cached_block(s);
  scratch = build_block(s);
  return scratch;
}

const Matrix& DesignCache::pair_gram(const Subset& a, const Subset& b) {
  PairKey key{a, b};
  auto it = gram_cache_.find(key);
  if (it != gram_cache_.end()) return it->second;
  if (gram_cache_.size() >= kGramCacheCap) gram_cache_.clear();
  Matrix sa, sb;
  const Matrix& ba = block_ref(a, sa);
  const Matrix& bb = (a == b) ? ba : block_ref(b, sb);
  Matrix g = ba.transpose() * bb;
  return gram_cache_.emplace(key, std::move(g)).first->second;
}

int DesignCache::stacked_cols(const std::vector<Subset>& actives) const {
  int total = 0;
  for (const Subset& a : actives)
    if (!a.empty()) total += stacked_dim(a, spec_.dof);
  return total;
}

Matrix DesignCache::stacked_gram(const std::vector<Subset>& actives) {
  std::vector<std::pair<Subset, int>> layout;
  for (const Subset& a : actives) {
    if (a.empty()) continue;
    for (const auto& blk : subset_block_layout(a, spec_.dof)) layout.push_back(blk);
  }
  int q = 0;
  for (const auto& [s, cols] : layout) q += cols;
  Matrix g(q, q);
  int ro = 0;
  for (const auto& [sa, ca] : layout) {
    int co = 0;
    for (const auto& [sb, cb] : layout) {
      if (co >= ro) {
        g.block(ro, co, ca, cb) = pair_gram(sa, sb);
        if (co != ro) g.block(co, ro, cb, ca) = g.block(ro, co, ca, cb).transpose();
      }
      co += cb;
    }
    ro += ca;
  }
  return g;
}

Vector DesignCache::stacked_xty(const std::vector<Subset>& actives, const Vector& ystar) {
  Vector out(stacked_cols(actives));
  int off = 0;
  Matrix scratch;
  for (const Subset& a : actives) {
    if (a.empty()) continue;
    for (const auto& [s, cols] : subset_block_layout(a, spec_.dof)) {
      out.segment(off, cols).noalias() = block_ref(s, scratch).transpose() * ystar;
      off += cols;
    }
  }
  return out;
}

Vector DesignCache::apply_design(const std::vector<Subset>& actives, const Vector& beta) {
  Vector out = Vector::Zero(n_);
  int off = 0;
  Matrix scratch;
  for (const Subset& a : actives) {
    if (a.empty()) continue;
    for (const auto& [s, cols] : subset_block_layout(a, spec_.dof)) {
      out.noalias() += block_ref(s, scratch) * beta.segment(off, cols);
      off += cols;
    }
  }
  return out;
}

}  // namespace mixint
