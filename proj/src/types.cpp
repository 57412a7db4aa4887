#include "mixint/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mixint {

std::vector<Subset> nonempty_subsets(const Subset& a) {
  auto idx = a.indices();
  int nbits = static_cast<int>(idx.size());
  std::vector<Subset> out;
  out.reserve((std::size_t{1} << nbits) - 1);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << nbits); ++mask) {
    Subset s;
    for (int b = 0; b < nbits; ++b)
      if ((mask >> b) & 1u) s = s.with(idx[static_cast<std::size_t>(b)]);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), Subset::size_lex_less);
  return out;
}

std::vector<Subset> proper_subsets(const Subset& a) {
  auto idx = a.indices();
  int nbits = static_cast<int>(idx.size());
  std::vector<Subset> out;
  for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << nbits); ++mask) {
    Subset s;
    for (int b = 0; b < nbits; ++b)
      if ((mask >> b) & 1u) s = s.with(idx[static_cast<std::size_t>(b)]);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), Subset::size_lex_less);
  return out;
}

Dataset validate_dataset(Dataset raw) {
  const Index n = raw.y.size();
  if (n < 1) throw Error("dataset: outcome has length 0");
  if (raw.x.cols() < 1) throw Error("dataset: no exposure columns");
  if (raw.x.rows() != n) {
    std::ostringstream os;
    os << "dataset: outcome length " << n << " but exposure matrix has " << raw.x.rows()
       << " rows";
    throw Error(os.str());
  }
  if (raw.c.size() != 0 && raw.c.rows() != n) {
    std::ostringstream os;
    os << "dataset: outcome length " << n << " but covariate matrix has " << raw.c.rows()
       << " rows";
    throw Error(os.str());
  }
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(raw.y[i])) {
      std::ostringstream os;
      os << "dataset: non-finite outcome at row " << i + 1;
      throw Error(os.str());
    }
  }
  for (Index j = 0; j < raw.x.cols(); ++j) {
    for (Index i = 0; i < n; ++i) {
      if (!std::isfinite(raw.x(i, j))) {
        std::ostringstream os;
        os << "dataset: non-finite exposure at row " << i + 1 << ", column " << j + 1;
        throw Error(os.str());
      }
    }
    double lo = raw.x.col(j).minCoeff(), hi = raw.x.col(j).maxCoeff();
    if (lo == hi) {
      std::ostringstream os;
      os << "dataset: exposure column " << j + 1;
      if (static_cast<std::size_t>(j) < raw.exposure_names.size())
        os << " (" << raw.exposure_names[static_cast<std::size_t>(j)] << ")";
      os << " is constant";
      throw Error(os.str());
    }
  }
  for (Index j = 0; j < raw.m(); ++j) {
    for (Index i = 0; i < n; ++i) {
      if (!std::isfinite(raw.c(i, j))) {
        std::ostringstream os;
        os << "dataset: non-finite covariate at row " << i + 1 << ", column " << j + 1;
        throw Error(os.str());
      }
    }
  }
  return raw;
}

PriorConfig PriorConfig::resolved(Index p) const {
  PriorConfig out = *this;
  if (out.gamma < 0) out.gamma = static_cast<double>(p);
  if (out.k <= 0) out.k = static_cast<int>(std::min<Index>(p, 20));
  if (!(out.M > 0) || !(out.gamma > 0) || !(out.a0 > 0) || !(out.b0 > 0) ||
      !(out.sigma_beta2 > 0) || !(out.beta_c_prior_variance > 0) || out.k < 1) {
    throw Error("prior config: all fields must be strictly positive and k >= 1");
  }
  return out;
}

IntMatrix ZetaMatrix::to_matrix() const {
  IntMatrix zm = IntMatrix::Zero(p_, k());
  for (int h = 0; h < k(); ++h)
    for (int j : sets_[static_cast<std::size_t>(h)].indices()) zm(j, h) = 1;
  return zm;
}

ZetaMatrix ZetaMatrix::from_matrix(const IntMatrix& zm) {
  ZetaMatrix z(static_cast<int>(zm.rows()), static_cast<int>(zm.cols()));
  for (int h = 0; h < zm.cols(); ++h) {
    Subset s;
    for (int j = 0; j < zm.rows(); ++j) {
      if (zm(j, h) != 0 && zm(j, h) != 1) throw Error("zeta matrix entries must be binary");
      if (zm(j, h) == 1) s = s.with(j);
    }
    z.set_active(h, s);
  }
  return z;
}

bool check_zeta_constraint(const ZetaMatrix& zeta) {
  const int k = zeta.k();
  for (int h = 0; h < k; ++h) {
    const Subset& a = zeta.active_set(h);
    if (a.empty()) continue;
    for (int g = 0; g < k; ++g) {
      if (g == h) continue;
      if (a.subset_of(zeta.active_set(g))) return false;
    }
  }
  return true;
}

std::vector<std::pair<Subset, int>> subset_block_layout(const Subset& active,
                                                        const std::vector<int>& dof) {
  std::vector<std::pair<Subset, int>> out;
  for (const Subset& s : nonempty_subsets(active)) {
    int cols = 1;
    for (int j : s.indices()) cols *= dof[static_cast<std::size_t>(j)];
    out.emplace_back(s, cols);
  }
  return out;
}

int stacked_dim(const Subset& active, const std::vector<int>& dof) {
  int total = 0;
  for (const auto& [s, cols] : subset_block_layout(active, dof)) total += cols;
  return total;
}

Eigen::VectorBlock<const Vector> ModelState::beta_block(int h, const Subset& s,
                                                        const std::vector<int>& dof) const {
  const FunctionCoeffs& fc = funcs[static_cast<std::size_t>(h)];
  if (s.empty() || !s.subset_of(fc.active))
    throw Error("beta_block: subset is not a nonempty subset of the active set");
  Index offset = 0;
  for (const auto& [sub, cols] : subset_block_layout(fc.active, dof)) {
    if (sub == s) return fc.coef.segment(offset, cols);
    offset += cols;
  }
  throw Error("beta_block: layout lookup failed");
}

ModelState make_initial_state(int p, int k, Index m_cov, double tau0, double sigma2_0) {
  ModelState st;
  st.zeta = ZetaMatrix(p, k);
  st.funcs.assign(static_cast<std::size_t>(k), FunctionCoeffs{});
  st.beta_c = Vector::Zero(m_cov + 1);
  st.sigma2 = sigma2_0;
  st.tau = Vector::Constant(k, tau0);
  return st;
}

bool audit_state(const ModelState& state, const std::vector<int>& dof,
                 ViolationCounters& counters) {
  bool clean = true;
  if (!check_zeta_constraint(state.zeta)) {
    ++counters.zeta_constraint;
    clean = false;
  }
  for (int h = 0; h < state.zeta.k(); ++h) {
    const FunctionCoeffs& fc = state.funcs[static_cast<std::size_t>(h)];
    bool ok = fc.active == state.zeta.active_set(h);
    if (ok) {
      if (fc.active.empty()) {
        ok = fc.coef.size() == 0;
      } else {
        ok = fc.coef.size() == stacked_dim(fc.active, dof);
      }
    }
    if (!ok) {
      ++counters.beta_closure;
      clean = false;
    }
  }
  if (!(state.sigma2 > 0) || !std::isfinite(state.sigma2)) {
    ++counters.sigma2_range;
    clean = false;
  }
  for (Index h = 0; h < state.tau.size(); ++h) {
    if (!(state.tau[h] > 0.0 && state.tau[h] < 1.0)) {
      ++counters.tau_range;
      clean = false;
      break;
    }
  }
  return clean;
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  const Index n = x.rows();
  s.mean = x.colwise().mean();
  s.sd = Vector(x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    double var = (x.col(j).array() - s.mean[j]).square().sum() / static_cast<double>(n - 1);
    s.sd[j] = std::sqrt(var);
    if (!(s.sd[j] > 0)) s.sd[j] = 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
  Matrix out = x;
  for (Index j = 0; j < x.cols(); ++j)
    out.col(j) = (x.col(j).array() - mean[j]) / sd[j];
  return out;
}

}  // namespace mixint
