#include "locus/numerics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>

namespace locus {

DimVector::DimVector(std::vector<int> d) : dims(std::move(d)) {
  if (dims.empty()) throw ShapeError("shape: DimVector must be non-empty");
  for (int n : dims)
    if (n < 2) throw ShapeError("shape: local dimensions must be >= 2");
}

long DimVector::product() const {
  long p = 1;
  for (int n : dims) p *= n;
  return p;
}

std::vector<int> index_to_digits(long index, const DimVector& dims) {
  const int k = dims.factor_count();
  std::vector<int> digits(static_cast<size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    digits[static_cast<size_t>(i)] = static_cast<int>(index % dims[i]);
    index /= dims[i];
  }
  return digits;
}

long digits_to_index(const std::vector<int>& digits, const DimVector& dims) {
  long index = 0;
  for (int i = 0; i < dims.factor_count(); ++i)
    index = index * dims[i] + digits[static_cast<size_t>(i)];
  return index;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

void check_square(const CMatrix& rho, const DimVector& dims) {
  if (rho.rows() != rho.cols() || rho.rows() != dims.product())
    throw ShapeError("shape: matrix side does not match factor dimensions");
}

std::vector<int> complement(const std::vector<int>& subset, int k) {
  std::vector<bool> in(static_cast<size_t>(k), false);
  for (int i : subset) {
    if (i < 0 || i >= k) throw ShapeError("shape: factor index out of range");
    in[static_cast<size_t>(i)] = true;
  }
  std::vector<int> out;
  for (int i = 0; i < k; ++i)
    if (!in[static_cast<size_t>(i)]) out.push_back(i);
  return out;
}

}  // namespace

CMatrix partial_trace(const CMatrix& rho, const DimVector& dims,
                      const std::vector<int>& keep) {
  check_square(rho, dims);
  if (keep.empty()) throw ShapeError("shape: must keep at least one factor");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw ShapeError("shape: duplicate factor index");
  const int k = dims.factor_count();
  const std::vector<int> traced = complement(kept, k);

  long dk = 1, dt = 1;
  for (int i : kept) dk *= dims[i];
  for (int i : traced) dt *= dims[i];

  CMatrix out = CMatrix::Zero(dk, dt > 0 ? dk : dk);
  out.setZero();

  // Walk (kept row, kept col, traced) triples and rebuild full indices.
  std::vector<int> digits(static_cast<size_t>(k));
  DimVector kept_dims, traced_dims;
  for (int i : kept) kept_dims.dims.push_back(dims[i]);
  for (int i : traced) traced_dims.dims.push_back(dims[i]);

  for (long r = 0; r < dk; ++r) {
    const auto rd = kept_dims.dims.empty()
                        ? std::vector<int>{}
                        : index_to_digits(r, kept_dims);
    for (long c = 0; c < dk; ++c) {
      const auto cd = index_to_digits(c, kept_dims);
      Complex sum = 0.0;
      for (long t = 0; t < dt; ++t) {
        const auto td = traced.empty() ? std::vector<int>{}
                                       : index_to_digits(t, traced_dims);
        std::vector<int> row(static_cast<size_t>(k)), col(static_cast<size_t>(k));
        for (size_t i = 0; i < kept.size(); ++i) {
          row[static_cast<size_t>(kept[i])] = rd[i];
          col[static_cast<size_t>(kept[i])] = cd[i];
        }
        for (size_t i = 0; i < traced.size(); ++i) {
          row[static_cast<size_t>(traced[i])] = td[i];
          col[static_cast<size_t>(traced[i])] = td[i];
        }
        sum += rho(digits_to_index(row, dims), digits_to_index(col, dims));
      }
      out(r, c) = sum;
    }
  }
  return out;
}

CMatrix partial_transpose(const CMatrix& rho, const DimVector& dims,
                          const std::vector<int>& subset) {
  check_square(rho, dims);
  const int k = dims.factor_count();
  std::vector<bool> flip(static_cast<size_t>(k), false);
  for (int i : subset) {
    if (i < 0 || i >= k) throw ShapeError("shape: factor index out of range");
    flip[static_cast<size_t>(i)] = true;
  }
  const long n = dims.product();
  CMatrix out(n, n);
  for (long r = 0; r < n; ++r) {
    auto rd = index_to_digits(r, dims);
    for (long c = 0; c < n; ++c) {
      auto cd = index_to_digits(c, dims);
      auto rr = rd, cc = cd;
      for (int i = 0; i < k; ++i)
        if (flip[static_cast<size_t>(i)]) std::swap(rr[static_cast<size_t>(i)], cc[static_cast<size_t>(i)]);
      out(digits_to_index(rr, dims), digits_to_index(cc, dims)) = rho(r, c);
    }
  }
  return out;
}

CMatrix permute_factors(const CMatrix& m, const DimVector& dims,
                        const std::vector<int>& new_order) {
  check_square(m, dims);
  const int k = dims.factor_count();
  if (static_cast<int>(new_order.size()) != k)
    throw ShapeError("shape: permutation length mismatch");
  DimVector new_dims;
  for (int i : new_order) new_dims.dims.push_back(dims[i]);
  const long n = dims.product();
  std::vector<long> to_old(static_cast<size_t>(n));
  for (long idx = 0; idx < n; ++idx) {
    auto nd = index_to_digits(idx, new_dims);
    std::vector<int> od(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j)
      od[static_cast<size_t>(new_order[static_cast<size_t>(j)])] = nd[static_cast<size_t>(j)];
    to_old[static_cast<size_t>(idx)] = digits_to_index(od, dims);
  }
  CMatrix out(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c)
      out(r, c) = m(to_old[static_cast<size_t>(r)], to_old[static_cast<size_t>(c)]);
  return out;
}

namespace {

// JacobiSVD: BDCSVD can return a non-unitary V for complex input, which
// silently corrupts nullspace bases. Matrices here are small enough.
Eigen::JacobiSVD<CMatrix> svd_of(const CMatrix& m, unsigned options) {
  Eigen::JacobiSVD<CMatrix> svd(m, options);
  return svd;
}

double rank_threshold(const Eigen::VectorXd& sv, double eps) {
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  // Absolute floor: callers feed matrices built from unit-norm columns, so a
  // top singular value far below 1 is roundoff, not structure.
  return eps * std::max(top, 1.0);
}

}  // namespace

int numerical_rank(const CMatrix& m, double eps) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (m.size() == 0) return 0;
  auto svd = svd_of(m, 0);
  const auto& sv = svd.singularValues();
  const double thr = rank_threshold(sv, eps);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return r;
}

CMatrix nullspace(const CMatrix& m, double eps) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  auto svd = svd_of(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = rank_threshold(sv, eps);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

CMatrix column_span(const CMatrix& cols, double eps) {
  if (cols.cols() == 0) return CMatrix(cols.rows(), 0);
  auto svd = svd_of(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double thr = rank_threshold(sv, eps);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return svd.matrixU().leftCols(r);
}

CMatrix reshape_cut(const CVector& psi, const DimVector& dims,
                    const std::vector<int>& left) {
  if (psi.size() != dims.product())
    throw ShapeError("shape: vector length does not match dimensions");
  const int k = dims.factor_count();
  if (left.empty()) throw ShapeError("shape: empty left factor set");
  std::vector<int> ls = left;
  std::sort(ls.begin(), ls.end());
  if (std::adjacent_find(ls.begin(), ls.end()) != ls.end())
    throw ShapeError("shape: duplicate factor index");
  const std::vector<int> rs = complement(ls, k);
  if (rs.empty()) throw ShapeError("shape: left set must be a proper subset");

  DimVector ld, rd;
  for (int i : ls) ld.dims.push_back(dims[i]);
  for (int i : rs) rd.dims.push_back(dims[i]);
  CMatrix out(ld.product(), rd.product());
  for (long r = 0; r < out.rows(); ++r) {
    auto rdg = index_to_digits(r, ld);
    for (long c = 0; c < out.cols(); ++c) {
      auto cdg = index_to_digits(c, rd);
      std::vector<int> full(static_cast<size_t>(k));
      for (size_t i = 0; i < ls.size(); ++i) full[static_cast<size_t>(ls[i])] = rdg[i];
      for (size_t i = 0; i < rs.size(); ++i) full[static_cast<size_t>(rs[i])] = cdg[i];
      out(r, c) = psi(digits_to_index(full, dims));
    }
  }
  return out;
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return svd_of(m, 0).singularValues()(0);
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace locus
