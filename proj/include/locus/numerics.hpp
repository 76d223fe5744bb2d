#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex-matrix primitives shared by the whole library: Kronecker
// products, partial traces, rank/nullspace decisions and mixed-radix
// reshaping. Every tolerance-sensitive decision elsewhere routes through
// numerical_rank / nullspace so the threshold policy lives here.
//
// Mixed-radix convention: factor 0 is the most significant digit
// (row-major). The Svozil basis partitions in tps.hpp depend on this.

namespace locus {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Global default tolerance, relative to the largest singular value.
inline constexpr double kEps = 1e-9;

// Absolute tolerance for expectation-value factorization defects.
inline constexpr double kEpsRel = 1e-8;

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Ordered local dimensions n_1,...,n_k, each >= 2 (a single factor [n] is
// allowed and plays the role of the trivial factorization).
struct DimVector {
  std::vector<int> dims;

  DimVector() = default;
  explicit DimVector(std::vector<int> d);

  long product() const;
  int factor_count() const { return static_cast<int>(dims.size()); }
  int operator[](int i) const { return dims[static_cast<size_t>(i)]; }
  bool operator==(const DimVector& o) const { return dims == o.dims; }
};

// index <-> digit tuple under the row-major convention above.
std::vector<int> index_to_digits(long index, const DimVector& dims);
long digits_to_index(const std::vector<int>& digits, const DimVector& dims);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Reduce rho onto the factors listed in `keep` (ascending order in the
// output); the complementary factors are traced out.
CMatrix partial_trace(const CMatrix& rho, const DimVector& dims,
                      const std::vector<int>& keep);

// Transpose the factors listed in `subset`, leave the rest alone.
CMatrix partial_transpose(const CMatrix& rho, const DimVector& dims,
                          const std::vector<int>& subset);

// Reorder tensor factors: new_order[j] names the original factor that sits
// at slot j afterwards. Acts by conjugation with a permutation matrix.
CMatrix permute_factors(const CMatrix& m, const DimVector& dims,
                        const std::vector<int>& new_order);

// Singular values > eps * (largest singular value, or 1 if all vanish).
int numerical_rank(const CMatrix& m, double eps = kEps);

// Orthonormal kernel basis as columns, same threshold rule as
// numerical_rank. Empty (0-column) matrix when the kernel is trivial.
CMatrix nullspace(const CMatrix& m, double eps = kEps);

// Orthonormal basis of the column span, as columns.
CMatrix column_span(const CMatrix& cols, double eps = kEps);

// Coefficient matrix of psi across the cut left | complement; its
// numerical_rank is the Schmidt rank across that cut.
CMatrix reshape_cut(const CVector& psi, const DimVector& dims,
                    const std::vector<int>& left);

double spectral_norm(const CMatrix& m);

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol = 1e-9);

}  // namespace locus
