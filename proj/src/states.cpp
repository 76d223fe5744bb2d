#include "locus/states.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace locus {

namespace {

constexpr double kPsdSlack = 1e-8;

void validate_density(const CMatrix& rho) {
  if (rho.rows() != rho.cols())
    throw ShapeError("shape: density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 ||
      std::abs(rho.trace().imag()) > 1e-9)
    throw std::invalid_argument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.eigenvalues().minCoeff() < -kPsdSlack)
    throw std::invalid_argument("density matrix is not positive semidefinite");
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

State State::density(CMatrix rho, std::string name) {
  validate_density(rho);
  State s;
  s.rho = std::move(rho);
  s.kind = StateKind::QuantumDensity;
  s.name = std::move(name);
  return s;
}

State State::pure(CVector psi, std::string name) {
  const double nrm = psi.norm();
  if (nrm <= 0.0) throw std::invalid_argument("pure state vector is zero");
  psi /= nrm;
  State s;
  s.rho = psi * psi.adjoint();
  s.kind = StateKind::QuantumPure;
  s.pure_vector = std::move(psi);
  s.name = std::move(name);
  return s;
}

State classical_embed(const RVector& p, std::string name) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -1e-12)
      throw std::invalid_argument("probability vector has a negative entry");
    sum += p(i);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("probability vector does not sum to 1");
  State s;
  s.rho = CMatrix::Zero(p.size(), p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) s.rho(i, i) = std::max(p(i), 0.0);
  s.kind = StateKind::ClassicalDiagonal;
  s.name = std::move(name);
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Product: return "product";
    case Verdict::Separable: return "separable";
    case Verdict::Entangled: return "entangled";
    default: return "undetermined";
  }
}

Complex expect(const State& rho, const CMatrix& a) {
  if (a.rows() != rho.dim() || a.cols() != rho.dim())
    throw ShapeError("shape: observable size mismatch");
  return (rho.rho * a).trace();
}

namespace {

CMatrix twisted_rho(const State& rho, const TpsSpec& tps) {
  if (rho.dim() != tps.ambient_dim())
    throw ShapeError("shape: state does not match TPS ambient dimension");
  return tps.unitary.adjoint() * rho.rho * tps.unitary;
}

void check_partition(const TpsSpec& tps, const Partition& sigma) {
  if (sigma.ground_size != tps.factor_count())
    throw ShapeError("shape: partition over wrong index set");
}

std::optional<CVector> pure_vector_of(const State& rho, const TpsSpec& tps) {
  if (rho.kind == StateKind::QuantumPure && rho.pure_vector)
    return (tps.unitary.adjoint() * (*rho.pure_vector)).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.rho);
  const auto& ev = es.eigenvalues();
  if (ev.maxCoeff() < 1.0 - 1e-9) return std::nullopt;  // genuinely mixed
  CVector psi = es.eigenvectors().col(ev.size() - 1);
  return (tps.unitary.adjoint() * psi).eval();
}

// Tensor product of the block marginals, permuted back to natural factor
// order for direct comparison with the twisted state.
CMatrix block_marginal_product(const CMatrix& rt, const TpsSpec& tps,
                               const Partition& sigma) {
  std::vector<int> order;
  for (const auto& b : sigma.blocks) order.insert(order.end(), b.begin(), b.end());
  CMatrix prod = CMatrix::Identity(1, 1);
  for (const auto& b : sigma.blocks)
    prod = kron(prod, partial_trace(rt, tps.dims, b));
  DimVector fine;
  for (int f : order) fine.dims.push_back(tps.dims[f]);
  std::vector<int> back(order.size());
  for (size_t j = 0; j < order.size(); ++j) back[static_cast<size_t>(order[j])] = static_cast<int>(j);
  return permute_factors(prod, fine, back);
}

}  // namespace

SeparabilityVerdict is_sigma_product(const State& rho, const TpsSpec& tps,
                                     const Partition& sigma) {
  check_partition(tps, sigma);
  if (sigma.block_count() == 1) return {Verdict::Product, "single block", 0.0};

  if (auto psi = pure_vector_of(rho, tps)) {
    for (const auto& block : sigma.blocks) {
      const CMatrix cut = reshape_cut(*psi, tps.dims, block);
      const int r = numerical_rank(cut);
      if (r > 1) {
        std::ostringstream w;
        w << "Schmidt rank " << r << " across cut {";
        for (size_t i = 0; i < block.size(); ++i)
          w << (i ? " " : "") << block[i];
        w << "}";
        return {Verdict::Entangled, w.str(), static_cast<double>(r)};
      }
    }
    return {Verdict::Product, "", 0.0};
  }

  const CMatrix rt = twisted_rho(rho, tps);
  const CMatrix prod = block_marginal_product(rt, tps, sigma);
  const double diff = (rt - prod).cwiseAbs().maxCoeff();
  if (diff <= 1e-8) return {Verdict::Product, "", diff};
  return {Verdict::Entangled, "state differs from product of its block marginals",
          diff};
}

SeparabilityVerdict is_sigma_separable(const State& rho, const TpsSpec& tps,
                                       const Partition& sigma) {
  check_partition(tps, sigma);
  const int m = sigma.block_count();
  if (m == 1) return {Verdict::Product, "single block", 0.0};

  if (pure_vector_of(rho, tps)) {
    auto v = is_sigma_product(rho, tps, sigma);
    return v;  // for pure states separable iff product
  }

  // A mixed state equal to the tensor product of its block marginals is
  // separable regardless of the PPT-conclusive regime.
  if (auto prod = is_sigma_product(rho, tps, sigma);
      prod.value == Verdict::Product)
    return prod;

  const CMatrix rt = twisted_rho(rho, tps);

  // PPT across every bipartition of sigma's blocks (block 0 stays on the
  // untransposed side, so each split appears once).
  for (unsigned mask = 1; mask < (1u << (m - 1)); ++mask) {
    std::vector<int> group;
    for (int b = 1; b < m; ++b)
      if (mask & (1u << (b - 1)))
        group.insert(group.end(), sigma.blocks[static_cast<size_t>(b)].begin(),
                     sigma.blocks[static_cast<size_t>(b)].end());
    const CMatrix pt = partial_transpose(rt, tps.dims, group);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(pt));
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev < -kEps) {
      std::ostringstream w;
      w << "negative partial-transpose eigenvalue " << min_ev
        << " when transposing factors {";
      for (size_t i = 0; i < group.size(); ++i) w << (i ? " " : "") << group[i];
      w << "}";
      return {Verdict::Entangled, w.str(), min_ev};
    }
  }

  if (m == 2) {
    long d0 = 1, d1 = 1;
    for (int f : sigma.blocks[0]) d0 *= tps.dims[f];
    for (int f : sigma.blocks[1]) d1 *= tps.dims[f];
    const long lo = std::min(d0, d1), hi = std::max(d0, d1);
    if (lo == 2 && (hi == 2 || hi == 3))
      return {Verdict::Separable,
              "partial transpose nonnegative; conclusive in 2x2/2x3", 0.0};
  }
  return {Verdict::Undetermined,
          "partial transpose nonnegative but regime is not conclusive", 0.0};
}

// ---------------------------------------------------------------------------
// Explicit decomposition search.

namespace {

struct BlockFrame {
  std::vector<int> order;   // factors in block-concatenated order
  DimVector block_dims;     // one dimension per block
  DimVector fine_dims;      // factor dims in block order
};

BlockFrame make_frame(const TpsSpec& tps, const Partition& sigma) {
  BlockFrame f;
  for (const auto& b : sigma.blocks) {
    long m = 1;
    for (int i : b) {
      f.order.push_back(i);
      f.fine_dims.dims.push_back(tps.dims[i]);
      m *= tps.dims[i];
    }
    f.block_dims.dims.push_back(static_cast<int>(m));
  }
  return f;
}

// Contract away block `b` of M against |psi><psi|, leaving an operator on
// the remaining blocks.
CMatrix contract_block(const CMatrix& m, const DimVector& bd, int block,
                       const CVector& psi) {
  DimVector rest;
  for (int i = 0; i < bd.factor_count(); ++i)
    if (i != block) rest.dims.push_back(bd[i]);
  const long nr = rest.dims.empty() ? 1 : rest.product();
  const int d = bd[block];
  CMatrix out = CMatrix::Zero(nr, nr);
  for (long r = 0; r < nr; ++r) {
    auto rd = rest.dims.empty() ? std::vector<int>{} : index_to_digits(r, rest);
    for (long c = 0; c < nr; ++c) {
      auto cd = rest.dims.empty() ? std::vector<int>{} : index_to_digits(c, rest);
      Complex sum = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b2 = 0; b2 < d; ++b2) {
          std::vector<int> fr, fc;
          int pos = 0;
          for (int i = 0; i < bd.factor_count(); ++i) {
            if (i == block) {
              fr.push_back(a);
              fc.push_back(b2);
            } else {
              fr.push_back(rd[static_cast<size_t>(pos)]);
              fc.push_back(cd[static_cast<size_t>(pos)]);
              ++pos;
            }
          }
          sum += std::conj(psi(a)) * m(digits_to_index(fr, bd), digits_to_index(fc, bd)) * psi(b2);
        }
      out(r, c) = sum;
    }
  }
  return out;
}

CMatrix atom_matrix(const std::vector<CMatrix>& factors) {
  CMatrix full = CMatrix::Identity(1, 1);
  for (const auto& f : factors) full = kron(full, f);
  return full;
}

// Best product pure state aligned with the residual: alternating top-eigen
// sweeps from a random product start.
std::vector<CMatrix> best_atom(const CMatrix& residual, const DimVector& bd,
                               std::mt19937& rng, double& score) {
  const int m = bd.factor_count();
  std::normal_distribution<double> gauss;
  std::vector<CVector> best;
  score = -1e300;
  for (int restart = 0; restart < 6; ++restart) {
    std::vector<CVector> psis;
    for (int b = 0; b < m; ++b) {
      CVector v(bd[b]);
      for (int i = 0; i < bd[b]; ++i) v(i) = Complex(gauss(rng), gauss(rng));
      psis.push_back(v.normalized());
    }
    double val = 0.0;
    for (int sweep = 0; sweep < 40; ++sweep) {
      for (int b = 0; b < m; ++b) {
        CMatrix reduced = residual;
        DimVector cur = bd;
        for (int c = m - 1; c >= 0; --c) {
          if (c == b) continue;
          reduced = contract_block(reduced, cur, c, psis[static_cast<size_t>(c)]);
          cur.dims.erase(cur.dims.begin() + c);
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(reduced));
        const auto& ev = es.eigenvalues();
        psis[static_cast<size_t>(b)] = es.eigenvectors().col(ev.size() - 1);
        val = ev(ev.size() - 1);
      }
    }
    if (val > score) {
      score = val;
      best = psis;
    }
  }
  std::vector<CMatrix> factors;
  for (const auto& v : best) factors.push_back(v * v.adjoint());
  return factors;
}

// One alternating sweep that re-fits an existing atom's factors against a
// partial residual, starting from its current pure factors.
std::vector<CMatrix> refine_atom(const std::vector<CMatrix>& factors,
                                 const CMatrix& residual, const DimVector& bd) {
  const int m = bd.factor_count();
  std::vector<CVector> psis;
  for (const auto& f : factors) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(f);
    psis.push_back(es.eigenvectors().col(es.eigenvalues().size() - 1));
  }
  for (int sweep = 0; sweep < 10; ++sweep) {
    for (int b = 0; b < m; ++b) {
      CMatrix reduced = residual;
      DimVector cur = bd;
      for (int c = m - 1; c >= 0; --c) {
        if (c == b) continue;
        reduced = contract_block(reduced, cur, c, psis[static_cast<size_t>(c)]);
        cur.dims.erase(cur.dims.begin() + c);
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(reduced));
      psis[static_cast<size_t>(b)] =
          es.eigenvectors().col(es.eigenvalues().size() - 1);
    }
  }
  std::vector<CMatrix> out;
  for (const auto& v : psis) out.push_back(v * v.adjoint());
  return out;
}

// Exact two-qubit separable decomposition via the spin-flip construction
// (Wootters): when the concurrence vanishes, the subnormalized eigenvectors
// can be rotated so that every member is a product state, giving at most
// four terms. Returns nullopt when the state is entangled or the numerics
// do not close; the caller falls back to the iterative search.
std::optional<std::vector<ProductTerm>> two_qubit_exact_terms(
    const CMatrix& target) {
  CMatrix Y = CMatrix::Zero(4, 4);  // sigma_y (x) sigma_y
  Y(0, 3) = -1.0;
  Y(1, 2) = 1.0;
  Y(2, 1) = 1.0;
  Y(3, 0) = -1.0;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(target));
  CMatrix V(4, 4);
  for (int i = 0; i < 4; ++i)
    V.col(i) = std::sqrt(std::max(es.eigenvalues()(i), 0.0)) *
               es.eigenvectors().col(i);
  const CMatrix tau = V.transpose() * Y * V;  // complex symmetric

  // Takagi factorization tau = W diag(lambda) W^T through the real symmetric
  // embedding: if T (x; y) = s (x; y) then tau conj(w) = s w for w = x + iy.
  Eigen::MatrixXd T(8, 8);
  T << tau.real(), tau.imag(), tau.imag(), -tau.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(T);
  // The spectrum is symmetric about zero; take the top half, keeping the
  // selected vectors orthogonal to the J-images (-y; x) of earlier picks so
  // that degenerate and null eigenspaces split consistently.
  std::vector<Eigen::VectorXd> chosen;
  std::vector<double> lam;
  for (int i = 7; i >= 0 && chosen.size() < 4; --i) {
    Eigen::VectorXd cand = rs.eigenvectors().col(i);
    for (const auto& c : chosen) {
      cand -= c.dot(cand) * c;
      Eigen::VectorXd jc(8);
      jc << -c.tail(4), c.head(4);
      cand -= jc.dot(cand) * jc;
    }
    if (cand.norm() < 1e-8) continue;
    cand.normalize();
    chosen.push_back(cand);
    lam.push_back(std::max(rs.eigenvalues()(i), 0.0));
  }
  if (chosen.size() < 4) return std::nullopt;
  CMatrix W(4, 4);
  for (int k = 0; k < 4; ++k)
    for (int r = 0; r < 4; ++r)
      W(r, k) = Complex(chosen[static_cast<size_t>(k)](r),
                        chosen[static_cast<size_t>(k)](r + 4));

  // Concurrence max(0, l1 - l2 - l3 - l4) must vanish.
  const double l1 = lam[0], l2 = lam[1], l3 = lam[2], l4 = lam[3];
  if (l1 - l2 - l3 - l4 > 1e-7 * std::max(1.0, l1)) return std::nullopt;

  // Close the polygon: phases with sum_k exp(2i theta_k) lam_k = 0. Pair
  // (l1, l2) and (l3, l4) can each realize any resultant in their interval;
  // the intervals overlap exactly because the concurrence vanishes.
  const double r = std::max(l1 - l2, l3 - l4);
  auto half_angle = [](double a, double b, double res) {
    if (a * b < 1e-28) return 0.0;
    const double c =
        std::clamp((res * res - a * a - b * b) / (2.0 * a * b), -1.0, 1.0);
    return 0.5 * std::acos(c);
  };
  const double phi = half_angle(l1, l2, r);
  const double psi = half_angle(l3, l4, r);
  const Complex z1 = l1 + std::polar(1.0, 2.0 * phi) * l2;
  const Complex z2 = l3 + std::polar(1.0, 2.0 * psi) * l4;
  double alpha = 0.0;
  if (std::abs(z2) > 1e-14) alpha = 0.5 * std::arg(-z1 / z2);
  const double theta[4] = {0.0, phi, alpha, alpha + psi};

  // New subnormalized vectors y_k = sum_j conj(W)_{jk} v_j with the closing
  // phases, then a Hadamard mix: each output has equal share of the phased
  // diagonal, hence zero concurrence, hence is a product vector.
  CMatrix Z = V * W.conjugate();
  for (int k = 0; k < 4; ++k) Z.col(k) *= std::polar(1.0, theta[k]);
  Eigen::Matrix4d H;
  H << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
  const CMatrix U = Z * (0.5 * H).cast<Complex>();

  std::vector<ProductTerm> terms;
  for (int j = 0; j < 4; ++j) {
    const CVector u = U.col(j);
    if (u.squaredNorm() < 1e-12) continue;
    CMatrix M(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) M(a, b) = u(2 * a + b);
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CVector a = svd.matrixU().col(0);
    const CVector b = svd.matrixV().col(0).conjugate();
    const double w = svd.singularValues()(0) * svd.singularValues()(0);
    terms.push_back({w, {a * a.adjoint(), b * b.adjoint()}});
  }
  return terms;
}

RVector project_to_simplex(RVector v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  int rho_idx = 0;
  double running = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    running += u[i];
    const double t = (running - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) rho_idx = static_cast<int>(i);
  }
  running = 0.0;
  for (int i = 0; i <= rho_idx; ++i) running += u[static_cast<size_t>(i)];
  const double theta = (running - 1.0) / static_cast<double>(rho_idx + 1);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = std::max(v(i) - theta, 0.0);
  return v;
}

// min_{p in simplex} || target - sum_a p_a A_a ||_F^2 via FISTA.
RVector solve_weights(const CMatrix& target,
                      const std::vector<CMatrix>& atoms) {
  const int k = static_cast<int>(atoms.size());
  Eigen::MatrixXd gram(k, k);
  RVector lin(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j)
      gram(i, j) = (atoms[static_cast<size_t>(i)].adjoint() * atoms[static_cast<size_t>(j)]).trace().real();
    lin(i) = (atoms[static_cast<size_t>(i)].adjoint() * target).trace().real();
  }
  // Frobenius norm upper-bounds the spectral norm; safe Lipschitz constant.
  const double lip = 2.0 * std::max(gram.norm(), 1e-12);
  RVector p = RVector::Constant(k, 1.0 / k), y = p, prev = p;
  double t = 1.0;
  for (int it = 0; it < 4000; ++it) {
    RVector grad = 2.0 * (gram * y - lin);
    RVector next = project_to_simplex(y - grad / lip);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - p);
    prev = p;
    p = next;
    t = t_next;
    if (it > 100 && (p - prev).norm() < 1e-14) break;
  }
  return p;
}

}  // namespace

CMatrix Decomposition::assemble_term(const ProductTerm& term,
                                     const TpsSpec& tps,
                                     const Partition& sigma) {
  const BlockFrame frame = make_frame(tps, sigma);
  CMatrix full = atom_matrix(term.factors);
  std::vector<int> back(frame.order.size());
  for (size_t j = 0; j < frame.order.size(); ++j)
    back[static_cast<size_t>(frame.order[j])] = static_cast<int>(j);
  full = permute_factors(full, frame.fine_dims, back);
  return tps.unitary * full * tps.unitary.adjoint();
}

CMatrix Decomposition::assemble(const TpsSpec& tps,
                                const Partition& sigma) const {
  CMatrix sum = CMatrix::Zero(tps.ambient_dim(), tps.ambient_dim());
  for (const auto& t : terms) sum += t.weight * assemble_term(t, tps, sigma);
  return sum;
}

std::optional<Decomposition> decompose_separable(const State& rho,
                                                 const TpsSpec& tps,
                                                 const Partition& sigma,
                                                 int budget, unsigned seed) {
  check_partition(tps, sigma);
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (tps.ambient_dim() > 16)
    throw std::invalid_argument("decomposition search limited to ambient <= 16");

  const BlockFrame frame = make_frame(tps, sigma);
  const CMatrix rt = twisted_rho(rho, tps);
  // Work in block-contiguous order throughout.
  const CMatrix target = permute_factors(rt, tps.dims, frame.order);
  const int m = frame.block_dims.factor_count();

  Decomposition dec;
  if (m == 1) {
    dec.terms.push_back({1.0, {target}});
    dec.reconstruction_error = 0.0;
    return dec;
  }

  // Product state: one term.
  {
    CMatrix prod = CMatrix::Identity(1, 1);
    std::vector<CMatrix> marginals;
    for (int b = 0; b < m; ++b) {
      marginals.push_back(partial_trace(target, frame.block_dims, {b}));
      prod = kron(prod, marginals.back());
    }
    const double err = (target - prod).norm();
    if (err <= 1e-8) {
      dec.terms.push_back({1.0, marginals});
      dec.reconstruction_error = err;
      return dec;
    }
  }

  // Diagonal state: the definition exhibits the decomposition.
  {
    CMatrix off = target;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() <= 1e-10) {
      const long n = target.rows();
      for (long idx = 0; idx < n; ++idx) {
        const double w = target(idx, idx).real();
        if (w <= 1e-12) continue;
        auto digits = index_to_digits(idx, frame.block_dims);
        std::vector<CMatrix> factors;
        for (int b = 0; b < m; ++b) {
          CMatrix proj = CMatrix::Zero(frame.block_dims[b], frame.block_dims[b]);
          proj(digits[static_cast<size_t>(b)], digits[static_cast<size_t>(b)]) = 1.0;
          factors.push_back(proj);
        }
        dec.terms.push_back({w, factors});
      }
      dec.reconstruction_error = off.norm();
      return dec;
    }
  }

  // Two qubits: the spin-flip construction is exact and at most four terms.
  if (m == 2 && frame.block_dims[0] == 2 && frame.block_dims[1] == 2) {
    if (auto terms = two_qubit_exact_terms(target)) {
      CMatrix recon = CMatrix::Zero(4, 4);
      for (const auto& t : *terms) recon += t.weight * atom_matrix(t.factors);
      const double err = (target - recon).norm();
      if (err <= 1e-7) {
        dec.terms = std::move(*terms);
        dec.reconstruction_error = err;
        return dec;
      }
    }
  }

  // Fully corrective conditional-gradient search over product atoms.
  std::mt19937 rng(seed);
  std::vector<ProductTerm> atoms;
  std::vector<CMatrix> atom_mats;
  {
    std::vector<CMatrix> marginals;
    for (int b = 0; b < m; ++b)
      marginals.push_back(partial_trace(target, frame.block_dims, {b}));
    atoms.push_back({0.0, marginals});
    atom_mats.push_back(atom_matrix(marginals));
  }

  RVector weights;
  double err = 1e300;
  auto reconstruct = [&] {
    CMatrix recon = CMatrix::Zero(target.rows(), target.cols());
    for (size_t a = 0; a < atoms.size(); ++a)
      recon += weights(static_cast<Eigen::Index>(a)) * atom_mats[a];
    return recon;
  };
  for (int round = 0; round < budget; ++round) {
    weights = solve_weights(target, atom_mats);
    CMatrix recon = reconstruct();
    err = (target - recon).norm();
    if (err <= 1e-7) break;
    // Near the boundary of the separable set, pure conditional gradient
    // stalls; re-fitting each kept atom against its partial residual keeps
    // the atom set small and restores progress.
    for (size_t a = 0; a < atoms.size(); ++a) {
      const double w = weights(static_cast<Eigen::Index>(a));
      if (w <= 1e-10) continue;
      const CMatrix partial = target - recon + w * atom_mats[a];
      atoms[a].factors =
          refine_atom(atoms[a].factors, partial, frame.block_dims);
      atom_mats[a] = atom_matrix(atoms[a].factors);
    }
    weights = solve_weights(target, atom_mats);
    recon = reconstruct();
    err = (target - recon).norm();
    if (err <= 1e-7) break;
    double score = 0.0;
    auto factors = best_atom(target - recon, frame.block_dims, rng, score);
    atoms.push_back({0.0, factors});
    atom_mats.push_back(atom_matrix(factors));
  }
  if (weights.size() != static_cast<Eigen::Index>(atoms.size()))
    weights = solve_weights(target, atom_mats);
  {
    CMatrix recon = CMatrix::Zero(target.rows(), target.cols());
    for (size_t a = 0; a < atoms.size(); ++a)
      recon += weights(static_cast<Eigen::Index>(a)) * atom_mats[a];
    err = (target - recon).norm();
  }
  if (err > 1e-6) return std::nullopt;

  double kept = 0.0;
  for (size_t a = 0; a < atoms.size(); ++a) {
    const double w = weights(static_cast<Eigen::Index>(a));
    if (w <= 1e-10) continue;
    atoms[a].weight = w;
    dec.terms.push_back(atoms[a]);
    kept += w;
  }
  for (auto& t : dec.terms) t.weight /= kept;
  dec.reconstruction_error = err;
  return dec;
}

PiResult pi_of_state(const State& rho, const TpsSpec& tps) {
  const int k = tps.factor_count();
  if (k > 10) throw std::invalid_argument("too-large: factor count > 10");
  PiResult out;
  out.separable.ground_size = k;
  out.undetermined.ground_size = k;
  for (const auto& sigma : enumerate_partitions(k).members) {
    const auto v = is_sigma_separable(rho, tps, sigma);
    if (v.value == Verdict::Product || v.value == Verdict::Separable)
      out.separable.members.push_back(sigma);
    else if (v.value == Verdict::Undetermined)
      out.undetermined.members.push_back(sigma);
  }
  return out;
}

State bell_phi_plus() {
  CVector psi = CVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return State::pure(psi, "phi+");
}

State ghz_state(int qubits) {
  if (qubits < 1) throw std::invalid_argument("ghz needs >= 1 qubit");
  const long n = 1L << qubits;
  CVector psi = CVector::Zero(n);
  psi(0) = psi(n - 1) = 1.0 / std::sqrt(2.0);
  return State::pure(psi, "ghz" + std::to_string(qubits));
}

State werner_state(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("werner parameter must lie in [0,1]");
  const State bell = bell_phi_plus();
  CMatrix rho = (1.0 - lambda) * CMatrix::Identity(4, 4) / 4.0 +
                lambda * bell.rho;
  return State::density(rho, "werner");
}

State basis_state(long n, long index, std::string name) {
  if (index < 0 || index >= n) throw std::invalid_argument("basis index out of range");
  CVector psi = CVector::Zero(n);
  psi(index) = 1.0;
  return State::pure(psi, std::move(name));
}

}  // namespace locus
