#include "dicert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dicert {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = std::conj(a_[i]);
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0;
  for (const cplx& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  if (!square()) return std::numeric_limits<double>::infinity();
  double d = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch in +");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch in -");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& v : a_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double eps) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.a_.size(); ++i)
    if (std::abs(a.a_[i] - b.a_[i]) > eps) return false;
  return true;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch in *");
  ComplexMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0, 0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& m) {
  return matmul(matmul(a, m), a.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0, 0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& ms) {
  ComplexMatrix r = ComplexMatrix::identity(1);
  for (const auto& m : ms) r = kron(r, m);
  return r;
}

namespace {

std::size_t checked_total_dim(const ComplexMatrix& m, const std::vector<std::size_t>& dims) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (!m.square() || m.rows() != total)
    throw std::invalid_argument("factor dimensions inconsistent with matrix dimension");
  return total;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
  checked_total_dim(m, dims);
  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) {
    if (k >= n) throw std::invalid_argument("keep index out of range");
    kept[k] = true;
  }
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < n; ++k)
    if (!kept[k]) traced.push_back(k);

  std::size_t dim_keep = 1, dim_tr = 1;
  for (std::size_t k : keep) dim_keep *= dims[k];
  for (std::size_t k : traced) dim_tr *= dims[k];

  // strides of each factor in the full row index
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t k = n; k-- > 1;) stride[k - 1] = stride[k] * dims[k];

  ComplexMatrix r(dim_keep, dim_keep);
  std::vector<std::size_t> kidx(keep.size(), 0), jidx(keep.size(), 0), tidx(traced.size(), 0);
  for (std::size_t a = 0; a < dim_keep; ++a) {
    std::size_t rest = a;
    for (std::size_t q = keep.size(); q-- > 0;) {
      kidx[q] = rest % dims[keep[q]];
      rest /= dims[keep[q]];
    }
    for (std::size_t b = 0; b < dim_keep; ++b) {
      rest = b;
      for (std::size_t q = keep.size(); q-- > 0;) {
        jidx[q] = rest % dims[keep[q]];
        rest /= dims[keep[q]];
      }
      cplx sum = 0;
      for (std::size_t t = 0; t < dim_tr; ++t) {
        rest = t;
        for (std::size_t q = traced.size(); q-- > 0;) {
          tidx[q] = rest % dims[traced[q]];
          rest /= dims[traced[q]];
        }
        std::size_t row = 0, col = 0;
        for (std::size_t q = 0; q < keep.size(); ++q) {
          row += kidx[q] * stride[keep[q]];
          col += jidx[q] * stride[keep[q]];
        }
        for (std::size_t q = 0; q < traced.size(); ++q) {
          row += tidx[q] * stride[traced[q]];
          col += tidx[q] * stride[traced[q]];
        }
        sum += m(row, col);
      }
      r(a, b) = sum;
    }
  }
  return r;
}

ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm) {
  const std::size_t total = checked_total_dim(m, dims);
  const std::size_t n = dims.size();
  if (perm.size() != n) throw std::invalid_argument("permutation length mismatch");

  std::vector<std::size_t> stride(n, 1);
  for (std::size_t k = n; k-- > 1;) stride[k - 1] = stride[k] * dims[k];
  std::vector<std::size_t> new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[perm[k]];
  std::vector<std::size_t> new_stride(n, 1);
  for (std::size_t k = n; k-- > 1;) new_stride[k - 1] = new_stride[k] * new_dims[k];

  // map: new index -> old index
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t rest = x;
    std::size_t old = 0;
    for (std::size_t k = 0; k < n; ++k) {
      idx[k] = rest / new_stride[k];
      rest %= new_stride[k];
      old += idx[k] * stride[perm[k]];
    }
    map[x] = old;
  }
  ComplexMatrix r(total, total);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) r(i, j) = m(map[i], map[j]);
  return r;
}

namespace {

// One cyclic Jacobi pass: rotate away each off-diagonal element a_pq.
// The 2x2 block [[a_pp, b e^{i phi}], [b e^{-i phi}, a_qq]] is first phased
// to a real symmetric block and then rotated with the classic tangent rule.
void jacobi_sweep(ComplexMatrix& A, ComplexMatrix* V, double thresh) {
  const std::size_t n = A.rows();
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const cplx apq = A(p, q);
      const double b = std::abs(apq);
      if (b <= thresh) continue;
      const cplx phase = apq / b;  // e^{i phi}
      const double app = A(p, p).real();
      const double aqq = A(q, q).real();
      const double tau = (aqq - app) / (2 * b);
      const double t = (tau >= 0) ? 1.0 / (tau + std::sqrt(1 + tau * tau))
                                  : 1.0 / (tau - std::sqrt(1 + tau * tau));
      const double c = 1.0 / std::sqrt(1 + t * t);
      const double s = t * c;
      // columns: col_p' = c*col_p - s*conj(phase)*col_q ; col_q' = s*phase*col_p + c*col_q
      const cplx sp = s * phase;
      const cplx spc = s * std::conj(phase);
      for (std::size_t i = 0; i < n; ++i) {
        const cplx aip = A(i, p), aiq = A(i, q);
        A(i, p) = c * aip - spc * aiq;
        A(i, q) = sp * aip + c * aiq;
      }
      for (std::size_t j = 0; j < n; ++j) {
        const cplx apj = A(p, j), aqj = A(q, j);
        A(p, j) = c * apj - sp * aqj;
        A(q, j) = spc * apj + c * aqj;
      }
      A(p, q) = 0;
      A(q, p) = 0;
      A(p, p) = cplx(A(p, p).real(), 0);
      A(q, q) = cplx(A(q, q).real(), 0);
      if (V) {
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vip = (*V)(i, p), viq = (*V)(i, q);
          (*V)(i, p) = c * vip - spc * viq;
          (*V)(i, q) = sp * vip + c * viq;
        }
      }
    }
  }
}

double offdiag_norm(const ComplexMatrix& A) {
  double s = 0;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = i + 1; j < A.cols(); ++j) s += 2 * std::norm(A(i, j));
  return std::sqrt(s);
}

void jacobi_diagonalize(ComplexMatrix A, ComplexMatrix* V, std::vector<double>& evals,
                        ComplexMatrix* evecs) {
  const std::size_t n = A.rows();
  // symmetrize rounding noise below the hermiticity tolerance
  for (std::size_t i = 0; i < n; ++i) {
    A(i, i) = cplx(A(i, i).real(), 0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx m = 0.5 * (A(i, j) + std::conj(A(j, i)));
      A(i, j) = m;
      A(j, i) = std::conj(m);
    }
  }
  const double scale = std::max(A.max_abs(), 1e-300);
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double off = offdiag_norm(A);
    if (off <= 1e-15 * scale * n) break;
    // threshold sweeps: skip elements already far below the remaining mass
    const double thresh = (sweep < 3) ? 0.1 * off / (n * n) : 0.0;
    jacobi_sweep(A, V, thresh);
  }
  evals.resize(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    evals[i] = A(i, i).real();
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return A(a, a).real() < A(b, b).real();
  });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = A(order[i], order[i]).real();
  evals = std::move(sorted);
  if (V && evecs) {
    *evecs = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) (*evecs)(i, j) = (*V)(i, order[j]);
  }
}

}  // namespace

EigenDecomposition eig_hermitian(const ComplexMatrix& m, double herm_eps) {
  if (!m.square()) throw std::invalid_argument("eig_hermitian: matrix not square");
  const double defect = m.hermiticity_defect();
  const double scale = std::max(1.0, m.max_abs());
  if (defect > herm_eps * scale)
    throw std::invalid_argument("eig_hermitian: input not Hermitian, defect " +
                                std::to_string(defect));
  EigenDecomposition d;
  ComplexMatrix V = ComplexMatrix::identity(m.rows());
  jacobi_diagonalize(m, &V, d.eigenvalues, &d.eigenvectors);
  return d;
}

std::vector<double> eigvalsh(const ComplexMatrix& m, double herm_eps) {
  if (!m.square()) throw std::invalid_argument("eigvalsh: matrix not square");
  const double defect = m.hermiticity_defect();
  const double scale = std::max(1.0, m.max_abs());
  if (defect > herm_eps * scale)
    throw std::invalid_argument("eigvalsh: input not Hermitian, defect " + std::to_string(defect));
  std::vector<double> evals;
  jacobi_diagonalize(m, nullptr, evals, nullptr);
  return evals;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  EigenDecomposition d = eig_hermitian(m, 1e-9);
  const double scale = std::max(1.0, std::abs(d.eigenvalues.back()));
  ComplexMatrix r(m.rows(), m.rows());
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    double lam = d.eigenvalues[k];
    if (lam < -tol::psd_reject * scale)
      throw std::invalid_argument("matrix_sqrt_psd: eigenvalue " + std::to_string(lam) +
                                  " below PSD tolerance");
    if (lam < 0) lam = 0;
    const double s = std::sqrt(lam);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = d.eigenvectors(i, k);
      if (vik == cplx(0, 0)) continue;
      for (std::size_t j = 0; j < n; ++j)
        r(i, j) += s * vik * std::conj(d.eigenvectors(j, k));
    }
  }
  return r;
}

const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m = [] {
    ComplexMatrix x(2, 2);
    x(0, 1) = 1;
    x(1, 0) = 1;
    return x;
  }();
  return m;
}

const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m = [] {
    ComplexMatrix y(2, 2);
    y(0, 1) = cplx(0, -1);
    y(1, 0) = cplx(0, 1);
    return y;
  }();
  return m;
}

const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m = [] {
    ComplexMatrix z(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    return z;
  }();
  return m;
}

const ComplexMatrix& identity2() {
  static const ComplexMatrix m = ComplexMatrix::identity(2);
  return m;
}

}  // namespace dicert
