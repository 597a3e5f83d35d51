#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicert {

using cplx = std::complex<double>;

// Central tolerance record. Every numerical contract in the library refers
// to one of these named constants.
namespace tol {
inline constexpr double hermiticity = 1e-12;     // ||M - M^dag||_max
inline constexpr double reconstruction = 1e-10;  // ||M - V L V^dag||_max
inline constexpr double orthonormality = 1e-10;  // ||V^dag V - I||_max
inline constexpr double psd_clamp = 1e-10;       // negative eigenvalues clamped
inline constexpr double psd_reject = 1e-8;       // eigenvalue < -psd_reject rejected
inline constexpr double trace_preserve = 1e-12;  // partial trace / unit trace
inline constexpr double kraus_complete = 1e-10;  // sum K^dag K == I
inline constexpr double dual_gap = 1e-7;         // inner solver certificate
inline constexpr double constraint_feas = 1e-9;  // Bell-constraint feasibility
inline constexpr double behavior_norm = 1e-9;    // conditional distributions sum to 1
}  // namespace tol

class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx(0, 0)) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const std::vector<cplx>& data() const { return a_; }
  std::vector<cplx>& data() { return a_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  cplx trace() const;
  double max_abs() const;
  double hermiticity_defect() const;  // max |a_ij - conj(a_ji)|, square only
  bool is_hermitian(double eps = tol::hermiticity) const {
    return square() && hermiticity_defect() <= eps;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double eps);

 private:
  std::size_t rows_, cols_;
  std::vector<cplx> a_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// Sandwich a * m * a^dag, the building block for unitary conjugation and
// Kraus application.
ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& ms);

// Trace out every tensor factor not listed in `keep`. `dims` lists the factor
// dimensions (product must equal the matrix dimension); `keep` holds indices
// into `dims`, in increasing order of the retained factors.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

// Reorder tensor factors: perm[k] names the old factor that lands at slot k.
ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, same order
};

// Cyclic complex Jacobi diagonalization. Rejects inputs whose hermiticity
// defect exceeds `herm_eps` (diagnostic carries the defect norm).
EigenDecomposition eig_hermitian(const ComplexMatrix& m, double herm_eps = tol::hermiticity);

// Eigenvalues only (same algorithm, no eigenvector accumulation).
std::vector<double> eigvalsh(const ComplexMatrix& m, double herm_eps = tol::hermiticity);

// PSD square root via eigendecomposition; eigenvalues in [-psd_reject, 0)
// are clamped to zero, anything lower is rejected.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m);

const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();
const ComplexMatrix& identity2();

}  // namespace dicert
