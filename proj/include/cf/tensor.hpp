#pragma once

// Minimal dense complex linear algebra for 2- to 8-dimensional Hilbert
// spaces: matrices, Kronecker products, partial traces, and
// Bloch-parameterized qubit observables. Everything here is a plain value
// type, immutable once built, and safe to share across threads.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cf {

using cnum = std::complex<double>;

// Tolerances used by the state validators.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdPivotTol = 1e-10;
inline constexpr double kUnitNormTol = 1e-12;
inline constexpr std::size_t kMaxStateDim = 8;

/// Thrown when a constructed object breaks a numerical invariant
/// (non-Hermitian state, unnormalized table, lost rewind fidelity, ...).
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major complex matrix.
struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cnum> entries;  // row-major, size rows*cols

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), entries(r * c, cnum{0.0, 0.0}) {}

  static ComplexMatrix identity(std::size_t n);

  cnum& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const cnum& at(std::size_t i, std::size_t j) const {
    return entries[i * cols + j];
  }

  bool is_square() const { return rows == cols; }
  bool all_finite() const;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);
cnum trace(const ComplexMatrix& a);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cnum factor);
bool is_unitary(const ComplexMatrix& a, double tol);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix times column vector.
std::vector<cnum> matvec(const ComplexMatrix& a, const std::vector<cnum>& v);

/// Unit vector on the Bloch sphere. Only unit vectors name observables;
/// construction rejects anything off the sphere by more than 1e-12.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  static BlochVector unit(double x, double y, double z);
  /// Rescales an arbitrary nonzero vector onto the sphere (used by parsers
  /// so that e.g. eight-digit decimals of 1/sqrt(2) are accepted).
  static BlochVector normalized(double x, double y, double z);

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
};

/// n . sigma as a 2x2 Hermitian matrix.
ComplexMatrix observable_from_bloch(const BlochVector& n);

/// Eigenprojector (I + outcome * n.sigma) / 2 for outcome in {+1, -1}.
ComplexMatrix projector_from_bloch(const BlochVector& n, int outcome);

/// Density matrix with validated invariants: Hermitian and unit trace to
/// 1e-12, positive semidefinite (Cholesky-style pivots >= -1e-10), and
/// dimension at most 8.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix pure(const std::vector<cnum>& amplitudes);

  std::size_t dim() const { return m_.rows; }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Partial trace of a square matrix over every subsystem except `keep`.
/// Linear in its input; does not require the input to be a state.
ComplexMatrix partial_trace_matrix(const ComplexMatrix& m,
                                   const std::vector<std::size_t>& dims,
                                   std::size_t keep);

/// Partial trace of a state; the reduced matrix is revalidated.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::size_t>& dims,
                            std::size_t keep);

}  // namespace cf
