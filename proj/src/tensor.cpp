#include "cf/tensor.hpp"

#include <cmath>
#include <sstream>

namespace cf {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::string dim_str(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows << "x" << m.cols;
  return os.str();
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const cnum& e : entries) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
  }
  return true;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols == b.rows,
          "matmul: dimension mismatch " + dim_str(a) + " * " + dim_str(b));
  ComplexMatrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const cnum aik = a.at(i, k);
      if (aik == cnum{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        out.at(i, j) += aik * b.at(k, j);
      }
    }
  }
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      out.at(j, i) = std::conj(a.at(i, j));
    }
  }
  return out;
}

cnum trace(const ComplexMatrix& a) {
  require(a.is_square(), "trace: matrix not square (" + dim_str(a) + ")");
  cnum t{0.0, 0.0};
  for (std::size_t i = 0; i < a.rows; ++i) t += a.at(i, i);
  return t;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.all_finite() && b.all_finite(), "kron: non-finite entries");
  ComplexMatrix out(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      const cnum aij = a.at(i, j);
      if (aij == cnum{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < b.rows; ++k) {
        for (std::size_t l = 0; l < b.cols; ++l) {
          out.at(i * b.rows + k, j * b.cols + l) = aij * b.at(k, l);
        }
      }
    }
  }
  return out;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows == b.rows && a.cols == b.cols,
          "add: dimension mismatch " + dim_str(a) + " + " + dim_str(b));
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    out.entries[i] += b.entries[i];
  }
  return out;
}

ComplexMatrix scale(const ComplexMatrix& a, cnum factor) {
  ComplexMatrix out = a;
  for (cnum& e : out.entries) e *= factor;
  return out;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  if (!a.is_square()) return false;
  const ComplexMatrix prod = matmul(dagger(a), a);
  return approx_equal(prod, ComplexMatrix::identity(a.rows), tol);
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  return max_abs_diff(a, b) <= tol;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows == b.rows && a.cols == b.cols,
          "max_abs_diff: dimension mismatch");
  double dev = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    dev = std::max(dev, std::abs(a.entries[i] - b.entries[i]));
  }
  return dev;
}

std::vector<cnum> matvec(const ComplexMatrix& a, const std::vector<cnum>& v) {
  require(a.cols == v.size(), "matvec: vector length mismatch");
  std::vector<cnum> out(a.rows, cnum{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      out[i] += a.at(i, j) * v[j];
    }
  }
  return out;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector BlochVector::unit(double x, double y, double z) {
  BlochVector n{x, y, z};
  if (std::abs(n.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("BlochVector: vector is not unit norm");
  }
  return n;
}

BlochVector BlochVector::normalized(double x, double y, double z) {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (!(r > 1e-12)) {
    throw std::invalid_argument("BlochVector: cannot normalize a zero vector");
  }
  return BlochVector{x / r, y / r, z / r};
}

ComplexMatrix observable_from_bloch(const BlochVector& n) {
  ComplexMatrix m(2, 2);
  m.at(0, 0) = cnum{n.z, 0.0};
  m.at(0, 1) = cnum{n.x, -n.y};
  m.at(1, 0) = cnum{n.x, n.y};
  m.at(1, 1) = cnum{-n.z, 0.0};
  return m;
}

ComplexMatrix projector_from_bloch(const BlochVector& n, int outcome) {
  require(outcome == 1 || outcome == -1,
          "projector_from_bloch: outcome must be +1 or -1");
  if (std::abs(n.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("projector_from_bloch: non-unit Bloch vector");
  }
  const double s = static_cast<double>(outcome);
  ComplexMatrix m = observable_from_bloch(n);
  for (cnum& e : m.entries) e *= 0.5 * s;
  m.at(0, 0) += 0.5;
  m.at(1, 1) += 0.5;
  return m;
}

namespace {

// Cholesky-style positivity probe. A pivot below -tol fails outright; a
// pivot within tol of zero must head a (numerically) vanishing column.
bool psd_by_cholesky(const ComplexMatrix& a, double tol) {
  const std::size_t n = a.rows;
  std::vector<cnum> l(n * n, cnum{0.0, 0.0});
  auto L = [&](std::size_t i, std::size_t j) -> cnum& { return l[i * n + j]; };
  for (std::size_t j = 0; j < n; ++j) {
    double d = a.at(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(L(j, k));
    if (d < -tol) return false;
    if (d <= tol) {
      const double col_tol = std::sqrt(tol) + 1e-12;
      for (std::size_t i = j + 1; i < n; ++i) {
        cnum off = a.at(i, j);
        for (std::size_t k = 0; k < j; ++k) off -= L(i, k) * std::conj(L(j, k));
        if (std::abs(off) > col_tol) return false;
        L(i, j) = 0.0;
      }
      L(j, j) = 0.0;
      continue;
    }
    const double root = std::sqrt(d);
    L(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      cnum off = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) off -= L(i, k) * std::conj(L(j, k));
      L(i, j) = off / root;
    }
  }
  return true;
}

void validate_state(const ComplexMatrix& m) {
  if (!m.is_square()) throw InvariantError("DensityMatrix: matrix not square");
  if (m.rows < 2 || m.rows > kMaxStateDim) {
    throw InvariantError("DensityMatrix: dimension out of supported range");
  }
  if (!m.all_finite()) throw InvariantError("DensityMatrix: non-finite entry");
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > kHermitianTol) {
        throw InvariantError("DensityMatrix: not Hermitian within 1e-12");
      }
    }
  }
  if (std::abs(trace(m) - cnum{1.0, 0.0}) > kTraceTol) {
    throw InvariantError("DensityMatrix: trace differs from 1 beyond 1e-12");
  }
  bool psd = true;
  if (m.rows == 2) {
    // Diagonal minors of the 2x2 case.
    const double det = (m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)).real();
    psd = m.at(0, 0).real() >= -kPsdPivotTol &&
          m.at(1, 1).real() >= -kPsdPivotTol && det >= -kPsdPivotTol;
  } else {
    psd = psd_by_cholesky(m, kPsdPivotTol);
  }
  if (!psd) throw InvariantError("DensityMatrix: not positive semidefinite");
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  validate_state(m_);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  for (cnum& e : m.entries) e /= static_cast<double>(dim);
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const std::vector<cnum>& amplitudes) {
  double norm2 = 0.0;
  for (const cnum& a : amplitudes) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-9) {
    throw std::invalid_argument("DensityMatrix::pure: amplitudes not normalized");
  }
  const std::size_t n = amplitudes.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.at(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
    }
  }
  return DensityMatrix(std::move(m));
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m,
                                   const std::vector<std::size_t>& dims,
                                   std::size_t keep) {
  require(m.is_square(), "partial_trace: matrix not square");
  require(!dims.empty(), "partial_trace: empty dimension list");
  require(keep < dims.size(), "partial_trace: keep index out of range");
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  require(total == m.rows, "partial_trace: subsystem dims do not match matrix");

  // Strides of each subsystem index in the flattened basis label.
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) {
    stride[s - 1] = stride[s] * dims[s];
  }

  const std::size_t dk = dims[keep];
  const std::size_t rest = total / dk;
  ComplexMatrix out(dk, dk);
  for (std::size_t i = 0; i < dk; ++i) {
    for (std::size_t j = 0; j < dk; ++j) {
      cnum sum{0.0, 0.0};
      for (std::size_t r = 0; r < rest; ++r) {
        // Unpack r into the traced-out subsystem indices.
        std::size_t row = i * stride[keep];
        std::size_t col = j * stride[keep];
        std::size_t rem = r;
        for (std::size_t s = dims.size(); s-- > 0;) {
          if (s == keep) continue;
          const std::size_t idx = rem % dims[s];
          rem /= dims[s];
          row += idx * stride[s];
          col += idx * stride[s];
        }
        sum += m.at(row, col);
      }
      out.at(i, j) = sum;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::size_t>& dims,
                            std::size_t keep) {
  return DensityMatrix(partial_trace_matrix(rho.matrix(), dims, keep));
}

}  // namespace cf
