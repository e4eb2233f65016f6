#include "tiletuner/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tiletuner/errors.hpp"
#include "tiletuner/rng.hpp"

namespace tiletuner {

namespace {

constexpr double kPivotFloor = 1e-300;

void fill_uniform(Matrix& m, Rng& rng) {
  for (double& v : m.data) v = rng.next_double();
}

void require_square(const Matrix& a, const char* who) {
  if (a.rows != a.cols || a.rows < 1) {
    throw std::invalid_argument(std::string(who) + ": square matrix required");
  }
}

void require_tile(int factor, int extent, const char* who) {
  if (factor < 1 || factor > extent || extent % factor != 0) {
    throw std::invalid_argument(std::string(who) + ": tile factor " +
                                std::to_string(factor) +
                                " does not divide extent " +
                                std::to_string(extent));
  }
}

}  // namespace

Matrix gen_spd(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_spd: n must be >= 1");
  Rng rng(seed);
  Matrix b(n, n);
  fill_uniform(b, rng);
  Matrix a(n, n);
  // Fill the lower triangle and mirror it so symmetry is bit-exact.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += b(i, k) * b(j, k);
      a(i, j) = s;
      a(j, i) = s;
    }
    a(i, i) += static_cast<double>(n);
  }
  return a;
}

Mm3Inputs gen_3mm_inputs(const ProblemSize& dims, std::uint64_t seed) {
  if (dims.n < 1 || dims.l < 1 || dims.m < 1 || dims.o < 1 || dims.p < 1) {
    throw std::invalid_argument("gen_3mm_inputs: all five extents must be >= 1");
  }
  Rng rng(seed);
  Mm3Inputs in{Matrix(dims.n, dims.l), Matrix(dims.l, dims.m),
               Matrix(dims.m, dims.o), Matrix(dims.o, dims.p)};
  fill_uniform(in.a, rng);
  fill_uniform(in.b, rng);
  fill_uniform(in.c, rng);
  fill_uniform(in.d, rng);
  return in;
}

namespace {

Matrix matmul_naive(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) {
    throw std::invalid_argument("matmul: inner dimensions disagree");
  }
  Matrix out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < y.cols; ++j) {
      double acc = 0.0;
      for (int k = 0; k < x.cols; ++k) acc += x(i, k) * y(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

// (yo, xo, k, yi, xi) nest: outer tile loops, full reduction loop, then the
// intra-tile loops. fy/fx are the row/column tile extents and must divide
// the output extents.
Matrix matmul_tiled(const Matrix& x, const Matrix& y, int fy, int fx) {
  if (x.cols != y.rows) {
    throw std::invalid_argument("matmul: inner dimensions disagree");
  }
  require_tile(fy, x.rows, "matmul_tiled");
  require_tile(fx, y.cols, "matmul_tiled");
  Matrix out(x.rows, y.cols);
  for (int yo = 0; yo < x.rows; yo += fy) {
    for (int xo = 0; xo < y.cols; xo += fx) {
      for (int k = 0; k < x.cols; ++k) {
        for (int yi = 0; yi < fy; ++yi) {
          const double xv = x(yo + yi, k);
          for (int xi = 0; xi < fx; ++xi) {
            out(yo + yi, xo + xi) += xv * y(k, xo + xi);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

Matrix mm3_reference(const Matrix& a, const Matrix& b, const Matrix& c,
                     const Matrix& d) {
  Matrix e = matmul_naive(a, b);
  Matrix f = matmul_naive(c, d);
  return matmul_naive(e, f);
}

Matrix mm3_tiled(const Matrix& a, const Matrix& b, const Matrix& c,
                 const Matrix& d, const Configuration& config) {
  if (config.values.size() != 6) {
    throw std::invalid_argument("mm3_tiled: six tile factors required");
  }
  const auto& v = config.values;
  Matrix e = matmul_tiled(a, b, v[0], v[1]);
  Matrix f = matmul_tiled(c, d, v[2], v[3]);
  return matmul_tiled(e, f, v[4], v[5]);
}

namespace {

// Left-looking row-oriented elimination, the PolyBench loop shape.
void lu_unblocked_inplace(Matrix& a) {
  const int n = a.rows;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * a(k, j);
      if (std::abs(a(j, j)) < kPivotFloor) {
        throw NumericalError("lu: vanishing pivot at column " + std::to_string(j));
      }
      a(i, j) = s / a(j, j);
    }
    for (int j = i; j < n; ++j) {
      double s = a(i, j);
      for (int k = 0; k < i; ++k) s -= a(i, k) * a(k, j);
      a(i, j) = s;
    }
  }
  if (std::abs(a(n - 1, n - 1)) < kPivotFloor) {
    throw NumericalError("lu: vanishing pivot at column " + std::to_string(n - 1));
  }
}

LuFactors unpack_lu(const Matrix& a) {
  const int n = a.rows;
  LuFactors f{Matrix(n, n), Matrix(n, n)};
  for (int i = 0; i < n; ++i) {
    f.l(i, i) = 1.0;
    for (int j = 0; j < i; ++j) f.l(i, j) = a(i, j);
    for (int j = i; j < n; ++j) f.u(i, j) = a(i, j);
  }
  return f;
}

}  // namespace

LuFactors lu_reference(const Matrix& a) {
  require_square(a, "lu_reference");
  Matrix work = a;
  lu_unblocked_inplace(work);
  return unpack_lu(work);
}

void lu_factor_inplace(Matrix& a, int by, int bx) {
  require_square(a, "lu_tiled");
  const int n = a.rows;
  require_tile(by, n, "lu_tiled");
  require_tile(bx, n, "lu_tiled");
  for (int p = 0; p < n; p += bx) {
    const int pe = p + bx;
    // Factor the column panel [p, pe) unblocked, right-looking.
    for (int k = p; k < pe; ++k) {
      const double pivot = a(k, k);
      if (std::abs(pivot) < kPivotFloor) {
        throw NumericalError("lu: vanishing pivot at column " + std::to_string(k));
      }
      for (int i = k + 1; i < n; ++i) a(i, k) /= pivot;
      for (int i = k + 1; i < n; ++i) {
        const double lik = a(i, k);
        for (int j = k + 1; j < pe; ++j) a(i, j) -= lik * a(k, j);
      }
    }
    // Finish the panel's U block-row: rows [p, pe) x cols [pe, n).
    for (int k = p; k < pe; ++k) {
      for (int i = k + 1; i < pe; ++i) {
        const double lik = a(i, k);
        for (int j = pe; j < n; ++j) a(i, j) -= lik * a(k, j);
      }
    }
    // Trailing update A22 -= L21 * U12, rows tiled by `by`, cols by `bx`.
    for (int ib = pe; ib < n; ib += by) {
      const int ie = std::min(ib + by, n);
      for (int jb = pe; jb < n; jb += bx) {
        const int je = std::min(jb + bx, n);
        for (int i = ib; i < ie; ++i) {
          for (int k = p; k < pe; ++k) {
            const double lik = a(i, k);
            for (int j = jb; j < je; ++j) a(i, j) -= lik * a(k, j);
          }
        }
      }
    }
  }
}

LuFactors lu_tiled(const Matrix& a, int by, int bx) {
  Matrix work = a;
  lu_factor_inplace(work, by, bx);
  return unpack_lu(work);
}

namespace {

void cholesky_unblocked_inplace(Matrix& a) {
  const int n = a.rows;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / a(j, j);
    }
    double diag = a(i, i);
    for (int k = 0; k < i; ++k) diag -= a(i, k) * a(i, k);
    if (diag <= 0.0) {
      throw NumericalError("cholesky: non-positive diagonal at row " +
                           std::to_string(i));
    }
    a(i, i) = std::sqrt(diag);
  }
}

Matrix lower_of(const Matrix& a) {
  const int n = a.rows;
  Matrix l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) l(i, j) = a(i, j);
  }
  return l;
}

}  // namespace

Matrix cholesky_reference(const Matrix& a) {
  require_square(a, "cholesky_reference");
  Matrix work = a;
  cholesky_unblocked_inplace(work);
  return lower_of(work);
}

void cholesky_factor_inplace(Matrix& a, int by, int bx) {
  require_square(a, "cholesky_tiled");
  const int n = a.rows;
  require_tile(by, n, "cholesky_tiled");
  require_tile(bx, n, "cholesky_tiled");
  for (int p = 0; p < n; p += bx) {
    const int pe = p + bx;
    // Apply the contribution of the already-factored columns [0, p) to the
    // panel block a[p:n, p:pe), rows tiled by `by`, reduction tiled by `bx`.
    for (int ib = p; ib < n; ib += by) {
      const int ie = std::min(ib + by, n);
      for (int kb = 0; kb < p; kb += bx) {
        const int ke = kb + bx;
        for (int i = ib; i < ie; ++i) {
          const int jmax = std::min(pe - 1, i);
          for (int j = p; j <= jmax; ++j) {
            double s = a(i, j);
            for (int k = kb; k < ke; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s;
          }
        }
      }
    }
    // Factor the panel unblocked; rows above pe finish their diagonal here,
    // rows below only fill their panel columns.
    for (int i = p; i < n; ++i) {
      const int jmax = std::min(pe - 1, i);
      for (int j = p; j <= jmax; ++j) {
        if (j < i) {
          double s = a(i, j);
          for (int k = p; k < j; ++k) s -= a(i, k) * a(j, k);
          a(i, j) = s / a(j, j);
        } else {
          double diag = a(i, i);
          for (int k = p; k < i; ++k) diag -= a(i, k) * a(i, k);
          if (diag <= 0.0) {
            throw NumericalError("cholesky: non-positive diagonal at row " +
                                 std::to_string(i));
          }
          a(i, i) = std::sqrt(diag);
        }
      }
    }
  }
}

Matrix cholesky_tiled(const Matrix& a, int by, int bx) {
  Matrix work = a;
  cholesky_factor_inplace(work, by, bx);
  return lower_of(work);
}

namespace {

double max_abs(const Matrix& m) {
  double v = 0.0;
  for (double x : m.data) v = std::max(v, std::abs(x));
  return v;
}

}  // namespace

double lu_residual(const Matrix& a, const LuFactors& f) {
  const int n = a.rows;
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k <= std::min(i, j); ++k) s += f.l(i, k) * f.u(k, j);
      num = std::max(num, std::abs(s - a(i, j)));
    }
  }
  const double denom = max_abs(a);
  return denom > 0.0 ? num / denom : num;
}

double cholesky_residual(const Matrix& a, const Matrix& l) {
  const int n = a.rows;
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k <= std::min(i, j); ++k) s += l(i, k) * l(j, k);
      num = std::max(num, std::abs(s - a(i, j)));
    }
  }
  const double denom = max_abs(a);
  return denom > 0.0 ? num / denom : num;
}

double mm3_residual(const Matrix& reference, const Matrix& result) {
  if (reference.rows != result.rows || reference.cols != result.cols) {
    throw std::invalid_argument("mm3_residual: shape mismatch");
  }
  double num = 0.0;
  for (std::size_t i = 0; i < reference.data.size(); ++i) {
    num = std::max(num, std::abs(result.data[i] - reference.data[i]));
  }
  const double denom = max_abs(reference);
  return denom > 0.0 ? num / denom : num;
}

double residual_for(const KernelCase& kase, const Configuration& config) {
  switch (kase.size.kernel) {
    case Kernel::lu: {
      if (config.values.size() != 2) {
        throw std::invalid_argument("residual_for: lu takes two factors");
      }
      Matrix a = gen_spd(kase.size.n, kase.seed);
      return lu_residual(a, lu_tiled(a, config.values[0], config.values[1]));
    }
    case Kernel::cholesky: {
      if (config.values.size() != 2) {
        throw std::invalid_argument("residual_for: cholesky takes two factors");
      }
      Matrix a = gen_spd(kase.size.n, kase.seed);
      return cholesky_residual(a,
                               cholesky_tiled(a, config.values[0], config.values[1]));
    }
    case Kernel::mm3: {
      Mm3Inputs in = gen_3mm_inputs(kase.size, kase.seed);
      Matrix ref = mm3_reference(in.a, in.b, in.c, in.d);
      Matrix out = mm3_tiled(in.a, in.b, in.c, in.d, config);
      return mm3_residual(ref, out);
    }
  }
  throw std::invalid_argument("residual_for: unknown kernel");
}

}  // namespace tiletuner
