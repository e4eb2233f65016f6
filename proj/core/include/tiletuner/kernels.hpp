#pragma once

#include <cstdint>

#include "tiletuner/matrix.hpp"
#include "tiletuner/problem.hpp"
#include "tiletuner/space.hpp"

namespace tiletuner {

// A problem size plus the seed generating its inputs. Identical cases always
// produce bit-identical inputs.
struct KernelCase {
  ProblemSize size;
  std::uint64_t seed = 1;
};

struct LuFactors {
  Matrix l, u;
};

struct Mm3Inputs {
  Matrix a, b, c, d;
};

// Symmetric positive-definite n x n matrix: B with uniform [0,1) entries,
// A = B*B^T + n*I. Keeps LU pivots and Cholesky diagonals away from zero so
// pivot-free factorization is always well defined.
Matrix gen_spd(int n, std::uint64_t seed);

// Uniform [0,1) matrices A (n x l), B (l x m), C (m x o), D (o x p).
Mm3Inputs gen_3mm_inputs(const ProblemSize& dims, std::uint64_t seed);

// G = (A*B)*(C*D) by naive triple loops, ascending-k accumulation.
// Throws std::invalid_argument on inner-dimension mismatch.
Matrix mm3_reference(const Matrix& a, const Matrix& b, const Matrix& c,
                     const Matrix& d);

// Same product with each multiplication run as an
// (outer row tile, outer col tile, reduction, inner row, inner col) nest.
// config holds the six tile extents: (P0,P1) for E=A*B, (P2,P3) for F=C*D,
// (P4,P5) for G=E*F. Each factor must divide its axis extent.
Matrix mm3_tiled(const Matrix& a, const Matrix& b, const Matrix& c,
                 const Matrix& d, const Configuration& config);

// In-place elimination without pivoting, unpacked into unit-lower L and
// upper U. Throws NumericalError on a vanishing pivot.
LuFactors lu_reference(const Matrix& a);

// Right-looking blocked elimination: unblocked column panels of width bx,
// trailing-submatrix update with rows tiled by `by` and columns by `bx`.
LuFactors lu_tiled(const Matrix& a, int by, int bx);

// Lower-triangular L with positive diagonal, A = L*L^T. Throws
// NumericalError when a non-positive diagonal signals a non-SPD input.
Matrix cholesky_reference(const Matrix& a);

// Left-looking blocked factorization: unblocked panels of width bx, the
// accumulated left-update tiled by (by, bx).
Matrix cholesky_tiled(const Matrix& a, int by, int bx);

// Timed cores used by the measurement harness: factor the packed matrix in
// place. For LU the unit diagonal is implicit (L strictly below, U on and
// above); for Cholesky L lands in the lower triangle.
void lu_factor_inplace(Matrix& a, int by, int bx);
void cholesky_factor_inplace(Matrix& a, int by, int bx);

// Max-norm relative reconstruction errors.
double lu_residual(const Matrix& a, const LuFactors& f);
double cholesky_residual(const Matrix& a, const Matrix& l);
// For 3mm the residual is taken against the reference output.
double mm3_residual(const Matrix& reference, const Matrix& result);

// Runs the tiled kernel for `config` on the case's seeded inputs and returns
// the reconstruction (or vs-reference) residual. Backs the `verify` command.
double residual_for(const KernelCase& kase, const Configuration& config);

}  // namespace tiletuner
