#pragma once

#include <memory>
#include <span>
#include <vector>

#include "surfpde/mesh.hpp"

namespace surfpde {

/// CSR layout shared between the matrices of a run: row offsets and sorted
/// column indices. Built once from mesh connectivity and reused across time
/// levels, so per-step assembly only refills values.
struct SparsityPattern {
    int n = 0;
    std::vector<int> offsets; // size n+1
    std::vector<int> cols;    // sorted within each row

    static SparsityPattern from_mesh(const SurfaceMesh& mesh);

    /// Index into cols/values for entry (i, j); -1 if absent.
    int find(int i, int j) const;
    int nnz() const { return static_cast<int>(cols.size()); }
};

/// Symmetric sparse matrix in CSR form over a shared sparsity pattern.
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;
    explicit SparseSymMatrix(std::shared_ptr<const SparsityPattern> pattern);

    int dimension() const { return pattern_ ? pattern_->n : 0; }
    const SparsityPattern& pattern() const { return *pattern_; }
    std::shared_ptr<const SparsityPattern> pattern_ptr() const { return pattern_; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    void add(int i, int j, double v); // entry must exist in the pattern
    double at(int i, int j) const;    // 0 for entries outside the pattern
    void set_zero();

    void matvec(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    /// values += alpha * other.values (same pattern required)
    void axpy(double alpha, const SparseSymMatrix& other);
    void scale(double alpha);

    double sum_entries() const;
    /// max_i |sum_j A_ij| — zero for stiffness matrices up to roundoff
    double max_abs_row_sum() const;
    /// max over stored entries of |A_ij - A_ji|
    double max_asymmetry() const;

    bool symmetric = true;

private:
    std::shared_ptr<const SparsityPattern> pattern_;
    std::vector<double> values_;
};

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0; // final true residual norm
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Converges when
/// ||A x - b|| <= tol * ||b|| (verified against the true residual before
/// returning); throws NumericalError carrying the final residual when max_iter
/// is exhausted. Deterministic for fixed inputs. x0 empty means start at zero.
CgResult cg_solve(const SparseSymMatrix& A, std::span<const double> b, double tol, int max_iter,
                  std::span<const double> x0 = {});

} // namespace surfpde
