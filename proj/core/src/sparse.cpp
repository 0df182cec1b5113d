#include "surfpde/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "surfpde/errors.hpp"

namespace surfpde {

SparsityPattern SparsityPattern::from_mesh(const SurfaceMesh& mesh) {
    const int n = mesh.num_vertices();
    std::vector<std::vector<int>> nbr(n);
    for (int v = 0; v < n; ++v) nbr[v].push_back(v);
    for (const auto& el : mesh.elements) {
        const int k = mesh.verts_per_element();
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                if (a != b) nbr[el[a]].push_back(el[b]);
    }
    SparsityPattern p;
    p.n = n;
    p.offsets.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) {
        auto& row = nbr[v];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        p.offsets[v + 1] = p.offsets[v] + static_cast<int>(row.size());
    }
    p.cols.reserve(p.offsets[n]);
    for (int v = 0; v < n; ++v) p.cols.insert(p.cols.end(), nbr[v].begin(), nbr[v].end());
    return p;
}

int SparsityPattern::find(int i, int j) const {
    const int lo = offsets[i], hi = offsets[i + 1];
    auto it = std::lower_bound(cols.begin() + lo, cols.begin() + hi, j);
    if (it == cols.begin() + hi || *it != j) return -1;
    return static_cast<int>(it - cols.begin());
}

SparseSymMatrix::SparseSymMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->cols.size(), 0.0) {}

void SparseSymMatrix::add(int i, int j, double v) {
    const int k = pattern_->find(i, j);
    if (k < 0)
        throw ValidationError("sparse: entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") not in sparsity pattern");
    values_[k] += v;
}

double SparseSymMatrix::at(int i, int j) const {
    const int k = pattern_->find(i, j);
    return k < 0 ? 0.0 : values_[k];
}

void SparseSymMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

void SparseSymMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    const auto& p = *pattern_;
    for (int i = 0; i < p.n; ++i) {
        double s = 0.0;
        for (int k = p.offsets[i]; k < p.offsets[i + 1]; ++k) s += values_[k] * x[p.cols[k]];
        y[i] = s;
    }
}

std::vector<double> SparseSymMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(dimension());
    matvec(x, y);
    return y;
}

void SparseSymMatrix::axpy(double alpha, const SparseSymMatrix& other) {
    if (other.pattern_ != pattern_)
        throw ValidationError("sparse: axpy requires matrices sharing one pattern");
    for (size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * other.values_[k];
}

void SparseSymMatrix::scale(double alpha) {
    for (double& v : values_) v *= alpha;
}

double SparseSymMatrix::sum_entries() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
}

double SparseSymMatrix::max_abs_row_sum() const {
    const auto& p = *pattern_;
    double r = 0.0;
    for (int i = 0; i < p.n; ++i) {
        double s = 0.0;
        for (int k = p.offsets[i]; k < p.offsets[i + 1]; ++k) s += values_[k];
        r = std::max(r, std::abs(s));
    }
    return r;
}

double SparseSymMatrix::max_asymmetry() const {
    const auto& p = *pattern_;
    double r = 0.0;
    for (int i = 0; i < p.n; ++i)
        for (int k = p.offsets[i]; k < p.offsets[i + 1]; ++k) {
            const int j = p.cols[k];
            if (j > i) r = std::max(r, std::abs(values_[k] - at(j, i)));
        }
    return r;
}

namespace {

double dot_vec(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_vec(std::span<const double> a) { return std::sqrt(dot_vec(a, a)); }

} // namespace

CgResult cg_solve(const SparseSymMatrix& A, std::span<const double> b, double tol, int max_iter,
                  std::span<const double> x0) {
    if (!(tol > 0.0)) throw ValidationError("cg: tolerance must be positive");
    const int n = A.dimension();
    if (static_cast<int>(b.size()) != n) throw ValidationError("cg: rhs size mismatch");

    CgResult res;
    res.x.assign(n, 0.0);
    if (!x0.empty()) {
        if (static_cast<int>(x0.size()) != n) throw ValidationError("cg: x0 size mismatch");
        std::copy(x0.begin(), x0.end(), res.x.begin());
    }

    const double norm_b = norm_vec(b);
    if (norm_b == 0.0) {
        res.x.assign(n, 0.0);
        return res;
    }
    const double target = tol * norm_b;

    // Jacobi preconditioner
    std::vector<double> inv_diag(n);
    for (int i = 0; i < n; ++i) {
        const double d = A.at(i, i);
        if (!(d > 0.0)) throw NumericalError("cg: nonpositive diagonal at row " + std::to_string(i));
        inv_diag[i] = 1.0 / d;
    }

    std::vector<double> r(n), z(n), p(n), Ap(n);
    A.matvec(res.x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];

    int iter = 0;
    while (true) {
        if (norm_vec(r) <= target) {
            // recurrence residual can drift; confirm with the true residual
            A.matvec(res.x, Ap);
            for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
            const double rnorm = norm_vec(r);
            if (rnorm <= target * (1.0 + 1e-7)) {
                res.iterations = iter;
                res.residual = rnorm;
                return res;
            }
            // fall through: restart from the exact residual
        }
        if (iter >= max_iter)
            throw NumericalError("cg: max_iter=" + std::to_string(max_iter) +
                                 " reached, residual " + std::to_string(norm_vec(r)));

        // (re)start: fresh preconditioned direction
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        double rz = dot_vec(r, z);
        p = z;
        while (iter < max_iter) {
            A.matvec(p, Ap);
            const double pAp = dot_vec(p, Ap);
            if (!(pAp > 0.0))
                throw NumericalError("cg: matrix not positive definite (p^T A p = " +
                                     std::to_string(pAp) + ")");
            const double alpha = rz / pAp;
            for (int i = 0; i < n; ++i) {
                res.x[i] += alpha * p[i];
                r[i] -= alpha * Ap[i];
            }
            ++iter;
            if (norm_vec(r) <= target) break;
            for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            const double rz_new = dot_vec(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
    }
}

} // namespace surfpde
