#include "tubesynth/polytope.hpp"

#include <cmath>

#include "tubesynth/lp.hpp"

namespace tubesynth {

PolyhedralSet::PolyhedralSet(Eigen::MatrixXd M, Eigen::VectorXd m) : M_(std::move(M)), m_(std::move(m)) {
    if (M_.rows() < 1 || M_.cols() < 1) {
        throw std::invalid_argument("PolyhedralSet: M must have at least one row and one column");
    }
    if (m_.size() != M_.rows()) {
        throw std::invalid_argument("PolyhedralSet: bound vector has " + std::to_string(m_.size()) +
                                    " entries, M has " + std::to_string(M_.rows()) + " rows");
    }
    if (!M_.allFinite() || !m_.allFinite()) {
        throw std::invalid_argument("PolyhedralSet: non-finite data");
    }
    for (Eigen::Index j = 0; j < M_.rows(); ++j) {
        if (M_.row(j).isZero(0.0)) {
            throw std::invalid_argument("PolyhedralSet: row " + std::to_string(j) + " of M is zero");
        }
    }
}

PolyhedralSet PolyhedralSet::with_bounds(Eigen::VectorXd m) const { return PolyhedralSet(M_, std::move(m)); }

PolyhedralSet box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    if (lo.size() != hi.size() || lo.size() == 0) {
        throw std::invalid_argument("box: lo and hi must be nonempty and of equal length");
    }
    const Eigen::Index n = lo.size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, n);
    Eigen::VectorXd m(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (lo(i) > hi(i)) {
            throw std::invalid_argument("box: lo(" + std::to_string(i) + ") > hi(" + std::to_string(i) + ")");
        }
        M(2 * i, i) = 1.0;
        m(2 * i) = hi(i);
        M(2 * i + 1, i) = -1.0;
        m(2 * i + 1) = -lo(i);
    }
    return PolyhedralSet(std::move(M), std::move(m));
}

bool contains_point(const PolyhedralSet& P, const Eigen::VectorXd& x, double tol) {
    if (x.size() != P.dim()) {
        throw std::invalid_argument("contains_point: point has dimension " + std::to_string(x.size()) +
                                    ", set has " + std::to_string(P.dim()));
    }
    return ((P.M() * x - P.m()).array() <= tol).all();
}

SupportResult support(const PolyhedralSet& P, const Eigen::RowVectorXd& a) {
    if (a.size() != P.dim()) throw std::invalid_argument("support: direction has wrong dimension");
    auto prob = lp::LpProblem::with_variables(P.dim(), lp::Sense::Maximize);
    prob.c = a.transpose();
    prob.Ain = P.M();
    prob.bin = P.m();
    prob.free.assign(static_cast<std::size_t>(P.dim()), true);
    const lp::LpSolution sol = lp::solve(prob);
    switch (sol.status) {
        case lp::Status::Infeasible:
            throw PolytopeError(PolytopeError::Code::Empty, "support: polyhedral set is empty");
        case lp::Status::Unbounded:
            throw PolytopeError(PolytopeError::Code::Unbounded, "support: set is unbounded in the given direction");
        case lp::Status::Optimal: break;
    }
    return SupportResult{sol.objective, sol.x, sol.duals_in};
}

double support_max(const PolyhedralSet& P, const Eigen::RowVectorXd& a) { return support(P, a).value; }

bool is_empty(const PolyhedralSet& P) {
    auto prob = lp::LpProblem::with_variables(P.dim());
    prob.Ain = P.M();
    prob.bin = P.m();
    prob.free.assign(static_cast<std::size_t>(P.dim()), true);
    return lp::solve(prob).status == lp::Status::Infeasible;
}

bool is_bounded(const PolyhedralSet& P) {
    const Eigen::Index n = P.dim();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (double s : {1.0, -1.0}) {
            Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
            e(i) = s;
            try {
                support_max(P, e);
            } catch (const PolytopeError& err) {
                if (err.code() == PolytopeError::Code::Unbounded) return false;
                throw;
            }
        }
    }
    return true;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box(const PolyhedralSet& P) {
    const Eigen::Index n = P.dim();
    Eigen::VectorXd lo(n), hi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
        e(i) = 1.0;
        hi(i) = support_max(P, e);
        lo(i) = -support_max(P, -e);
    }
    return {lo, hi};
}

namespace {

double binomial(Eigen::Index n, Eigen::Index k) {
    double r = 1.0;
    for (Eigen::Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace

std::vector<Eigen::VectorXd> vertices(const PolyhedralSet& P, const VertexOptions& options) {
    const Eigen::Index n = P.dim();
    const Eigen::Index q = P.rows();
    if (n > options.max_dim) {
        throw PolytopeError(PolytopeError::Code::TooLarge, "vertices: dimension " + std::to_string(n) +
                                                               " exceeds cap " + std::to_string(options.max_dim));
    }
    if (q > options.max_rows) {
        throw PolytopeError(PolytopeError::Code::TooLarge, "vertices: " + std::to_string(q) +
                                                               " rows exceed cap " + std::to_string(options.max_rows));
    }
    if (!is_bounded(P)) {
        throw PolytopeError(PolytopeError::Code::Unbounded, "vertices: set is unbounded");
    }
    std::vector<Eigen::VectorXd> out;
    if (binomial(q, n) > 5e6) {
        throw PolytopeError(PolytopeError::Code::TooLarge, "vertices: too many row subsets to enumerate");
    }

    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    Eigen::MatrixXd sub(n, n);
    Eigen::VectorXd rhs(n);
    for (;;) {
        for (Eigen::Index i = 0; i < n; ++i) {
            sub.row(i) = P.M().row(idx[static_cast<std::size_t>(i)]);
            rhs(i) = P.m()(idx[static_cast<std::size_t>(i)]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        if (lu.rank() == n) {
            const Eigen::VectorXd v = lu.solve(rhs);
            const Eigen::VectorXd slack = P.M() * v - P.m();
            bool feasible = true;
            for (Eigen::Index j = 0; j < q && feasible; ++j) {
                feasible = slack(j) <= options.feasibility_tol * (1.0 + std::abs(P.m()(j)));
            }
            if (feasible) {
                bool duplicate = false;
                for (const auto& w : out) {
                    if ((w - v).cwiseAbs().maxCoeff() <= options.dedup_tol) {
                        duplicate = true;
                        break;
                    }
                }
                if (!duplicate) out.push_back(v);
            }
        }
        // next combination in lexicographic order
        Eigen::Index i = n - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == q - n + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (Eigen::Index k = i + 1; k < n; ++k) idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
    }
    return out;
}

}  // namespace tubesynth
