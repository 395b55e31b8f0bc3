#include "tubesynth/reach.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "tubesynth/lp.hpp"

namespace tubesynth {

namespace {

std::string dims(const Eigen::MatrixXd& X) {
    return std::to_string(X.rows()) + "x" + std::to_string(X.cols());
}

// Core of both containment checks: for each vertex map T_i and each row j of
// P2, rho_ij = max (M2_j T_i) z over the source set. The LP duals are the
// certificate rows.
ContainmentReport check_images(const std::vector<Eigen::MatrixXd>& maps, const PolyhedralSet& source,
                               const PolyhedralSet& P2, double tol) {
    ContainmentReport report;
    report.worst_violation = -std::numeric_limits<double>::infinity();
    std::vector<Eigen::MatrixXd> certs;
    certs.reserve(maps.size());
    for (const auto& T : maps) {
        Eigen::MatrixXd G(P2.rows(), source.rows());
        const Eigen::MatrixXd directions = P2.M() * T;
        for (Eigen::Index j = 0; j < P2.rows(); ++j) {
            SupportResult sup;
            try {
                sup = support(source, directions.row(j));
            } catch (const PolytopeError& err) {
                if (err.code() != PolytopeError::Code::Unbounded) throw;
                report.contained = false;
                report.worst_violation = std::numeric_limits<double>::infinity();
                return report;
            }
            report.worst_violation = std::max(report.worst_violation, sup.value - P2.m()(j));
            G.row(j) = sup.dual.transpose();
        }
        certs.push_back(std::move(G));
    }
    report.contained = report.worst_violation <= tol;
    if (report.contained) report.certificates = std::move(certs);
    return report;
}

}  // namespace

PolytopicModel::PolytopicModel(std::vector<Eigen::MatrixXd> A, std::vector<Eigen::MatrixXd> B, Eigen::MatrixXd C,
                               std::optional<Eigen::MatrixXd> D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
    if (A_.empty()) throw std::invalid_argument("PolytopicModel: at least one vertex is required");
    if (A_.size() != B_.size()) {
        throw std::invalid_argument("PolytopicModel: " + std::to_string(A_.size()) + " A matrices but " +
                                    std::to_string(B_.size()) + " B matrices");
    }
    const Eigen::Index n = A_.front().rows();
    const Eigen::Index m = B_.front().cols();
    if (n < 1) throw std::invalid_argument("PolytopicModel: empty state dimension");
    for (std::size_t i = 0; i < A_.size(); ++i) {
        if (A_[i].rows() != n || A_[i].cols() != n) {
            throw std::invalid_argument("PolytopicModel: A_" + std::to_string(i) + " is " + dims(A_[i]) +
                                        ", expected " + std::to_string(n) + "x" + std::to_string(n));
        }
        if (B_[i].rows() != n || B_[i].cols() != m) {
            throw std::invalid_argument("PolytopicModel: B_" + std::to_string(i) + " is " + dims(B_[i]) +
                                        ", expected " + std::to_string(n) + "x" + std::to_string(m));
        }
    }
    if (C_.cols() != n) {
        throw std::invalid_argument("PolytopicModel: C is " + dims(C_) + ", expected " + std::to_string(n) +
                                    " columns");
    }
    if (D_ && D_->rows() != n) {
        throw std::invalid_argument("PolytopicModel: D is " + dims(*D_) + ", expected " + std::to_string(n) +
                                    " rows");
    }
}

Eigen::MatrixXd PolytopicModel::closed_loop(std::size_t i, const Eigen::MatrixXd& F) const {
    if (F.rows() != m() || F.cols() != r()) {
        throw std::invalid_argument("closed_loop: F is " + dims(F) + ", expected " + std::to_string(m()) + "x" +
                                    std::to_string(r()));
    }
    return A(i) + B(i) * F * C_;
}

PolytopicModel PolytopicModel::with_disturbance(Eigen::MatrixXd D) const { return PolytopicModel(A_, B_, C_, std::move(D)); }

ContainmentReport check_containment(const PolytopicModel& model, const Eigen::MatrixXd& F, const PolyhedralSet& P1,
                                    const PolyhedralSet& P2, double tol) {
    if (P1.dim() != model.n() || P2.dim() != model.n()) {
        throw std::invalid_argument("check_containment: set dimensions do not match the model state dimension");
    }
    std::vector<Eigen::MatrixXd> maps;
    for (std::size_t i = 0; i < model.s(); ++i) maps.push_back(model.closed_loop(i, F));
    return check_images(maps, P1, P2, tol);
}

ContainmentReport check_containment_disturbance(const PolytopicModel& model, const Eigen::MatrixXd& F,
                                                const PolyhedralSet& P1, const PolyhedralSet& Pv,
                                                const PolyhedralSet& P2, double tol) {
    if (!model.has_disturbance()) throw std::invalid_argument("check_containment_disturbance: model has no D");
    if (P1.dim() != model.n() || P2.dim() != model.n()) {
        throw std::invalid_argument("check_containment_disturbance: set dimensions do not match the model");
    }
    if (Pv.dim() != model.p()) {
        throw std::invalid_argument("check_containment_disturbance: disturbance set has dimension " +
                                    std::to_string(Pv.dim()) + ", D has " + std::to_string(model.p()) + " columns");
    }
    const Eigen::Index n = model.n();
    const Eigen::Index p = model.p();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(P1.rows() + Pv.rows(), n + p);
    M.topLeftCorner(P1.rows(), n) = P1.M();
    M.bottomRightCorner(Pv.rows(), p) = Pv.M();
    Eigen::VectorXd bound(P1.rows() + Pv.rows());
    bound << P1.m(), Pv.m();
    const PolyhedralSet stacked(std::move(M), std::move(bound));

    std::vector<Eigen::MatrixXd> maps;
    for (std::size_t i = 0; i < model.s(); ++i) {
        Eigen::MatrixXd T(n, n + p);
        T << model.closed_loop(i, F), *model.D();
        maps.push_back(std::move(T));
    }
    return check_images(maps, stacked, P2, tol);
}

double contractivity_factor(const Eigen::MatrixXd& A, const PolyhedralSet& W) {
    const Eigen::Index n = W.dim();
    const Eigen::Index q = W.rows();
    if (A.rows() != n || A.cols() != n) throw std::invalid_argument("contractivity_factor: A has wrong shape");
    if (!W.m().isOnes(0.0)) throw std::invalid_argument("contractivity_factor: W must be given as P(W, 1)");

    // Variables: G row-major (q*q, nonnegative), then eta (nonnegative).
    const Eigen::Index nv = q * q + 1;
    auto prob = lp::LpProblem::with_variables(nv);
    prob.c(nv - 1) = 1.0;
    prob.Aeq = Eigen::MatrixXd::Zero(q * n, nv);
    prob.beq.resize(q * n);
    const Eigen::MatrixXd WA = W.M() * A;
    for (Eigen::Index j = 0; j < q; ++j) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const Eigen::Index row = j * n + c;
            for (Eigen::Index l = 0; l < q; ++l) prob.Aeq(row, j * q + l) = W.M()(l, c);
            prob.beq(row) = WA(j, c);
        }
    }
    prob.Ain = Eigen::MatrixXd::Zero(q, nv);
    prob.bin = Eigen::VectorXd::Zero(q);
    for (Eigen::Index j = 0; j < q; ++j) {
        prob.Ain.row(j).segment(j * q, q).setOnes();
        prob.Ain(j, nv - 1) = -1.0;
    }
    const auto sol = lp::solve(prob);
    if (!sol.optimal()) {
        throw lp::NumericalError(std::string("contractivity_factor: certificate system is ") +
                                 lp::to_string(sol.status) + "; W is not a C-set for this map");
    }
    return sol.objective;
}

ContainmentReport check_robust_invariant(const PolytopicModel& model, const Eigen::MatrixXd& F_hat,
                                         const PolyhedralSet& S, const PolyhedralSet& V, double tol) {
    return check_containment_disturbance(model, F_hat, S, V, S, tol);
}

}  // namespace tubesynth
