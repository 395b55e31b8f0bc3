#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tubesynth/polytope.hpp"

namespace tubesynth {

inline constexpr double kContainmentTol = 1e-7;

// x(k+1) = A(k) x(k) + B(k) u(k) + D v(k),  y(k) = C x(k),
// with [A(k) B(k)] in the convex hull of the vertex pairs (A_i, B_i).
class PolytopicModel {
public:
    PolytopicModel(std::vector<Eigen::MatrixXd> A, std::vector<Eigen::MatrixXd> B, Eigen::MatrixXd C,
                   std::optional<Eigen::MatrixXd> D = std::nullopt);

    Eigen::Index n() const { return A_.front().rows(); }
    Eigen::Index m() const { return B_.front().cols(); }
    Eigen::Index r() const { return C_.rows(); }
    Eigen::Index p() const { return D_ ? D_->cols() : 0; }
    std::size_t s() const { return A_.size(); }

    const Eigen::MatrixXd& A(std::size_t i) const { return A_.at(i); }
    const Eigen::MatrixXd& B(std::size_t i) const { return B_.at(i); }
    const Eigen::MatrixXd& C() const { return C_; }
    const std::optional<Eigen::MatrixXd>& D() const { return D_; }
    bool has_disturbance() const { return D_.has_value(); }

    // A_i + B_i F C
    Eigen::MatrixXd closed_loop(std::size_t i, const Eigen::MatrixXd& F) const;

    PolytopicModel with_disturbance(Eigen::MatrixXd D) const;

private:
    std::vector<Eigen::MatrixXd> A_;
    std::vector<Eigen::MatrixXd> B_;
    Eigen::MatrixXd C_;
    std::optional<Eigen::MatrixXd> D_;
};

struct ContainmentReport {
    bool contained = false;
    // One per model vertex, present only when contained.
    std::vector<Eigen::MatrixXd> certificates;
    // max over vertices i and target rows j of rho_ij - nu_j; +inf when some
    // support is unbounded.
    double worst_violation = 0.0;
};

// Decides whether the one-step reachable set of P1 under u = F y lies in P2.
// Throws PolytopeError{Empty} if P1 is empty.
ContainmentReport check_containment(const PolytopicModel& model, const Eigen::MatrixXd& F,
                                    const PolyhedralSet& P1, const PolyhedralSet& P2,
                                    double tol = kContainmentTol);

// Same with the additive term D v, v in Pv. Certificates act on the stacked
// vector (x, v), i.e. they have P1.rows() + Pv.rows() columns.
ContainmentReport check_containment_disturbance(const PolytopicModel& model, const Eigen::MatrixXd& F,
                                                const PolyhedralSet& P1, const PolyhedralSet& Pv,
                                                const PolyhedralSet& P2, double tol = kContainmentTol);

// Smallest eta >= 0 for which some G >= 0 has G W = W A and G 1 <= eta 1.
// W must be of the form P(W, 1).
double contractivity_factor(const Eigen::MatrixXd& A, const PolyhedralSet& W);

// S robustly invariant for x+ = (A_i + B_i F_hat C) x + D v, v in V.
ContainmentReport check_robust_invariant(const PolytopicModel& model, const Eigen::MatrixXd& F_hat,
                                         const PolyhedralSet& S, const PolyhedralSet& V,
                                         double tol = kContainmentTol);

}  // namespace tubesynth
