#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tubesynth {

inline constexpr double kMembershipTol = 1e-7;
inline constexpr double kVertexTol = 1e-9;

// {x : M x <= m}. Rows of M are never all zero. Nonemptiness is not checked
// here; operations that need it discover emptiness through LP phase 1.
class PolyhedralSet {
public:
    PolyhedralSet(Eigen::MatrixXd M, Eigen::VectorXd m);

    const Eigen::MatrixXd& M() const { return M_; }
    const Eigen::VectorXd& m() const { return m_; }
    Eigen::Index dim() const { return M_.cols(); }
    Eigen::Index rows() const { return M_.rows(); }

    // Same normals, different bounds.
    PolyhedralSet with_bounds(Eigen::VectorXd m) const;

private:
    Eigen::MatrixXd M_;
    Eigen::VectorXd m_;
};

class PolytopeError : public std::runtime_error {
public:
    enum class Code { Empty, Unbounded, TooLarge };

    PolytopeError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

PolyhedralSet box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

bool contains_point(const PolyhedralSet& P, const Eigen::VectorXd& x, double tol = kMembershipTol);

// max a.x over P. Throws PolytopeError{Empty} or PolytopeError{Unbounded}.
double support_max(const PolyhedralSet& P, const Eigen::RowVectorXd& a);

// Like support_max, also returning a maximizer and the dual vector g with
// g >= 0, g'M = a and g'm = max.
struct SupportResult {
    double value = 0.0;
    Eigen::VectorXd argmax;
    Eigen::VectorXd dual;
};
SupportResult support(const PolyhedralSet& P, const Eigen::RowVectorXd& a);

bool is_empty(const PolyhedralSet& P);

// Throws PolytopeError{Empty} for empty P.
bool is_bounded(const PolyhedralSet& P);

struct VertexOptions {
    Eigen::Index max_dim = 6;
    Eigen::Index max_rows = 64;
    double dedup_tol = kVertexTol;
    double feasibility_tol = kVertexTol;
};

// All vertices, by brute force over n-row subsets of M. Requires P bounded
// and nonempty.
std::vector<Eigen::VectorXd> vertices(const PolyhedralSet& P, const VertexOptions& options = {});

// Axis-aligned bounding box as (lo, hi).
std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box(const PolyhedralSet& P);

}  // namespace tubesynth
