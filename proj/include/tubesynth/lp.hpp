#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tubesynth::lp {

enum class Sense { Minimize, Maximize };

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

// A dense linear program
//
//   min/max  c'x
//   s.t.     Aeq x  = beq
//            Ain x <= bin
//            x_j >= 0      unless free[j]
//
// An empty `free` vector means every variable is nonnegative.
struct LpProblem {
    Sense sense = Sense::Minimize;
    Eigen::VectorXd c;
    Eigen::MatrixXd Aeq;
    Eigen::VectorXd beq;
    Eigen::MatrixXd Ain;
    Eigen::VectorXd bin;
    std::vector<bool> free;

    // Empty constraint blocks with the right column count.
    static LpProblem with_variables(Eigen::Index num_vars, Sense sense = Sense::Minimize);

    Eigen::Index num_variables() const { return c.size(); }
    bool is_free(Eigen::Index j) const {
        return !free.empty() && free[static_cast<std::size_t>(j)];
    }

    // Throws std::invalid_argument on inconsistent block shapes.
    void validate() const;
};

// Dual multipliers follow the sensitivity convention: they are the rate of
// change of the optimal objective with respect to beq / bin, so that at an
// optimum  objective == beq'y_eq + bin'y_in.  For a maximization, y_in >= 0;
// for a minimization, y_in <= 0.
struct LpSolution {
    Status status = Status::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    Eigen::VectorXd duals_eq;
    Eigen::VectorXd duals_in;

    bool optimal() const { return status == Status::Optimal; }
};

// Raised when the basis becomes too ill-conditioned to continue; never
// folded into Infeasible/Unbounded.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimplexOptions {
    double feasibility_tol = 1e-8;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-9;
    long max_iterations = 200000;
};

class LpSolver {
public:
    virtual ~LpSolver() = default;
    virtual LpSolution solve(const LpProblem& problem) const = 0;
};

// Two-phase dense tableau simplex with Bland's rule. The reference backend.
class SimplexSolver final : public LpSolver {
public:
    SimplexSolver() = default;
    explicit SimplexSolver(SimplexOptions options) : options_(options) {}

    LpSolution solve(const LpProblem& problem) const override;

    const SimplexOptions& options() const { return options_; }

private:
    SimplexOptions options_;
};

// Solves with a default-configured SimplexSolver.
LpSolution solve(const LpProblem& problem);

}  // namespace tubesynth::lp
