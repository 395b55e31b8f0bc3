#include "tubesynth/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tubesynth::lp {

const char* to_string(Status status) {
    switch (status) {
        case Status::Optimal: return "Optimal";
        case Status::Infeasible: return "Infeasible";
        case Status::Unbounded: return "Unbounded";
    }
    return "?";
}

LpProblem LpProblem::with_variables(Eigen::Index num_vars, Sense sense) {
    LpProblem p;
    p.sense = sense;
    p.c = Eigen::VectorXd::Zero(num_vars);
    p.Aeq.resize(0, num_vars);
    p.beq.resize(0);
    p.Ain.resize(0, num_vars);
    p.bin.resize(0);
    return p;
}

void LpProblem::validate() const {
    const Eigen::Index n = c.size();
    if (n == 0) throw std::invalid_argument("LpProblem: no decision variables");
    if (Aeq.cols() != n || Ain.cols() != n) {
        throw std::invalid_argument("LpProblem: constraint blocks must have " + std::to_string(n) +
                                    " columns");
    }
    if (Aeq.rows() != beq.size()) throw std::invalid_argument("LpProblem: Aeq/beq row mismatch");
    if (Ain.rows() != bin.size()) throw std::invalid_argument("LpProblem: Ain/bin row mismatch");
    if (!free.empty() && static_cast<Eigen::Index>(free.size()) != n) {
        throw std::invalid_argument("LpProblem: free-variable mask has wrong length");
    }
    if (!c.allFinite() || !Aeq.allFinite() || !beq.allFinite() || !Ain.allFinite() ||
        !bin.allFinite()) {
        throw std::invalid_argument("LpProblem: non-finite data");
    }
}

namespace {

// Standard form  min c'z  s.t.  A z = b,  z >= 0,  b >= 0,  plus bookkeeping to
// map back to the user's variables and rows.
struct StandardForm {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd cost;
    std::vector<double> row_sign;      // sigma_r: A row r = sigma_r * original row
    std::vector<Eigen::Index> pos_col;  // user var -> column of its positive part
    std::vector<Eigen::Index> neg_col;  // user var -> column of its negative part, or -1
    Eigen::Index num_structural = 0;    // columns before the artificial block
    std::vector<Eigen::Index> initial_basis;  // per row; >= num_structural means artificial
};

StandardForm to_standard_form(const LpProblem& p) {
    StandardForm sf;
    const Eigen::Index n = p.num_variables();
    const Eigen::Index me = p.Aeq.rows();
    const Eigen::Index mi = p.Ain.rows();
    const Eigen::Index rows = me + mi;

    Eigen::Index col = 0;
    sf.pos_col.resize(static_cast<std::size_t>(n));
    sf.neg_col.assign(static_cast<std::size_t>(n), -1);
    for (Eigen::Index j = 0; j < n; ++j) {
        sf.pos_col[static_cast<std::size_t>(j)] = col++;
        if (p.is_free(j)) sf.neg_col[static_cast<std::size_t>(j)] = col++;
    }
    const Eigen::Index first_slack = col;
    col += mi;
    sf.num_structural = col;

    sf.row_sign.assign(static_cast<std::size_t>(rows), 1.0);
    sf.initial_basis.assign(static_cast<std::size_t>(rows), -1);
    Eigen::Index num_artificial = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double rhs = r < me ? p.beq(r) : p.bin(r - me);
        if (rhs < 0.0) sf.row_sign[static_cast<std::size_t>(r)] = -1.0;
        const bool slack_usable = r >= me && rhs >= 0.0;
        if (slack_usable) {
            sf.initial_basis[static_cast<std::size_t>(r)] = first_slack + (r - me);
        } else {
            sf.initial_basis[static_cast<std::size_t>(r)] = sf.num_structural + num_artificial++;
        }
    }

    const Eigen::Index cols = sf.num_structural + num_artificial;
    sf.A = Eigen::MatrixXd::Zero(rows, cols);
    sf.b.resize(rows);
    sf.cost = Eigen::VectorXd::Zero(cols);
    const double obj_sign = p.sense == Sense::Maximize ? -1.0 : 1.0;

    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index pc = sf.pos_col[static_cast<std::size_t>(j)];
        const Eigen::Index nc = sf.neg_col[static_cast<std::size_t>(j)];
        sf.cost(pc) = obj_sign * p.c(j);
        if (nc >= 0) sf.cost(nc) = -obj_sign * p.c(j);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double sigma = sf.row_sign[static_cast<std::size_t>(r)];
        const bool is_eq = r < me;
        const auto orig = is_eq ? Eigen::RowVectorXd(p.Aeq.row(r)) : Eigen::RowVectorXd(p.Ain.row(r - me));
        for (Eigen::Index j = 0; j < n; ++j) {
            const Eigen::Index pc = sf.pos_col[static_cast<std::size_t>(j)];
            const Eigen::Index nc = sf.neg_col[static_cast<std::size_t>(j)];
            sf.A(r, pc) = sigma * orig(j);
            if (nc >= 0) sf.A(r, nc) = -sigma * orig(j);
        }
        if (!is_eq) sf.A(r, first_slack + (r - me)) = sigma;
        sf.b(r) = sigma * (is_eq ? p.beq(r) : p.bin(r - me));
        const Eigen::Index basic = sf.initial_basis[static_cast<std::size_t>(r)];
        if (basic >= sf.num_structural) sf.A(r, basic) = 1.0;
    }
    return sf;
}

enum class PhaseResult { Optimal, Unbounded };

class Tableau {
public:
    Tableau(const StandardForm& sf, const SimplexOptions& opt)
        : opt_(opt), rows_(sf.A.rows()), cols_(sf.A.cols()), num_structural_(sf.num_structural) {
        t_ = Eigen::MatrixXd::Zero(rows_ + 1, cols_ + 1);
        t_.topLeftCorner(rows_, cols_) = sf.A;
        t_.topRightCorner(rows_, 1) = sf.b;
        basis_ = sf.initial_basis;
        redundant_.assign(static_cast<std::size_t>(rows_), false);
    }

    void set_objective(const Eigen::VectorXd& cost) {
        t_.row(rows_).setZero();
        t_.row(rows_).head(cols_) = cost.transpose();
        for (Eigen::Index r = 0; r < rows_; ++r) {
            const double cb = cost(basis_[static_cast<std::size_t>(r)]);
            if (cb != 0.0) t_.row(rows_) -= cb * t_.row(r);
        }
    }

    // Minimizes the current objective row. Columns at or beyond
    // `allowed_cols` never enter.
    PhaseResult run(Eigen::Index allowed_cols, long& iterations) {
        for (;;) {
            if (++iterations > opt_.max_iterations) {
                throw NumericalError("simplex: iteration limit exceeded");
            }
            Eigen::Index entering = -1;
            for (Eigen::Index j = 0; j < allowed_cols; ++j) {
                if (t_(rows_, j) < -opt_.optimality_tol) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) return PhaseResult::Optimal;

            Eigen::Index leaving = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Eigen::Index r = 0; r < rows_; ++r) {
                if (redundant_[static_cast<std::size_t>(r)]) continue;
                const double a = t_(r, entering);
                if (a <= opt_.pivot_tol) continue;
                const double ratio = std::max(t_(r, cols_), 0.0) / a;
                const double tie = 1e-12 * (1.0 + std::abs(best_ratio));
                if (leaving < 0 || ratio < best_ratio - tie) {
                    leaving = r;
                    best_ratio = ratio;
                } else if (ratio <= best_ratio + tie &&
                           basis_[static_cast<std::size_t>(r)] <
                               basis_[static_cast<std::size_t>(leaving)]) {
                    leaving = r;
                    best_ratio = std::min(best_ratio, ratio);
                }
            }
            if (leaving < 0) return PhaseResult::Unbounded;
            pivot(leaving, entering);
        }
    }

    void pivot(Eigen::Index r, Eigen::Index c) {
        const double p = t_(r, c);
        if (std::abs(p) < opt_.pivot_tol) throw NumericalError("simplex: vanishing pivot");
        t_.row(r) /= p;
        for (Eigen::Index i = 0; i <= rows_; ++i) {
            if (i == r) continue;
            const double f = t_(i, c);
            if (f != 0.0) t_.row(i) -= f * t_.row(r);
        }
        t_(r, c) = 1.0;
        basis_[static_cast<std::size_t>(r)] = c;
    }

    // Pivots artificial variables out of the basis after phase 1. Rows whose
    // structural part vanished are linearly dependent and get flagged.
    void expel_artificials() {
        for (Eigen::Index r = 0; r < rows_; ++r) {
            if (basis_[static_cast<std::size_t>(r)] < num_structural_) continue;
            Eigen::Index best = -1;
            double best_mag = opt_.pivot_tol * 100.0;
            for (Eigen::Index j = 0; j < num_structural_; ++j) {
                const double mag = std::abs(t_(r, j));
                if (mag > best_mag) {
                    best = j;
                    best_mag = mag;
                }
            }
            if (best < 0) {
                redundant_[static_cast<std::size_t>(r)] = true;
            } else {
                pivot(r, best);
            }
        }
    }

    double objective_value() const { return -t_(rows_, cols_); }
    const std::vector<Eigen::Index>& basis() const { return basis_; }
    const std::vector<bool>& redundant() const { return redundant_; }
    Eigen::Index rows() const { return rows_; }

private:
    SimplexOptions opt_;
    Eigen::Index rows_;
    Eigen::Index cols_;
    Eigen::Index num_structural_;
    Eigen::MatrixXd t_;
    std::vector<Eigen::Index> basis_;
    std::vector<bool> redundant_;
};

}  // namespace

LpSolution SimplexSolver::solve(const LpProblem& problem) const {
    problem.validate();
    const StandardForm sf = to_standard_form(problem);
    Tableau tab(sf, options_);
    long iterations = 0;

    LpSolution sol;
    const Eigen::Index rows = sf.A.rows();
    const Eigen::Index cols = sf.A.cols();

    if (cols > sf.num_structural) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
        phase1.tail(cols - sf.num_structural).setOnes();
        tab.set_objective(phase1);
        tab.run(cols, iterations);
        const double scale = std::max(1.0, sf.b.size() ? sf.b.cwiseAbs().maxCoeff() : 0.0);
        if (tab.objective_value() > options_.feasibility_tol * scale) {
            sol.status = Status::Infeasible;
            return sol;
        }
        tab.expel_artificials();
    }

    tab.set_objective(sf.cost);
    if (tab.run(sf.num_structural, iterations) == PhaseResult::Unbounded) {
        sol.status = Status::Unbounded;
        return sol;
    }

    // Recompute the basic solution and the duals from the original data so
    // that accumulated tableau round-off does not leak into the result.
    std::vector<Eigen::Index> active_rows;
    std::vector<Eigen::Index> basic_cols;
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (tab.redundant()[static_cast<std::size_t>(r)]) continue;
        active_rows.push_back(r);
        basic_cols.push_back(tab.basis()[static_cast<std::size_t>(r)]);
    }
    const auto nb = static_cast<Eigen::Index>(active_rows.size());
    Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
    Eigen::VectorXd y_std = Eigen::VectorXd::Zero(rows);
    if (nb > 0) {
        Eigen::MatrixXd B(nb, nb);
        Eigen::VectorXd b(nb);
        Eigen::VectorXd cb(nb);
        for (Eigen::Index i = 0; i < nb; ++i) {
            b(i) = sf.b(active_rows[static_cast<std::size_t>(i)]);
            cb(i) = sf.cost(basic_cols[static_cast<std::size_t>(i)]);
            for (Eigen::Index k = 0; k < nb; ++k) {
                B(i, k) = sf.A(active_rows[static_cast<std::size_t>(i)],
                               basic_cols[static_cast<std::size_t>(k)]);
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        if (!(lu.rcond() > 1e-13)) throw NumericalError("simplex: ill-conditioned optimal basis");
        const Eigen::VectorXd zb = lu.solve(b);
        const Eigen::VectorXd y = lu.transpose().solve(cb);
        const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < nb; ++i) {
            double v = zb(i);
            if (v < -1e-6 * scale) throw NumericalError("simplex: basic solution lost feasibility");
            z(basic_cols[static_cast<std::size_t>(i)]) = std::max(v, 0.0);
            y_std(active_rows[static_cast<std::size_t>(i)]) = y(i);
        }
    }

    const Eigen::Index n = problem.num_variables();
    sol.status = Status::Optimal;
    sol.x.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double v = z(sf.pos_col[static_cast<std::size_t>(j)]);
        const Eigen::Index nc = sf.neg_col[static_cast<std::size_t>(j)];
        if (nc >= 0) v -= z(nc);
        sol.x(j) = v;
    }
    sol.objective = problem.c.dot(sol.x);

    const double dual_sign = problem.sense == Sense::Maximize ? -1.0 : 1.0;
    const Eigen::Index me = problem.Aeq.rows();
    sol.duals_eq.resize(me);
    sol.duals_in.resize(problem.Ain.rows());
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double y = dual_sign * sf.row_sign[static_cast<std::size_t>(r)] * y_std(r);
        if (r < me) {
            sol.duals_eq(r) = y;
        } else {
            sol.duals_in(r - me) = y;
        }
    }
    return sol;
}

LpSolution solve(const LpProblem& problem) { return SimplexSolver{}.solve(problem); }

}  // namespace tubesynth::lp
