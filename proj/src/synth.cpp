#include "tubesynth/synth.hpp"

#include <limits>
#include <string>

namespace tubesynth {

const char* to_string(Provenance p) { return p == Provenance::TubeExact ? "TubeExact" : "Shrunk"; }

void SynthesisProblem::validate() const {
    const std::size_t K = tube.horizon();
    if (K == 0) throw std::invalid_argument("synthesis: horizon must be at least 1");
    if (tube.dim() != model.n()) {
        throw std::invalid_argument("synthesis: tube dimension " + std::to_string(tube.dim()) +
                                    " does not match state dimension " + std::to_string(model.n()));
    }
    if (disturbance) {
        if (!model.has_disturbance()) throw std::invalid_argument("synthesis: disturbance sets given but model has no D");
        if (disturbance->sets.size() != K) {
            throw std::invalid_argument("synthesis: need " + std::to_string(K) + " disturbance sets, got " +
                                        std::to_string(disturbance->sets.size()));
        }
        for (std::size_t k = 0; k < K; ++k) {
            if (disturbance->sets[k].dim() != model.p()) {
                throw std::invalid_argument("synthesis: V(" + std::to_string(k) + ") has wrong dimension");
            }
        }
    }
    if (control_constraints) {
        if (control_constraints->sets.size() != K) {
            throw std::invalid_argument("synthesis: need " + std::to_string(K) + " control constraint sets, got " +
                                        std::to_string(control_constraints->sets.size()));
        }
        for (std::size_t k = 0; k < K; ++k) {
            if (control_constraints->sets[k].dim() != model.m()) {
                throw std::invalid_argument("synthesis: U(" + std::to_string(k) + ") has wrong dimension");
            }
        }
    }
    if (a5_dv_in_x && !disturbance) throw std::invalid_argument("synthesis: A5 requires a disturbance tube");

    TubeRequirements req;
    req.bounded = options.require_bounded || control_constraints.has_value();
    validate_tube(tube, req);

    if (a5_dv_in_x) {
        // A4: D V(k) inside H(k+1).
        for (std::size_t k = 0; k < K; ++k) {
            for (const auto& v : vertices(disturbance->sets[k])) {
                if (!contains_point(tube.at(k + 1), *model.D() * v, options.containment_tol)) {
                    throw std::invalid_argument("synthesis: D V(" + std::to_string(k) + ") is not inside H(" +
                                                std::to_string(k + 1) + ")");
                }
            }
        }
    }
}

Lp1 build_lp1(std::size_t k, const SynthesisProblem& problem, const Eigen::VectorXd& psi_next) {
    const auto& model = problem.model;
    const Eigen::MatrixXd& Q0 = problem.tube.Q(k);
    const Eigen::VectorXd& phi = problem.tube.phi(k);
    const Eigen::MatrixXd& Q1 = problem.tube.Q(k + 1);
    if (psi_next.size() != Q1.rows()) throw std::invalid_argument("build_lp1: psi(k+1) has wrong length");

    const bool disturbed = problem.disturbance.has_value();
    const PolyhedralSet* V = disturbed ? &problem.disturbance->sets.at(k) : nullptr;
    const Eigen::Index n = model.n();
    const Eigen::Index p = disturbed ? model.p() : 0;
    const Eigen::Index q0 = Q0.rows();
    const Eigen::Index qv = disturbed ? V->rows() : 0;

    Lp1Layout L;
    L.s = model.s();
    L.g_rows = Q1.rows();
    L.g_cols = q0 + qv;
    L.f_rows = model.m();
    L.f_cols = model.r();

    const Eigen::Index nv = L.num_variables();
    auto prob = lp::LpProblem::with_variables(nv, lp::Sense::Minimize);
    prob.c.segment(L.eps_offset(), L.g_rows).setOnes();
    prob.free.assign(static_cast<std::size_t>(nv), false);
    for (Eigen::Index f = 0; f < L.f_rows * L.f_cols; ++f) prob.free[static_cast<std::size_t>(L.f_offset() + f)] = true;

    // G_i [Q0 0; 0 W] = Q1 [A_i + B_i F C, D]
    const Eigen::Index eq_per_vertex = L.g_rows * (n + p);
    prob.Aeq = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(L.s) * eq_per_vertex, nv);
    prob.beq.resize(prob.Aeq.rows());
    // G_i [phi; gamma] - eps <= psi(k+1)
    prob.Ain = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(L.s) * L.g_rows, nv);
    prob.bin.resize(prob.Ain.rows());

    const Eigen::MatrixXd& C = model.C();
    for (std::size_t i = 0; i < L.s; ++i) {
        const Eigen::Index g0 = L.g_offset(i);
        const Eigen::MatrixXd Q1A = Q1 * model.A(i);
        const Eigen::MatrixXd Q1B = Q1 * model.B(i);
        const Eigen::Index row0 = static_cast<Eigen::Index>(i) * eq_per_vertex;
        for (Eigen::Index j = 0; j < L.g_rows; ++j) {
            for (Eigen::Index c = 0; c < n; ++c) {
                const Eigen::Index row = row0 + j * (n + p) + c;
                for (Eigen::Index l = 0; l < q0; ++l) prob.Aeq(row, g0 + j * L.g_cols + l) = Q0(l, c);
                for (Eigen::Index a = 0; a < L.f_rows; ++a) {
                    for (Eigen::Index b = 0; b < L.f_cols; ++b) {
                        prob.Aeq(row, L.f_offset() + a * L.f_cols + b) = -Q1B(j, a) * C(b, c);
                    }
                }
                prob.beq(row) = Q1A(j, c);
            }
            if (disturbed) {
                const Eigen::MatrixXd Q1D = Q1 * *model.D();
                for (Eigen::Index d = 0; d < p; ++d) {
                    const Eigen::Index row = row0 + j * (n + p) + n + d;
                    for (Eigen::Index l = 0; l < qv; ++l) prob.Aeq(row, g0 + j * L.g_cols + q0 + l) = V->M()(l, d);
                    prob.beq(row) = Q1D(j, d);
                }
            }

            const Eigen::Index irow = static_cast<Eigen::Index>(i) * L.g_rows + j;
            prob.Ain.row(irow).segment(g0 + j * L.g_cols, q0) = phi.transpose();
            if (disturbed) prob.Ain.row(irow).segment(g0 + j * L.g_cols + q0, qv) = V->m().transpose();
            prob.Ain(irow, L.eps_offset() + j) = -1.0;
            prob.bin(irow) = psi_next(j);
        }
    }

    if (problem.control_constraints) {
        // U F C h <= theta for every vertex h of H(k)
        const auto& U = problem.control_constraints->sets.at(k);
        const auto verts = vertices(problem.tube.at(k));
        const Eigen::Index extra = U.rows() * static_cast<Eigen::Index>(verts.size());
        const Eigen::Index base = prob.Ain.rows();
        prob.Ain.conservativeResize(base + extra, Eigen::NoChange);
        prob.bin.conservativeResize(base + extra);
        prob.Ain.bottomRows(extra).setZero();
        Eigen::Index row = base;
        for (const auto& h : verts) {
            const Eigen::VectorXd y = C * h;
            for (Eigen::Index u = 0; u < U.rows(); ++u, ++row) {
                for (Eigen::Index a = 0; a < L.f_rows; ++a) {
                    for (Eigen::Index b = 0; b < L.f_cols; ++b) {
                        prob.Ain(row, L.f_offset() + a * L.f_cols + b) = U.M()(u, a) * y(b);
                    }
                }
                prob.bin(row) = U.m()(u);
            }
        }
    }
    return Lp1{std::move(prob), L};
}

Lp1Solution decode_lp1(const Lp1Layout& L, const Eigen::VectorXd& x) {
    if (x.size() != L.num_variables()) throw std::invalid_argument("decode_lp1: solution has wrong length");
    Lp1Solution out;
    for (std::size_t i = 0; i < L.s; ++i) {
        Eigen::MatrixXd G(L.g_rows, L.g_cols);
        for (Eigen::Index j = 0; j < L.g_rows; ++j) {
            G.row(j) = x.segment(L.g_offset(i) + j * L.g_cols, L.g_cols).transpose();
        }
        out.G.push_back(std::move(G));
    }
    out.F.resize(L.f_rows, L.f_cols);
    for (Eigen::Index a = 0; a < L.f_rows; ++a) {
        for (Eigen::Index b = 0; b < L.f_cols; ++b) out.F(a, b) = x(L.f_offset() + a * L.f_cols + b);
    }
    out.epsilon = x.segment(L.eps_offset(), L.g_rows);
    return out;
}

lp::LpProblem build_lp2(std::size_t k, const SynthesisProblem& problem, const std::vector<Eigen::MatrixXd>& G,
                        const Eigen::VectorXd& psi_next) {
    const Eigen::MatrixXd& Q0 = problem.tube.Q(k);
    const Eigen::VectorXd& phi = problem.tube.phi(k);
    const Eigen::Index q0 = Q0.rows();
    const Eigen::Index q1 = psi_next.size();
    const bool disturbed = problem.disturbance.has_value();
    if (G.size() != problem.model.s()) throw std::invalid_argument("build_lp2: need one G per model vertex");

    auto prob = lp::LpProblem::with_variables(q0, lp::Sense::Maximize);
    prob.c.setOnes();
    prob.free.assign(static_cast<std::size_t>(q0), !problem.a3_nonneg_psi);

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    for (const auto& Gi : G) {
        const Eigen::Index qv = disturbed ? problem.disturbance->sets.at(k).rows() : 0;
        if (Gi.rows() != q1 || Gi.cols() != q0 + qv) throw std::invalid_argument("build_lp2: G has wrong shape");
        for (Eigen::Index j = 0; j < q1; ++j) {
            rows.emplace_back(Gi.row(j).head(q0));
            double b = psi_next(j);
            if (disturbed) b -= Gi.row(j).tail(qv).dot(problem.disturbance->sets.at(k).m());
            rhs.push_back(b);
        }
    }
    for (Eigen::Index l = 0; l < q0; ++l) {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(q0);
        e(l) = 1.0;
        rows.push_back(e);
        rhs.push_back(phi(l));
    }
    // A5: D V(k-1) inside X(k), i.e. Q(k) D v <= psi(k) for v in vert(V(k-1)).
    if (problem.a5_dv_in_x && disturbed && k >= 1) {
        for (const auto& v : vertices(problem.disturbance->sets.at(k - 1))) {
            const Eigen::VectorXd lhs = Q0 * (*problem.model.D() * v);
            for (Eigen::Index l = 0; l < q0; ++l) {
                Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(q0);
                e(l) = -1.0;
                rows.push_back(e);
                rhs.push_back(-lhs(l));
            }
        }
    }
    prob.Ain.resize(static_cast<Eigen::Index>(rows.size()), q0);
    prob.bin.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        prob.Ain.row(static_cast<Eigen::Index>(r)) = rows[r];
        prob.bin(static_cast<Eigen::Index>(r)) = rhs[r];
    }
    return prob;
}

bool SynthesisResult::certified() const {
    for (const auto& c : certificates) {
        if (!c.report.contained) return false;
    }
    return !certificates.empty();
}

PolyhedralSet SynthesisResult::shrunk_set(const TargetTube& tube, std::size_t k) const {
    return tube.at(k).with_bounds(psi.at(k));
}

std::vector<StepCertificate> certify(const SynthesisProblem& problem, const SynthesisResult& result) {
    std::vector<StepCertificate> out;
    const std::size_t K = result.horizon();
    for (std::size_t k = 0; k < K; ++k) {
        StepCertificate cert;
        cert.k = k;
        cert.from_tube = result.provenance.at(k) == Provenance::TubeExact;
        const PolyhedralSet source = result.shrunk_set(problem.tube, k);
        const PolyhedralSet target = result.shrunk_set(problem.tube, k + 1);
        try {
            if (problem.disturbance) {
                cert.report = check_containment_disturbance(problem.model, result.gains[k], source,
                                                            problem.disturbance->sets.at(k), target,
                                                            problem.options.containment_tol);
            } else {
                cert.report = check_containment(problem.model, result.gains[k], source, target,
                                                problem.options.containment_tol);
            }
        } catch (const PolytopeError& err) {
            if (err.code() != PolytopeError::Code::Empty) throw;
            // An empty X(k) is vacuously mapped anywhere.
            cert.source_empty = true;
            cert.report.contained = true;
            cert.report.worst_violation = -std::numeric_limits<double>::infinity();
        }
        out.push_back(std::move(cert));
    }
    return out;
}

SynthesisResult synthesize(const SynthesisProblem& problem) {
    problem.validate();
    const std::size_t K = problem.tube.horizon();
    const double thr = problem.options.zero_threshold;

    SynthesisResult result;
    result.gains.resize(K);
    result.epsilon.resize(K);
    result.provenance.resize(K);
    result.psi.resize(K + 1);
    result.psi[K] = problem.tube.phi(K);

    for (std::size_t step = K; step-- > 0;) {
        const std::size_t k = step;
        lp::LpSolution sol1;
        Lp1 lp1;
        try {
            lp1 = build_lp1(k, problem, result.psi[k + 1]);
            sol1 = lp::solve(lp1.problem);
        } catch (const lp::NumericalError& err) {
            throw SynthesisError(k, "LP1", std::string("LP1 numerical failure at k = ") + std::to_string(k) + ": " +
                                               err.what());
        }
        if (!sol1.optimal()) {
            throw SynthesisError(k, "LP1", std::string("LP1 is ") + lp::to_string(sol1.status) + " at k = " +
                                               std::to_string(k));
        }
        const Lp1Solution decoded = decode_lp1(lp1.layout, sol1.x);
        result.gains[k] = decoded.F;
        result.epsilon[k] = decoded.epsilon;

        const double eps_norm = decoded.epsilon.size() ? decoded.epsilon.cwiseAbs().maxCoeff() : 0.0;
        if (eps_norm <= thr) {
            result.provenance[k] = Provenance::TubeExact;
            result.psi[k] = problem.tube.phi(k);
            continue;
        }
        result.provenance[k] = Provenance::Shrunk;
        lp::LpSolution sol2;
        try {
            sol2 = lp::solve(build_lp2(k, problem, decoded.G, result.psi[k + 1]));
        } catch (const lp::NumericalError& err) {
            throw SynthesisError(k, "LP2", std::string("LP2 numerical failure at k = ") + std::to_string(k) + ": " +
                                               err.what());
        }
        if (!sol2.optimal()) {
            throw SynthesisError(k, "LP2", std::string("LP2 is ") + lp::to_string(sol2.status) + " at k = " +
                                               std::to_string(k));
        }
        result.psi[k] = sol2.x;
    }
    result.certificates = certify(problem, result);
    return result;
}

}  // namespace tubesynth
