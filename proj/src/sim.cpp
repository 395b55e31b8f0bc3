#include "tubesynth/sim.hpp"

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace tubesynth {

Eigen::VectorXd random_simplex_weights(std::size_t s, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    Eigen::VectorXd beta(static_cast<Eigen::Index>(s));
    for (Eigen::Index i = 0; i < beta.size(); ++i) beta(i) = expo(rng);
    return beta / beta.sum();
}

Trajectory simulate_closed_loop(const PolytopicModel& model, const std::vector<Eigen::MatrixXd>& gains,
                                const Eigen::VectorXd& x0, const RealizationPolicy& policy, std::uint64_t seed,
                                const DisturbanceSampler& disturbance) {
    if (x0.size() != model.n()) {
        throw std::invalid_argument("simulate_closed_loop: x0 has dimension " + std::to_string(x0.size()) +
                                    ", model has " + std::to_string(model.n()));
    }
    if (policy.mode == RealizationPolicy::Mode::FixedVertex && policy.vertex >= model.s()) {
        throw std::invalid_argument("simulate_closed_loop: vertex index out of range");
    }
    if (disturbance && !model.has_disturbance()) {
        throw std::invalid_argument("simulate_closed_loop: disturbance sampler given but model has no D");
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, model.s() - 1);

    Trajectory traj;
    traj.states.push_back(x0);
    traj.outputs.push_back(model.C() * x0);
    for (std::size_t k = 0; k < gains.size(); ++k) {
        const Eigen::VectorXd& x = traj.states.back();
        const Eigen::VectorXd& y = traj.outputs.back();
        const Eigen::VectorXd u = gains[k] * y;

        Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.s()));
        switch (policy.mode) {
            case RealizationPolicy::Mode::FixedVertex: beta(static_cast<Eigen::Index>(policy.vertex)) = 1.0; break;
            case RealizationPolicy::Mode::RandomVertex: beta(static_cast<Eigen::Index>(pick(rng))) = 1.0; break;
            case RealizationPolicy::Mode::RandomConvex: beta = random_simplex_weights(model.s(), rng); break;
        }
        Eigen::VectorXd next = Eigen::VectorXd::Zero(model.n());
        for (std::size_t i = 0; i < model.s(); ++i) {
            const double b = beta(static_cast<Eigen::Index>(i));
            if (b != 0.0) next += b * (model.A(i) * x + model.B(i) * u);
        }
        if (disturbance) {
            Eigen::VectorXd v = disturbance(k, rng);
            next += *model.D() * v;
            traj.disturbances.push_back(std::move(v));
        }
        traj.controls.push_back(u);
        traj.betas.push_back(std::move(beta));
        traj.outputs.push_back(model.C() * next);
        traj.states.push_back(std::move(next));
    }
    return traj;
}

MembershipReport verify_membership(const std::vector<Eigen::VectorXd>& states, const std::vector<PolyhedralSet>& sets,
                                   double tol) {
    if (states.size() != sets.size()) {
        throw std::invalid_argument("verify_membership: " + std::to_string(states.size()) + " states but " +
                                    std::to_string(sets.size()) + " sets");
    }
    MembershipReport report;
    report.worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].size() != sets[k].dim()) throw std::invalid_argument("verify_membership: dimension mismatch");
        const Eigen::VectorXd slack = sets[k].m() - sets[k].M() * states[k];
        Eigen::Index row = 0;
        const double worst = slack.minCoeff(&row);
        report.worst_slack = std::min(report.worst_slack, worst);
        if (worst < -tol && report.pass) {
            report.pass = false;
            report.first_violation = MembershipViolation{k, row, -worst};
        }
    }
    return report;
}

MembershipReport verify_membership(const Trajectory& traj, const std::vector<PolyhedralSet>& sets, double tol) {
    return verify_membership(traj.states, sets, tol);
}

Eigen::VectorXd sample_point(const PolyhedralSet& P, Rng& rng) {
    const auto [lo, hi] = bounding_box(P);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 2000; ++attempt) {
        Eigen::VectorXd x(lo.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = lo(i) + unit(rng) * (hi(i) - lo(i));
        if (contains_point(P, x, 0.0)) return x;
    }
    const auto verts = vertices(P);
    const Eigen::VectorXd w = random_simplex_weights(verts.size(), rng);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(P.dim());
    for (std::size_t i = 0; i < verts.size(); ++i) x += w(static_cast<Eigen::Index>(i)) * verts[i];
    return x;
}

DisturbanceSampler vertex_disturbance_sampler(const std::vector<PolyhedralSet>& sets) {
    auto verts = std::make_shared<std::vector<std::vector<Eigen::VectorXd>>>();
    for (const auto& V : sets) verts->push_back(vertices(V));
    return [verts](std::size_t k, Rng& rng) -> Eigen::VectorXd {
        const auto& vs = verts->at(std::min(k, verts->size() - 1));
        std::uniform_int_distribution<std::size_t> pick(0, vs.size() - 1);
        std::bernoulli_distribution coin(0.5);
        if (coin(rng)) return vs[pick(rng)];
        const Eigen::VectorXd w = random_simplex_weights(vs.size(), rng);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(vs.front().size());
        for (std::size_t i = 0; i < vs.size(); ++i) v += w(static_cast<Eigen::Index>(i)) * vs[i];
        return v;
    };
}

}  // namespace tubesynth
