#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tubesynth/polytope.hpp"
#include "tubesynth/reach.hpp"

namespace tubesynth {

using Rng = std::mt19937_64;

// How [A(k) B(k)] is drawn from the hull of the model vertices at each step.
struct RealizationPolicy {
    enum class Mode { FixedVertex, RandomVertex, RandomConvex };
    Mode mode = Mode::RandomVertex;
    std::size_t vertex = 0;  // FixedVertex only

    static RealizationPolicy fixed(std::size_t i) { return {Mode::FixedVertex, i}; }
    static RealizationPolicy random_vertex() { return {Mode::RandomVertex, 0}; }
    static RealizationPolicy random_convex() { return {Mode::RandomConvex, 0}; }
};

// Draws v(k); called once per step.
using DisturbanceSampler = std::function<Eigen::VectorXd(std::size_t k, Rng& rng)>;

struct Trajectory {
    std::vector<Eigen::VectorXd> states;    // x(0..K)
    std::vector<Eigen::VectorXd> controls;  // u(0..K-1)
    std::vector<Eigen::VectorXd> outputs;   // y(0..K)
    std::vector<Eigen::VectorXd> betas;     // convex weights per step (one-hot for vertex draws)
    std::vector<Eigen::VectorXd> disturbances;  // v(0..K-1), empty without a sampler

    std::size_t steps() const { return controls.size(); }
};

// x(k+1) = sum_i beta_i (A_i + B_i F(k) C) x(k) + D v(k). Reproducible given
// the seed.
Trajectory simulate_closed_loop(const PolytopicModel& model, const std::vector<Eigen::MatrixXd>& gains,
                                const Eigen::VectorXd& x0, const RealizationPolicy& policy, std::uint64_t seed,
                                const DisturbanceSampler& disturbance = {});

struct MembershipViolation {
    std::size_t k = 0;
    Eigen::Index row = 0;
    double magnitude = 0.0;
};

struct MembershipReport {
    bool pass = true;
    std::optional<MembershipViolation> first_violation;
    // min over k and rows of m_j - M_j x(k); negative means outside.
    double worst_slack = 0.0;
};

MembershipReport verify_membership(const std::vector<Eigen::VectorXd>& states, const std::vector<PolyhedralSet>& sets,
                                   double tol = kMembershipTol);
MembershipReport verify_membership(const Trajectory& traj, const std::vector<PolyhedralSet>& sets,
                                   double tol = kMembershipTol);

// Uniform over the bounding box with rejection; falls back to a random convex
// combination of vertices for thin sets.
Eigen::VectorXd sample_point(const PolyhedralSet& P, Rng& rng);

// Random convex combination of the vertices of V(k), hitting a vertex with
// probability one half.
DisturbanceSampler vertex_disturbance_sampler(const std::vector<PolyhedralSet>& sets);

Eigen::VectorXd random_simplex_weights(std::size_t s, Rng& rng);

}  // namespace tubesynth
