#include "tubesynth/tube.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tubesynth {

TargetTube::TargetTube(std::vector<PolyhedralSet> sets) : sets_(std::move(sets)) {
    if (sets_.empty()) throw std::invalid_argument("TargetTube: at least the target set is required");
    const Eigen::Index n = sets_.front().dim();
    for (std::size_t k = 0; k < sets_.size(); ++k) {
        if (sets_[k].dim() != n) {
            throw std::invalid_argument("TargetTube: H(" + std::to_string(k) + ") has dimension " +
                                        std::to_string(sets_[k].dim()) + ", expected " + std::to_string(n));
        }
    }
}

PolyhedralSet target_set(const TargetTube& tube) { return tube.at(tube.horizon()); }

void validate_tube(const TargetTube& tube, const TubeRequirements& req) {
    for (std::size_t k = 0; k <= tube.horizon(); ++k) {
        const auto& H = tube.at(k);
        const std::string where = "H(" + std::to_string(k) + ")";
        if (is_empty(H)) throw std::invalid_argument(where + " is empty");
        if (req.bounded && !is_bounded(H)) throw std::invalid_argument(where + " is unbounded");
        if (req.origin_interior) {
            for (Eigen::Index j = 0; j < H.rows(); ++j) {
                const double slack = H.m()(j) / H.M().row(j).norm();
                if (slack < req.interior_slack) {
                    throw std::invalid_argument(where + " does not contain the origin in its interior (row " +
                                                std::to_string(j) + ")");
                }
            }
        }
    }
}

double step_upper_envelope(const StepSpec& spec, double t) {
    return t < spec.settling_time ? spec.peak : spec.steady_tol;
}

double step_lower_envelope(const StepSpec& spec, double t) {
    if (t >= spec.settling_time) return -spec.steady_tol;
    if (t >= spec.rise_time) {
        const double span = spec.settling_time - spec.rise_time;
        const double frac = (t - spec.rise_time) / span;
        return -spec.rise_tol + frac * (spec.rise_tol - spec.steady_tol);
    }
    const double frac = t / spec.rise_time;
    return spec.initial_lower + frac * (-spec.rise_tol - spec.initial_lower);
}

void validate_step_spec(const StepSpec& spec, std::size_t horizon) {
    if (!(spec.sample_time > 0.0)) throw std::invalid_argument("step spec: sampling time must be positive");
    if (!(spec.rise_time > 0.0)) throw std::invalid_argument("step spec: rise time must be positive");
    if (spec.rise_time > spec.settling_time) {
        throw std::invalid_argument("step spec: rise time exceeds settling time");
    }
    if (spec.steady_tol < 0.0) throw std::invalid_argument("step spec: steady-state tolerance is negative");
    if (spec.steady_tol > spec.rise_tol) {
        throw std::invalid_argument("step spec: steady-state tolerance exceeds rise tolerance");
    }
    if (spec.peak < spec.steady_tol) throw std::invalid_argument("step spec: peak bound below steady-state tolerance");
    if (spec.initial_lower > -spec.rise_tol) {
        throw std::invalid_argument("step spec: initial lower value must not exceed -rise_tol");
    }
    const double t_end = static_cast<double>(horizon) * spec.sample_time;
    if (t_end + 1e-12 < spec.settling_time) {
        throw std::invalid_argument("step spec: horizon " + std::to_string(horizon) + " x Ts = " +
                                    std::to_string(t_end) + " s is shorter than the settling time " +
                                    std::to_string(spec.settling_time) + " s");
    }
}

TargetTube tube_from_envelopes(const std::vector<std::vector<double>>& upper,
                               const std::vector<std::vector<double>>& lower, const Eigen::MatrixXd& C,
                               std::size_t horizon) {
    const auto r = static_cast<std::size_t>(C.rows());
    if (r == 0) throw std::invalid_argument("tube_from_envelopes: no constrained outputs");
    if (upper.size() != r || lower.size() != r) {
        throw std::invalid_argument("tube_from_envelopes: need one upper and one lower sequence per row of C");
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (upper[i].size() != horizon + 1 || lower[i].size() != horizon + 1) {
            throw std::invalid_argument("tube_from_envelopes: output " + std::to_string(i) + " needs " +
                                        std::to_string(horizon + 1) + " samples");
        }
        for (std::size_t k = 0; k <= horizon; ++k) {
            if (!(lower[i][k] < upper[i][k])) {
                throw std::invalid_argument("tube_from_envelopes: envelopes of output " + std::to_string(i) +
                                            " cross at k = " + std::to_string(k));
            }
        }
    }
    const auto ri = static_cast<Eigen::Index>(r);
    Eigen::MatrixXd Q(2 * ri, C.cols());
    for (Eigen::Index i = 0; i < ri; ++i) {
        Q.row(2 * i) = C.row(i);
        Q.row(2 * i + 1) = -C.row(i);
    }
    std::vector<PolyhedralSet> sets;
    sets.reserve(horizon + 1);
    for (std::size_t k = 0; k <= horizon; ++k) {
        Eigen::VectorXd phi(2 * ri);
        for (std::size_t i = 0; i < r; ++i) {
            phi(2 * static_cast<Eigen::Index>(i)) = upper[i][k];
            phi(2 * static_cast<Eigen::Index>(i) + 1) = -lower[i][k];
        }
        sets.emplace_back(Q, std::move(phi));
    }
    return TargetTube(std::move(sets));
}

TargetTube tube_from_step_specs(const std::vector<StepSpec>& specs, const Eigen::MatrixXd& C, std::size_t horizon) {
    if (specs.size() != static_cast<std::size_t>(C.rows())) {
        throw std::invalid_argument("tube_from_step_specs: " + std::to_string(specs.size()) + " specs for " +
                                    std::to_string(C.rows()) + " outputs");
    }
    for (const auto& s : specs) {
        validate_step_spec(s, horizon);
        if (s.sample_time != specs.front().sample_time) {
            throw std::invalid_argument("tube_from_step_specs: all outputs must share one sampling time");
        }
    }
    std::vector<std::vector<double>> upper(specs.size()), lower(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        for (std::size_t k = 0; k <= horizon; ++k) {
            const double t = static_cast<double>(k) * specs[i].sample_time;
            upper[i].push_back(step_upper_envelope(specs[i], t) + specs[i].y_sp);
            lower[i].push_back(step_lower_envelope(specs[i], t) + specs[i].y_sp);
        }
    }
    return tube_from_envelopes(upper, lower, C, horizon);
}

}  // namespace tubesynth
