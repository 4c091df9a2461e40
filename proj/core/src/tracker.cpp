#include "circletrack/tracker.hpp"

#include <stdexcept>

#include "circletrack/bessel.hpp"

namespace circletrack {

KalmanParams::KalmanParams(double kz, double kphi) : kappa_z(kz), kappa_phi(kphi) {
    if (!(kz >= 0.0) || !(kphi >= 0.0)) {
        throw std::domain_error("KalmanParams: concentrations must be >= 0");
    }
    kappa_z = std::min(kz, kKappaMax);
    kappa_phi = std::min(kphi, kKappaMax);
}

FilterState init_state() { return FilterState{VonMises(Angle(0.0), 0.0), 0}; }

FilterState predict(const FilterState& state, const KalmanParams& params) {
    return predict_n(state, params, 1);
}

FilterState predict_n(const FilterState& state, const KalmanParams& params, long n) {
    return FilterState{vm_convolve_approx_n(state.belief, params.kappa_z, n),
                       state.frame_index + n};
}

FilterState update(const FilterState& state, const FrameObservation& obs,
                   const KalmanParams& params) {
    FilterState out = state;
    for (const Measurement& m : obs.measurements) {
        out.belief = vm_multiply(out.belief, VonMises(m.angle, m.concentration(params)));
    }
    return out;
}

double frame_log_likelihood(const FilterState& state, const FrameObservation& obs,
                            const KalmanParams& params) {
    if (obs.empty()) return 0.0;
    // Chain rule over simultaneous measurements: each is scored against the
    // belief refined by the previous ones, with no transition in between.
    double total = 0.0;
    VonMises belief = state.belief;
    for (const Measurement& m : obs.measurements) {
        const double conc = m.concentration(params);
        total += vm_exact_conv_log_density(m.angle, conc, belief);
        belief = vm_multiply(belief, VonMises(m.angle, conc));
    }
    return total;
}

TrackResult sequence_log_likelihood(std::span<const FrameObservation> observations,
                                    const KalmanParams& params) {
    if (observations.empty()) {
        throw std::invalid_argument("sequence_log_likelihood: empty sequence");
    }
    TrackResult result;
    result.per_frame_log_likelihood.reserve(observations.size());
    FilterState state = init_state();
    bool first = true;
    for (const FrameObservation& obs : observations) {
        if (!first) state = predict(state, params);
        first = false;
        const double ll = frame_log_likelihood(state, obs, params);
        result.per_frame_log_likelihood.push_back(ll);
        result.total_log_likelihood += ll;
        if (!obs.empty()) ++result.observed_frame_count;
        state = update(state, obs, params);
    }
    result.final_state = state;
    return result;
}

TrackResult sparse_log_likelihood(std::span<const SparseFrame> frames,
                                  const KalmanParams& params) {
    if (frames.empty()) {
        throw std::invalid_argument("sparse_log_likelihood: empty stream");
    }
    TrackResult result;
    result.per_frame_log_likelihood.reserve(frames.size());
    FilterState state = init_state();
    state.frame_index = frames.front().t_index;
    bool first = true;
    long prev_index = frames.front().t_index;
    for (const SparseFrame& frame : frames) {
        if (!first) {
            const long gap = frame.t_index - prev_index;
            if (gap <= 0) {
                throw std::invalid_argument("sparse_log_likelihood: t_index not increasing");
            }
            state = predict_n(state, params, gap);
        }
        first = false;
        prev_index = frame.t_index;
        const double ll = frame_log_likelihood(state, frame.obs, params);
        result.per_frame_log_likelihood.push_back(ll);
        result.total_log_likelihood += ll;
        if (!frame.obs.empty()) ++result.observed_frame_count;
        state = update(state, frame.obs, params);
    }
    result.final_state = state;
    return result;
}

}  // namespace circletrack
