#pragma once

#include <numbers>
#include <vector>

#include "circletrack/rng.hpp"
#include "circletrack/ssl.hpp"
#include "circletrack/tracker.hpp"
#include "circletrack/von_mises.hpp"

namespace testutil {

using namespace circletrack;

inline std::vector<double> random_simplex(int n, Rng& rng) {
    std::vector<double> v(n);
    double total = 0.0;
    for (double& x : v) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    for (double& x : v) x /= total;
    return v;
}

struct SequenceSpec {
    long frames = 50;
    double empty_fraction = 0.2;
    double double_fraction = 0.1;
    double ssl_fraction = 0.0;  // fraction of measurements that are SSL summaries
};

// Random observation sequence following a von Mises random walk, with the
// requested mix of empty frames, double-measurement frames, and SSL
// summaries carrying their own concentrations.
inline std::vector<FrameObservation> random_sequence(const SequenceSpec& spec,
                                                     const KalmanParams& params, Rng& rng) {
    std::vector<FrameObservation> sequence(spec.frames);
    Angle state(rng.uniform(-std::numbers::pi, std::numbers::pi));
    for (long t = 0; t < spec.frames; ++t) {
        if (t > 0) state = vm_sample(VonMises(state, params.kappa_z), rng);
        if (rng.uniform() < spec.empty_fraction) continue;
        const int count = (rng.uniform() < spec.double_fraction) ? 2 : 1;
        for (int k = 0; k < count; ++k) {
            const Angle observed = vm_sample(VonMises(state, params.kappa_phi), rng);
            if (rng.uniform() < spec.ssl_fraction) {
                SslSummary summary;
                summary.mu = observed;
                summary.rho = params.kappa_phi * rng.uniform(0.5, 1.0);
                sequence[t].measurements.push_back(Measurement::ssl(summary));
            } else {
                sequence[t].measurements.push_back(Measurement::doa(observed));
            }
        }
    }
    return sequence;
}

}  // namespace testutil
