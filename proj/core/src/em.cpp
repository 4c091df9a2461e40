#include "circletrack/em.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circletrack/bessel.hpp"
#include "circletrack/circular_grid.hpp"

namespace circletrack {

void EmConfig::validate() const {
    if (max_iters < 1) throw std::invalid_argument("EmConfig: max_iters must be >= 1");
    if (grid_size < 360) throw std::invalid_argument("EmConfig: grid_size must be >= 360");
    if (!(kappa_low >= 1e-3) || !(kappa_high <= kKappaMax) || kappa_low > kappa_high) {
        throw std::invalid_argument("EmConfig: kappa bounds must satisfy 1e-3 <= low <= high <= 1e6");
    }
}

namespace {

// Emission values over the grid, scaled by an arbitrary per-frame constant
// (every use below renormalizes, so exp(kappa (cos - 1)) keeps huge
// concentrations finite). Empty frames get a unit emission.
void scaled_emission(const FrameObservation& obs, const KalmanParams& params,
                     const CircularGrid& grid, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 1.0);
    for (const Measurement& m : obs.measurements) {
        const double conc = std::min(m.concentration(params), kKappaMax);
        const double cos_x = std::cos(m.angle.radians());
        const double sin_x = std::sin(m.angle.radians());
        for (int i = 0; i < grid.n; ++i) {
            const double cos_diff = cos_x * grid.cos_angles[i] + sin_x * grid.sin_angles[i];
            out[i] *= std::exp(conc * (cos_diff - 1.0));
        }
    }
}

// Clamp spectral roundoff below zero, then normalize to total mass 1.
void normalize_mass(std::vector<double>& v) {
    double total = 0.0;
    for (double& x : v) {
        if (x < 0.0) x = 0.0;
        total += x;
    }
    if (total <= 0.0) {
        std::fill(v.begin(), v.end(), 1.0 / v.size());
        return;
    }
    for (double& x : v) x /= total;
}

SmoothResult smooth_posteriors_on_grid(std::span<const FrameObservation> observations,
                                       const KalmanParams& params, const CircularGrid& grid,
                                       const TransitionConvolver& conv) {
    const long frames = static_cast<long>(observations.size());
    if (frames < 2) {
        throw std::invalid_argument("smooth_posteriors: need at least 2 frames");
    }
    const int n = grid.n;
    const int coeffs = conv.mode_count() + 1;

    // Emissions, filtered masses, and the filtered masses' mode projections
    // (reused by both the next prediction and the pair statistics).
    std::vector<std::vector<double>> emissions(frames, std::vector<double>(n));
    std::vector<std::vector<double>> filtered(frames, std::vector<double>(n));
    std::vector<double> proj_c(static_cast<std::size_t>(frames) * coeffs);
    std::vector<double> proj_s(static_cast<std::size_t>(frames) * coeffs);
    std::vector<double> scratch(n);

    for (long t = 0; t < frames; ++t) {
        scaled_emission(observations[t], params, grid, emissions[t]);
        if (t == 0) {
            filtered[0] = emissions[0];  // uniform prior times emission
        } else {
            conv.convolve_projected({&proj_c[(t - 1) * coeffs], static_cast<std::size_t>(coeffs)},
                                    {&proj_s[(t - 1) * coeffs], static_cast<std::size_t>(coeffs)},
                                    scratch);
            for (int i = 0; i < n; ++i) {
                filtered[t][i] = std::max(scratch[i], 0.0) * emissions[t][i];
            }
        }
        normalize_mass(filtered[t]);
        if (t + 1 < frames) {
            conv.project(filtered[t], {&proj_c[t * coeffs], static_cast<std::size_t>(coeffs)},
                         {&proj_s[t * coeffs], static_cast<std::size_t>(coeffs)});
        }
    }

    SmoothResult result;
    result.grid_size = n;
    result.posteriors.assign(frames, std::vector<double>(n));
    result.transition_cos.assign(frames - 1, 0.0);

    // Backward sweep. beta is p(X_{t+1:T} | z_t) up to a per-frame scale;
    // the pair statistic is a ratio of two kernel-weighted dots against the
    // same filtered mass, so the scale cancels.
    std::vector<double> beta(n, 1.0);
    std::vector<double> weighted(n);
    std::vector<double> back_k(n);
    std::vector<double> wc(coeffs);
    std::vector<double> ws(coeffs);
    result.posteriors[frames - 1] = filtered[frames - 1];

    for (long t = frames - 2; t >= 0; --t) {
        for (int i = 0; i < n; ++i) weighted[i] = emissions[t + 1][i] * beta[i];
        conv.project(weighted, wc, ws);
        conv.convolve_projected(wc, ws, back_k);
        const TransitionConvolver::PairMoments moments = conv.pair_moments(
            {&proj_c[t * coeffs], static_cast<std::size_t>(coeffs)},
            {&proj_s[t * coeffs], static_cast<std::size_t>(coeffs)}, wc, ws);
        result.transition_cos[t] = (moments.plain > 0.0) ? moments.cosine / moments.plain : 0.0;

        beta = back_k;
        normalize_mass(beta);
        for (int i = 0; i < n; ++i) result.posteriors[t][i] = filtered[t][i] * beta[i];
        normalize_mass(result.posteriors[t]);
    }

    // E[cos(phi - z_t)] per DOA measurement from the smoothed posterior.
    for (long t = 0; t < frames; ++t) {
        const std::vector<double>& gamma = result.posteriors[t];
        double gc = 0.0;
        double gs = 0.0;
        bool have_moments = false;
        for (const Measurement& m : observations[t].measurements) {
            if (m.kind != Measurement::Kind::kDoa) continue;
            if (!have_moments) {
                for (int i = 0; i < n; ++i) {
                    gc += gamma[i] * grid.cos_angles[i];
                    gs += gamma[i] * grid.sin_angles[i];
                }
                have_moments = true;
            }
            result.observation_cos.push_back(std::cos(m.angle.radians()) * gc +
                                             std::sin(m.angle.radians()) * gs);
        }
    }
    return result;
}

}  // namespace

SmoothResult smooth_posteriors(std::span<const FrameObservation> observations,
                               const KalmanParams& params, int grid_size) {
    const CircularGrid grid(grid_size);
    const TransitionConvolver conv(grid, params.kappa_z);
    return smooth_posteriors_on_grid(observations, params, grid, conv);
}

void MStepStats::accumulate(const SmoothResult& smoothed) {
    for (double v : smoothed.observation_cos) {
        observation_cos_sum += v;
        ++observation_count;
    }
    for (double v : smoothed.transition_cos) {
        transition_cos_sum += v;
        ++transition_count;
    }
}

namespace {

double invert_mean_cos(double sum, long count) {
    const double mean = sum / count;
    const double clamped = std::clamp(mean, 0.0, std::nextafter(1.0, 0.0));
    return inv_bessel_ratio(clamped);
}

}  // namespace

KalmanParams m_step(const MStepStats& stats, const EmConfig& config) {
    if (stats.observation_count == 0 || stats.transition_count == 0) {
        throw std::invalid_argument("m_step: empty statistics");
    }
    const double kappa_phi = invert_mean_cos(stats.observation_cos_sum, stats.observation_count);
    const double kappa_z = invert_mean_cos(stats.transition_cos_sum, stats.transition_count);
    return KalmanParams(std::clamp(kappa_z, config.kappa_low, config.kappa_high),
                        std::clamp(kappa_phi, config.kappa_low, config.kappa_high));
}

namespace {

double pooled_log_likelihood(std::span<const std::vector<FrameObservation>> sequences,
                             const KalmanParams& params) {
    double total = 0.0;
    for (const auto& seq : sequences) {
        if (seq.size() < 2) continue;
        total += sequence_log_likelihood(seq, params).total_log_likelihood;
    }
    return total;
}

}  // namespace

FitResult fit(std::span<const std::vector<FrameObservation>> sequences,
              const KalmanParams& init, const EmConfig& config) {
    config.validate();

    long usable = 0;
    for (const auto& seq : sequences) {
        if (seq.size() < 2) continue;
        long observed = 0;
        for (const FrameObservation& obs : seq) {
            if (!obs.empty()) ++observed;
        }
        if (observed >= 2) ++usable;
    }
    if (usable == 0) {
        throw NoUsableSequenceError("fit: no sequence with at least 2 observed frames");
    }

    FitResult result;
    result.params = init;
    KalmanParams current = init;
    double best_ll = pooled_log_likelihood(sequences, init);
    double prev_ll = best_ll;

    const CircularGrid grid(config.grid_size);
    for (int iter = 0; iter < config.max_iters; ++iter) {
        const TransitionConvolver conv(grid, current.kappa_z);
        MStepStats stats;
        for (const auto& seq : sequences) {
            if (seq.size() < 2) continue;
            stats.accumulate(smooth_posteriors_on_grid(seq, current, grid, conv));
        }
        current = m_step(stats, config);
        const double ll = pooled_log_likelihood(sequences, current);
        result.trace.push_back({current.kappa_z, current.kappa_phi, ll});
        if (ll > best_ll) {
            best_ll = ll;
            result.params = current;
        }
        const double rel_improvement = (ll - prev_ll) / std::max(std::fabs(prev_ll), 1e-12);
        prev_ll = ll;
        if (rel_improvement < config.min_rel_improvement) break;
    }
    return result;
}

}  // namespace circletrack
