#pragma once

#include <vector>

#include "circletrack/angle.hpp"

namespace circletrack {

/// Probability floor applied to SSL entries before renormalization, so that
/// downstream log-ratio affinities never see a zero.
inline constexpr double kSslFloorEps = 1e-10;

/// Uniform angular binning of the circle: angles[j] = wrap(2 pi j / n_bins),
/// j zero-based.
struct BinLayout {
    explicit BinLayout(int n_bins);

    int n_bins;
    std::vector<Angle> angles;
};

/// Per-frame sound source localization vector: a categorical distribution
/// over the layout's angular bins. Entries are strictly positive after
/// flooring and sum to 1.
struct SslVector {
    std::vector<double> probs;
};

/// Equivalent von Mises summary of one SSL frame: concentration rho and
/// circular mean mu. rho never exceeds the emission concentration that
/// produced it, since the resultant of a probability vector is at most 1.
struct SslSummary {
    double rho = 0.0;
    Angle mu;
};

/// Validates a raw bin vector against the layout: length must match, entries
/// may dip no lower than -1e-9, the vector must carry some mass. Entries are
/// floored at kSslFloorEps and renormalized to sum 1.
SslVector validate_ssl(const std::vector<double>& raw, const BinLayout& layout);

/// DOA extraction: the angle of the maximal bin, ties broken by lowest index.
Angle ssl_to_doa(const SslVector& s, const BinLayout& layout);

/// Summarizes a frame into (rho, mu) via the resultant vector:
///   rho = kappa_phi * |sum_i s_i e^{i b_i}|,  mu = arg of the same sum.
/// A vanishing resultant pins mu at the layout's first bin angle.
SslSummary ssl_summarize(const SslVector& s, const BinLayout& layout, double kappa_phi);

/// Profile of the discretized von Mises normalizer sum_j exp(kappa_phi *
/// cos(b_j - z)) over an n_eval grid of z, plus its flatness statistic
/// (max - min) / mean. Flat profiles justify treating the normalizer as
/// independent of the state.
struct DenominatorProfile {
    std::vector<double> values;
    double flatness = 0.0;
};

DenominatorProfile denominator_profile(double kappa_phi, const BinLayout& layout, int n_eval);

}  // namespace circletrack
