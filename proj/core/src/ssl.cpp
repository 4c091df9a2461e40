#include "circletrack/ssl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circletrack/bessel.hpp"

namespace circletrack {

BinLayout::BinLayout(int bins) : n_bins(bins) {
    if (bins <= 0) {
        throw std::invalid_argument("BinLayout: n_bins must be positive");
    }
    angles.reserve(bins);
    for (int j = 0; j < bins; ++j) {
        angles.push_back(Angle(kTwoPi * j / bins));
    }
}

SslVector validate_ssl(const std::vector<double>& raw, const BinLayout& layout) {
    if (static_cast<int>(raw.size()) != layout.n_bins) {
        throw std::invalid_argument("validate_ssl: length does not match layout");
    }
    double total = 0.0;
    for (double v : raw) {
        if (!std::isfinite(v) || v < -1e-9) {
            throw std::invalid_argument("validate_ssl: negative or non-finite entry");
        }
        total += std::max(v, 0.0);
    }
    if (total <= 0.0) {
        throw std::invalid_argument("validate_ssl: all-zero vector");
    }
    SslVector out;
    out.probs.resize(raw.size());
    double floored_total = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out.probs[i] = std::max(raw[i] / total, kSslFloorEps);
        floored_total += out.probs[i];
    }
    for (double& p : out.probs) {
        p /= floored_total;
    }
    return out;
}

Angle ssl_to_doa(const SslVector& s, const BinLayout& layout) {
    if (s.probs.size() != layout.angles.size()) {
        throw std::invalid_argument("ssl_to_doa: length does not match layout");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.probs.size(); ++i) {
        if (s.probs[i] > s.probs[best]) best = i;
    }
    return layout.angles[best];
}

SslSummary ssl_summarize(const SslVector& s, const BinLayout& layout, double kappa_phi) {
    if (s.probs.size() != layout.angles.size()) {
        throw std::invalid_argument("ssl_summarize: length does not match layout");
    }
    if (!(kappa_phi >= 0.0)) {
        throw std::domain_error("ssl_summarize: kappa_phi must be >= 0");
    }
    double cx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < s.probs.size(); ++i) {
        cx += s.probs[i] * std::cos(layout.angles[i].radians());
        sy += s.probs[i] * std::sin(layout.angles[i].radians());
    }
    const double resultant = std::sqrt(cx * cx + sy * sy);
    SslSummary out;
    out.rho = kappa_phi * resultant;
    out.mu = (resultant < kEpsKappa) ? layout.angles[0] : Angle(std::atan2(sy, cx));
    return out;
}

DenominatorProfile denominator_profile(double kappa_phi, const BinLayout& layout, int n_eval) {
    if (n_eval < 2) {
        throw std::invalid_argument("denominator_profile: n_eval must be >= 2");
    }
    DenominatorProfile out;
    out.values.reserve(n_eval);
    double lo = 0.0;
    double hi = 0.0;
    double sum = 0.0;
    // Evaluated with exp(kappa_phi) factored out so huge concentrations stay
    // finite; the factor is restored below and the flatness statistic is
    // scale-invariant either way.
    for (int k = 0; k < n_eval; ++k) {
        const double z = -std::numbers::pi + kTwoPi * k / n_eval;
        double denom = 0.0;
        for (const Angle& b : layout.angles) {
            denom += std::exp(kappa_phi * (std::cos(b.radians() - z) - 1.0));
        }
        out.values.push_back(denom);
        sum += denom;
        if (k == 0) {
            lo = hi = denom;
        } else {
            lo = std::min(lo, denom);
            hi = std::max(hi, denom);
        }
    }
    const double mean = sum / n_eval;
    out.flatness = (mean > 0.0) ? (hi - lo) / mean : 0.0;
    const double scale = std::exp(kappa_phi);
    if (std::isfinite(scale)) {
        for (double& v : out.values) v *= scale;
    }
    return out;
}

}  // namespace circletrack
