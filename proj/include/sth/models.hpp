#ifndef STH_MODELS_HPP
#define STH_MODELS_HPP

// Distributions for the harvest rate X, the channel SNR Gamma and the random
// transmit power P. All models are immutable values validated at construction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include <boost/math/special_functions/gamma.hpp>

#include "sth/error.hpp"

namespace sth {

/// Single-owner pseudo-random stream.
using RandomStream = std::mt19937_64;

/// Stream keyed by (seed, index) so that parallel blocks are independent and reproducible.
inline RandomStream make_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return RandomStream(seq);
}

namespace detail {

// Uniform on [0, 1) with 53 random bits.
inline double uniform_01(RandomStream& stream) {
    return static_cast<double>(stream() >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1]; safe as a logarithm argument.
inline double uniform_open_01(RandomStream& stream) {
    return (static_cast<double>(stream() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Harvest rate X on [0, P_H]

enum class HarvestKind { uniform, truncated_exponential, point_mass };

class HarvestModel {
public:
    /// X ~ U[0, peak].
    static HarvestModel uniform(double peak) {
        detail::require(std::isfinite(peak) && peak > 0.0, "harvest: uniform peak P_H must be finite and > 0");
        return HarvestModel(Uniform{peak});
    }

    /// Exponential with the given scale (pre-truncation mean), renormalised on [0, peak].
    static HarvestModel truncated_exponential(double scale, double peak) {
        detail::require(std::isfinite(scale) && scale > 0.0, "harvest: exponential scale must be finite and > 0");
        detail::require(std::isfinite(peak) && peak > 0.0, "harvest: truncation peak P_H must be finite and > 0");
        return HarvestModel(TruncatedExponential{scale, peak, -std::expm1(-peak / scale)});
    }

    /// Deterministic harvest rate.
    static HarvestModel point_mass(double value) {
        detail::require(std::isfinite(value) && value > 0.0, "harvest: point-mass value must be finite and > 0");
        return HarvestModel(PointMass{value});
    }

    HarvestKind kind() const noexcept { return static_cast<HarvestKind>(impl_.index()); }
    bool continuous() const noexcept { return kind() != HarvestKind::point_mass; }

    /// Upper end of the support, P_H.
    double peak() const noexcept {
        return std::visit([](const auto& d) { return d.peak(); }, impl_);
    }

    /// Scale parameter of the truncated exponential; NaN for the other kinds.
    double scale() const noexcept {
        if (const auto* d = std::get_if<TruncatedExponential>(&impl_)) return d->scale;
        return std::numeric_limits<double>::quiet_NaN();
    }

    double pdf(double x) const {
        return std::visit([x](const auto& d) { return d.pdf(x); }, impl_);
    }

    double cdf(double x) const {
        return std::visit([x](const auto& d) { return d.cdf(x); }, impl_);
    }

    /// Pr{X < x}; differs from cdf() only at the atom of a point mass.
    double prob_below(double x) const {
        if (const auto* d = std::get_if<PointMass>(&impl_)) return d->value < x ? 1.0 : 0.0;
        return cdf(x);
    }

    double mean() const {
        return std::visit([](const auto& d) { return d.mean(); }, impl_);
    }

    double variance() const {
        return std::visit([](const auto& d) { return d.variance(); }, impl_);
    }

    double sample(RandomStream& stream) const {
        return std::visit([&stream](const auto& d) { return d.sample(stream); }, impl_);
    }

    std::string_view kind_name() const noexcept {
        switch (kind()) {
            case HarvestKind::uniform: return "uniform";
            case HarvestKind::truncated_exponential: return "truncated-exponential";
            case HarvestKind::point_mass: return "point-mass";
        }
        return "unknown";
    }

private:
    struct Uniform {
        double upper;

        double peak() const { return upper; }
        double pdf(double x) const { return (x >= 0.0 && x <= upper) ? 1.0 / upper : 0.0; }
        double cdf(double x) const {
            if (x <= 0.0) return 0.0;
            if (x >= upper) return 1.0;
            return x / upper;
        }
        double mean() const { return 0.5 * upper; }
        double variance() const { return upper * upper / 12.0; }
        double sample(RandomStream& s) const { return upper * detail::uniform_01(s); }
    };

    struct TruncatedExponential {
        double scale;
        double upper;
        double mass;  // 1 - exp(-upper/scale)

        double peak() const { return upper; }
        double pdf(double x) const {
            if (x < 0.0 || x > upper) return 0.0;
            return std::exp(-x / scale) / (scale * mass);
        }
        double cdf(double x) const {
            if (x <= 0.0) return 0.0;
            if (x >= upper) return 1.0;
            return -std::expm1(-x / scale) / mass;
        }
        double mean() const {
            const double tail = std::exp(-upper / scale);
            return scale - upper * tail / mass;
        }
        double variance() const {
            // E[X^2] of the truncated law minus mean^2.
            const double r = upper / scale;
            const double tail = std::exp(-r);
            const double second = scale * scale * (2.0 - tail * (r * r + 2.0 * r + 2.0)) / mass;
            const double m = mean();
            return second - m * m;
        }
        double sample(RandomStream& s) const {
            const double u = detail::uniform_01(s);
            return std::min(upper, -scale * std::log1p(-u * mass));
        }
    };

    struct PointMass {
        double value;

        double peak() const { return value; }
        double pdf(double) const { return 0.0; }
        double cdf(double x) const { return x >= value ? 1.0 : 0.0; }
        double mean() const { return value; }
        double variance() const { return 0.0; }
        double sample(RandomStream&) const { return value; }
    };

    using Impl = std::variant<Uniform, TruncatedExponential, PointMass>;

    explicit HarvestModel(Impl impl) : impl_(impl) {}

    Impl impl_;
};

// ---------------------------------------------------------------------------
// Normalised channel SNR Gamma = |h|^2 / sigma_n^2

enum class ChannelKind { exponential, point_mass };

class ChannelModel {
public:
    /// Rayleigh fading: Gamma exponential with mean lambda_gamma.
    static ChannelModel rayleigh(double mean_snr) {
        detail::require(std::isfinite(mean_snr) && mean_snr > 0.0, "channel: mean SNR must be finite and > 0");
        return ChannelModel(ChannelKind::exponential, mean_snr);
    }

    /// Static channel with a fixed SNR.
    static ChannelModel point_mass(double snr) {
        detail::require(std::isfinite(snr) && snr >= 0.0, "channel: point-mass SNR must be finite and >= 0");
        return ChannelModel(ChannelKind::point_mass, snr);
    }

    ChannelKind kind() const noexcept { return kind_; }
    double mean_snr() const noexcept { return mean_; }

    double pdf(double g) const {
        if (kind_ == ChannelKind::point_mass || g < 0.0) return 0.0;
        return std::exp(-g / mean_) / mean_;
    }

    /// Pr{Gamma <= g}. Saturates to 1 for infinite or NaN thresholds, which
    /// arise when the SNR requirement overflows.
    double cdf(double g) const {
        if (std::isnan(g) || g == std::numeric_limits<double>::infinity()) return 1.0;
        if (g < 0.0) return 0.0;
        if (kind_ == ChannelKind::point_mass) return g >= mean_ ? 1.0 : 0.0;
        return -std::expm1(-g / mean_);
    }

    /// Pr{Gamma < g}; the outage event is a strict inequality.
    double prob_below(double g) const {
        if (kind_ == ChannelKind::point_mass && !std::isnan(g)) return mean_ < g ? 1.0 : 0.0;
        return cdf(g);
    }

    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return kind_ == ChannelKind::point_mass ? 0.0 : mean_ * mean_; }

    double sample(RandomStream& stream) const {
        if (kind_ == ChannelKind::point_mass) return mean_;
        return -mean_ * std::log(detail::uniform_open_01(stream));
    }

    std::string_view kind_name() const noexcept {
        return kind_ == ChannelKind::exponential ? "exponential" : "point-mass";
    }

private:
    ChannelModel(ChannelKind kind, double mean) : kind_(kind), mean_(mean) {}

    ChannelKind kind_;
    double mean_;
};

// ---------------------------------------------------------------------------
// Random transmit power P ~ Gamma(shape, scale)

class PowerModel {
public:
    PowerModel(double shape, double scale) : shape_(shape), scale_(scale) {
        detail::require(std::isfinite(shape) && shape > 0.0, "power: Gamma shape beta must be finite and > 0");
        detail::require(std::isfinite(scale) && scale > 0.0, "power: Gamma scale lambda_p must be finite and > 0");
        log_norm_ = std::lgamma(shape_) + shape_ * std::log(scale_);
    }

    static PowerModel exponential(double mean) { return PowerModel(1.0, mean); }

    /// Gamma law with the given mean, shape beta and scale mean/beta.
    static PowerModel with_mean(double shape, double mean) { return PowerModel(shape, mean / shape); }

    double shape() const noexcept { return shape_; }
    double scale() const noexcept { return scale_; }
    double mean() const noexcept { return shape_ * scale_; }
    double variance() const noexcept { return shape_ * scale_ * scale_; }

    double pdf(double p) const {
        if (p < 0.0) return 0.0;
        if (p == 0.0) {
            if (shape_ < 1.0) return std::numeric_limits<double>::infinity();
            return shape_ == 1.0 ? 1.0 / scale_ : 0.0;
        }
        return std::exp((shape_ - 1.0) * std::log(p) - p / scale_ - log_norm_);
    }

    double cdf(double p) const {
        if (p <= 0.0) return 0.0;
        if (std::isinf(p)) return 1.0;
        return boost::math::gamma_p(shape_, p / scale_);
    }

    double sample(RandomStream& stream) const {
        std::gamma_distribution<double> dist(shape_, scale_);
        return dist(stream);
    }

private:
    double shape_;
    double scale_;
    double log_norm_ = 0.0;
};

// Free-function forms.

template <typename Model>
double pdf(const Model& model, double x) {
    return model.pdf(x);
}

template <typename Model>
double cdf(const Model& model, double x) {
    return model.cdf(x);
}

template <typename Model>
double sample(const Model& model, RandomStream& stream) {
    return model.sample(stream);
}

}  // namespace sth

#endif
