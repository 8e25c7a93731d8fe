#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "sth/diversity.hpp"
#include "sth/error.hpp"
#include "sth/montecarlo.hpp"

TEST(SimulateFrame, EnergyBookkeeping) {
    sth::SystemParams p;
    p.eta = 0.5;
    p.circuit_power = 10.0;
    p.bits = 2.0;
    p.frame = 2.0;
    const auto f = sth::simulate_frame(p, 0.25, 40.0, 1.0);
    EXPECT_DOUBLE_EQ(f.buffered_energy, 40.0 * (0.25 + 0.5 * 0.75) * 2.0);
    EXPECT_DOUBLE_EQ(f.avg_power, f.buffered_energy / 1.5);
    EXPECT_EQ(f.outcome, sth::FrameResult::success);
    EXPECT_EQ(sth::simulate_frame(p, 0.25, 5.0, 1.0).outcome, sth::FrameResult::circuit_outage);
    EXPECT_EQ(sth::simulate_frame(p, 0.25, 40.0, 1e-3).outcome, sth::FrameResult::channel_outage);
    EXPECT_EQ(sth::to_string(sth::FrameResult::channel_outage), "channel_outage");
}

TEST(SimulateFrame, AgreesWithAnalyticThresholds) {
    gen::Source src(61);
    for (int i = 0; i < 2000; ++i) {
        const auto h = src.harvest();
        const auto p = src.system(h.peak());
        const double rho = src.uniform(0.0, 0.95);
        const double x = src.uniform(0.0, h.peak());
        const double gamma = src.log_uniform(1e-3, 1e3);
        const auto f = sth::simulate_frame(p, rho, x, gamma);
        const double phi = sth::power_threshold(p, rho);
        if (x < phi * (1 - 1e-12)) {
            EXPECT_EQ(f.outcome, sth::FrameResult::circuit_outage);
        } else if (x > phi * (1 + 1e-12)) {
            const double g = sth::snr_threshold(p, rho, x);
            if (gamma < g * (1 - 1e-9)) {
                EXPECT_EQ(f.outcome, sth::FrameResult::channel_outage);
            }
            if (gamma > g * (1 + 1e-9)) {
                EXPECT_EQ(f.outcome, sth::FrameResult::success);
            }
        }
    }
}

TEST(MonteCarlo, AgreesWithAnalyticOutage) {
    gen::Source src(62);
    for (int i = 0; i < 6; ++i) {
        const auto h = src.harvest();
        const auto c = src.channel();
        const auto p = src.system(h.peak());
        const double rho = src.uniform(0.0, 0.9);
        const double analytic = sth::total_outage(p, rho, h, c).total;
        const auto est = sth::estimate_outage(p, rho, h, c, 200000, 100 + i, 2);
        const double sigma = std::max(est.std_error, 1.0 / 200000.0);
        EXPECT_LE(std::abs(est.point - analytic), 4.0 * sigma) << "case " << i;
        EXPECT_EQ(est.outage_count, est.circuit_count + est.channel_count);
    }
}

TEST(MonteCarlo, CircuitShareMatchesCircuitOutage) {
    sth::SystemParams p;
    p.eta = 0.9;
    p.circuit_power = 50.0;
    const auto h = sth::HarvestModel::uniform(100.0);
    const auto est = sth::estimate_outage(p, 0.5, h, sth::ChannelModel::rayleigh(50.0), 400000, 3, 4);
    const double circuit = sth::circuit_outage(p, 0.5, h);
    const double frac = static_cast<double>(est.circuit_count) / 400000.0;
    EXPECT_NEAR(frac, circuit, 4.0 * std::sqrt(circuit * (1 - circuit) / 400000.0));
}

TEST(MonteCarlo, DeterministicAcrossRerunsAndWorkerCounts) {
    sth::SystemParams p;
    p.eta = 0.7;
    p.circuit_power = 10.0;
    const auto h = sth::HarvestModel::truncated_exponential(40.0, 100.0);
    const auto c = sth::ChannelModel::rayleigh(5.0);
    const auto a = sth::estimate_outage(p, 0.3, h, c, 300001, 77, 1);
    const auto b = sth::estimate_outage(p, 0.3, h, c, 300001, 77, 1);
    const auto d = sth::estimate_outage(p, 0.3, h, c, 300001, 77, 8);
    const auto e = sth::estimate_outage(p, 0.3, h, c, 300001, 78, 1);
    EXPECT_EQ(a.circuit_count, b.circuit_count);
    EXPECT_EQ(a.channel_count, b.channel_count);
    EXPECT_EQ(a.point, d.point);
    EXPECT_EQ(a.channel_count, d.channel_count);
    EXPECT_NE(a.channel_count, e.channel_count);
    EXPECT_EQ(a.trials, 300001u);
    EXPECT_EQ(a.seed, 77u);
}

TEST(MonteCarlo, RejectsTooFewTrials) {
    const sth::SystemParams p;
    EXPECT_THROW(sth::estimate_outage(p, 0.0, sth::HarvestModel::uniform(1.0), sth::ChannelModel::rayleigh(1.0), 999, 1),
                 sth::DomainError);
    EXPECT_THROW(sth::estimate_outage(p, 1.0, sth::HarvestModel::uniform(1.0), sth::ChannelModel::rayleigh(1.0), 5000, 1),
                 sth::DomainError);
}

TEST(MonteCarlo, ProductOutageMatchesBessel) {
    for (double beta : {1.0, 3.0}) {
        const auto power = sth::PowerModel::with_mean(beta, 50.0);
        const double analytic = sth::outage_gamma_power(power, 2.0, 3.0);
        const auto est = sth::estimate_product_outage(power, 2.0, 3.0, 500000, 9, 4);
        EXPECT_LE(std::abs(est.point - analytic), 4.0 * est.std_error) << "beta=" << beta;
    }
}
