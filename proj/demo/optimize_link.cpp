// Optimal save-ratio for a lossy battery and a power-hungry radio, then the
// cost of ignoring the optimisation.

#include <cstdio>

#include "sth/optimizer.hpp"

int main() {
    sth::Link link{{.eta = 0.8, .circuit_power = 30.0, .bits = 2.0, .frame = 1.0},
                   sth::HarvestModel::uniform(100.0),
                   sth::ChannelModel::rayleigh(50.0)};

    const auto opt = sth::optimize_save_ratio(link);
    std::printf("rho*          %.6f\n", opt.rho_star);
    std::printf("P_out(rho*)   %.6e  (circuit %.4e, channel %.4e)\n", opt.outage_star, opt.breakdown.circuit,
                opt.breakdown.channel);
    std::printf("P_out(0)      %.6e\n", link(0.0));
    std::printf("P_out(0.5)    %.6e\n", link(0.5));
    std::printf("phase point   %.6f\n", sth::phase_transition_threshold(link.system.bits, link.system.frame));
}
