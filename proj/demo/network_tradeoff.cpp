// TDMA sharing of one frame among N harvesting transmitters: how the system
// outage moves with N for independent and common data.

#include <cstdio>

#include "sth/network.hpp"
#include "sth/optimizer.hpp"

int main() {
    sth::Link link{{.eta = 0.9, .circuit_power = 50.0, .bits = 2.0, .frame = 1.0},
                   sth::HarvestModel::uniform(100.0),
                   sth::ChannelModel::rayleigh(50.0)};
    const auto opt = sth::optimize_save_ratio(link);
    std::printf("rho* = %.4f, nodes at rho*: up to %d\n\n", opt.rho_star,
                sth::tdma_transmitter_threshold(opt.rho_star));

    std::printf("%3s %10s %14s %14s\n", "N", "rho", "independent", "common");
    const auto sweep = sth::network_sweep(sth::DataMode::common, opt.rho_star, 12, link);
    for (const auto& p : sweep)
        std::printf("%3d %10.4f %14.6e %14.6e\n", p.transmitters, p.rho_used, p.node_outage, p.system_outage);
    std::printf("\nbest N for common data: %d\n", sth::optimal_transmitter_count_common(opt.rho_star, 12, link));
}
