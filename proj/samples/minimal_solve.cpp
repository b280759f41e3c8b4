// Solve the task distribution for an initiator with two neighbors and the cloud,
// then let the online selection pick two neighbors from a random stream.

#include <cstdio>

#include "fogform/fogform.hpp"

int main() {
    using namespace fogform;

    NodeSet nodes;
    nodes.local = {8.0, 0.05};
    nodes.cloud = CloudLink{8.8, 0.025};
    nodes.neighbors = {{20.0, {8.0, 0.05}}, {30.0, {8.0, 0.05}}};
    nodes.x_i = 10.0;

    const SolveReport r = solve_distribution(nodes, /*eta=*/0.011);
    std::printf("local %.4f  cloud %.4f  fog %.4f  D=%.6f s  cost=%.6f s\n", r.distribution.alpha_local,
                r.distribution.alpha_cloud, r.distribution.fog_total(), r.common_delay, r.total_cost);

    ScenarioConfig cfg;
    cfg.neighbor_mu_tx.reset();
    Rng rng(cfg.seed, 0);
    const auto stream = generate_scenario(cfg, rng);
    const auto online = online_secretary(stream, 3, 2);
    const auto offline = offline_top_j(stream, 2);
    std::printf("online picked %zu nodes, competitive ratio %.4f\n", online.chosen.size(),
                competitive_ratio(online, offline));
    return 0;
}
