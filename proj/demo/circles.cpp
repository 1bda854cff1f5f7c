// Two overlapping discs clustered by MFCM and by MECM started from the MFCM
// prototypes. Objects in the overlap should land on w12 rather than be forced
// into one disc.
// usage: demo_circles [seed]

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>

#include "mecm/mecm.hpp"

int main(int argc, char** argv) {
    using namespace mecm;
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

    auto data = overlapped_circles_generator({0, 0}, {30, 30}, 30, 100, seed);
    const auto n = data.x.rows();
    Matrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (data.x.row(i) - data.x.row(j)).norm();

    auto mf = mfcm_fit(d, 2, 2.0, random_prototypes(int(n), 2, seed));

    MecmParams p;
    p.c = 2;
    p.alpha = 1.8;
    p.gamma = 0.2;
    p.eta = 0.7;
    p.delta = 50.0;
    auto me = mecm_fit(d, p, mf.prototypes);

    const auto hard = harden_credal(me.partition);
    std::map<std::string, int> counts;
    for (const auto& a : hard)
        counts[a.is_empty() ? "empty" : a.is_singleton() ? "w" + std::to_string(a.members()[0] + 1) : "w12"]++;
    for (auto [name, k] : counts) std::printf("%-6s %d\n", name.c_str(), k);

    auto pf = pair_indices(harden_fuzzy(mf.memberships), data.labels);
    auto ev = evidential_indices(hard, data.labels);
    std::printf("\nMFCM  P=%.3f R=%.3f RI=%.3f\n", pf.precision, pf.recall, pf.rand_index);
    std::printf("MECM  EP=%.3f ER=%.3f ERI=%.3f  (%d iterations)\n", ev.ep, ev.er, ev.eri, me.report.iterations);
}
