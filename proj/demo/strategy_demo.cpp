// Lower bound on log P(A_t >= t^rho) from the "go to a high site and stay"
// strategy, for one quenched field, next to the predicted exponent.

#include <iostream>

#include "scenerywalk/montecarlo.hpp"

int main(int argc, char** argv) {
    using namespace scenerywalk;
    const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 7;
    const double alpha = 1.0, rho = 1.5;
    for (double t : {1e2, 1e3, 1e4}) {
        const auto b = strategy_lower_bound(alpha, 1, rho, t, derive_seed(seed, 0, StreamTag::Field));
        std::cout << "t = " << t << "  log P >= " << b.log_prob() << "  via x = " << b.direct.site
                  << " (z = " << b.direct.z << ")  exponent " << b.exponent() << " vs p = " << b.p_value << '\n';
    }
}
