// Prints p and q at a few tail indices, with the regime of each value.

#include <iomanip>
#include <iostream>

#include "scenerywalk/exponents.hpp"

int main() {
    using namespace scenerywalk;
    std::cout << std::fixed << std::setprecision(4);
    for (double alpha : {0.5, 1.0, 2.0}) {
        std::cout << "alpha = " << alpha << '\n';
        for (double rho : {1.2, 1.5, 2.0, 3.0, 4.0}) {
            const auto p = p_exponent(alpha, rho, 1);
            std::cout << "  p(" << rho << ") = ";
            if (p.has_value())
                std::cout << p.value;
            else
                std::cout << "--";
            std::cout << "  [" << to_string(p.regime) << "]\n";
        }
        for (double delta : {0.4, 0.6, 1.0, 1.5, 2.5}) {
            const auto q = q_closed_form(alpha, delta, 1);
            std::cout << "  q(" << delta << ") = " << q.value << "  [" << to_string(q.regime) << "]\n";
        }
    }
}
