// Pure and mixed dilations of a thermal attenuator.
#include <gaussdil/gaussdil.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>

int main() {
    using namespace gaussdil;

    const double eta = 0.5;
    const GaussianChannel ch(std::sqrt(eta) * Matrix::Identity(2, 2), Matrix::Identity(2, 2));

    const ModeCountReport m = mode_counts(ch);
    std::cout << "k = " << m.k << ", r = " << m.r << ", r' = " << m.r_prime << "\n";
    std::cout << "pure env modes: " << m.ell_pure << ", mixed env modes: " << m.ell_mix << "\n";

    for (const Dilation& d : {pure_dilation(ch), mixed_dilation(ch)}) {
        const VerificationReport v = verify_dilation(ch, d);
        std::cout << to_string(d.kind) << ": env_modes = " << d.env_modes << ", max residual = "
                  << std::max({v.eq19_sigma, v.eq19_Y, v.symplectic, v.action_max_err}) << "\n";
        std::cout << "gamma_E =\n" << d.gamma_E << "\n";
    }

    // Choi route to the same count
    std::cout << "q_min via Choi state: " << qmin_via_choi(ch) << "\n";
}
