#pragma once

// Reference values produced by tests/oracles/golden.py (mpmath / scipy,
// independent of the C++ code). Regenerate with `python3 tests/oracles/golden.py`.
namespace golden {

inline constexpr double z_inv_sqrt2 = 0.11120310499724315;  // Z(1/sqrt 2; eta = 1)
inline constexpr double u_star = 0.618990892446662;
inline constexpr double z_tilde_1 = 0.11542101470975824;

inline constexpr double A_001 = 0.0202;
inline constexpr double B_001 = 0.050606060606060607;
inline constexpr double C1_001 = 1.4865343659421951;
inline constexpr double alpha_001 = 0.65931876346416862;

// delta = 0.1, sigma = 0.001, Lambda_rough = 0.01
namespace ledger01 {
inline constexpr double tau = 17.0;
inline constexpr double A = 0.22;
inline constexpr double B = 0.5666666666666667;
inline constexpr double C1 = 6.3465534584894045;
inline constexpr double C2 = 0.0018907646091831495;
inline constexpr double b = 6.5356299194077195;
inline constexpr double alpha = 0.12393602605843461;
inline constexpr double z_tilde = 0.12696311618073407;
}  // namespace ledger01

inline constexpr double delta_alpha_half = 0.023551809332548784;  // sigma = 0
inline constexpr double moser_n2p2 = 6.0104467630094208;          // C_s = 1, psi = 1
inline constexpr double moser_n2p2_cs1p2 = 8.4665691743073887;    // C_s = 1.2, psi = 1
inline constexpr double sharp_05_15_11 = 3.1910836691905669;      // a = 0.5, b = 1.5, eta = 1.1
inline constexpr double sharp_099_11_11 = 3.9885938033555797;     // a = 0.99, b = eta = 1.1
inline constexpr double kbar_cos005 = 0.025549037382854979;       // c = 1, beta = 0.05, L = 2 pi, p = 2
inline constexpr double term1_n2p2_pi = 0.00093707528182194615;
inline constexpr double K1_001_01 = 138.56406460551018;
inline constexpr double C3_01 = 1.2336996002382714;

// Cosine torus c = 1, beta = 0.05, L = 2 pi: continuum eigenvalues.
inline constexpr double cos005_k0 = 0.99979145839869688;
inline constexpr double cos005_k0_next = 1.0010431972036833;
inline constexpr double cos005_k1 = 0.99628905069352591;
inline constexpr double cos005_lambda1 = 0.996289050693526;

// f = 0.5 (1 + 0.1 cos t + 0.05 sin 2t) on a periodic table, L = 2 pi.
inline constexpr double asym_k0 = 0.95224351811960695;
inline constexpr double asym_a = 0.046209439331924659;

// V = 2 (tau - 1) rho_0 with tau = 17 on the beta = 0.05 cosine torus.
inline constexpr double sigma_tilde_cos005 = 0.86532301760697206;
inline constexpr double J_dev_cos005 = 0.063975490984110817;
inline constexpr double sigma_cos002_d01 = 0.016371080512249947;  // beta 0.02, tau 17

}  // namespace golden
