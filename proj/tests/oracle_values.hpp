#pragma once

// Generated by tests/oracles/compute_oracles.py (mpmath, 50 digits). Do not edit.

namespace oracle {

inline constexpr double kN_power1000_lambda1em4 = 146.61771629159653225;  // N(1e-4), t_j = j^-2, J = 1000
inline constexpr double kRho_power1000_t001 = 2.5727422203720306408;  // rho_N(0.01)
inline constexpr double kN_power1000_lambda1 = 1.075674547634748008;  // N(1)
inline constexpr double kThetaTarget_1em3 = 3.6282608848784659893e-3;  // delta (1 + sqrt|log 1/delta|) at delta = 1e-3
inline constexpr double kThetaInverse_power1000_1em3 = 7.371818830088312316e-4;  // Theta^{-1}(target), t_j = j^-2, J = 1000
inline constexpr double kKappaAuto_power1000_1em2 = 5.8523108963656472305;  // kappa_auto, delta = 1e-2, alpha0 = 1
inline constexpr double kFixtureX025_0 = 0.824;  // Tikhonov alpha = 0.25 reconstruction
inline constexpr double kFixtureX025_1 = 0.46;  // Tikhonov alpha = 0.25 reconstruction
inline constexpr double kFixtureX025_2 = 0.232;  // Tikhonov alpha = 0.25 reconstruction
inline constexpr double kFixtureMisfit025 = 0.084596985761905252412;
inline constexpr double kFixtureStatAlpha = 0.25;  // statistical rule, brute-force scan
inline constexpr int kFixtureStatSteps = 3;
inline constexpr bool kFixtureStatRegular = true;
inline constexpr double kFixtureStatAlphaHat = 0.015625;
inline constexpr double kFixtureDetAlphaHat = 0.0625;
inline constexpr double kFixtureDetAlpha = 0.25;  // deterministic rule, mu = 0, brute-force scan
inline constexpr int kFixtureDetSteps = 3;
inline constexpr bool kFixtureDetRegular = true;
inline constexpr double kFixtureOracleAlpha = 7.8125e-3;  // argmin of the true error on the refined grid
inline constexpr double kFixtureOracleValue = 0.11441335813477907666;
inline constexpr double kOracleRhsSource = 0.2043299995871670673;  // x_j = j^-1.55, J = 2000, Tikhonov, alpha = 0.01, delta = 1e-3
inline constexpr double kKnWorstRatio = 0.18317746538476755279;  // filter form, 20 log probes in [t_J, t0]
inline constexpr bool kKnPass = true;
inline constexpr double kKnProjectorWorstRatio = 0.73330425020815461248;  // projector form, same probes
inline constexpr bool kKnProjectorPass = true;

}  // namespace oracle
