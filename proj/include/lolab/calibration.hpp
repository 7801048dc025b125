#pragma once

// Calibration constants measured once on the fixed seeded corpus
// (`lolab calibrate --seed 12345 --count 50`) and pinned here; tests allow
// +-20% around the pinned ratios where a ratio is what is being checked.

namespace lolab::calib {

// |Q| <= K_discrete * rho^-1 n^{-r/2} on the planted inverse corpus
// (measured worst ratio 4.80)
inline constexpr double K_discrete = 4.8;
// same with n' in place of n on the budget corpus (measured 1.51)
inline constexpr double K_budget = 1.6;
// |P| <= K_continuous * rho_hat^-1 n'^{(d-r)/2} on the planted continuous
// corpus (measured 9.79)
inline constexpr double K_continuous = 10.0;
// optimality floor: rank-1 cover volume >= c_cover * n^{3/2-0.2}
// (measured minimum 0.762)
inline constexpr double c_cover = 0.5;
// forward pigeonhole: exact rho >= kappa_forward * n^{-r/2} / N on planted
// GAPs (measured minimum 2.58)
inline constexpr double kappa_forward = 0.5;

} // namespace lolab::calib
