#pragma once
// generated by tests/oracle/derive.py; do not edit
namespace frozen {
inline constexpr double quad_f_11 = 5.5;
inline constexpr double quad_prox_0 = 0.5;
inline constexpr double quad_prox_1 = 0.090909090909090909091;
inline constexpr double huber_f_1 = 0.095;
inline constexpr double huber_g_1 = 0.1;
inline constexpr double heb4_f_unit = 0.25;
inline constexpr double gd_x1_0 = 0.81818181818181818182;
inline constexpr double gd_x1_1 = -0.81818181818181818182;
inline constexpr double gd_ratio = 0.81818181818181818182;
inline constexpr double cheb_delta1 = 0.81818181818181818182;
inline constexpr double cheb_delta2 = 0.61490683229813664596;
inline constexpr double cheb_xi = 1.9249505911485287404;
inline constexpr double cheb_bound_5 = 0.075563279079558411212;
inline constexpr double cheb_bound_10 = 0.0028630783882099066906;
inline constexpr double cheb_bound_20 = 0.0000040986257271813186575;
inline constexpr double hb_delta_inf = 0.519493853295915704;
inline constexpr double hb_momentum = 0.26987386361223838756;
inline constexpr double hb_step = 0.23088615702040697956;
inline constexpr double theta_1_1 = 2.0;
inline constexpr double theta_3_1 = 1.6180339887498948482;
inline constexpr double theta_3_2 = 2.1935270853310539386;
inline constexpr double theta_3_3 = 3.6421524705465674734;
inline constexpr double theta_8_8 = 7.4386647093347400148;
inline constexpr double theta_10_10 = 8.9182836080911982096;
inline constexpr double theta_32_32 = 24.840743290707289129;
inline constexpr double theta_50_50 = 37.717047801394045864;
inline constexpr double fgm_A1 = 1.0;
inline constexpr double fgm_A2 = 2.6180339887498948482;
inline constexpr double fgm_A10 = 35.308749453128481225;
inline constexpr double fgm_sc_A10_q001 = 40.651233122238479971;
inline constexpr double item_A1_q0 = 4.0;
inline constexpr double cm_momentum_q025 = 0.33333333333333333333;
inline constexpr double tmm_rho_q001 = 0.9;
inline constexpr double tmm_factor_q001 = 0.81;
inline constexpr double catalyst_B_lamL1 = 2.5849625007211561815;
inline constexpr double restart_c = 8.3482609145381318394;
inline constexpr double ppa_A5_mu1 = 31.0;
inline constexpr double lmi_tau_short = 0.81;
inline constexpr double lmi_tau_long = 0.66942148760330578512;
inline constexpr double huber_wc_5 = 0.045454545454545454545;
inline constexpr double huber_wc_20 = 0.012195121951219512195;
inline constexpr double grid_cells_256 = 72.0;
}  // namespace frozen
