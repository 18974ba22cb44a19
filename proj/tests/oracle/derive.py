#!/usr/bin/env python3
"""Independent high-precision values for the test suite.

Run: python3 tests/oracle/derive.py > tests/oracle/frozen_values.hpp
"""
import mpmath as mp

mp.mp.dps = 50

vals = []


def put(name, v):
    vals.append((name, mp.mpf(v)))


# quadratic eigs [1, 10] at (1, 1)
put("quad_f_11", mp.mpf(1) / 2 * (1 + 10))
put("quad_prox_0", 1 / (1 + mp.mpf(1)))
put("quad_prox_1", 1 / (1 + mp.mpf(10)))

# huber, L=1, tau=0.1, x=1: a|x| - b with a = L tau, b = L tau^2 / 2
tau = mp.mpf("0.1")
put("huber_f_1", tau * 1 - tau**2 / 2)
put("huber_g_1", tau)

# heb r=4 at unit vector
put("heb4_f_unit", mp.mpf(1) / 4)

# gd on eigs [1, 10] with step 2/11
g = mp.mpf(2) / 11
put("gd_x1_0", 1 - g * 1)
put("gd_x1_1", 1 - g * 10)
put("gd_ratio", mp.mpf(9) / 11)

# chebyshev, mu=1, L=10
mu, L = mp.mpf(1), mp.mpf(10)
sigma = (L + mu) / (L - mu)
d = [1 / sigma]
for _ in range(60):
    d.append(1 / (2 * sigma - d[-1]))
put("cheb_delta1", d[0])
put("cheb_delta2", d[1])
kappa = L / mu
xi = (mp.sqrt(kappa) + 1) / (mp.sqrt(kappa) - 1)
put("cheb_xi", xi)
for N in (5, 10, 20):
    put(f"cheb_bound_{N}", 2 / (xi**N + xi ** (-N)))
dinf = (mp.sqrt(kappa) - 1) / (mp.sqrt(kappa) + 1)
put("hb_delta_inf", dinf)
put("hb_momentum", dinf**2)
put("hb_step", 4 / (mp.sqrt(L) + mp.sqrt(mu)) ** 2)


# ogm theta schedule
def thetas(N):
    t = [mp.mpf(1)]
    for k in range(1, N + 1):
        c = 4 if k < N else 8
        t.append((1 + mp.sqrt(1 + c * t[-1] ** 2)) / 2)
    return t


put("theta_1_1", thetas(1)[1])
t3 = thetas(3)
put("theta_3_1", t3[1])
put("theta_3_2", t3[2])
put("theta_3_3", t3[3])
for N in (8, 10, 32, 50):
    put(f"theta_{N}_{N}", thetas(N)[N])

# fgm A recursion, q = 0
A = [mp.mpf(0)]
for _ in range(10):
    A.append(A[-1] + (1 + mp.sqrt(4 * A[-1] + 1)) / 2)
put("fgm_A1", A[1])
put("fgm_A2", A[2])
put("fgm_A10", A[10])

# fgm strongly convex, q = 0.01: A_{k+1} is the larger root of (A_k - A)^2 - A - q A^2 = 0
q = mp.mpf("0.01")
As = [mp.mpf(0)]
for _ in range(10):
    Ak = As[-1]
    # (1 - q) A^2 - (2 A_k + 1) A + A_k^2 = 0
    a2, a1, a0 = 1 - q, -(2 * Ak + 1), Ak**2
    As.append((-a1 + mp.sqrt(a1**2 - 4 * a2 * a0)) / (2 * a2))
put("fgm_sc_A10_q001", As[10])

# item at q = 0: A_{k+1} = ((1+q)A + 2(1 + sqrt((1+A)(1+qA)))) / (1-q)^2
Ai = mp.mpf(0)
Ai = ((1 + 0) * Ai + 2 * (1 + mp.sqrt((1 + Ai) * (1 + 0 * Ai)))) / 1
put("item_A1_q0", Ai)

put("cm_momentum_q025", (1 - mp.sqrt(mp.mpf("0.25"))) / (1 + mp.sqrt(mp.mpf("0.25"))))
put("tmm_rho_q001", 1 - mp.sqrt(mp.mpf("0.01")))
put("tmm_factor_q001", (1 - mp.sqrt(mp.mpf("0.01"))) ** 2)

# catalyst burden, gd inner, lambda L = 1: C = 1, tau = 1/(1 + lambda L)
lamL = mp.mpf(1)
tcat = 1 / (1 + lamL)
put("catalyst_B_lamL1", mp.log(1 * (lamL + 2)) / mp.log(1 / (1 - tcat)) + 1)

put("restart_c", 4 * mp.e ** (2 / mp.e))

# ppa A with mu = 1, lambda = 1: A_{k+1} = (1 + lambda mu) A_k + lambda
Ap = mp.mpf(0)
for _ in range(5):
    Ap = (1 + 1) * Ap + 1
put("ppa_A5_mu1", Ap)

# gd distance rate certificates
q = mp.mpf("0.1")
put("lmi_tau_short", (1 - q) ** 2)
put("lmi_tau_long", ((1 - q) / (1 + q)) ** 2)

# huber worst case for gd, x0 = 1, L = 1: L |x0|^2 / (2 (2N + 1))
for N in (5, 20):
    put(f"huber_wc_{N}", mp.mpf(1) / (2 * (2 * N + 1)))

# restart grid size for N = 256
N = 256
put("grid_cells_256", mp.floor(mp.log(N, 2)) * (mp.ceil(mp.log(N, 2)) + 1))

print("#pragma once")
print("// generated by tests/oracle/derive.py; do not edit")
print("namespace frozen {")
for name, v in vals:
    print(f"inline constexpr double {name} = {mp.nstr(v, 20, min_fixed=-30, max_fixed=30)};")
print("}  // namespace frozen")
