#!/usr/bin/env python3
"""Reference values for the C++ tests, computed with mpmath at 50 digits.

Everything here is written from the defining formulas and does not share code
with the library. Run it to regenerate tests/oracle_values.hpp:

    python3 tests/oracles/compute_oracles.py > tests/oracle_values.hpp
"""

import mpmath as mp

mp.mp.dps = 50

OUT = []


def emit(name, value, note=""):
    if isinstance(value, bool):
        OUT.append(f"inline constexpr bool {name} = {'true' if value else 'false'};" + (f"  // {note}" if note else ""))
    elif isinstance(value, int):
        OUT.append(f"inline constexpr int {name} = {value};" + (f"  // {note}" if note else ""))
    else:
        OUT.append(f"inline constexpr double {name} = {mp.nstr(value, 20, min_fixed=-3, max_fixed=3)};"
                   + (f"  // {note}" if note else ""))


def power_spectrum(a, J):
    return [mp.mpf(j) ** (-2 * a) for j in range(1, J + 1)]


def N(t, lam):
    return mp.fsum(tj / (tj + lam) for tj in t)


def theta(t, a):
    return mp.sqrt(a / N(t, a))


def rho(t, a):
    return 1 / mp.sqrt(a * N(t, a))


def tik_r(a, t):
    return a / (t + a)


# --- effective dimension and friends on t_j = j^-2, J = 1000 -----------------
t1000 = power_spectrum(1, 1000)
emit("kN_power1000_lambda1em4", N(t1000, mp.mpf("1e-4")), "N(1e-4), t_j = j^-2, J = 1000")
emit("kRho_power1000_t001", rho(t1000, mp.mpf("0.01")), "rho_N(0.01)")
emit("kN_power1000_lambda1", N(t1000, 1), "N(1)")

delta = mp.mpf("1e-3")
target = delta * (1 + mp.sqrt(abs(mp.log(1 / delta))))
emit("kThetaTarget_1em3", target, "delta (1 + sqrt|log 1/delta|) at delta = 1e-3")
lo_s, hi_s = mp.log(mp.mpf("1e-12")), mp.mpf(0)
for _ in range(200):
    mid = (lo_s + hi_s) / 2
    if theta(t1000, mp.e ** mid) < target:
        lo_s = mid
    else:
        hi_s = mid
emit("kThetaInverse_power1000_1em3", mp.e ** lo_s, "Theta^{-1}(target), t_j = j^-2, J = 1000")

d = mp.mpf("1e-2")
emit("kKappaAuto_power1000_1em2", mp.sqrt(8 * abs(mp.log(1 / d)) / N(t1000, 1)), "kappa_auto, delta = 1e-2, alpha0 = 1")

# --- three-eigenvalue fixture -------------------------------------------------
t3 = [mp.mpf(1), mp.mpf("0.25"), mp.mpf("0.0625")]
xd = [mp.mpf(1)] * 3
zeta = [mp.mpf("0.3"), mp.mpf("-0.2"), mp.mpf("0.1")]
dl = mp.mpf("0.1")
z = [t3[j] * xd[j] + dl * zeta[j] for j in range(3)]


def tik_reconstruct(a):
    # x0 = 0: x = g(t) z with g = 1/(t + a)
    return [z[j] / (t3[j] + a) for j in range(3)]


def misfit(a):
    # ||s r (A x0 - z)|| with x0 = 0
    return mp.sqrt(mp.fsum((tik_r(a, t3[j]) ** 2 * z[j]) ** 2 for j in range(3)))


x025 = tik_reconstruct(mp.mpf("0.25"))
for j in range(3):
    emit(f"kFixtureX025_{j}", x025[j], "Tikhonov alpha = 0.25 reconstruction")
emit("kFixtureMisfit025", misfit(mp.mpf("0.25")))
# second route: ||s (A x_alpha - z)||
m2 = mp.sqrt(mp.fsum((mp.mpf("0.25") / (t3[j] + mp.mpf("0.25")) * (t3[j] * x025[j] - z[j])) ** 2 for j in range(3)))
assert abs(m2 - misfit(mp.mpf("0.25"))) < mp.mpf("1e-40")

# statistical rule: tau = 1.5, eta = 1, kappa = 0, alpha0 = 1, q = 1/2, k_max = 30
tau, eta, kappa = mp.mpf("1.5"), mp.mpf(1), mp.mpf(0)
stat_pick = None
for k in range(31):
    a = mp.mpf(2) ** (-k)
    regular = misfit(a) <= tau * (1 + kappa) * dl / rho(t3, a)
    emergency = theta(t3, a) <= eta * (1 + kappa) * dl
    if regular or emergency:
        stat_pick = (k, a, "regular" if regular else "emergency")
        break
emit("kFixtureStatAlpha", stat_pick[1], "statistical rule, brute-force scan")
emit("kFixtureStatSteps", stat_pick[0] + 1)
emit("kFixtureStatRegular", stat_pick[2] == "regular")

# emergency parameter of the statistical rule on the same grid
hat_k = next(k for k in range(31) if theta(t3, mp.mpf(2) ** (-k)) <= eta * (1 + kappa) * dl)
emit("kFixtureStatAlphaHat", mp.mpf(2) ** (-hat_k))

# deterministic rule with delta(alpha) = delta (mu = 0)
det_hat_k = next(k for k in range(31) if mp.mpf(2) ** (-k) <= eta * dl)
det_pick = None
for k in range(det_hat_k + 1):
    a = mp.mpf(2) ** (-k)
    if misfit(a) <= tau * dl:
        det_pick = (k, a, "regular")
        break
if det_pick is None:
    det_pick = (det_hat_k, mp.mpf(2) ** (-det_hat_k), "emergency")
emit("kFixtureDetAlphaHat", mp.mpf(2) ** (-det_hat_k))
emit("kFixtureDetAlpha", det_pick[1], "deterministic rule, mu = 0, brute-force scan")
emit("kFixtureDetSteps", det_pick[0] + 1)
emit("kFixtureDetRegular", det_pick[2] == "regular")

# true-error minimizer over the refined grid q^{1/4} from 1 down to alpha_hat q^2
ratio = mp.mpf(2) ** mp.mpf("-0.25")
lo = mp.mpf(2) ** (-hat_k) / 4
best = None
k = 0
while True:
    a = ratio ** k
    if a < lo * (1 - mp.mpf("1e-12")):
        break
    x = tik_reconstruct(a)
    err = mp.sqrt(mp.fsum((xd[j] - x[j]) ** 2 for j in range(3)))
    if best is None or err < best[1]:
        best = (a, err)
    k += 1
emit("kFixtureOracleAlpha", best[0], "argmin of the true error on the refined grid")
emit("kFixtureOracleValue", best[1])

# --- statistical oracle bracket on the source-type instance ------------------
t2000 = power_spectrum(1, 2000)
xs = [mp.mpf(j) ** mp.mpf("-1.55") for j in range(1, 2001)]
a, d = mp.mpf("0.01"), mp.mpf("1e-3")
bias = mp.sqrt(mp.fsum((tik_r(a, t2000[j]) * xs[j]) ** 2 for j in range(2000)))
rhs = bias + d * (1 + mp.sqrt(abs(mp.log(1 / d)))) / theta(t2000, a)
emit("kOracleRhsSource", rhs, "x_j = j^-1.55, J = 2000, Tikhonov, alpha = 0.01, delta = 1e-3")

# --- self-similarity on t_j = j^-2 (J = 500), v_j = 1/j ----------------------
t500 = power_spectrum(1, 500)
v = [1 / mp.mpf(j) for j in range(1, 501)]
c1, c2, t0, th = mp.mpf(4), mp.mpf("0.25"), mp.mpf("0.1"), mp.mpf("0.9")
tJ = t500[-1]
probes = [mp.e ** (mp.log(tJ) + (mp.log(t0) - mp.log(tJ)) * i / 19) for i in range(20)]
worst, worst_a = mp.mpf(0), None
pworst = mp.mpf(0)
for a in probes:
    lhs = mp.fsum(v[j] ** 2 for j in range(500) if t500[j] <= a)
    rhs = c1 ** 2 * mp.fsum((tik_r(a, t500[j]) * v[j]) ** 2 for j in range(500) if t500[j] >= c2 * a)
    if lhs / rhs > worst:
        worst, worst_a = lhs / rhs, a
    e_small = mp.sqrt(mp.fsum(v[j] ** 2 for j in range(500) if t500[j] <= c2 * a))
    e_big = mp.sqrt(mp.fsum(v[j] ** 2 for j in range(500) if t500[j] <= a))
    pworst = max(pworst, e_small / e_big)
emit("kKnWorstRatio", worst, "filter form, 20 log probes in [t_J, t0]")
emit("kKnPass", worst <= 1)
emit("kKnProjectorWorstRatio", pworst, "projector form, same probes")
emit("kKnProjectorPass", pworst <= th)

print("#pragma once")
print()
print("// Generated by tests/oracles/compute_oracles.py (mpmath, 50 digits). Do not edit.")
print()
print("namespace oracle {")
print()
for line in OUT:
    print(line)
print()
print("}  // namespace oracle")
