#!/usr/bin/env python3
"""Derive the default two-trap coefficients and the relaxation fixture.

Targets, at the maximum light level of 1.4 nW focused into a 35 um spot:
  * sensitivity rise of more than 10x reached within about 100 s,
  * saturated afterwards (relative slope below 1 %/s),
  * dark relaxation with the fitted 100 s / 5 s time constants.

The slow trap is set to fill at c1*I = 2/tau1 (equilibrium occupation 2/3,
effective rise time ~33 s) and the fast trap at c2*I = 1/tau2 (occupation
1/2). Gains beta1 = 14, beta2 = 2 then put the equilibrium sensitivity at
s/s0 = 1 + 14*(2/3) + 2*(1/2) = 11.3.

Running this script prints the [traps]/[schedule] sections used by the
scenario files and rewrites tests/data/relaxation_fixture.csv from the
closed-form dark decay after 400 s of illumination.
"""

import math
import pathlib

TAU1, TAU2 = 100.0, 5.0
BETA1, BETA2 = 14.0, 2.0
POWER_W = 1.4e-9
SPOT_DIAMETER_M = 35e-6

intensity = POWER_W / (math.pi * (SPOT_DIAMETER_M / 2) ** 2)
c1 = (2.0 / TAU1) / intensity
c2 = (1.0 / TAU2) / intensity
# frozen (rounded) values shipped in the defaults
c1_frozen, c2_frozen = 0.01374, 0.1374


def equilibrium(c, tau):
    k = c * intensity + 1.0 / tau
    return (c * intensity) / k, 1.0 / k


def main():
    n1_eq, t1_eff = equilibrium(c1_frozen, TAU1)
    n2_eq, t2_eff = equilibrium(c2_frozen, TAU2)
    s_eq = 1.0 + BETA1 * n1_eq + BETA2 * n2_eq

    def s_of_t(t):
        n1 = n1_eq * (1.0 - math.exp(-t / t1_eff))
        n2 = n2_eq * (1.0 - math.exp(-t / t2_eff))
        return 1.0 + BETA1 * n1 + BETA2 * n2

    slope = (s_of_t(101.0) - s_of_t(100.0)) / s_of_t(100.0)
    print(f"intensity            = {intensity!r} W/m^2")
    print(f"exact c1, c2         = {c1:.6g}, {c2:.6g}")
    print(f"frozen c1, c2        = {c1_frozen}, {c2_frozen}")
    print(f"equilibrium s/s0     = {s_eq:.4f}")
    print(f"s(100 s)/s0          = {s_of_t(100.0):.4f}  (target > 10)")
    print(f"relative slope @100s = {slope * 100:.3f} %/s  (target < 1)")
    print()
    print("[traps]")
    print(f"tau1_s = {TAU1:g}")
    print(f"tau2_s = {TAU2:g}")
    print("capacity1 = 1")
    print("capacity2 = 1")
    print(f"fill1_m2_per_w_s = {c1_frozen}")
    print(f"fill2_m2_per_w_s = {c2_frozen}")
    print(f"gain1 = {BETA1:g}")
    print(f"gain2 = {BETA2:g}")
    print("s0 = 1")
    print()
    print("[schedule]")
    print(f"on_intensity_w_m2 = {intensity!r}")
    print("on_duration_s = 400")
    print("horizon_s = 800")
    print("step_s = 0.5")

    # relaxation fixture: closed-form dark decay from the populations after
    # 400 s of illumination, sampled every 2 s for 400 s
    t_on = 400.0
    n1_on = n1_eq * (1.0 - math.exp(-t_on / t1_eff))
    n2_on = n2_eq * (1.0 - math.exp(-t_on / t2_eff))
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"
    out.mkdir(parents=True, exist_ok=True)
    path = out / "relaxation_fixture.csv"
    with open(path, "w") as f:
        f.write("time_s,quantum_efficiency\n")
        for k in range(201):
            t = 2.0 * k
            s = 1.0 + BETA1 * n1_on * math.exp(-t / TAU1) + BETA2 * n2_on * math.exp(-t / TAU2)
            f.write(f"{t:g},{s!r}\n")
    print(f"\nwrote {path}")


if __name__ == "__main__":
    main()
