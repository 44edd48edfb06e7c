"""A slow packet totally reflected by a potential step.

With kinetic energy only 1/4 of the step height the packet cannot pass; it
swaps its momentum sign on reflection and leaves behind a transient
evanescent tail inside the step whose density decays as
exp(-2 sqrt(2mV - p0^2) x / hbar).

Run:  python3 demos/step_forbidden.py    (writes step_forbidden.png here)
"""

import math

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from stepwell import (
    GaussianPacket,
    observables,
    reflection_value,
    step_exact_field,
    step_right_exact,
)

g = GaussianPacket(alpha=1.0, x0=-10.0, p0=10.0)
V = 200.0                  # k = p0^2 / 2mV = 1/4
t_R = abs(g.x0) / g.p0     # classical reflection time

R = reflection_value(g.p0, V)
print(f"|R(p0)| = {abs(R):.15f}  (total reflection)")

xs = np.concatenate([np.linspace(-35.0, -0.01, 700),
                     np.linspace(0.01, 2.0, 200)])
fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True)
for ax, t in zip(axes, (0.0, t_R, 2.0 * t_R)):
    fld = step_exact_field(g, V, t, xs)
    ax.semilogy(xs, np.abs(fld.amps) ** 2 + 1e-30)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_ylim(1e-12, 2)
    ax.set_title(f"t = {t:g}")
    rep = observables(fld)
    print(f"t = {t:4.2f}  mean p {rep.mean_p:8.3f}  "
          f"right mass {rep.right_mass:.2e}")
axes[-1].set_xlabel("x")
fig.supylabel("|psi|^2  (log)")
fig.tight_layout()
fig.savefig("step_forbidden.png", dpi=120)
print("wrote step_forbidden.png")

# measure the evanescent decay rate at the reflection time
xs_t = np.linspace(0.02, 0.35, 30)
vals = step_right_exact(g, V, t_R, xs_t)
slope = np.polyfit(xs_t, np.log(np.abs(vals) ** 2), 1)[0]
want = -2.0 * math.sqrt(2.0 * V - g.p0**2)
print(f"tail log-slope {slope:.3f} (prediction {want:.3f})")
