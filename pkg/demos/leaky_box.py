"""A box with one permeable wall leaking probability step by step.

A packet bounces between a hard wall at x = -d and a finite step at x = 0;
each encounter with the step transmits some probability, so the survival
inside the box decays roughly by the stationary factor |R(p0)|^2 per bounce.

Run:  python3 demos/leaky_box.py         (writes leaky_box.png here)
"""

import math

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from stepwell import (
    GaussianPacket,
    WaveField,
    asym_inside_exact,
    box_survival,
    reflection_value,
    time_after_step_reflections,
)

d, V = 20.0, 300.0
g = GaussianPacket(alpha=3.0, x0=-10.0, p0=30.0)
R2 = abs(reflection_value(g.p0, V)) ** 2
print(f"per-bounce survival factor |R(p0)|^2 = {R2:.5f}")

xs = np.linspace(-d + 1e-6, -1e-6, 900)
fig, axes = plt.subplots(2, 1, figsize=(9, 5.5), sharex=True)
for ax, m in zip(axes, (1, 2)):
    t = time_after_step_reflections(m, d, g)
    psi = asym_inside_exact(g, d, V, t, xs)
    ax.plot(xs, np.abs(psi) ** 2)
    surv = box_survival(WaveField(t, xs, psi), d)
    ax.set_title(f"after {m} bounce(s), t = {t:.3f}:  "
                 f"survival {surv:.4f} vs |R|^{{2m}} = {R2**m:.4f}")
    print(f"m = {m}: t = {t:.3f}  survival {surv:.5f}  "
          f"prediction {R2**m:.5f}  (rel dev {surv / R2**m - 1.0:+.3f})")
axes[-1].set_xlabel("x")
fig.supylabel("|psi|^2")
fig.tight_layout()
fig.savefig("leaky_box.png", dpi=120)
print("wrote leaky_box.png")
