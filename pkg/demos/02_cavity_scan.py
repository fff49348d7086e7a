# Scanning both cavity detunings together at fixed input intensity.
#
# Run with:  python3 demos/02_cavity_scan.py

# %%
import numpy as np

from eitcav import ModelParams, DriveSpec, sweep_cavity_scan, STABLE

params = ModelParams(epsilon=0.0625, cooperativity=250.0)
theta = np.linspace(-0.01, 0.01, 41)

# %%
# Below threshold the two stable states are mirror images: branch B at
# detuning theta equals branch A at -theta with the modes exchanged.
branches = {b.label: b for b in sweep_cavity_scan(params, DriveSpec(0.95), theta)}
a, b = branches["AsymmetricA"], branches["AsymmetricB"]
Ia, Ib = a.intensities(), b.intensities()
print("max reflection mismatch:", np.abs(Ia - Ib[::-1, ::-1]).max())

for k in range(0, len(theta), 10):
    print(f"theta={theta[k]:+.4f}  A: I1={Ia[k, 0]:.4f} I2={Ia[k, 1]:.4f}  "
          f"B: I1={Ib[k, 0]:.4f} I2={Ib[k, 1]:.4f}")

# %%
# Above threshold only the symmetric upper branch is stable.
for br in sweep_cavity_scan(params, DriveSpec(1.05), theta):
    n_stable = sum(s.stability == STABLE for s in br.states)
    print(f"{br.label:<15} {n_stable}/{len(br.states)} stable points")
