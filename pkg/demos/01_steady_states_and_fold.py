# Steady states of the two-mode EIT cavity and the symmetry-breaking fold.
#
# Run with:  python3 demos/01_steady_states_and_fold.py

# %%
import numpy as np

from eitcav import (ModelParams, DriveSpec, analytic_steady_theta0, solve_steady,
                    sweep_input_intensity, find_turning_point, drift_matrix)

# Both modes resonant, Y is the rescaled input intensity.  Everything below is
# universal in the rescaled intensities, so C and epsilon only set the scale.
params = ModelParams(epsilon=0.0625, cooperativity=250.0)

# %%
# Below Y = 1 the only solutions are an asymmetric pair related by swapping
# the modes.  Above Y = 1 there are two symmetric solutions.
for Y in (0.95, 1.05):
    for s in analytic_steady_theta0(Y, params):
        print(f"Y={Y:<5} {s.branch:<15} I1={s.I1:.6f} I2={s.I2:.6f} {s.stability}")

# %%
# Newton polishes any guess; the analytic state is already a root.
s = analytic_steady_theta0(0.95, params)[0]
polished = solve_steady(params, DriveSpec(0.95, *s.phases_in), s)
print("Newton iterations from the analytic seed:", polished.iterations)

# %%
# Continuation in Y traces all branches.
grid = np.round(np.linspace(0.5, 1.5, 21), 3)
for b in sweep_input_intensity(params, grid):
    I = b.intensities()
    print(f"{b.label:<15} Y in [{min(b.values):.2f}, {max(b.values):.2f}]  "
          f"I1 from {I[0, 0]:.4f} to {I[-1, 0]:.4f}")

# %%
# The symmetric branches merge at the fold where the leading eigenvalue of
# the drift matrix crosses zero.
fold = find_turning_point(params)
print(f"fold at Y = {fold.Y:.9f}, I = {fold.state.I1:.9f}, "
      f"leading eigenvalue {fold.leading_eigenvalue:.2e}")

# %%
# On the upper symmetric branch the eigenvalues are -1 +/- 1/(2I).
plus = analytic_steady_theta0(1.05, params)[0]
print("eigenvalues:", np.round(np.sort(drift_matrix(plus, params).eigenvalues().real), 6))
print("expected:   ", np.round([-1 - 1 / (2 * plus.I1), -1 + 1 / (2 * plus.I1)], 6))
