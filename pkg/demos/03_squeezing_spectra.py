# Quadrature squeezing of the output fields on the symmetric branch.
#
# Run with:  python3 demos/03_squeezing_spectra.py

# %%
import numpy as np

from eitcav import (ModelParams, QuadratureSpec, analytic_steady_theta0, drift_matrix,
                    spectra, best_squeezing, worst_squeezing, squeezing_spectrum)
from eitcav.oracles import oracle_sbest

params = ModelParams(epsilon=0.0625, cooperativity=250.0)
plus = analytic_steady_theta0(1.05, params)[0]
A = drift_matrix(plus, params)

# %%
# Best squeezing versus frequency, compared with the closed form.
w = np.linspace(0, 5, 11)
res = spectra(plus, A, w, fields=(1,))
for om, s, phi in zip(w, res.S_best[1], res.phi_star[1]):
    print(f"w={om:.1f}  S_best={s:.6f}  closed form={oracle_sbest(plus.I1, om):.6f}  phi*={phi:.4f}")

# %%
# The state is minimum-uncertainty at every frequency.
_, s_min = best_squeezing(plus, A, 1, 0.0)
_, s_max = worst_squeezing(plus, A, 1, 0.0)
print("S_best * S_worst =", s_min * s_max)

# %%
# Far outside the cavity bandwidth the light is at shot noise.
print("S(w=1000) =", squeezing_spectrum(plus, A, QuadratureSpec(1, 0.3), 1e3))
