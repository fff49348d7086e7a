# Quantum nondemolition measurement of one mode's intensity by the other's phase.
#
# Run with:  python3 demos/04_qnd_measurement.py

# %%
import math

import numpy as np

from eitcav import (ModelParams, QuadratureSpec, analytic_steady_theta0, drift_matrix,
                    qnd_coefficients, squeezing_spectrum, steady_at, spectra)
from eitcav.oracles import oracle_qnd_zero_freq

params = ModelParams(epsilon=0.0625, cooperativity=250.0)

# %%
# Resonant asymmetric state: meter is mode 1, signal is mode 2.
for Y in (0.8, 0.9, 0.95, 0.99):
    s = analytic_steady_theta0(Y, params)[0]
    A = drift_matrix(s, params)
    Cs, Cm, V = qnd_coefficients(s, A, meter=1)
    print(f"Y={Y}: Cs={Cs:.4f} Cm={Cm:.4f} Vsm={V:.5f}  closed form Vsm={oracle_qnd_zero_freq(Y)[2]:.5f}")

# %%
# The signal intensity quadrature passes through unchanged while the phase
# quadrature picks up the back action.
s = analytic_steady_theta0(0.95, params)[0]
A = drift_matrix(s, params)
print("S_int  =", squeezing_spectrum(s, A, QuadratureSpec(2, 0.0), 0.0))
print("S_phase=", squeezing_spectrum(s, A, QuadratureSpec(2, math.pi / 2), 0.0))

# %%
# A small common cavity detuning, followed continuously from resonance.
p = params.with_theta(0.0018)
s = steady_at(p, 0.95, "AsymmetricA")
w = np.linspace(0, 5, 501)
res = spectra(s, drift_matrix(s, p), w, fields=(1,), meter=1)
k = int(np.argmin(res.Vsm))
print(f"best frequency w={w[k]:g}: Cs={res.Cs[k]:.4f} Cm={res.Cm[k]:.4f} Vsm={res.Vsm[k]:.4f}")
