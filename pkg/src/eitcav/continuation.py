"""Steady-state solver, linear stability and branch continuation.

Fluctuations are written in the doubled basis ``(dx1, dx1*, dx2, dx2*)`` and
obey ``d(dx)/dt = A dx`` with the drift matrix ``A = -d r / d(x, x*)``, where
``r`` is the steady-state residual of :mod:`eitcav.model`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NoConvergence, SingularInput, SingularJacobian
from .model import (
    ASYMMETRIC_A,
    ASYMMETRIC_B,
    INTENSITY_FLOOR,
    MARGINAL,
    STABLE,
    SYMMETRIC_MINUS,
    SYMMETRIC_PLUS,
    UNSTABLE,
    DriveSpec,
    ModelParams,
    SteadyState,
    analytic_drive,
    analytic_steady_theta0,
    continued_label,
    make_state,
    steady_residual,
)

RESIDUAL_TOL = 1e-11
MAX_NEWTON_ITER = 100
MAX_HALVINGS = 30
EIG_TOL = 1e-8
MIN_STEP = 1e-7
MAX_JUMP = 0.1


@dataclass(frozen=True)
class DriftMatrix:
    matrix: np.ndarray
    state: SteadyState
    params: ModelParams

    def eigenvalues(self) -> np.ndarray:
        ev = np.linalg.eigvals(self.matrix)
        return ev[np.lexsort((ev.imag, -ev.real))]

    def block(self, i: int, j: int) -> np.ndarray:
        """2x2 block coupling field ``j`` into the equation of field ``i`` (1-based)."""
        return self.matrix[2 * (i - 1):2 * i, 2 * (j - 1):2 * j]


@dataclass
class Branch:
    """States tracked along one scan parameter, in grid order."""

    label: str
    parameter: str
    values: list[float] = field(default_factory=list)
    states: list[SteadyState] = field(default_factory=list)
    steps: int = 0
    retries: int = 0
    failures: list[float] = field(default_factory=list)

    @property
    def truncated(self) -> bool:
        return bool(self.failures)

    def __len__(self):
        return len(self.states)

    def intensities(self) -> np.ndarray:
        return np.array([[s.I1, s.I2] for s in self.states]).reshape(-1, 2)


@dataclass(frozen=True)
class FoldPoint:
    Y: float
    state: SteadyState
    leading_eigenvalue: float


def _polarization_gradients(x1: complex, x2: complex, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Wirtinger derivatives of v and w with respect to (x1, x1*, x2, x2*)."""
    n1, n2 = abs(x1) ** 2, abs(x2) ** 2
    S = n1 + n2
    if not S >= INTENSITY_FLOOR:
        raise SingularInput(f"|x1|^2 + |x2|^2 = {S!r} is below the singularity floor")
    k = 4j * eps / S ** 3
    dv = np.array([
        k * n2 * (n2 - n1),
        -2 * k * x1 * x1 * n2,
        k * x1 * np.conj(x2) * (n1 - n2),
        k * x1 * x2 * (n1 - n2),
    ])
    dw = -np.array([
        k * x2 * np.conj(x1) * (n2 - n1),
        k * x2 * x1 * (n2 - n1),
        k * n1 * (n1 - n2),
        -2 * k * x2 * x2 * n1,
    ])
    return dv, dw


def _conj_row(row: np.ndarray) -> np.ndarray:
    return np.conj(row[[1, 0, 3, 2]])


def _drift(x1: complex, x2: complex, params: ModelParams) -> np.ndarray:
    A = np.zeros((4, 4), dtype=complex)
    A[0, 0] = -(1 + 1j * params.theta1)
    A[2, 2] = -(1 + 1j * params.theta2)
    if params.cooperativity != 0:
        dv, dw = _polarization_gradients(x1, x2, params.epsilon)
        A[0] -= 2 * params.cooperativity * dv
        A[2] -= 2 * params.cooperativity * dw
    A[1] = _conj_row(A[0])
    A[3] = _conj_row(A[2])
    return A


def drift_matrix(state: SteadyState, params: ModelParams) -> DriftMatrix:
    """Linearization of the field dynamics around ``state`` (time unit ``1/kappa``)."""
    return DriftMatrix(_drift(state.x1, state.x2, params), state, params)


def finite_difference_drift(state: SteadyState, params: ModelParams, step: float = 1e-6) -> np.ndarray:
    """Drift matrix from central differences of :func:`steady_residual`.

    Independent of the closed-form gradients; used to cross-check them.
    """
    x = np.array([state.x1, state.x2], dtype=complex)
    zero_drive = (0j, 0j)

    def res(xx):
        r = steady_residual((xx[0], xx[1]), params, zero_drive)
        return np.array([r[0], np.conj(r[0]), r[1], np.conj(r[1])])

    A = np.zeros((4, 4), dtype=complex)
    for j in range(2):
        h = step * max(1.0, abs(x[j]))
        e = np.zeros(2, dtype=complex)
        e[j] = h
        d_re = (res(x + e) - res(x - e)) / (2 * h)
        d_im = (res(x + 1j * e) - res(x - 1j * e)) / (2 * h)
        A[:, 2 * j] = -0.5 * (d_re - 1j * d_im)
        A[:, 2 * j + 1] = -0.5 * (d_re + 1j * d_im)
    return A


def classify_stability(A: DriftMatrix | np.ndarray, tol: float = EIG_TOL) -> str:
    mat = A.matrix if isinstance(A, DriftMatrix) else np.asarray(A)
    lead = float(np.max(np.linalg.eigvals(mat).real))
    if abs(lead) <= tol:
        return MARGINAL
    return STABLE if lead < 0 else UNSTABLE


def _residual_norm(x: np.ndarray, params: ModelParams, y) -> float:
    try:
        return float(np.linalg.norm(steady_residual((x[0], x[1]), params, y)))
    except SingularInput:
        return math.inf


def solve_steady(params: ModelParams, drive: DriveSpec, guess: SteadyState | Sequence[complex],
                 branch: str | None = None, tol: float = RESIDUAL_TOL,
                 max_iter: int = MAX_NEWTON_ITER) -> SteadyState:
    """Newton iteration with backtracking on the steady-state residual."""
    if isinstance(guess, SteadyState):
        x = guess.amplitudes.copy()
        label = guess.branch if branch is None else branch
    else:
        x = np.asarray(guess, dtype=complex).copy()
        label = continued_label(0) if branch is None else branch
    if not np.all(np.isfinite(x)):
        raise DomainError("guess must be finite")
    y = drive.input_amplitudes(params)

    norm = _residual_norm(x, params, y)
    if not math.isfinite(norm):
        raise SingularInput("guess lies below the intensity floor")
    it = 0
    while norm >= tol:
        if it >= max_iter:
            raise NoConvergence(f"Newton did not converge in {max_iter} iterations (|r| = {norm:.3e})")
        r = steady_residual((x[0], x[1]), params, y)
        J = -_drift(x[0], x[1], params)
        if np.linalg.cond(J) > 1e15:
            raise SingularJacobian("Jacobian is singular; the state sits on a fold")
        dz = np.linalg.solve(J, -np.array([r[0], np.conj(r[0]), r[1], np.conj(r[1])]))
        dx = dz[[0, 2]]
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = x + lam * dx
            tnorm = _residual_norm(trial, params, y)
            if tnorm < norm:
                break
            lam *= 0.5
        else:
            raise NoConvergence(f"line search failed (|r| = {norm:.3e})")
        x, norm = trial, tnorm
        it += 1

    A = _drift(x[0], x[1], params)
    return make_state(x[0], x[1], params, y, label, classify_stability(A), it)


def _jumped(a: SteadyState, b: SteadyState, bound: float) -> bool:
    # absolute below unit intensity, relative above
    scale = max(1.0, a.I1, a.I2)
    return max(abs(a.I1 - b.I1), abs(a.I2 - b.I2)) > bound * scale


def _advance(state: SteadyState, value: float, target: float,
             setup: Callable[[float], tuple[ModelParams, DriveSpec]], branch: Branch,
             min_step: float, max_jump: float) -> SteadyState:
    try:
        new = solve_steady(*setup(target), state)
        if _jumped(state, new, max_jump):
            raise NoConvergence("continuation step jumped to another solution")
        branch.steps += 1
        return new
    except (NoConvergence, SingularInput):
        if abs(target - value) <= 2 * min_step:
            raise
        branch.retries += 1
        mid = 0.5 * (value + target)
        half = _advance(state, value, mid, setup, branch, min_step, max_jump)
        return _advance(half, mid, target, setup, branch, min_step, max_jump)


def _track(seed: SteadyState, start: float, grid: Sequence[float],
           setup: Callable[[float], tuple[ModelParams, DriveSpec]], branch: Branch,
           min_step: float, max_jump: float) -> list[tuple[float, SteadyState]]:
    """Natural-parameter continuation from ``seed`` at ``start`` through ``grid`` (in order)."""
    out = []
    state, value = seed, start
    for target in grid:
        try:
            state = _advance(state, value, target, setup, branch, min_step, max_jump)
        except (NoConvergence, SingularInput):
            branch.failures.append(float(target))
            break
        value = target
        out.append((float(target), state))
    return out


def _monotone(grid: Sequence[float]) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise DomainError("grid must be a nonempty 1-d sequence")
    d = np.diff(g)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise DomainError("grid must be strictly monotone")
    return g


def sweep_cavity_scan(params: ModelParams, drive: DriveSpec, theta_grid: Sequence[float],
                      min_step: float = MIN_STEP, max_jump: float = MAX_JUMP) -> list[Branch]:
    """Continue every zero-detuning solution over ``theta1 = theta2 = theta``.

    Each analytic solution at ``theta = 0`` seeds one branch which is tracked
    outwards in both directions until the grid ends or the branch folds.
    """
    g = _monotone(theta_grid)
    order = np.argsort(g)
    base = params.with_theta(0.0)
    branches = []
    for seed in analytic_steady_theta0(drive.Y, base):
        if seed.stability == MARGINAL:
            continue
        seed_drive = analytic_drive(drive.Y, seed)

        def setup(theta, _d=seed_drive):
            return params.with_theta(theta), _d

        br = Branch(seed.branch, "theta")
        start = solve_steady(base, seed_drive, seed)
        up = [t for t in g[order] if t >= 0]
        down = [t for t in g[order][::-1] if t < 0]
        pts = _track(start, 0.0, down, setup, br, min_step, max_jump)[::-1]
        pts += _track(start, 0.0, up, setup, br, min_step, max_jump)
        pts.sort(key=lambda p: p[0], reverse=bool(g[0] > g[-1]))
        br.values = [p[0] for p in pts]
        br.states = [p[1] for p in pts]
        branches.append(br)
    return branches


def sweep_input_intensity(params: ModelParams, Y_grid: Sequence[float],
                          min_step: float = MIN_STEP, max_jump: float = MAX_JUMP) -> list[Branch]:
    """Steady states versus the common input intensity at zero cavity detuning.

    The symmetric branches are seeded at the largest grid value above the fold
    and continued downwards; the asymmetric pair is seeded at the smallest
    positive grid value and continued upwards.  Each branch is seeded once, so
    every other point is an independent Newton result.
    """
    if params.theta1 != 0 or params.theta2 != 0:
        raise DomainError("input-intensity sweeps require theta1 == theta2 == 0")
    g = np.sort(_monotone(Y_grid))
    positive = g[g > 0]
    branches = []

    above = positive[positive >= 1]
    if above.size and above[-1] > 1:
        seeds = {s.branch: s for s in analytic_steady_theta0(float(above[-1]), params)}
        for label in (SYMMETRIC_PLUS, SYMMETRIC_MINUS):
            branches.append(_track_intensity(params, seeds[label], above[::-1], min_step, max_jump))

    below = positive[positive <= 1]
    if below.size and below[0] < 1:
        seeds = {s.branch: s for s in analytic_steady_theta0(float(below[0]), params)}
        for label in (ASYMMETRIC_A, ASYMMETRIC_B):
            branches.append(_track_intensity(params, seeds[label], below, min_step, max_jump))

    for br in branches:
        pts = sorted(zip(br.values, br.states), key=lambda p: p[0])
        br.values = [p[0] for p in pts]
        br.states = [p[1] for p in pts]
    return branches


def _track_intensity(params, seed, grid, min_step, max_jump) -> Branch:
    # The seed's drive phases stay fixed along the sweep; only |y| varies.
    phases = (seed.phases_in[0], seed.phases_in[1])

    def setup(Y):
        return params, DriveSpec(Y=Y, phase1=phases[0], phase2=phases[1])

    br = Branch(seed.branch, "Y")
    start = solve_steady(*setup(float(grid[0])), seed)
    pts = [(float(grid[0]), start)]
    pts += _track(start, float(grid[0]), grid[1:], setup, br, min_step, max_jump)
    br.values = [p[0] for p in pts]
    br.states = [p[1] for p in pts]
    return br


def symmetric_state(I: float, params: ModelParams) -> tuple[SteadyState, DriveSpec]:
    """Point of the symmetric branch with intensity ``I`` and the drive that sustains it."""
    if not I > 0:
        raise DomainError("I must be positive")
    xr = math.sqrt(params.intensity_scale * I)
    y = steady_residual((xr + 0j, xr + 0j), params, (0j, 0j))
    drive = DriveSpec(Y=abs(y[0]) ** 2 / params.intensity_scale,
                      phase1=float(np.angle(y[0])), phase2=float(np.angle(y[1])))
    state = make_state(xr, xr, params, (complex(y[0]), complex(y[1])), SYMMETRIC_PLUS)
    return state, drive


def _leading(I: float, params: ModelParams) -> float:
    state, _ = symmetric_state(I, params)
    return float(np.max(np.linalg.eigvals(_drift(state.x1, state.x2, params)).real))


def find_turning_point(params: ModelParams, Y_bracket: tuple[float, float] = (0.5, 2.0),
                       xtol: float = 1e-14) -> FoldPoint:
    """Locate the fold of the symmetric branch by bisection on its leading eigenvalue."""
    if params.theta1 != 0 or params.theta2 != 0:
        raise DomainError("turning point search requires theta1 == theta2 == 0")
    Is = np.geomspace(0.02, 50.0, 400)
    Ys = np.array([symmetric_state(I, params)[1].Y for I in Is])
    lead = np.array([_leading(I, params) for I in Is])
    lo = hi = None
    for k in range(len(Is) - 1):
        inside = Y_bracket[0] <= Ys[k] <= Y_bracket[1] and Y_bracket[0] <= Ys[k + 1] <= Y_bracket[1]
        if inside and np.sign(lead[k]) != np.sign(lead[k + 1]):
            lo, hi = Is[k], Is[k + 1]
            break
    if lo is None:
        raise NoConvergence(f"no eigenvalue sign change on the symmetric branch for Y in {Y_bracket}")
    f_lo = _leading(lo, params)
    for _ in range(200):
        if hi - lo <= xtol * hi:
            break
        mid = 0.5 * (lo + hi)
        f_mid = _leading(mid, params)
        if f_mid == 0:
            lo = hi = mid
            break
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    I_star = 0.5 * (lo + hi)
    state, drive = symmetric_state(I_star, params)
    A = _drift(state.x1, state.x2, params)
    lead_ev = float(np.max(np.linalg.eigvals(A).real))
    return FoldPoint(drive.Y, replace(state, stability=classify_stability(A)), abs(lead_ev))


def steady_at(params: ModelParams, Y: float, branch: str, n_steps: int = 20,
              min_step: float = MIN_STEP, max_jump: float = MAX_JUMP) -> SteadyState:
    """State of ``branch`` at the detunings of ``params``.

    The zero-detuning analytic solution of ``branch`` is continued along the
    straight path ``theta_j(s) = s * theta_j``, ``s`` from 0 to 1.
    """
    base = params.with_theta(0.0, 0.0)
    seeds = {s.branch: s for s in analytic_steady_theta0(Y, base)}
    if branch not in seeds:
        raise DomainError(f"branch {branch!r} does not exist at Y = {Y!r}; available: {sorted(seeds)}")
    seed = seeds[branch]
    drive = analytic_drive(Y, seed)
    start = solve_steady(base, drive, seed)
    if params.theta1 == 0 and params.theta2 == 0:
        return start

    def setup(s):
        return params.with_theta(s * params.theta1, s * params.theta2), drive

    br = Branch(branch, "s")
    pts = _track(start, 0.0, np.linspace(0, 1, n_steps + 1)[1:], setup, br, min_step, max_jump)
    if br.failures:
        raise NoConvergence(f"continuation of {branch} to theta = {params.thetas} failed at s = {br.failures[0]:g}")
    return pts[-1][1]
