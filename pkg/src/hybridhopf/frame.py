"""Hopf-point location, assumption checks, and the standard coordinate frame.

The classification formulas assume coordinates u = (y1, y2, z) in which the
Jacobian at the distinguished point is exactly

    [[0, -omega, 0],
     [omega, 0, 0],
     [0, 0, 0]],

the equilibrium line is tangent to the z-axis, and the parameter enters the
planar components only at second order.  This module finds such a point on a
line of equilibria, builds the frame (including the parameter-dependent
origin shift that removes the first-order planar drift), verifies the
standing assumptions, and rewrites a raw derivative jet in frame coordinates.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Mapping, Sequence

import numpy as np

from . import models
from .errors import DefectiveSpectrum, NoConvergence, NonFinite, NotHopf
from .models import JetTable, ModelDefinition, STATE_DIM

#: |F| and |Re nu| targets for locate_hopf_point
LOCATE_RESIDUAL_TOL = 1e-12
LOCATE_SPECTRUM_TOL = 1e-10
#: line-of-equilibria residual threshold (assumption: F vanishes on a curve)
A1_THRESHOLD = 1e-10
#: spectrum-pattern threshold for {0, +-i omega}
A2_THRESHOLD = 1e-8
#: quantities below this magnitude count as zero in assumption verdicts
NONZERO_THRESHOLD = 1e-6


def _spectrum_split(J: np.ndarray) -> tuple[complex, complex]:
    """Return (nu, nu0): the rotation eigenvalue (Im > 0 if any) and the real one."""
    eigs = np.linalg.eigvals(J)
    order = np.argsort(-np.abs(eigs.imag))
    nu = eigs[order[0]]
    nu0 = eigs[order[2]]
    if nu.imag < 0:
        nu = np.conj(nu)
    return complex(nu), complex(nu0)


def _numeric_jacobian(model: ModelDefinition, X: np.ndarray, mu: float) -> np.ndarray:
    if model.jacobian is not None:
        return np.asarray(model.jacobian(X, mu), dtype=float)
    if model.exact_jet is not None:
        return model.exact_jet(X, mu).jacobian()
    J = np.empty((STATE_DIM, STATE_DIM))
    for i in range(STATE_DIM):
        h = 1e-7 * max(1.0, abs(X[i]))
        e = np.zeros(STATE_DIM)
        e[i] = h
        J[:, i] = (model.rhs(X + e, mu) - model.rhs(X - e, mu)) / (2.0 * h)
    return J


def locate_hopf_point(
    model: ModelDefinition,
    seed: Sequence[float],
    mu: float = 0.0,
    max_iter: int = 50,
) -> np.ndarray:
    """Newton-solve {F(X) = 0, Re nu(X) = 0} for a point on the equilibrium line
    where the planar eigenvalue pair crosses the imaginary axis.

    The system is overdetermined (four conditions, three unknowns) but
    consistent on a line of equilibria; steps are least-squares solves.
    """
    X = np.asarray(seed, dtype=float).copy()
    if X.shape != (STATE_DIM,):
        raise NoConvergence(f"seed must be a 3-vector, got shape {X.shape}")

    def residual(P: np.ndarray) -> np.ndarray:
        F = models.evaluate(model, P, mu)
        nu, _ = _spectrum_split(_numeric_jacobian(model, P, mu))
        return np.array([F[0], F[1], F[2], nu.real])

    G = residual(X)
    for _ in range(max_iter):
        F_norm = float(np.max(np.abs(G[:3])))
        if F_norm < LOCATE_RESIDUAL_TOL and abs(G[3]) < LOCATE_SPECTRUM_TOL:
            break
        # finite-difference Jacobian of the residual
        JG = np.empty((4, STATE_DIM))
        for i in range(STATE_DIM):
            h = 1e-7 * max(1.0, abs(X[i]))
            e = np.zeros(STATE_DIM)
            e[i] = h
            JG[:, i] = (residual(X + e) - residual(X - e)) / (2.0 * h)
        step, *_ = np.linalg.lstsq(JG, -G, rcond=None)
        base = float(np.linalg.norm(G))
        scale = 1.0
        for _halving in range(12):
            try:
                G_new = residual(X + scale * step)
            except NonFinite:
                scale *= 0.5
                continue
            if np.linalg.norm(G_new) < base or scale < 1e-6:
                break
            scale *= 0.5
        else:
            raise NoConvergence("Hopf-point search stalled: no descent direction")
        X = X + scale * step
        G = G_new
    else:
        raise NoConvergence(
            f"Hopf-point search did not converge in {max_iter} iterations "
            f"(|F| = {np.max(np.abs(G[:3])):.2e}, Re nu = {G[3]:.2e})"
        )

    nu, nu0 = _spectrum_split(_numeric_jacobian(model, X, mu))
    if nu.imag <= A2_THRESHOLD:
        raise NotHopf(f"no rotation pair at the converged point (Im nu = {nu.imag:.2e})")
    if abs(nu0) > A2_THRESHOLD:
        raise NotHopf(
            f"third eigenvalue is not zero at the converged point (nu0 = {nu0:.2e})"
        )
    return X


@dataclasses.dataclass(frozen=True)
class StandardFrame:
    """Affine chart u = basis^{-1} (X - origin - mu * basis @ mu_shift).

    ``basis`` columns are (e1, e2, e3): the planar rotation pair and the
    line-tangent direction.  ``mu_shift`` is the frame-coordinate origin
    correction that cancels the first-order parameter drift in the planar
    components; it has zero third component by construction.
    """

    origin: np.ndarray
    basis: np.ndarray
    mu_shift: np.ndarray
    omega: float

    def to_frame(self, X: Sequence[float], mu: float = 0.0) -> np.ndarray:
        rel = np.asarray(X, dtype=float) - self.origin
        return np.linalg.solve(self.basis, rel) - mu * self.mu_shift

    def from_frame(self, u: Sequence[float], mu: float = 0.0) -> np.ndarray:
        shifted = np.asarray(u, dtype=float) + mu * self.mu_shift
        return self.origin + self.basis @ shifted


def _realify(vec: np.ndarray) -> np.ndarray:
    """Real eigenvector from a possibly complex-typed one (real eigenvalue)."""
    pivot = vec[np.argmax(np.abs(vec))]
    real = (vec / pivot).real
    return real / np.linalg.norm(real)


def _signed(vec: np.ndarray) -> np.ndarray:
    """Flip sign so the largest-magnitude component is positive."""
    pivot = vec[np.argmax(np.abs(vec))]
    return -vec if pivot < 0 else vec


def build_standard_frame(jet: JetTable) -> StandardFrame:
    """Frame from the jet at a located Hopf point.

    The rotation plane comes from the complex eigenvector v of the +i*omega
    eigenvalue: any phase choice c gives e1 = Im(c v), e2 = Re(c v) with
    J e1 = omega e2 and J e2 = -omega e1.  The phase is fixed by requiring
    the second component of e1 to vanish with the first nonnegative (falling
    back to the sign of the largest component when the first is zero), and
    e1 is normalized to unit length.  e3 is the unit kernel direction with
    its largest component positive.
    """
    J = jet.jacobian()
    eigvals, eigvecs = np.linalg.eig(J)
    scale = max(1e-30, float(np.max(np.abs(eigvals))))
    order = np.argsort(-np.abs(eigvals.imag))
    if abs(eigvals[order[0]].imag) <= A2_THRESHOLD * scale:
        raise DefectiveSpectrum("no simple rotation pair in the spectrum")
    pairwise = [
        abs(eigvals[i] - eigvals[j]) for i in range(3) for j in range(i + 1, 3)
    ]
    if min(pairwise) < 1e-10 * scale:
        raise DefectiveSpectrum("eigenvalues are not simple")

    idx_plus = next(i for i in order if eigvals[i].imag > 0)
    idx_zero = order[2]
    omega = float(eigvals[idx_plus].imag)
    v = eigvecs[:, idx_plus]
    v = v / np.max(np.abs(v))

    # phase: make Im((e^{i theta} v)_2) = 0
    if abs(v[1]) > 1e-12:
        theta = -np.angle(v[1])
    else:
        theta = math.pi / 2.0 - np.angle(v[0])
    candidates = []
    for t in (theta, theta + math.pi):
        cv = np.exp(1j * t) * v
        e1 = cv.imag
        e2 = cv.real
        candidates.append((e1, e2))
    # prefer positive first component of e1; tie-break on largest component
    def keyed(pair):
        e1, _ = pair
        first = e1[0]
        if abs(first) > 1e-12 * np.linalg.norm(e1):
            return first
        return e1[np.argmax(np.abs(e1))]

    e1, e2 = max(candidates, key=keyed)
    rho = np.linalg.norm(e1)
    e1 = e1 / rho
    e2 = e2 / rho

    e3 = _signed(_realify(eigvecs[:, idx_zero]))
    basis = np.column_stack([e1, e2, e3])
    if abs(np.linalg.det(basis)) < 1e-12:
        raise DefectiveSpectrum("eigenvectors do not span R^3")

    f_mu = np.linalg.solve(basis, jet.mu_deriv(0, 0, 0))
    mu_shift = np.array([-f_mu[1] / omega, f_mu[0] / omega, 0.0])
    return StandardFrame(
        origin=np.array(jet.point, dtype=float),
        basis=basis,
        mu_shift=mu_shift,
        omega=omega,
    )


def standard_jet(jet: JetTable, frame: StandardFrame) -> JetTable:
    """Rewrite a raw jet in frame coordinates, including the parameter shift.

    State derivatives transform tensorially under X = origin + T u; the
    parameter block additionally picks up corrections from the mu-dependent
    origin, which cancel the first-order planar drift exactly.
    """
    T = frame.basis
    Tinv = np.linalg.inv(T)
    S = frame.mu_shift

    A1 = jet.jacobian()
    A2 = np.empty((3, 3, 3))
    A3 = np.empty((3, 3, 3, 3))
    for i in range(3):
        for j in range(3):
            idx2 = [0, 0, 0]
            idx2[i] += 1
            idx2[j] += 1
            A2[:, i, j] = jet.state(*idx2)
            for k in range(3):
                idx3 = list(idx2)
                idx3[k] += 1
                A3[:, i, j, k] = jet.state(*idx3)

    B1 = Tinv @ A1 @ T
    B2 = np.einsum("dc,cij,ip,jq->dpq", Tinv, A2, T, T)
    B3 = np.einsum("dc,cijk,ip,jq,kr->dpqr", Tinv, A3, T, T, T)

    d_state: dict[tuple[int, int, int], np.ndarray] = {
        (0, 0, 0): Tinv @ jet.state(0, 0, 0)
    }
    for idx in models.state_multi_indices():
        axes: list[int] = []
        for axis, count in enumerate(idx):
            axes.extend([axis] * count)
        if len(axes) == 1:
            d_state[idx] = B1[:, axes[0]]
        elif len(axes) == 2:
            d_state[idx] = B2[:, axes[0], axes[1]]
        else:
            d_state[idx] = B3[:, axes[0], axes[1], axes[2]]

    b_mu0 = Tinv @ jet.mu_deriv(0, 0, 0)
    b_mu1 = np.column_stack(
        [jet.mu_deriv(1, 0, 0), jet.mu_deriv(0, 1, 0), jet.mu_deriv(0, 0, 1)]
    )
    b_mu1 = Tinv @ b_mu1 @ T
    shifted0 = b_mu0 + B1 @ S
    shifted1 = b_mu1 + np.einsum("dpq,q->dp", B2, S)
    d_mu = {
        (0, 0, 0): shifted0,
        (1, 0, 0): shifted1[:, 0],
        (0, 1, 0): shifted1[:, 1],
        (0, 0, 1): shifted1[:, 2],
    }

    cond = np.linalg.cond(T)
    return JetTable(
        point=np.zeros(3),
        mu=jet.mu,
        d_state=d_state,
        d_mu=d_mu,
        tolerance=jet.tolerance * max(1.0, cond),
        symmetry_defect=jet.symmetry_defect,
        step_report=jet.step_report,
    )


@dataclasses.dataclass(frozen=True)
class AssumptionReport:
    """Quantified verdicts for the five standing assumptions.

    a1: largest |F| over equilibria continued along the line segment.
    a2: deviation of the spectrum from the {0, +-i omega} pattern.
    a3: parameter-free transversality, d/dz of the planar divergence.
    a4: planar Laplacian of the third field component.
    a5: first-order parameter drift along the line direction.
    """

    a1_line_residual: float
    a2_spectrum: tuple[complex, complex, complex]
    a2_defect: float
    a3_crossing: float
    a4_nondegeneracy: float
    a5_drift: float
    omega: float
    verdicts: Mapping[str, bool]

    def all_pass(self) -> bool:
        return all(self.verdicts.values())

    def failed(self) -> list[str]:
        return [k for k, ok in sorted(self.verdicts.items()) if not ok]

    def to_document(self) -> dict:
        return {
            "a1_line_residual": self.a1_line_residual,
            "a2_spectrum": [[z.real, z.imag] for z in self.a2_spectrum],
            "a2_defect": self.a2_defect,
            "a3_crossing": self.a3_crossing,
            "a4_nondegeneracy": self.a4_nondegeneracy,
            "a5_drift": self.a5_drift,
            "omega": self.omega,
            "verdicts": dict(sorted(self.verdicts.items())),
            "thresholds": {
                "a1": A1_THRESHOLD,
                "a2": A2_THRESHOLD,
                "nonzero": NONZERO_THRESHOLD,
            },
        }


def _line_residual(
    model: ModelDefinition,
    X_H: np.ndarray,
    e3: np.ndarray,
    mu: float,
    half_length: float = 0.1,
    n_samples: int = 20,
) -> float:
    """Max |F| over equilibria continued transversally along the e3 segment."""
    worst = 0.0
    for t in np.linspace(-half_length, half_length, n_samples):
        P = X_H + t * e3
        X = P.copy()
        best = math.inf
        for _ in range(25):
            try:
                F = models.evaluate(model, X, mu)
            except NonFinite:
                best = math.inf
                break
            best = min(best, float(np.max(np.abs(F))))
            if best < 1e-14:
                break
            JG = np.vstack([_numeric_jacobian(model, X, mu), e3])
            G = np.append(F, e3 @ (X - P))
            step, *_ = np.linalg.lstsq(JG, -G, rcond=None)
            X = X + step
        worst = max(worst, best)
    return worst


def check_assumptions(
    model: ModelDefinition, X_H: Sequence[float], mu: float = 0.0
) -> AssumptionReport:
    """Evaluate all five standing assumptions at a candidate point.

    Failures are verdicts, not exceptions: downstream code decides whether a
    failed assumption is fatal.
    """
    X_H = np.asarray(X_H, dtype=float)
    jt = models.jet(model, X_H, mu)
    J = jt.jacobian()
    nu, nu0 = _spectrum_split(J)
    spectrum = (nu, np.conj(nu), nu0)
    a2_defect = float(max(abs(nu.real), abs(nu0)))
    omega = float(nu.imag)
    a2_ok = a2_defect < A2_THRESHOLD and omega > A2_THRESHOLD

    a3 = a4 = a5 = math.nan
    a1 = math.inf
    frame_ok = False
    if a2_ok:
        try:
            frame = build_standard_frame(jt)
            frame_ok = True
        except DefectiveSpectrum:
            frame_ok = False
    if frame_ok:
        std = standard_jet(jt, frame)
        a3 = std.state(1, 0, 1, 0) + std.state(0, 1, 1, 1)
        a4 = std.state(2, 0, 0, 2) + std.state(0, 2, 0, 2)
        a5 = std.mu_deriv(0, 0, 0, 2)
        a1 = _line_residual(model, X_H, frame.basis[:, 2], mu)

    verdicts = {
        "a1_line": a1 < A1_THRESHOLD,
        "a2_spectrum": a2_ok,
        "a3_crossing": frame_ok and abs(a3) > NONZERO_THRESHOLD,
        "a4_nondegeneracy": frame_ok and abs(a4) > NONZERO_THRESHOLD,
        "a5_drift": frame_ok and abs(a5) > NONZERO_THRESHOLD,
    }
    return AssumptionReport(
        a1_line_residual=a1,
        a2_spectrum=spectrum,
        a2_defect=a2_defect,
        a3_crossing=a3,
        a4_nondegeneracy=a4,
        a5_drift=a5,
        omega=omega,
        verdicts=verdicts,
    )
