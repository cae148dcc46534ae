"""Vector fields on R^3 with derivative jets.

A model bundles a right-hand side F(X; mu) with a way to obtain its partial
derivatives at a point: either exact closed forms (builtin and polynomial
models) or guarded finite differences.  Everything downstream (frames,
reduced coefficients, classification) consumes the `JetTable` produced here,
so the jet layout is the one hard contract of this module: raw partials
``d^a_{x1} d^b_{x2} d^c_{x3} F`` keyed by ``(a, b, c)`` up to total order
three, plus the parameter block ``d_mu F`` and ``d_mu d_{x_i} F``.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidParams, NonFinite, SymmetryDefect, UnknownModel

STATE_DIM = 3
JET_ORDER = 3

StateIndex = tuple[int, int, int]

#: central-difference stencils (offset -> weight); divide by h**order
_STENCILS: dict[int, dict[int, float]] = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
}


def state_multi_indices(max_order: int = JET_ORDER) -> Iterator[StateIndex]:
    """Yield all (a, b, c) with 1 <= a+b+c <= max_order, graded-lex order."""
    for total in range(1, max_order + 1):
        for a in range(total, -1, -1):
            for b in range(total - a, -1, -1):
                yield (a, b, total - a - b)


@dataclasses.dataclass(frozen=True)
class JetTable:
    """Raw partial derivatives of a vector field at one (point, mu).

    Attributes
    ----------
    point, mu : expansion point.
    d_state : mapping (a, b, c) -> 3-vector of d^a_1 d^b_2 d^c_3 F for
        1 <= a+b+c <= 3, plus (0, 0, 0) -> F itself.
    d_mu : mapping (a, b, c) -> 3-vector of d_mu d^a_1 d^b_2 d^c_3 F for
        a+b+c <= 1 (the parameter block needed by first-order theory).
    tolerance : accuracy the producer claims for each entry.
    symmetry_defect : largest discrepancy between two evaluation routes for
        mixed second partials (0.0 for exact jets).
    step_report : finite-difference steps actually used, empty for exact jets.

    The mappings are plain dicts but must be treated as immutable.
    """

    point: np.ndarray
    mu: float
    d_state: Mapping[StateIndex, np.ndarray]
    d_mu: Mapping[StateIndex, np.ndarray]
    tolerance: float
    symmetry_defect: float = 0.0
    step_report: Mapping[StateIndex, tuple[float, ...]] = dataclasses.field(
        default_factory=dict
    )

    def state(self, a: int, b: int, c: int, component: int | None = None):
        """Entry d^a_1 d^b_2 d^c_3 F, or one component of it."""
        try:
            vec = self.d_state[(a, b, c)]
        except KeyError as exc:
            from .errors import MissingJetEntry

            raise MissingJetEntry(f"state derivative {(a, b, c)}") from exc
        return vec if component is None else float(vec[component])

    def mu_deriv(self, a: int, b: int, c: int, component: int | None = None):
        """Entry d_mu d^a_1 d^b_2 d^c_3 F, or one component of it."""
        try:
            vec = self.d_mu[(a, b, c)]
        except KeyError as exc:
            from .errors import MissingJetEntry

            raise MissingJetEntry(f"parameter derivative {(a, b, c)}") from exc
        return vec if component is None else float(vec[component])

    def jacobian(self) -> np.ndarray:
        """3x3 Jacobian; column j holds the derivative along axis j."""
        return np.column_stack(
            [self.state(1, 0, 0), self.state(0, 1, 0), self.state(0, 0, 1)]
        )


@dataclasses.dataclass(frozen=True)
class ModelDefinition:
    """A named vector field with optional exact derivatives.

    ``rhs(X, mu)`` returns dX/dt.  ``exact_jet`` (when present) returns a
    `JetTable` whose entries are closed-form, not finite differences.
    ``in_domain`` demarcates the region where evaluation is trusted; solvers
    use it as a guard.
    """

    name: str
    rhs: Callable[[np.ndarray, float], np.ndarray]
    exact_jet: Callable[[np.ndarray, float], JetTable] | None = None
    jacobian: Callable[[np.ndarray, float], np.ndarray] | None = None
    in_domain: Callable[[np.ndarray], bool] = lambda X: True
    metadata: Mapping[str, object] = dataclasses.field(default_factory=dict)


def evaluate(model: ModelDefinition, state: Sequence[float], mu: float) -> np.ndarray:
    """Evaluate dX/dt, rejecting non-finite output."""
    X = np.asarray(state, dtype=float)
    if X.shape != (STATE_DIM,):
        raise InvalidParams(f"state must have length {STATE_DIM}, got shape {X.shape}")
    out = np.asarray(model.rhs(X, float(mu)), dtype=float)
    if not np.all(np.isfinite(out)):
        raise NonFinite(
            f"model '{model.name}' produced non-finite output at state={X.tolist()}, mu={mu}"
        )
    return out


def jet(model: ModelDefinition, point: Sequence[float], mu: float) -> JetTable:
    """Model jet at a point: exact when available, finite differences otherwise."""
    X = np.asarray(point, dtype=float)
    if model.exact_jet is not None:
        return model.exact_jet(X, float(mu))
    return finite_difference_jet(model, X, float(mu))


# ---------------------------------------------------------------------------
# polynomial fields (exact jets by term-wise differentiation)
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Monomial:
    """coef * x1^i * x2^j * x3^k * mu^m"""

    coef: float
    powers: tuple[int, int, int, int]


def _falling(power: int, order: int) -> float:
    """power * (power-1) * ... over `order` factors; 0 if order > power."""
    if order > power:
        return 0.0
    out = 1.0
    for step in range(order):
        out *= power - step
    return out


class PolynomialField:
    """Three polynomial components in (x1, x2, x3, mu) with exact jets."""

    def __init__(self, components: Sequence[Sequence[Monomial]]):
        if len(components) != STATE_DIM:
            raise InvalidParams("a polynomial field needs exactly 3 components")
        self.components = tuple(tuple(terms) for terms in components)

    def rhs(self, X: np.ndarray, mu: float) -> np.ndarray:
        return self._derivative((0, 0, 0, 0), X, mu)

    def _derivative(
        self, order: tuple[int, int, int, int], X: np.ndarray, mu: float
    ) -> np.ndarray:
        vals = np.zeros(STATE_DIM)
        coords = (X[0], X[1], X[2], mu)
        for comp, terms in enumerate(self.components):
            total = 0.0
            for term in terms:
                factor = term.coef
                for axis in range(4):
                    p, d = term.powers[axis], order[axis]
                    factor *= _falling(p, d)
                    if factor == 0.0:
                        break
                    if p - d > 0:
                        factor *= coords[axis] ** (p - d)
                total += factor
            vals[comp] = total
        return vals

    def jacobian(self, X: np.ndarray, mu: float) -> np.ndarray:
        return np.column_stack(
            [
                self._derivative((1, 0, 0, 0), X, mu),
                self._derivative((0, 1, 0, 0), X, mu),
                self._derivative((0, 0, 1, 0), X, mu),
            ]
        )

    def exact_jet(self, point: np.ndarray, mu: float) -> JetTable:
        d_state: dict[StateIndex, np.ndarray] = {
            (0, 0, 0): self._derivative((0, 0, 0, 0), point, mu)
        }
        for a, b, c in state_multi_indices():
            d_state[(a, b, c)] = self._derivative((a, b, c, 0), point, mu)
        d_mu = {
            (0, 0, 0): self._derivative((0, 0, 0, 1), point, mu),
            (1, 0, 0): self._derivative((1, 0, 0, 1), point, mu),
            (0, 1, 0): self._derivative((0, 1, 0, 1), point, mu),
            (0, 0, 1): self._derivative((0, 0, 1, 1), point, mu),
        }
        return JetTable(
            point=np.array(point, dtype=float),
            mu=float(mu),
            d_state=d_state,
            d_mu=d_mu,
            tolerance=1e-12,
        )


def polynomial_model(
    spec: Mapping[str, Sequence[Sequence[float]]], name: str = "polynomial"
) -> ModelDefinition:
    """Build a model from ``{"y1": [[coef, i, j, k, m], ...], "y2": ..., "z": ...}``."""
    keys = ("y1", "y2", "z")
    if set(spec) != set(keys):
        raise InvalidParams(
            f"polynomial spec must have exactly the keys {keys}, got {sorted(spec)}"
        )
    components = []
    for key in keys:
        terms = []
        for row in spec[key]:
            if len(row) != 5:
                raise InvalidParams(
                    f"each term is [coef, i, j, k, m]; component {key!r} has {list(row)}"
                )
            coef = float(row[0])
            powers = tuple(int(p) for p in row[1:])
            if any(p < 0 for p in powers) or any(p != q for p, q in zip(powers, row[1:])):
                raise InvalidParams(f"exponents must be nonnegative integers: {list(row)}")
            terms.append(Monomial(coef, powers))  # type: ignore[arg-type]
        components.append(terms)
    field = PolynomialField(components)
    return ModelDefinition(
        name=name, rhs=field.rhs, exact_jet=field.exact_jet, jacobian=field.jacobian
    )


# ---------------------------------------------------------------------------
# finite-difference jets
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class StepConfig:
    """Finite-difference step policy.

    Base steps are relative to max(1, |coordinate|); order-3 stencils use a
    larger step because the difference quotient divides by h^3.
    """

    base_low: float = 1e-4
    base_third: float = 1e-3
    base_mu: float = 1e-4
    tolerance: float = 1e-6
    symmetry_factor: float = 100.0


def _fd_tensor(
    f: Callable[[np.ndarray], np.ndarray],
    point: np.ndarray,
    orders: Sequence[int],
    steps: Sequence[float],
) -> np.ndarray:
    """Tensor-product central difference of given per-axis orders."""
    total = np.zeros(STATE_DIM)
    axes = [list(_STENCILS[o].items()) for o in orders]
    scale = 1.0
    for o, h in zip(orders, steps):
        scale *= h**o

    def recurse(axis: int, shift: np.ndarray, weight: float) -> None:
        nonlocal total
        if axis == len(axes):
            val = f(point + shift)
            if not np.all(np.isfinite(val)):
                raise NonFinite("finite-difference probe left the finite domain")
            total += weight * val
            return
        for offset, w in axes[axis]:
            recurse(axis + 1, shift + offset * steps[axis] * _AXES[axis], weight * w)

    recurse(0, np.zeros(STATE_DIM), 1.0)
    return total / scale


_AXES = [np.eye(STATE_DIM)[i] for i in range(STATE_DIM)]


def _richardson(
    f: Callable[[np.ndarray], np.ndarray],
    point: np.ndarray,
    orders: Sequence[int],
    steps: np.ndarray,
) -> np.ndarray:
    """One Richardson extrapolation of the O(h^2) tensor stencil."""
    coarse = _fd_tensor(f, point, orders, steps)
    fine = _fd_tensor(f, point, orders, steps / 2.0)
    return (4.0 * fine - coarse) / 3.0


def _directional_second(
    f: Callable[[np.ndarray], np.ndarray], point: np.ndarray, u: np.ndarray, h: float
) -> np.ndarray:
    def g(s: float) -> np.ndarray:
        val = f(point + s * u)
        if not np.all(np.isfinite(val)):
            raise NonFinite("finite-difference probe left the finite domain")
        return val

    def second(step: float) -> np.ndarray:
        return (g(step) - 2.0 * g(0.0) + g(-step)) / step**2

    return (4.0 * second(h / 2.0) - second(h)) / 3.0


def finite_difference_jet(
    model: ModelDefinition,
    point: Sequence[float],
    mu: float,
    config: StepConfig | None = None,
) -> JetTable:
    """Order-3 jet by guarded central differences.

    Every entry is computed on a tensor-product central stencil at two step
    sizes and Richardson-extrapolated.  Mixed second partials are additionally
    recomputed through a diagonal directional route; if the two routes
    disagree by more than ``symmetry_factor * tolerance`` the field is not
    C^2 at the requested accuracy and `SymmetryDefect` is raised.
    """
    cfg = config or StepConfig()
    X = np.asarray(point, dtype=float)
    mu = float(mu)

    def f_state(P: np.ndarray) -> np.ndarray:
        return np.asarray(model.rhs(P, mu), dtype=float)

    d_state: dict[StateIndex, np.ndarray] = {(0, 0, 0): f_state(X)}
    if not np.all(np.isfinite(d_state[(0, 0, 0)])):
        raise NonFinite(f"model '{model.name}' non-finite at expansion point")
    step_report: dict[StateIndex, tuple[float, ...]] = {}

    for idx in state_multi_indices():
        total_order = sum(idx)
        base = cfg.base_third if total_order >= 3 else cfg.base_low
        steps = np.array([base * max(1.0, abs(X[i])) for i in range(STATE_DIM)])
        d_state[idx] = _richardson(f_state, X, idx, steps)
        step_report[idx] = tuple(steps[i] for i in range(STATE_DIM) if idx[i] > 0)

    # cross-route check on mixed second partials
    defect = 0.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        idx = tuple(1 if k in (i, j) else 0 for k in range(STATE_DIM))
        u = (_AXES[i] + _AXES[j]) / math.sqrt(2.0)
        h = cfg.base_low * max(1.0, abs(X[i]), abs(X[j]))
        second_u = _directional_second(f_state, X, u, h)
        e_i = tuple(2 if k == i else 0 for k in range(STATE_DIM))
        e_j = tuple(2 if k == j else 0 for k in range(STATE_DIM))
        diag_route = second_u - 0.5 * (d_state[e_i] + d_state[e_j])
        defect = max(defect, float(np.max(np.abs(d_state[idx] - diag_route))))
    if defect > cfg.symmetry_factor * cfg.tolerance:
        raise SymmetryDefect(
            f"mixed partial routes disagree by {defect:.3e} "
            f"(threshold {cfg.symmetry_factor * cfg.tolerance:.1e})"
        )

    # parameter block: d_mu F and d_mu d_{x_i} F
    h_mu = cfg.base_mu * max(1.0, abs(mu))

    def mu_derivative(state_idx: StateIndex) -> np.ndarray:
        def at(m: float) -> Callable[[np.ndarray], np.ndarray]:
            return lambda P: np.asarray(model.rhs(P, m), dtype=float)

        def d_state_at(m: float) -> np.ndarray:
            if state_idx == (0, 0, 0):
                val = at(m)(X)
                if not np.all(np.isfinite(val)):
                    raise NonFinite("finite-difference probe left the finite domain")
                return val
            steps = np.array(
                [cfg.base_low * max(1.0, abs(X[i])) for i in range(STATE_DIM)]
            )
            return _richardson(at(m), X, state_idx, steps)

        def first(step: float) -> np.ndarray:
            return (d_state_at(mu + step) - d_state_at(mu - step)) / (2.0 * step)

        return (4.0 * first(h_mu / 2.0) - first(h_mu)) / 3.0

    d_mu = {
        idx: mu_derivative(idx)
        for idx in ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
    }

    return JetTable(
        point=X,
        mu=mu,
        d_state=d_state,
        d_mu=d_mu,
        tolerance=cfg.tolerance,
        symmetry_defect=defect,
        step_report=step_report,
    )


# ---------------------------------------------------------------------------
# builtin catalog
# ---------------------------------------------------------------------------


def _require(params: Mapping[str, float], names: Sequence[str], model: str) -> list[float]:
    missing = [n for n in names if n not in params]
    if missing:
        raise InvalidParams(f"model '{model}' missing parameters: {missing}")
    extra = sorted(set(params) - set(names))
    if extra:
        raise InvalidParams(f"model '{model}' got unknown parameters: {extra}")
    try:
        return [float(params[n]) for n in names]
    except (TypeError, ValueError) as exc:
        raise InvalidParams(f"model '{model}' parameters must be numbers") from exc


def _predator_prey(params: Mapping[str, float]) -> ModelDefinition:
    delta1, delta2, lam, alpha1, alpha2 = _require(
        params, ("delta1", "delta2", "lam", "alpha1", "alpha2"), "predator_prey"
    )
    if delta1 <= 0 or delta2 <= 0:
        raise InvalidParams("predator_prey needs positive growth-rate ratios delta1, delta2")
    if alpha1 <= 0 or alpha2 <= 0:
        raise InvalidParams("predator_prey needs positive half-saturation constants")
    if not 0 < lam < 1:
        raise InvalidParams("predator_prey needs break-even concentration 0 < lam < 1")

    def rhs(X: np.ndarray, mu: float) -> np.ndarray:
        x1, x2, s = X
        g1 = (s - lam) / (s + alpha1)
        g2 = (s - lam - mu) / (s + alpha2)
        h1 = s / (s + alpha1)
        h2 = s / (s + alpha2)
        return np.array(
            [
                delta1 * x1 * g1,
                delta2 * x2 * g2,
                s * (1.0 - s) - x1 * h1 - x2 * h2,
            ]
        )

    def exact_jet(point: np.ndarray, mu: float) -> JetTable:
        x1, x2, s = (float(v) for v in point)

        # n-th s-derivatives of g_j(s) = (s - lam_j)/(s + alpha_j) and
        # h_j(s) = s/(s + alpha_j); both are 1 - const/(s + alpha_j).
        def rational_derivs(const: float, alpha: float) -> list[float]:
            # derivatives of -const/(s+alpha): order 0..3 of the full g or h
            p = s + alpha
            if p == 0.0:
                raise NonFinite("predator_prey jet at a pole of a response function")
            out = [1.0 - const / p]
            sign = 1.0
            fact = 1.0
            for n in range(1, JET_ORDER + 1):
                fact *= n
                out.append(sign * fact * const / p ** (n + 1))
                sign = -sign
            return out

        g1d = rational_derivs(lam + alpha1, alpha1)
        g2d = rational_derivs(lam + mu + alpha2, alpha2)
        h1d = rational_derivs(alpha1, alpha1)
        h2d = rational_derivs(alpha2, alpha2)
        logistic = [s * (1.0 - s), 1.0 - 2.0 * s, -2.0, 0.0]
        # d_mu g2 derivatives in s: -1/(s+alpha2) and its s-derivatives
        p2 = s + alpha2
        gmu = [-1.0 / p2, 1.0 / p2**2, -2.0 / p2**3, 6.0 / p2**4]

        d_state: dict[StateIndex, np.ndarray] = {}
        d_state[(0, 0, 0)] = rhs(np.array([x1, x2, s]), mu)
        for a, b, c in state_multi_indices():
            f1 = 0.0
            if b == 0 and a <= 1:
                f1 = delta1 * g1d[c] * (x1 if a == 0 else 1.0)
            f2 = 0.0
            if a == 0 and b <= 1:
                f2 = delta2 * g2d[c] * (x2 if b == 0 else 1.0)
            f3 = 0.0
            if a == 0 and b == 0:
                f3 = logistic[c] - x1 * h1d[c] - x2 * h2d[c]
            elif a == 1 and b == 0:
                f3 = -h1d[c]
            elif a == 0 and b == 1:
                f3 = -h2d[c]
            d_state[(a, b, c)] = np.array([f1, f2, f3])

        d_mu = {
            (0, 0, 0): np.array([0.0, delta2 * x2 * gmu[0], 0.0]),
            (1, 0, 0): np.zeros(STATE_DIM),
            (0, 1, 0): np.array([0.0, delta2 * gmu[0], 0.0]),
            (0, 0, 1): np.array([0.0, delta2 * x2 * gmu[1], 0.0]),
        }
        return JetTable(
            point=np.array(point, dtype=float),
            mu=float(mu),
            d_state=d_state,
            d_mu=d_mu,
            tolerance=1e-12,
        )

    def jacobian(X: np.ndarray, mu: float) -> np.ndarray:
        x1, x2, s = X
        p1, p2 = s + alpha1, s + alpha2
        g1, g2 = (s - lam) / p1, (s - lam - mu) / p2
        dg1, dg2 = (lam + alpha1) / p1**2, (lam + mu + alpha2) / p2**2
        h1, h2 = s / p1, s / p2
        dh1, dh2 = alpha1 / p1**2, alpha2 / p2**2
        return np.array(
            [
                [delta1 * g1, 0.0, delta1 * x1 * dg1],
                [0.0, delta2 * g2, delta2 * x2 * dg2],
                [-h1, -h2, 1.0 - 2.0 * s - x1 * dh1 - x2 * dh2],
            ]
        )

    def in_domain(X: np.ndarray) -> bool:
        x1, x2, s = X
        return (
            x1 > -1e-9
            and x2 > -1e-9
            and s > -min(alpha1, alpha2) * 0.5
            and max(abs(x1), abs(x2), abs(s)) < 50.0
        )

    meta: dict[str, object] = {
        "params": {
            "delta1": delta1,
            "delta2": delta2,
            "lam": lam,
            "alpha1": alpha1,
            "alpha2": alpha2,
        }
    }
    l1 = 1.0 - 2.0 * lam - alpha1
    l2 = 2.0 * lam + alpha2 - 1.0
    gap = alpha2 - alpha1
    if abs(gap) > 1e-9 and l1 > 0 and l2 > 0:
        meta["hopf_seed"] = [
            (lam + alpha1) ** 2 * l2 / gap,
            (lam + alpha2) ** 2 * l1 / gap,
            lam,
        ]
    return ModelDefinition(
        name="predator_prey",
        rhs=rhs,
        exact_jet=exact_jet,
        jacobian=jacobian,
        in_domain=in_domain,
        metadata=meta,
    )


def _synthetic_nf(params: Mapping[str, float]) -> ModelDefinition:
    """Quadratic field in exact cylindrical normal form.

    dy1 = -omega y2 + a y1 z, dy2 = omega y1 + a y2 z,
    dz = b (y1^2 + y2^2) + c mu + d mu z.
    Planted reduced coefficients: beta2 = a, beta5 = b, gamma5 = c, gamma7 = d.
    """
    a, b, c, d, omega = _require(
        params, ("a", "b", "c", "d", "omega"), "synthetic_nf"
    )
    if omega <= 0:
        raise InvalidParams("synthetic_nf needs omega > 0")
    field = PolynomialField(
        [
            [Monomial(-omega, (0, 1, 0, 0)), Monomial(a, (1, 0, 1, 0))],
            [Monomial(omega, (1, 0, 0, 0)), Monomial(a, (0, 1, 1, 0))],
            [
                Monomial(b, (2, 0, 0, 0)),
                Monomial(b, (0, 2, 0, 0)),
                Monomial(c, (0, 0, 0, 1)),
                Monomial(d, (0, 0, 1, 1)),
            ],
        ]
    )
    meta = {"params": {"a": a, "b": b, "c": c, "d": d, "omega": omega}}
    return ModelDefinition(
        name="synthetic_nf",
        rhs=field.rhs,
        exact_jet=field.exact_jet,
        jacobian=field.jacobian,
        metadata=meta,
    )


def _toy_cylindrical(params: Mapping[str, float]) -> ModelDefinition:
    """Cartesian realization of the second-order reduced dynamics.

    With r^2 = y1^2 + y2^2 the field is
      dy1 = -omega (1 + eps beta1 z) y2 + y1 G,
      dy2 =  omega (1 + eps beta1 z) y1 + y2 G,
      dz  = eps (mu gamma5 + beta5 r^2)
            + eps^2 (mu (beta1 gamma5 + gamma7) z - (beta1 beta5 - beta6) r^2 z),
    where G = eps beta2 z + eps^2 (mu gamma3 + beta3 r^2 - (beta1 beta2 - beta4) z^2).
    All parameters default to zero except eps = 1.
    """
    names = (
        "omega",
        "beta1",
        "beta2",
        "beta3",
        "beta4",
        "beta5",
        "beta6",
        "gamma3",
        "gamma5",
        "gamma7",
        "eps",
    )
    filled = dict({n: 0.0 for n in names}, eps=1.0, omega=1.0)
    unknown = sorted(set(params) - set(names))
    if unknown:
        raise InvalidParams(f"model 'toy_cylindrical' got unknown parameters: {unknown}")
    filled.update({k: float(v) for k, v in params.items()})
    omega = filled["omega"]
    if omega <= 0:
        raise InvalidParams("toy_cylindrical needs omega > 0")
    b1, b2, b3, b4 = (filled[k] for k in ("beta1", "beta2", "beta3", "beta4"))
    b5, b6, g3, g5, g7 = (
        filled[k] for k in ("beta5", "beta6", "gamma3", "gamma5", "gamma7")
    )
    eps = filled["eps"]

    o = omega
    e2 = eps * eps
    field = PolynomialField(
        [
            [
                Monomial(-o, (0, 1, 0, 0)),
                Monomial(-o * eps * b1, (0, 1, 1, 0)),
                Monomial(eps * b2, (1, 0, 1, 0)),
                Monomial(e2 * g3, (1, 0, 0, 1)),
                Monomial(e2 * b3, (3, 0, 0, 0)),
                Monomial(e2 * b3, (1, 2, 0, 0)),
                Monomial(-e2 * (b1 * b2 - b4), (1, 0, 2, 0)),
            ],
            [
                Monomial(o, (1, 0, 0, 0)),
                Monomial(o * eps * b1, (1, 0, 1, 0)),
                Monomial(eps * b2, (0, 1, 1, 0)),
                Monomial(e2 * g3, (0, 1, 0, 1)),
                Monomial(e2 * b3, (2, 1, 0, 0)),
                Monomial(e2 * b3, (0, 3, 0, 0)),
                Monomial(-e2 * (b1 * b2 - b4), (0, 1, 2, 0)),
            ],
            [
                Monomial(eps * g5, (0, 0, 0, 1)),
                Monomial(eps * b5, (2, 0, 0, 0)),
                Monomial(eps * b5, (0, 2, 0, 0)),
                Monomial(e2 * (b1 * g5 + g7), (0, 0, 1, 1)),
                Monomial(-e2 * (b1 * b5 - b6), (2, 0, 1, 0)),
                Monomial(-e2 * (b1 * b5 - b6), (0, 2, 1, 0)),
            ],
        ]
    )
    meta = {"params": dict(filled)}
    return ModelDefinition(
        name="toy_cylindrical",
        rhs=field.rhs,
        exact_jet=field.exact_jet,
        jacobian=field.jacobian,
        metadata=meta,
    )


def _classical_hopf(params: Mapping[str, float]) -> ModelDefinition:
    """Classical Hopf normal form with decoupled drift: no equilibrium line."""
    names = ("omega", "sign")
    filled = {"omega": 1.0, "sign": -1.0}
    unknown = sorted(set(params) - set(names))
    if unknown:
        raise InvalidParams(f"model 'classical_hopf' got unknown parameters: {unknown}")
    filled.update({k: float(v) for k, v in params.items()})
    omega, sign = filled["omega"], filled["sign"]
    if omega <= 0:
        raise InvalidParams("classical_hopf needs omega > 0")
    if sign not in (-1.0, 1.0):
        raise InvalidParams("classical_hopf needs sign in {-1, +1}")
    field = PolynomialField(
        [
            [
                Monomial(-omega, (0, 1, 0, 0)),
                Monomial(1.0, (1, 0, 1, 0)),
                Monomial(sign, (3, 0, 0, 0)),
                Monomial(sign, (1, 2, 0, 0)),
            ],
            [
                Monomial(omega, (1, 0, 0, 0)),
                Monomial(1.0, (0, 1, 1, 0)),
                Monomial(sign, (2, 1, 0, 0)),
                Monomial(sign, (0, 3, 0, 0)),
            ],
            [Monomial(1.0, (0, 0, 0, 1))],
        ]
    )
    meta = {"params": dict(filled)}
    return ModelDefinition(
        name="classical_hopf",
        rhs=field.rhs,
        exact_jet=field.exact_jet,
        jacobian=field.jacobian,
        metadata=meta,
    )


_BUILTINS: dict[str, Callable[[Mapping[str, float]], ModelDefinition]] = {
    "predator_prey": _predator_prey,
    "synthetic_nf": _synthetic_nf,
    "toy_cylindrical": _toy_cylindrical,
    "classical_hopf": _classical_hopf,
}


def builtin(name: str, params: Mapping[str, float] | None = None) -> ModelDefinition:
    """Instantiate a builtin model by name."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise UnknownModel(
            f"unknown builtin '{name}'; available: {sorted(_BUILTINS)}"
        ) from None
    return factory(params or {})


def available_builtins() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


def from_config(doc: Mapping[str, object]) -> ModelDefinition:
    """Build a model from a parsed configuration document.

    Two shapes are accepted::

        {"builtin": "predator_prey", "params": {...}}
        {"polynomial": {"y1": [[coef, i, j, k, m], ...], "y2": [...], "z": [...]}}

    Any other top-level keys besides the optional ``name``, ``seed_state``,
    ``mu_grid`` and ``jets`` are rejected.
    """
    allowed = {"builtin", "params", "polynomial", "name", "seed_state", "mu_grid", "jets"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise InvalidParams(f"unknown config keys: {unknown}")
    has_builtin = "builtin" in doc
    has_poly = "polynomial" in doc
    if has_builtin == has_poly:
        raise InvalidParams("config needs exactly one of 'builtin' or 'polynomial'")
    if has_builtin:
        model = builtin(str(doc["builtin"]), doc.get("params") or {})  # type: ignore[arg-type]
    else:
        if "params" in doc:
            raise InvalidParams("'params' only applies to builtin models")
        model = polynomial_model(
            doc["polynomial"], name=str(doc.get("name", "polynomial"))  # type: ignore[arg-type]
        )
    jets_mode = doc.get("jets", "exact")
    if jets_mode not in ("exact", "finite_difference"):
        raise InvalidParams("'jets' must be 'exact' or 'finite_difference'")
    if jets_mode == "finite_difference":
        model = dataclasses.replace(model, exact_jet=None, jacobian=None)
    return model
