"""Closed-form bounds, solved constants, and clique-number prediction bands.

Logarithms are natural unless a formula carries an explicit base
(log_{1/q}, log_{1/(1-p)}); those are evaluated as ln(x)/ln(base).
Asymptotic statements whose constants are not pinned down are evaluated
with unit constants and flagged SCALING_ONLY: such numbers support
ratio and boundedness experiments, not certified inequalities.  Where a
band pairs a scaling side with an explicitly proven side, the scaling
side is normalised (base-matched, or anchored to the proven constant) so
that lower <= upper holds on the whole evaluable domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

from .errors import ArgumentError, NumericError
from .model import PerturbedGraph, Regime, RegimeParams

_BISECT_ITERS = 200
_BISECT_TOL = 1e-10


def H(a: float) -> float:
    """Cramer transform 1 - a + a*ln(a), with H(0) = 1 by continuity."""
    if a < 0:
        raise ArgumentError(f"H needs a >= 0, got {a}")
    if a == 0.0:
        return 1.0
    return 1.0 - a + a * math.log(a)


def binomial_tail_sandwich(mu: float, k: float) -> Tuple[float, float]:
    """Two-sided bounds ((mu/(e*k))^k, (e*mu/k)^k) on P[Z >= k].

    Valid for Z binomial or Poisson with mean mu and any k >= mu.
    """
    if not mu > 0:
        raise ArgumentError(f"need mu > 0, got {mu}")
    if k < mu:
        raise ArgumentError(f"sandwich needs k >= mu, got k={k} < mu={mu}")
    lower = (mu / (math.e * k)) ** k
    upper = (math.e * mu / k) ** k
    return lower, upper


def chernoff_tail(mu: float, k: float) -> float:
    """Upper bound exp(-mu * H(k/mu)) on P[Z >= k], k >= mu > 0."""
    if not mu > 0:
        raise ArgumentError(f"need mu > 0, got {mu}")
    if k < mu:
        raise ArgumentError(f"chernoff_tail needs k >= mu, got k={k} < mu={mu}")
    return math.exp(-mu * H(k / mu))


def _bisect(f: Callable[[float], float], lo: float, hi: float,
            target: float, what: str) -> float:
    # f increasing on [lo, hi] with f(lo) <= target <= f(hi)
    x = lo
    for _ in range(_BISECT_ITERS):
        x = 0.5 * (lo + hi)
        v = f(x)
        if abs(v - target) < _BISECT_TOL:
            return x
        if v < target:
            lo = x
        else:
            hi = x
    if abs(f(x) - target) >= _BISECT_TOL:
        raise NumericError(f"{what}: no convergence after {_BISECT_ITERS} "
                           f"bisection steps (residual {abs(f(x) - target):.3e})")
    return x


def solve_eta(t: float, d: int, theta: float) -> float:
    """Solve H(x / c) = 1 / (c*t) for the unique x >= c, c = theta * 2^-d.

    H is strictly increasing on [1, inf) so plain bisection applies once
    the right endpoint is pushed past the target.
    """
    if not t > 0 or not theta > 0:
        raise ArgumentError("solve_eta needs t > 0 and theta > 0")
    c = theta * 0.5 ** d
    target = 1.0 / (c * t)
    hi = 2.0 * c
    while H(hi / c) <= target:
        hi *= 2.0
        if not math.isfinite(hi):
            raise NumericError("solve_eta: bracket expansion diverged")
    return _bisect(lambda x: H(x / c), c, hi, target, "solve_eta")


def solve_tau(t: float, d: int, theta: float) -> float:
    """Smallest tau >= 2 with tau*(ln(tau) - 1) >= 4 / (2^d * theta * t)."""
    if not t > 0 or not theta > 0:
        raise ArgumentError("solve_tau needs t > 0 and theta > 0")
    rhs = 4.0 / (2.0 ** d * theta * t)
    if 2.0 * (math.log(2.0) - 1.0) >= rhs:
        return 2.0
    # f(tau) = tau*(ln tau - 1) is negative below e and increasing past it
    lo = math.e
    hi = 2.0 * math.e
    f = lambda x: x * (math.log(x) - 1.0)
    while f(hi) <= rhs:
        hi *= 2.0
        if not math.isfinite(hi):
            raise NumericError("solve_tau: bracket expansion diverged")
    return _bisect(f, lo, hi, rhs, "solve_tau")


def T_threshold(d: int, theta: float) -> float:
    """Density threshold 40 * 2^d / theta for tight dense-regime deletion bounds."""
    if not theta > 0:
        raise ArgumentError("T_threshold needs theta > 0")
    return 40.0 * 2.0 ** d / theta


@dataclass(frozen=True)
class SpecialConstants:
    """Solved constants for one (d, theta, t, sigma) context."""

    eta: float
    tau: float
    T: float
    d: int
    theta: float
    t: float
    sigma: float = 1.0


def special_constants(t: float, d: int, theta: float,
                      sigma: float = 1.0) -> SpecialConstants:
    return SpecialConstants(eta=solve_eta(t, d, theta),
                            tau=solve_tau(t, d, theta),
                            T=T_threshold(d, theta),
                            d=d, theta=theta, t=t, sigma=sigma)


class Window(Enum):
    """Scan windows as multiples of the connection radius."""

    W_HALF = 0.5
    W1 = 1.0
    W3 = 3.0

    @property
    def multiple(self) -> float:
        return self.value


def m_w_bound(window: Window, params: RegimeParams, n: int, r: float,
              d: int, theta: float) -> float:
    """High-probability upper bound on the scan statistic for the window.

    Subcritical: ceil(4/alpha), both windows.
    Thermodynamic: 5*ln(n) / ln(ln(n) / (sigma*theta*c^d*n*r^d)) with c=2
    for W1 and c=6 for W3; raises NumericError when the outer log argument
    drops to <= 1 (the regime premise fails at this n).
    Supercritical: tau * c^d * theta * sigma * n * r^d, same c per window.
    """
    if window is Window.W_HALF:
        raise ArgumentError("occupancy bounds are stated for W1 and W3 only")
    if params.regime is Regime.SUBCRITICAL:
        if params.alpha is None or not params.alpha > 0:
            raise ArgumentError("subcritical bound needs alpha > 0")
        return float(math.ceil(4.0 / params.alpha))
    c_d = (2.0 if window is Window.W1 else 6.0) ** d
    vol = params.sigma * theta * c_d * n * r ** d
    if params.regime is Regime.THERMODYNAMIC:
        arg = math.log(n) / vol
        if arg <= 1.0:
            raise NumericError(
                f"thermodynamic occupancy bound undefined: ln(n)/(sigma*theta*"
                f"{int(c_d)}*n*r^d) = {arg:.4g} <= 1 at n={n}")
        return 5.0 * math.log(n) / math.log(arg)
    if params.regime is Regime.SUPERCRITICAL:
        if params.t is None or not params.t > 0:
            raise ArgumentError("supercritical bound needs t > 0")
        tau = solve_tau(params.t, d, theta)
        return tau * vol
    raise ArgumentError(f"unknown regime {params.regime}")


class Model(Enum):
    INSERTION_ONLY = "insertion"
    DELETION_ONLY = "deletion"
    COMBINED = "combined"


class Quantity(Enum):
    OMEGA_INSERTION = "omega_insertion"
    OMEGA_DELETION = "omega_deletion"
    OMEGA_COMBINED = "omega_combined"
    M_W1 = "m_w1"
    M_W3 = "m_w3"


class Form(Enum):
    # EXPLICIT carries a proven constant; SCALING_ONLY substitutes 1 for an
    # unspecified constant and is only meaningful up to bounded ratios.
    EXPLICIT = "explicit"
    SCALING_ONLY = "scaling_only"


class Condition(Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class PredictParams:
    """Instance parameters every band is evaluated at."""

    n: int
    r: float
    d: int
    sigma: float = 1.0
    theta: float = math.pi
    p: float = 0.0
    q: float = 0.0

    @property
    def volume(self) -> float:
        """n * r^d, the expected r-ball occupancy up to theta*sigma."""
        return self.n * self.r ** self.d

    @property
    def t_emp(self) -> float:
        """Finite-n stand-in for the limit of sigma*n*r^d / ln(n)."""
        if self.n < 2:
            raise NumericError("t is undefined at n < 2 (ln n vanishes)")
        return self.sigma * self.volume / math.log(self.n)


def er_clique_lower(n: int, q: float) -> float:
    """floor(log_{1/q} n), the guaranteed clique from inserted edges alone."""
    if n < 1:
        raise ArgumentError(f"need n >= 1, got {n}")
    if not 0.0 < q < 1.0:
        raise ArgumentError(f"er_clique_lower needs 0 < q < 1, got {q}")
    return float(math.floor(math.log(n) / math.log(1.0 / q)))


def _log_ratio_thermo(pp: PredictParams) -> float:
    # ln(ln n / nr^d); positive exactly when nr^d < ln n
    if not pp.volume > 0:
        raise NumericError(f"thermodynamic form needs n*r^d > 0, "
                           f"got {pp.volume}")
    arg = math.log(pp.n) / pp.volume
    if arg <= 1.0:
        raise NumericError(
            f"thermodynamic form undefined: ln(n)/(n*r^d) = {arg:.4g} <= 1")
    return math.log(arg)


def phi_thermo(pp: PredictParams) -> float:
    """ln(n) / (2*ln(ln(n)/(n*r^d))), the explicit thermodynamic clique floor."""
    return math.log(pp.n) / (2.0 * _log_ratio_thermo(pp))


def _x_thermo(pp: PredictParams) -> float:
    # ln n / ln(ln n / nr^d), the thermodynamic clique scale
    x = math.log(pp.n) / _log_ratio_thermo(pp)
    if x <= 1.0:
        raise NumericError(
            f"thermodynamic clique scale {x:.4g} <= 1; the regime premise "
            f"fails at n={pp.n}, n*r^d={pp.volume:.4g}")
    return x


def _del_base(pp: PredictParams) -> float:
    if not 0.0 < pp.p < 1.0:
        raise ArgumentError(f"deletion forms need 0 < p < 1, got p={pp.p}")
    base = 1.0 / (1.0 - pp.p)
    if base == 1.0:
        # p below float resolution; log_{1/(1-p)} diverges
        raise NumericError(f"deletion log base degenerates at p={pp.p}")
    return base


def _ins_base(pp: PredictParams) -> float:
    if not 0.0 < pp.q < 1.0:
        raise ArgumentError(f"log_(1/q) forms need 0 < q < 1, got q={pp.q}")
    return 1.0 / pp.q


def _log_base(x: float, base: float) -> float:
    if x <= 0:
        raise NumericError(f"log of nonpositive value {x}")
    return math.log(x) / math.log(base)


def _dense_volume(pp: PredictParams) -> float:
    # log-of-volume forms predict a clique size only when nr^d > 1
    if pp.volume <= 1.0:
        raise NumericError(
            f"dense form needs n*r^d > 1, got {pp.volume:.4g} at n={pp.n}")
    return pp.volume


def _eta_lower(pp: PredictParams) -> float:
    # (eta/2) * sigma * n * r^d with eta solved at the empirical t
    eta = solve_eta(pp.t_emp, pp.d, pp.theta)
    return 0.5 * eta * pp.sigma * pp.volume


def _cond_q_zero_else_unknown(pp: PredictParams) -> Condition:
    return Condition.SATISFIED if pp.q == 0.0 else Condition.UNKNOWN


def _cond_er_window(pp: PredictParams) -> Condition:
    # (1/n)^(1/11) <= q: the explicit window where the inserted-edge clique
    # floor is proven; above it only unspecified constants separate cases
    if pp.q <= 0.0:
        return Condition.VIOLATED
    if pp.q >= (1.0 / pp.n) ** (1.0 / 11.0):
        return Condition.SATISFIED
    return Condition.UNKNOWN


def _cond_deletion_tight(pp: PredictParams) -> Condition:
    # two-sided dense deletion bound needs sigma*n*r^d >= T*ln(n)
    T = T_threshold(pp.d, pp.theta)
    if pp.sigma * pp.volume >= T * math.log(pp.n):
        return Condition.SATISFIED
    return Condition.VIOLATED


def _cond_combined_dense(pp: PredictParams) -> Condition:
    if _cond_deletion_tight(pp) is Condition.VIOLATED:
        return Condition.VIOLATED
    return _cond_q_zero_else_unknown(pp)


@dataclass(frozen=True)
class PredictionBand:
    """One theorem case as evaluable lower/upper functions."""

    quantity: Quantity
    case: str
    lower: Callable[[PredictParams], float]
    upper: Callable[[PredictParams], float]
    lower_form: Form
    upper_form: Form
    condition: Callable[[PredictParams], Condition]
    provenance: str


@dataclass(frozen=True)
class BandEvaluation:
    """predict_omega output: the band evaluated at one parameter point."""

    quantity: Quantity
    model: Model
    case: str
    lower: float
    upper: float
    lower_form: Form
    upper_form: Form
    condition: Condition
    provenance: str
    params: PredictParams


def _band(quantity, case, lower, upper, lf, uf, cond, prov):
    return PredictionBand(quantity=quantity, case=case, lower=lower,
                          upper=upper, lower_form=lf, upper_form=uf,
                          condition=cond, provenance=prov)


_ONE = lambda pp: 1.0

OMEGA_BANDS = {
    (Model.INSERTION_ONLY, "I.a"): _band(
        Quantity.OMEGA_INSERTION, "I.a", _ONE, _ONE,
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_q_zero_else_unknown,
        "subcritical, q below an unspecified power of 1/n: omega ~ 1"),
    (Model.INSERTION_ONLY, "I.b"): _band(
        Quantity.OMEGA_INSERTION, "I.b",
        lambda pp: er_clique_lower(pp.n, pp.q),
        lambda pp: _log_base(pp.n, _ins_base(pp)),
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_er_window,
        "subcritical, q above the crossover: omega ~ log_{1/q}(n); "
        "lower floor(log_{1/q} n) proven for q >= n^(-1/11)"),
    (Model.INSERTION_ONLY, "II.a"): _band(
        Quantity.OMEGA_INSERTION, "II.a",
        phi_thermo, _x_thermo,
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_q_zero_else_unknown,
        "thermodynamic, small q: omega ~ ln(n)/ln(ln(n)/nr^d); "
        "lower ln(n)/(2 ln(ln(n)/nr^d))"),
    (Model.INSERTION_ONLY, "II.b"): _band(
        Quantity.OMEGA_INSERTION, "II.b",
        lambda pp: er_clique_lower(pp.n, pp.q),
        lambda pp: _log_base(pp.n, _ins_base(pp)),
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_er_window,
        "thermodynamic, q above (nr^d/ln n)^C: omega ~ log_{1/q}(n)"),
    (Model.INSERTION_ONLY, "III"): _band(
        Quantity.OMEGA_INSERTION, "III",
        _eta_lower, lambda pp: 2.0 * _eta_lower(pp),
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_q_zero_else_unknown,
        "supercritical: omega ~ nr^d; lower (eta/2)*sigma*nr^d with "
        "H(eta/(theta 2^-d)) = 1/(theta 2^-d t); upper normalised to "
        "eta*sigma*nr^d so the band brackets the proven floor"),
    (Model.DELETION_ONLY, "I"): _band(
        Quantity.OMEGA_DELETION, "I", _ONE, _ONE,
        Form.EXPLICIT, Form.SCALING_ONLY,
        lambda pp: Condition.SATISFIED,
        "subcritical: omega ~ 1 for any constant deletion rate"),
    (Model.DELETION_ONLY, "II"): _band(
        Quantity.OMEGA_DELETION, "II",
        lambda pp: max(1.0, math.floor(
            _log_base(phi_thermo(pp), _del_base(pp)))),
        lambda pp: 2.0 * _log_base(_x_thermo(pp), _del_base(pp)) + 1.0,
        Form.EXPLICIT, Form.EXPLICIT,
        lambda pp: Condition.SATISFIED,
        "thermodynamic: omega ~ ln(X) with X = ln(n)/ln(ln(n)/nr^d); "
        "lower floor(log_{1/(1-p)}(X/2)), upper 2*log_{1/(1-p)}(X) + 1"),
    (Model.DELETION_ONLY, "III"): _band(
        Quantity.OMEGA_DELETION, "III",
        lambda pp: _log_base(_dense_volume(pp), _del_base(pp)),
        lambda pp: 3.0 * _log_base(_dense_volume(pp), _del_base(pp)),
        Form.SCALING_ONLY, Form.EXPLICIT, _cond_deletion_tight,
        "supercritical: omega <= 3*log_{1/(1-p)}(nr^d); two-sided "
        "~ log(nr^d) once sigma*nr^d >= T*ln(n), lower normalised to "
        "the same base"),
    (Model.COMBINED, "I.a"): _band(
        Quantity.OMEGA_COMBINED, "I.a", _ONE, _ONE,
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_q_zero_else_unknown,
        "subcritical, tiny q: omega ~ 1"),
    (Model.COMBINED, "I.b"): _band(
        Quantity.OMEGA_COMBINED, "I.b",
        lambda pp: er_clique_lower(pp.n, pp.q),
        lambda pp: _log_base(pp.n, _ins_base(pp)),
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_er_window,
        "subcritical, q above the crossover: omega ~ log_{1/q}(n)"),
    (Model.COMBINED, "II.a"): _band(
        Quantity.OMEGA_COMBINED, "II.a",
        lambda pp: max(1.0, math.floor(
            _log_base(phi_thermo(pp), _del_base(pp)))),
        lambda pp: 2.0 * _log_base(_x_thermo(pp), _del_base(pp)) + 1.0,
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_q_zero_else_unknown,
        "thermodynamic, tiny q: omega ~ log(ln(n)/ln(ln(n)/nr^d)); "
        "lower inherited from the deletion-only floor, upper from its "
        "ceiling (insertions below the crossover keep the order)"),
    (Model.COMBINED, "II.b"): _band(
        Quantity.OMEGA_COMBINED, "II.b",
        lambda pp: er_clique_lower(pp.n, pp.q),
        lambda pp: _log_base(pp.n, _ins_base(pp)),
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_er_window,
        "thermodynamic, q above (nr^d/ln n)^C: omega ~ log_{1/q}(n)"),
    (Model.COMBINED, "III.a"): _band(
        Quantity.OMEGA_COMBINED, "III.a",
        lambda pp: math.log(_dense_volume(pp)),
        lambda pp: math.log(_dense_volume(pp)),
        Form.SCALING_ONLY, Form.SCALING_ONLY, _cond_combined_dense,
        "supercritical t > T, tiny q: omega ~ ln(nr^d)"),
    (Model.COMBINED, "III.b"): _band(
        Quantity.OMEGA_COMBINED, "III.b",
        lambda pp: er_clique_lower(pp.n, pp.q),
        lambda pp: _log_base(pp.n, _ins_base(pp)),
        Form.EXPLICIT, Form.SCALING_ONLY, _cond_er_window,
        "supercritical, constant q: omega ~ log_{1/q}(n)"),
}

VALID_CASES = {
    Model.INSERTION_ONLY: ("I.a", "I.b", "II.a", "II.b", "III"),
    Model.DELETION_ONLY: ("I", "II", "III"),
    Model.COMBINED: ("I.a", "I.b", "II.a", "II.b", "III.a", "III.b"),
}


def predict_omega(model: Model, case: str,
                  params: PredictParams) -> BandEvaluation:
    """Evaluate the clique-number band for one theorem case.

    Explicit-constant forms are used where proofs supply them; elsewhere
    the unit-constant scaling form is returned with Form.SCALING_ONLY.
    The q-side condition of the case is reported as satisfied, violated,
    or unknown (the crossover constants are not pinned down).
    """
    if model not in VALID_CASES:
        raise ArgumentError(f"unknown model {model!r}")
    if case not in VALID_CASES[model]:
        raise ArgumentError(
            f"case {case!r} is not valid for {model.name}; "
            f"expected one of {VALID_CASES[model]}")
    if model is Model.INSERTION_ONLY and params.p != 0.0:
        raise ArgumentError("INSERTION_ONLY bands need p = 0")
    if model is Model.DELETION_ONLY and params.q != 0.0:
        raise ArgumentError("DELETION_ONLY bands need q = 0")
    band = OMEGA_BANDS[(model, case)]
    lo = float(band.lower(params))
    hi = float(band.upper(params))
    return BandEvaluation(quantity=band.quantity, model=model, case=case,
                          lower=lo, upper=hi,
                          lower_form=band.lower_form,
                          upper_form=band.upper_form,
                          condition=band.condition(params),
                          provenance=band.provenance, params=params)


def _geometric_case(model: Model, regime: Regime) -> str:
    if model is Model.DELETION_ONLY:
        return {Regime.SUBCRITICAL: "I", Regime.THERMODYNAMIC: "II",
                Regime.SUPERCRITICAL: "III"}[regime]
    dense = "III" if model is Model.INSERTION_ONLY else "III.a"
    return {Regime.SUBCRITICAL: "I.a", Regime.THERMODYNAMIC: "II.a",
            Regime.SUPERCRITICAL: dense}[regime]


def auto_denoise_threshold(g: PerturbedGraph, regime: RegimeParams) -> float:
    """Half the regime's lower clique prediction for g's parameters.

    Heuristic: the theory separates short-edge from long-edge clique
    numbers only up to constants, so half the proven short-edge floor is
    a pragmatic cut, not a certified one.  Uses the geometric-dominated
    case of the regime (long inserted edges are exactly the structure the
    threshold is meant to reject).
    """
    from .geometry import unit_ball_volume

    base = g.base
    cloud = base.cloud
    if g.p == 0.0:
        model = Model.INSERTION_ONLY
    elif g.q == 0.0:
        model = Model.DELETION_ONLY
    else:
        model = Model.COMBINED
    pp = PredictParams(n=cloud.n, r=base.r, d=cloud.d, sigma=cloud.sigma,
                       theta=unit_ball_volume(cloud.d, base.norm),
                       p=g.p, q=g.q)
    case = _geometric_case(model, regime.regime)
    ev = predict_omega(model, case, pp)
    return 0.5 * ev.lower
