"""Space descriptors and the norm engine over step functions.

A space descriptor is a small immutable tree naming a way to turn a
step function into a number.  Primitive descriptors (weighted Lebesgue,
Lorentz, Marcinkiewicz, weighted sup) are evaluated here by closed-form
piecewise integration -- exact whenever the weight is a pure power --
while composite descriptors (``Product``, ``Multiplier``, ``Calderon``,
``Dual``) describe variational problems and delegate to
:mod:`bfslab.product`.

Conventions baked into the evaluators:

* ``Lp(p, w)`` is the norm of ``x*w`` in ``L^p``.
* ``LorentzLambda(phi)`` integrates the decreasing rearrangement
  against ``d(phi)`` and charges a ``phi(0+) * max(x)`` atom when the
  weight does not vanish at 0.
* ``LorentzLambdaP(phi, p)`` uses the ``dt/t`` convention, so the
  classical second-index family is ``LorentzLambdaP(t^(1/p), q)``.
* Marcinkiewicz norms take the sup of ``phi * x**`` (or ``phi * x*``
  for the starred variant) over the grid; for power ``phi`` the sup on
  each cell is attained at an endpoint, so the value is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .grid import (
    HALF_LINE,
    MeasureSpace,
    StepFunction,
    double_star,
    half_line,
    rearrange,
    unit_interval,
)
from .weights import (
    NonIntegrableWeight,
    PowerWeight,
    Weight,
    simplify_power,
    weight_from_json,
    weight_to_json,
)
from .young import Power, YoungFunction, young_from_json, young_to_json

__all__ = [
    "Lp",
    "LorentzLambda",
    "LorentzLambdaP",
    "Marcinkiewicz",
    "MarcinkiewiczStar",
    "LInftyWeighted",
    "OrliczCL",
    "Calderon",
    "Product",
    "Multiplier",
    "Dual",
    "Convexification",
    "Symmetrization",
    "SpaceDescriptor",
    "NormResult",
    "norm",
    "norm_evaluator",
    "fundamental",
    "modular",
    "luxemburg_norm",
    "dual_descriptor",
    "symmetrization_norm",
    "canonical",
    "is_primitive",
    "is_symmetric",
    "lorentz_pq",
    "lorentz_p1_exact",
    "weak_lp",
    "space_to_json",
    "space_from_json",
]

_LUX_RTOL = 1e-10


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lp:
    """``L^p`` against an optional weight: the norm of ``x*w`` in L^p."""

    p: float
    weight: Optional[Weight] = None

    def __post_init__(self):
        p = float(self.p)
        if not (p >= 1.0):
            raise ValueError("Lp requires p >= 1")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class LorentzLambda:
    """Lorentz space: integral of the rearrangement against d(phi)."""

    phi: Weight


@dataclass(frozen=True)
class LorentzLambdaP:
    """Second-index Lorentz space, ``(∫ (phi(t) x*(t))^p dt/t)^(1/p)``."""

    phi: Weight
    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (p > 0.0 and math.isfinite(p)):
            raise ValueError("LorentzLambdaP requires 0 < p < inf")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class Marcinkiewicz:
    """``sup phi(t) x**(t)`` -- the maximal-average Marcinkiewicz norm."""

    phi: Weight


@dataclass(frozen=True)
class MarcinkiewiczStar:
    """``sup phi(t) x*(t)`` -- the rearrangement variant (no averaging)."""

    phi: Weight


@dataclass(frozen=True)
class LInftyWeighted:
    """``sup phi(t) |x(t)|`` on the function's own grid (not symmetric)."""

    phi: Weight


@dataclass(frozen=True)
class OrliczCL:
    """Orlicz-type space over a base: Luxemburg gauge of the modular."""

    base: "SpaceDescriptor"
    phi: YoungFunction


@dataclass(frozen=True)
class Calderon:
    """Intermediate space ``E^theta F^(1-theta)`` (theta on the first factor)."""

    E: "SpaceDescriptor"
    F: "SpaceDescriptor"
    theta: float

    def __post_init__(self):
        th = float(self.theta)
        if not (0.0 < th < 1.0):
            raise ValueError("Calderon requires 0 < theta < 1")
        object.__setattr__(self, "theta", th)


@dataclass(frozen=True)
class Product:
    """Pointwise-product space: infimum of ``|x|_E |y|_F`` over z = xy."""

    E: "SpaceDescriptor"
    F: "SpaceDescriptor"


@dataclass(frozen=True)
class Multiplier:
    """Pointwise multipliers from E into F with the operator norm."""

    E: "SpaceDescriptor"
    F: "SpaceDescriptor"


@dataclass(frozen=True)
class Dual:
    """Koethe dual: sup of ``∫ x y`` over the unit ball of the base."""

    E: "SpaceDescriptor"


@dataclass(frozen=True)
class Convexification:
    """``|x| = | |x|^p |_base^(1/p)``; p < 1 concavifies."""

    base: "SpaceDescriptor"
    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (p > 0.0 and math.isfinite(p)):
            raise ValueError("Convexification requires 0 < p < inf")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class Symmetrization:
    """Norm of ``x*`` (star) or of ``x**`` (doublestar) in the base space."""

    base: "SpaceDescriptor"
    mode: str = "star"

    def __post_init__(self):
        if self.mode not in ("star", "doublestar"):
            raise ValueError("mode must be 'star' or 'doublestar'")


SpaceDescriptor = Union[
    Lp,
    LorentzLambda,
    LorentzLambdaP,
    Marcinkiewicz,
    MarcinkiewiczStar,
    LInftyWeighted,
    OrliczCL,
    Calderon,
    Product,
    Multiplier,
    Dual,
    Convexification,
    Symmetrization,
]


@dataclass(frozen=True)
class NormResult:
    """A computed norm plus how much to trust it.

    ``kind`` is ``exact`` (closed form / exact piecewise integration),
    ``upper_bound`` (variational value certified by the attached
    witness), or ``estimate`` (sampled suprema, quadrature or
    iterative gauges).
    """

    value: float
    kind: str = "exact"
    witness: Optional[object] = None
    notes: tuple = ()


# ---------------------------------------------------------------------------
# structural predicates and canonical rewrites
# ---------------------------------------------------------------------------

_VARIATIONAL = (Calderon, Product, Multiplier, Dual)


def is_primitive(space: SpaceDescriptor) -> bool:
    """True when the norm is computable without variational search."""
    if isinstance(space, (OrliczCL, Convexification, Symmetrization)):
        return is_primitive(space.base)
    if isinstance(space, Dual):
        dd = dual_descriptor(space.E)
        return dd is not None and is_primitive(dd)
    return not isinstance(space, _VARIATIONAL)


def is_symmetric(space: SpaceDescriptor) -> bool:
    """True when the norm depends on x only through its rearrangement."""
    if isinstance(space, Lp):
        w = simplify_power(space.weight) if space.weight is not None else None
        return space.weight is None or (w is not None and w.alpha == 0.0)
    if isinstance(space, (LorentzLambda, LorentzLambdaP, Marcinkiewicz, MarcinkiewiczStar)):
        return True
    if isinstance(space, LInftyWeighted):
        w = simplify_power(space.phi)
        return w is not None and w.alpha == 0.0
    if isinstance(space, (OrliczCL, Convexification)):
        return is_symmetric(space.base)
    if isinstance(space, Symmetrization):
        return True
    if isinstance(space, (Product, Multiplier, Calderon)):
        return is_symmetric(space.E) and is_symmetric(space.F)
    if isinstance(space, Dual):
        return is_symmetric(space.E)
    return False


def _weight_pow(w: Optional[Weight], r: float) -> Optional[Weight]:
    """w**r for pure powers; None when not representable exactly."""
    if w is None:
        return PowerWeight(0.0, 1.0)
    pw = simplify_power(w)
    if pw is None:
        return None
    return PowerWeight(pw.alpha * r, pw.coef**r)


def _weight_or_none(w: Optional[Weight]) -> Optional[Weight]:
    if w is not None and isinstance(w, PowerWeight) and w.alpha == 0.0 and w.coef == 1.0:
        return None
    return w


def canonical(space: SpaceDescriptor) -> SpaceDescriptor:
    """Collapse rewrites that hold with equal norms (exactly).

    Pure-power weight arithmetic only; anything that cannot be rewritten
    with exact constants is returned structurally intact (children still
    canonicalized).
    """
    if isinstance(space, Convexification):
        base = canonical(space.base)
        p = space.p
        if p == 1.0:
            return base
        if isinstance(base, Convexification):
            return canonical(Convexification(base.base, base.p * p))
        if isinstance(base, Lp):
            new_p = base.p * p
            w = _weight_pow(base.weight, 1.0 / p)
            if w is not None and new_p >= 1.0:
                return Lp(new_p, _weight_or_none(w))
        if isinstance(base, MarcinkiewiczStar):
            w = _weight_pow(base.phi, 1.0 / p)
            if w is not None:
                return MarcinkiewiczStar(w)
        if isinstance(base, LInftyWeighted):
            w = _weight_pow(base.phi, 1.0 / p)
            if w is not None:
                return LInftyWeighted(w)
        if isinstance(base, LorentzLambdaP):
            w = _weight_pow(base.phi, 1.0 / p)
            if w is not None:
                return LorentzLambdaP(w, base.p * p)
        return Convexification(base, p)
    if isinstance(space, OrliczCL):
        base = canonical(space.base)
        phi = space.phi
        if isinstance(phi, Power):
            if phi.c == 1.0 and phi.p == 1.0:
                return base
            if isinstance(base, Lp):
                # gauge of c*(x/lam)^p in L^q(w): lam = c^(1/p) |x^p|_q^(1/p)
                new_p = base.p * phi.p
                w = _weight_pow(base.weight, 1.0 / phi.p)
                if w is not None and new_p >= 1.0:
                    w = PowerWeight(w.alpha, w.coef * phi.c ** (1.0 / phi.p))
                    return Lp(new_p, _weight_or_none(w))
        return OrliczCL(base, phi)
    if isinstance(space, Symmetrization):
        base = canonical(space.base)
        if space.mode == "star" and is_symmetric(base):
            return base
        return Symmetrization(base, space.mode)
    if isinstance(space, Calderon):
        E, F = canonical(space.E), canonical(space.F)
        th = space.theta
        if isinstance(E, Lp) and isinstance(F, Lp):
            wE = _weight_pow(E.weight, th)
            wF = _weight_pow(F.weight, 1.0 - th)
            if wE is not None and wF is not None:
                inv_p = th / E.p + (1.0 - th) / F.p
                p = math.inf if inv_p == 0.0 else 1.0 / inv_p
                w = PowerWeight(wE.alpha + wF.alpha, wE.coef * wF.coef)
                if p >= 1.0:
                    return Lp(p, _weight_or_none(w))
        return Calderon(E, F, th)
    if isinstance(space, Dual):
        dd = dual_descriptor(canonical(space.E))
        if dd is not None:
            return canonical(dd)
        return Dual(canonical(space.E))
    if isinstance(space, Product):
        return Product(canonical(space.E), canonical(space.F))
    if isinstance(space, Multiplier):
        return Multiplier(canonical(space.E), canonical(space.F))
    return space


# ---------------------------------------------------------------------------
# duality table
# ---------------------------------------------------------------------------


def _conjugate(p: float) -> float:
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def dual_descriptor(space: SpaceDescriptor) -> Optional[SpaceDescriptor]:
    """Symbolic Koethe dual, or None when no table entry applies."""
    space = space if isinstance(space, _VARIATIONAL) else canonical(space)
    if isinstance(space, Lp):
        w = _weight_pow(space.weight, -1.0)
        if w is None:
            return None
        return Lp(_conjugate(space.p), _weight_or_none(w))
    if isinstance(space, LorentzLambda):
        pw = simplify_power(space.phi)
        if pw is not None:
            return Marcinkiewicz(PowerWeight(1.0 - pw.alpha, 1.0 / pw.coef))
        return None
    if isinstance(space, Marcinkiewicz):
        pw = simplify_power(space.phi)
        if pw is not None:
            return LorentzLambda(PowerWeight(1.0 - pw.alpha, 1.0 / pw.coef))
        return None
    if isinstance(space, Convexification) and space.p >= 1.0:
        inner = dual_descriptor(space.base)
        if inner is not None and space.p > 1.0:
            return Product(Convexification(inner, space.p), Lp(_conjugate(space.p)))
        if inner is not None:
            return inner
    return None


# ---------------------------------------------------------------------------
# compiled evaluators
# ---------------------------------------------------------------------------


class _CompiledNorm:
    __slots__ = ("fn", "kind", "notes")

    def __init__(self, fn: Callable[[np.ndarray], float], kind: str, notes: tuple = ()):
        self.fn = fn
        self.kind = kind
        self.notes = notes


_COMPILE_CACHE: dict = {}


def _decreasing_profile(values: np.ndarray, widths: np.ndarray):
    """Sorted cell values with the breakpoints they induce."""
    order = np.argsort(-values, kind="stable")
    v = values[order]
    w = widths[order]
    bp = np.empty(v.size + 1)
    bp[0] = 0.0
    np.cumsum(w, out=bp[1:])
    return v, w, bp


def _trunc_notes(mspace: MeasureSpace) -> tuple:
    tr = mspace.truncation()
    if tr is None:
        return ()
    return (f"half-line truncated to [{tr[0]:g}, {tr[1]:g}]",)


def _compile(space: SpaceDescriptor, mspace: MeasureSpace) -> Optional[_CompiledNorm]:
    widths = mspace.widths
    bp0 = mspace.breakpoints
    tn = _trunc_notes(mspace)

    if isinstance(space, Lp):
        p, w = space.p, space.weight
        if math.isinf(p):
            if w is None:
                return _CompiledNorm(lambda v: float(v.max(initial=0.0)), "exact", tn)
            pw = simplify_power(w)
            sups = np.array([w.cell_sup(a, b) for a, b in zip(bp0[:-1], bp0[1:])])
            kind = "exact" if pw is not None else "estimate"
            notes = tn if pw is not None else tn + ("cell suprema sampled",)

            def _sup_norm(v, s=sups):
                live = v > 0
                if not live.any():
                    return 0.0
                return float(np.max(v[live] * s[live]))

            return _CompiledNorm(_sup_norm, kind, notes)
        if w is None:

            def _lp_plain(v, p=p, wd=widths):
                terms = np.sort(v**p * wd)
                return float(np.sum(terms) ** (1.0 / p))

            return _CompiledNorm(_lp_plain, "exact", tn)
        cell_w = []
        exact = True
        pw = simplify_power(w)
        if pw is None:
            exact = False
        for a, b in zip(bp0[:-1], bp0[1:]):
            try:
                cell_w.append(w.cell_integral_pow(a, b, p))
            except NonIntegrableWeight:
                cell_w.append(math.inf)
        cell_w = np.asarray(cell_w)

        def _lp_weighted(v, p=p, cw=cell_w):
            live = v > 0
            if not live.any():
                return 0.0
            if np.any(np.isinf(cw[live])):
                return math.inf
            terms = np.sort(v[live] ** p * cw[live])
            return float(np.sum(terms) ** (1.0 / p))

        notes = tn if exact else tn + ("fixed-order quadrature for the weight",)
        return _CompiledNorm(_lp_weighted, "exact" if exact else "estimate", notes)

    if isinstance(space, LorentzLambda):
        phi = space.phi

        def _lam(v, wd=widths, phi=phi):
            v, _, bp = _decreasing_profile(v, wd)
            ph = np.asarray(phi(bp), dtype=float)
            ph[0] = 0.0
            return float(np.sum(v * np.diff(ph)))

        return _CompiledNorm(_lam, "exact", tn)

    if isinstance(space, LorentzLambdaP):
        phi, p = space.phi, space.p
        pw = simplify_power(phi)
        if pw is not None:
            q = pw.alpha * p - 1.0
            cp = pw.coef**p

            def _lam_p(v, wd=widths, q=q, cp=cp, p=p):
                v, _, bp = _decreasing_profile(v, wd)
                live = int(np.searchsorted(-v, 0.0))
                if live == 0:
                    return 0.0
                if q <= -1.0:
                    return math.inf
                prim = bp[: live + 1] ** (q + 1.0) / (q + 1.0)
                terms = np.sort(v[:live] ** p * np.diff(prim))
                return float((cp * np.sum(terms)) ** (1.0 / p))

            return _CompiledNorm(_lam_p, "exact", tn)

        # fold the dt/t factor into the weight: (phi * t^(-1/p))^p = phi^p / t
        note = tn + ("fixed-order quadrature for the weight; dt/t absorbed",)
        from .weights import WeightProduct

        phi_eff = WeightProduct(phi, PowerWeight(-1.0 / p))

        def _lam_p_quad(v, wd=widths, phi=phi_eff, p=p):
            v, _, bp = _decreasing_profile(v, wd)
            total = 0.0
            for i in range(v.size):
                if v[i] <= 0:
                    break
                try:
                    cell = phi.cell_integral_pow(bp[i], bp[i + 1], p)
                except NonIntegrableWeight:
                    return math.inf
                total += v[i] ** p * cell
            return float(total ** (1.0 / p))

        return _CompiledNorm(_lam_p_quad, "estimate", note)

    if isinstance(space, Marcinkiewicz):
        phi = space.phi
        pw = simplify_power(phi)
        if pw is not None:
            lim0 = pw.coef if pw.alpha == 0.0 else 0.0

            def _marc_pow(v, wd=widths, pw=pw, lim0=lim0):
                v, w, bp = _decreasing_profile(v, wd)
                cum = np.cumsum(v * w)
                cand = pw(bp[1:]) * (cum / bp[1:])
                best = float(np.max(cand, initial=0.0))
                if lim0:
                    best = max(best, lim0 * float(v[0]))
                return best

            return _CompiledNorm(_marc_pow, "exact", tn)
        frac = np.linspace(0.0, 1.0, 10)

        def _marc_generic(v, wd=widths, phi=phi, frac=frac):
            v, w, bp = _decreasing_profile(v, wd)
            cum = np.concatenate(([0.0], np.cumsum(v * w)))
            a, b = bp[:-1], bp[1:]
            ts = a[:, None] + (b - a)[:, None] * frac[None, :]
            B = cum[:-1] - v * a
            num = B[:, None] + v[:, None] * ts
            with np.errstate(divide="ignore", invalid="ignore"):
                xdd = np.where(ts > 0, num / np.where(ts > 0, ts, 1.0), v[:, None])
                g = np.asarray(phi(ts), dtype=float) * xdd
            g = np.where(np.isnan(g), 0.0, g)
            return float(np.max(g, initial=0.0))

        return _CompiledNorm(_marc_generic, "estimate", tn + ("cell suprema sampled",))

    if isinstance(space, MarcinkiewiczStar):
        phi = space.phi
        pw = simplify_power(phi)
        if pw is not None and pw.alpha >= 0.0:

            def _mstar_pow(v, wd=widths, pw=pw):
                v, _, bp = _decreasing_profile(v, wd)
                return float(np.max(v * pw(bp[1:]), initial=0.0))

            return _CompiledNorm(_mstar_pow, "exact", tn)

        def _mstar_generic(v, wd=widths, phi=phi):
            v, _, bp = _decreasing_profile(v, wd)
            best = 0.0
            for i in range(v.size):
                if v[i] <= 0:
                    break
                best = max(best, v[i] * phi.cell_sup(bp[i], bp[i + 1]))
            return float(best)

        return _CompiledNorm(_mstar_generic, "estimate", tn + ("cell suprema sampled",))

    if isinstance(space, LInftyWeighted):
        phi = space.phi
        pw = simplify_power(phi)
        sups = np.array([phi.cell_sup(a, b) for a, b in zip(bp0[:-1], bp0[1:])])
        kind = "exact" if pw is not None else "estimate"
        notes = tn if pw is not None else tn + ("cell suprema sampled",)

        def _wsup(v, s=sups):
            live = v > 0
            if not live.any():
                return 0.0
            return float(np.max(v[live] * s[live]))

        return _CompiledNorm(_wsup, kind, notes)

    if isinstance(space, OrliczCL):
        basec = _compile(canonical(space.base), mspace)
        if basec is None:
            return None
        phi = space.phi

        def _lux(v, basec=basec, phi=phi):
            return _luxemburg_value(basec.fn, phi, v)

        return _CompiledNorm(
            _lux, "estimate", basec.notes + (f"luxemburg bisection, rtol {_LUX_RTOL:g}",)
        )

    if isinstance(space, Convexification):
        basec = _compile(canonical(space.base), mspace)
        if basec is None:
            return None
        p = space.p

        def _conv(v, basec=basec, p=p):
            return basec.fn(v**p) ** (1.0 / p)

        return _CompiledNorm(_conv, basec.kind, basec.notes)

    if isinstance(space, Symmetrization):
        return _compile_symmetrization(space, mspace)

    return None


def _compile_symmetrization(space: Symmetrization, mspace: MeasureSpace) -> Optional[_CompiledNorm]:
    base = canonical(space.base)
    widths = mspace.widths
    tn = _trunc_notes(mspace)
    if space.mode == "doublestar":
        if isinstance(base, (LInftyWeighted,)) or (isinstance(base, Lp) and math.isinf(base.p)):
            w = base.phi if isinstance(base, LInftyWeighted) else base.weight
            pw = simplify_power(w) if w is not None else PowerWeight(0.0)
            if pw is not None:
                # sup w(t) x**(t) is the averaged-maximal norm with weight w
                return _compile(Marcinkiewicz(pw), mspace)
        if isinstance(base, Lp) and not math.isinf(base.p):
            pw = simplify_power(base.weight) if base.weight is not None else PowerWeight(0.0)
            if pw is not None:
                nodes, gl_w = np.polynomial.legendre.leggauss(16)
                p, q, cp = base.p, pw.alpha * base.p, pw.coef**base.p

                def _dstar_lp(v, wd=widths, p=p, q=q, cp=cp, nodes=nodes, gl_w=gl_w):
                    v, w_, bp = _decreasing_profile(v, wd)
                    if v[0] <= 0:
                        return 0.0
                    cum = np.concatenate(([0.0], np.cumsum(v * w_)))
                    a, b = bp[:-1], bp[1:]
                    B = cum[:-1] - v * a
                    # first cell: x** = v[0], integrand is a pure power
                    if q <= -1.0:
                        return math.inf
                    total = cp * v[0] ** p * b[0] ** (q + 1.0) / (q + 1.0)
                    if a.size > 1:
                        mid = 0.5 * (a[1:, None] + b[1:, None])
                        half = 0.5 * (b[1:, None] - a[1:, None])
                        ts = mid + half * nodes[None, :]
                        xdd = (B[1:, None] + v[1:, None] * ts) / ts
                        integ = (xdd * ts ** pw.alpha) ** p
                        total += cp * float(np.sum(gl_w[None, :] * half * integ))
                    return float(total ** (1.0 / p))

                return _CompiledNorm(
                    _dstar_lp, "estimate", tn + ("x** integrated by per-cell quadrature",)
                )
        return None
    if space.mode == "star":
        if is_symmetric(base):
            return _compile(base, mspace)
        if isinstance(base, Lp) and not math.isinf(base.p):
            pw = simplify_power(base.weight) if base.weight is not None else PowerWeight(0.0)
            if pw is not None:
                q = pw.alpha * base.p
                cp = pw.coef**base.p

                def _star_lp(v, wd=widths, q=q, cp=cp, p=base.p):
                    v, _, bp = _decreasing_profile(v, wd)
                    live = int(np.searchsorted(-v, 0.0))
                    if live == 0:
                        return 0.0
                    if q <= -1.0:
                        return math.inf
                    prim = bp[: live + 1] ** (q + 1.0) / (q + 1.0)
                    terms = np.sort(v[:live] ** p * np.diff(prim))
                    return float((cp * np.sum(terms)) ** (1.0 / p))

                return _CompiledNorm(_star_lp, "exact", tn)
        if isinstance(base, (LInftyWeighted,)) or (isinstance(base, Lp) and math.isinf(base.p)):
            w = base.phi if isinstance(base, LInftyWeighted) else base.weight
            if w is None:
                w = PowerWeight(0.0)
            pw = simplify_power(w)
            if pw is not None and pw.alpha >= 0.0:

                def _star_sup(v, wd=widths, pw=pw):
                    v, _, bp = _decreasing_profile(v, wd)
                    return float(np.max(v * pw(bp[1:]), initial=0.0))

                return _CompiledNorm(_star_sup, "exact", tn)
            if pw is not None:

                def _star_sup_dec(v, wd=widths, pw=pw):
                    v, _, bp = _decreasing_profile(v, wd)
                    if v[0] <= 0:
                        return 0.0
                    return math.inf

                return _CompiledNorm(_star_sup_dec, "exact", tn + ("weight singular at 0",))
    return None


def _luxemburg_value(base_fn: Callable[[np.ndarray], float], phi: YoungFunction, values: np.ndarray) -> float:
    if not np.any(values > 0):
        return 0.0

    def mod(lam: float) -> float:
        ph = np.asarray(phi(values / lam), dtype=float)
        if np.any(~np.isfinite(ph)):
            return math.inf
        return base_fn(ph)

    hi = float(values.max())
    if hi <= 0 or not math.isfinite(hi):
        return math.inf
    steps = 0
    while mod(hi) > 1.0:
        hi *= 2.0
        steps += 1
        if steps > 400:
            return math.inf
    lo = hi / 2.0
    while mod(lo) <= 1.0:
        hi = lo
        lo /= 2.0
        steps += 1
        if lo < 1e-300 or steps > 800:
            return hi
    for _ in range(200):
        if hi - lo <= _LUX_RTOL * hi:
            break
        mid = math.sqrt(lo * hi)
        if mod(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def norm_evaluator(space: SpaceDescriptor, mspace: MeasureSpace) -> Optional[_CompiledNorm]:
    """Compiled fast-path norm for ``space`` on ``mspace``, or None.

    The returned object's ``fn`` maps a per-cell value array straight to
    the norm value; callers in the variational engine hold on to it
    across thousands of evaluations.
    """
    key = (space, mspace)
    hit = _COMPILE_CACHE.get(key)
    if hit is not None:
        return hit
    compiled = _compile(canonical(space), mspace)
    if compiled is not None:
        _COMPILE_CACHE[key] = compiled
    return compiled


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def norm(space: SpaceDescriptor, x: StepFunction) -> NormResult:
    """Norm of ``x`` in the described space.

    Primitive descriptors are evaluated in closed form; variational ones
    (Product, Multiplier, Calderon, table-less Dual) are delegated to
    the product engine and come back as certified bounds.
    """
    sp = canonical(space)
    compiled = norm_evaluator(sp, x.space)
    if compiled is not None:
        return NormResult(compiled.fn(x.values), compiled.kind, None, compiled.notes)
    if isinstance(sp, Convexification):
        inner = norm(sp.base, x.with_values(x.values**sp.p))
        return NormResult(inner.value ** (1.0 / sp.p), inner.kind, inner.witness, inner.notes)
    if isinstance(sp, Symmetrization):
        return symmetrization_norm(sp.base, sp.mode, x)
    if isinstance(sp, OrliczCL):
        return luxemburg_norm(sp.base, sp.phi, x)
    from . import product as _product

    return _product.variational_norm(sp, x)


def symmetrization_norm(space: SpaceDescriptor, mode: str, x: StepFunction) -> NormResult:
    """Norm of x* (mode 'star') or of x** (mode 'doublestar') in ``space``."""
    if mode == "star":
        compiled = norm_evaluator(Symmetrization(space, "star"), x.space)
        if compiled is not None:
            return NormResult(compiled.fn(x.values), compiled.kind, None, compiled.notes)
        res = norm(space, rearrange(x))
        return NormResult(res.value, res.kind, res.witness, res.notes)
    if mode != "doublestar":
        raise ValueError("mode must be 'star' or 'doublestar'")
    step = _doublestar_step(x)
    res = norm(space, step)
    kind = "estimate" if res.kind == "exact" else res.kind
    return NormResult(res.value, kind, res.witness, res.notes + ("x** sampled at cell left endpoints (pointwise upper step)",))


def _doublestar_step(x: StepFunction, interior: int = 8) -> StepFunction:
    """Step over-approximation of x** on a refinement of the sorted grid."""
    xs = rearrange(x)
    bp = xs.space.breakpoints
    pieces = []
    for a, b in zip(bp[:-1], bp[1:]):
        if a > 0:
            pieces.append(np.geomspace(a, b, interior + 2)[:-1])
        else:
            pieces.append(np.linspace(a, b, interior + 2)[:-1])
    new_bp = np.unique(np.concatenate(pieces + [bp[-1:]]))
    space = xs.space.with_breakpoints(new_bp)
    lefts = new_bp[:-1]
    vals = np.empty(lefts.size)
    if lefts[0] == 0.0:
        vals[0] = float(xs.values[0])
        vals[1:] = np.asarray(double_star(xs, lefts[1:]), dtype=float)
    else:
        vals[:] = np.asarray(double_star(xs, lefts), dtype=float)
    return StepFunction(space, vals)


def fundamental(space: SpaceDescriptor, t: float, mspace: Optional[MeasureSpace] = None) -> NormResult:
    """Norm of the indicator of (0, t], on a grid containing t exactly.

    When ``mspace`` is supplied, t is snapped to the nearest breakpoint
    and the snap is recorded in the notes.
    """
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise ValueError("fundamental requires 0 < t < inf")
    if mspace is None:
        mspace = unit_interval(include=(t,)) if t <= 1.0 else half_line(include=(t,))
    bp = mspace.breakpoints
    j = int(np.argmin(np.abs(bp - t)))
    if j == 0:
        j = 1
    t_snap = float(bp[j])
    values = (bp[1:] <= t_snap * (1.0 + 1e-12)).astype(float)
    res = norm(space, StepFunction(mspace, values))
    notes = res.notes
    if t_snap != t:
        notes = notes + (f"t snapped from {t!r} to breakpoint {t_snap!r}",)
    return NormResult(res.value, res.kind, res.witness, notes)


def modular(base: SpaceDescriptor, phi: YoungFunction, x: StepFunction) -> float:
    """``| phi(|x|) |_base``; +inf as soon as phi blows up on a live cell."""
    ph = np.asarray(phi(x.values), dtype=float)
    if np.any(~np.isfinite(ph)):
        return math.inf
    return norm(base, x.with_values(ph)).value


def luxemburg_norm(base: SpaceDescriptor, phi: YoungFunction, x: StepFunction) -> NormResult:
    """Gauge ``inf{lam : modular(x/lam) <= 1}`` by monotone bisection.

    The returned value is the upper end of a bracket of relative width
    1e-10, so the modular at the result is guaranteed <= 1.
    """
    sp = canonical(OrliczCL(base, phi))
    if not isinstance(sp, OrliczCL):
        return norm(sp, x)
    compiled = norm_evaluator(canonical(base), x.space)
    if compiled is None:
        raise ValueError("luxemburg_norm needs a primitive base space")
    if not np.any(x.values > 0):
        return NormResult(0.0, "exact", None, compiled.notes)
    value = _luxemburg_value(compiled.fn, phi, x.values)
    notes = compiled.notes + (f"luxemburg bisection, rtol {_LUX_RTOL:g}",)
    if math.isinf(value):
        notes = notes + ("modular stays above 1: x is outside the space",)
    return NormResult(value, "estimate", None, notes)


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def lorentz_pq(p: float, q: float) -> SpaceDescriptor:
    """Classical two-index Lorentz space; q = inf gives the weak-type sup."""
    if not (p >= 1.0):
        raise ValueError("need p >= 1")
    if math.isinf(q):
        return MarcinkiewiczStar(PowerWeight(1.0 / p))
    return LorentzLambdaP(PowerWeight(1.0 / p), q)


def lorentz_p1_exact(p: float) -> SpaceDescriptor:
    """First-index Lorentz space scaled so the indicator of (0,t] has norm t^(1/p)."""
    return LorentzLambdaP(PowerWeight(1.0 / p, 1.0 / p), 1.0)


def weak_lp(p: float) -> SpaceDescriptor:
    """Weak-L^p in its maximal-function (normable) form: sup t^(1/p) x**."""
    return Marcinkiewicz(PowerWeight(1.0 / p))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _p_to_json(p: float):
    return "inf" if math.isinf(p) else p


def _p_from_json(p) -> float:
    return math.inf if p == "inf" else float(p)


def space_to_json(space: SpaceDescriptor) -> dict:
    if isinstance(space, Lp):
        return {
            "kind": "lp",
            "p": _p_to_json(space.p),
            "weight": None if space.weight is None else weight_to_json(space.weight),
        }
    if isinstance(space, LorentzLambda):
        return {"kind": "lorentz_lambda", "phi": weight_to_json(space.phi)}
    if isinstance(space, LorentzLambdaP):
        return {"kind": "lorentz_lambda_p", "phi": weight_to_json(space.phi), "p": space.p}
    if isinstance(space, Marcinkiewicz):
        return {"kind": "marcinkiewicz", "phi": weight_to_json(space.phi)}
    if isinstance(space, MarcinkiewiczStar):
        return {"kind": "marcinkiewicz_star", "phi": weight_to_json(space.phi)}
    if isinstance(space, LInftyWeighted):
        return {"kind": "linfty_weighted", "phi": weight_to_json(space.phi)}
    if isinstance(space, OrliczCL):
        return {"kind": "orlicz", "base": space_to_json(space.base), "phi": young_to_json(space.phi)}
    if isinstance(space, Calderon):
        return {
            "kind": "calderon",
            "E": space_to_json(space.E),
            "F": space_to_json(space.F),
            "theta": space.theta,
        }
    if isinstance(space, Product):
        return {"kind": "product", "E": space_to_json(space.E), "F": space_to_json(space.F)}
    if isinstance(space, Multiplier):
        return {"kind": "multiplier", "E": space_to_json(space.E), "F": space_to_json(space.F)}
    if isinstance(space, Dual):
        return {"kind": "dual", "E": space_to_json(space.E)}
    if isinstance(space, Convexification):
        return {"kind": "convexification", "base": space_to_json(space.base), "p": space.p}
    if isinstance(space, Symmetrization):
        return {"kind": "symmetrization", "base": space_to_json(space.base), "mode": space.mode}
    raise TypeError(f"not a space descriptor: {space!r}")


def space_from_json(data: dict) -> SpaceDescriptor:
    kind = data["kind"]
    if kind == "lp":
        w = data.get("weight")
        return Lp(_p_from_json(data["p"]), None if w is None else weight_from_json(w))
    if kind == "lorentz_lambda":
        return LorentzLambda(weight_from_json(data["phi"]))
    if kind == "lorentz_lambda_p":
        return LorentzLambdaP(weight_from_json(data["phi"]), float(data["p"]))
    if kind == "marcinkiewicz":
        return Marcinkiewicz(weight_from_json(data["phi"]))
    if kind == "marcinkiewicz_star":
        return MarcinkiewiczStar(weight_from_json(data["phi"]))
    if kind == "linfty_weighted":
        return LInftyWeighted(weight_from_json(data["phi"]))
    if kind == "orlicz":
        return OrliczCL(space_from_json(data["base"]), young_from_json(data["phi"]))
    if kind == "calderon":
        return Calderon(space_from_json(data["E"]), space_from_json(data["F"]), float(data["theta"]))
    if kind == "product":
        return Product(space_from_json(data["E"]), space_from_json(data["F"]))
    if kind == "multiplier":
        return Multiplier(space_from_json(data["E"]), space_from_json(data["F"]))
    if kind == "dual":
        return Dual(space_from_json(data["E"]))
    if kind == "convexification":
        return Convexification(space_from_json(data["base"]), float(data["p"]))
    if kind == "symmetrization":
        return Symmetrization(space_from_json(data["base"]), data["mode"])
    raise ValueError(f"unknown space kind {kind!r}")
