"""Exhaustive search for fixed-point data with no interior isolated points.

The search is organised around one observation: once the two extremal Euler
classes are chosen, every equivariant identity is affine in the aggregate
interior data (number of curves, sum of classes, sum of squares, sum of
alpha_plus).  So the search splits into

1. a reachability table over multisets of admissible curve classes, counting
   multisets by (a, sum of classes, sum of squares, clamp term);
2. a vectorised sweep over Euler-class pairs, solving the affine system for
   the aggregate alpha;
3. materialisation of the surviving cells back into explicit curve lists,
   each re-checked with exact rational-function arithmetic.

The affine forms are not written down by hand: they are read off the
contribution functions in :mod:`fanoloc.equivariant` by evaluating them at
unit parameters, then checked for linearity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd
from typing import Iterator, Optional, Sequence

import numpy as np

from .equivariant import (
    anticanonical_degree,
    lefschetz_extremal,
    lefschetz_interior_curve,
    lefschetz_sum,
    loc_extremal,
    loc_interior_curve,
    localization_consistency,
)
from .geometry import (
    F1,
    P2,
    ClassExcluded,
    Configuration,
    Curve,
    DivisorClass,
    InteriorCurve,
    P1xP1,
    Point,
    ReducedSpace,
    Surface,
    adjunction_genus,
)
from .invariants import hodge_numbers
from .symbolic import Polynomial, RationalFunction

__all__ = [
    "Bounds",
    "SideSpec",
    "CaseSpec",
    "CurveClass",
    "Cell",
    "Candidate",
    "ExclusionRule",
    "CASES",
    "case_specs",
    "admissible_classes",
    "ReachTable",
    "solve_cells",
    "materialize",
    "balanced_split",
    "split_count",
    "enumerate_case",
    "apply_exclusions",
    "load_rules",
    "load_reference",
    "sign_ambiguous",
    "CaseResult",
    "UnmatchedGroup",
    "Discrepancy",
    "SurvivorGroup",
    "NoInteriorReport",
    "TwoComponentRow",
    "TwoComponentSolution",
    "TwoComponentReport",
    "classify_case",
    "classify_no_interior_points",
    "classify_two_components",
]


@dataclass(frozen=True)
class Bounds:
    a_max: int = 4
    class_bound: int = 10
    alpha_bound: int = 50
    euler_bound: int = 10

    def __post_init__(self) -> None:
        for name in ("a_max", "class_bound", "alpha_bound", "euler_bound"):
            if getattr(self, name) < 1:
                raise ValueError(f"bound {name} must be >= 1")

    def doubled(self) -> Bounds:
        """Class, alpha and Euler bounds doubled; the curve count is a range, not a truncation."""
        return replace(
            self, class_bound=2 * self.class_bound, alpha_bound=2 * self.alpha_bound, euler_bound=2 * self.euler_bound
        )

    @classmethod
    def parse(cls, text: str, base: Optional[Bounds] = None) -> Bounds:
        """Parse 'k=v,k=v' overrides; keys a_max, class_bound, alpha_bound, euler_bound."""
        values = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, sep, val = item.partition("=")
            key = key.strip()
            if not sep or key not in cls.__dataclass_fields__:
                raise ValueError(f"bad bound {item!r}; expected one of {', '.join(cls.__dataclass_fields__)}")
            try:
                values[key] = int(val)
            except ValueError:
                raise ValueError(f"bound {key} needs an integer, got {val!r}") from None
        return replace(base or cls(), **values)


@dataclass(frozen=True)
class SideSpec:
    """One extremal side of a case.

    ``fiber`` lists alternatives ``(f, values)``: the side is admissible if
    e.f lies in ``values`` for at least one alternative.  An empty tuple means
    no fibre condition.
    """

    kind: str
    c1N: Optional[int] = None
    fiber: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("point", "curve", "surface"):
            raise ValueError(f"unknown side kind {self.kind!r}")


@dataclass(frozen=True)
class CaseSpec:
    case: int
    subcase: str
    min: SideSpec
    max: SideSpec
    reduced_space: ReducedSpace
    bounds: Bounds = Bounds()
    a_min: int = 1

    @property
    def id(self) -> str:
        return f"{self.case}{self.subcase}"

    @property
    def a_range(self) -> range:
        return range(self.a_min, self.bounds.a_max + 1)

    @property
    def class_bound(self) -> int:
        return self.bounds.class_bound

    @property
    def alpha_bound(self) -> int:
        return self.bounds.alpha_bound

    @property
    def euler_bound(self) -> int:
        return self.bounds.euler_bound

    @property
    def symmetric(self) -> bool:
        return self.min.kind == self.max.kind

    def with_bounds(self, bounds: Bounds) -> CaseSpec:
        return replace(self, bounds=bounds)


_PT = SideSpec("point")
_SURF = SideSpec("surface")

CASES: tuple[CaseSpec, ...] = (
    CaseSpec(1, "", _PT, _PT, P2),
    CaseSpec(
        2,
        "i",
        SideSpec("curve", 0, (((0, 1), (-1,)),)),
        SideSpec("curve", 0, (((0, 1), (1,)), ((1, 0), (-1, 1)))),
        P1xP1,
    ),
    CaseSpec(2, "ii", SideSpec("curve", -1, (((1, 0), (-1,)),)), SideSpec("curve", 1, (((1, 0), (1,)),)), F1),
    CaseSpec(3, "", _PT, _SURF, P2),
    CaseSpec(4, "", SideSpec("curve", 0, (((0, 1), (-1, 1)),)), _SURF, P1xP1),
    CaseSpec(5, "", SideSpec("curve", -1), _SURF, F1),
    CaseSpec(6, "", _SURF, _SURF, P2),
    CaseSpec(7, "", _SURF, _SURF, P1xP1),
    CaseSpec(8, "", _SURF, _SURF, F1),
)


def case_specs(case: int, bounds: Optional[Bounds] = None) -> list[CaseSpec]:
    specs = [s for s in CASES if s.case == case]
    if not specs:
        raise ValueError(f"unknown case {case}; expected 1..8")
    return [s.with_bounds(bounds) if bounds else s for s in specs]


# admissible curve classes


@dataclass(frozen=True)
class CurveClass:
    coords: tuple[int, ...]
    genus: int
    q: int  # self-intersection = alpha_plus + alpha_minus

    @property
    def clamp(self) -> int:
        return max(0, -self.q)


def admissible_classes(space: ReducedSpace, bounds: Bounds) -> list[CurveClass]:
    """Effective classes with coords in [0, class_bound], an irreducible representative, and a legal alpha split."""
    out = []
    cb, B = bounds.class_bound, bounds.alpha_bound
    for coords in np.ndindex(*(cb + 1,) * space.rank):
        if not any(coords):
            continue
        coords = tuple(int(x) for x in coords)
        try:
            g = adjunction_genus(space, coords)
        except ClassExcluded:
            continue
        q = space.dot(coords, coords)
        if abs(q) > 2 * B:
            continue
        out.append(CurveClass(coords, g, q))
    return out


# reachability over multisets


class ReachTable:
    """``count[k][S..., Q - q_off, h]``: multisets of k classes with sum S, square-sum Q, clamp-sum h."""

    def __init__(self, classes: Sequence[CurveClass], space: ReducedSpace, bounds: Bounds) -> None:
        self.classes = list(classes)
        self.rank = space.rank
        self.a_max = bounds.a_max
        self.s_max = tuple(min(2 * bounds.euler_bound, bounds.a_max * bounds.class_bound) for _ in range(self.rank))
        qs = [c.q for c in self.classes] or [0]
        self.q_off = self.a_max * min(0, min(qs))
        self.q_len = self.a_max * max(0, max(qs)) - self.q_off + 1
        self.h_len = self.a_max * max([c.clamp for c in self.classes] or [0]) + 1
        shape = tuple(s + 1 for s in self.s_max) + (self.q_len, self.h_len)
        layers = [np.zeros(shape, dtype=np.int64) for _ in range(self.a_max + 1)]
        layers[0][(0,) * self.rank + (-self.q_off, 0)] = 1
        for c in self.classes:
            if any(x > s for x, s in zip(c.coords, self.s_max)):
                continue
            dst, src = self._shift(c)
            for k in range(1, self.a_max + 1):
                layers[k][dst] += layers[k - 1][src]
        self.layers = layers

    def _shift(self, c: CurveClass) -> tuple[tuple[slice, ...], tuple[slice, ...]]:
        dst, src = [], []
        for x, s in zip(c.coords, self.s_max):
            dst.append(slice(x, s + 1))
            src.append(slice(0, s + 1 - x))
        q = c.q
        dst.append(slice(max(q, 0), self.q_len + min(q, 0)))
        src.append(slice(max(-q, 0), self.q_len - max(q, 0)))
        h = c.clamp
        dst.append(slice(h, self.h_len))
        src.append(slice(0, self.h_len - h))
        return tuple(dst), tuple(src)

    def count(self, k: int, S: Sequence[int], Q: int, h: int) -> int:
        if k < 0 or k > self.a_max:
            return 0
        if any(x < 0 or x > s for x, s in zip(S, self.s_max)):
            return 0
        qi = Q - self.q_off
        if not (0 <= qi < self.q_len and 0 <= h < self.h_len):
            return 0
        return int(self.layers[k][tuple(S) + (qi, h)])

    def cells(self, k: int, S: Sequence[int]) -> Iterator[tuple[int, int, int]]:
        """Nonzero (Q, clamp, count) at (k, S)."""
        if any(x < 0 or x > s for x, s in zip(S, self.s_max)):
            return
        sl = self.layers[k][tuple(S)]
        for qi, h in zip(*np.nonzero(sl)):
            yield int(qi) + self.q_off, int(h), int(sl[qi, h])


@lru_cache(maxsize=16)
def _reach(space: ReducedSpace, bounds: Bounds) -> ReachTable:
    return ReachTable(admissible_classes(space, bounds), space, bounds)


# affine forms read off the contribution functions


def _side_component(side: SideSpec, space: ReducedSpace, params: Sequence[int]):
    if side.kind == "point":
        return Point()
    if side.kind == "curve":
        return Curve(params[0])
    return Surface(space.degree, params[0], params[1], space.picard_rank)


def _side_arity(side: SideSpec) -> int:
    return {"point": 0, "curve": 1, "surface": 2}[side.kind]


_LEF_DEN = Polynomial((1, -1)) ** 3 * 2
_N_LEF = 5


def _identity_vector(spec: CaseSpec, pmin, pmax, genus: int, ap: int, am: int) -> tuple[Fraction, ...]:
    """(Lefschetz residual numerator coefficients..., loc p=0, loc p=1, loc p=3) for one-curve aggregate data."""
    cmin = _side_component(spec.min, spec.reduced_space, pmin)
    cmax = _side_component(spec.max, spec.reduced_space, pmax)
    curve = InteriorCurve(genus, ap, am)
    lef = lefschetz_extremal(cmin, "min") + lefschetz_extremal(cmax, "max") + lefschetz_interior_curve(curve)
    scaled = (lef - RationalFunction(1)) * RationalFunction(_LEF_DEN)
    if scaled.denominator != Polynomial.constant(1):
        raise ArithmeticError("Lefschetz residual does not clear over 2(1-t)^3")
    coeffs = list(scaled.numerator.coeffs) + [0] * _N_LEF
    if any(coeffs[_N_LEF:]):
        raise ArithmeticError("Lefschetz residual numerator has unexpected degree")
    locs = []
    for p in (0, 1, 3):
        v = loc_extremal(cmin, "min", p).value(p) + loc_extremal(cmax, "max", p).value(p)
        v += loc_interior_curve(curve, p).value(p)
        locs.append(Fraction(v))
    return tuple(Fraction(c) for c in coeffs[:_N_LEF]) + tuple(locs)


@dataclass(frozen=True)
class AffineSystem:
    """Integer rows ``base + W_min.pmin + W_max.pmax + wX*KS + mQ*Q + mA*A``, all scaled by ``scale``.

    Rows are the Lefschetz coefficients, loc p=0, loc p=1 (all must vanish)
    and the p=3 row, which equals scale * (-K^3).
    """

    base: np.ndarray
    w_min: np.ndarray
    w_max: np.ndarray
    w_ks: np.ndarray
    m_q: np.ndarray
    m_a: np.ndarray
    scale: int

    @property
    def n_eq(self) -> int:
        return len(self.base) - 1


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def affine_system(spec: CaseSpec) -> AffineSystem:
    nmin, nmax = _side_arity(spec.min), _side_arity(spec.max)
    z_min, z_max = (0,) * nmin, (0,) * nmax
    # genus 1 has chi = 0, so it is the base point for the chi direction
    base = _identity_vector(spec, z_min, z_max, 1, 0, 0)
    unit = lambda n, i: tuple(1 if j == i else 0 for j in range(n))
    w_min = [_vec_sub(_identity_vector(spec, unit(nmin, i), z_max, 1, 0, 0), base) for i in range(nmin)]
    w_max = [_vec_sub(_identity_vector(spec, z_min, unit(nmax, i), 1, 0, 0), base) for i in range(nmax)]
    w_chi = _vec_sub(_identity_vector(spec, z_min, z_max, 0, 0, 0), base)
    w_ap = _vec_sub(_identity_vector(spec, z_min, z_max, 1, 1, 0), base)
    w_am = _vec_sub(_identity_vector(spec, z_min, z_max, 1, 0, 1), base)

    # linearity self-check at a generic point
    pmin = tuple(range(2, 2 + nmin))
    pmax = tuple(range(-3, -3 + nmax))
    probe = _identity_vector(spec, pmin, pmax, 0, 4, -7)
    predicted = list(base)
    for coeff, w in list(zip(pmin, w_min)) + list(zip(pmax, w_max)) + [(1, w_chi), (4, w_ap), (-7, w_am)]:
        predicted = [p + coeff * x for p, x in zip(predicted, w)]
    if tuple(predicted) != probe:
        raise ArithmeticError(f"contributions are not affine in the case parameters for case {spec.id}")

    # chi_total = (K.S - Q)/2 and alpha_minus_total = Q - A
    m_q = [am - chi / 2 for am, chi in zip(w_am, w_chi)]
    m_a = [ap - am for ap, am in zip(w_ap, w_am)]
    w_ks = [chi / 2 for chi in w_chi]
    rows = [base, w_ks, m_q, m_a] + w_min + w_max
    den = 1
    for r in rows:
        for x in r:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)

    def ints(r):
        return np.array([int(Fraction(x) * den) for x in r], dtype=np.int64)

    return AffineSystem(
        base=ints(base),
        w_min=np.array([ints(w) for w in w_min], dtype=np.int64).reshape(nmin, len(base)),
        w_max=np.array([ints(w) for w in w_max], dtype=np.int64).reshape(nmax, len(base)),
        w_ks=ints(w_ks),
        m_q=ints(m_q),
        m_a=ints(m_a),
        scale=den,
    )


# Euler-class sweep


def _grid(r: int, E: int) -> np.ndarray:
    axis = np.arange(-E, E + 1, dtype=np.int64)
    mesh = np.meshgrid(*([axis] * r), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _pair_form(space: ReducedSpace, E: np.ndarray, F: np.ndarray) -> np.ndarray:
    g = np.array(space.pairing, dtype=np.int64)
    return np.einsum("ni,ij,nj->n", E, g, F)


def _side_params(side: SideSpec, space: ReducedSpace, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(mask of admissible Euler classes, parameter matrix) for one extremal side."""
    sq = _pair_form(space, e, e)
    mask = np.ones(len(e), dtype=bool)
    if side.fiber:
        ok = np.zeros(len(e), dtype=bool)
        for f, values in side.fiber:
            fv = np.broadcast_to(np.array(f, dtype=np.int64), e.shape)
            ok |= np.isin(_pair_form(space, e, fv), values)
        mask &= ok
    if side.kind == "point":
        mask &= sq == 1
        params = np.zeros((len(e), 0), dtype=np.int64)
    elif side.kind == "curve":
        c1N = -sq
        if side.c1N is not None:
            mask &= c1N == side.c1N
        params = c1N[:, None]
    else:
        K = np.broadcast_to(np.array(space.c1, dtype=np.int64), e.shape)
        params = np.stack([_pair_form(space, K, e), sq], axis=1)
    return mask, params


@dataclass(frozen=True)
class Cell:
    """All configurations sharing Euler classes, curve count and aggregate class data."""

    spec: CaseSpec
    a: int
    e_min: tuple[int, ...]
    e_max: tuple[int, ...]
    Q: int
    clamp: int
    alpha_plus: int
    k3: int
    h11: int
    h11_alt: int
    h12: int
    multisets: int

    @property
    def S(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.e_min, self.e_max))

    @property
    def alpha_minus(self) -> int:
        return self.Q - self.alpha_plus

    @property
    def sort_key(self) -> tuple:
        return (self.a, self.S, self.Q, self.clamp, self.e_min, self.e_max, self.alpha_plus)

    def reversed_key(self) -> tuple:
        """sort_key of the same data seen from the other end (min and max swapped)."""
        e_min = tuple(-x for x in self.e_max)
        e_max = tuple(-x for x in self.e_min)
        return (self.a, self.S, self.Q, self.clamp, e_min, e_max, self.alpha_minus)


def _hodge_for(spec: CaseSpec, a: int):
    space = spec.reduced_space
    pmin = (0,) * _side_arity(spec.min)
    pmax = (0,) * _side_arity(spec.max)
    cmin = _side_component(spec.min, space, pmin)
    cmax = _side_component(spec.max, space, pmax)
    curves = tuple(InteriorCurve(0, 0, 0) for _ in range(a))
    return hodge_numbers(Configuration(cmin, cmax, curves))


def solve_cells(spec: CaseSpec, trace: Optional[dict] = None) -> list[Cell]:
    """Every cell passing Lefschetz = 1, both localization identities, Hodge consistency and 2 <= -K^3 <= 64.

    If ``trace`` is a dict it receives, per minimum Euler class, how many
    Euler-class pairs survive each filter stage.
    """
    space, bounds = spec.reduced_space, spec.bounds
    reach = _reach(space, bounds)
    system = affine_system(spec)
    grid = _grid(space.rank, bounds.euler_bound)
    mask_lo, p_lo = _side_params(spec.min, space, grid)
    mask_hi, p_hi = _side_params(spec.max, space, grid)
    lo_idx, hi_idx = np.nonzero(mask_lo)[0], np.nonzero(mask_hi)[0]
    if not len(lo_idx) or not len(hi_idx):
        return []
    I, J = np.meshgrid(lo_idx, hi_idx, indexing="ij")
    I, J = I.ravel(), J.ravel()

    def record(stage: str, idx: np.ndarray) -> None:
        if trace is None:
            return
        for i in lo_idx:
            key = tuple(int(x) for x in grid[i])
            trace.setdefault(key, {})[stage] = int(np.count_nonzero(idx == i))

    record("pairs", I)
    S = grid[J] - grid[I]
    smax = np.array(reach.s_max, dtype=np.int64)
    keep = np.all(S >= 0, axis=1) & np.all(S <= smax, axis=1) & np.any(S != 0, axis=1)
    I, J, S = I[keep], J[keep], S[keep]
    record("flow", I)
    K = np.broadcast_to(np.array(space.c1, dtype=np.int64), S.shape)
    KS = _pair_form(space, K, S)
    # r[n, j]: the pair-dependent part of row j
    r = system.base[None, :] + np.outer(KS, system.w_ks)
    if len(system.w_min):
        r = r + p_lo[I] @ system.w_min
    if len(system.w_max):
        r = r + p_hi[J] @ system.w_max
    m = np.stack([system.m_q, system.m_a], axis=1)
    n_eq = system.n_eq
    eq = m[:n_eq]
    nz = [j for j in range(n_eq) if eq[j].any()]
    if not nz:
        raise NotImplementedError("identities independent of the interior aggregates")
    j0 = nz[0]
    if eq[j0][1] == 0:
        raise NotImplementedError("alpha total not determined by the identities")
    # rank-1 structure: every row is a multiple of row j0
    for j in range(n_eq):
        if eq[j][0] * eq[j0][1] != eq[j][1] * eq[j0][0]:
            raise NotImplementedError("identities of rank 2 in (Q, A) are not supported")
    ok = np.ones(len(I), dtype=bool)
    piv = eq[j0][1]
    for j in range(n_eq):
        if j != j0:
            ok &= r[:, j] * piv == eq[j][1] * r[:, j0]
    I, J, S, KS, r = I[ok], J[ok], S[ok], KS[ok], r[ok]
    record("identities", I)

    mq0, ma0 = int(eq[j0][0]), int(eq[j0][1])
    k_row = n_eq
    kq, ka = int(system.m_q[k_row]), int(system.m_a[k_row])
    B = bounds.alpha_bound
    cells: list[Cell] = []
    hodge = {a: _hodge_for(spec, a) for a in spec.a_range}
    for n in range(len(I)):
        s = tuple(int(x) for x in S[n])
        r0, rk, ks = int(r[n, j0]), int(r[n, k_row]), int(KS[n])
        e_min = tuple(int(x) for x in grid[I[n]])
        e_max = tuple(int(x) for x in grid[J[n]])
        for a in spec.a_range:
            h = hodge[a]
            if not h.consistent:
                continue
            for Q, clamp, count in reach.cells(a, s):
                num = -r0 - mq0 * Q
                if num % ma0:
                    continue
                A = num // ma0
                if not (Q - a * B + clamp <= A <= a * B - clamp):
                    continue
                k3_scaled = rk + kq * Q + ka * A
                if k3_scaled % system.scale:
                    continue
                k3 = k3_scaled // system.scale
                if not 2 <= k3 <= 64:
                    continue
                chi_total = (ks - Q) // 2
                cells.append(
                    Cell(spec, a, e_min, e_max, Q, clamp, A, k3, h.h11, h.h11_alt, a - chi_total, count)
                )
    if trace is not None:
        for key in trace:
            trace[key]["cells"] = sum(1 for c in cells if c.e_min == key)
    if spec.symmetric:
        keys = {c.sort_key for c in cells}
        cells = [c for c in cells if not (c.reversed_key() in keys and c.reversed_key() < c.sort_key)]
    cells.sort(key=lambda c: c.sort_key)
    return cells


# materialisation


def materialize(cell: Cell, limit: Optional[int] = None) -> list[tuple[CurveClass, ...]]:
    """Explicit class multisets (nondecreasing class index) realising a cell, lexicographic order."""
    reach = _reach(cell.spec.reduced_space, cell.spec.bounds)
    classes = reach.classes
    out: list[tuple[CurveClass, ...]] = []

    def rec(k: int, S: tuple[int, ...], Q: int, h: int, lo: int, acc: list[CurveClass]) -> bool:
        if k == 0:
            if not any(S) and Q == 0 and h == 0:
                out.append(tuple(acc))
                return limit is not None and len(out) >= limit
            return False
        for idx in range(lo, len(classes)):
            c = classes[idx]
            S2 = tuple(x - y for x, y in zip(S, c.coords))
            if any(x < 0 for x in S2):
                continue
            if reach.count(k - 1, S2, Q - c.q, h - c.clamp) == 0:
                continue
            acc.append(c)
            if rec(k - 1, S2, Q - c.q, h - c.clamp, idx, acc):
                return True
            acc.pop()
        return False

    rec(cell.a, cell.S, cell.Q, cell.clamp, 0, [])
    return out


def _alpha_range(q: int, B: int) -> tuple[int, int]:
    return max(-B, q - B), min(B, q + B)


def balanced_split(qs: Sequence[int], total: int, B: int) -> Optional[tuple[int, ...]]:
    """alpha_plus per curve summing to ``total``, as close to q/2 each as the bounds allow."""
    ranges = [_alpha_range(q, B) for q in qs]
    if any(lo > hi for lo, hi in ranges):
        return None
    cur = [min(max(q // 2, lo), hi) for q, (lo, hi) in zip(qs, ranges)]
    while sum(cur) != total:
        step = 1 if sum(cur) < total else -1
        best = None
        for i, (q, (lo, hi)) in enumerate(zip(qs, ranges)):
            nxt = cur[i] + step
            if lo <= nxt <= hi:
                dev = abs(2 * nxt - q)
                if best is None or dev < best[0]:
                    best = (dev, i)
        if best is None:
            return None
        cur[best[1]] += step
    return tuple(cur)


def split_count(qs: Sequence[int], total: int, B: int) -> int:
    """Number of alpha_plus vectors within the bounds summing to ``total``."""
    ways = np.ones(1, dtype=np.int64)
    offset = 0
    for q in qs:
        lo, hi = _alpha_range(q, B)
        if hi < lo:
            return 0
        ways = np.convolve(ways, np.ones(hi - lo + 1, dtype=np.int64))
        offset += lo
    i = total - offset
    return int(ways[i]) if 0 <= i < len(ways) else 0


# candidates


@dataclass
class Candidate:
    case_id: str
    configuration: Configuration
    curve_classes: tuple[DivisorClass, ...]
    e_min: DivisorClass
    e_max: DivisorClass
    invariants: tuple[int, int, int]  # (h11, h12, -K^3)
    db_matches: tuple[str, ...] = ()
    excluded_by: Optional[str] = None
    alpha_splits: int = 1
    notes: tuple[str, ...] = ()
    cell: Optional[Cell] = field(default=None, repr=False, compare=False)

    @property
    def a(self) -> int:
        return self.configuration.a

    @property
    def h11(self) -> int:
        return self.invariants[0]

    @property
    def h12(self) -> int:
        return self.invariants[1]

    @property
    def k3(self) -> int:
        return self.invariants[2]

    @property
    def alphas(self) -> tuple[tuple[int, int], ...]:
        return tuple((c.alpha_plus, c.alpha_minus) for c in self.configuration.interior_curves)

    @property
    def sort_key(self) -> tuple:
        return (
            self.a,
            tuple(c.coords for c in self.curve_classes),
            self.e_min.coords,
            self.e_max.coords,
            self.alphas,
        )

    def facts(self) -> dict:
        """Flat integer/string facts visible to exclusion rules."""
        case, sub = self.case_id[0], self.case_id[1:]
        d = {
            "case": int(case),
            "subcase": sub,
            "a": self.a,
            "k3": self.k3,
            "h11": self.h11,
            "h12": self.h12,
            "Q": sum(c.alpha_plus + c.alpha_minus for c in self.configuration.interior_curves),
            "q_max": max(c.alpha_plus + c.alpha_minus for c in self.configuration.interior_curves),
        }
        for name, e in (("minus", self.e_min), ("plus", self.e_max)):
            for axis, v in zip("xy", e.coords):
                d[f"{axis}_{name}"] = v
        S = [sum(c.coords[i] for c in self.curve_classes) for i in range(len(self.e_min))]
        for axis, v in zip("xy", S):
            d[f"s{axis}"] = v
        if self.a == 1:
            for axis, v in zip("xy", self.curve_classes[0].coords):
                d[f"{axis}1"] = v
        return d


def _build_configuration(cell: Cell, multiset: Sequence[CurveClass]) -> Optional[tuple[Configuration, int]]:
    spec = cell.spec
    space = spec.reduced_space
    B = spec.alpha_bound
    qs = [c.q for c in multiset]
    split = balanced_split(qs, cell.alpha_plus, B)
    if split is None:
        return None
    curves = tuple(
        InteriorCurve(c.genus, ap, c.q - ap, DivisorClass(c.coords)) for c, ap in zip(multiset, split)
    )

    def comp(side: SideSpec, e: tuple[int, ...]):
        if side.kind == "point":
            return Point()
        if side.kind == "curve":
            return Curve(-space.dot(e, e))
        return space.as_surface(e)

    config = Configuration(
        comp(spec.min, cell.e_min),
        comp(spec.max, cell.e_max),
        curves,
        reduced_space=space,
        euler_min=DivisorClass(cell.e_min),
    )
    return config, split_count(qs, cell.alpha_plus, B)


class IdentityFailure(AssertionError):
    pass


def reassert(candidate: Candidate) -> None:
    """Re-check a constructed candidate with exact arithmetic; raise IdentityFailure on any mismatch."""
    c = candidate.configuration
    problems = list(c.structural_issues())
    if lefschetz_sum(c) != RationalFunction(1):
        problems.append(f"Lefschetz sum {lefschetz_sum(c)}")
    if not localization_consistency(c):
        problems.append("localization identities fail")
    h = hodge_numbers(c)
    if not h.consistent:
        problems.append(f"h11 {h.h11} != {h.h11_alt}")
    k3 = anticanonical_degree(c)
    if (h.h11, h.h12, k3) != candidate.invariants:
        problems.append(f"invariants {(h.h11, h.h12, k3)} != {candidate.invariants}")
    if not 2 <= k3 <= 64:
        problems.append(f"-K^3 = {k3} out of range")
    if candidate.case_id == "3":
        x_plus = candidate.e_max.coords[0]
        if x_plus + sum(cl.coords[0] for cl in candidate.curve_classes) != 1:
            problems.append("x_plus + sum x_k != 1")
    if problems:
        raise IdentityFailure(f"case {candidate.case_id} candidate {candidate.sort_key}: " + "; ".join(problems))


def candidates_for(cell: Cell, limit: Optional[int] = None) -> list[Candidate]:
    out = []
    for ms in materialize(cell, limit):
        built = _build_configuration(cell, ms)
        if built is None:
            continue
        config, splits = built
        cand = Candidate(
            case_id=cell.spec.id,
            configuration=config,
            curve_classes=tuple(DivisorClass(c.coords) for c in ms),
            e_min=DivisorClass(cell.e_min),
            e_max=DivisorClass(cell.e_max),
            invariants=(cell.h11, cell.h12, cell.k3),
            alpha_splits=splits,
            cell=cell,
        )
        reassert(cand)
        out.append(cand)
    return out


def enumerate_case(spec: CaseSpec) -> list[Candidate]:
    """All candidates of a case passing the arithmetic filters, one per class multiset and alpha family."""
    out: list[Candidate] = []
    for cell in solve_cells(spec):
        out.extend(candidates_for(cell))
    out.sort(key=lambda c: c.sort_key)
    return out


# exclusion rules


_OPS = {
    "eq": lambda x, v: x == v,
    "ne": lambda x, v: x != v,
    "lt": lambda x, v: x < v,
    "le": lambda x, v: x <= v,
    "gt": lambda x, v: x > v,
    "ge": lambda x, v: x >= v,
    "in": lambda x, v: x in v,
}


@dataclass(frozen=True)
class ExclusionRule:
    """Data-driven geometric exclusion.

    ``where`` maps fact names to either a literal (equality) or a dict of
    operator -> operand.  A fact missing from the candidate never matches.
    With ``drop_ids`` the rule only removes those database matches; the
    candidate is excluded when no match is left.
    """

    id: str
    where: tuple
    citation: str
    drop_ids: tuple[str, ...] = ()
    discrepancy: str = ""

    def __post_init__(self) -> None:
        if not self.citation.strip():
            raise ValueError(f"rule {self.id} needs a citation")
        for key, cond in self.where:
            if isinstance(cond, tuple):
                for op, _ in cond:
                    if op not in _OPS:
                        raise ValueError(f"rule {self.id}: unknown operator {op!r}")

    @classmethod
    def from_dict(cls, d: dict) -> ExclusionRule:
        where = []
        for key, cond in sorted(d["where"].items()):
            if isinstance(cond, dict):
                cond = tuple(sorted((op, tuple(v) if isinstance(v, list) else v) for op, v in cond.items()))
            where.append((key, cond))
        return cls(
            id=d["id"],
            where=tuple(where),
            citation=d["citation"],
            drop_ids=tuple(d.get("drop_ids", ())),
            discrepancy=d.get("discrepancy", ""),
        )

    def matches(self, facts: dict) -> bool:
        for key, cond in self.where:
            if key not in facts:
                return False
            x = facts[key]
            if isinstance(cond, tuple):
                if not all(_OPS[op](x, v) for op, v in cond):
                    return False
            elif x != cond:
                return False
        return True


def load_rules(path=None) -> list[ExclusionRule]:
    if path is None:
        text = resources.files("fanoloc").joinpath("data", "exclusions.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return [ExclusionRule.from_dict(d) for d in json.loads(text)]


def apply_exclusions(cands: Sequence[Candidate], rules: Sequence[ExclusionRule]) -> list[Candidate]:
    """Annotate matching candidates and return the survivors; annotations stay on the input objects."""
    survivors = []
    for cand in cands:
        if cand.excluded_by is None:
            facts = cand.facts()
            for rule in rules:
                if not rule.matches(facts):
                    continue
                if rule.drop_ids:
                    left = tuple(m for m in cand.db_matches if m not in rule.drop_ids)
                    if left != cand.db_matches:
                        cand.db_matches = left
                        cand.notes = cand.notes + (f"{rule.id} drops {','.join(rule.drop_ids)}",)
                    if left:
                        continue
                cand.excluded_by = rule.id
                break
        if cand.excluded_by is None:
            survivors.append(cand)
    return survivors


# classification


def sign_ambiguous(config: Configuration) -> bool:
    """True if negating c1(F).c1(N) on some surface extremum keeps every identity."""
    sides = [s for s in ("min", "max") if isinstance(getattr(config, s), Surface)]
    for mask in range(1, 1 << len(sides)):
        flipped = {}
        for i, side in enumerate(sides):
            if mask >> i & 1:
                f = getattr(config, side)
                if f.c1F_dot_c1N == 0:
                    break
                flipped[side] = replace(f, c1F_dot_c1N=-f.c1F_dot_c1N)
        else:
            other = replace(config, **flipped)
            if lefschetz_sum(other) == RationalFunction(1) and localization_consistency(other):
                return True
    return False


@dataclass(frozen=True)
class UnmatchedGroup:
    """Arithmetic cells with no database record (or outside the stored ranges), counted not listed."""

    case_id: str
    a: int
    k3: int
    h11: int
    h12: int
    reason: str
    cells: int
    multisets: int
    detail: str = ""


@dataclass
class CaseResult:
    spec: CaseSpec
    cells: list[Cell]
    candidates: list[Candidate]
    unmatched: list[UnmatchedGroup]
    notes: list[str] = field(default_factory=list)

    @property
    def survivors(self) -> list[Candidate]:
        return [c for c in self.candidates if c.excluded_by is None]

    @property
    def excluded(self) -> list[Candidate]:
        return [c for c in self.candidates if c.excluded_by is not None]


def _fmt_class(coords: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in coords) + ")"


def _branch_notes(spec: CaseSpec, trace: dict) -> list[str]:
    if spec.case != 5:
        return []
    notes = []
    for e in ((-1, -1), (1, 1)):
        stages = trace.get(e, {})
        order = ("pairs", "flow", "identities", "cells")
        killed = next((st for st in order if stages.get(st, 0) == 0), None)
        counts = ", ".join(f"{st} {stages.get(st, 0)}" for st in order)
        verdict = f"killed at stage '{killed}'" if killed else "alive"
        notes.append(f"branch e_min = {_fmt_class(e)}: {counts}; {verdict}")
    return notes


def classify_case(spec: CaseSpec, db=None, rules: Optional[Sequence[ExclusionRule]] = None, verify_all: bool = False) -> CaseResult:
    """Solve, match against the database, materialise matched cells, then apply the curated rules."""
    from .fanodb import default_database

    db = db if db is not None else default_database()
    rules = load_rules() if rules is None else rules
    trace: dict = {}
    cells = solve_cells(spec, trace)
    groups: dict[tuple, list[Cell]] = {}
    for cell in cells:
        groups.setdefault((cell.a, cell.k3, cell.h11, cell.h12), []).append(cell)
    candidates: list[Candidate] = []
    unmatched: list[UnmatchedGroup] = []
    for (a, k3, h11, h12), group in sorted(groups.items()):
        fact = db.violates_ranges(h11, k3, h12)
        records = [] if fact else db.lookup(h11, k3, h12)
        if not records:
            # the group is still checked exactly before being set aside
            for cell in group if verify_all else group[:1]:
                candidates_for(cell, limit=1)
            reason, detail = ("fanodb:range", fact.source) if fact else ("fanodb:no-match", "")
            multisets = sum(c.multisets for c in group)
            unmatched.append(UnmatchedGroup(spec.id, a, k3, h11, h12, reason, len(group), multisets, detail))
            continue
        ids = tuple(r.id for r in records)
        for cell in group:
            for cand in candidates_for(cell):
                cand.db_matches = ids
                candidates.append(cand)
    candidates.sort(key=lambda c: c.sort_key)
    apply_exclusions(candidates, rules)
    for cand in candidates:
        if cand.excluded_by is None and sign_ambiguous(cand.configuration):
            cand.notes = cand.notes + ("surface sign ambiguous",)
    notes = [f"{len(cells)} arithmetic cells; {len(candidates)} candidates with database matches"]
    notes += _branch_notes(spec, trace)
    return CaseResult(spec, cells, candidates, unmatched, notes)


def load_reference(path=None) -> dict:
    if path is None:
        text = resources.files("fanoloc").joinpath("data", "reference_tables.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


@dataclass(frozen=True)
class Discrepancy:
    kind: str
    subject: str
    text: str


@dataclass(frozen=True)
class SurvivorGroup:
    k3: int
    h11: int
    h12: int
    a: int
    cases: tuple[str, ...]
    db_matches: tuple[str, ...]
    candidates: int

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.k3, self.h11, self.h12, self.a)


def _group_label(key: Sequence[int]) -> str:
    k3, h11, h12, a = key
    return f"-K^3={k3} h11={h11} h12={h12} a={a}"


@dataclass
class NoInteriorReport:
    bounds: Bounds
    results: list[CaseResult]
    rules: list[ExclusionRule]
    groups: list[SurvivorGroup]
    discrepancies: list[Discrepancy]

    @property
    def survivors(self) -> list[Candidate]:
        return [c for r in self.results for c in r.survivors]

    @property
    def excluded(self) -> list[Candidate]:
        return [c for r in self.results for c in r.excluded]

    def survivors_by_case(self) -> dict[str, list[Candidate]]:
        return {r.spec.id: r.survivors for r in self.results}

    def group_keys(self) -> set[tuple[int, int, int, int]]:
        return {g.key for g in self.groups}


def _survivor_groups(results: Sequence[CaseResult]) -> list[SurvivorGroup]:
    acc: dict[tuple, dict] = {}
    for r in results:
        for c in r.survivors:
            g = acc.setdefault((c.k3, c.h11, c.h12, c.a), {"cases": [], "ids": [], "n": 0})
            if r.spec.id not in g["cases"]:
                g["cases"].append(r.spec.id)
            g["ids"] += [m for m in c.db_matches if m not in g["ids"]]
            g["n"] += 1
    out = [SurvivorGroup(*k, tuple(v["cases"]), tuple(v["ids"]), v["n"]) for k, v in acc.items()]
    out.sort(key=lambda g: (-g.k3, g.h11, g.h12, g.a))
    return out


def _no_interior_discrepancies(results, groups, rules, reference) -> list[Discrepancy]:
    ref = reference["no_interior"]
    notes = {tuple(n["row"]): n["text"] for n in ref.get("notes", [])}
    expected = [tuple(r["row"]) for r in ref["rows"]]
    have = {g.key for g in groups}
    out = []
    for key in expected:
        if key not in have:
            out.append(Discrepancy("missing-row", _group_label(key), notes.get(key, "no surviving candidate")))
    for g in groups:
        if g.key not in expected:
            text = notes.get(g.key, "survivor group absent from the reference table")
            out.append(Discrepancy("extra-row", _group_label(g.key), f"{text} [cases {','.join(g.cases)}]"))
    by_case = {r.spec.id: r for r in results}
    for case_id in ref.get("empty_cases", []):
        r = by_case.get(case_id)
        if r is not None and r.survivors:
            out.append(Discrepancy("nonempty-case", f"case {case_id}", f"{len(r.survivors)} survivors"))
    for item in ref.get("claimed_empty", []):
        r = by_case.get(item["case"])
        if r is not None and r.survivors:
            keys = sorted({(c.k3, c.h11, c.h12, c.a) for c in r.survivors}, key=lambda k: (-k[0],) + k[1:])
            rows = "; ".join(_group_label(k) for k in keys)
            out.append(Discrepancy("claimed-empty", f"case {item['case']}", f"{item['text']} Survivors: {rows}."))
    fired = {c.excluded_by for r in results for c in r.candidates if c.excluded_by}
    for r in results:
        for c in r.candidates:
            fired.update(n.split(" drops ")[0] for n in c.notes if " drops " in n)
    for rule in rules:
        if rule.discrepancy and rule.id in fired:
            out.append(Discrepancy("rule", rule.id, rule.discrepancy))
    ambiguous = [c for c in (c for r in results for c in r.survivors) if "surface sign ambiguous" in c.notes]
    if ambiguous:
        out.append(
            Discrepancy(
                "sign-ambiguity",
                "surface extrema",
                f"{len(ambiguous)} survivors also satisfy every identity with c1(F).c1(N) negated",
            )
        )
    return out


def classify_no_interior_points(
    bounds: Optional[Bounds] = None,
    db=None,
    rules: Optional[Sequence[ExclusionRule]] = None,
    verify_all: bool = False,
    reference: Optional[dict] = None,
) -> NoInteriorReport:
    from .fanodb import default_database

    bounds = bounds or Bounds()
    db = db if db is not None else default_database()
    rules = list(load_rules() if rules is None else rules)
    reference = reference or load_reference()
    results = [classify_case(spec.with_bounds(bounds), db, rules, verify_all) for spec in CASES]
    groups = _survivor_groups(results)
    return NoInteriorReport(bounds, results, rules, groups, _no_interior_discrepancies(results, groups, rules, reference))


# two fixed components


_SHAPES = (
    ("point", "point"),
    ("point", "curve"),
    ("point", "surface"),
    ("curve", "curve"),
    ("curve", "surface"),
    ("surface", "surface"),
)
# lattices a reduced space can carry next to each extremum kind
_LATTICES_NEAR = {"point": (P2,), "curve": (P1xP1, F1), "surface": (P2, P1xP1, F1)}


@dataclass(frozen=True)
class TwoComponentSolution:
    space: str  # reduced-space lattice, "" when the shape is solved without one
    params: str
    k3: int
    db_matches: tuple[str, ...]


@dataclass(frozen=True)
class TwoComponentRow:
    shape: str
    h11: str
    h12: int
    solutions: tuple[TwoComponentSolution, ...]
    k3: tuple[int, ...]
    db_matches: tuple[str, ...]
    verdict: str
    reason: str = ""


@dataclass
class TwoComponentReport:
    bounds: Bounds
    rows: list[TwoComponentRow]
    discrepancies: list[Discrepancy]


def _passes(config: Configuration) -> Optional[int]:
    if lefschetz_sum(config) != RationalFunction(1) or not localization_consistency(config):
        return None
    if not hodge_numbers(config).consistent:
        return None
    k3 = anticanonical_degree(config)
    return k3 if 2 <= k3 <= 64 and k3 % 2 == 0 else None


def _shape_configs(lo: str, hi: str, bounds: Bounds) -> Iterator[tuple[str, str, Configuration]]:
    """(lattice, parameters, configuration) for every parameter choice of a two-component shape."""
    R = 2 * bounds.euler_bound
    if lo != "surface" and hi != "surface":
        if lo == "point" and hi == "point":
            yield "", "", Configuration(Point(), Point())
            return
        if lo == "curve" and hi == "curve":
            for m in range(-R, R + 1):
                for p in range(-R, R + 1):
                    yield "", f"c1N-={m} c1N+={p}", Configuration(Curve(m), Curve(p))
            return
        # point and curve, in both orientations
        for n in range(-R, R + 1):
            yield "", f"max curve c1N={n}", Configuration(Point(), Curve(n))
            yield "", f"min curve c1N={n}", Configuration(Curve(n), Point())
        return
    near = {s.name for s in _LATTICES_NEAR[lo]} & {s.name for s in _LATTICES_NEAR[hi]}
    for space in (P2, P1xP1, F1):
        if space.name not in near:
            continue
        for e in _grid(space.rank, bounds.euler_bound):
            e = tuple(int(x) for x in e)
            sq = space.dot(e, e)
            comps = []
            for kind in (lo, hi):
                if kind == "point":
                    if sq != 1:
                        break
                    comps.append(Point())
                elif kind == "curve":
                    comps.append(Curve(-sq))
                else:
                    comps.append(space.as_surface(e))
            else:
                config = Configuration(comps[0], comps[1], reduced_space=space, euler_min=DivisorClass(e))
                yield space.name, f"e={_fmt_class(e)}", config


def _shape_hodge(lo: str, hi: str) -> str:
    """h11 of a shape; 'a|b' when the two Hodge formulas disagree, '1+d' for surface pairs."""

    def comp(kind: str, space: Optional[ReducedSpace]):
        if kind == "point":
            return Point()
        if kind == "curve":
            return Curve(0)
        return space.as_surface((0,) * space.rank)

    near = [s for s in _LATTICES_NEAR[lo] if s in _LATTICES_NEAR[hi]] if "surface" in (lo, hi) else [None]
    values = []
    for space in near:
        h = hodge_numbers(Configuration(comp(lo, space), comp(hi, space)))
        values.append((h.h11, h.h11_alt, space))
    if lo == hi == "surface" and all(h == alt == 1 + sp.picard_rank for h, alt, sp in values):
        return "1+d"
    parts = sorted({str(h) if h == alt else f"{h}|{alt}" for h, alt, _ in values})
    return ",".join(parts)


def classify_two_components(bounds: Optional[Bounds] = None, db=None, reference: Optional[dict] = None) -> TwoComponentReport:
    """Fixed locus with exactly the two extrema: every shape through the identities and the database."""
    from .fanodb import default_database

    bounds = bounds or Bounds()
    db = db if db is not None else default_database()
    reference = reference or load_reference()
    rows = []
    for lo, hi in _SHAPES:
        solutions, k3s, ids = [], [], []
        tried = 0
        for space, params, config in _shape_configs(lo, hi, bounds):
            tried += 1
            k3 = _passes(config)
            if k3 is None:
                continue
            h = hodge_numbers(config)
            matches = [r.id for r in db.lookup(h.h11, k3, h.h12)]
            solutions.append(TwoComponentSolution(space, params, k3, tuple(matches)))
            if k3 not in k3s:
                k3s.append(k3)
            ids += [m for m in matches if m not in ids]
        if not solutions:
            if lo == hi == "point":
                total = lefschetz_sum(Configuration(Point(), Point()))
                reason = f"Lefschetz sum {total} != 1 (residual {total - RationalFunction(1)})"
            else:
                reason = f"no parameter choice ({tried} tried) satisfies the identities"
            verdict = "not exist"
        elif lo == hi == "surface":
            reason, verdict = "", "P_S(E)"
        else:
            reason, verdict = "", ", ".join(ids)
        rows.append(
            TwoComponentRow(f"{lo}/{hi}", _shape_hodge(lo, hi), 0, tuple(solutions), tuple(k3s), tuple(ids), verdict, reason)
        )
    disc = []
    expected = {r["shape"]: r for r in reference["two_components"]["rows"]}
    notes = {n["shape"]: n["text"] for n in reference["two_components"].get("notes", [])}
    for row in rows:
        want = expected.get(row.shape)
        if want is None:
            continue
        got = {"h11": row.h11, "h12": row.h12, "verdict": row.verdict}
        for key in ("h11", "h12", "verdict"):
            if got[key] != want[key]:
                text = notes.get(row.shape, "")
                disc.append(Discrepancy("cell", f"{row.shape} {key}", f"got {got[key]!r}, table {want[key]!r}. {text}".strip()))
    return TwoComponentReport(bounds, rows, disc)
