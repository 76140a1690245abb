"""Holomorphic Lefschetz and ABBV localization contributions.

Localization values are stored by equivariant degree: integrating the
``p``-th power of the equivariant first Chern class (p in {0, 1, 3}) over a
fixed component yields a single coefficient, of lambda**(p - 3).  The global
integral vanishes for p = 0, 1 and equals -K^3 for p = 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Literal, Sequence, Union

from .geometry import (
    TYPE_12,
    TYPE_21,
    Configuration,
    Curve,
    ExtremalComponent,
    InteriorCurve,
    Point,
    Surface,
    WeightType,
)
from .symbolic import Polynomial, RationalFunction

__all__ = [
    "LocalizationResult",
    "LedgerRow",
    "ContributionLedger",
    "lefschetz_point",
    "lefschetz_interior_curve",
    "lefschetz_extremal",
    "lefschetz_sum",
    "loc_point",
    "loc_interior_curve",
    "loc_extremal",
    "anticanonical_degree",
    "localization_consistency",
    "localization_total",
    "binomial_count_check",
    "isolated_lefschetz_sum",
    "isolated_anticanonical_degree",
    "contribution_ledger",
    "CURVE_C1",
]

Side = Literal["min", "max"]
Power = Literal[0, 1, 3]

# c1 of an extremal rational curve
CURVE_C1 = 2

_ONE_MINUS_T = Polynomial((1, -1))
_CUBE = _ONE_MINUS_T ** 3
_T = Polynomial((0, 1))


def _rf(num: Polynomial, den: Polynomial) -> RationalFunction:
    return RationalFunction(num, den)


@dataclass(frozen=True)
class LocalizationResult:
    deg_neg3: Fraction = Fraction(0)
    deg_neg2: Fraction = Fraction(0)
    deg_0: Fraction = Fraction(0)

    @classmethod
    def at_power(cls, p: int, value) -> LocalizationResult:
        value = Fraction(value)
        if p == 0:
            return cls(deg_neg3=value)
        if p == 1:
            return cls(deg_neg2=value)
        if p == 3:
            return cls(deg_0=value)
        raise ValueError(f"power p must be 0, 1 or 3, got {p}")

    def __add__(self, other: LocalizationResult) -> LocalizationResult:
        return LocalizationResult(
            self.deg_neg3 + other.deg_neg3,
            self.deg_neg2 + other.deg_neg2,
            self.deg_0 + other.deg_0,
        )

    def scaled(self, k: int) -> LocalizationResult:
        return LocalizationResult(self.deg_neg3 * k, self.deg_neg2 * k, self.deg_0 * k)

    def value(self, p: int) -> Fraction:
        return {0: self.deg_neg3, 1: self.deg_neg2, 3: self.deg_0}[p]


def _check_isolated(w: WeightType) -> None:
    if w.nu_zero:
        raise ValueError(f"weight type {w} has a zero weight: not an isolated point")


# Lefschetz contributions

@lru_cache(maxsize=None)
def lefschetz_point(w: WeightType) -> RationalFunction:
    """Product over tangent weights: 1/(1-t) for weight -1, 1/(1-1/t) for +1."""
    _check_isolated(w)
    result = RationalFunction(1)
    for weight in w.weights():
        if weight < 0:
            result = result * _rf(Polynomial((1,)), _ONE_MINUS_T)
        else:
            result = result * _rf(-_T, _ONE_MINUS_T)
    return result


@lru_cache(maxsize=4096)
def _lefschetz_curve_terms(chi: int, alpha_plus: int, alpha_minus: int) -> RationalFunction:
    # -t(1-t)chi - (alpha+ - alpha- t) t
    num = Polynomial((0, -chi, chi)) - Polynomial((0, alpha_plus, -alpha_minus))
    return _rf(num, _CUBE)


def lefschetz_interior_curve(c: InteriorCurve) -> RationalFunction:
    return _lefschetz_curve_terms(c.chi, c.alpha_plus, c.alpha_minus)


@lru_cache(maxsize=4096)
def lefschetz_extremal(comp: ExtremalComponent, side: Side) -> RationalFunction:
    t2 = Polynomial((0, 0, 1))
    if side == "min":
        if isinstance(comp, Point):
            return _rf(Polynomial((0, 0, 0, -1)), _CUBE)
        if isinstance(comp, Curve):
            return _rf(_ONE_MINUS_T * t2 + t2 * comp.c1N, _CUBE)
        num = (
            _T * _ONE_MINUS_T ** 2 * -2
            - _T * _ONE_MINUS_T * comp.c1F_dot_c1N
            - _T * Polynomial((1, 1)) * comp.c1N_sq
        )
        return _rf(num, _CUBE * 2)
    if side == "max":
        if isinstance(comp, Point):
            return _rf(Polynomial((1,)), _CUBE)
        if isinstance(comp, Curve):
            return _rf(_ONE_MINUS_T - _T * comp.c1N, _CUBE)
        num = (
            _ONE_MINUS_T ** 2 * 2
            - _T * _ONE_MINUS_T * comp.c1F_dot_c1N
            + _T * Polynomial((1, 1)) * comp.c1N_sq
        )
        return _rf(num, _CUBE * 2)
    raise ValueError(f"side must be 'min' or 'max', got {side!r}")


def lefschetz_sum(config: Configuration) -> RationalFunction:
    total = lefschetz_extremal(config.min, "min") + lefschetz_extremal(config.max, "max")
    for c in config.interior_curves:
        total = total + lefschetz_interior_curve(c)
    if config.b:
        total = total + lefschetz_point(TYPE_12) * config.b
    if config.c:
        total = total + lefschetz_point(TYPE_21) * config.c
    return total


# localization contributions

def loc_point(w: WeightType, p: Power) -> LocalizationResult:
    _check_isolated(w)
    ws = w.weights()
    prod = 1
    for x in ws:
        prod *= x
    return LocalizationResult.at_power(p, Fraction(sum(ws) ** p, prod))


def loc_interior_curve(c: InteriorCurve, p: Power) -> LocalizationResult:
    if p == 0:
        return LocalizationResult.at_power(0, c.alpha_plus - c.alpha_minus)
    if p == 1:
        return LocalizationResult.at_power(1, -(c.alpha_plus + c.alpha_minus + 2 * c.chi))
    if p == 3:
        return LocalizationResult.at_power(3, 0)
    raise ValueError(f"power p must be 0, 1 or 3, got {p}")


def loc_extremal(comp: ExtremalComponent, side: Side, p: Power) -> LocalizationResult:
    if side not in ("min", "max"):
        raise ValueError(f"side must be 'min' or 'max', got {side!r}")
    sign = 1 if side == "min" else -1
    if p == 0:
        if isinstance(comp, Point):
            v = sign
        elif isinstance(comp, Curve):
            v = -sign * comp.c1N
        else:
            v = sign * comp.c1N_sq
    elif p == 1:
        if isinstance(comp, Point):
            v = 3
        elif isinstance(comp, Curve):
            v = CURVE_C1 - comp.c1N
        else:
            v = -comp.c1F_dot_c1N
    elif p == 3:
        if isinstance(comp, Point):
            v = 27
        elif isinstance(comp, Curve):
            v = 12 * CURVE_C1 + 4 * comp.c1N
        else:
            v = 3 * comp.degree + comp.c1N_sq + 3 * comp.c1F_dot_c1N
    else:
        raise ValueError(f"power p must be 0, 1 or 3, got {p}")
    return LocalizationResult.at_power(p, v)


def localization_total(config: Configuration, p: Power) -> Fraction:
    """Global integral of (c1^{S1})^p: the lambda^(p-3) coefficient summed over components."""
    total = loc_extremal(config.min, "min", p).value(p) + loc_extremal(config.max, "max", p).value(p)
    for c in config.interior_curves:
        total += loc_interior_curve(c, p).value(p)
    total += config.b * loc_point(TYPE_12, p).value(p)
    total += config.c * loc_point(TYPE_21, p).value(p)
    return total


def anticanonical_degree(config: Configuration) -> int:
    value = localization_total(config, 3)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral anticanonical degree {value}")
    return int(value)


def localization_consistency(config: Configuration) -> bool:
    return localization_total(config, 0) == 0 and localization_total(config, 1) == 0


def binomial_count_check(data: Union[Configuration, Sequence[int]]) -> bool:
    """True iff the index counts (N0, N1, N2, N3) of isolated points are (1, 3, 3, 1)."""
    if isinstance(data, Configuration):
        if not data.isolated_only:
            raise ValueError("binomial count check needs a configuration of isolated points only")
        counts = (1, data.b, data.c, 1)
    else:
        counts = tuple(data)
    return tuple(counts) == (1, 3, 3, 1)


def isolated_lefschetz_sum(counts: Sequence[int]) -> RationalFunction:
    """Lefschetz sum of N_k isolated points of index 2k (k = 0..3)."""
    total = RationalFunction(0)
    for k, n in enumerate(counts):
        total = total + lefschetz_point(WeightType(k, 0, 3 - k)) * n
    return total


def isolated_anticanonical_degree(counts: Sequence[int]) -> int:
    return int(sum(n * loc_point(WeightType(k, 0, 3 - k), 3).deg_0 for k, n in enumerate(counts)))


# ledger

@dataclass(frozen=True)
class LedgerRow:
    component: str
    lefschetz: RationalFunction
    localization: LocalizationResult


@dataclass(frozen=True)
class ContributionLedger:
    rows: tuple[LedgerRow, ...]
    lefschetz_total: RationalFunction
    localization_total: LocalizationResult


def _loc_all(pieces: Iterable[LocalizationResult]) -> LocalizationResult:
    total = LocalizationResult()
    for piece in pieces:
        total = total + piece
    return total


def contribution_ledger(config: Configuration) -> ContributionLedger:
    rows: list[LedgerRow] = []
    for side, comp in (("min", config.min), ("max", config.max)):
        rows.append(
            LedgerRow(
                f"{side}:{comp.kind}",
                lefschetz_extremal(comp, side),
                _loc_all(loc_extremal(comp, side, p) for p in (0, 1, 3)),
            )
        )
    for i, c in enumerate(config.interior_curves, 1):
        rows.append(
            LedgerRow(
                f"curve{i}:g={c.genus}",
                lefschetz_interior_curve(c),
                _loc_all(loc_interior_curve(c, p) for p in (0, 1, 3)),
            )
        )
    for count, w, label in ((config.b, TYPE_12, "points(1,2)"), (config.c, TYPE_21, "points(2,1)")):
        if count:
            rows.append(
                LedgerRow(
                    f"{label}x{count}",
                    lefschetz_point(w) * count,
                    _loc_all(loc_point(w, p) for p in (0, 1, 3)).scaled(count),
                )
            )
    lef = RationalFunction(0)
    for r in rows:
        lef = lef + r.lefschetz
    return ContributionLedger(tuple(rows), lef, _loc_all(r.localization for r in rows))
