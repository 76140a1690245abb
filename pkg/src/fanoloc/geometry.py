"""Fixed-point data, reduced-space lattices and the Euler-class flow."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import jsonschema

__all__ = [
    "WeightType",
    "Point",
    "Curve",
    "Surface",
    "ExtremalComponent",
    "InteriorCurve",
    "Configuration",
    "ReducedSpace",
    "DivisorClass",
    "P2",
    "P1xP1",
    "F1",
    "REDUCED_SPACES",
    "ClassExcluded",
    "NonRepresentableClass",
    "NoIrreducibleCurve",
    "ConfigError",
    "intersect",
    "adjunction_genus",
    "normal_degree",
    "euler_flow",
    "extremum_euler_square",
    "euler_jump_check",
    "config_from_dict",
    "config_to_dict",
    "load_config",
]


class ClassExcluded(ValueError):
    """A divisor class that cannot carry an irreducible interior curve."""


class NonRepresentableClass(ClassExcluded):
    pass


class NoIrreducibleCurve(ClassExcluded):
    pass


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class WeightType:
    nu_minus: int
    nu_zero: int
    nu_plus: int

    def __post_init__(self) -> None:
        if min(self.nu_minus, self.nu_zero, self.nu_plus) < 0:
            raise ValueError("weight counts must be nonnegative")
        if self.nu_minus + self.nu_zero + self.nu_plus != 3:
            raise ValueError("weight counts must sum to 3")

    def weights(self) -> tuple[int, ...]:
        """Tangent weights in {-1, 0, +1}, negative ones first."""
        return (-1,) * self.nu_minus + (0,) * self.nu_zero + (1,) * self.nu_plus


# weight types of the two kinds of interior isolated points
TYPE_12 = WeightType(1, 0, 2)
TYPE_21 = WeightType(2, 0, 1)


@dataclass(frozen=True)
class Point:
    kind = "point"


@dataclass(frozen=True)
class Curve:
    """Rational extremal curve with normal-bundle Chern number ``c1N``."""

    c1N: int
    kind = "curve"


@dataclass(frozen=True)
class Surface:
    """Del Pezzo extremal surface."""

    degree: int
    c1F_dot_c1N: int
    c1N_sq: int
    picard_rank: int
    kind = "surface"

    def __post_init__(self) -> None:
        if not 1 <= self.degree <= 9:
            raise ValueError(f"del Pezzo degree must lie in [1, 9], got {self.degree}")
        if self.picard_rank != 10 - self.degree:
            raise ValueError(
                f"del Pezzo surface of degree {self.degree} has Picard rank {10 - self.degree}, "
                f"got {self.picard_rank}"
            )


ExtremalComponent = Union[Point, Curve, Surface]

_KIND_ORDER = {"point": 0, "curve": 1, "surface": 2}


def component_sort_key(comp: ExtremalComponent) -> tuple:
    if isinstance(comp, Point):
        return (0,)
    if isinstance(comp, Curve):
        return (1, comp.c1N)
    return (2, comp.degree, comp.c1F_dot_c1N, comp.c1N_sq, comp.picard_rank)


@dataclass(frozen=True)
class DivisorClass:
    coords: tuple[int, ...]

    def __init__(self, coords: Iterable[int]) -> None:
        object.__setattr__(self, "coords", tuple(int(x) for x in coords))

    def __add__(self, other: DivisorClass) -> DivisorClass:
        _same_rank(self, other)
        return DivisorClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        _same_rank(self, other)
        return DivisorClass(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(-a for a in self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.coords) + ")"


def _same_rank(a: DivisorClass, b: DivisorClass) -> None:
    if len(a.coords) != len(b.coords):
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def _as_class(x: Union[DivisorClass, Sequence[int]]) -> DivisorClass:
    return x if isinstance(x, DivisorClass) else DivisorClass(x)


@dataclass(frozen=True)
class ReducedSpace:
    """Intersection lattice of a del Pezzo reduced space."""

    name: str
    label: str
    pairing: tuple[tuple[int, ...], ...]
    c1: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.c1)

    @property
    def degree(self) -> int:
        return self.dot(self.c1, self.c1)

    @property
    def picard_rank(self) -> int:
        return self.rank

    def dot(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Raw-tuple pairing without validation (hot path)."""
        g = self.pairing
        return sum(a[i] * g[i][j] * b[j] for i in range(len(a)) for j in range(len(b)) if g[i][j])

    def as_surface(self, e: Sequence[int]) -> Surface:
        """Extremal surface equal to this space, with normal class ``e``."""
        return Surface(
            degree=self.degree,
            c1F_dot_c1N=self.dot(self.c1, e),
            c1N_sq=self.dot(e, e),
            picard_rank=self.picard_rank,
        )


P2 = ReducedSpace("P2", "projective plane", ((1,),), (3,))
P1xP1 = ReducedSpace("P1xP1", "quadric surface", ((0, 1), (1, 0)), (2, 2))
F1 = ReducedSpace("F1", "plane blown up at a point", ((0, 1), (1, -1)), (3, 2))
REDUCED_SPACES = {s.name: s for s in (P2, P1xP1, F1)}


def intersect(space: ReducedSpace, A, B) -> int:
    A, B = _as_class(A), _as_class(B)
    if len(A) != space.rank or len(B) != space.rank:
        raise ValueError(f"class rank does not match {space.name} (rank {space.rank})")
    return space.dot(A.coords, B.coords)


def adjunction_genus(space: ReducedSpace, C) -> int:
    """Genus of an irreducible curve in class ``C``: 1 + (C.C - c1.C)/2."""
    C = _as_class(C)
    if C.is_zero():
        raise ValueError("adjunction needs a nonzero class")
    twice = 2 + intersect(space, C, C) - intersect(space, space.c1, C)
    if twice % 2:
        raise NonRepresentableClass(f"non-representable class {C} on {space.name}")
    g = twice // 2
    if g < 0:
        raise NoIrreducibleCurve(f"no irreducible curve in class {C} on {space.name}")
    return g


def normal_degree(space: ReducedSpace, C) -> int:
    C = _as_class(C)
    return intersect(space, C, C)


def euler_flow(e_min, classes: Iterable) -> DivisorClass:
    e = _as_class(e_min)
    for c in classes:
        e = e + _as_class(c)
    return e


def extremum_euler_square(component: ExtremalComponent) -> Optional[int]:
    """Required e.e next to an extremum; None for surfaces (no constraint)."""
    if isinstance(component, Point):
        return 1
    if isinstance(component, Curve):
        return -component.c1N
    return None


@dataclass(frozen=True)
class InteriorCurve:
    genus: int
    alpha_plus: int
    alpha_minus: int
    divisor_class: Optional[DivisorClass] = None

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")

    @property
    def chi(self) -> int:
        return 1 - self.genus


def euler_jump_check(k: int, l: int, curves: Sequence[InteriorCurve], e_before, e_after, space: ReducedSpace) -> bool:
    e_before, e_after = _as_class(e_before), _as_class(e_after)
    lhs = intersect(space, e_after, e_after) - intersect(space, e_before, e_before)
    rhs = k - l + sum(c.alpha_plus - c.alpha_minus for c in curves)
    return lhs == rhs


@dataclass(frozen=True)
class Configuration:
    min: ExtremalComponent
    max: ExtremalComponent
    interior_curves: tuple[InteriorCurve, ...] = ()
    b: int = 0
    c: int = 0
    reduced_space: Optional[ReducedSpace] = None
    euler_min: Optional[DivisorClass] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "interior_curves", tuple(self.interior_curves))
        if self.b < 0 or self.c < 0:
            raise ValueError("interior point counts must be nonnegative")

    @property
    def a(self) -> int:
        return len(self.interior_curves)

    @property
    def isolated_only(self) -> bool:
        return isinstance(self.min, Point) and isinstance(self.max, Point) and not self.interior_curves

    def euler_max(self) -> Optional[DivisorClass]:
        if self.euler_min is None:
            return None
        classes = [c.divisor_class for c in self.interior_curves]
        if any(c is None for c in classes):
            return None
        return euler_flow(self.euler_min, classes)

    def structural_issues(self) -> list[str]:
        """Violations of adjunction, the normal-degree relation and Euler squares.

        Only checks what the configuration carries enough data for.
        """
        space = self.reduced_space
        issues: list[str] = []
        if space is None:
            return issues
        for i, curve in enumerate(self.interior_curves):
            C = curve.divisor_class
            if C is None:
                continue
            if len(C) != space.rank:
                issues.append(f"curve {i}: class {C} has wrong rank for {space.name}")
                continue
            if any(x < 0 for x in C.coords) or C.is_zero():
                issues.append(f"curve {i}: class {C} is not effective")
                continue
            try:
                g = adjunction_genus(space, C)
            except ClassExcluded as exc:
                issues.append(f"curve {i}: {exc}")
                continue
            if g != curve.genus:
                issues.append(f"curve {i}: genus {curve.genus} but adjunction gives {g}")
            if curve.alpha_plus + curve.alpha_minus != normal_degree(space, C):
                issues.append(
                    f"curve {i}: alpha_plus + alpha_minus = {curve.alpha_plus + curve.alpha_minus} "
                    f"but C.C = {normal_degree(space, C)}"
                )
        e_lo, e_hi = self.euler_min, self.euler_max()
        for side, comp, e in (("min", self.min, e_lo), ("max", self.max, e_hi)):
            if e is None:
                continue
            if len(e) != space.rank:
                issues.append(f"{side}: Euler class {e} has wrong rank for {space.name}")
                continue
            want = extremum_euler_square(comp)
            sq = intersect(space, e, e)
            if want is not None and sq != want:
                issues.append(f"{side}: e.e = {sq} but the extremum requires {want}")
            if isinstance(comp, Surface):
                expect = space.as_surface(e.coords)
                if (comp.c1F_dot_c1N, comp.c1N_sq) != (expect.c1F_dot_c1N, expect.c1N_sq):
                    issues.append(
                        f"{side}: surface data (c1F.c1N, c1N^2) = ({comp.c1F_dot_c1N}, {comp.c1N_sq}) "
                        f"but e = {e} gives ({expect.c1F_dot_c1N}, {expect.c1N_sq})"
                    )
        return issues


# JSON interface

_COMPONENT_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["point", "curve", "surface"]},
        "c1N": {"type": "integer"},
        "degree": {"type": "integer"},
        "c1F_dot_c1N": {"type": "integer"},
        "c1N_sq": {"type": "integer"},
        "picard_rank": {"type": "integer"},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "curve"}}}, "then": {"required": ["c1N"]}},
        {
            "if": {"properties": {"kind": {"const": "surface"}}},
            "then": {"required": ["degree", "c1F_dot_c1N", "c1N_sq", "picard_rank"]},
        },
    ],
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["min", "max"],
    "properties": {
        "min": _COMPONENT_SCHEMA,
        "max": _COMPONENT_SCHEMA,
        "interior_curves": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["genus", "alpha_plus", "alpha_minus"],
                "properties": {
                    "genus": {"type": "integer", "minimum": 0},
                    "alpha_plus": {"type": "integer"},
                    "alpha_minus": {"type": "integer"},
                    "class": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
        "b": {"type": "integer", "minimum": 0},
        "c": {"type": "integer", "minimum": 0},
        "reduced_space": {"enum": sorted(REDUCED_SPACES)},
        "euler_min": {"type": "array", "items": {"type": "integer"}},
    },
}


def _component_from_dict(d: dict) -> ExtremalComponent:
    kind = d["kind"]
    if kind == "point":
        return Point()
    if kind == "curve":
        return Curve(d["c1N"])
    return Surface(d["degree"], d["c1F_dot_c1N"], d["c1N_sq"], d["picard_rank"])


def _component_to_dict(comp: ExtremalComponent) -> dict:
    if isinstance(comp, Point):
        return {"kind": "point"}
    if isinstance(comp, Curve):
        return {"kind": "curve", "c1N": comp.c1N}
    return {
        "kind": "surface",
        "degree": comp.degree,
        "c1F_dot_c1N": comp.c1F_dot_c1N,
        "c1N_sq": comp.c1N_sq,
        "picard_rank": comp.picard_rank,
    }


def config_from_dict(data: dict) -> Configuration:
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"schema violation at {where}: {exc.message}") from None
    try:
        curves = tuple(
            InteriorCurve(
                c["genus"],
                c["alpha_plus"],
                c["alpha_minus"],
                DivisorClass(c["class"]) if "class" in c else None,
            )
            for c in data.get("interior_curves", [])
        )
        space = REDUCED_SPACES[data["reduced_space"]] if "reduced_space" in data else None
        e_min = DivisorClass(data["euler_min"]) if "euler_min" in data else None
        return Configuration(
            min=_component_from_dict(data["min"]),
            max=_component_from_dict(data["max"]),
            interior_curves=curves,
            b=data.get("b", 0),
            c=data.get("c", 0),
            reduced_space=space,
            euler_min=e_min,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def config_to_dict(config: Configuration) -> dict:
    out: dict = {"min": _component_to_dict(config.min), "max": _component_to_dict(config.max)}
    curves = []
    for c in config.interior_curves:
        d = {"genus": c.genus, "alpha_plus": c.alpha_plus, "alpha_minus": c.alpha_minus}
        if c.divisor_class is not None:
            d["class"] = list(c.divisor_class.coords)
        curves.append(d)
    out["interior_curves"] = curves
    out["b"] = config.b
    out["c"] = config.c
    if config.reduced_space is not None:
        out["reduced_space"] = config.reduced_space.name
    if config.euler_min is not None:
        out["euler_min"] = list(config.euler_min.coords)
    return out


def load_config(path: Union[str, Path]) -> Configuration:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return config_from_dict(data)
