"""Hodge numbers read off from fixed-point data."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Configuration, Curve, ExtremalComponent, Point, Surface

__all__ = ["HodgeResult", "InconsistentConfiguration", "hodge_numbers", "picard_rank", "betti_numbers"]


class InconsistentConfiguration(ValueError):
    pass


@dataclass(frozen=True)
class HodgeResult:
    h11: int
    h12: int
    h11_alt: int
    torsion_free: bool = True

    @property
    def consistent(self) -> bool:
        return self.h11 == self.h11_alt


def _h11(comp: ExtremalComponent) -> int:
    if isinstance(comp, Point):
        return 0
    if isinstance(comp, Curve):
        return 1
    return comp.picard_rank


def _shifted(comp: ExtremalComponent) -> int:
    # h^{1-n,1-n} with n the codimension: only a surface has a class in that degree
    return 1 if isinstance(comp, Surface) else 0


def hodge_numbers(config: Configuration) -> HodgeResult:
    a = config.a
    h11 = _shifted(config.max) + _h11(config.min) + a + config.b
    h11_alt = _h11(config.max) + _shifted(config.min) + a + config.c
    h12 = sum(c.genus for c in config.interior_curves)
    return HodgeResult(h11=h11, h12=h12, h11_alt=h11_alt)


def picard_rank(config: Configuration) -> int:
    h = hodge_numbers(config)
    if not h.consistent:
        raise InconsistentConfiguration(f"h11 = {h.h11} but the second formula gives {h.h11_alt}")
    return h.h11


def betti_numbers(config: Configuration) -> dict[str, int]:
    h = hodge_numbers(config)
    return {"b2": h.h11, "b3": 2 * h.h12}
