"""Exact Jacobi spectra, Morse indices and degeneracy instants of CMC Clifford tori.

Radii and thresholds accept ``Fraction``, ``int``, ``str`` ("3/4", "0.49")
or ``float`` (converted exactly).  Exact results come back as ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Union

from . import _core
from ._core import ConvergenceError

RationalLike = Union[Fraction, int, str, float]

__all__ = [
    "ConvergenceError",
    "JacobiEigen",
    "Instant",
    "morse_index",
    "jacobi_spectrum",
    "potential",
    "classify",
    "degeneracy_instants",
    "orbit_dimension",
    "curvature_data",
    "lattice_oracle",
    "fd_smallest",
    "fd_compare",
    "diagram_csv",
]


class JacobiEigen(NamedTuple):
    value: Fraction
    multiplicity: int
    contributors: list


class Instant(NamedTuple):
    kind: str
    level: int
    r_sq: Fraction
    jump: int


def _text(x: RationalLike) -> str:
    if isinstance(x, bool):
        raise TypeError("expected a rational, got bool")
    if isinstance(x, float):
        x = Fraction(x)
    if isinstance(x, (Fraction, int)):
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"
    if isinstance(x, str):
        return x
    raise TypeError(f"expected a rational, got {type(x).__name__}")


def _instants(raw):
    return [Instant(d["kind"], d["level"], Fraction(d["r_sq"]), d["jump"]) for d in raw]


def morse_index(m: int, j: int, r_sq: RationalLike) -> dict:
    return _core.morse_index(m, j, _text(r_sq))


def jacobi_spectrum(m: int, j: int, r_sq: RationalLike, threshold: RationalLike = 0) -> list[JacobiEigen]:
    return [
        JacobiEigen(Fraction(v), mult, [tuple(c) for c in contrib])
        for v, mult, contrib in _core.jacobi_spectrum(m, j, _text(r_sq), _text(threshold))
    ]


def potential(m: int, j: int, r_sq: RationalLike) -> Fraction:
    return Fraction(_core.potential(m, j, _text(r_sq)))


def classify(m: int, j: int, r_sq: RationalLike) -> tuple[str, int]:
    return _core.classify(m, j, _text(r_sq))


def degeneracy_instants(
    m: int,
    j: int,
    max_level: int | None = None,
    r_sq_min: RationalLike | None = None,
    r_sq_max: RationalLike | None = None,
) -> list[Instant]:
    """Instants up to ``max_level``, or inside ``[r_sq_min, r_sq_max]``."""
    if r_sq_min is not None or r_sq_max is not None:
        if r_sq_min is None or r_sq_max is None:
            raise ValueError("give both r_sq_min and r_sq_max")
        return _instants(_core.instants_between(m, j, _text(r_sq_min), _text(r_sq_max)))
    return _instants(_core.instants_to_level(m, j, 8 if max_level is None else max_level))


def orbit_dimension(m: int, j: int) -> int:
    return _core.orbit_dimension(m, j)


def curvature_data(m: int, j: int, r_sq: RationalLike) -> dict:
    return _core.curvature_data(m, j, _text(r_sq))


def lattice_oracle(r_sq: RationalLike, threshold: RationalLike) -> list[tuple[Fraction, int]]:
    return [(Fraction(v), mult) for v, mult in _core.lattice_oracle(_text(r_sq), _text(threshold))]


def fd_smallest(n: int, r_sq: float, k: int) -> list[float]:
    """Smallest ``k`` eigenvalues of the periodic 5-point Laplacian on an n x n grid."""
    return _core.fd_smallest(n, float(r_sq), k)


def fd_compare(r_sq: float, k: int = 9, n_coarse: int = 128, n_fine: int = 256) -> dict:
    return _core.fd_compare(float(r_sq), k, n_coarse, n_fine)


def diagram_csv(
    m: int,
    j: int,
    r_min: RationalLike = "1/10",
    r_max: RationalLike = "19/20",
    samples: int = 200,
    threads: int = 1,
) -> str:
    return _core.diagram_csv(m, j, _text(r_min), _text(r_max), samples, threads)
