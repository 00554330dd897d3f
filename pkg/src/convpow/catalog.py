"""Built-in stencils and random walks, plus file ingestion."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParamOutOfRange
from .sequence import Sequence, as_sequence

SCHEMES = ("o3", "bernoulli", "symmetric-walk", "lax-friedrichs", "file")


def _open_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ParamOutOfRange(f"{name} must lie in (0, 1), got {value!r}")
    return value


def o3(lam: float) -> Sequence:
    """Third-order O3 transport scheme on indices -1..2 (CFL number ``lam``)."""
    lam = _open_unit("lambda", lam)
    return as_sequence(
        [
            lam * (2 - lam) * (lam - 1) / 6,
            (2 - lam) * (1 - lam**2) / 2,
            lam * (2 - lam) * (1 + lam) / 2,
            -lam * (1 - lam**2) / 6,
        ],
        offset=-1,
    )


def bernoulli(p: float) -> Sequence:
    """Law of a Bernoulli(p) step: ``{0: 1-p, 1: p}``."""
    p = _open_unit("p", p)
    return as_sequence([1 - p, p], offset=0)


def symmetric_walk() -> Sequence:
    return as_sequence([0.5, 0.0, 0.5], offset=-1)


def lax_friedrichs(lam: float) -> Sequence:
    """Lax-Friedrichs scheme for transport at speed ``lam``.

    Written in the same convolution convention as :func:`o3`, so the drift at
    kappa = 1 is ``+lam``: ``a_{-1} = (1-lam)/2``, ``a_1 = (1+lam)/2``.
    """
    lam = _open_unit("lambda", lam)
    return as_sequence([(1 - lam) / 2, 0.0, (1 + lam) / 2], offset=-1)


def from_file(path: str | Path) -> Sequence:
    return Sequence.load(path)


@dataclass(frozen=True)
class SchemeSpec:
    name: str
    params: dict = field(default_factory=dict)

    @property
    def resolved(self) -> Sequence:
        return resolve(self.name, **self.params)


def resolve(name: str, **params) -> Sequence:
    """Build a catalog sequence by name (``lam``, ``p`` or ``path`` as needed)."""
    if name == "o3":
        return o3(params.get("lam", 0.5))
    if name == "bernoulli":
        return bernoulli(params.get("p", 0.5))
    if name == "symmetric-walk":
        return symmetric_walk()
    if name == "lax-friedrichs":
        return lax_friedrichs(params.get("lam", 0.5))
    if name == "file":
        if params.get("path") is None:
            raise ValueError("scheme 'file' needs a path")
        return from_file(params["path"])
    raise ValueError(f"unknown scheme {name!r}; choose from {', '.join(SCHEMES)}")
