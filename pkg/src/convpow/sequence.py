"""Finitely supported complex sequences on Z.

A :class:`Sequence` stores an ``offset`` (index of its first coefficient) and a
trimmed complex coefficient array.  Everything here is a pure function of
immutable values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence as _Seq

import numpy as np

from .errors import ParseError

INFINITY = math.inf

# below min(len_a, len_b) <= FFT_THRESHOLD convolution is done by direct summation
FFT_THRESHOLD = 32
TRIM_THRESHOLD = 1e-300


def _trim(offset: int, coeffs: np.ndarray) -> tuple[int, np.ndarray]:
    nz = np.flatnonzero(np.abs(coeffs) > TRIM_THRESHOLD)
    if nz.size == 0:
        raise ValueError("a Sequence must have at least one nonzero coefficient")
    lo, hi = nz[0], nz[-1]
    return offset + int(lo), coeffs[lo : hi + 1]


@dataclass(frozen=True, eq=False)
class Sequence:
    """Finitely supported complex sequence ``{offset + j: coeffs[j]}``.

    Leading and trailing coefficients of modulus <= 1e-300 are trimmed on
    construction, so the first and last stored entries are always nonzero.
    """

    offset: int
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128).ravel()
        if arr.size == 0:
            raise ValueError("a Sequence must have at least one coefficient")
        offset, arr = _trim(int(self.offset), arr)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_mapping(cls, mapping: dict[int, complex]) -> "Sequence":
        """Build from ``{index: value}``; unspecified indices are zero."""
        if not mapping:
            raise ValueError("empty mapping")
        lo, hi = min(mapping), max(mapping)
        arr = np.zeros(hi - lo + 1, dtype=np.complex128)
        for k, v in mapping.items():
            arr[k - lo] = v
        return cls(lo, arr)

    @classmethod
    def delta(cls, index: int = 0) -> "Sequence":
        return cls(index, np.ones(1))

    def __len__(self) -> int:
        return self.coeffs.size

    @property
    def last(self) -> int:
        return self.offset + self.coeffs.size - 1

    @property
    def support(self) -> range:
        return range(self.offset, self.last + 1)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.last + 1)

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    def __getitem__(self, index: int) -> complex:
        j = index - self.offset
        if 0 <= j < self.coeffs.size:
            return complex(self.coeffs[j])
        return 0j

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Values on indices ``lo..hi`` inclusive (zero outside the support)."""
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        a, b = max(lo, self.offset), min(hi, self.last)
        if a <= b:
            out[a - lo : b - lo + 1] = self.coeffs[a - self.offset : b - self.offset + 1]
        return out

    def scale(self, c: complex) -> "Sequence":
        return Sequence(self.offset, self.coeffs * c)

    def allclose(self, other: "Sequence", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        lo, hi = min(self.offset, other.offset), max(self.last, other.last)
        return bool(np.allclose(self.window(lo, hi), other.window(lo, hi), rtol=rtol, atol=atol))

    def __repr__(self) -> str:
        body = ", ".join(f"{self.offset + j}: {complex(c):.6g}" for j, c in enumerate(self.coeffs[:8]))
        more = ", ..." if self.coeffs.size > 8 else ""
        return f"Sequence({{{body}{more}}})"

    # serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "offset": self.offset,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Sequence":
        try:
            offset = data["offset"]
            raw = data["coeffs"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"expected an object with 'offset' and 'coeffs': {exc}") from None
        if isinstance(offset, bool) or not isinstance(offset, int):
            raise ParseError("'offset' must be an integer")
        if not isinstance(raw, list) or not raw:
            raise ParseError("'coeffs' must be a nonempty list")
        vals = []
        for entry in raw:
            if isinstance(entry, (int, float)) and not isinstance(entry, bool):
                re, im = entry, 0.0
            elif isinstance(entry, list) and len(entry) == 2 and all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry
            ):
                re, im = entry
            else:
                raise ParseError(f"malformed coefficient {entry!r}; expected [re, im]")
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ParseError("non-finite coefficient")
            vals.append(complex(re, im))
        try:
            return cls(offset, np.array(vals))
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Sequence":
        def _reject(name):
            raise ParseError(f"non-finite number {name} not allowed")

        try:
            data = json.loads(text, parse_constant=_reject)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> "Sequence":
        return cls.from_json(Path(path).read_text())


# arithmetic -------------------------------------------------------------


def _fft_convolve(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    size = x.size + y.size - 1
    nfft = 1 << (size - 1).bit_length()
    out = np.fft.ifft(np.fft.fft(x, nfft) * np.fft.fft(y, nfft))
    return out[:size]


def convolve_arrays(x: np.ndarray, y: np.ndarray, method: str = "auto") -> np.ndarray:
    """Full discrete convolution of two coefficient arrays.

    ``method`` is ``"direct"``, ``"fft"`` or ``"auto"`` (direct when the shorter
    input has at most ``FFT_THRESHOLD`` entries).
    """
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if method == "auto":
        method = "direct" if min(x.size, y.size) <= FFT_THRESHOLD else "fft"
    if method == "direct":
        return np.convolve(x, y)
    if method == "fft":
        return _fft_convolve(x, y)
    raise ValueError(f"unknown convolution method {method!r}")


def convolve(a: Sequence, b: Sequence, method: str = "auto") -> Sequence:
    """``(a * b)_l = sum_k a_{l-k} b_k``."""
    return Sequence(a.offset + b.offset, convolve_arrays(a.coeffs, b.coeffs, method))


def power(a: Sequence, n: int, method: str = "binary") -> Sequence:
    """n-fold convolution power ``a^{*n}`` for ``n >= 1``.

    ``method="binary"`` squares repeatedly (about log2(n) convolutions, FFT for
    long operands); ``method="iterate"`` multiplies by ``a`` n-1 times, which
    for short stencils stays on the direct-summation path.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"power requires an integer n >= 1, got {n!r}")
    n = int(n)
    if method == "iterate":
        out = a
        for _ in range(n - 1):
            out = convolve(out, a)
        return out
    if method != "binary":
        raise ValueError(f"unknown power method {method!r}")
    result = None
    base = a
    while True:
        if n & 1:
            result = base if result is None else convolve(result, base)
        n >>= 1
        if not n:
            return result
        base = convolve(base, base)


def powers(a: Sequence, ns: Iterable[int]) -> Iterator[tuple[int, Sequence]]:
    """Yield ``(n, a^{*n})`` for increasing ``ns`` by repeated multiplication by ``a``.

    Each step convolves with the short stencil ``a``, so the direct path is used
    and tail values keep relative accuracy (no FFT noise floor).
    """
    targets = sorted(set(int(n) for n in ns))
    if targets and targets[0] < 1:
        raise ValueError("convolution powers start at n = 1")
    k, cur = 1, a
    for n in targets:
        while k < n:
            cur = convolve(cur, a)
            k += 1
        yield n, cur


def lp_norm(values: np.ndarray, p: float) -> float:
    p = _check_p(p)
    mod = np.abs(np.asarray(values))
    if mod.size == 0:
        return 0.0
    if p == INFINITY:
        return float(mod.max())
    if p == 1:
        return float(mod.sum())
    top = mod.max()
    if top == 0:
        return 0.0
    return float(top * np.sum((mod / top) ** p) ** (1.0 / p))


def _check_p(p: float) -> float:
    p = float(p)
    if not (p >= 1):
        raise ValueError(f"l^p norm needs p in [1, inf], got {p!r}")
    return p


def norm(a: Sequence, p: float) -> float:
    """l^p norm over the support; ``p = INFINITY`` gives the max modulus."""
    return lp_norm(a.coeffs, p)


def symbol_eval(a: Sequence, theta):
    """Evaluate ``F_a(e^{i theta}) = sum_l a_l e^{i l theta}`` (Horner in e^{i theta})."""
    theta = np.asarray(theta, dtype=np.float64)
    z = np.exp(1j * theta)
    acc = np.zeros_like(z)
    for c in a.coeffs[::-1]:
        acc = acc * z + c
    out = acc * np.exp(1j * a.offset * theta)
    return complex(out) if out.ndim == 0 else out


def as_sequence(values: _Seq[complex], offset: int = 0) -> Sequence:
    return Sequence(offset, np.asarray(values, dtype=np.complex128))
