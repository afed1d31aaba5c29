"""Multilinear pseudo-Boolean polynomials.

A polynomial over K binary variables is stored as a sparse map from monomial
bitmask to coefficient; bit ``i`` of a mask means ``x_i`` is a factor of the
monomial and mask ``0`` is the constant term.  Because ``x_i**2 == x_i`` on
{0, 1}, every product collapses back to this form (monomials combine by
bitwise OR).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import DegenerateRangeError, InputDomainError

PRUNE_THRESHOLD = 1e-15

__all__ = [
    "MultilinearPoly",
    "RescaleMode",
    "evaluate",
    "multiply",
    "power",
    "from_point_values",
    "rescale",
    "rescale_values",
    "zeta_transform",
    "mobius_transform",
]


class RescaleMode(enum.Enum):
    MAXIMISE = "max"
    MINIMISE = "min"
    ROOT_FIND = "root"

    @classmethod
    def parse(cls, value: "RescaleMode | str") -> "RescaleMode":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {
            "max": cls.MAXIMISE, "maximise": cls.MAXIMISE, "maximize": cls.MAXIMISE,
            "min": cls.MINIMISE, "minimise": cls.MINIMISE, "minimize": cls.MINIMISE,
            "root": cls.ROOT_FIND, "rootfind": cls.ROOT_FIND, "root_find": cls.ROOT_FIND,
        }
        try:
            return aliases[key]
        except KeyError:
            raise InputDomainError(f"unknown rescale mode {value!r}") from None


def _check_num_vars(num_vars: int) -> int:
    if not isinstance(num_vars, (int, np.integer)) or num_vars < 1:
        raise InputDomainError(f"num_vars must be a positive integer, got {num_vars!r}")
    return int(num_vars)


@dataclass(frozen=True, eq=False)
class MultilinearPoly:
    """Canonical multilinear polynomial ``sum_S coeffs[S] * prod_{i in S} x_i``.

    Coefficients with magnitude at or below ``PRUNE_THRESHOLD`` are dropped on
    construction, so two polynomials describing the same function compare
    equal coefficient by coefficient.
    """

    num_vars: int
    coeffs: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        k = _check_num_vars(self.num_vars)
        limit = 1 << k
        clean: dict[int, float] = {}
        for mask, value in self.coeffs.items():
            mask = int(mask)
            if not 0 <= mask < limit:
                raise InputDomainError(f"monomial mask {mask} out of range for K={k}")
            value = float(value)
            if not np.isfinite(value):
                raise InputDomainError(f"non-finite coefficient for mask {mask}")
            if abs(value) > PRUNE_THRESHOLD:
                clean[mask] = clean.get(mask, 0.0) + value
        object.__setattr__(self, "num_vars", k)
        object.__setattr__(self, "coeffs", MappingProxyType(dict(sorted(clean.items()))))

    # construction helpers

    @classmethod
    def constant(cls, num_vars: int, value: float) -> "MultilinearPoly":
        return cls(num_vars, {0: value})

    @classmethod
    def monomial(cls, num_vars: int, variables: Iterable[int], coeff: float = 1.0) -> "MultilinearPoly":
        mask = 0
        for i in variables:
            if not 0 <= i < num_vars:
                raise InputDomainError(f"variable index {i} out of range for K={num_vars}")
            mask |= 1 << i
        return cls(num_vars, {mask: coeff})

    @classmethod
    def from_dense(cls, coeffs: np.ndarray) -> "MultilinearPoly":
        coeffs = np.asarray(coeffs, dtype=float)
        k = _num_vars_for_length(coeffs.size)
        return cls(k, {int(m): float(c) for m, c in enumerate(coeffs) if c != 0.0})

    # views

    def to_dense(self) -> np.ndarray:
        out = np.zeros(1 << self.num_vars)
        for mask, value in self.coeffs.items():
            out[mask] = value
        return out

    def point_values(self) -> np.ndarray:
        """All ``2**K`` function values, index ``z`` = assignment bitmask."""
        return zeta_transform(self.to_dense())

    def degree(self) -> int:
        return max((m.bit_count() for m in self.coeffs), default=0)

    def terms_by_order(self) -> list[tuple[int, float]]:
        """Monomials sorted by (order, mask)."""
        return sorted(self.coeffs.items(), key=lambda t: (t[0].bit_count(), t[0]))

    def __getitem__(self, mask: int) -> float:
        return self.coeffs.get(mask, 0.0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __call__(self, assignment: int) -> float:
        return evaluate(self, assignment)

    # arithmetic

    def __add__(self, other: "MultilinearPoly | float") -> "MultilinearPoly":
        if not isinstance(other, MultilinearPoly):
            other = MultilinearPoly.constant(self.num_vars, float(other))
        _check_same_vars(self, other)
        out = dict(self.coeffs)
        for mask, value in other.coeffs.items():
            out[mask] = out.get(mask, 0.0) + value
        return MultilinearPoly(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultilinearPoly":
        return self.scale(-1.0)

    def __sub__(self, other: "MultilinearPoly | float") -> "MultilinearPoly":
        return self + (-other)

    def __rsub__(self, other: float) -> "MultilinearPoly":
        return (-self) + other

    def __mul__(self, other: "MultilinearPoly | float") -> "MultilinearPoly":
        if isinstance(other, MultilinearPoly):
            return multiply(self, other)
        return self.scale(float(other))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultilinearPoly":
        return power(self, n)

    def scale(self, factor: float) -> "MultilinearPoly":
        return MultilinearPoly(self.num_vars, {m: c * factor for m, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash((self.num_vars, tuple(self.coeffs.items())))

    def allclose(self, other: "MultilinearPoly", atol: float = 1e-12) -> bool:
        _check_same_vars(self, other)
        return bool(np.max(np.abs(self.to_dense() - other.to_dense())) <= atol)

    def __repr__(self) -> str:
        terms = ", ".join(f"{_mask_label(m)}: {c:.6g}" for m, c in self.terms_by_order())
        return f"MultilinearPoly(K={self.num_vars}, {{{terms}}})"


def _mask_label(mask: int) -> str:
    if mask == 0:
        return "1"
    return "*".join(f"x{i}" for i in range(mask.bit_length()) if mask >> i & 1)


def _check_same_vars(p: MultilinearPoly, q: MultilinearPoly) -> None:
    if p.num_vars != q.num_vars:
        raise InputDomainError(f"num_vars mismatch: {p.num_vars} vs {q.num_vars}")


def _num_vars_for_length(length: int) -> int:
    if length < 2 or length & (length - 1):
        raise InputDomainError(f"length must be a power of two >= 2, got {length}")
    return length.bit_length() - 1


def evaluate(p: MultilinearPoly, assignment: int) -> float:
    """Value of ``p`` at the assignment whose bit ``i`` is ``x_i``."""
    assignment = int(assignment)
    if not 0 <= assignment < (1 << p.num_vars):
        raise InputDomainError(f"assignment {assignment} out of range for K={p.num_vars}")
    return float(sum(c for m, c in p.coeffs.items() if m & assignment == m))


def multiply(p: MultilinearPoly, q: MultilinearPoly) -> MultilinearPoly:
    """Product with idempotent reduction: monomial(S) * monomial(T) = monomial(S | T)."""
    _check_same_vars(p, q)
    if not p.coeffs or not q.coeffs:
        return MultilinearPoly(p.num_vars)
    pm = np.fromiter(p.coeffs.keys(), dtype=np.int64, count=len(p))
    pc = np.fromiter(p.coeffs.values(), dtype=float, count=len(p))
    qm = np.fromiter(q.coeffs.keys(), dtype=np.int64, count=len(q))
    qc = np.fromiter(q.coeffs.values(), dtype=float, count=len(q))
    masks = (pm[:, None] | qm[None, :]).ravel()
    prods = (pc[:, None] * qc[None, :]).ravel()
    acc = np.bincount(masks, weights=prods, minlength=1 << p.num_vars)
    nz = np.flatnonzero(acc)
    return MultilinearPoly(p.num_vars, dict(zip(nz.tolist(), acc[nz].tolist())))


def power(p: MultilinearPoly, n: int) -> MultilinearPoly:
    """``p**n`` by iterated multiplication, ``p**n = p**(n-1) * p``.

    ``n == 0`` is the degenerate case and yields the constant 1.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise InputDomainError(f"power must be a non-negative integer, got {n!r}")
    if n == 0:
        return MultilinearPoly.constant(p.num_vars, 1.0)
    result = p
    for _ in range(int(n) - 1):
        result = multiply(result, p)
    return result


def zeta_transform(coeffs: np.ndarray) -> np.ndarray:
    """Subset-sum transform: ``out[z] = sum_{S subset of z} coeffs[S]``."""
    out = np.array(coeffs, dtype=float, copy=True)
    k = _num_vars_for_length(out.size)
    for i in range(k):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return out


def mobius_transform(values: np.ndarray) -> np.ndarray:
    """Inverse of :func:`zeta_transform`: ``c_S = sum_{T subset of S} (-1)^|S-T| v[T]``."""
    out = np.array(values, dtype=float, copy=True)
    k = _num_vars_for_length(out.size)
    for i in range(k):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return out


def from_point_values(values) -> MultilinearPoly:
    """Unique multilinear interpolant of a table of ``2**K`` point values."""
    values = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(values)):
        raise InputDomainError("point values must be finite")
    return MultilinearPoly.from_dense(mobius_transform(values))


def _rescale_affine(mode: RescaleMode, f_min: float, f_max: float) -> tuple[float, float]:
    """(offset, slope) such that g = offset + slope * f for the linear modes."""
    span = f_max - f_min
    if not span > 0:
        raise DegenerateRangeError(f"need f_max > f_min, got f_min={f_min}, f_max={f_max}")
    if mode is RescaleMode.MAXIMISE:
        return -f_min / span, 1.0 / span
    return f_max / span, -1.0 / span


def _root_scale(f_min: float, f_max: float) -> float:
    scale = max(f_min * f_min, f_max * f_max)
    if not scale > 0:
        raise DegenerateRangeError("root finding needs max(f_min**2, f_max**2) > 0")
    return scale


def rescale(f: MultilinearPoly, mode: RescaleMode | str, f_min: float, f_max: float) -> MultilinearPoly:
    """Map ``f`` to ``g`` with ``g(x_*) = 1`` at the sought extremum or root.

    MAXIMISE: (f - f_min) / (f_max - f_min)
    MINIMISE: (f_max - f) / (f_max - f_min)
    ROOT_FIND: 1 - f**2 / max(f_min**2, f_max**2)
    """
    mode = RescaleMode.parse(mode)
    if mode is RescaleMode.ROOT_FIND:
        scale = _root_scale(f_min, f_max)
        return 1.0 - multiply(f, f).scale(1.0 / scale)
    offset, slope = _rescale_affine(mode, f_min, f_max)
    return f.scale(slope) + offset


def rescale_values(values, mode: RescaleMode | str, f_min: float, f_max: float) -> np.ndarray:
    """Pointwise counterpart of :func:`rescale` on a value table."""
    mode = RescaleMode.parse(mode)
    values = np.asarray(values, dtype=float)
    if mode is RescaleMode.ROOT_FIND:
        return 1.0 - values**2 / _root_scale(f_min, f_max)
    offset, slope = _rescale_affine(mode, f_min, f_max)
    return offset + slope * values
