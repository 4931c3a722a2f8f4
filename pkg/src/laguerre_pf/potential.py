"""Polynomial potentials V_t(x) = x + sum_k t_k x^k and the parameter set T(cap, ratio)."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable


class ConfigError(ValueError):
    """Malformed potential or run configuration."""


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a real number: {value!r}") from None


@dataclass(frozen=True)
class Potential:
    """Deformation vector ``t = (t_1..t_nu)`` and Laguerre exponent ``alpha``.

    Values are stored as exact fractions so the same potential can be
    evaluated at any working precision.  ``nu = 0`` (empty ``t``) is the
    undeformed potential ``V(x) = x``.
    """

    t: tuple = ()
    alpha: Fraction = Fraction(0)
    nu: int = field(default=-1)

    def __post_init__(self):
        t = tuple(_exact(v) for v in self.t)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "alpha", _exact(self.alpha))
        if self.nu == -1:
            object.__setattr__(self, "nu", len(t))
        if self.nu != len(t):
            raise ConfigError(f"nu={self.nu} but {len(t)} coefficients given")
        if t and not t[-1] > 0:
            raise ConfigError(
                f"leading coefficient t_{self.nu} = {t[-1]} must be positive "
                "(trailing zeros are not allowed; nu is the true degree)"
            )
        if not self.alpha > -1:
            raise ConfigError(f"alpha must exceed -1, got {self.alpha}")

    @classmethod
    def undeformed(cls, alpha=0) -> "Potential":
        return cls((), alpha)

    @property
    def is_undeformed(self) -> bool:
        return not self.t

    def poly_coeffs(self) -> list[Fraction]:
        """Coefficients of V in increasing degree, index 0 is the constant."""
        c = [Fraction(0), Fraction(1)] + [Fraction(0)] * max(0, self.nu - 1)
        for k, tk in enumerate(self.t, start=1):
            c[k] += tk
        return c

    def derivative_coeffs(self) -> list[Fraction]:
        c = self.poly_coeffs()
        return [k * c[k] for k in range(1, len(c))]

    def scaled(self, s) -> "Potential":
        """The potential with deformation ``s * t`` (same alpha)."""
        s = _exact(s)
        if s == 0:
            return Potential.undeformed(self.alpha)
        return Potential(tuple(s * v for v in self.t), self.alpha)

    def with_alpha(self, alpha) -> "Potential":
        return Potential(self.t, alpha)

    def norm(self) -> float:
        return math.sqrt(sum(float(v) ** 2 for v in self.t))

    def describe(self) -> str:
        t = ",".join(_fmt(v) for v in self.t)
        return f"nu={self.nu} t={t} alpha={_fmt(self.alpha)}"


def _fmt(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    f = float(v)
    if Fraction(repr(f)) == v:
        return repr(f)
    return f"{v.numerator}/{v.denominator}"


def eval_potential(p: Potential, x, derivative: bool = False):
    """``V_t(x)`` or ``V_t'(x)``; exact for Fraction/int ``x``, else follows ``x``'s type."""
    coeffs = p.derivative_coeffs() if derivative else p.poly_coeffs()
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + (c if isinstance(x, (int, Fraction)) else _cast(c, x))
    return acc


def _cast(c: Fraction, like):
    if isinstance(like, float):
        return float(c)
    # mpmath mpf (any context): keep the context of ``like``
    return like.context.mpf(c.numerator) / c.denominator


@dataclass(frozen=True)
class DomainParams:
    cap: float
    ratio: float

    def __post_init__(self):
        if not (self.cap > 0 and self.ratio > 0):
            raise ConfigError("cap and ratio must be positive")


def in_domain(p: Potential, d: DomainParams) -> tuple[bool, str]:
    """Membership of ``t`` in T(cap, ratio): ``|t| <= cap`` and ``t_nu > ratio * sum_{j<nu} |t_j|``.

    ``|t|`` is the Euclidean norm.
    """
    failures = []
    if not p.norm() <= d.cap:
        failures.append(f"|t| = {p.norm():.6g} exceeds cap {d.cap}")
    lead = p.t[-1] if p.t else Fraction(0)
    rest = sum(abs(v) for v in p.t[:-1])
    if not lead > _exact(d.ratio) * rest:
        failures.append(
            f"t_nu = {float(lead):.6g} is not > ratio*sum|t_j| = {float(_exact(d.ratio) * rest):.6g}"
        )
    if failures:
        return False, "; ".join(failures)
    return True, "ok"


_KV = re.compile(r"^\s*([A-Za-z_]+)\s*=\s*(.*?)\s*$")


def parse_potential(text: str) -> Potential:
    """Parse ``nu=2``, ``t=0,0.1``, ``alpha=0`` entries.

    Entries are separated by newlines, semicolons or whitespace; ``#``
    starts a comment.  ``nu`` is optional when ``t`` is given.
    """
    fields: dict[str, str] = {}
    for raw in re.split(r"[\n;]", text):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for item in _split_items(line):
            m = _KV.match(item)
            if not m:
                raise ConfigError(f"cannot parse {item!r}; expected key=value")
            key, value = m.group(1).lower(), m.group(2)
            if key in fields:
                raise ConfigError(f"duplicate key {key!r}")
            fields[key] = value
    unknown = set(fields) - {"nu", "t", "alpha"}
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    t_text = fields.get("t", "").strip()
    t = tuple(_exact(v) for v in t_text.split(",")) if t_text else ()
    if "nu" in fields:
        try:
            nu = int(fields["nu"])
        except ValueError:
            raise ConfigError(f"nu must be an integer, got {fields['nu']!r}") from None
    else:
        nu = len(t)
    # t = 0 written out densely means the undeformed potential
    if t and all(v == 0 for v in t):
        if nu != len(t):
            raise ConfigError(f"nu={nu} but {len(t)} coefficients given")
        t, nu = (), 0
    return Potential(t, fields.get("alpha", "0"), nu)


def _split_items(line: str) -> Iterable[str]:
    # whitespace separates entries, but "t = 0, 0.1" must survive
    line = re.sub(r"\s*=\s*", "=", line)
    line = re.sub(r"\s*,\s*", ",", line)
    return line.split()
