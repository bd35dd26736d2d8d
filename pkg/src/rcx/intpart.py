"""Truncation integer parts: elements t + z with t purely infinite, z an integer."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonPositive, UndeterminedTail, UndeterminedSign
from .monomial import GroupRegistry, grp_new_generator
from .residue import RealAlg, ra_floor
from .series import Series, ser_sign, ser_split

__all__ = ["IpElement", "ip_floor", "ip_exp", "ip_verify"]


@dataclass(frozen=True)
class IpElement:
    infinite: Series
    z: int
    non_integral: bool = False

    def __post_init__(self):
        for _, m in self.infinite.terms:
            if m.reg is None or m.reg.sign_of(m) <= 0:
                raise ValueError(f"integer part has a non-infinite monomial {m}")

    def value(self) -> Series:
        return self.infinite + Series.const(self.z)

    def to_json(self) -> dict:
        out = {"infinite": self.infinite.to_json(), "z": self.z}
        if self.non_integral:
            out["non_integral"] = True
        return out

    @classmethod
    def from_json(cls, obj: dict, reg: GroupRegistry) -> "IpElement":
        return cls(Series.from_json(obj["infinite"], reg), int(obj["z"]),
                   bool(obj.get("non_integral", False)))

    def __str__(self):
        if not self.infinite.terms:
            return str(self.z)
        if self.z == 0:
            return str(self.infinite)
        sign = "-" if self.z < 0 else "+"
        return f"{self.infinite} {sign} {abs(self.z)}"


def ip_floor(s: Series) -> IpElement:
    """Largest t + z below or equal to s, with t the purely infinite part of s."""
    sp = ser_split(s)
    if not sp.constant_exact:
        raise UndeterminedTail(f"the constant term of {s} is hidden below its cutoff")
    if sp.infinite_part.cutoff is not None:
        raise UndeterminedTail(f"the infinite part of {s} is not fully known")
    c = sp.constant
    z = ra_floor(c)
    if c.is_rational and c.exact_rational == z:
        try:
            tail = ser_sign(sp.infinitesimal_part)
        except UndeterminedSign as exc:
            raise UndeterminedTail(f"integer constant {z} with a hidden infinitesimal tail") from exc
        if tail < 0:
            z -= 1
    return IpElement(sp.infinite_part.without_cutoff(), int(z))


def ip_verify(e: IpElement, s: Series) -> bool:
    d = s - e.value()
    return ser_sign(d) >= 0 and ser_sign(d - Series.const(1)) < 0


def ip_exp(e: IpElement, reg: GroupRegistry, stage: int | None = None) -> IpElement:
    """2^e, again of the form t + z."""
    if ser_sign(e.value()) <= 0:
        raise NonPositive(f"2^e needs e > 0, got {e}")
    a = e.z
    if not e.infinite.terms:
        return IpElement(Series.zero(), 2 ** a)
    if stage is None:
        stage = max((g.stage for g in reg.generators), default=0)
    g = grp_new_generator(reg, e.infinite, stage)
    coeff = RealAlg.rational(Fraction(2) ** a)
    return IpElement(Series.monomial(g, coeff), 0, non_integral=a < 0)
