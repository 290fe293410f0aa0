"""Euler-factor identities for the solvable-twist stream.

Away from finitely many primes, the multiplicative stream g attached to a
quartic f has local factor (1 + t) at primes where f has a root mod p and 1
otherwise (t = p^{-s}).  A fixed power of g then agrees, up to a *nice*
factor (an Euler product supported in degree >= 2), with a product of
Dedekind zeta functions: of the quartic field K, of the splitting field L,
and (for S4 quartics) of the degree-8 subfield fixed by a 3-cycle.

This module does that bookkeeping exactly.  A ``LocalFactor`` is a finite
product of (1 - t^a)^e with integer exponents; (1 + t^a) is normalized to
(1 - t^{2a}) / (1 - t^a).  ``verify_identity`` checks one (group, reduction
type) cell: the residual LHS / RHS must carry no (1 - t)^{±1} factor.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .quartic import (
    ALL_TYPES,
    GaloisType,
    coset_orbit_type,
    element_of_type,
    frobenius_order_type,
    group_elements,
    realizable_types,
)

# For each Galois group: the power of g on the left, and (field, exponent)
# pairs on the right.  "K" is the quartic field, "L" its Galois closure,
# "L3" the degree-8 field fixed by a 3-cycle (S4 only).
IDENTITY_TABLE: dict[GaloisType, tuple[int, tuple[tuple[str, int], ...]]] = {
    GaloisType.V4: (4, (("K", 1),)),
    GaloisType.C4: (4, (("K", 1),)),
    GaloisType.D4: (8, (("K", 4), ("L", -1))),
    GaloisType.A4: (4, (("K", 4), ("L", -1))),
    GaloisType.S4: (24, (("K", 12), ("L", -3), ("L3", 6))),
}

FIELD_DEGREES = {"K": 4, "L": None, "L3": 8}  # L degree = |G|


@dataclass(frozen=True)
class LocalFactor:
    """Product of (1 - t^a)^e, stored as sorted (a, e) pairs with e != 0."""

    factors: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def _from_dict(d: dict[int, int]) -> "LocalFactor":
        return LocalFactor(tuple(sorted((a, e) for a, e in d.items() if e != 0)))

    @staticmethod
    def one() -> "LocalFactor":
        return LocalFactor(())

    @staticmethod
    def one_minus(a: int, e: int = 1) -> "LocalFactor":
        """(1 - t^a)^e."""
        if a < 1:
            raise ValueError("degree must be >= 1")
        return LocalFactor._from_dict({a: e})

    @staticmethod
    def one_plus(a: int, e: int = 1) -> "LocalFactor":
        """(1 + t^a)^e, normalized to (1 - t^{2a})^e (1 - t^a)^{-e}."""
        if a < 1:
            raise ValueError("degree must be >= 1")
        return LocalFactor._from_dict({2 * a: e, a: -e})

    @staticmethod
    def dedekind_local(partition: tuple[int, ...]) -> "LocalFactor":
        """Local zeta factor prod_i (1 - t^{f_i})^{-1} for residue degrees f_i."""
        d: dict[int, int] = {}
        for fi in partition:
            d[fi] = d.get(fi, 0) - 1
        return LocalFactor._from_dict(d)

    def __mul__(self, other: "LocalFactor") -> "LocalFactor":
        d = dict(self.factors)
        for a, e in other.factors:
            d[a] = d.get(a, 0) + e
        return LocalFactor._from_dict(d)

    def __pow__(self, n: int) -> "LocalFactor":
        return LocalFactor(tuple((a, e * n) for a, e in self.factors)) if n else LocalFactor(())

    def __truediv__(self, other: "LocalFactor") -> "LocalFactor":
        return self * (other ** -1)

    def exponent(self, a: int) -> int:
        return dict(self.factors).get(a, 0)

    @property
    def is_nice(self) -> bool:
        """True when no (1 - t)^{±1} factor survives (support in degree >= 2)."""
        return self.exponent(1) == 0

    def series(self, order: int) -> list[int]:
        """Power-series coefficients [c_0, ..., c_order] of the product."""
        coeffs = [0] * (order + 1)
        coeffs[0] = 1
        for a, e in self.factors:
            if e > 0:
                for _ in range(e):
                    # multiply by (1 - t^a)
                    for k in range(order, a - 1, -1):
                        coeffs[k] -= coeffs[k - a]
            else:
                for _ in range(-e):
                    # multiply by 1/(1 - t^a) = 1 + t^a + t^{2a} + ...
                    for k in range(a, order + 1):
                        coeffs[k] += coeffs[k - a]
        return coeffs

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for a, e in self.factors:
            base = f"(1-t^{a})" if a > 1 else "(1-t)"
            parts.append(base if e == 1 else f"{base}^{e}")
        return " ".join(parts)


def splitting_partitions(group: GaloisType, ftype: tuple[int, ...]) -> dict[str, tuple[int, ...]]:
    """Residue-degree partitions in each field occurring in the group's identity.

    ``ftype`` is the factorization type of f at a prime of good reduction;
    the Frobenius conjugacy class it pins down determines how that prime
    splits in K (the type itself), in the closure L (the Frobenius order d,
    repeated |G|/d times), and for S4 in the degree-8 subfield (orbit type of
    Frobenius on the 8 cosets of a 3-cycle's centralizer-free subgroup).
    """
    if ftype not in realizable_types(group):
        raise ValueError(f"type {ftype} does not occur for group {group.value}")
    parts: dict[str, tuple[int, ...]] = {"K": ftype}
    parts["L"] = frobenius_order_type(ftype, group)
    if group is GaloisType.S4:
        parts["L3"] = coset_orbit_type(element_of_type(ftype, group))
    return parts


@dataclass(frozen=True)
class IdentityCheck:
    group: GaloisType
    ftype: tuple[int, ...]
    lhs: LocalFactor
    rhs: LocalFactor
    residual: LocalFactor  # lhs / rhs
    nice: bool


def verify_identity(group: GaloisType, ftype: tuple[int, ...]) -> IdentityCheck:
    """Check one (group, reduction type) cell of the zeta identity.

    LHS is the local factor of g^E: (1 + t)^E when f has a root mod p (type
    contains a 1), trivial otherwise.  RHS multiplies the Dedekind local
    factors of the identity's fields at their computed splitting partitions.
    The identity holds at this cell iff the residual is nice.
    """
    power, field_exps = IDENTITY_TABLE[group]
    rooted = 1 in ftype
    lhs = LocalFactor.one_plus(1, power) if rooted else LocalFactor.one()
    parts = splitting_partitions(group, ftype)
    rhs = LocalFactor.one()
    for name, exp in field_exps:
        rhs = rhs * (LocalFactor.dedekind_local(parts[name]) ** exp)
    residual = lhs / rhs
    return IdentityCheck(group, ftype, lhs, rhs, residual, residual.is_nice)


def verify_all() -> list[IdentityCheck]:
    """All (group, realizable type) cells, in deterministic order."""
    out = []
    for group in GaloisType:
        for ftype in ALL_TYPES:
            if ftype in realizable_types(group):
                out.append(verify_identity(group, ftype))
    return out


@lru_cache(maxsize=None)
def _partition_degree_ok(group: GaloisType) -> bool:
    """Each field's partition must sum to that field's degree, at every type."""
    order = len(group_elements(group))
    for ftype in realizable_types(group):
        parts = splitting_partitions(group, ftype)
        if sum(parts["K"]) != 4:
            return False
        if sum(parts["L"]) != order:
            return False
        if "L3" in parts and sum(parts["L3"]) != 8:
            return False
    return True


def identity_report() -> dict:
    """JSON-friendly summary of every cell (used by the verify suite)."""
    cells = []
    for chk in verify_all():
        cells.append(
            {
                "group": chk.group.value,
                "type": list(chk.ftype),
                "lhs": str(chk.lhs),
                "rhs": str(chk.rhs),
                "residual": str(chk.residual),
                "nice": chk.nice,
            }
        )
    return {"cells": cells, "all_nice": all(c["nice"] for c in cells)}
