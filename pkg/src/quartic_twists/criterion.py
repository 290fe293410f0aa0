"""Finite criterion for everywhere-local solvability of q*y^2 = f(x).

Local solvability at p depends only on the square class of q in Q_p, so a
finite amount of local computation (the mod-8 table at 2, one four-entry table
per odd bad prime) turns the everywhere-local question into congruence and
Legendre-symbol conditions on square-free q >= 1.  The allowed q then fall
into finitely many disjoint condition sets, and the indicator of the allowed
set expands into finitely many character twists of the base Dirichlet series.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .arith import NotSquareFreeError, jacobi, squarefree_factor
from .localsolve import is_locally_solvable
from .quartic import GaloisType, Quartic
from .series import chi_value

ODD_CLASSES = (1, 3, 5, 7)
# square-class representatives in Q_2 by residue of the odd (co)factor mod 8
_REP_MOD8 = {1: 1, 7: -1, 5: 5, 3: -5}

COPRIME_UNCONSTRAINED = "unconstrained"
COPRIME_RESIDUE_ONLY = "residue_only"
DIVIDING_UNCONSTRAINED = "unconstrained"
DIVIDING_COFACTOR_RESIDUE = "cofactor_residue"
DIVIDING_COFACTOR_NONRESIDUE = "cofactor_nonresidue"
DIVIDING_FORBIDDEN = "forbidden"


@dataclass(frozen=True)
class Mod8Table:
    """Allowed mod-8 classes at p = 2.

    ``odd_allowed``: classes of q itself for odd q; ``half_allowed``: classes
    of q/2 for even q.  A class c is allowed iff the representative twist
    (1, -1, 5, -5 as c = 1, 7, 5, 3, doubled for the even table) is solvable
    over Q_2.
    """

    odd_allowed: frozenset[int]
    half_allowed: frozenset[int]


@dataclass(frozen=True)
class OddBadPrimeTable:
    """Per-prime conditions at an odd prime p | disc(f).

    u is the least positive non-residue mod p.  The coprime rule constrains q
    with p not dividing q; the dividing rule constrains the cofactor q/p.
    """

    p: int
    u: int
    coprime_rule: str
    dividing_rule: str


@dataclass(frozen=True)
class ConditionSet:
    """One congruence cell of allowed twists.

    Members are q = bad_part * q1 with q1 coprime to 2*disc(f), q1 congruent
    to mod8_class mod 8, and (q1/p) equal to the required symbol for every odd
    bad prime p.
    """

    bad_part: int
    mod8_class: int
    legendre: tuple[tuple[int, int], ...]  # (p, required symbol on q1), sorted

    def contains(self, q: int, odd_bad_primes: tuple[int, ...]) -> bool:
        if q < 1:
            return False
        m = self.bad_part
        if q % m != 0:
            return False
        q1 = q // m
        if q1 % 2 == 0 or any(q1 % p == 0 for p in odd_bad_primes):
            return False
        if (self.bad_part % 2 == 0) != (q % 2 == 0):
            return False
        if q1 % 8 != self.mod8_class:
            return False
        return all(jacobi(q1, p) == s for p, s in self.legendre)


@dataclass(frozen=True)
class TwistTerm:
    """coeff * prefactor^(-s) * (base series twisted by chi and the psis)."""

    coeff: Fraction
    chi: int  # 1..4, index into the mod-8 character table
    psis: tuple[int, ...]  # moduli of quadratic-symbol twists, ascending
    prefactor: int


@dataclass(frozen=True)
class CriterionBundle:
    f: Quartic
    galois: GaloisType
    mod8: Mod8Table
    odd_tables: tuple[OddBadPrimeTable, ...]
    sets: tuple[ConditionSet, ...]
    terms: tuple[TwistTerm, ...]

    @property
    def odd_bad_primes(self) -> tuple[int, ...]:
        return tuple(t.p for t in self.odd_tables)


def compute_mod8_table(f: Quartic) -> Mod8Table:
    odd = frozenset(c for c, rep in _REP_MOD8.items() if is_locally_solvable(f, rep, 2))
    half = frozenset(
        c for c, rep in _REP_MOD8.items() if is_locally_solvable(f, 2 * rep, 2)
    )
    return Mod8Table(odd_allowed=odd, half_allowed=half)


def least_nonresidue(p: int) -> int:
    u = 2
    while jacobi(u, p) != -1:
        u += 1
    return u


def compute_odd_table(f: Quartic, p: int) -> OddBadPrimeTable:
    u = least_nonresidue(p)
    solv_u = is_locally_solvable(f, u, p)
    solv_p = is_locally_solvable(f, p, p)
    solv_up = is_locally_solvable(f, u * p, p)
    coprime = COPRIME_UNCONSTRAINED if solv_u else COPRIME_RESIDUE_ONLY
    if solv_p and solv_up:
        dividing = DIVIDING_UNCONSTRAINED
    elif solv_p:
        dividing = DIVIDING_COFACTOR_RESIDUE
    elif solv_up:
        dividing = DIVIDING_COFACTOR_NONRESIDUE
    else:
        dividing = DIVIDING_FORBIDDEN
    return OddBadPrimeTable(p=p, u=u, coprime_rule=coprime, dividing_rule=dividing)


def build_bundle(f: Quartic, checked: bool = True) -> CriterionBundle:
    """Assemble every finite table the criterion needs for f."""
    galois = f.classify_checked() if checked else f.classify_galois()
    mod8 = compute_mod8_table(f)
    odd_ps = [p for p in f.bad_primes() if p != 2]
    odd_tables = tuple(compute_odd_table(f, p) for p in odd_ps)
    sets = condition_sets(mod8, odd_tables)
    terms = expand_F_terms(sets, odd_tables)
    return CriterionBundle(f, galois, mod8, odd_tables, sets, terms)


def is_ELS_criterion(bundle: CriterionBundle, q: int, root_lookup=None) -> bool:
    """Everywhere-local solvability decided from the finite tables alone."""
    if q < 1:
        raise ValueError(f"ELS is defined for q >= 1, got {q}")
    factors = squarefree_factor(q)
    if factors is None:
        raise NotSquareFreeError(f"q={q} is not square-free")
    if root_lookup is None:
        root_lookup = bundle.f.has_root_mod_p
    bad_odd = set(bundle.odd_bad_primes)
    # (a) good primes dividing q must carry a root of f
    for p in factors:
        if p != 2 and p not in bad_odd and not root_lookup(p):
            return False
    # (b) mod-8 condition at 2
    if q % 2:
        if q % 8 not in bundle.mod8.odd_allowed:
            return False
    elif (q // 2) % 8 not in bundle.mod8.half_allowed:
        return False
    # (c) conditions at odd bad primes
    for t in bundle.odd_tables:
        if q % t.p == 0:
            if t.dividing_rule == DIVIDING_FORBIDDEN:
                return False
            if t.dividing_rule == DIVIDING_COFACTOR_RESIDUE:
                if jacobi(q // t.p, t.p) != 1:
                    return False
            elif t.dividing_rule == DIVIDING_COFACTOR_NONRESIDUE:
                if jacobi(q // t.p, t.p) != -1:
                    return False
        elif t.coprime_rule == COPRIME_RESIDUE_ONLY and jacobi(q, t.p) != 1:
            return False
    return True


def condition_sets(
    mod8: Mod8Table, odd_tables: tuple[OddBadPrimeTable, ...]
) -> tuple[ConditionSet, ...]:
    """Disjoint congruence cells covering exactly the q allowed by (b), (c).

    Cells are the full refinement: one definite symbol per odd bad prime and
    one definite mod-8 class of the cofactor q1 = q / bad_part.
    """
    dividable = [t for t in odd_tables if t.dividing_rule != DIVIDING_FORBIDDEN]
    cells: list[ConditionSet] = []
    for parity in (0, 1):
        classes = mod8.odd_allowed if parity == 0 else mod8.half_allowed
        if not classes:
            continue
        for r in range(len(dividable) + 1):
            for subset in _subsets(dividable, r):
                in_t = {t.p for t in subset}
                m_odd = 1
                for t in subset:
                    m_odd *= t.p
                m = m_odd * (2 if parity else 1)
                # options for the required symbol on q1, per odd bad prime
                options: list[list[tuple[int, int]]] = []
                for t in odd_tables:
                    if t.p in in_t:
                        conv = jacobi(m // t.p, t.p)  # (q/p / p) -> (q1/p)
                        if t.dividing_rule == DIVIDING_UNCONSTRAINED:
                            opts = [conv, -conv]
                        elif t.dividing_rule == DIVIDING_COFACTOR_RESIDUE:
                            opts = [conv]
                        else:
                            opts = [-conv]
                    else:
                        conv = jacobi(m, t.p)  # (q / p) -> (q1/p)
                        if t.coprime_rule == COPRIME_UNCONSTRAINED:
                            opts = [conv, -conv]
                        else:
                            opts = [conv]
                    options.append([(t.p, s) for s in sorted(set(opts), reverse=True)])
                for c_allowed in sorted(classes):
                    c1 = (c_allowed * m_odd) % 8  # class of q, moved onto q1
                    for combo in product(*options):
                        cells.append(
                            ConditionSet(
                                bad_part=m, mod8_class=c1, legendre=tuple(sorted(combo))
                            )
                        )
    cells.sort(key=lambda s: (s.bad_part, s.mod8_class, s.legendre))
    return tuple(cells)


def _subsets(items, r):
    from itertools import combinations

    return combinations(items, r)


def expand_F_terms(
    sets: tuple[ConditionSet, ...], odd_tables: tuple[OddBadPrimeTable, ...]
) -> tuple[TwistTerm, ...]:
    """Character expansion of the generating series of the allowed twists.

    Each cell opens into 4 * 2^l signed twists of the base series, all scaled
    by 1/2^(l+2) with l the number of odd bad primes; algebraically equal
    twists merge by exact rational arithmetic.
    """
    l = len(odd_tables)
    scale = Fraction(1, 2 ** (l + 2))
    accum: dict[tuple[int, tuple[int, ...], int], Fraction] = {}
    for cell in sets:
        primes = [p for p, _ in cell.legendre]
        signs = {p: s for p, s in cell.legendre}
        for i in (1, 2, 3, 4):
            base = chi_value(i, cell.mod8_class)
            for r in range(len(primes) + 1):
                for psis in _subsets(primes, r):
                    sgn = base
                    for p in psis:
                        sgn *= signs[p]
                    key = (i, tuple(psis), cell.bad_part)
                    accum[key] = accum.get(key, Fraction(0)) + scale * sgn
    terms = [
        TwistTerm(coeff=c, chi=i, psis=psis, prefactor=m)
        for (i, psis, m), c in accum.items()
        if c != 0
    ]
    terms.sort(key=lambda t: (t.prefactor, t.chi, t.psis))
    return tuple(terms)


# ---- JSON (de)serialization --------------------------------------------------

def bundle_to_dict(b: CriterionBundle) -> dict:
    return {
        "f": {"a3": b.f.a3, "a2": b.f.a2, "a1": b.f.a1, "a0": b.f.a0, "poly": str(b.f)},
        "disc": b.f.discriminant(),
        "galois": b.galois.value,
        "mod8": {
            "odd": sorted(b.mod8.odd_allowed),
            "half": sorted(b.mod8.half_allowed),
        },
        "odd_tables": [
            {"p": t.p, "u": t.u, "coprime_rule": t.coprime_rule,
             "dividing_rule": t.dividing_rule}
            for t in b.odd_tables
        ],
        "sets": [
            {"bad_part": s.bad_part, "mod8_class": s.mod8_class,
             "legendre": [[p, v] for p, v in s.legendre]}
            for s in b.sets
        ],
        "terms": [
            {"sign_num": t.coeff.numerator, "sign_den": t.coeff.denominator,
             "chi": t.chi, "psis": list(t.psis), "prefactor": t.prefactor}
            for t in b.terms
        ],
    }


def bundle_from_dict(d: dict) -> CriterionBundle:
    f = Quartic(d["f"]["a3"], d["f"]["a2"], d["f"]["a1"], d["f"]["a0"])
    mod8 = Mod8Table(
        odd_allowed=frozenset(d["mod8"]["odd"]),
        half_allowed=frozenset(d["mod8"]["half"]),
    )
    odd_tables = tuple(
        OddBadPrimeTable(t["p"], t["u"], t["coprime_rule"], t["dividing_rule"])
        for t in d["odd_tables"]
    )
    sets = tuple(
        ConditionSet(
            bad_part=s["bad_part"],
            mod8_class=s["mod8_class"],
            legendre=tuple((int(p), int(v)) for p, v in s["legendre"]),
        )
        for s in d["sets"]
    )
    terms = tuple(
        TwistTerm(
            coeff=Fraction(t["sign_num"], t["sign_den"]),
            chi=t["chi"],
            psis=tuple(t["psis"]),
            prefactor=t["prefactor"],
        )
        for t in d["terms"]
    )
    return CriterionBundle(
        f, GaloisType(d["galois"]), mod8, odd_tables, sets, terms
    )
