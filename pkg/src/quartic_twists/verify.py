"""Self-verification suites: every identity the package relies on, re-checked.

Each suite returns a ``SuiteResult`` holding one named check per fact.  A
failed check is an ordinary verification failure; a disagreement between the
congruence criterion and the direct p-adic solver is different in kind — it
can only be an internal bug — so the oracle suite raises
``CriterionOracleMismatch`` (a tripwire) instead of reporting it politely.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .arith import PrimeTable
from .counting import density_check
from .criterion import CriterionBundle, build_bundle, is_ELS_criterion
from .errors import TripwireError
from .localsolve import is_ELS_direct
from .quartic import Quartic
from .series import (
    F_coefficients,
    FrobenianMultiplicative,
    filtration_check_mod8,
    filtration_check_modr,
    rho_coefficients,
)
from .zeta import verify_all


class CriterionOracleMismatch(TripwireError):
    """Criterion and direct local solver disagreed on some (f, q)."""


def default_corpus() -> tuple[Quartic, ...]:
    """One quartic per Galois group, small coefficients."""
    return (
        Quartic(0, 0, -1, 1),  # x^4 - x + 1          S4
        Quartic(0, 0, 8, 12),  # x^4 + 8x + 12         A4
        Quartic(0, 0, 0, -2),  # x^4 - 2               D4
        Quartic(1, 1, 1, 1),   # x^4 + x^3 + x^2 + x + 1  C4
        Quartic(0, 0, 0, 1),   # x^4 + 1               V4
    )


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, passed, detail))

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def suite_filtration(
    f: Quartic,
    N: int = 10**5,
    rs: tuple[int, ...] = (),
    table: PrimeTable | None = None,
) -> SuiteResult:
    """Character-filtration identities on the base stream of f.

    Quarter-sums over the four mod-8 characters must reproduce each odd
    congruence class; half-sums with a quadratic character must split the
    stream by residue/non-residue, for every modulus in ``rs``.
    """
    res = SuiteResult("filtration")
    if table is None or table.limit < N:
        table = PrimeTable(max(N, 2))
    g = rho_coefficients(FrobenianMultiplicative(f), N, table)
    for c in (1, 3, 5, 7):
        ok = filtration_check_mod8(g, c, N)
        res.add(f"mod8_class_{c}", ok, f"N={N}")
    for r in rs:
        for sign in (1, -1):
            ok = filtration_check_modr(g, r, sign, N)
            res.add(f"mod_{r}_sign_{'+' if sign > 0 else '-'}", ok, f"N={N}")
    return res


def suite_terms(
    f: Quartic,
    N: int = 10**5,
    table: PrimeTable | None = None,
    bundle: CriterionBundle | None = None,
) -> SuiteResult:
    """Term expansion of the solvable-count series == criterion indicator.

    The merged character-twist terms, evaluated coefficientwise, must equal
    1 exactly on square-free allowed q and 0 elsewhere, for every n <= N.
    """
    res = SuiteResult("terms")
    if table is None or table.limit < N:
        table = PrimeTable(max(N, 2))
    if bundle is None:
        bundle = build_bundle(f)
    F = F_coefficients(bundle, N, table)
    primes, flags = bundle.f.root_census(N, table)
    flag_map = dict(zip(primes.tolist(), flags.tolist()))
    lookup = lambda p: bool(flag_map[p])  # noqa: E731
    first_bad = None
    n_checked = 0
    for q in range(1, N + 1):
        fac = table.factor(q) if q > 1 else []
        sf = all(e == 1 for _, e in fac)
        want = 1 if (sf and is_ELS_criterion(bundle, q, lookup)) else 0
        n_checked += 1
        if F.a[q] != want:
            first_bad = (q, F.a[q], want)
            break
    res.add(
        "termwise_equals_indicator",
        first_bad is None,
        f"N={N} checked={n_checked}" + (f" first_mismatch={first_bad}" if first_bad else ""),
    )
    return res


def suite_zeta(group: str | None = None) -> SuiteResult:
    """Zeta identities: every (group, reduction type) residual is nice."""
    res = SuiteResult("zeta")
    for chk in verify_all():
        if group is not None and chk.group.value != group:
            continue
        name = f"{chk.group.value}_{'_'.join(map(str, chk.ftype))}"
        res.add(name, chk.nice, f"residual={chk.residual}")
    if not res.checks:
        raise ValueError(f"no zeta cells match group {group!r}")
    return res


def suite_density(
    fs: list[Quartic],
    B: int = 10**6,
    tolerance: float = 0.01,
    table: PrimeTable | None = None,
) -> SuiteResult:
    """Empirical prime density of rho vs the exact group mean, per quartic."""
    res = SuiteResult("density")
    if table is None or table.limit < B:
        table = PrimeTable(max(B, 2))
    for f in fs:
        rep = density_check(f, B, tolerance, table)
        res.add(
            f"density_{f}".replace(" ", ""),
            rep.passed,
            f"group={rep.group.value} expected={rep.expected} "
            f"empirical={float(rep.empirical):.5f} err={rep.error:.5f} B={B}",
        )
    return res


def suite_oracle(
    fs: list[Quartic],
    qmax: int = 2000,
    table: PrimeTable | None = None,
) -> SuiteResult:
    """Criterion vs direct p-adic solver on every square-free q <= qmax.

    Any disagreement is an internal tripwire, not a verification failure:
    both routes claim to compute the same mathematical predicate.
    """
    res = SuiteResult("oracle")
    if table is None or table.limit < qmax:
        table = PrimeTable(max(qmax, 2))
    for f in fs:
        bundle = build_bundle(f)
        primes, flags = f.root_census(qmax, table)
        flag_map = dict(zip(primes.tolist(), flags.tolist()))
        lookup = lambda p: bool(flag_map[p])  # noqa: E731
        n_checked = 0
        for q in range(1, qmax + 1):
            fac = table.factor(q) if q > 1 else []
            if any(e > 1 for _, e in fac):
                continue
            n_checked += 1
            got = is_ELS_criterion(bundle, q, lookup)
            want = is_ELS_direct(f, q)
            if got != want:
                raise CriterionOracleMismatch(
                    f"f={f}, q={q}: criterion says {got}, direct solver says {want}"
                )
        res.add(
            f"oracle_{f}".replace(" ", ""),
            True,
            f"qmax={qmax} squarefree_checked={n_checked}",
        )
    return res


SUITE_NAMES = ("filtration", "terms", "zeta", "density", "oracle", "all")


def run_suites(
    suite: str,
    fs: list[Quartic] | None = None,
    N: int = 10**5,
    qmax: int = 2000,
    B: int = 10**6,
    rs: tuple[int, ...] | None = None,
    tolerance: float = 0.01,
    group: str | None = None,
) -> list[SuiteResult]:
    """Dispatch by suite name; ``"all"`` runs every suite on the corpus.

    When ``rs`` is omitted, the filtration suite uses each quartic's odd bad
    primes (falling back to 5 when there are none).
    """
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITE_NAMES}")
    fs = list(fs) if fs else list(default_corpus())
    names = SUITE_NAMES[:-1] if suite == "all" else (suite,)
    bound = max(N, qmax, B if ("density" in names) else 0, 2)
    table = PrimeTable(bound)
    out: list[SuiteResult] = []
    for name in names:
        if name == "filtration":
            for f in fs:
                f_rs = rs if rs is not None else (tuple(
                    p for p in sorted(f.bad_primes()) if p != 2
                ) or (5,))
                res = suite_filtration(f, N, tuple(f_rs), table)
                res.suite = f"filtration[{f}]".replace(" ", "")
                out.append(res)
        elif name == "terms":
            for f in fs:
                res = suite_terms(f, N, table)
                res.suite = f"terms[{f}]".replace(" ", "")
                out.append(res)
        elif name == "zeta":
            out.append(suite_zeta(group))
        elif name == "density":
            out.append(suite_density(fs, B, tolerance, table))
        elif name == "oracle":
            out.append(suite_oracle(fs, qmax, table))
    return out
