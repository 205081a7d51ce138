"""The set R_A, condition-(ii) witnesses and emptiness certificates.

Certificates are conditional: hypotheses the package cannot check (trivial
Mordell-Weil group, completeness of the attested conductor) are carried as
named attestations, never assumed silently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .arith import ResourceError, cached_primes, factorize, is_prime
from .counting import CurveSpec, local_data, order_table
from .fields import conductor_multiplicity_N

MAX_SCAN_LIMIT = 10**9


class AttestationError(ValueError):
    """A certificate was requested without the attestations it depends on."""


class ConductorError(ValueError):
    """The requested field conductor is not a valid cyclic degree-l conductor."""


@dataclass(frozen=True)
class RAScanResult:
    label: str
    limit: int
    members: tuple[int, ...]
    prime_count: int

    @property
    def count(self) -> int:
        return len(self.members)

    @property
    def ratio(self) -> float:
        return self.count / self.prime_count

    def upto(self, x: int) -> "RAScanResult":
        """Restriction to [1, x] (x <= limit)."""
        if x > self.limit:
            raise ValueError("cannot extend a scan")
        members = tuple(p for p in self.members if p <= x)
        return RAScanResult(self.label, x, members, cached_primes(max(x, 2)).count_upto(x))

    def to_json(self) -> dict:
        return {
            "curve": self.label,
            "limit": self.limit,
            "count": self.count,
            "pi": self.prime_count,
            "ratio": f"{self.ratio:.4f}",
            "members": list(self.members),
        }


def in_RA(curve: CurveSpec, p: int) -> bool:
    if not curve.is_good(p):
        return False
    n = local_data(curve, p).group_order
    return math.gcd(p * (p - 1), n) == 1


def scan_RA(curve: CurveSpec, limit: int, threads: int = 1) -> RAScanResult:
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if limit > MAX_SCAN_LIMIT:
        raise ResourceError(f"scan limit {limit} exceeds {MAX_SCAN_LIMIT}")
    primes, orders = order_table(curve, limit, threads=threads)
    members = tuple(
        p
        for p, n in zip(primes.tolist(), orders.tolist())
        if math.gcd(p * (p - 1), n) == 1
    )
    return RAScanResult(curve.label, limit, members, cached_primes(limit).count_upto(limit))


def find_condition_ii_witness(curve: CurveSpec, ell: int, search_limit: int):
    """Smallest good p <= search_limit, p = 1 mod l, with l not dividing #A(F_p); None if absent."""
    p = ell + 1
    # walk the progression 1 mod l directly; search limits are small
    while p <= search_limit:
        if is_prime(p) and curve.is_good(p) and curve.discriminant % p:
            if local_data(curve, p).group_order % ell:
                return p
        p += ell
    return None


@dataclass
class ObstructionCertificate:
    curve: str
    field: dict
    witness_prime: int
    witness_order: int
    excluded: list[int]
    checks: list[tuple[str, bool]]
    attestations: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "curve": self.curve,
            "field": self.field,
            "witness": {"prime": self.witness_prime, "group_order": self.witness_order},
            "excluded": self.excluded,
            "checks": [{"name": n, "passed": ok} for n, ok in self.checks],
            "attestations": self.attestations,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass
class NoWitness:
    """Not a proof that integral points exist, only that no certificate was found."""

    curve: str
    field: dict
    reason: str
    candidates: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "curve": self.curve,
            "field": self.field,
            "result": "no-witness",
            "reason": self.reason,
            "candidates": self.candidates,
        }


def _attestations(curve: CurveSpec) -> list[str]:
    if not curve.attested_trivial_mw:
        raise AttestationError(
            f"{curve.label}: A(Q) = 0 is not attested; refusing to issue a certificate"
        )
    return [
        "A(Q) = 0 (Mordell-Weil group trivial)",
        f"good reduction at every prime not dividing the attested conductor {curve.conductor}",
    ]


def _witness_checks(curve: CurveSpec, p: int, degree: int, S) -> tuple[list, int]:
    n = local_data(curve, p).group_order
    checks = [
        ("good_reduction", curve.is_good(p)),
        ("gcd_degree_group_order", math.gcd(degree, n) == 1),
        ("not_in_S", p not in S),
    ]
    return checks, n


def certify_cyclic(curve: CurveSpec, ell: int, n: int, S=()):
    """Certificate that (A - 0)(O_{L,S}) is empty for a cyclic degree-l field of conductor n."""
    if not is_prime(ell):
        raise ConductorError(f"{ell} is not prime")
    if conductor_multiplicity_N(ell, n) == 0:
        raise ConductorError(f"{n} is not the conductor of a cyclic field of degree {ell}")
    attest = _attestations(curve)
    attest.append(f"L is cyclic of degree {ell} with conductor {n}")
    S = sorted(set(S))
    descriptor = {"type": "cyclic", "degree": ell, "conductor": n}
    candidates = [q for q, _ in factorize(n) if q != ell and q % ell == 1]
    for p in candidates:
        if not curve.is_good(p) or p in S or curve.discriminant % p == 0:
            continue
        checks, order = _witness_checks(curve, p, ell, S)
        if not all(ok for _, ok in checks):
            continue
        # a ramified prime of a cyclic prime-degree field is totally ramified
        checks.insert(1, ("totally_ramified", n % p == 0))
        checks.append(("p_equiv_1_mod_l", p % ell == 1))
        return ObstructionCertificate(curve.label, descriptor, p, order, S, checks, attest)
    reason = "no admissible prime divisor of the conductor" if not candidates else (
        "every candidate is bad, excluded by S, or has l | #A(F_p)"
    )
    return NoWitness(curve.label, descriptor, reason, candidates)


def certify_cyclotomic(curve: CurveSpec, p: int, n: int, S=()):
    """Certificate for L = Q(zeta_{p^n}) via the totally ramified prime p."""
    if not is_prime(p):
        raise ConductorError(f"{p} is not prime")
    if n < 1:
        raise ConductorError("n must be >= 1")
    attest = _attestations(curve)
    S = sorted(set(S))
    degree = p ** (n - 1) * (p - 1)
    descriptor = {"type": "cyclotomic", "p": p, "n": n, "degree": degree}
    if not curve.is_good(p) or curve.discriminant % p == 0:
        return NoWitness(curve.label, descriptor, f"{p} is not a usable good prime", [p])
    checks, order = _witness_checks(curve, p, degree, S)
    checks.insert(1, ("totally_ramified", True))
    checks.append(("gcd_p_times_p_minus_1", math.gcd(p * (p - 1), order) == 1))
    if not all(ok for _, ok in checks):
        failed = [name for name, ok in checks if not ok]
        return NoWitness(curve.label, descriptor, "failed checks: " + ", ".join(failed), [p])
    return ObstructionCertificate(curve.label, descriptor, p, order, S, checks, attest)


def recheck(curve: CurveSpec, cert: ObstructionCertificate) -> bool:
    """Re-run every check of a certificate with a fresh point count."""
    p = cert.witness_prime
    if not is_prime(p) or not curve.is_good(p) or p in cert.excluded:
        return False
    order = local_data(curve, p, crossover=10**12).group_order
    if order != cert.witness_order:
        return False
    fld = cert.field
    if fld["type"] == "cyclic":
        ell, n = fld["degree"], fld["conductor"]
        return (
            n % p == 0
            and p % ell == 1
            and conductor_multiplicity_N(ell, n) > 0
            and order % ell != 0
        )
    return p == fld["p"] and math.gcd(p * (p - 1), order) == 1
