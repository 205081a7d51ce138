import dataclasses
import math

import pytest

from oracles import plane_count
from reference_data import R_E_1000, R_J_1000
from punctured.counting import genus2_jacobian_order
from punctured.fields import conductor_multiplicity_N
from punctured.arith import factorize
from punctured.obstruction import (
    AttestationError,
    ConductorError,
    NoWitness,
    ObstructionCertificate,
    certify_cyclic,
    certify_cyclotomic,
    find_condition_ii_witness,
    in_RA,
    recheck,
    scan_RA,
)


def test_in_RA_examples(E, J):
    assert in_RA(E, 17)
    assert not in_RA(E, 67)
    assert in_RA(J, 11)


def test_scan_lists(E, J):
    assert list(scan_RA(E, 1000).members) == R_E_1000
    r = scan_RA(J, 1000)
    assert list(r.members) == R_J_1000
    assert round(r.ratio, 3) == 0.137


def test_scan_against_plane_oracle(E):
    want = [p for p in range(2, 400) if all(p % q for q in range(2, p)) and p != 67
            and math.gcd(p * (p - 1), plane_count(E.ainvs, p)) == 1]
    assert list(scan_RA(E, 399).members) == want


def test_scan_prefix_monotone(E):
    big = scan_RA(E, 20000)
    for x in (100, 1000, 5000, 12345):
        small = scan_RA(E, x)
        assert small.members == big.upto(x).members
        assert small.prime_count == big.upto(x).prime_count


def test_scan_limits(E):
    with pytest.raises(ValueError):
        scan_RA(E, 1)


def test_witnesses(J):
    assert find_condition_ii_witness(J, 2, 100) == 5
    assert find_condition_ii_witness(J, 3, 100) == 7
    assert find_condition_ii_witness(J, 3, 6) is None


def test_certify_cyclic_examples(E, J):
    c = certify_cyclic(E, 2, 17)
    assert isinstance(c, ObstructionCertificate) and c.witness_prime == 17
    assert plane_count(E.ainvs, 17) % 2 == 1
    assert recheck(E, c)
    assert isinstance(certify_cyclic(E, 2, 8), NoWitness)
    assert isinstance(certify_cyclic(J, 3, 7, S=[7]), NoWitness)
    c = certify_cyclic(J, 3, 7)
    assert c.witness_prime == 7 and c.witness_order == 32
    assert all(ok for _, ok in c.checks)


def test_certify_cyclic_rejects_non_conductor(E):
    with pytest.raises(ConductorError):
        certify_cyclic(E, 3, 10)
    with pytest.raises(ConductorError):
        certify_cyclic(E, 4, 5)


def test_certify_cyclotomic_examples(E, J):
    for curve, p, n in ((E, 19, 3), (J, 13, 2)):
        c = certify_cyclotomic(curve, p, n)
        assert isinstance(c, ObstructionCertificate)
        assert c.field["degree"] == p ** (n - 1) * (p - 1)
        assert recheck(curve, c)
    assert isinstance(certify_cyclotomic(E, 5, 1), NoWitness)
    assert isinstance(certify_cyclotomic(E, 19, 3, S=[19]), NoWitness)


def test_attestation_required(E):
    bare = dataclasses.replace(E, attested_trivial_mw=False)
    with pytest.raises(AttestationError):
        certify_cyclotomic(bare, 19, 1)
    with pytest.raises(AttestationError):
        certify_cyclic(bare, 2, 17)


def test_certificate_json_key_order(E):
    d = certify_cyclic(E, 2, 17).to_json()
    assert list(d) == ["curve", "field", "witness", "excluded", "checks", "attestations"]
    assert all(isinstance(ch["passed"], bool) for ch in d["checks"])


@pytest.mark.parametrize("ell", [2, 3])
def test_certify_cyclic_exhaustive(E, J, ell):
    """Certificate issued iff some admissible prime divisor exists, for all conductors <= 500."""
    orders_E = {}
    for curve in (E, J):
        for n in range(1, 501):
            if conductor_multiplicity_N(ell, n) == 0:
                continue
            admissible = []
            for q, _ in factorize(n):
                if q == ell or q % ell != 1 or curve.conductor % q == 0:
                    continue
                if curve is E:
                    order = orders_E.setdefault(q, plane_count(E.ainvs, q))
                else:
                    order = genus2_jacobian_order(J, q).group_order
                if order % ell:
                    admissible.append(q)
            res = certify_cyclic(curve, ell, n)
            if admissible:
                assert isinstance(res, ObstructionCertificate)
                assert res.witness_prime == min(admissible)
                assert recheck(curve, res)
            else:
                assert isinstance(res, NoWitness)
