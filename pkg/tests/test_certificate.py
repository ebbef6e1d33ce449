import json

import pytest

from cyclicmub.certificate import (
    SCHEMA,
    BuildPreconditionError,
    MubCertificate,
    build_certificate,
    verify_certificate,
)
from cyclicmub.gf2 import BitMatrix
from cyclicmub.search import ansatz_b, known_corner

B2 = BitMatrix.from_strings(["11", "10"])
B3 = BitMatrix.from_strings(["111", "110", "100"])


def flip(cert: MubCertificate, i: int, j: int) -> MubCertificate:
    obj = json.loads(cert.dumps())
    row = obj["B"]["rows"][i]
    obj["B"]["rows"][i] = row[:j] + ("1" if row[j] == "0" else "0") + row[j + 1 :]
    return MubCertificate.from_json(obj)


def test_build_small_full_levels():
    cert = build_certificate(B3, emit_u=True)
    assert cert.fully_verified
    v = cert.verification
    assert v.level == "spectrum"
    assert v.trace_ok and v.cyclic_ok and v.unbiased_ok and v.spectrum_ok
    assert cert.u is not None and cert.u.dim == 8


def test_json_roundtrip_bit_exact():
    for cert in (build_certificate(B2, emit_u=True), build_certificate(ansatz_b(9, known_corner(9)), known_corner(9))):
        text = cert.dumps()
        again = MubCertificate.loads(text)
        assert again.dumps() == text
        assert again.b == cert.b and again.corner == cert.corner
        assert json.loads(text)["schema"] == SCHEMA


def test_timestamps_excluded_on_request():
    a = build_certificate(B2).dumps(include_timestamps=False)
    b = build_certificate(B2, timestamp=False).dumps()
    assert a == b
    assert "timestamps" not in json.loads(a)


def test_large_m_is_symplectic_only():
    cert = build_certificate(ansatz_b(24, known_corner(24)), known_corner(24))
    assert cert.verification.level == "symplectic"
    assert cert.phase_exps is None and cert.u is None
    assert cert.condition_report.all_ok and cert.fully_verified


def test_precondition_failure():
    with pytest.raises(BuildPreconditionError) as exc:
        build_certificate(BitMatrix.identity(3))
    assert not exc.value.report.cond_ii_ok


@pytest.mark.parametrize("level", ["symplectic", "dense", "spectrum"])
def test_verify_levels_pass(level):
    out = verify_certificate(build_certificate(B3), level)
    assert out.ok and not out.failures


def test_single_bit_flip_fails_at_symplectic_level():
    cert = build_certificate(ansatz_b(5, known_corner(5)))
    for i, j in [(0, 0), (4, 4), (2, 3)]:
        out = verify_certificate(flip(cert, i, j), "symplectic")
        assert not out.ok
        assert out.failures[0] == "condition_report_matches"


def test_verify_ignores_tampered_claims():
    cert = build_certificate(B2)
    obj = json.loads(cert.dumps())
    obj["global_phase"]["value"] = [1, 0, 0, 0]
    out = verify_certificate(MubCertificate.from_json(obj), "dense")
    assert not out.ok and "global_phase_matches" in out.failures


def test_dense_level_refused_above_cap():
    cert = build_certificate(ansatz_b(8, known_corner(8)))
    with pytest.raises(ValueError):
        verify_certificate(cert, "dense")


def test_bad_schema_rejected():
    obj = json.loads(build_certificate(B2).dumps())
    obj["schema"] = "other/0"
    with pytest.raises(ValueError):
        MubCertificate.from_json(obj)
