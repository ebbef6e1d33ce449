"""Self-contained JSON certificates for one B.

A certificate stores B (and the corner it came from) plus every derived
claim. Verification never trusts the claims: it recomputes them from B and m
and compares.
"""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass, field

from cyclicmub import __version__
from cyclicmub.cyclotomic import (
    DENSE_MAX_M,
    PHASE_MAX_M,
    VERIFY_MAX_M,
    Cyc8Matrix,
    ScaledCyc8,
    build_u,
    global_phase,
    global_phase_trace,
    phase_vector,
    sweep,
)
from cyclicmub.exceptions import ConjectureError
from cyclicmub.gf2 import BitMatrix
from cyclicmub.symplectic import ConditionReport, check_conditions

SCHEMA = "mubcert/1"
LEVELS = ("symplectic", "dense", "spectrum")


class BuildPreconditionError(ValueError):
    def __init__(self, report: ConditionReport):
        self.report = report
        failed = [k for k, v in report.to_json().items() if v is False]
        super().__init__(f"B fails: {', '.join(failed)}")


@dataclass
class Verification:
    level: str
    dense_bound: int = VERIFY_MAX_M
    trace_ok: bool | None = None
    cyclic_ok: bool | None = None
    unbiased_ok: bool | None = None
    spectrum_ok: bool | None = None

    def checks(self) -> dict[str, bool | None]:
        return {
            "trace_ok": self.trace_ok,
            "cyclic_ok": self.cyclic_ok,
            "unbiased_ok": self.unbiased_ok,
            "spectrum_ok": self.spectrum_ok,
        }

    def to_json(self) -> dict:
        return {"level": self.level, "dense_bound": self.dense_bound, **self.checks()}

    @classmethod
    def from_json(cls, obj: dict) -> Verification:
        return cls(
            level=obj["level"],
            dense_bound=int(obj["dense_bound"]),
            trace_ok=obj.get("trace_ok"),
            cyclic_ok=obj.get("cyclic_ok"),
            unbiased_ok=obj.get("unbiased_ok"),
            spectrum_ok=obj.get("spectrum_ok"),
        )


@dataclass
class MubCertificate:
    m: int
    b: BitMatrix
    condition_report: ConditionReport
    verification: Verification
    corner: BitMatrix | None = None
    phase_exps: tuple[int, ...] | None = None
    global_phase: ScaledCyc8 | None = None
    global_phase_trace: ScaledCyc8 | None = None
    u: Cyc8Matrix | None = None
    tool_version: str = __version__
    timestamps: dict[str, str] = field(default_factory=dict)

    @property
    def fully_verified(self) -> bool:
        return self.condition_report.all_ok and all(
            v is not False for v in self.verification.checks().values()
        )

    def to_json(self, include_timestamps: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "m": self.m,
            "B": self.b.to_json(),
            "corner": self.corner.to_json() if self.corner is not None else None,
            "condition_report": self.condition_report.to_json(),
            "phase_exps": list(self.phase_exps) if self.phase_exps is not None else None,
            "global_phase": self.global_phase.to_json() if self.global_phase else None,
            "global_phase_trace": self.global_phase_trace.to_json() if self.global_phase_trace else None,
            "verification": self.verification.to_json(),
            "fully_verified": self.fully_verified,
            "tool_version": self.tool_version,
        }
        if self.u is not None:
            out["U"] = self.u.to_json()
        if include_timestamps and self.timestamps:
            out["timestamps"] = dict(self.timestamps)
        return out

    def dumps(self, include_timestamps: bool = True) -> str:
        return json.dumps(self.to_json(include_timestamps), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> MubCertificate:
        if obj.get("schema") != SCHEMA:
            raise ValueError(f"unknown certificate schema {obj.get('schema')!r}")

        def scaled(key):
            return ScaledCyc8.from_json(obj[key]) if obj.get(key) else None

        return cls(
            m=int(obj["m"]),
            b=BitMatrix.from_json(obj["B"]),
            corner=BitMatrix.from_json(obj["corner"]) if obj.get("corner") else None,
            condition_report=ConditionReport.from_json(obj["condition_report"]),
            phase_exps=tuple(obj["phase_exps"]) if obj.get("phase_exps") is not None else None,
            global_phase=scaled("global_phase"),
            global_phase_trace=scaled("global_phase_trace"),
            verification=Verification.from_json(obj["verification"]),
            u=Cyc8Matrix.from_json(obj["U"]) if obj.get("U") else None,
            tool_version=obj.get("tool_version", ""),
            timestamps=dict(obj.get("timestamps", {})),
        )

    @classmethod
    def loads(cls, text: str) -> MubCertificate:
        return cls.from_json(json.loads(text))


def _max_level(m: int) -> str:
    return "spectrum" if m <= VERIFY_MAX_M else "symplectic"


def build_certificate(
    b: BitMatrix,
    corner: BitMatrix | None = None,
    level: str | None = None,
    emit_u: bool = False,
    timestamp: bool = True,
) -> MubCertificate:
    """Check B, construct what fits the size caps, and verify up to ``level``."""
    m = b.n_rows
    report = check_conditions(b)
    if not report.all_ok:
        raise BuildPreconditionError(report)
    level = level or _max_level(m)
    cert = MubCertificate(m=m, b=b, corner=corner, condition_report=report, verification=Verification(level))
    if m <= PHASE_MAX_M:
        p = phase_vector(b)
        cert.phase_exps = p.exps
        cert.global_phase = global_phase(m)
        try:
            cert.global_phase_trace = global_phase_trace(p, m)
            cert.verification.trace_ok = cert.global_phase_trace == cert.global_phase
        except ConjectureError:
            cert.verification.trace_ok = False
    if m <= DENSE_MAX_M and (emit_u or (level != "symplectic" and m <= VERIFY_MAX_M)):
        u = build_u(b)
        if emit_u:
            cert.u = u
        if level != "symplectic" and m <= VERIFY_MAX_M:
            cyc, spec = sweep(u)
            cert.verification.cyclic_ok = cyc.cyclic_ok
            cert.verification.unbiased_ok = cyc.unbiased_ok
            if level == "spectrum":
                cert.verification.spectrum_ok = spec.ok
    if timestamp:
        cert.timestamps["created"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return cert


@dataclass
class VerifyOutcome:
    ok: bool
    failures: list[str]
    checks: dict[str, bool]


def verify_certificate(cert: MubCertificate, level: str = "symplectic") -> VerifyOutcome:
    """Recompute every claim from (m, B) alone; report the failures in order."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    b, m = cert.b, cert.m
    failures: list[str] = []
    checks: dict[str, bool] = {}

    def record(name, ok):
        checks[name] = bool(ok)
        if not ok:
            failures.append(name)

    record("shape", b.shape == (m, m))
    if failures:
        return VerifyOutcome(False, failures, checks)

    report = check_conditions(b)
    record("condition_report_matches", report == cert.condition_report)
    for name, value in report.to_json().items():
        if name != "first_failing_j":
            record(name, value)

    if level in ("dense", "spectrum"):
        if m > VERIFY_MAX_M:
            raise ValueError(f"level {level!r} needs m <= {VERIFY_MAX_M}")
        p = phase_vector(b)
        if cert.phase_exps is not None:
            record("phase_exps_match", tuple(cert.phase_exps) == p.exps)
        if cert.global_phase is not None:
            record("global_phase_matches", cert.global_phase == global_phase(m))
        try:
            record("trace_ok", global_phase_trace(p, m) == global_phase(m))
        except ConjectureError:
            record("trace_ok", False)
        cyc, spec = sweep(build_u(b))
        record("cyclic_ok", cyc.cyclic_ok)
        record("unbiased_ok", cyc.unbiased_ok)
        if level == "spectrum":
            record("spectrum_ok", spec.ok)
    return VerifyOutcome(not failures, failures, checks)
