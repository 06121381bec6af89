import logging
import math
import typing
from fractions import Fraction

import numpy as np
import toml

from wermerset.utils.algebra import BiPoly, RootSet, UniPoly
from wermerset.utils.branches import BranchPointTable
from wermerset.utils.construction import Construction, GridConfig, Predicate, Stage, VerificationReport
from wermerset.utils.errors import InvariantViolation, SchemaMismatch


logger = logging.getLogger("wermerset.serialization")

SCHEMA_VERSION = 1
PRECISION = 17


def format_real(value: float) -> str:
    return format(float(value), f".{PRECISION}g")


def parse_real(text: str) -> float:
    return float(text)


def format_complex(value: complex) -> typing.List[str]:
    value = complex(value)
    return [format_real(value.real), format_real(value.imag)]


def parse_complex(pair: typing.Sequence[str]) -> complex:
    return complex(parse_real(pair[0]), parse_real(pair[1]))


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _complex_list(values) -> typing.List[typing.List[str]]:
    return [format_complex(value) for value in np.asarray(values, dtype=complex).reshape(-1)]


def _stage_record(stage: Stage) -> typing.Dict[str, typing.Any]:
    record = {
        "n": stage.n,
        "c": format_real(stage.c),
        "eps_exponent": stage.eps_exponent,
        "log10_eps": format_real(stage.log_eps / math.log(10)),
        "m": stage.m,
        "delta": format_real(stage.delta),
        "rho": format_real(stage.rho),
        "p_shape": list(stage.p.coeffs.shape),
        "p": _complex_list(stage.p.coeffs),
    }
    if stage.Z is not None:
        record["Z"] = _complex_list(stage.Z.coeffs)
    if stage.Z_roots is not None:
        record["Z_roots"] = _complex_list(stage.Z_roots.roots)
        record["Z_multiplicities"] = [int(m) for m in stage.Z_roots.multiplicities]
        record["Z_cluster_tol"] = format_real(stage.Z_roots.cluster_tol)
    return record


def _report_record(report: VerificationReport) -> typing.Dict[str, typing.Any]:
    return {
        "predicate": report.predicate.value,
        "stage": report.stage,
        "worst_margin": format_real(report.worst_margin),
        "worst_point": [format_complex(report.worst_point[0]), format_complex(report.worst_point[1])],
        "samples": report.samples,
    }


def to_document(construction: Construction) -> typing.Dict[str, typing.Any]:
    """The construction as a plain dict ready for toml.dumps"""

    return {
        "schema_version": SCHEMA_VERSION,
        "mode": construction.mode,
        "seed": construction.config.seed,
        "grid": construction.config.to_dict(),
        "branch_points": [[format_rational(re), format_rational(im)] for re, im in construction.table.points],
        "stages": [_stage_record(stage) for stage in construction.stages],
        "reports": [_report_record(report) for report in construction.reports],
    }


def dumps(construction: Construction) -> str:
    return toml.dumps(to_document(construction))


def save(construction: Construction, path: str):
    """Writes the construction to path as TOML"""

    with open(path, "w") as a:
        a.write(dumps(construction))
    logger.info(f"Saved {construction!r} to {path}")


def _parse_stage(record: typing.Dict[str, typing.Any]) -> Stage:
    rows, cols = record["p_shape"]
    coeffs = np.array([parse_complex(pair) for pair in record["p"]], dtype=complex).reshape(rows, cols)
    Z = UniPoly([parse_complex(pair) for pair in record["Z"]]) if "Z" in record else None
    Z_roots = None
    if "Z_roots" in record:
        Z_roots = RootSet(
            [parse_complex(pair) for pair in record["Z_roots"]],
            record["Z_multiplicities"],
            parse_real(record["Z_cluster_tol"]),
        )
    return Stage(
        n=int(record["n"]),
        c=parse_real(record["c"]),
        eps_exponent=int(record["eps_exponent"]),
        m=int(record["m"]),
        delta=parse_real(record["delta"]),
        rho=parse_real(record["rho"]),
        p=BiPoly(coeffs),
        Z=Z,
        Z_roots=Z_roots,
    )


def _parse_report(record: typing.Dict[str, typing.Any]) -> VerificationReport:
    z, w = record["worst_point"]
    return VerificationReport(
        predicate=Predicate(record["predicate"]),
        stage=int(record["stage"]),
        worst_margin=parse_real(record["worst_margin"]),
        worst_point=(parse_complex(z), parse_complex(w)),
        samples=int(record["samples"]),
    )


def check_invariants(stages: typing.Sequence[Stage], wermer: bool = False):
    """Raises InvariantViolation naming the first structural invariant a stage list breaks"""

    for index, stage in enumerate(stages, start=1):
        if stage.n != index:
            raise InvariantViolation("STAGE_INDEX", f"record {index} says n={stage.n}")
        if stage.degree != 2 ** stage.n:
            raise InvariantViolation("DEG_W", f"p_{stage.n} has degree {stage.degree} in w, not {2 ** stage.n}")
        if not stage.c > 0:
            raise InvariantViolation("C_LADDER", f"c_{stage.n} = {stage.c} isn't positive")
    for before, after in zip(stages, stages[1:]):
        if after.eps_exponent <= before.eps_exponent:
            raise InvariantViolation(
                "EPS_MONOTONE", f"eps_{after.n} = 2^-{after.eps_exponent} isn't below eps_{before.n} = 2^-{before.eps_exponent}"
            )
        if after.rho <= before.rho + 1:
            raise InvariantViolation("RHO_GAP", f"rho_{after.n} = {after.rho} isn't more than rho_{before.n} + 1")
        if wermer and after.c > before.c / 10:
            raise InvariantViolation("C_LADDER", f"c_{after.n} = {after.c} is more than c_{before.n} / 10")


def from_document(document: typing.Dict[str, typing.Any]) -> Construction:
    """Rebuilds a construction from a parsed file, checking its schema and invariants

    Raises:
        SchemaMismatch: the file was written with another schema version
        InvariantViolation: a stage record breaks one of the structural invariants
    """

    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(version, SCHEMA_VERSION)
    config = GridConfig.from_dict(document.get("grid", {}))
    table = BranchPointTable([(Fraction(re), Fraction(im)) for re, im in document["branch_points"]])
    stages = [_parse_stage(record) for record in document.get("stages", [])]
    reports = [_parse_report(record) for record in document.get("reports", [])]
    mode = document.get("mode", "modified")
    check_invariants(stages, mode == "wermer")
    return Construction(table, config, mode, stages, reports)


def loads(text: str) -> Construction:
    return from_document(toml.loads(text))


def load(path: str) -> Construction:
    """Reads a construction file written by save"""

    with open(path) as a:
        construction = from_document(toml.load(a))
    logger.info(f"Loaded {construction!r} from {path}")
    return construction
