"""Command-line front end: JSON in, JSON report out.

Machine-readable reports go to stdout, a one-line human summary to stderr.
Payloads are validated against the schemas shipped in ``schemas/`` before
any computation.  Exit codes: 0 decided admissible/realizable, 1 decided
not, 2 undecided (numerical not-found or search cap exceeded), 64 input
error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from importlib import resources

import jsonschema

from coneangles import __version__
from coneangles.arrangements import (
    AngleMultiset,
    enumerate_general_arrangements,
    enumerate_reduced_arrangements,
    gauss_bonnet,
    mp_classify,
    odd_lattice_distance,
    residue_vector,
)
from coneangles.decider import (
    PartitionP,
    Reason,
    decide_admissible,
    decide_partition_admissible,
)
from coneangles.exactreal import BasisContext, ExactReal
from coneangles.hurwitz import (
    BranchData,
    PermutationWitness,
    branch_data_from,
    decide_branch_data,
    song_xu_decide,
    verify_witness,
    DEFAULT_SEARCH_CAP,
)
from coneangles.realizer import (
    Configuration,
    RealizeConfig,
    developing_map_description,
    q4_double_zero_exists,
    realize,
    verify_realization,
)

EX_OK = 0
EX_NO = 1
EX_UNDECIDED = 2
EX_INPUT = 64


class InputError(Exception):
    """Bad payload or options; maps to exit code 64."""


def parse_angles(texts, ctx: BasisContext) -> AngleMultiset:
    """Parse and validate angle strings; rejects alpha <= 0 and alpha = 1."""
    angles: list[ExactReal] = []
    one = ctx.one()
    zero = ctx.zero()
    for text in texts:
        try:
            value = ctx.parse(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"angle {text!r}: {exc}") from exc
        if value == one:
            raise InputError(f"angle {text!r} is 1, which is excluded")
        if not value > zero:
            raise InputError(f"angle {text!r} is not positive")
        angles.append(value)
    return AngleMultiset(angles)


def _parse_exact_list(items, ctx: BasisContext) -> list[ExactReal]:
    out = []
    for item in items:
        if isinstance(item, bool):
            raise InputError(f"residue {item!r} must be a string or integer")
        if isinstance(item, int):
            out.append(ctx.rational(item))
        elif isinstance(item, str):
            try:
                out.append(ctx.parse(item))
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(f"residue {item!r}: {exc}") from exc
        else:
            raise InputError(f"residue {item!r} must be a string or integer")
    return out


def _basis_from_options(strings, basis_option: str | None) -> BasisContext:
    """Context sized by the largest t-index seen, numeric values from --basis."""
    max_index = 0
    for s in strings:
        for m in re.finditer(r"t(\d+)", s):
            max_index = max(max_index, int(m.group(1)))
    overrides: dict[int, float] = {}
    if basis_option:
        for piece in basis_option.split(","):
            m = re.fullmatch(r"\s*t(\d+)\s*=\s*([0-9.eE+-]+)\s*", piece)
            if not m:
                raise InputError(f"cannot parse --basis entry {piece!r}")
            overrides[int(m.group(1))] = float(m.group(2))
        if overrides:
            max_index = max(max_index, max(overrides))
    defaults = BasisContext(r=max_index)
    values = [overrides.get(i, defaults.numeric_values[i - 1]) for i in range(1, max_index + 1)]
    try:
        return BasisContext(r=max_index, numeric_values=values)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _arrangement_json(arr) -> dict:
    return {
        "A": [str(a) for a in arr.noninteger],
        "signs": list(arr.signs),
        "B": list(arr.integer_angles),
        "k_prime": arr.k_prime,
        "k_double_prime": arr.k_double_prime,
        "reduced": arr.reduced,
    }


def _configuration_json(cfg: Configuration) -> dict:
    return {
        "residues": list(cfg.residues),
        "positions": [_complex_pair(z) for z in cfg.positions],
        "zero_sites": [_complex_pair(w) for w in cfg.zero_sites],
        "multiplicities": list(cfg.multiplicities),
        "residual": cfg.residual,
    }


def _configuration_from_json(data: dict) -> Configuration:
    return Configuration(
        residues=tuple(float(v) for v in data["residues"]),
        positions=tuple(complex(re_, im) for re_, im in data["positions"]),
        zero_sites=tuple(complex(re_, im) for re_, im in data["zero_sites"]),
        multiplicities=tuple(int(v) for v in data["multiplicities"]),
        residual=float(data.get("residual", 0.0)),
    )


# -- command handlers --------------------------------------------------------


def _cmd_decide(payload, opts):
    ctx = _basis_from_options(payload["angles"], opts.basis)
    alpha = parse_angles(payload["angles"], ctx)
    try:
        verdict = decide_admissible(alpha, exhaustive=opts.exhaustive)
    except RuntimeError as exc:
        raise InputError(str(exc)) from exc
    gb = gauss_bonnet(alpha)
    audit = [
        {
            "inequality": "total_curvature > 0",
            "lhs": str(gb),
            "rhs": "0",
            "holds": gb.compare(ctx.zero()) > 0,
        }
    ]
    report = {
        "command": "decide",
        "input": {"angles": payload["angles"]},
        "admissible": verdict.admissible,
        "reason": verdict.reason.value,
        "witness": None,
        "audit": audit,
    }
    if verdict.arrangement is not None:
        witness = {
            "arrangement": _arrangement_json(verdict.arrangement),
            "residues": [str(e) for e in verdict.residues.entries],
            "b": list(verdict.b) if verdict.b else None,
            "eta": str(verdict.eta) if verdict.eta is not None else None,
            "degree": verdict.degree,
        }
        report["witness"] = witness
        audit.append(
            {
                "inequality": "signed_noninteger_sum == k_prime",
                "lhs": verdict.arrangement.k_prime,
                "rhs": verdict.arrangement.k_prime,
                "holds": True,
            }
        )
        audit.append(
            {
                "inequality": "k_double_prime >= 0 and even",
                "lhs": verdict.arrangement.k_double_prime,
                "rhs": 0,
                "holds": True,
            }
        )
    if verdict.lhs is not None:
        audit.append(
            {
                "inequality": "2*max_integer_angle <= sum_abs_b",
                "lhs": verdict.lhs,
                "rhs": verdict.rhs,
                "holds": verdict.lhs <= verdict.rhs,
            }
        )
    if opts.exhaustive:
        report["exhaustive_cross_check"] = {
            "general_arrangements": len(enumerate_general_arrangements(alpha)),
            "verdict_agrees": True,
        }
    summary = "admissible" if verdict.admissible else f"not admissible ({verdict.reason.value})"
    if verdict.reason is Reason.INEQUALITY_FAILS:
        summary += f": {verdict.lhs} > {verdict.rhs}"
    return report, summary, EX_OK if verdict.admissible else EX_NO


def _cmd_arrangements(payload, opts):
    ctx = _basis_from_options(payload["angles"], opts.basis)
    alpha = parse_angles(payload["angles"], ctx)
    arrs = enumerate_reduced_arrangements(alpha)
    entries = []
    for arr in arrs:
        rv = residue_vector(arr)
        cls = rv.commensurability
        entries.append(
            {
                "arrangement": _arrangement_json(arr),
                "residues": [str(e) for e in rv.entries],
                "q": rv.q,
                "b": list(cls.b) if cls else None,
                "sum_abs_b": cls.abs_sum if cls else None,
            }
        )
    report = {
        "command": "arrangements",
        "input": {"angles": payload["angles"]},
        "count": len(arrs),
        "arrangements": entries,
    }
    if opts.exhaustive:
        report["general_count"] = len(enumerate_general_arrangements(alpha))
    summary = f"{len(arrs)} reduced arrangement(s)"
    return report, summary, EX_OK if arrs else EX_NO


def _cmd_mp_classify(payload, opts):
    ctx = _basis_from_options(payload["angles"], opts.basis)
    alpha = parse_angles(payload["angles"], ctx)
    bucket = mp_classify(alpha, tol=opts.tol)
    gb = gauss_bonnet(alpha)
    distance = odd_lattice_distance(alpha)
    report = {
        "command": "mp-classify",
        "input": {"angles": payload["angles"]},
        "bucket": bucket.value,
        "gauss_bonnet": str(gb),
        "odd_lattice_distance": distance,
        "tolerance": opts.tol,
        "audit": [
            {
                "inequality": "total_curvature > 0",
                "lhs": str(gb),
                "rhs": "0",
                "holds": gb.compare(ctx.zero()) > 0,
            },
            {
                "inequality": "odd_lattice_distance >= 1",
                "lhs": distance,
                "rhs": 1.0,
                "holds": distance >= 1.0 - opts.tol,
            },
        ],
    }
    code = {"H_strict": EX_OK, "H_equality": EX_UNDECIDED}.get(bucket.value, EX_NO)
    return report, f"bucket {bucket.value}", code


def _cmd_partition(payload, opts):
    strings = [s for s in payload["residues"] if isinstance(s, str)]
    ctx = _basis_from_options(strings, opts.basis)
    from coneangles.arrangements import ResidueVector

    try:
        rv = ResidueVector(_parse_exact_list(payload["residues"], ctx))
        partition = PartitionP(payload["partition"])
        admissible = decide_partition_admissible(rv, partition)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    cls = rv.commensurability
    audit = []
    if cls is not None:
        lhs = 2 * (1 + partition.max_part)
        audit.append(
            {
                "inequality": "2*(1 + max_multiplicity) <= sum_abs_b",
                "lhs": lhs,
                "rhs": cls.abs_sum,
                "holds": lhs <= cls.abs_sum,
            }
        )
    report = {
        "command": "partition",
        "input": {"residues": payload["residues"], "partition": payload["partition"]},
        "admissible": admissible,
        "commensurable": cls is not None,
        "b": list(cls.b) if cls else None,
        "eta": str(cls.eta) if cls else None,
        "audit": audit,
    }
    summary = "admissible" if admissible else "not admissible"
    return report, summary, EX_OK if admissible else EX_NO


def _branch_data_from_payload(payload) -> BranchData:
    try:
        if "b" in payload:
            return branch_data_from(payload["b"], PartitionP(payload["partition"]))
        return BranchData(
            degree=payload["degree"],
            zeros=payload["zeros"],
            poles=payload["poles"],
            extras=payload.get("extras", ()),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _cmd_hurwitz(payload, opts):
    bd = _branch_data_from_payload(payload)
    branch_json = {
        "degree": bd.degree,
        "zeros": list(bd.zeros),
        "poles": list(bd.poles),
        "extras": list(bd.extras),
    }
    audit = [
        {
            "inequality": "max_extra <= degree",
            "lhs": max(bd.extras, default=0),
            "rhs": bd.degree,
            "holds": song_xu_decide(bd),
        }
    ]
    if "witness" in payload:
        try:
            witness = PermutationWitness.from_json(payload["witness"])
        except (ValueError, KeyError) as exc:
            raise InputError(f"witness: {exc}") from exc
        valid = verify_witness(bd, witness)
        report = {
            "command": "hurwitz",
            "input": payload,
            "branch_data": branch_json,
            "witness_valid": valid,
            "audit": audit,
        }
        return report, f"witness {'valid' if valid else 'invalid'}", EX_OK if valid else EX_NO
    verdict = decide_branch_data(bd, cap=opts.hurwitz_cap)
    report = {
        "command": "hurwitz",
        "input": payload,
        "branch_data": branch_json,
        "realizable": verdict.realizable,
        "certified": verdict.certified,
        "method": verdict.method,
        "witness": verdict.witness.to_json() if verdict.witness else None,
        "audit": audit,
    }
    if not verdict.certified:
        code = EX_UNDECIDED
        summary = f"{'realizable' if verdict.realizable else 'not realizable'} {verdict.method}"
    else:
        code = EX_OK if verdict.realizable else EX_NO
        summary = "realizable (witness found)" if verdict.realizable else "not realizable (search exhausted)"
    return report, summary, code


def _cmd_realize(payload, opts):
    partition = PartitionP(payload["partition"])
    if "configuration" in payload:
        cfg = _configuration_from_json(payload["configuration"])
        ok = verify_realization(cfg, partition)
        report = {
            "command": "realize",
            "input": payload,
            "verified": ok,
        }
        return report, f"configuration {'verified' if ok else 'rejected'}", EX_OK if ok else EX_NO
    settings = RealizeConfig(
        restarts=payload.get("restarts", opts.restarts),
        residual_tol=payload.get("tol", opts.tol),
        rng_seed=payload.get("seed", opts.seed),
    )
    try:
        cfg = realize(payload["residues"], partition, settings)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {
        "command": "realize",
        "input": {"residues": payload["residues"], "partition": payload["partition"]},
        "options": {
            "restarts": settings.restarts,
            "seed": settings.rng_seed,
            "residual_tol": settings.residual_tol,
        },
        "found": cfg is not None,
    }
    if cfg is None:
        report["note"] = "numerical failure, not a certificate of non-existence"
        return report, "not found (undecided)", EX_UNDECIDED
    dm = developing_map_description(cfg)
    report["configuration"] = _configuration_json(cfg)
    report["developing_map"] = {
        "exponents": [[_complex_pair(z), beta] for z, beta in dm.exponents],
        "cone_points": [[_complex_pair(w), angle] for w, angle in dm.cone_points],
    }
    report["audit"] = [
        {
            "inequality": "verified_residual < residual_tol",
            "lhs": cfg.residual,
            "rhs": settings.residual_tol,
            "holds": cfg.residual < settings.residual_tol,
        }
    ]
    return report, f"found (residual {cfg.residual:.2e})", EX_OK


def _cmd_q4(payload, opts):
    a, b = payload["positive"]
    c, d = payload["negative"]
    try:
        exists = q4_double_zero_exists(a, b, c, d)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {
        "command": "q4",
        "input": payload,
        "double_zero_exists": exists,
        "audit": [
            {
                "inequality": "a != b or c != d",
                "lhs": [a, b],
                "rhs": [c, d],
                "holds": exists,
            }
        ],
    }
    return report, "double zero exists" if exists else "no double zero", EX_OK if exists else EX_NO


_HANDLERS = {
    "decide": _cmd_decide,
    "arrangements": _cmd_arrangements,
    "mp-classify": _cmd_mp_classify,
    "partition": _cmd_partition,
    "hurwitz": _cmd_hurwitz,
    "realize": _cmd_realize,
    "q4": _cmd_q4,
}


def _load_schema(command: str) -> dict:
    path = resources.files("coneangles").joinpath(f"schemas/{command}.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))


def _read_payload(raw: str) -> str:
    if raw == "-":
        return sys.stdin.read()
    if raw.startswith("@"):
        try:
            with open(raw[1:], "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(str(exc)) from exc
    return raw


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coneangles",
        description="Decide cone-angle admissibility and realize charge configurations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        p = sub.add_parser(name, help=f"{name} (payload schema: schemas/{name}.schema.json)")
        p.add_argument(
            "payload",
            help="JSON payload, @file, or - for stdin",
        )
        p.add_argument("--basis", default=None, metavar="SPEC",
                       help="numeric basis values, e.g. 't1=0.7548,t2=0.31'")
        if name in ("decide", "arrangements"):
            p.add_argument("--exhaustive", action="store_true",
                           help="cross-check against non-reduced arrangements")
        if name == "hurwitz":
            p.add_argument("--hurwitz-cap", type=int, default=DEFAULT_SEARCH_CAP,
                           help="largest degree certified by brute force")
        if name == "mp-classify":
            p.add_argument("--tol", type=float, default=1e-9,
                           help="tolerance of the equality bucket")
        if name == "realize":
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--restarts", type=int, default=64)
            p.add_argument("--tol", type=float, default=1e-10,
                           help="verified residual tolerance")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    opts = parser.parse_args(argv)
    try:
        text = _read_payload(opts.payload)
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            print(
                f"input error at line {exc.lineno} column {exc.colno}: {exc.msg}",
                file=sys.stderr,
            )
            return EX_INPUT
        schema = _load_schema(opts.command)
        try:
            jsonschema.validate(payload, schema)
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path) or "(root)"
            print(f"input error: payload {path}: {exc.message}", file=sys.stderr)
            return EX_INPUT
        report, summary, code = _HANDLERS[opts.command](payload, opts)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EX_INPUT
    print(json.dumps(report, indent=2, sort_keys=True))
    print(f"{opts.command}: {summary}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
