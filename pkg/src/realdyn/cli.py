"""Command-line front end.

Exit codes: 0 certified in R_d, 1 certified not in R_d, 2 boundary
(indifferent), 3 inconclusive, 64 bad input, 65 budget exceeded, 70 internal
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Sequence

from . import algebraic as alg
from .config import DEFAULT_CONFIG, BudgetError, RunConfig
from .exactpoly import format_poly
from .families import FAMILIES, FamilySpec
from .invariants import CircleSet, preimage
from .ratmap import (
    MultiplierClass,
    RationalMap,
    classify_multiplier,
    fixed_point_data,
    format_map,
    multiplier_at_infinity,
    parse_map,
)
from .realcert import BOUNDARY, IN_RD, INCONCLUSIVE, NOT_IN_RD, certify

EXIT_CODES = {IN_RD: 0, NOT_IN_RD: 1, BOUNDARY: 2, INCONCLUSIVE: 3}
EX_USAGE, EX_BUDGET, EX_SOFTWARE = 64, 65, 70

SCAN_COLUMNS = ("name", "d", "k", "deg_Fk", "real_count_with_multiplicity", "all_real", "wall_time_ms")

log = logging.getLogger("realdyn")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers


def _int_list(text: str) -> list[int]:
    """``"3"``, ``"2,3,5"`` or ``"2..6"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return out


def _frac_list(text: str) -> list[Fraction]:
    out = [Fraction(t.strip().replace("−", "-")) for t in text.split(",") if t.strip()]
    if not out:
        raise UsageError(f"empty list {text!r}")
    return out


def _family_specs(args) -> list[FamilySpec]:
    fam = args.family.strip()
    if fam.startswith("{"):
        return [FamilySpec.from_json(fam)]
    if fam not in FAMILIES:
        raise UsageError(f"unknown family {fam!r}")
    if fam == "fatou_form":
        raise UsageError("fatou_form needs a JSON family spec with c, a and b")
    if fam == "perturbed_cheb2":
        if args.eps is None:
            raise UsageError("perturbed_cheb2 needs --eps")
        return [FamilySpec(fam, {"eps": str(e)}) for e in _frac_list(args.eps)]
    if args.d is None:
        raise UsageError(f"{fam} needs --d")
    ds = _int_list(args.d)
    if fam == "interlacing_random":
        if args.seed is None:
            raise UsageError("interlacing_random needs --seed")
        return [FamilySpec(fam, {"d": d}, s) for d in ds for s in _int_list(args.seed)]
    return [FamilySpec(fam, {"d": d}) for d in ds]


def _subjects(args) -> list[tuple[str, RationalMap]]:
    if (args.map is None) == (args.family is None):
        raise UsageError("give exactly one of --map or --family")
    if args.map is not None:
        return [("map", parse_map(args.map))]
    return [(spec.label, spec.build()) for spec in _family_specs(args)]


def _one_subject(args) -> RationalMap:
    subjects = _subjects(args)
    if len(subjects) != 1:
        raise UsageError("this command takes a single map")
    return subjects[0][1]


def _config(args) -> RunConfig:
    over = {"scan_K": args.K, "threads": args.threads, "max_iterate_degree": getattr(args, "max_degree", None)}
    if args.format is not None:
        over["output_format"] = args.format
    if args.config:
        return RunConfig.from_file(args.config, **over)
    return DEFAULT_CONFIG.with_(**over)


def _point_json(iv):
    if iv.kind == "infinity":
        return "inf"
    if iv.kind == "point":
        return str(iv.lower)
    iv = iv.refined(Fraction(1, 1 << 24))
    if iv.kind == "point":
        return str(iv.lower)
    return {"poly": format_poly(iv.witness), "enclosure": [str(iv.lower), str(iv.upper)]}


def _mult_json(m: MultiplierClass) -> dict:
    out = {"verdict": m.verdict}
    if m.lambda_bounds is not None:
        out["lambda"] = [str(m.lambda_bounds[0]), str(m.lambda_bounds[1])]
    return out


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# commands


def cmd_certify(args, out) -> int:
    f = _one_subject(args)
    config = _config(args)
    S = CircleSet.from_json(args.S) if args.S else None
    cert = certify(f, S, config)
    out.write(_dump(cert.to_json()) + "\n")
    return EXIT_CODES[cert.verdict]


def _scan_member(job) -> list[dict]:
    name, f, ks, config = job
    rows = []
    for k in ks:
        row = {"name": name, "d": f.degree, "k": k, "deg_Fk": "", "real_count_with_multiplicity": "", "all_real": ""}
        t0 = time.perf_counter()
        try:
            data = fixed_point_data(f, k, config)
            row["deg_Fk"] = data.F.degree
            row["real_count_with_multiplicity"] = data.real_count
            row["all_real"] = "true" if data.all_real else "false"
        except BudgetError as exc:
            row["all_real"] = f"budget_error: {exc}"
        row["wall_time_ms"] = round(1000 * (time.perf_counter() - t0))
        rows.append(row)
    return rows


def cmd_scan(args, out) -> int:
    config = _config(args)
    jobs = []
    for name, f in _subjects(args):
        if f.degree < 2:
            raise UsageError(f"{name}: scanning needs degree >= 2")
        K = args.K if args.K is not None else config.scan_depth(f.degree)
        ks = [k for k in range(1, K + 1) if args.K is not None or f.degree**k <= config.max_iterate_degree]
        jobs.append((name, f, ks, config))
    if config.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(_scan_member, jobs))
    else:
        results = [_scan_member(j) for j in jobs]
    rows = [r for rs in results for r in rs]
    if args.no_timing:
        for r in rows:
            r["wall_time_ms"] = ""
    if args.format == "json":
        out.write(_dump(rows) + "\n")
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out.write(buf.getvalue())
    flagged = [r for r in rows if r["all_real"] == "false"]
    for r in flagged:
        log.warning("nonreal periodic points: %s k=%s", r["name"], r["k"])
    return 0


def fixed_points_report(f: RationalMap, k: int, config: RunConfig = DEFAULT_CONFIG) -> dict:
    data = fixed_point_data(f, k, config)
    roots = []
    for iv in data.roots:
        m = classify_multiplier(f, iv, k, config)
        roots.append({"point": _point_json(iv), "multiplicity": iv.multiplicity, "multiplier": _mult_json(m)})
    report = {
        "map": format_map(f),
        "k": k,
        "deg_F": data.F.degree,
        "all_real": data.all_real,
        "roots": roots,
        "infinity_multiplicity": data.infinity_multiplicity,
    }
    if data.infinity_multiplicity:
        report["infinity"] = {
            "multiplicity": data.infinity_multiplicity,
            "multiplier": _mult_json(multiplier_at_infinity(f, k, config)),
        }
    return report


def cmd_fixed_points(args, out) -> int:
    f = _one_subject(args)
    config = _config(args)
    k = args.k if args.k is not None else 1
    if k < 1:
        raise UsageError("--k must be >= 1")
    if f.degree < 2:
        raise UsageError("fixed-points needs a map of degree >= 2")
    report = fixed_points_report(f, k, config)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lower", "upper", "approx", "multiplicity", "verdict", "lambda_lo", "lambda_hi"])
        for iv, r in zip(fixed_point_data(f, k, config).roots, report["roots"]):
            lam = r["multiplier"].get("lambda", ["", ""])
            lo, hi = alg.bounds(alg.as_real(iv.refined(Fraction(1, 1 << 24))))
            w.writerow([str(lo), str(hi), f"{float((lo + hi) / 2):.12g}", r["multiplicity"], r["multiplier"]["verdict"], *lam])
        if "infinity" in report:
            inf = report["infinity"]
            lam = inf["multiplier"].get("lambda", ["", ""])
            w.writerow(["inf", "inf", "inf", inf["multiplicity"], inf["multiplier"]["verdict"], *lam])
        out.write(buf.getvalue())
    else:
        out.write(_dump(report) + "\n")
    return 0


def cmd_preimage(args, out) -> int:
    f = _one_subject(args)
    config = _config(args)
    if not args.S:
        raise UsageError("preimage needs --S")
    S = CircleSet.from_json(args.S)
    P = preimage(f, S, config)
    out.write(_dump({"preimage": P.to_json(), "backward_invariant": P.issubset(S)}) + "\n")
    return 0


def cmd_family(args, out) -> int:
    if args.family is None:
        raise UsageError("family needs --family")
    items = []
    for spec in _family_specs(args):
        f = spec.build()
        items.append({**spec.to_json(), "map": format_map(f), "degree": f.degree})
    out.write(_dump(items[0] if len(items) == 1 else items) + "\n")
    return 0


COMMANDS = {
    "certify": cmd_certify,
    "scan": cmd_scan,
    "fixed-points": cmd_fixed_points,
    "preimage": cmd_preimage,
    "family": cmd_family,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="realdyn", description="Certify real rational maps with only real periodic points.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in (
        ("certify", "print a membership certificate"),
        ("scan", "CSV table of fixed-point realness for f^k"),
        ("fixed-points", "real fixed points of f^k with multipliers"),
        ("preimage", "exact preimage of a circle set"),
        ("family", "print a family member"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--map", help='map text "p" or "p | q", coefficients from the constant term up')
        p.add_argument("--family", help="family name, or a JSON family spec")
        p.add_argument("--d", help="degree, list (2,3) or range (2..6)")
        p.add_argument("--eps", help="perturbation parameter(s), e.g. 1/10 or 0,1/10")
        p.add_argument("--seed", help="seed(s) for interlacing_random")
        p.add_argument("--k", type=int, help="iterate index")
        p.add_argument("--K", type=int, help="largest iterate index to scan")
        p.add_argument("--S", help='circle set JSON, e.g. [["-1","1"]]')
        p.add_argument("--config", help="key=value configuration file")
        p.add_argument("--threads", type=int, help="worker processes for scans")
        p.add_argument("--format", choices=("json", "csv"), help="output format")
        p.add_argument("--max-degree", type=int, dest="max_degree", help="override max_iterate_degree")
        if name == "scan":
            p.add_argument("--no-timing", action="store_true", help="leave wall_time_ms empty (byte-stable output)")
    return parser


_VALUE_FLAGS = ("--map", "--S", "--eps", "--d", "--seed", "--family")


def _glue_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--map -1,0,2`` into ``--map=-1,0,2`` so argparse keeps the value."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
            else:
                out.extend((tok, nxt))
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if not hasattr(args, "no_timing"):
        args.no_timing = False
    try:
        return COMMANDS[args.command](args, out)
    except BudgetError as exc:
        print(f"realdyn: budget exceeded: {exc}", file=sys.stderr)
        return EX_BUDGET
    except (ValueError, ZeroDivisionError, json.JSONDecodeError) as exc:
        print(f"realdyn: {exc}", file=sys.stderr)
        return EX_USAGE
    except Exception as exc:  # pragma: no cover - unexpected failures
        print(f"realdyn: internal error: {exc!r}", file=sys.stderr)
        return EX_SOFTWARE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
