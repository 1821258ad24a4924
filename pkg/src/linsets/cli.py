"""Command-line front end.

    linsets construct jv --q 2 --t 5 --ks 3,2
    linsets analyze subspace.json
    linsets verify thm14 subspace.json --omega omega.json
    linsets sweep suite.json --format table

Exit codes: 0 when every verdict passes, 1 on a bound or prediction
violation, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from .bounds import (
    DEFAULT_SEARCH_BUDGET,
    canonical_spaces,
    classify_minimum,
    d_minimum_value,
    verify_thm14,
    verify_thm16,
)
from .constructions import (
    Build,
    CasertaParams,
    JVParams,
    caserta_build,
    default_Z,
    jv_build,
    jv_subspace,
    prime_build,
    product_build,
    unit_vector,
)
from .errors import HypothesisError, InternalInconsistency, TheoremViolation
from .fields import ENUMERATION_CAP, FieldTower, tower_for
from .linset import FqSubspace, max_field_of_linearity, report, span_fq
from .oracle import random_subspace
from .projgeo import ProjSubspace

DEFAULT_SEED = 20240601
CSV_COLUMNS = ["q", "n", "d", "k", "size", "bound", "slack", "class"]


class UsageError(Exception):
    pass


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:  # running from a source tree
        return "0+unknown"


# ----------------------------------------------------------------------
# building instances from parameter records
# ----------------------------------------------------------------------
def _ints(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(a) for a in text)
    return tuple(int(a) for a in str(text).split(",") if a.strip())


def base_jv(q: int, s: int, t: int, ks) -> FqSubspace:
    """JV over F_{q^t}, embedded in the tower of F_{q^{st}}."""
    return jv_subspace(JVParams(q, s * t, t, _ints(ks)))


def build_instance(kind: str, params: dict, *, strict: bool = True) -> Build:
    """One construction from a flat parameter record (CLI flags or a suite entry)."""
    P = dict(params)
    try:
        if kind == "jv":
            t = int(P["t"])
            return jv_build(JVParams(int(P["q"]), int(P.get("n") or t), t, _ints(P["ks"])), strict=strict)
        if kind == "caserta":
            q, s, t, r = int(P["q"]), int(P["s"]), int(P["t"]), int(P.get("r", 1))
            Up = base_jv(q, s, t, P.get("uprime_ks", "2,1"))
            Z = default_Z(Up.tower, Up.e, t, r)
            return caserta_build(CasertaParams(q, s, t, Z, Up), strict=strict)
        if kind == "prime":
            return prime_build(int(P["q"]), int(P["n"]), int(P["d"]), int(P["r"]), int(P["k1"]), strict=strict)
        if kind == "product":
            q, s, t = int(P["q"]), int(P["s"]), int(P["t"])
            U2 = base_jv(q, s, t, P.get("u2_ks", "2,1"))
            T, e = U2.tower, U2.e
            d1, k1 = int(P.get("d1", 0)), int(P.get("k1", 1))
            g = T.subfield_primitive(e * s * t)
            gens = [unit_vector(d1, c, T.pow(g, j)) for c in range(d1 + 1) for j in range(s)][:k1]
            U1 = span_fq(T, gens, e * t)
            return product_build(U1, U2, t, strict=strict)
    except KeyError as exc:
        raise UsageError(f"{kind}: missing parameter {exc.args[0]}") from exc
    raise UsageError(f"unknown construction {kind!r}")


def load_subspace(path: str, cap: int) -> FqSubspace:
    try:
        record = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if "subspace" in record:
        record = record["subspace"]
    try:
        return FqSubspace.from_json(record, allow_large=cap > ENUMERATION_CAP)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a subspace record: {exc}") from exc


def load_omega(path: str, tower: FieldTower) -> ProjSubspace:
    try:
        record = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    record = record.get("omega", record)
    return ProjSubspace.from_json(record, tower=tower)


# ----------------------------------------------------------------------
# output
# ----------------------------------------------------------------------
def envelope(payload: dict, tower: FieldTower | None) -> dict:
    out = {"tool": "linsets", "version": tool_version()}
    if tower is not None:
        out["tower"] = tower.to_json()
    out.update(payload)
    return out


def summary_row(b_or_U, rep, cls_label: str, bound: int | None) -> dict:
    U = b_or_U.U if isinstance(b_or_U, Build) else b_or_U
    return {
        "q": U.q, "n": U.n, "d": U.d, "k": U.k, "size": rep.size,
        "bound": "" if bound is None else bound,
        "slack": "" if bound is None else rep.size - bound,
        "class": cls_label,
    }


def render(doc: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    cols = CSV_COLUMNS + (["name"] if rows and "name" in rows[0] else [])
    cells = [cols] + [[str(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(len(cols))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(line, widths)).rstrip() + "\n" for line in cells)


def best_thm14(U: FqSubspace, rep, budget: int):
    """Tightest canonical-section certificate over r = 1..min(d, k-1), first space per r."""
    best = None
    for r in range(1, min(U.d, U.k - 1) + 1):
        found = canonical_spaces(U, r, rep, budget=budget, first_only=True).spaces
        if found:
            cert = verify_thm14(U, found[0], rep)
            if best is None or cert.bound > best.bound:
                best = cert
    return best


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------
def cmd_construct(args) -> tuple[dict, list[dict], bool]:
    params = {k: v for k, v in vars(args).items()
              if k in {"q", "n", "t", "s", "r", "d", "k", "k1", "d1", "ks", "uprime_ks", "u2_ks"} and v is not None}
    if args.kind == "random":
        for need in ("q", "n", "d", "k"):
            if need not in params:
                raise UsageError(f"random: --{need} is required")
        U = random_subspace(params["q"], params["n"], params["d"], params["k"], args.seed)
        rep = report(U, args.cap)
        doc = envelope({"construction": "random", "params": {**params, "seed": args.seed},
                        "report": rep.to_json(), "subspace": U.to_json()}, U.tower)
        return doc, [summary_row(U, rep, "", None)], all(rep.identities.values())
    b = build_instance(args.kind, params, strict=False)
    cls = classify_minimum(b.U, b.report)
    doc = envelope({**b.to_json(), "classification": cls.to_json()}, b.U.tower)
    return doc, [summary_row(b, b.report, cls.label(), None)], b.ok


def cmd_analyze(args):
    U = load_subspace(args.subspace, args.cap)
    rep = report(U, args.cap)
    cls = classify_minimum(U, rep)
    doc = envelope({
        "report": rep.to_json(),
        "max_field_of_linearity": max_field_of_linearity(U),
        "classification": cls.to_json(),
        "subspace": U.to_json(),
    }, U.tower)
    return doc, [summary_row(U, rep, cls.label(), None)], all(rep.identities.values())


def cmd_verify(args):
    U = load_subspace(args.subspace, args.cap)
    rep = report(U, args.cap)
    if args.check == "identities":
        ok = all(rep.identities.values())
        doc = envelope({"identities": rep.identities, "report": rep.to_json()}, U.tower)
        return doc, [summary_row(U, rep, "", None)], ok
    if args.check == "classify":
        cls = classify_minimum(U, rep, budget=args.budget)
        doc = envelope({"classification": cls.to_json(), "label": cls.label()}, U.tower)
        return doc, [summary_row(U, rep, cls.label(), cls.d_minimum_value)], True
    if args.check == "thm16":
        cert = verify_thm16(U, override_gate=args.override_thm16_gate, rep=rep, budget=args.budget)
        doc = envelope({"certificate": cert.to_json()}, U.tower)
        return doc, [summary_row(U, rep, "thm16", cert.bound)], cert.holds
    # thm14
    if args.omega:
        cert = verify_thm14(U, load_omega(args.omega, U.tower), rep)
    else:
        cert = best_thm14(U, rep, args.budget)
        if cert is None:
            raise UsageError("no canonical subspace found; pass --omega")
    doc = envelope({"certificate": cert.to_json()}, U.tower)
    return doc, [summary_row(U, rep, "thm14", cert.bound)], cert.holds


def load_suite(path: str) -> list[dict]:
    if path == "reference":
        text = resources.files("linsets").joinpath("suites/reference.json").read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        suite = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    entries = suite["instances"] if isinstance(suite, dict) else suite
    if not isinstance(entries, list):
        raise UsageError("a suite is a list of instances or {\"instances\": [...]}")
    return entries


def cmd_sweep(args):
    rows, results, ok = [], [], True
    for i, entry in enumerate(load_suite(args.suite)):
        if "construct" not in entry:
            raise UsageError(f"suite entry {i} has no 'construct' field")
        name = entry.get("name", f"#{i}")
        b = build_instance(entry["construct"], entry.get("params", {}), strict=False)
        cls = classify_minimum(b.U, b.report, budget=args.budget)
        cert = best_thm14(b.U, b.report, args.budget)
        bound = cert.bound if cert else None
        equality = bool(cert and cert.equality)
        expect = entry.get("expect", {})
        checks = dict(b.verdict)
        if "equality" in expect:
            checks["expected equality"] = expect["equality"] == equality
        if "d_minimum" in expect:
            checks["expected d-minimum"] = expect["d_minimum"] == cls.d_minimum
        if "size" in expect:
            checks["expected size"] = expect["size"] == b.report.size
        passed = all(checks.values())
        ok &= passed
        row = summary_row(b, b.report, cls.label(), bound)
        row["name"] = name
        rows.append(row)
        results.append({
            "name": name, "construct": entry["construct"], "params": b.params,
            "report": b.report.to_json(), "classification": cls.to_json(),
            "certificate": cert.to_json() if cert else None,
            "d_minimum_value": d_minimum_value(b.U.q, b.U.k, b.U.d),
            "equality": equality, "checks": checks, "passed": passed,
        })
    return envelope({"suite": args.suite, "results": results}, None), rows, ok


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--cap", type=int, default=ENUMERATION_CAP, help="enumeration cap on q^k")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                        help="canonical-subspace search budget")
    common.add_argument("--override-thm16-gate", action="store_true",
                        help="apply the prime-degree bound outside its hypotheses")

    ap = _Parser(prog="linsets", description="Linear sets in PG(d, q^n): constructions, weights and size bounds.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a named construction")
    c.add_argument("kind", choices=["jv", "caserta", "prime", "product", "random"])
    for flag in ("q", "n", "t", "s", "r", "d", "k", "k1", "d1"):
        c.add_argument(f"--{flag}", type=int)
    c.add_argument("--ks", help="k_0,...,k_d for jv")
    c.add_argument("--uprime-ks", help="JV exponents of the base subspace for caserta (default 2,1)")
    c.add_argument("--u2-ks", help="JV exponents of U_2 for product (default 2,1)")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", parents=[common], help="report on a subspace file")
    a.add_argument("subspace")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", parents=[common], help="check identities, bounds or minimum-size classes")
    v.add_argument("check", choices=["thm14", "thm16", "identities", "classify"])
    v.add_argument("subspace")
    v.add_argument("--omega", help="projective subspace file for thm14")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="run every instance of a suite file ('reference' for the bundled one)")
    s.add_argument("suite")
    s.set_defaults(func=cmd_sweep)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        if args.cap <= 0:
            raise UsageError("--cap must be positive")
        doc, rows, ok = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except HypothesisError as exc:
        print(f"hypothesis not met: {exc}", file=err)
        return 2
    except (TheoremViolation, InternalInconsistency) as exc:
        print(f"violation: {exc}", file=err)
        return 1
    except ValueError as exc:
        print(f"invalid input: {exc}", file=err)
        return 2
    out.write(render(doc, rows, args.format))
    return 0 if ok else 1


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
