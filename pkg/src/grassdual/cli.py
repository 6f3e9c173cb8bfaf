"""Command-line driver: every check prints as a JSON run report."""
from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import metadata
from typing import Callable

from . import embeddings, grassmann, liecrit, orbits, sff

STATUSES = ("pass", "fail", "indeterminate")


class UsageError(Exception):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.0.0"


class Runner:
    """Collects check records; elapsed_ms stays null unless timing is asked for."""

    def __init__(self, timing: bool = False):
        self.timing = timing
        self.checks: list[dict] = []

    def check(self, name: str, fn: Callable[[], tuple[str, object, object]]) -> None:
        t0 = time.perf_counter()
        status, expected, actual = fn()
        elapsed = round((time.perf_counter() - t0) * 1000, 3) if self.timing else None
        if status not in STATUSES:
            raise ValueError(f"bad status {status!r}")
        self.checks.append({"name": name, "status": status, "expected": expected,
                            "actual": actual, "elapsed_ms": elapsed})


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _ints(text: str, lo: int, hi: int) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")
    if not lo <= len(vals) <= hi:
        raise UsageError(f"expected {lo} to {hi} values, got {len(vals)}")
    return vals


# ------------------------------------------------------------------ checks


def _pair(k: int, n: int):
    if k < 3 or 2 * k > n:
        raise UsageError(f"need 3 <= k and 2k <= n (got k={k}, n={n})")
    return grassmann.standard_pair(n, k)


def do_prop51(run: Runner, a) -> None:
    P, Q = _pair(a.k, a.n)

    def body():
        d = grassmann.osculating_intersection(P, Q).dim
        return _status((d != 0) == (a.k == 3)), {"nonzero": a.k == 3}, {"nonzero": d != 0, "dim": d}

    run.check(f"prop51/k={a.k},n={a.n:02d}", body)


def do_osc_intersect(run: Runner, a) -> None:
    P, Q = _pair(a.k, a.n)

    def body():
        d = grassmann.osculating_intersection(P, Q).dim
        want = 9 if a.k == 3 else 0
        return _status(d == want), want, d

    run.check(f"osc-intersect/k={a.k},n={a.n:02d}", body)


def do_secant_dim(run: Runner, a) -> None:
    if a.k < 1 or 2 * a.k > a.n:
        raise UsageError(f"need 1 <= k and 2k <= n (got k={a.k}, n={a.n})")
    P, Q = grassmann.standard_pair(a.n, a.k)

    def body():
        d = grassmann.terracini_secant_dim(P, Q)
        want = grassmann.expected_secant_dim(a.k, a.n)
        return _status(d == want), want, d

    run.check(f"secant-dim/k={a.k},n={a.n:02d}", body)


def do_sff_certify(run: Runner, a) -> None:
    if a.n < 9:
        raise UsageError("sff certify needs n >= 9")

    def body():
        cert = sff.certify_lemma(a.n, rng_seed=a.seed)
        want = 3 * (a.n - 3)
        return _status(cert.verified and cert.rank == want), want, {
            "rank": cert.rank, "corner_condition": sff.check_star_star(cert.blocks),
            "steps": list(cert.steps)}

    run.check(f"sff-certify/n={a.n:02d}", body)


def do_sff_segre(run: Runner, a) -> None:
    fmt = _ints(a.format, 3, 3)
    if min(fmt) < 1:
        raise UsageError("block sizes must be >= 1")

    def body():
        res = sff.segre_witness(*fmt, rng_seed=a.seed, max_tries=a.max_tries)
        status = "indeterminate" if res.status == "indeterminate" else "pass"
        return status, "witness or impossible", res.to_json()

    run.check("sff-segre/" + ",".join(map(str, fmt)), body)


def _lie_types(a) -> list[tuple[str, int]]:
    try:
        t, r = liecrit._validate(a.type, a.rank)
    except liecrit.LieError as e:
        raise UsageError(str(e))
    return [(t, r)]


def do_lie_diamond(run: Runner, a) -> None:
    for t, r in _lie_types(a):
        rs = liecrit.build_root_system(t, r, a.data_dir)

        def body(rs=rs):
            sols = liecrit.solve_diamond(rs, include_defective=True)
            ok = all(liecrit.verify_solution(rs, s) for s in sols)
            return _status(ok), "every solution reconstructs", {
                "solutions": [s.name for s in sols if not s.defective],
                "defective_secant": [s.name for s in sols if s.defective],
                "witnesses": {s.name: [[str(c) for c in v] for v in s.triple] for s in sols}}

        run.check(f"lie-diamond/{rs.name}", body)


def do_lie_table1(run: Runner, a) -> None:
    if a.max_rank < 5:
        raise UsageError("--max-rank must be >= 5")
    rep = liecrit.table1_report(a.max_rank, a.data_dir)
    for e in rep["entries"]:
        run.check(f"lie-table1/{e['type']}", lambda e=e: (
            _status(e["match"]), e["expected"],
            {k: e[k] for k in ("solutions", "missing", "extra", "defective_secant")}))


def _orbit_n(n: int) -> int:
    if n not in orbits.CATALOG_SIZES:
        raise UsageError("--n must be 6, 7 or 8")
    return n


def do_orbits_verify(run: Runner, a) -> None:
    n = _orbit_n(a.n)
    for i, rec in enumerate(orbits.catalog(n, a.data_dir), 1):
        def body(rec=rec):
            d = orbits.orbit_dim(rec.representative, n)
            return _status(d == rec.expected_proj_dim), rec.expected_proj_dim, d

        run.check(f"orbits-verify/n={n}/{i:02d}-{rec.id}", body)


def do_orbits_dual(run: Runner, a) -> None:
    rep = orbits.verify_duality_table(8, a.data_dir, seed=a.seed)
    for i, row in enumerate(rep["rows"], 1):
        name = f"orbits-dual/{row['kind']}-{i:02d}-{row['target']}"
        run.check(name, lambda row=row: (
            _status(row["pass"]), {"paired": True, "dim": row["target_dim"]},
            {"paired": row["paired"], "dim": row["y_dim"], "generic_dim": row["generic_dim"]}))


def do_orbits_hasse(run: Runner, a) -> None:
    n = _orbit_n(a.n)

    def body():
        doc = orbits.hasse_export(n, a.format, a.data_dir)
        graph = orbits.hasse_graph(n, a.data_dir)
        back = orbits.dot_to_graph(orbits.graph_to_dot(graph))
        return _status(back == graph), "edges decrease dimension; dot round-trips", doc

    run.check(f"orbits-hasse/n={n}", body)


def do_veronese(run: Runner, a) -> None:
    if a.d < 2 or a.n < 1:
        raise UsageError("need d >= 2 and n >= 1")

    def body():
        got = embeddings.veronese_check(a.d, a.n)
        want = a.d != 2
        return _status(got == want), want, got

    run.check(f"veronese/d={a.d},n={a.n}", body)


def do_segre_check(run: Runner, a) -> None:
    dims = _ints(a.dims, 2, 3)
    if min(dims) < 1:
        raise UsageError("factor dimensions must be >= 1")

    def body():
        # Products of projective spaces always have a factor P^m next to a
        # factor with defective secant, so the intersection is nonzero.
        got = embeddings.segre_check(dims)
        return _status(got is False), False, got

    run.check("segre-check/" + ",".join(map(str, dims)), body)


def do_report_all(run: Runner, a) -> None:
    ns = argparse.Namespace(**vars(a))
    for k in range(3, 7):
        for n in range(2 * k, 13):
            ns.k, ns.n = k, n
            do_prop51(run, ns)
    for n in (6, 7, 8):
        ns.k, ns.n = 3, n
        do_secant_dim(run, ns)
    for n in range(9, 22):
        ns.n = n
        do_sff_certify(run, ns)
    ns.max_tries = 100_000
    for fmt in ("1,1,1", "1,1,2", "1,2,2", "2,2,2", "2,2,3", "3,3,2", "3,3,3"):
        ns.format = fmt
        do_sff_segre(run, ns)
    for t in ("F4", "G2", "E6", "E7", "E8"):
        ns.type, ns.rank = t, None
        do_lie_diamond(run, ns)
    ns.max_rank = 8
    do_lie_table1(run, ns)
    for n in (6, 7, 8):
        ns.n = n
        do_orbits_verify(run, ns)
    do_orbits_dual(run, ns)
    ns.format = "json"
    for n in (6, 7, 8):
        ns.n = n
        do_orbits_hasse(run, ns)
    for d in (2, 3, 4):
        for n in range(1, 5):
            ns.d, ns.n = d, n
            do_veronese(run, ns)
    for dims in ("1,1", "2,3", "1,1,1", "2,2,1"):
        ns.dims = dims
        do_segre_check(run, ns)


# ------------------------------------------------------------------ parser


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--human", action="store_true", default=d(False),
                   help="plain-text report instead of JSON")
    p.add_argument("--data-dir", default=d(None), help="directory holding the JSON data files")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized searches")
    p.add_argument("--timing", action="store_true", default=d(False),
                   help="record elapsed_ms (breaks byte-identical output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grassdual",
                                     description="Exact checks on duals of Grassmannians.")
    _common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help, parent=sub):
        p = parent.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    for name, fn, help in (("prop51", do_prop51, "osculating/tangent intersection is nonzero iff k=3"),
                           ("secant-dim", do_secant_dim, "Terracini dimension of sigma_2(G(k,n))"),
                           ("osc-intersect", do_osc_intersect, "dimension of the intersection")):
        p = add(name, fn, help)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--n", type=int, required=True)

    p_sff = sub.add_parser("sff", help="second fundamental form witnesses")
    sff_sub = p_sff.add_subparsers(dest="sff_command", required=True)
    p = add("certify", do_sff_certify, "full-rank quadric for G(3,n)", sff_sub)
    p.add_argument("--n", type=int, required=True)
    p = add("segre", do_sff_segre, "block witness for a three-factor Segre format", sff_sub)
    p.add_argument("--format", required=True, help="K1,K2,K3")
    p.add_argument("--max-tries", type=int, default=100_000)

    p_lie = sub.add_parser("lie", help="criterion on highest weights")
    lie_sub = p_lie.add_subparsers(dest="lie_command", required=True)
    p = add("diamond", do_lie_diamond, "solve the criterion for one type", lie_sub)
    p.add_argument("--type", required=True)
    p.add_argument("--rank", type=int)
    p = add("table1", do_lie_table1, "compare with the stored table", lie_sub)
    p.add_argument("--max-rank", type=int, default=8)

    p_orb = sub.add_parser("orbits", help="trivector orbits for n = 6, 7, 8")
    orb_sub = p_orb.add_subparsers(dest="orbits_command", required=True)
    p = add("verify", do_orbits_verify, "orbit dimensions against the catalog", orb_sub)
    p.add_argument("--n", type=int, required=True)
    add("dual-check", do_orbits_dual, "duality table for n = 8", orb_sub)
    p = add("hasse", do_orbits_hasse, "export stored containment edges", orb_sub)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("dot", "json"), default="dot")

    p = add("veronese", do_veronese, "Veronese osculating/tangent intersection")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = add("segre-check", do_segre_check, "Segre osculating/tangent intersection")
    p.add_argument("--dims", required=True, help="D1,D2[,D3] projective dimensions")
    p = add("report", do_report_all, "run the full suite")
    p.add_argument("--all", action="store_true", required=True)
    return parser


def make_report(argv: list[str], seed: int, checks: list[dict]) -> dict:
    checks = sorted(checks, key=lambda c: c["name"])
    summary = {s: sum(c["status"] == s for c in checks) for s in STATUSES}
    summary["total"] = len(checks)
    return {"command": list(argv), "tool": "grassdual", "version": _version(),
            "seed": seed, "checks": checks, "summary": summary}


def format_human(report: dict) -> str:
    lines = []
    for c in report["checks"]:
        actual = c["actual"]
        if isinstance(actual, str) and "\n" in actual:
            lines.append(f"{c['status'].upper():13} {c['name']}")
            lines.append(actual.rstrip("\n"))
            continue
        lines.append(f"{c['status'].upper():13} {c['name']}  expected={json.dumps(c['expected'], ensure_ascii=False)}"
                     f"  actual={json.dumps(actual, ensure_ascii=False)}")
    s = report["summary"]
    lines.append(f"{s['pass']} pass, {s['fail']} fail, {s['indeterminate']} indeterminate"
                 f" ({s['total']} checks)")
    return "\n".join(lines) + "\n"


def run(argv: list[str] | None = None) -> tuple[int, dict | None, bool]:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0), None, False
    runner = Runner(timing=args.timing)
    try:
        args.func(runner, args)
    except (UsageError, ValueError) as e:
        parser.print_usage(sys.stderr)
        print(f"grassdual: error: {e}", file=sys.stderr)
        return 2, None, False
    report = make_report(argv, args.seed, runner.checks)
    return (1 if report["summary"]["fail"] else 0), report, args.human


def main(argv: list[str] | None = None) -> int:
    code, report, human = run(argv)
    if report is not None:
        if human:
            sys.stdout.write(format_human(report))
        else:
            sys.stdout.write(json.dumps(report, ensure_ascii=False, sort_keys=True, indent=1) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
