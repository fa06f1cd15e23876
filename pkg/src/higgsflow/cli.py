"""Batch command-line front end: runs checks, emits certificates and tables.

Exit codes: 0 all PASS, 2 any FAIL, 3 any FINDING (without FAIL), 1 usage or
internal error.  Outputs are deterministic for a fixed configuration and
seed; timings are recorded only on request so that output trees stay
byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .certificates import (
    Certificate,
    dump_certificate,
    dump_csv,
    dump_index,
    load_certificate,
)
from .errors import DegreeOverflow, HiggsflowError
from .field import build_field, is_prime
from .poly import Poly, RationalMap, frobenius_decompose, iterate_map
from .elliptic import (
    LegendreCurve,
    deuring_supersingular,
    frobenius_trace,
    lattes_p,
)
from .flow import conjecture_check, phi_map
from .dynamics import (
    deformation_coefficient,
    lifting_tower_sim,
    periodic_census,
    separability_report,
    torsion_correspondence,
    torsion_points_are_periodic,
)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 1
    try:
        certs = args.handler(args)
    except HiggsflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return _exit_code(certs)


def _exit_code(certs):
    statuses = {c.status for c in certs}
    if "FAIL" in statuses:
        return 2
    if "FINDING" in statuses:
        return 3
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="higgsflow",
        description="exact verification of the flow self-map and its elliptic mirror",
    )
    parser.set_defaults(command=None)
    sub = parser.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--out", default=None, help="output directory for certificates")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-degree", type=int, default=10 ** 5)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--timings", action="store_true", help="record timing_ms in certificates")

    sp = sub.add_parser("verify-conjecture", help="compare the flow map with the multiplication descent")
    sp.add_argument("--p", type=int, required=True)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--lambda", dest="lam", type=int)
    group.add_argument("--all-lambda", action="store_true")
    common(sp)
    sp.set_defaults(handler=cmd_verify_conjecture)

    sp = sub.add_parser("count-periodic", help="periodic-point census")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--f", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", type=int, required=True)
    sp.add_argument("--side", choices=("flow", "lattes"), default="flow")
    sp.add_argument("--search-degree", type=int, default=None)
    common(sp)
    sp.set_defaults(handler=cmd_count_periodic)

    sp = sub.add_parser("torsion-check", help="torsion correspondence, both directions")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--f", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", type=int, required=True)
    sp.add_argument("--side", choices=("flow", "lattes"), default="flow")
    sp.add_argument("--search-degree", type=int, default=None)
    common(sp)
    sp.set_defaults(handler=cmd_torsion_check)

    sp = sub.add_parser("supersingular-scan", help="three-way supersingularity table")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--degree", type=int, default=1, help="field degree for lambda")
    common(sp)
    sp.set_defaults(handler=cmd_supersingular_scan)

    sp = sub.add_parser("lift-sim", help="iterated lifting field-growth simulator")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--f", type=int, default=1)
    sp.add_argument("--a", type=int, required=True, help="enumeration index of a in F_{p^f}")
    sp.add_argument("--b-mode", choices=("zero", "random", "traced"), default="random")
    sp.add_argument("--steps", type=int, default=5)
    common(sp)
    sp.set_defaults(handler=cmd_lift_sim)

    sp = sub.add_parser("sweep", help="run a declarative matrix of checks")
    sp.add_argument("--config", required=True)
    common(sp)
    sp.set_defaults(handler=cmd_sweep)

    sp = sub.add_parser("revalidate", help="re-check certificates from serialized data only")
    sp.add_argument("--dir", required=True)
    sp.set_defaults(handler=cmd_revalidate)

    return parser


def _require_odd_prime(p):
    if not is_prime(p) or p == 2:
        raise HiggsflowError(f"{p} is not an odd prime")


def _lambdas(args, p):
    field = build_field(p, 1)
    if getattr(args, "all_lambda", False):
        return [field.element(v) for v in range(2, p)]
    lam = args.lam
    if lam is None or lam % p in (0, 1):
        raise HiggsflowError(f"lambda must avoid 0 and 1 mod {p}")
    return [field.element(lam)]


def _timed(args, fn):
    t0 = time.monotonic()
    cert = fn()
    if args.timings:
        cert.timing_ms = int((time.monotonic() - t0) * 1000)
    return cert


def _emit(args, certs, csv_tables=()):
    if not getattr(args, "_quiet", False):
        for cert in certs:
            print(f"{_cert_name(cert)}: {cert.status}")
    if getattr(args, "out", None):
        os.makedirs(args.out, exist_ok=True)
        index_path = os.path.join(args.out, "index.json")
        entries = []
        if os.path.exists(index_path):
            with open(index_path) as fh:
                entries = json.load(fh).get("certificates", [])
        for cert in certs:
            name = _cert_name(cert)
            path = os.path.join(args.out, name + ".json")
            dump_certificate(cert, path)
            entry = {"file": name + ".json", "kind": cert.kind, "status": cert.status}
            entries = [e for e in entries if e["file"] != entry["file"]] + [entry]
        for fname, header, rows in csv_tables:
            dump_csv(rows, header, os.path.join(args.out, fname))
        dump_index(sorted(entries, key=lambda e: e["file"]), index_path)
    return certs


def _cert_name(cert):
    bits = [cert.kind]
    for key in ("p", "f", "lambda", "side", "degree", "a", "b_mode", "steps", "seed"):
        if key in cert.inputs:
            val = cert.inputs[key]
            if isinstance(val, list):
                val = "".join(str(v) for v in val)
            bits.append(f"{key.replace('_', '-')}{val}")
    return "-".join(str(b) for b in bits)


# -- subcommands ---------------------------------------------------------


def cmd_verify_conjecture(args):
    _require_odd_prime(args.p)
    certs = []
    for lam in _lambdas(args, args.p):
        certs.append(_timed(args, lambda lam=lam: conjecture_check(lam)))
    return _emit(args, certs)


def _side_map(side, lam):
    if side == "lattes":
        return lattes_p(LegendreCurve(lam))[0]
    return phi_map(lam)[0]


def cmd_count_periodic(args):
    _require_odd_prime(args.p)
    (lam,) = _lambdas(args, args.p)
    f = args.f

    def run():
        rmap = _side_map(args.side, lam)
        expected = args.p ** (2 * f) + 1
        if rmap.degree >= 2 and rmap.degree ** f > args.max_degree:
            return Certificate(
                kind="periodic-census",
                inputs={"p": args.p, "f": f, "lambda": lam.index(), "side": args.side},
                status="SKIPPED",
                payload={"reason": f"degree {rmap.degree}^{f} exceeds cap {args.max_degree}"},
            )
        census = periodic_census(rmap, f, lam, side=args.side, search_degree=args.search_degree)
        sep = separability_report(rmap, f)
        status = "PASS" if census.total_with_multiplicity == expected else "FAIL"
        return Certificate(
            kind="periodic-census",
            inputs={"p": args.p, "f": f, "lambda": lam.index(), "side": args.side},
            status=status,
            payload={
                "expected": expected,
                "census": census.to_json(),
                "separability": sep,
                "map": rmap.to_json(),
            },
        )

    try:
        cert = _timed(args, run)
    except DegreeOverflow as exc:
        cert = Certificate(
            kind="periodic-census",
            inputs={"p": args.p, "f": f, "lambda": lam.index(), "side": args.side},
            status="SKIPPED",
            payload={"reason": str(exc)},
        )
    tables = []
    if cert.status == "PASS":
        rows = [
            (e["point"], e["multiplicity"], e["field_degree"], e["exact_period"])
            for e in cert.payload["census"]["entries"]
        ]
        tables.append((_cert_name(cert) + ".csv", ("point", "multiplicity", "field_degree", "exact_period"), rows))
    return _emit(args, [cert], tables)


def cmd_torsion_check(args):
    _require_odd_prime(args.p)
    (lam,) = _lambdas(args, args.p)
    f = args.f

    def run():
        rmap = _side_map(args.side, lam)
        search = args.search_degree or 2 * f
        census = periodic_census(rmap, f, lam, side=args.side, search_degree=search)
        reports = torsion_correspondence(lam, f, census)
        checked, failures = torsion_points_are_periodic(lam, f, rmap, search_degree=search)
        forward_bad = [r for r in reports if not (r.divides_minus or r.divides_plus)]
        status = "PASS" if not forward_bad and not failures else "FINDING"
        return Certificate(
            kind="torsion-correspondence",
            inputs={"p": args.p, "f": f, "lambda": lam.index(), "side": args.side},
            status=status,
            payload={
                "search_degree": search,
                "reports": [r.to_json() for r in reports],
                "orders": sorted({r.order for r in reports if r.order is not None}),
                "converse_checked": checked,
                "converse_failures": [z.to_json() for z in failures],
                "violations": [r.to_json() for r in forward_bad],
                "curve": LegendreCurve(lam).to_json(),
            },
        )

    cert = _timed(args, run)
    return _emit(args, [cert])


def cmd_supersingular_scan(args):
    _require_odd_prime(args.p)
    p = args.p
    field = build_field(p, args.degree)

    def run():
        rows = []
        agree = True
        for lam in field:
            if lam.is_zero() or lam == field.one():
                continue
            curve = LegendreCurve(lam)
            by_deuring = deuring_supersingular(p, lam)
            by_trace = frobenius_trace(curve, field.f) % p == 0
            _, psi_v = lattes_p(curve)
            by_derivative = psi_v.derivative().num.is_zero()
            rows.append(
                (lam.index(), by_deuring, by_trace, by_derivative)
            )
            if not (by_deuring == by_trace == by_derivative):
                agree = False
        return Certificate(
            kind="supersingular-scan",
            inputs={"p": p, "degree": args.degree},
            status="PASS" if agree else "FAIL",
            payload={
                "rows": [
                    {"lambda": i, "deuring": d, "trace_zero": t, "derivative_zero": v}
                    for i, d, t, v in rows
                ],
                "supersingular_count": sum(1 for r in rows if r[1]),
            },
        )

    cert = _timed(args, run)
    tables = [(
        _cert_name(cert) + ".csv",
        ("lambda_index", "deuring_zero", "trace_zero", "derivative_zero"),
        [(i, int(d), int(t), int(v)) for i, d, t, v in
         [(r["lambda"], r["deuring"], r["trace_zero"], r["derivative_zero"]) for r in cert.payload["rows"]]],
    )]
    return _emit(args, [cert], tables)


def cmd_lift_sim(args):
    _require_odd_prime(args.p)
    field = build_field(args.p, args.f)
    a = field.from_index(args.a)

    cap = min(args.max_degree, 64)

    def run():
        traj = lifting_tower_sim(
            a, args.f, args.steps, b_mode=args.b_mode, seed=args.seed,
            max_degree=cap,
        )
        return Certificate(
            kind="lift-sim",
            inputs={"p": args.p, "f": args.f, "a": args.a, "b_mode": args.b_mode,
                    "steps": args.steps, "seed": args.seed, "max_degree": cap},
            status="PASS",
            payload={"trajectory": traj},
        )

    cert = _timed(args, run)
    return _emit(args, [cert])


def cmd_sweep(args):
    with open(args.config) as fh:
        config = json.load(fh)
    ps = config.get("p", [3, 5, 7])
    fs = config.get("f", [1])
    checks = config.get("checks", ["conjecture"])
    lam_sel = config.get("lambda", "all")
    certs = []
    tables = []
    for p in sorted(ps):
        _require_odd_prime(p)
        field = build_field(p, 1)
        lams = (
            [field.element(v) for v in range(2, p)]
            if lam_sel == "all"
            else [field.element(v) for v in lam_sel if v % p not in (0, 1)]
        )
        for check in checks:
            if check == "supersingular":
                ns = argparse.Namespace(**{**vars(args), "p": p, "degree": 1, "out": None,
                                           "_quiet": True})
                certs.extend(cmd_supersingular_scan(ns))
                continue
            for lam in lams:
                for f in sorted(fs):
                    ns = argparse.Namespace(**{
                        **vars(args), "p": p, "f": f, "lam": lam.index(),
                        "all_lambda": False, "side": config.get("side", "flow"),
                        "search_degree": config.get("search_degree"), "out": None,
                        "_quiet": True,
                    })
                    if check == "conjecture":
                        if f == sorted(fs)[0]:
                            certs.extend(cmd_verify_conjecture(ns))
                    elif check == "census":
                        certs.extend(cmd_count_periodic(ns))
                    elif check == "torsion":
                        certs.extend(cmd_torsion_check(ns))
                    else:
                        raise HiggsflowError(f"unknown check {check!r}")
    summary = {
        "PASS": sum(1 for c in certs if c.status == "PASS"),
        "FAIL": sum(1 for c in certs if c.status == "FAIL"),
        "FINDING": sum(1 for c in certs if c.status == "FINDING"),
        "SKIPPED": sum(1 for c in certs if c.status == "SKIPPED"),
    }
    print("sweep summary:", json.dumps(summary, sort_keys=True))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "summary.json"), "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _emit(args, certs, tables)
    return certs


# -- revalidation --------------------------------------------------------


def cmd_revalidate(args):
    with open(os.path.join(args.dir, "index.json")) as fh:
        index = json.load(fh)
    bad = []
    for entry in index["certificates"]:
        cert = load_certificate(os.path.join(args.dir, entry["file"]))
        ok = _revalidate_certificate(cert)
        print(f"revalidate {entry['file']}: {'OK' if ok else 'MISMATCH'}")
        if not ok:
            bad.append(entry["file"])
    if bad:
        return [Certificate(kind="revalidate", inputs={}, status="FAIL",
                            payload={"mismatches": bad})]
    return [Certificate(kind="revalidate", inputs={}, status="PASS", payload={})]


def _revalidate_certificate(cert):
    try:
        if cert.kind == "map-commutation":
            return _revalidate_commutation(cert)
        if cert.kind == "periodic-census":
            return _revalidate_census(cert)
        if cert.kind == "torsion-correspondence":
            return _revalidate_torsion(cert)
        if cert.kind == "supersingular-scan":
            return _revalidate_scan(cert)
        if cert.kind == "lift-sim":
            return _revalidate_lift(cert)
        return False
    except Exception:
        return False


def _revalidate_commutation(cert):
    phi = RationalMap.from_json(cert.payload["phi"])
    psi = RationalMap.from_json(cert.payload["psi"])
    other = RationalMap.from_json(cert.payload["multiplication_descent"])
    p = cert.inputs["p"]
    zp = RationalMap(Poly(phi.field, [0] * p + [1]), Poly.one(phi.field))
    if psi.compose(zp) != phi:
        return False
    matches = phi == other
    if cert.status == "PASS":
        return matches
    witness = cert.payload.get("witness")
    if matches or not witness:
        return False
    part = getattr(phi, witness["part"]), getattr(other, witness["part"])
    i = witness["coefficient"]
    return [part[0][i].to_json(), part[1][i].to_json()] == witness["values"]


def _revalidate_census(cert):
    if cert.status == "SKIPPED":
        return True
    rmap = RationalMap.from_json(cert.payload["map"])
    census = cert.payload["census"]
    f = census["period"]
    iterated = iterate_map(rmap, f)
    big = build_field(rmap.field.p, census["search_degree"])
    lifted = iterated.map_field(big)
    found = 0
    from .poly import ProjPoint  # local to avoid polluting module surface

    for entry in census["entries"]:
        if entry["point"] == "inf":
            z = ProjPoint.infinity(big)
        else:
            z = ProjPoint.finite(big.element(entry["point"]))
            found += entry["multiplicity"]
        if lifted.eval_proj(z) != z:
            return False
    total = census["total_with_multiplicity"]
    if total != cert.payload["expected"] and cert.status == "PASS":
        return False
    inf_mult = sum(e["multiplicity"] for e in census["entries"] if e["point"] == "inf")
    return found + inf_mult + census["unaccounted_multiplicity"] == total


def _revalidate_torsion(cert):
    curve_info = cert.payload["curve"]
    fld = build_field(curve_info["p"], curve_info["f"])
    lam = fld.element(curve_info["lambda"])
    p, f = cert.inputs["p"], cert.inputs["f"]
    minus, plus = p ** f - 1, p ** f + 1
    for rep in cert.payload["reports"]:
        if rep["order"] is None:
            continue
        lift = rep["lift"]
        if lift == "O":
            if rep["order"] != 1:
                return False
            continue
        from .field import embed
        from .elliptic import LegendreCurve as LC

        xe = lift["x"]
        target = build_field(p, len(xe))
        curve = LC(embed(lam, target))
        P = curve.point(target.element(xe), target.element(lift["y"]))
        if not P.scalar_mul(rep["order"]).is_identity:
            return False
        if rep["divides_minus"] != (minus % rep["order"] == 0):
            return False
        if rep["divides_plus"] != (plus % rep["order"] == 0):
            return False
    return True


def _revalidate_scan(cert):
    p = cert.inputs["p"]
    fld = build_field(p, cert.inputs["degree"])
    for row in cert.payload["rows"]:
        lam = fld.from_index(row["lambda"])
        if deuring_supersingular(p, lam) != row["deuring"]:
            return False
        agree = row["deuring"] == row["trace_zero"] == row["derivative_zero"]
        if agree != (cert.status == "PASS") and not agree:
            return False
    return True


def _revalidate_lift(cert):
    fld = build_field(cert.inputs["p"], cert.inputs["f"])
    a = fld.from_index(cert.inputs["a"])
    traj = lifting_tower_sim(
        a, cert.inputs["f"], cert.inputs["steps"],
        b_mode=cert.inputs["b_mode"], seed=cert.inputs["seed"],
        max_degree=cert.inputs.get("max_degree", 64),
    )
    return traj["degrees"] == cert.payload["trajectory"]["degrees"]


if __name__ == "__main__":
    sys.exit(main())
