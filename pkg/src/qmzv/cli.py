"""Command-line front end.

Subcommands: hsum, verify, dims, mine, member, limits, tables.  All outputs
are UTF-8 CSV or JSON; the exit status is nonzero iff a requested check
failed.  The vectorization cache directory defaults to ~/.cache/qmzv and can
be overridden with --cache-dir or the QMZV_CACHE_DIR environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import mpmath as mp

from . import miner, tables, verify, words
from .harmonic import hsum_mod
from .indexes import ExpVector, Index
from .miner import GeneratorDescriptor, VectorCache


def _cache_from(args) -> VectorCache | None:
    if getattr(args, "no_cache", False):
        return None
    root = getattr(args, "cache_dir", None) or os.environ.get("QMZV_CACHE_DIR")
    if not root:
        root = Path.home() / ".cache" / "qmzv"
    return VectorCache(root)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv_text(rows, header=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _parse_primes(text: str, weight: int) -> list[int] | None:
    if text == "auto":
        return None
    return [int(t) for t in text.split(",")]


# -- subcommand implementations ---------------------------------------------
def _cmd_hsum(args) -> int:
    k = Index.parse(args.index)
    s = ExpVector.parse(args.s) if args.s is not None else None
    variant = args.variant
    if s is not None:
        variant = "generalized"
    value = hsum_mod(variant, args.p, args.n, k, s)
    payload = {
        "variant": variant,
        "p": args.p,
        "n": args.n,
        "index": str(k),
        "s": None if s is None else ",".join(map(str, s)),
        "residue": value.residue.to_coeff_strings(),
        "pretty": repr(value.residue),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    reports = []
    if args.id == "wt1":
        reports.append(verify.verify_weight_one(args.p, args.n))
    elif args.id == "reversal":
        k = Index.parse(args.index)
        reports.append(verify.verify_reversal(args.p, args.n, k, "star" if args.star else "plain"))
    elif args.id == "duality":
        reports.append(verify.verify_hat_duality(args.p, args.n, Index.parse(args.index)))
    elif args.id == "cyclic":
        k = Index.parse(args.index)
        reports.append(verify.verify_cyclic(args.p, args.n, k, args.star))
    elif args.id == "q2":
        reports.append(verify.verify_q2_suite(args.p, Index.parse(args.index)))
    elif args.id == "bradley":
        reports.append(verify.verify_bradley(args.n_upper, Index.parse(args.index)))
    elif args.id == "theta":
        reports.append(verify.verify_theta_lemma(args.l, args.kpow, args.m))
    else:  # grid sweep over every checker
        grid, skipped = verify.run_grid(max_weight=args.max_weight)
        reports.extend(grid)
        for s in skipped:
            print(f"SKIP {s}", file=sys.stderr)
    lines = [json.dumps(r.to_json_dict()) for r in reports]
    n_pass = sum(r.passed for r in reports)
    summary = f"# {n_pass}/{len(reports)} passed\n"
    _emit("\n".join(lines) + "\n" + summary, args.out)
    return 0 if n_pass == len(reports) else 1


def _parse_weights(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(t) for t in text.split(",")]


def _cmd_dims(args) -> int:
    cache = _cache_from(args)
    rows = []
    for k in _parse_weights(args.weights):
        S = _parse_primes(args.primes, k) if args.primes else None
        rep = miner.dim_tilde(args.family, k, S=S, jobs=args.jobs, cache=cache)
        rows.append(rep)
    if args.format == "json":
        payload = [
            {
                "family": r.family,
                "k": r.k,
                "primes": r.primes,
                "rank_full": r.rank_full,
                "rank_V": r.rank_v,
                "dim_tilde": r.dim_tilde,
                "stabilized": r.stabilized,
            }
            for r in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        table = [
            [r.family, r.k, r.rank_full, r.rank_v, r.dim_tilde, r.stabilized, " ".join(map(str, r.primes))]
            for r in rows
        ]
        _emit(_csv_text(table, ["family", "k", "rank_full", "rank_V", "dim_tilde", "stabilized", "primes"]), args.out)
    return 0


def _cmd_mine(args) -> int:
    cache = _cache_from(args)
    S = _parse_primes(args.primes, args.weight) if args.primes else None
    found = miner.find_relations(args.family, args.weight, S=S, jobs=args.jobs, cache=cache)
    payload = [r.to_json_dict() for r in found]
    text = json.dumps(payload, indent=2) + "\n"
    _emit(text, args.emit or args.out)
    print(f"# {len(found)} relation candidates (family {args.family}, weight {args.weight})",
          file=sys.stderr)
    return 0


def _load_target(path: str) -> list[tuple[Fraction, GeneratorDescriptor]]:
    spec = json.loads(Path(path).read_text())
    return [
        (Fraction(t["coeff"]), GeneratorDescriptor.from_json_dict(t["descriptor"]))
        for t in spec["terms"]
    ]


def _load_span(path: str) -> tuple[list[GeneratorDescriptor], int]:
    spec = json.loads(Path(path).read_text())
    if "descriptors" in spec:
        descs = [GeneratorDescriptor.from_json_dict(d) for d in spec["descriptors"]]
        n = int(spec.get("n", 1))
        return descs, n
    family, weight = spec["family"], int(spec["weight"])
    n = miner.family_depth(family)
    if spec.get("v_scaled", True):
        return miner.v_space_gens(family, weight), n
    return miner.gens(family, weight), n


def _cmd_member(args) -> int:
    cache = _cache_from(args)
    target = _load_target(args.target)
    span, n = _load_span(args.span)
    res = miner.membership(target, span, n=n, jobs=args.jobs, cache=cache)
    payload = {
        "member": res.member,
        "primes": res.primes,
        "note": res.note(),
    }
    if res.member:
        payload["coefficients"] = [str(c) for c in res.coefficients]
    else:
        nz = [(i, str(c)) for i, c in enumerate(res.separating_functional) if c]
        payload["separating_functional_nonzeros"] = nz[:32]
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_limits(args) -> int:
    from .limits import convergence_report

    k = Index.parse(args.index)
    m_list = [int(t) for t in args.m.split(",")]
    rows = convergence_report(k, m_list, args.order, args.digits)
    with mp.workdps(args.digits):
        table = []
        for r in rows:
            table.append([
                r.m,
                r.l,
                mp.nstr(r.value.real, args.digits),
                mp.nstr(r.value.imag, args.digits),
                "" if r.delta is None else mp.nstr(r.delta, 10),
            ])
    if args.format == "json":
        payload = [
            dict(zip(["m", "l", "re", "im", "delta"], row)) for row in table
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(_csv_text(table, ["m", "l", "re_alpha", "im_alpha", "abs_delta"]), args.out)
    return 0


def _cmd_tables(args) -> int:
    cache = _cache_from(args)
    cells = tables.regenerate(long_run=args.long, jobs=args.jobs, cache=cache)
    text = _csv_text([c.as_row() for c in cells], ["table", "k", "expected", "computed", "flag"])
    _emit(text, args.out)
    return 0 if tables.all_computed_match(cells) else 1


def _cmd_wordquotient(args) -> int:
    rows, wlist = words.relation_space(args.weight)
    if args.export:
        _emit(words.export_matrix(rows, wlist), args.export)
    print(words.dim_word_quotient(args.weight))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qmzv", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, cache=False):
        p.add_argument("--out", help="write output to a file instead of stdout")
        if cache:
            p.add_argument("--cache-dir", help="vectorization cache directory")
            p.add_argument("--no-cache", action="store_true")
            p.add_argument("--jobs", type=int, default=None, help="parallel workers across primes")

    p = sub.add_parser("hsum", help="one harmonic q-sum residue mod [p]^n")
    p.add_argument("--variant", default="plain", choices=["plain", "star", "bar", "bar_star"])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--index", required=True)
    p.add_argument("--s", help="exponent vector, e.g. 's=3,0' (switches to the generalized variant)")
    common(p)
    p.set_defaults(fn=_cmd_hsum)

    p = sub.add_parser("verify", help="run one identity checker (or the whole grid)")
    p.add_argument("--id", required=True,
                   choices=["reversal", "duality", "cyclic", "wt1", "q2", "bradley", "theta", "grid"])
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--index", default="")
    p.add_argument("--star", action="store_true")
    p.add_argument("--n-upper", type=int, default=6, dest="n_upper")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--kpow", type=int, default=2, help="pole order k for the theta lemma")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--max-weight", type=int, default=3, dest="max_weight")
    common(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("dims", help="numerical dimension table rows")
    p.add_argument("--family", required=True, choices=list(miner.FAMILIES))
    p.add_argument("--weights", required=True, help="range a..b or comma list")
    p.add_argument("--primes", default=None, help="comma list or 'auto'")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    common(p, cache=True)
    p.set_defaults(fn=_cmd_dims)

    p = sub.add_parser("mine", help="nullspace relation candidates")
    p.add_argument("--family", required=True, choices=list(miner.FAMILIES))
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--primes", default=None)
    p.add_argument("--emit", help="write relation JSON here")
    common(p, cache=True)
    p.set_defaults(fn=_cmd_mine)

    p = sub.add_parser("member", help="span membership with certificate")
    p.add_argument("--target", required=True, help="target spec JSON path")
    p.add_argument("--span", required=True, help="span spec JSON path")
    common(p, cache=True)
    p.set_defaults(fn=_cmd_member)

    p = sub.add_parser("limits", help="root-of-unity limit trajectories")
    p.add_argument("--index", required=True)
    p.add_argument("--m", default="100,500,2000")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    common(p)
    p.set_defaults(fn=_cmd_limits)

    p = sub.add_parser("tables", help="regenerate all reference tables with match flags")
    p.add_argument("--long", action="store_true", help="include the long-running rows")
    common(p, cache=True)
    p.set_defaults(fn=_cmd_tables)

    p = sub.add_parser("wordquotient", help="weight-k word-space quotient dimension")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--export", help="write the relation matrix in text form")
    common(p)
    p.set_defaults(fn=_cmd_wordquotient)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
