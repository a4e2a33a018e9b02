"""Command-line front end.

Output is ``key=value`` lines; lines starting with ``#`` are prose for
humans.  Element references on the command line and in the output are
1-based.  Exit status: 0 success, 1 domain failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Sequence

from .catalog import corpus
from .cayley import Loop, LoopError, NoTwoSidedInverse, read_loop, write_loop
from .doubling import (DoublingSpec, InvalidSpec, PreconditionFailed,
                       SearchBudgetExceeded, StarMap, dbj_into_chein_twice, double,
                       find_isomorphism, star_identity, star_inversion,
                       twice_comparison, validate)
from .idents import characteristic_subsets, profile, _semiauto_mask
from .permact import (DEFAULT_SIZE_LIMIT, Permutation, SizeLimitExceeded, closure_array,
                      inner_generator_array, labelled_inner_generators,
                      mlt_generators)

KIND_NAMES = {"chein": "chein", "dbj": "dbj", "gen": "generalized"}


class UsageError(Exception):
    pass


class DomainFailure(Exception):
    pass


def _bool(v: bool) -> str:
    return str(bool(v)).lower()


def _load(path: str) -> Loop:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    q = read_loop(p)
    if q.name is None:
        q = Loop(q.table, name=p.stem)
    return q


def _element(q: Loop, k: int, what: str) -> int:
    if not 1 <= k <= q.order:
        raise UsageError(f"{what} must lie in 1..{q.order}")
    return k - 1


def _star(q: Loop, spec: str) -> StarMap:
    if spec == "inv":
        return star_inversion(q)
    if spec == "id":
        return star_identity(q)
    if spec.startswith("file:"):
        path = Path(spec[5:])
        if not path.is_file():
            raise UsageError(f"no such star file: {path}")
        lines = [ln for ln in path.read_text().splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")]
        if len(lines) != 1:
            raise DomainFailure("star file must hold exactly one line of images")
        try:
            return StarMap.from_line(q, lines[0])
        except ValueError as exc:
            raise DomainFailure(f"bad star map: {exc}") from None
    raise UsageError("--star must be inv, id or file:<path>")


# --- verbs --------------------------------------------------------------------

def cmd_check(args, out) -> int:
    q = _load(args.file)
    out.write(profile(q, args.limit).to_text(q.name))
    return 0


def cmd_subsets(args, out) -> int:
    q = _load(args.file)
    out.write(f"name={q.name}\norder={q.order}\n")
    for line in characteristic_subsets(q).as_lines():
        out.write(line + "\n")
    return 0


def _group_order(gens, degree: int, limit: int) -> str:
    try:
        return str(closure_array(gens, degree, limit).shape[0])
    except SizeLimitExceeded:
        return f">{limit}"


def cmd_innmaps(args, out) -> int:
    q = _load(args.file)
    mlt = [p.images for p in mlt_generators(q)]
    out.write(f"name={q.name}\n")
    out.write(f"mlt_order={_group_order(mlt, q.order, args.limit)}\n")
    out.write(f"inn_order={_group_order(inner_generator_array(q), q.order, args.limit)}\n")
    if args.verify_semi:
        labels, arr = labelled_inner_generators(q)
        ok = _semiauto_mask(q, arr)
        for label, v in zip(labels, ok):
            out.write(f"semi[{label}]={_bool(v)}\n")
        out.write(f"semi_failures={int((~ok).sum())}\n")
        out.write("# every inner mapping is a semiautomorphism exactly when every "
                  "standard generator is one\n")
    return 0


def cmd_double(args, out) -> int:
    q = _load(args.file)
    kind = KIND_NAMES[args.kind]
    g0 = _element(q, args.g0, "--g0")
    spec = DoublingSpec(q, g0, _star(q, args.star), kind)
    report = validate(spec)
    out.write(f"validation={'pass' if report else 'fail'}\n")
    if not report:
        out.write(f"clause={report.clause}\n")
        if report.witness is not None:
            out.write("witness=" + " ".join(str(w + 1) for w in report.witness) + "\n")
        return 1
    d = double(spec)
    target = Path(args.output) if args.output else Path(f"{Path(args.file).stem}-{args.kind}.loop")
    write_loop(d, target)
    out.write(f"name={d.name}\norder={d.order}\noutput={target}\n")
    return 0


def cmd_iso(args, out) -> int:
    q1, q2 = _load(args.file1), _load(args.file2)
    try:
        phi = find_isomorphism(q1, q2, node_limit=args.node_limit)
    except SearchBudgetExceeded as exc:
        raise DomainFailure(str(exc)) from None
    out.write(f"isomorphic={_bool(phi is not None)}\n")
    if phi is not None:
        out.write("bijection=" + " ".join(str(v + 1) for v in phi.images) + "\n")
    return 0


def cmd_twice(args, out) -> int:
    q = _load(args.file)
    g0 = _element(q, args.g0, "--g0")
    star = _star(q, args.star)
    res = twice_comparison(q, g0, star)
    out.write(f"order={res.q1.order}\n")
    out.write(f"q1={res.q1.name}\nq2={res.q2.name}\n")
    out.write("phi=" + " ".join(str(v + 1) for v in res.phi.images) + "\n")
    out.write(f"verified={_bool(res.verified)}\n")
    ok = res.verified
    if g0 == 0:
        first = dbj_into_chein_twice(q, star)
        out.write(f"first_level_verified={_bool(first.verified)}\n")
        ok = ok and first.verified
    if not ok:
        out.write(f"# failure: {res.report}\n")
    return 0 if ok else 1


def _file_stem(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_")


def cmd_corpus(args, out) -> int:
    loops = corpus()
    for i, q in enumerate(loops, 1):
        out.write(f"loop[{i}]={q.name} order={q.order}\n")
    if args.write:
        target = Path(args.write)
        target.mkdir(parents=True, exist_ok=True)
        for q in loops:
            write_loop(q, target / f"{_file_stem(q.name)}.loop")
        out.write(f"written={target}\n")
    if not args.run_theorems:
        return 0
    from .theorems import run_all
    results = run_all(loops)
    for r in results:
        out.write(r.line() + "\n")
        for v in r.violations:
            out.write(f"# {r.name}: {v}\n")
    ok = all(r.ok for r in results)
    out.write(f"status={'pass' if ok else 'fail'}\n")
    return 0 if ok else 1


def cmd_export(args, out) -> int:
    q = _load(args.file)
    if args.group == "mlt":
        rows = [p.images for p in mlt_generators(q)]
    else:
        rows = [tuple(r) for r in labelled_inner_generators(q)[1].tolist()]
    seen = set()
    for row in rows:
        if row in seen:
            continue
        seen.add(row)
        out.write(Permutation(tuple(row)).cycle_string() + "\n")
    return 0


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="loopkit", description="Finite loop toolkit.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", help="full property profile")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=DEFAULT_SIZE_LIMIT)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("subsets", help="characteristic subsets")
    p.add_argument("file")
    p.set_defaults(fn=cmd_subsets)

    p = sub.add_parser("innmaps", help="orders of Mlt and Inn")
    p.add_argument("file")
    p.add_argument("--verify-semi", action="store_true")
    p.add_argument("--limit", type=int, default=DEFAULT_SIZE_LIMIT)
    p.set_defaults(fn=cmd_innmaps)

    p = sub.add_parser("double", help="build a doubled loop")
    p.add_argument("file")
    p.add_argument("--kind", choices=sorted(KIND_NAMES), required=True)
    p.add_argument("--g0", type=int, required=True)
    p.add_argument("--star", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_double)

    p = sub.add_parser("iso", help="isomorphism search")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--node-limit", type=int, default=1_000_000)
    p.set_defaults(fn=cmd_iso)

    p = sub.add_parser("twice", help="compare the two iterated doubles")
    p.add_argument("file")
    p.add_argument("--g0", type=int, required=True)
    p.add_argument("--star", default="inv")
    p.set_defaults(fn=cmd_twice)

    p = sub.add_parser("corpus", help="list the built-in corpus")
    p.add_argument("--run-theorems", action="store_true")
    p.add_argument("--write", metavar="DIR")
    p.set_defaults(fn=cmd_corpus)

    p = sub.add_parser("export", help="group generators in cycle notation")
    p.add_argument("file")
    p.add_argument("--group", choices=["mlt", "inn"], default="mlt")
    p.set_defaults(fn=cmd_export)
    return ap


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except UsageError as exc:
        print(f"loopkit: error: {exc}", file=sys.stderr)
        return 2
    except InvalidSpec as exc:
        out.write(f"validation=fail\nclause={exc.report.clause}\n")
        return 1
    except (LoopError, PreconditionFailed, DomainFailure, SizeLimitExceeded,
            NoTwoSidedInverse) as exc:
        out.write(f"error={type(exc).__name__}\n# {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
