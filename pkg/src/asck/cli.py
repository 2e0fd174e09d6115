"""Command-line interface.

Exit codes: 0 when everything passed or both sides of a statement
agreed; 1 when a yes/no query answered no; 2 on input or format
errors; 3 when the two sides of a statement disagreed (which would be
an implementation bug).  ``-`` stands for stdin/stdout everywhere a
file is expected.  ASCK_THREADS caps corpus parallelism (0 or unset
picks a default).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import IO

from .checks import (
    check_bipartite_criterion,
    check_partite_criterion,
    is_p_scheme,
)
from .constructions import (
    cyclic_table,
    digraph_color_matrix,
    thin_scheme,
    wl_closure,
    wreath,
)
from .core import Scheme, validate
from .corpus import CorpusMember, CorpusSpec, generate_corpus, run_corpus_checks
from .errors import SchemeError
from .io import ccm_text, read_ccm, read_dg
from .lattice import all_equivalences

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_DISAGREE = 3


def _read_scheme(path: str) -> Scheme:
    source: str | IO[str] = sys.stdin if path == "-" else path
    return validate(read_ccm(source))


def _write_text(text: str, dest: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def _threads_from_env() -> int | None:
    raw = os.environ.get("ASCK_THREADS", "").strip()
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise SchemeError(f"ASCK_THREADS must be an integer, got {raw!r}") from None
    return None if value <= 0 else value


def _ints_csv(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise SchemeError(f"{what} must be comma-separated integers, got {text!r}") from None


# -- subcommands ---------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    scheme = _read_scheme(args.file)
    print(f"valid: n={scheme.n} r={scheme.r}")
    return EXIT_OK


def _cmd_info(args: argparse.Namespace) -> int:
    s = _read_scheme(args.file)
    if args.machine:
        pairs = {
            "degrees": ",".join(str(d) for d in s.degrees),
            "fiber-sizes": ",".join(str(len(f)) for f in s.fibers),
            "fibers": str(len(s.fibers)),
            "homogeneous": "true" if s.is_homogeneous else "false",
            "n": str(s.n),
            "r": str(s.r),
            "scheme": s.hash,
            "sizes": ",".join(str(z) for z in s.sizes),
        }
        print("\n".join(f"{k}={v}" for k, v in pairs.items()))
    else:
        print(f"n: {s.n}")
        print(f"rank: {s.r}")
        print(f"fibers: {len(s.fibers)} (sizes {' '.join(str(len(f)) for f in s.fibers)})")
        print(f"homogeneous: {'true' if s.is_homogeneous else 'false'}")
        print(f"degrees: {' '.join(str(d) for d in s.degrees)}")
        print(f"sizes: {' '.join(str(z) for z in s.sizes)}")
        print(f"hash: {s.hash}")
    return EXIT_OK


def _cmd_closed_sets(args: argparse.Namespace) -> int:
    s = _read_scheme(args.file)
    eqs = all_equivalences(s)
    print(f"closed sets: {len(eqs)}")
    for i, e in enumerate(eqs):
        colors = " ".join(str(c) for c in sorted(e.colors))
        classes = " / ".join(
            " ".join(str(x) for x in cls) for cls in e.classes)
        print(f"[{i}] colors: {colors} | classes: {classes}")
    return EXIT_OK


def _cmd_check_p(args: argparse.Namespace) -> int:
    s = _read_scheme(args.file)
    verdict = is_p_scheme(s, args.p)
    if args.machine:
        lines = [f"n={s.n}", f"p={args.p}",
                 f"p-scheme={'true' if verdict else 'false'}",
                 f"r={s.r}", f"scheme={s.hash}"]
        if not verdict:
            lines.append(f"witness.size-offender=color {verdict.offender_color} "
                         f"has size {verdict.offender_size}")
        print("\n".join(lines))
    else:
        print(f"p-scheme: {'true' if verdict else 'false'}")
        if not verdict:
            print(f"witness: color {verdict.offender_color} has size "
                  f"{verdict.offender_size}")
    return EXIT_OK if verdict else EXIT_FALSE


def _cmd_theorem1(args: argparse.Namespace) -> int:
    s = _read_scheme(args.file)
    report = check_partite_criterion(s, args.p)
    print(report.machine() if args.machine else report.text())
    return EXIT_OK if report.agree else EXIT_DISAGREE


def _cmd_corollary2(args: argparse.Namespace) -> int:
    s = _read_scheme(args.file)
    report = check_bipartite_criterion(s)
    print(report.machine() if args.machine else report.text())
    return EXIT_OK if report.agree else EXIT_DISAGREE


def _cmd_gen_thin_cyclic(args: argparse.Namespace) -> int:
    if args.m < 1:
        raise SchemeError(f"order must be >= 1, got {args.m}")
    _write_text(ccm_text(thin_scheme(cyclic_table(args.m)).matrix), args.output)
    return EXIT_OK


def _cmd_gen_wreath(args: argparse.Namespace) -> int:
    inner = _read_scheme(args.inner)
    outer = _read_scheme(args.outer)
    _write_text(ccm_text(wreath(inner, outer).matrix), args.output)
    return EXIT_OK


def _cmd_gen_wl_close(args: argparse.Namespace) -> int:
    source: str | IO[str] = sys.stdin if args.file == "-" else args.file
    g = read_dg(source)
    _write_text(ccm_text(wl_closure(digraph_color_matrix(g)).matrix), args.output)
    return EXIT_OK


def _corpus_rows(results: list) -> list:
    def key(item):
        member, report = item
        return (member.family, member.scheme.n, member.name,
                report.check, report.p if report.p is not None else 0)
    return sorted(results, key=key)


def _cmd_corpus(args: argparse.Namespace) -> int:
    threads = _threads_from_env()
    spec = CorpusSpec(max_n=args.max_n, primes=_ints_csv(args.primes, "--primes"),
                      seed=args.seed)
    members = generate_corpus(spec)
    results = _corpus_rows(run_corpus_checks(members, spec.primes, threads))
    disagreements = [(m, rep) for m, rep in results if not rep.agree]

    if args.machine:
        blocks = []
        for member, report in results:
            blocks.append(f"member={member.name}\nfamily={member.family}\n"
                          f"seed={spec.seed}\n" + report.machine())
        print("\n\n".join(blocks))
        return EXIT_DISAGREE if disagreements else EXIT_OK

    print(f"corpus: {len(members)} members, {len(results)} checks "
          f"(seed {spec.seed}, max n {spec.max_n}, "
          f"primes {' '.join(str(p) for p in spec.primes)})")
    by_family: dict[str, tuple[int, int, int]] = {}
    seen_members: dict[str, set[str]] = {}
    for member, report in results:
        seen_members.setdefault(member.family, set()).add(member.name)
        total, bad = by_family.get(member.family, (0, 0, 0))[1:]
        by_family[member.family] = (
            len(seen_members[member.family]), total + 1,
            bad + (0 if report.agree else 1))
    width = max(len(f) for f in by_family)
    print(f"{'family':<{width}}  members  checks  disagreements")
    for family in sorted(by_family):
        m_count, c_count, bad = by_family[family]
        print(f"{family:<{width}}  {m_count:>7}  {c_count:>6}  {bad:>13}")
    print(f"{'total':<{width}}  {len(members):>7}  {len(results):>6}  "
          f"{len(disagreements):>13}")
    for member, report in disagreements:
        print(f"DISAGREE member={member.name} check={report.check} p={report.p}")
    print(f"all checks agree: {'true' if not disagreements else 'false'}")
    return EXIT_DISAGREE if disagreements else EXIT_OK


# -- parser --------------------------------------------------------------------


def _add_machine(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--machine", action="store_true",
                        help="structured key=value output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asck", description="coherent configuration toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a color matrix file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("info", help="basic invariants of a scheme")
    p.add_argument("file")
    _add_machine(p)
    p.set_defaults(handler=_cmd_info)

    p = sub.add_parser("closed-sets", help="list the equivalence lattice")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_closed_sets)

    p = sub.add_parser("check-p", help="is the scheme a p-scheme?")
    p.add_argument("file")
    p.add_argument("-p", type=int, required=True)
    _add_machine(p)
    p.set_defaults(handler=_cmd_check_p)

    p = sub.add_parser(
        "theorem1",
        help="sizes vs cyclic partitions of basis digraphs, both sides")
    p.add_argument("file")
    p.add_argument("-p", type=int, required=True)
    _add_machine(p)
    p.set_defaults(handler=_cmd_theorem1)

    p = sub.add_parser(
        "corollary2", help="2-scheme vs bipartite basis graphs, both sides")
    p.add_argument("file")
    _add_machine(p)
    p.set_defaults(handler=_cmd_corollary2)

    gen = sub.add_parser("gen", help="generate schemes")
    gsub = gen.add_subparsers(dest="generator", required=True)

    p = gsub.add_parser("thin-cyclic", help="thin scheme of the cyclic group")
    p.add_argument("m", type=int)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(handler=_cmd_gen_thin_cyclic)

    p = gsub.add_parser("wreath", help="wreath product of two schemes")
    p.add_argument("inner")
    p.add_argument("outer")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(handler=_cmd_gen_wreath)

    p = gsub.add_parser("wl-close", help="coherent closure of a digraph")
    p.add_argument("file")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(handler=_cmd_gen_wl_close)

    p = sub.add_parser("corpus", help="run all checks over the built-in corpus")
    p.add_argument("--max-n", type=int, default=CorpusSpec().max_n)
    p.add_argument("--primes", default=",".join(str(q) for q in CorpusSpec().primes))
    p.add_argument("--seed", type=int, default=CorpusSpec().seed)
    _add_machine(p)
    p.set_defaults(handler=_cmd_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except BrokenPipeError:
        return EXIT_OK
    except (SchemeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
