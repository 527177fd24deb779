"""Command-line front end.

Exit codes: 0 success, 2 malformed input or usage error, 3 resource bound
exceeded.  Data goes to stdout (one record per line for json, a header plus
rows for csv); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import CacheFormatError, DomainError, KappaForgeError, ResourceLimitError
from .kappa import KappaEngine
from .psi import PsiEngine
from .records import CSV_HEADER, ResultRecord, read_cache, write_cache
from .verify import SUITES, run_suite

FORMATS = ("json", "csv", "text")


def _emit(records, fmt: str, bare_single: bool = False) -> None:
    records = sorted(records, key=ResultRecord.sort_key)
    if fmt == "json":
        for rec in records:
            print(rec.to_json())
    elif fmt == "csv":
        print(CSV_HEADER)
        for rec in records:
            print(rec.to_csv_row())
    else:
        if bare_single and len(records) == 1:
            print(records[0].value)
        else:
            for rec in records:
                print(rec.to_text())


def _parse_monomial(text: str) -> tuple:
    """Parse ``index:multiplicity`` pairs, e.g. ``2:1,1:1``."""
    pairs: dict = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        bits = chunk.split(":")
        if len(bits) != 2:
            raise DomainError(f"bad monomial entry {chunk!r}; expected index:multiplicity")
        try:
            index, mult = int(bits[0]), int(bits[1])
        except ValueError as exc:
            raise DomainError(f"bad monomial entry {chunk!r}") from exc
        if index < 0 or mult <= 0:
            raise DomainError(f"bad monomial entry {chunk!r}")
        pairs[index] = pairs.get(index, 0) + mult
    if not pairs:
        raise DomainError("empty monomial")
    return tuple(sorted(pairs.items()))


def _load_cache_into(path, psi_engine: PsiEngine, kappa_engine: KappaEngine) -> None:
    if not Path(path).exists():
        return
    for rec in read_cache(path):
        if rec.kind == "psi":
            ks = []
            for i, m in rec.exponents:
                ks.extend([i] * m)
            psi_engine.preload(rec.genus, ks, rec.rational)
        else:
            kappa_engine.preload(rec.genus, rec.exponents, rec.rational)


def _records_from_engines(psi_engine: PsiEngine, kappa_engine: KappaEngine) -> list:
    records = []
    for key, value in psi_engine.table().items():
        records.append(ResultRecord.make("psi", key.genus, key.exponent_pairs(), value))
    for key, value in kappa_engine.table().items():
        records.append(ResultRecord.make("kappa", key.genus, key.exponents, value))
    return records


def _cmd_compute_kappa(args) -> int:
    if args.max_genus < 1:
        print("--max-genus must be >= 1", file=sys.stderr)
        return 2
    psi_engine, kappa_engine = PsiEngine(), KappaEngine()
    if args.cache:
        _load_cache_into(args.cache, psi_engine, kappa_engine)
    records = []
    if args.monomial:
        pairs = _parse_monomial(args.monomial)
        weight = sum(i * m for i, m in pairs)
        if weight % 3:
            print(
                f"monomial weight {weight} is not 0 mod 3: zero for degree reasons at every genus",
                file=sys.stderr,
            )
            return 2
        genus = 1 if weight == 0 else weight // 3 + 1
        if genus > args.max_genus:
            print(
                f"monomial of weight {weight} needs genus {genus} > --max-genus {args.max_genus}",
                file=sys.stderr,
            )
            return 2
        value = kappa_engine.kappa_number(genus, pairs)
        records.append(ResultRecord.make("kappa", genus, pairs, value))
        _emit(records, args.format, bare_single=True)
    else:
        table = kappa_engine.solve(args.max_genus)
        for key, value in table.items():
            records.append(ResultRecord.make("kappa", key.genus, key.exponent_pairs(), value))
        _emit(records, args.format)
    if args.cache:
        write_cache(args.cache, _records_from_engines(psi_engine, kappa_engine))
    return 0


def _cmd_compute_psi(args) -> int:
    try:
        exponents = [int(x) for x in args.exponents.split(",") if x.strip() != ""]
    except ValueError:
        print(f"bad --exponents {args.exponents!r}; expected comma-separated integers", file=sys.stderr)
        return 2
    if not exponents:
        print("--exponents must list at least one insertion", file=sys.stderr)
        return 2
    psi_engine, kappa_engine = PsiEngine(), KappaEngine()
    if args.cache:
        _load_cache_into(args.cache, psi_engine, kappa_engine)
    value = psi_engine.psi_number(args.genus, exponents)
    counts: dict = {}
    for k in exponents:
        counts[k] = counts.get(k, 0) + 1
    record = ResultRecord.make("psi", args.genus, sorted(counts.items()), value)
    _emit([record], args.format, bare_single=True)
    if args.cache:
        write_cache(args.cache, _records_from_engines(psi_engine, kappa_engine))
    return 0


def _cmd_verify(args) -> int:
    results = run_suite(args.suite, max_genus=args.max_genus, threads=args.threads)
    ok = True
    for result in results:
        print(result.line())
        ok = ok and result.ok
    print(f"{'OK' if ok else 'FAILED'}: {sum(r.ok for r in results)}/{len(results)} checks passed")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kappa-forge",
        description=(
            "Exact intersection numbers of psi- and kappa-classes on moduli "
            "spaces of curves, computed from Virasoro-type constraints."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    kappa_p = sub.add_parser("compute-kappa", help="kappa-class intersection numbers")
    kappa_p.add_argument("--max-genus", type=int, required=True)
    kappa_p.add_argument("--monomial", help="single monomial as index:multiplicity pairs, e.g. 2:1,1:1")
    kappa_p.add_argument("--format", choices=FORMATS, default="text")
    kappa_p.add_argument("--cache", help="path of the persistent number cache")
    kappa_p.add_argument("--threads", type=int, default=1)
    kappa_p.set_defaults(handler=_cmd_compute_kappa)

    psi_p = sub.add_parser("compute-psi", help="one psi-class intersection number")
    psi_p.add_argument("--genus", type=int, required=True)
    psi_p.add_argument("--exponents", required=True, help="comma-separated exponents, e.g. 0,0,0")
    psi_p.add_argument("--format", choices=FORMATS, default="text")
    psi_p.add_argument("--cache", help="path of the persistent number cache")
    psi_p.add_argument("--threads", type=int, default=1)
    psi_p.set_defaults(handler=_cmd_compute_psi)

    verify_p = sub.add_parser("verify", help="run a verification suite")
    verify_p.add_argument("--suite", choices=SUITES, required=True)
    verify_p.add_argument("--max-genus", type=int, default=None)
    verify_p.add_argument("--threads", type=int, default=1)
    verify_p.set_defaults(handler=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    threads = getattr(args, "threads", 1)
    if threads < 1:
        print("--threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except ResourceLimitError as exc:
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        return 3
    except (DomainError, CacheFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KappaForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
