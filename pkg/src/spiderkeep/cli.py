"""Command-line front end.

Exit codes: 0 success / verified, 1 no witness or violation found, 2 invalid
input or hypothesis not met, 3 internal guard tripped. Errors are reported on
standard error as one line: ``spiderkeep: error reason=<Name> message=<text>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import connectivity as conn
from .errors import BadParameters, SpiderkeepError
from .extraction import Certificate, extract_broom, extract_spider, reduce_to_target, verify_certificate
from .generators import CorpusSpec, parse_manifest, random_corpus, write_corpus
from .graph import Graph, load_graph
from .oracle import brute_spider_removal, validate_corpus
from .spider import SpiderSpec, enumerate_spider_specs, parse_legs, spider_map_to_json


def _read_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BadParameters(f"cannot read {path}: {exc.strerror}") from None
    return load_graph(text)


def _specs(args) -> list[SpiderSpec]:
    if args.legs is not None:
        return [parse_legs(args.legs)]
    if args.m is None:
        raise BadParameters("one of --m or --legs is required")
    return enumerate_spider_specs(args.m)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- subcommands ---------------------------------------------------------------------


def cmd_kappa(args) -> int:
    g = _read_graph(args.input)
    print(conn.vertex_connectivity(g))
    return 0


def cmd_mincuts(args) -> int:
    g = _read_graph(args.input)
    cuts = conn.all_min_cuts(g, cap=args.cap)
    if args.format == "text":
        _emit(args, "".join(" ".join(map(str, c)) + "\n" for c in cuts))
    else:
        _emit(args, _dump({"kappa": conn.vertex_connectivity(g), "cuts": [list(c) for c in cuts]}))
    return 0


def cmd_ends(args) -> int:
    g = _read_graph(args.input)
    ends = conn.find_ends(g, mode=args.mode, exhaustive_limit=args.exhaustive_limit)
    if args.format == "text":
        _emit(args, "".join(f"{' '.join(map(str, e.fragment))} | {' '.join(map(str, e.cut))}\n" for e in ends))
    else:
        _emit(args, _dump([e.to_dict() for e in ends]))
    return 0


def cmd_lemma1(args) -> int:
    g = _read_graph(args.input)
    result = conn.check_lemma1(g)
    doc = {
        "verdict": "ok" if result.ok else "violation",
        "k": result.k,
        "ends_checked": result.ends_checked,
        "cuts_checked": result.cuts_checked,
        "violation": None
        if result.violation is None
        else {"end": result.violation[0].to_dict(), "cut": list(result.violation[1])},
    }
    _emit(args, _dump(doc))
    return 0 if result.ok else 1


def cmd_extract(args) -> int:
    g = _read_graph(args.input)
    if args.broom:
        if args.m is None:
            raise BadParameters("--broom needs --m")
        certs = [extract_broom(g, args.k, args.m)]
        single = True
    else:
        specs = _specs(args)
        certs = [extract_spider(g, args.k, s) for s in specs]
        single = args.legs is not None
    if args.plot:
        from .report import plot_certificate

        plot_certificate(g, certs[0], args.plot)
    if args.format == "dot":
        from .export import to_dot

        _emit(args, "".join(to_dot(g, c) for c in certs))
    elif args.format == "text":
        lines = [
            f"method={c.method} legs={','.join(map(str, c.legs or ()))} "
            f"witness={' '.join(map(str, c.witness_vertices()))} kappa_after={c.kappa_after} verified={c.verified}"
            for c in certs
        ]
        _emit(args, "\n".join(lines) + "\n")
    else:
        doc = certs[0].to_dict() if single else [c.to_dict() for c in certs]
        _emit(args, _dump(doc))
    return 0 if all(c.verified for c in certs) else 1


def cmd_verify(args) -> int:
    g = _read_graph(args.input)
    try:
        data = json.loads(Path(args.cert).read_text())
    except (OSError, ValueError) as exc:
        raise BadParameters(f"cannot read certificate {args.cert}: {exc}") from None
    docs = data if isinstance(data, list) else [data]
    results = []
    for doc in docs:
        try:
            cert = Certificate.from_dict(doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise BadParameters(f"malformed certificate: {exc}") from None
        k = args.k if args.k is not None else cert.k
        results.append(verify_certificate(g, k, cert))
    lines = [
        "verified" if v.ok else "rejected " + ",".join(v.reasons)
        for v in results
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if all(v.ok for v in results) else 1


def cmd_oracle(args) -> int:
    g = _read_graph(args.input)
    specs = _specs(args)
    override = args.override

    def run(s):
        return brute_spider_removal(g, args.k, s, override=override)

    if args.jobs > 1 and len(specs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            found = list(pool.map(run, specs))
    else:
        found = [run(s) for s in specs]
    doc = [
        {
            "legs": list(s.legs),
            "witness": None
            if w is None
            else {"vertices": list(w.vertices), "spider_map": spider_map_to_json(w.spider_map)},
        }
        for s, w in zip(specs, found)
    ]
    _emit(args, _dump(doc[0] if args.legs is not None else doc))
    return 0 if all(w is not None for w in found) else 1


def _corpus_specs(args) -> list[CorpusSpec]:
    if args.manifest:
        return parse_manifest(Path(args.manifest).read_text())
    if args.family is None:
        raise BadParameters("give --manifest or --family")
    if args.k is None:
        raise BadParameters("--k is required with --family")
    lo, _, hi = args.n.partition("..")
    return [
        CorpusSpec(
            family=args.family,
            n=(int(lo), int(hi or lo)),
            k=args.k,
            delta_min=args.delta_min,
            count=args.count,
            seed=args.seed,
        )
    ]


def cmd_gen(args) -> int:
    written = []
    for spec in _corpus_specs(args):
        written += write_corpus(random_corpus(spec), Path(args.out_dir) / spec.corpus_id)
    sys.stdout.write("".join(f"{p}\n" for p in written))
    return 0


def _parse_ms(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",")]


def cmd_validate(args) -> int:
    reports = []
    ms = _parse_ms(args.m)
    if args.input_dir:
        files = sorted(Path(args.input_dir).glob("*.el"))
        graphs = [load_graph(f.read_text()) for f in files]
        if args.k is None:
            raise BadParameters("--k is required with --input-dir")
        corpora = [(Path(args.input_dir).name, args.k, graphs)]
    else:
        corpora = []
        for spec in _corpus_specs(args):
            k = args.k if args.k is not None else spec.k
            corpora.append((spec.corpus_id, k, list(random_corpus(spec))))
    for corpus_id, k, graphs in corpora:
        for m in ms:
            report = validate_corpus(graphs, k, m, corpus_id=corpus_id, jobs=args.jobs)
            reports.append(report)
            print(f"# {corpus_id} k={k} m={m}: {report.seconds:.2f}s", file=sys.stderr)
    from .report import summary_table, write_validation_figures

    delimiter = "," if args.table == "csv" else "\t"
    table = summary_table(reports, delimiter)
    sys.stdout.write(table)
    if args.table_out:
        Path(args.table_out).write_text(table)
    if args.out:
        Path(args.out).write_text(_dump([r.to_dict() for r in reports]))
    if args.plot_dir:
        write_validation_figures(reports, args.plot_dir)
    return 0 if all(not r.failures for r in reports) else 1


def cmd_reduce(args) -> int:
    g = _read_graph(args.input)
    rp = reduce_to_target(g, args.k)
    _emit(args, _dump({"path": list(rp.path), "s": rp.s, "kappa_before": rp.kappa_before, "k": rp.k}))
    return 0


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spiderkeep", description="Connectivity-keeping spiders in k-connected graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("--input", required=True, help="edge-list file")
        return p

    def with_out(p, formats=("json", "text")):
        p.add_argument("--out", help="write the document here instead of standard output")
        p.add_argument("--format", choices=formats, default="json")
        return p

    def with_spider(p):
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--m", type=int)
        p.add_argument("--legs", help='comma-separated leg lengths, e.g. "2,1,1"; wins over --m')
        return p

    p = with_input(sub.add_parser("kappa", help="print the vertex connectivity"))
    p.set_defaults(func=cmd_kappa)

    p = with_out(with_input(sub.add_parser("mincuts", help="enumerate minimum vertex cuts")))
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_mincuts)

    p = with_out(with_input(sub.add_parser("ends", help="list ends with witnessing cuts")))
    p.add_argument("--mode", choices=("auto", "exhaustive", "heuristic"), default="auto")
    p.add_argument("--exhaustive-limit", type=int, default=conn.EXHAUSTIVE_LIMIT)
    p.set_defaults(func=cmd_ends)

    p = with_out(with_input(sub.add_parser("lemma1", help="check that no end meets a minimum cut")), ("json",))
    p.set_defaults(func=cmd_lemma1)

    p = with_spider(with_out(with_input(sub.add_parser("extract", help="certified spider or broom")), ("json", "dot", "text")))
    p.add_argument("--broom", action="store_true", help="extract a broom instead of a spider")
    p.add_argument("--plot", help="also draw the witness to this image file")
    p.set_defaults(func=cmd_extract)

    p = with_input(sub.add_parser("verify", help="re-check a certificate file"))
    p.add_argument("--cert", required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_verify)

    p = with_spider(with_out(with_input(sub.add_parser("oracle", help="brute-force spider search")), ("json",)))
    p.add_argument("--override", action="store_true", help="ignore the order guard")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = with_out(with_input(sub.add_parser("reduce", help="path bringing kappa down to k")), ("json",))
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_reduce)

    def with_corpus(p):
        p.add_argument("--manifest", help="one corpus spec per line, key=value syntax")
        p.add_argument("--family", choices=("glue", "circulant", "random"))
        p.add_argument("--n", default="12", help="order or range lo..hi")
        p.add_argument("--delta-min", type=int, default=0)
        p.add_argument("--count", type=int, default=10)
        p.add_argument("--seed", type=int, default=0)
        return p

    p = with_corpus(sub.add_parser("gen", help="write a corpus of edge-list files"))
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen)

    p = with_corpus(sub.add_parser("validate", help="run extraction over corpora and report"))
    p.add_argument("--input-dir", help="directory of .el files instead of a generated corpus")
    p.add_argument("--k", type=int)
    p.add_argument("--m", required=True, help="spider order: N, a,b,c or lo..hi")
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--table", choices=("tsv", "csv"), default="tsv")
    p.add_argument("--table-out", help="also write the summary table here")
    p.add_argument("--plot-dir", help="write matplotlib figures here")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpiderkeepError as exc:
        message = " ".join(str(exc).split())
        print(f"spiderkeep: error reason={exc.reason} message={message}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
