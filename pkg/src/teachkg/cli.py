"""Command line entry point (``teachkg``).

Pipeline state lives in a Turtle file (``--store``, default
``teachkg.ttl``)::

    teachkg build --corpus DIR --out teachkg.ttl
    teachkg extract-topics
    teachkg infer-prereqs
    teachkg query prerequisites-of tkg:sparql

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import load_config
from .cq import CompetencyQuestion, answer, cq_spec, list_cqs
from .errors import InvalidParams, MissingFile, TeachKGError
from .export import LAYERS, export_dot, export_json
from .ingest import load_corpus, materialize, sample_corpus_path
from .kg import TeachingKG
from .pkg import build_all_pkgs, parse_grants, read_pkg, resolve_material
from .store import Literal, TripleStore
from .turtle import export_turtle, parse_turtle_subset

DEFAULT_STORE = "teachkg.ttl"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


# helpers ----------------------------------------------------------------------

def _config(args):
    return load_config(args.config)


def _corpus_root(args, config):
    if getattr(args, "corpus", None):
        return Path(args.corpus)
    if config.corpus_root is not None:
        return config.corpus_root
    return sample_corpus_path()


def _load_store(path):
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path)
    return TripleStore(parse_turtle_subset(path.read_text(encoding="utf-8")))


def _save_store(store, path):
    Path(path).write_text(export_turtle(store), encoding="utf-8")


def _open_kg(args, config, need_corpus=True):
    store = _load_store(args.store)
    corpus = load_corpus(_corpus_root(args, config)) if need_corpus else None
    if corpus is None:
        return TeachingKG(store=store, alpha=config.alpha)
    return TeachingKG.from_corpus(corpus, store=store, params=config.extraction, alpha=config.alpha)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _row_text(row):
    if isinstance(row.value, Literal):
        v = row.value.value
        text = json.dumps(v) if isinstance(v, bool) else str(v)
    else:
        text = str(row.value)
    if row.score is not None:
        text += f"\t{row.score:.4f}"
    return text


# commands ---------------------------------------------------------------------

def cmd_build(args):
    config = _config(args)
    corpus = load_corpus(_corpus_root(args, config))
    store = materialize(corpus)
    out = args.out or args.store
    _save_store(store, out)
    print(f"wrote {len(store)} triples to {out}")
    return 0


def cmd_extract(args):
    config = _config(args)
    params = config.extraction
    try:
        if args.top_k is not None:
            params = replace(params, top_k=args.top_k)
        if args.min_score is not None:
            params = replace(params, min_score=args.min_score)
    except InvalidParams as exc:
        raise UsageError(f"--top-k/--min-score: {exc}") from None
    kg = _open_kg(args, config)
    results = kg.extract(params)
    _save_store(kg.store, args.store)
    minted = sum(1 for t, _ in results if t.source == "extracted")
    print(f"{len(results)} topics linked ({minted} extracted) in {args.store}")
    return 0


def cmd_infer(args):
    config = _config(args)
    params = config.inference
    try:
        if args.threshold is not None:
            params = replace(params, threshold=args.threshold)
        if args.min_support is not None:
            params = replace(params, min_support=args.min_support)
    except InvalidParams as exc:
        flag = "--threshold" if "threshold" in str(exc) else "--min-support"
        raise UsageError(f"{flag}: {exc}") from None
    if args.transitive_reduction:
        params = replace(params, transitive_reduction=True)
    kg = _open_kg(args, config, need_corpus=False)
    edges, report = kg.infer(params)
    _save_store(kg.store, args.store)
    for a, b in sorted(edges):
        print(f"{a} -> {b}")
    if args.report:
        _emit(json.dumps(report, indent=2) + "\n", args.report)
    return 0


def cmd_query(args):
    if args.variant == "list":
        for name, signature, wording in list_cqs():
            print(f"{name}\t{signature}\t{wording}")
        return 0
    try:
        spec = cq_spec(args.variant)
    except InvalidParams as exc:
        raise UsageError(f"query: {exc} (see 'teachkg query list')") from None
    config = _config(args)
    if not args.args:
        raise UsageError(f"query {spec.name}: missing argument {spec.params[0]}")
    target, rest = args.args[0], args.args[1:]
    other = None
    if "M2" in spec.params:
        if len(rest) != 1:
            raise UsageError(f"query {spec.name}: expected arguments M M2")
        other = rest[0]
    elif rest:
        raise UsageError(f"query {spec.name}: unexpected argument {rest[0]!r}")
    if args.k is not None and args.k < 1:
        raise UsageError("--k must be a positive integer")
    if "k" in spec.params:
        k = args.k if args.k is not None else config.k
    elif args.k is not None:
        raise UsageError(f"query {spec.name}: --k does not apply")
    else:
        k = None
    if args.transitive and spec.name != "prerequisites-of":
        raise UsageError("--transitive only applies to prerequisites-of")
    kg = _open_kg(args, config, need_corpus=spec.group in ("course", "material"))
    result = answer(kg, CompetencyQuestion(spec.name, target, k=k, other=other,
                                           transitive=args.transitive))
    if args.json:
        print(json.dumps(result.to_json(), indent=2, ensure_ascii=False))
    else:
        for row in result.rows:
            print(_row_text(row))
    return 0


def _pkgs(args, store):
    if args.pkg_dir:
        pkgs = [read_pkg(store, p) for p in sorted(Path(args.pkg_dir).glob("*.ttl"))]
    else:
        pkgs = build_all_pkgs(store)
    if args.grants:
        path = Path(args.grants)
        if not path.is_file():
            raise MissingFile(path)
        for requester, m in sorted(parse_grants(path.read_bytes(), str(path))):
            for p in pkgs:
                if m in p.owned_materials:
                    p.grant(requester, m)
    return pkgs


def cmd_resolve(args):
    config = _config(args)
    kg = _open_kg(args, config, need_corpus=False)
    res = resolve_material(kg.store, _pkgs(args, kg.store), args.material, args.requester)
    if args.json:
        print(json.dumps(res.to_json(), indent=2))
    else:
        extra = res.location or res.contact or ""
        print(f"{res.outcome.value}\t{extra}".rstrip("\t"))
    return 0


def cmd_export(args):
    store = _load_store(args.store)
    if args.format == "ttl":
        text = export_turtle(store)
    elif args.format == "dot":
        text = export_dot(store, args.layers.split(",") if args.layers else None)
    else:
        text = export_json(store)
    _emit(text, args.out)
    return 0


def cmd_synth(args):
    from .testkit.generator import SynthParams, generate_corpus, write_synthetic

    try:
        params = SynthParams(n_courses=args.courses, lectures_per_course=args.lectures,
                             topics_pool_size=args.topics, materials_per_lecture=args.materials,
                             seed=args.seed)
    except InvalidParams as exc:
        raise UsageError(f"synth: {exc}") from None
    corpus, truth = generate_corpus(params)
    write_synthetic(corpus, truth, args.out)
    print(f"wrote {len(corpus.manifests)} courses to {args.out}")
    return 0


def cmd_serve(args):
    from .server import Snapshot, make_server

    config = _config(args)
    kg = _open_kg(args, config)
    port = args.port if args.port is not None else config.port
    snapshot = Snapshot.of(kg, _pkgs(args, kg.store), default_k=config.k)
    server = make_server(snapshot, args.host, port, verbose=True)
    print(f"serving on http://{args.host}:{server.server_address[1]}/", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# parser -----------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--store", default=DEFAULT_STORE,
                        help=f"pipeline state file (default {DEFAULT_STORE})")
    common.add_argument("--corpus", help="corpus directory (default: $TEACHKG_CORPUS, "
                        "config corpus_root, then the bundled sample)")
    common.add_argument("--config", help="JSON config file")

    access = _Parser(add_help=False)
    access.add_argument("--grants", help="JSON file of {requester, material} grants")
    access.add_argument("--pkg-dir", help="directory of PKG .ttl files (default: build from store)")

    parser = _Parser(prog="teachkg", description="Build and query teaching knowledge graphs.")
    parser.add_argument("--version", action="version", version=f"teachkg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", parents=[common], help="materialize a corpus into a store")
    p.add_argument("--out", help="output Turtle file (default: --store)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("extract-topics", parents=[common], help="link TF-IDF terms as topics")
    p.add_argument("--top-k", type=int)
    p.add_argument("--min-score", type=float)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("infer-prereqs", parents=[common], help="infer prerequisite edges")
    p.add_argument("--threshold", type=float)
    p.add_argument("--min-support", type=int)
    p.add_argument("--transitive-reduction", action="store_true")
    p.add_argument("--report", metavar="FILE", help="write the inference report as JSON ('-' for stdout)")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("query", parents=[common], help="answer a competency question ('list' to enumerate)")
    p.add_argument("variant")
    p.add_argument("args", nargs="*")
    p.add_argument("--k", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--transitive", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("resolve", parents=[common, access], help="resolve access to a material")
    p.add_argument("material")
    p.add_argument("--as", dest="requester", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("export", parents=[common], help="export the store")
    p.add_argument("--format", choices=("ttl", "dot", "json"), default="ttl")
    p.add_argument("--layers", help=f"comma-separated subset of {','.join(LAYERS)} (dot only)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--courses", type=int, required=True)
    p.add_argument("--lectures", type=int, required=True)
    p.add_argument("--topics", type=int, default=30)
    p.add_argument("--materials", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", parents=[common, access], help="run the read-only JSON service")
    p.add_argument("--port", type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)
    return parser


def run_cli(argv=None):
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"teachkg: error: {exc}", file=sys.stderr)
        return 1
    except TeachKGError as exc:
        print(f"teachkg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # e.g. an unknown --layers entry
        print(f"teachkg: error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    try:
        code = run_cli(argv)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
