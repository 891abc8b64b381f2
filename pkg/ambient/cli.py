# coding=utf-8
"""
Command line surface. Every command prints one JSON document on stdout (or writes it to --out);
logs go to stderr.

Exit status: 0 pass, 1 verification failure, 2 input or computation error.
"""
import argparse
import os
import sys
from collections import OrderedDict

import jmespath

from .constructions import ambient_pw, cone_pw, patterson_walker, thomas_cone
from .corpus import generate_corpus
from .documents import (
    ConnectionSpec,
    dumps,
    expansion_to_dict,
    is_metric_document,
    load,
    metric_from_dict,
    metric_to_dict,
)
from .errors import AmbientError, DocumentError
from .fg_solver import fg_expand
from .log_utils import configure_logging, get_default_logger
from .qcurv import q_report
from .reports import SUITES, verify

log = get_default_logger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

WORKDIR_ENV = "AMBIENT_WORKDIR"
LOG_LEVEL_ENV = "AMBIENT_LOG_LEVEL"

TARGETS = ("pw", "cone", "cone-pw", "ambient")


def resolve_path(path, environ=None):
    """Relative paths are taken against AMBIENT_WORKDIR when it is set."""
    environ = os.environ if environ is None else environ
    workdir = environ.get(WORKDIR_ENV)
    if workdir and not os.path.isabs(path):
        return os.path.join(workdir, path)
    return path


def load_connection(path):
    conn = ConnectionSpec.load(resolve_path(path)).to_connection()
    conn.validate()
    return conn


def build_document(conn, target, seed=0):
    """
    :param conn: AffineConnection
    :param target: one of TARGETS
    """
    log.info("Building %s for %r", target, conn)
    extra = {"target": target, "source": conn.name}
    if target == "pw":
        return metric_to_dict(patterson_walker(conn, seed=seed), extra=extra)
    if target == "cone":
        document = ConnectionSpec.from_connection(thomas_cone(conn)).to_dict()
        document["target"] = target
        return document
    if target == "cone-pw":
        return metric_to_dict(cone_pw(conn, seed=seed), extra=extra)
    if target == "ambient":
        return metric_to_dict(ambient_pw(conn), extra=extra)
    raise DocumentError(f"Unknown build target [{target}], expected one of {list(TARGETS)}")


def expansion_input(path, seed=0):
    """Metric documents are expanded as given, connection specs through their Patterson-Walker metric."""
    data = load(resolve_path(path))
    if is_metric_document(data):
        return metric_from_dict(data), str(data.get("name", "metric"))
    conn = ConnectionSpec.from_dict(data).to_connection()
    return patterson_walker(conn, seed=seed), conn.name


def qcurv_document(conn):
    g = ambient_pw(conn)
    report = q_report(g)
    document = OrderedDict()
    document["name"] = conn.name
    document["coordinates"] = list(report.chart.coords)
    document["laplacian_log_t"] = str(report.powers[0])
    document.update(report.to_dict())
    return document, report.vanishes


def cmd_build(args):
    return build_document(load_connection(args.spec), args.target, seed=args.seed), EXIT_PASS


def cmd_verify(args):
    report = verify(load_connection(args.spec), suite=args.suite, seed=args.seed, timing=not args.no_timing)
    return report.to_dict(), EXIT_PASS if report.passed else EXIT_FAIL


def cmd_expand(args):
    base, name = expansion_input(args.spec, seed=args.seed)
    result = fg_expand(base, args.order)
    return expansion_to_dict(result, name=name), EXIT_PASS


def cmd_qcurv(args):
    document, vanishes = qcurv_document(load_connection(args.spec))
    return document, EXIT_PASS if vanishes else EXIT_FAIL


def cmd_corpus(args):
    specs = generate_corpus(args.count, args.dim, args.degree, seed=args.seed)
    document = OrderedDict()
    document["count"] = len(specs)
    document["dim"] = args.dim
    document["degree"] = args.degree
    document["seed"] = args.seed
    if args.out_dir:
        directory = resolve_path(args.out_dir)
        os.makedirs(directory, exist_ok=True)
        files = []
        for spec in specs:
            path = os.path.join(directory, f"{spec.name}.json")
            write_text(path, spec.dumps())
            files.append(path)
        document["files"] = files
    else:
        document["specs"] = [spec.to_dict() for spec in specs]
    return document, EXIT_PASS


def write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as e:
        raise DocumentError(f"Cannot write [{path}]: {e}", reason=e)


def error_document(error):
    return {"error": {"code": error.code, "message": str(error)}}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Write the document to this file instead of stdout")
    common.add_argument("--query", help="JMESPath expression applied to the document before printing")
    common.add_argument("--seed", type=int, default=0, help="Seed of random-point witnesses (default 0)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging on stderr")

    parser = argparse.ArgumentParser(
        prog="ambient",
        description="Patterson-Walker and ambient metrics of affine connections, with exact verification.",
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    build = commands.add_parser("build", parents=[common], help="Build a metric from a connection spec")
    build.add_argument("--spec", required=True)
    build.add_argument("--target", choices=TARGETS, default="pw")
    build.set_defaults(handler=cmd_build)

    check = commands.add_parser("verify", parents=[common], help="Run verification suites")
    check.add_argument("--spec", required=True)
    check.add_argument("--suite", choices=["all"] + list(SUITES), default="all")
    check.add_argument("--no-timing", action="store_true", help="Omit per-check timings")
    check.set_defaults(handler=cmd_verify)

    expand = commands.add_parser("expand", parents=[common], help="Solve the ambient expansion order by order")
    expand.add_argument("--spec", required=True, help="Connection spec or metric document")
    expand.add_argument("--order", type=int, default=None)
    expand.set_defaults(handler=cmd_expand)

    qcurv = commands.add_parser("qcurv", parents=[common], help="Q-curvature of the Patterson-Walker metric")
    qcurv.add_argument("--spec", required=True)
    qcurv.set_defaults(handler=cmd_qcurv)

    corpus = commands.add_parser("corpus", parents=[common], help="Generate seeded random connection specs")
    corpus.add_argument("--count", type=int, default=1)
    corpus.add_argument("--dim", type=int, default=2)
    corpus.add_argument("--degree", type=int, default=1)
    corpus.add_argument("--out-dir", help="Write one spec file per connection into this directory")
    corpus.set_defaults(handler=cmd_corpus)
    return parser


def emit(document, args, stream):
    if args.query:
        document = jmespath.search(args.query, document)
    text = dumps(document)
    if args.out:
        write_text(resolve_path(args.out), text)
    else:
        stream.write(text)


def main(argv=None, stream=None):
    """
    :param argv: list of string (default is sys.argv[1:])
    :param stream: file object for documents (default is sys.stdout)
    :return: int exit status
    """
    stream = stream or sys.stdout
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, os.environ.get(LOG_LEVEL_ENV))
    try:
        document, status = args.handler(args)
        emit(document, args, stream)
    except AmbientError as e:
        log.error("%s failed: %s", args.command, e)
        stream.write(dumps(error_document(e)))
        return EXIT_ERROR
    except jmespath.exceptions.JMESPathError as e:
        log.error("Invalid --query: %s", e)
        stream.write(dumps({"error": {"code": "query", "message": str(e)}}))
        return EXIT_ERROR
    return status
