"""Command-line entry point: ``hamsym construct|check|hamilton|verify|reproduce``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .autiso import is_semisymmetric
from .config import FORMATS, RunConfig, load_config
from .errors import (
    ConfigError,
    DigestMismatchError,
    GatedError,
    HamsymError,
)
from .graph import as_graph, graph_digest, read_graph, write_graph
from .hamilton import HamiltonCertificate, orchestrate, verify
from .perm import Perm
from .repro import TARGETS, reproduce
from .zoo import GROUP_DIRS, load_census_graph, row_graph, table_instance

log = logging.getLogger("hamsym")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_DIGEST = 2
EXIT_UNKNOWN = 3
EXIT_CONFIG = 4


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration")
    g.add_argument("--seed", type=int)
    g.add_argument("--time-budget-ms", type=int)
    g.add_argument("--node-budget", type=int)
    g.add_argument("--max-auto-vertices", type=int)
    g.add_argument("--allow-heavy", action="store_true", default=None)
    g.add_argument("--format", dest="output_format", choices=FORMATS)
    g.add_argument("--out-dir")
    g.add_argument("--census-dir")
    g.add_argument("--groups-dir")
    g.add_argument("-v", "--verbose", action="store_true")


def _selector(p: argparse.ArgumentParser) -> None:
    p.add_argument("--table", type=int, choices=(1, 2))
    p.add_argument("--row", type=int)
    p.add_argument("--valency", type=int)
    p.add_argument("--index", type=int, default=0,
                   help="which double coset of that valency (default 0)")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hamsym", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a table instance and write it as graph6")
    _selector(p)
    p.add_argument("--out", help="output file (.g6 or .json)")
    _common(p)

    p = sub.add_parser("check", help="decide semisymmetry of a graph file")
    p.add_argument("path")
    _common(p)

    p = sub.add_parser("hamilton", help="find and certify a Hamilton cycle")
    p.add_argument("path", nargs="?")
    _selector(p)
    p.add_argument("--no-solver", action="store_true",
                   help="use only the constructive routes")
    p.add_argument("--reproduce", choices=TARGETS, help="run a whole target instead")
    p.add_argument("--max-order", type=int)
    _common(p)

    p = sub.add_parser("verify", help="check a certificate against a graph file")
    p.add_argument("cert")
    p.add_argument("graph")
    _common(p)

    p = sub.add_parser("reproduce", help="certify every instance of a target")
    p.add_argument("target", choices=TARGETS)
    p.add_argument("--max-order", type=int)
    p.add_argument("--no-solver", action="store_true")
    _common(p)
    return ap


def _config(args) -> RunConfig:
    keys = ("seed", "time_budget_ms", "node_budget", "max_auto_vertices", "allow_heavy",
            "output_format", "out_dir", "census_dir", "groups_dir")
    cfg = load_config({k: getattr(args, k, None) for k in keys})
    if cfg.groups_dir:
        GROUP_DIRS[:] = [Path(cfg.groups_dir)]
    return cfg


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record, indent=1))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(record.keys())
        w.writerow(json.dumps(v) if isinstance(v, (dict, list)) else v for v in record.values())
        print(buf.getvalue(), end="")
    else:
        for k, v in record.items():
            print(f"{k}: {v}")


def _jsonable(x):
    if isinstance(x, Perm):
        return list(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


def _selected_spec(args, cfg: RunConfig):
    if args.table is None or args.row is None:
        raise ConfigError("give --table and --row")
    params = {k: getattr(args, k) for k in ("p", "q", "k") if getattr(args, k) is not None}
    return table_instance(args.table, args.row, args.valency, args.index,
                          allow_heavy=cfg.allow_heavy, seed=cfg.seed, **params)


def _selector_name(args) -> str:
    parts = [f"t{args.table}r{args.row}"]
    for k in ("p", "valency"):
        if getattr(args, k) is not None:
            parts.append(f"{k[0]}{getattr(args, k)}")
    if args.index:
        parts.append(f"i{args.index}")
    return "-".join(parts)


def cmd_construct(args, cfg: RunConfig) -> int:
    spec = _selected_spec(args, cfg)
    g = row_graph(spec)
    out = Path(args.out) if args.out else cfg.ensure_out_dir() / f"{_selector_name(args)}.g6"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_graph(g, out)
    degs = sorted(set(as_graph(g).degrees()))
    _emit({"file": str(out), "order": g.n, "u_size": g.u_size, "w_size": g.w_size,
           "degrees": degs, "derived": bool(spec.meta.get("derive")),
           "digest": graph_digest(g)}, cfg.output_format)
    return EXIT_OK


def cmd_check(args, cfg: RunConfig) -> int:
    cg = load_census_graph(args.path)
    g = cg.bipartite if cg.bipartite is not None else cg.graph
    record = {"file": args.path, "order": cg.order, "valency": cg.valency}
    if cg.order > cfg.max_auto_vertices:
        record.update(semisymmetric="assumed-from-paper",
                      reason=f"exceeds max_auto_vertices ({cfg.max_auto_vertices})")
    else:
        res = is_semisymmetric(g, limit=cfg.max_auto_vertices)
        record.update(semisymmetric="yes" if res.answer else "no", reason=res.reason)
        if res.answer:
            record["aut_order"] = res.witness.group_order
        else:
            record["witness"] = _jsonable(res.witness)
    _emit(record, cfg.output_format)
    return EXIT_OK


def cmd_hamilton(args, cfg: RunConfig) -> int:
    if args.reproduce:
        args.target = args.reproduce
        return cmd_reproduce(args, cfg)
    if args.path:
        cg = load_census_graph(args.path)
        instance = cg.bipartite if cg.bipartite is not None else cg.graph
        name = Path(args.path).name.split(".")[0]
    else:
        instance = _selected_spec(args, cfg)
        name = _selector_name(args)
    rep = orchestrate(instance, use_solver=not args.no_solver, time_limit=cfg.time_limit,
                      node_limit=cfg.node_budget, seed=cfg.seed)
    record = {"source": name, "order": rep.graph.n, "status": rep.status, "method": rep.method,
              "log": rep.log}
    if rep.certificate is not None:
        out = cfg.ensure_out_dir()
        write_graph(rep.graph, out / f"{name}.g6")
        cert_path = out / f"{name}.cert.json"
        cert_path.write_text(json.dumps(rep.certificate.to_json()) + "\n")
        record.update(graph_path=str(out / f"{name}.g6"), certificate_path=str(cert_path))
    elif rep.status == "exhausted":
        record["reason"] = "non-Hamiltonian: search exhausted"
    _emit(record, cfg.output_format)
    return EXIT_OK if rep.certificate is not None else EXIT_UNKNOWN


def cmd_verify(args, cfg: RunConfig) -> int:
    cert = HamiltonCertificate.from_json(Path(args.cert))
    graph = read_graph(args.graph)
    try:
        ok = verify(cert, graph)
    except DigestMismatchError as exc:
        _emit({"result": "digest mismatch", "detail": str(exc)}, cfg.output_format)
        return EXIT_DIGEST
    _emit({"result": "valid" if ok else "invalid"}, cfg.output_format)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_reproduce(args, cfg: RunConfig) -> int:
    report = reproduce(args.target, cfg, args.max_order, use_solver=not args.no_solver)
    out = cfg.ensure_out_dir()
    ext = {"json": "json", "csv": "csv", "text": "txt"}[cfg.output_format]
    text = report.render(cfg.output_format)
    (out / f"report-{args.target}.{ext}").write_text(text)
    sys.stdout.write(text)
    problems = report.check(out)
    for msg in problems:
        print(f"report check: {msg}", file=sys.stderr)
    if problems:
        return EXIT_INVALID
    return EXIT_OK if all(r.hamiltonian == "yes" for r in report.rows) else EXIT_UNKNOWN


COMMANDS = {"construct": cmd_construct, "check": cmd_check, "hamilton": cmd_hamilton,
            "verify": cmd_verify, "reproduce": cmd_reproduce}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, GatedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DigestMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIGEST
    except HamsymError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
