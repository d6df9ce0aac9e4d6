"""Batch reproduction: enumerate instances, decide semisymmetry, certify Hamiltonicity."""

from __future__ import annotations

import csv
import io
import json
import logging
import re
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .autiso import canonical_form, is_semisymmetric
from .bicoset import BiCosetSpec
from .config import RunConfig
from .errors import ConfigError, HamsymError
from .graph import AnyGraph, as_graph, read_graph, write_graph
from .hamilton import HamiltonCertificate, orchestrate, verify
from .zoo import (
    GROUP_DIRS,
    TABLE1,
    census_dir,
    load_census_dir,
    row_candidates,
    row_census,
    row_graph,
    table2_row,
)

log = logging.getLogger(__name__)

TARGETS = ("order-2pq", "biprimitive-cubic", "cubic-census")
CSV_COLUMNS = ("source", "order", "valency", "constructed", "semisymmetric", "hamiltonian",
               "method", "elapsed_ms", "certificate_path")
ROW2_PRIMES = (5, 7, 11)


@dataclass
class ReproRow:
    source: str
    order: int
    valency: int | None
    constructed: bool
    semisymmetric: str          # "yes" | "no" | "assumed-from-paper" ("unknown" if not built)
    hamiltonian: str            # "yes" | "no" | "unknown"
    method: str
    certificate_path: str | None = None
    note: str = ""


@dataclass
class ReproReport:
    target: str
    config: dict
    rows: list[ReproRow] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    # wall-clock data lives here so the rest of the report is reproducible
    timings: dict[str, int] = field(default_factory=dict)
    generated_at: str = ""

    def sort(self) -> None:
        self.rows.sort(key=lambda r: _source_key(r.source))
        self.skipped.sort(key=lambda s: _source_key(s["source"]))

    @property
    def totals(self) -> dict:
        rows = self.rows
        return {
            "instances": len(rows),
            "constructed": sum(r.constructed for r in rows),
            "hamiltonian_yes": sum(r.hamiltonian == "yes" for r in rows),
            "hamiltonian_no": sum(r.hamiltonian == "no" for r in rows),
            "hamiltonian_unknown": sum(r.hamiltonian == "unknown" for r in rows),
            "skipped": len(self.skipped),
        }

    def deterministic_json(self) -> dict:
        return {"target": self.target, "config": self.config,
                "rows": [asdict(r) for r in self.rows], "skipped": self.skipped,
                "totals": self.totals}

    def to_json(self) -> dict:
        doc = self.deterministic_json()
        doc["timings"] = self.timings
        doc["generated_at"] = self.generated_at
        return doc

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            d = asdict(r)
            d["elapsed_ms"] = self.timings.get(r.source, "")
            w.writerow(["" if d[c] is None else d[c] for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"target: {self.target}"]
        for r in self.rows:
            lines.append(f"{r.source:<22} n={r.order:<5} k={r.valency}  ss={r.semisymmetric:<18} "
                         f"ham={r.hamiltonian:<7} {r.method}")
        t = self.totals
        lines.append(f"{t['hamiltonian_yes']}/{t['instances']} certified, "
                     f"{t['skipped']} skipped")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        return json.dumps(self.to_json(), indent=1) + "\n"

    def check(self, out_dir: str | Path) -> list[str]:
        """Problems with the report; every certified row must verify from its files."""
        out_dir = Path(out_dir)
        problems = []
        t = self.totals
        if t["hamiltonian_yes"] + t["hamiltonian_no"] + t["hamiltonian_unknown"] != len(self.rows):
            problems.append("hamiltonian counts do not add up")
        for r in self.rows:
            if r.hamiltonian != "yes":
                continue
            if not r.certificate_path:
                problems.append(f"{r.source}: certified without a certificate file")
                continue
            cert_path = out_dir / r.certificate_path
            graph_path = cert_path.with_name(cert_path.name.replace(".cert.json", ".g6"))
            try:
                cert = HamiltonCertificate.from_json(cert_path)
                if not verify(cert, read_graph(graph_path)):
                    problems.append(f"{r.source}: certificate does not verify")
            except (OSError, HamsymError) as exc:
                problems.append(f"{r.source}: {exc}")
        return problems


def _source_key(source: str) -> tuple:
    return tuple(int(x) if x.isdigit() else x for x in re.split(r"(\d+)", source))


@dataclass
class Instance:
    source: str
    order: int
    valency: int | None
    spec: BiCosetSpec | None = None
    graph: AnyGraph | None = None
    semisymmetric: str | None = None


def _row_source(table: int, row: int, valency: int, index: int, p: int | None = None) -> str:
    extra = f"-p{p}" if p is not None else ""
    return f"T{table}-R{row}{extra}-v{valency}-{index}"


def table_instances(cfg: RunConfig, max_order: int, report: ReproReport,
                    rows1=None, table2=True, valency: int | None = None) -> list[Instance]:
    """Table instances of order at most ``max_order``; gated ones go to ``report.skipped``.

    Instances small enough for the automorphism search are reduced to one per
    isomorphism class.
    """
    out: list[Instance] = []
    t1 = [TABLE1[r] for r in (rows1 or sorted(TABLE1))]
    t2 = []
    if table2:
        for r in range(1, 7):
            if r == 2:
                t2.extend(table2_row(2, p=p) for p in ROW2_PRIMES)
            else:
                t2.append(table2_row(r))
    for tr in t1 + t2:
        p, q = tr.pq
        order = 2 * p * q
        pp = p if (tr.table, tr.row) == (2, 2) else None
        label = f"T{tr.table}-R{tr.row}" + (f"-p{pp}" if pp else "")
        if order > max_order:
            report.skipped.append({"source": label, "reason": f"order {order} > {max_order}"})
            continue
        if tr.heavy and not cfg.allow_heavy:
            report.skipped.append({"source": label, "reason": "heavy; needs allow_heavy"})
            continue
        wanted = set(tr.valencies) if valency is None else {valency}
        if tr.table == 1 and order <= cfg.max_auto_vertices:
            classes = row_census(tr, cfg.seed, cfg.allow_heavy, cfg.max_auto_vertices)
            for v, items in classes.items():
                if v not in wanted:
                    continue
                for i, item in enumerate(items):
                    out.append(Instance(_row_source(1, tr.row, v, i), order, v, spec=item.spec,
                                        semisymmetric="yes"))
            continue
        counts: dict[int, int] = {}
        forms: set = set()
        for cand in row_candidates(tr, cfg.seed, cfg.allow_heavy):
            if not cand.connected or cand.valency not in wanted:
                continue
            if order <= cfg.max_auto_vertices:
                form = canonical_form(row_graph(cand.spec), limit=cfg.max_auto_vertices)[0]
                if form in forms:
                    continue
                forms.add(form)
            i = counts.get(cand.valency, 0)
            counts[cand.valency] = i + 1
            out.append(Instance(_row_source(tr.table, tr.row, cand.valency, i, pp), order,
                                None if tr.table == 2 else cand.valency, spec=cand.spec))
    return out


def census_instances(cfg: RunConfig, max_order: int, report: ReproReport,
                     orders=None) -> list[Instance]:
    directory = Path(cfg.census_dir) if cfg.census_dir else census_dir()
    graphs, manifest = load_census_dir(directory)
    if not manifest.get("complete", False):
        report.skipped.append({"source": "census", "reason": f"{directory} is a partial census"})
    out = []
    for cg in graphs:
        if cg.order > max_order or (orders is not None and cg.order not in orders):
            continue
        g = cg.bipartite if cg.bipartite is not None else cg.graph
        out.append(Instance(f"census:{cg.name}", cg.order, cg.valency, graph=g))
    return out


def _slug(source: str) -> str:
    return source.replace(":", "_")


def run_instance(inst: Instance, cfg: RunConfig, out_dir: Path, use_solver: bool = True
                 ) -> tuple[ReproRow, int]:
    t0 = time.perf_counter()
    try:
        rep = orchestrate(inst.spec if inst.spec is not None else inst.graph,
                          use_solver=use_solver, time_limit=cfg.time_limit,
                          node_limit=cfg.node_budget, seed=cfg.seed)
    except HamsymError as exc:
        row = ReproRow(inst.source, inst.order, inst.valency, False, "unknown", "unknown",
                       "none", note=f"{type(exc).__name__}: {exc}")
        return row, int((time.perf_counter() - t0) * 1000)
    g = rep.graph
    n = g.n
    ss = inst.semisymmetric
    if ss is None:
        if n > cfg.max_auto_vertices:
            ss = "assumed-from-paper"
        else:
            ss = "yes" if is_semisymmetric(g, limit=cfg.max_auto_vertices) else "no"
    valency = inst.valency
    if valency is None:
        degs = set(as_graph(g).degrees())
        valency = degs.pop() if len(degs) == 1 else None
    ham = {"certificate": "yes", "exhausted": "no"}.get(rep.status, "unknown")
    cert_rel = None
    if rep.certificate is not None:
        cert_dir = out_dir / "certs"
        cert_dir.mkdir(parents=True, exist_ok=True)
        slug = _slug(inst.source)
        write_graph(g, cert_dir / f"{slug}.g6")
        cert = rep.certificate.to_json()
        cert["elapsed_ms"] = 0  # keep certificate files reproducible
        (cert_dir / f"{slug}.cert.json").write_text(json.dumps(cert) + "\n")
        cert_rel = f"certs/{slug}.cert.json"
    note = "; ".join(x for x in rep.log if "cover" in x or "case" in x)
    row = ReproRow(inst.source, n, valency, True, ss, ham, rep.method, cert_rel, note)
    return row, int((time.perf_counter() - t0) * 1000)


def reproduce(target: str, cfg: RunConfig, max_order: int | None = None,
              use_solver: bool = True) -> ReproReport:
    """Build the instances of ``target`` and try to certify each one."""
    if target not in TARGETS:
        raise ConfigError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    if cfg.groups_dir:
        GROUP_DIRS[:] = [Path(cfg.groups_dir)]
    out_dir = cfg.ensure_out_dir()
    report = ReproReport(target, {k: v for k, v in cfg.to_json().items() if k != "out_dir"})
    if target == "order-2pq":
        instances = table_instances(cfg, max_order or 600, report)
    elif target == "biprimitive-cubic":
        instances = table_instances(cfg, max_order or 1000, report, rows1=(7, 9, 12),
                                    table2=False, valency=3)
        instances += census_instances(cfg, max_order or 1000, report, orders=(126, 990))
    else:
        instances = census_instances(cfg, max_order or 768, report)
    for inst in instances:
        log.info("running %s", inst.source)
        row, ms = run_instance(inst, cfg, out_dir, use_solver)
        report.rows.append(row)
        report.timings[row.source] = ms
    report.sort()
    report.generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return report
