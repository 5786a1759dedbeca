"""Exhaustive machine checks of the alliance-number claims over complete
small-graph corpora, with per-graph records and structured counterexamples.

A claim violation is data, not an exception: every check tallies pass/fail
per corpus graph and collects counterexamples, so a false claim surfaces in
the report (and in the process exit code) instead of aborting the run.
Serialized artifacts contain no timing or other run-varying fields, so two
runs with the same configuration are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing
import os
import time
from dataclasses import dataclass
from fractions import Fraction

from .enumeration import enumerate_trees, enumerate_unicyclic
from .families import is_in_f, is_in_g
from .graph import Graph, bits, decode_graph6, encode_graph6
from .solver import bounds, gamma_o_brute_force

SCHEMA_VERSION = 1

TREE = "tree"
UNICYCLIC = "unicyclic"


@dataclass(frozen=True)
class GraphRecord:
    """Everything the checks need about one corpus graph."""

    corpus: str
    graph6: str
    n: int
    l: int
    s: int
    cycle_length: int | None
    gamma_o: int
    lower_bound: Fraction
    bipartite_upper: Fraction
    equality: bool
    in_family: bool
    bipartite: bool
    all_min_goa_count: int | None
    obs1_holds: bool | None
    extremal_violations: tuple[str, ...] | None


@dataclass(frozen=True)
class Counterexample:
    graph6: str
    claim: str
    details: str


@dataclass(frozen=True)
class CheckResult:
    name: str
    corpus: str
    total: int
    passed: int
    counterexamples: tuple[Counterexample, ...]

    @property
    def failed(self) -> int:
        return self.total - self.passed


@dataclass(frozen=True)
class VerificationReport:
    description: str
    checks: tuple[CheckResult, ...]
    records: tuple[GraphRecord, ...]
    runtime_seconds: float

    @property
    def violations(self) -> int:
        return sum(c.failed for c in self.checks)


@dataclass(frozen=True)
class VerifyConfig:
    max_tree_order: int = 10
    max_unicyclic_order: int = 10
    all_min_cap: int = 10
    jobs: int = 1
    json_path: str | None = None
    csv_path: str | None = None


# -- per-graph analysis --------------------------------------------------


def _analyze(args: tuple[str, str, int]) -> GraphRecord:
    corpus, code, all_min_cap = args
    g = decode_graph6(code)
    n = g.n
    l = g.leaves().bit_count()
    s = g.supports().bit_count()
    rep = bounds(g)
    if corpus == TREE:
        cycle_length = None
        lower = rep.tree_lower
        in_family = is_in_f(g)[0]
    else:
        cycle_length = g.cycle_stats().cycle_length
        lower = rep.unicyclic_lower
        in_family = is_in_g(g)[0]
    want_min_sets = n <= all_min_cap
    result = gamma_o_brute_force(g, all_minimum_sets=want_min_sets)
    value = result.value
    equality = value == lower
    obs1 = None
    all_min_count = None
    extremal: tuple[str, ...] | None = None
    if want_min_sets:
        assert result.all_minimum_sets is not None
        sets = result.all_minimum_sets
        all_min_count = len(sets)
        supports = g.supports()
        obs1 = any(d & supports == supports for d in sets)
        if corpus == UNICYCLIC and equality:
            extremal = tuple(_extremal_violations(g, sets))
    return GraphRecord(
        corpus=corpus,
        graph6=code,
        n=n,
        l=l,
        s=s,
        cycle_length=cycle_length,
        gamma_o=value,
        lower_bound=lower,
        bipartite_upper=rep.bipartite_upper,
        equality=equality,
        in_family=in_family,
        bipartite=rep.bipartite_applicable,
        all_min_goa_count=all_min_count,
        obs1_holds=obs1,
        extremal_violations=extremal,
    )


def _extremal_violations(g: Graph, min_sets: tuple[int, ...]) -> list[str]:
    """Violations of the three structure claims for a bound-attaining graph,
    quantified over every minimum global offensive alliance."""
    out = []
    stats = g.cycle_stats()
    cyc = stats.cycle_vertices
    if stats.cycle_length % 2:
        out.append(f"cycle length {stats.cycle_length} is odd")
    supports = g.supports()
    for d in min_sets:
        for v in bits(cyc & ~d):
            if g.degree(v) != 2:
                out.append(
                    f"vertex {v} on the cycle outside minimum set "
                    f"{d:#x} has degree {g.degree(v)}"
                )
        for v in bits(cyc & d):
            if not supports >> v & 1:
                out.append(
                    f"vertex {v} on the cycle inside minimum set {d:#x} is not a support"
                )
    return out


def _corpus_codes(corpus: str, max_order: int) -> list[tuple[str, str]]:
    codes = []
    if corpus == TREE:
        for n in range(3, max_order + 1):
            codes.extend((TREE, encode_graph6(g)) for g in enumerate_trees(n))
    else:
        for n in range(3, max_order + 1):
            codes.extend((UNICYCLIC, encode_graph6(g)) for g in enumerate_unicyclic(n))
    return codes


def _records_for(
    corpus: str, max_order: int, all_min_cap: int, jobs: int = 1
) -> tuple[GraphRecord, ...]:
    items = [(c, code, all_min_cap) for c, code in _corpus_codes(corpus, max_order)]
    if jobs <= 1:
        records = [_analyze(it) for it in items]
    else:
        with multiprocessing.Pool(jobs) as pool:
            records = pool.map(_analyze, items, chunksize=16)
    records.sort(key=lambda r: (r.corpus, r.n, r.graph6))
    return tuple(records)


# -- individual checks -----------------------------------------------------


def _eval_tree_bound(records: tuple[GraphRecord, ...]) -> CheckResult:
    counterexamples = []
    total = 0
    for r in records:
        if r.corpus != TREE:
            continue
        total += 1
        ok = True
        if r.gamma_o < r.lower_bound:
            ok = False
            counterexamples.append(
                Counterexample(
                    r.graph6,
                    "tree lower bound",
                    f"gamma_o={r.gamma_o} < (n-l+s+1)/3={r.lower_bound}",
                )
            )
        if r.equality != r.in_family:
            ok = False
            counterexamples.append(
                Counterexample(
                    r.graph6,
                    "tree equality characterization",
                    f"equality={r.equality} but family membership={r.in_family}",
                )
            )
        _ = ok
    failed = len({c.graph6 for c in counterexamples})
    return CheckResult(
        "tree_bound", TREE, total, total - failed, _sorted_cx(counterexamples)
    )


def _eval_unicyclic_bound(records: tuple[GraphRecord, ...]) -> CheckResult:
    counterexamples = []
    total = 0
    for r in records:
        if r.corpus != UNICYCLIC:
            continue
        total += 1
        if r.gamma_o < r.lower_bound:
            counterexamples.append(
                Counterexample(
                    r.graph6,
                    "unicyclic lower bound",
                    f"gamma_o={r.gamma_o} < (n-l+s)/3={r.lower_bound}",
                )
            )
    return CheckResult(
        "unicyclic_bound",
        UNICYCLIC,
        total,
        total - len(counterexamples),
        _sorted_cx(counterexamples),
    )


def _eval_equality_characterization(records: tuple[GraphRecord, ...]) -> CheckResult:
    counterexamples = []
    total = 0
    for r in records:
        if r.corpus != UNICYCLIC:
            continue
        total += 1
        if r.equality != r.in_family:
            counterexamples.append(
                Counterexample(
                    r.graph6,
                    "unicyclic equality characterization",
                    f"gamma_o={r.gamma_o}, (n-l+s)/3={r.lower_bound}, "
                    f"equality={r.equality}, family membership={r.in_family}",
                )
            )
    return CheckResult(
        "equality_characterization",
        UNICYCLIC,
        total,
        total - len(counterexamples),
        _sorted_cx(counterexamples),
    )


def _eval_extremal_structure(records: tuple[GraphRecord, ...]) -> CheckResult:
    counterexamples = []
    total = 0
    for r in records:
        if r.extremal_violations is None:
            continue
        total += 1
        for detail in r.extremal_violations:
            counterexamples.append(Counterexample(r.graph6, "extremal structure", detail))
    failed = len({c.graph6 for c in counterexamples})
    return CheckResult(
        "extremal_structure",
        "unicyclic bound attainers",
        total,
        total - failed,
        _sorted_cx(counterexamples),
    )


def _eval_observation1(records: tuple[GraphRecord, ...]) -> CheckResult:
    counterexamples = []
    total = 0
    for r in records:
        if r.obs1_holds is None:
            continue
        total += 1
        if not r.obs1_holds:
            counterexamples.append(
                Counterexample(
                    r.graph6,
                    "minimum alliance containing all supports",
                    f"none of the {r.all_min_goa_count} minimum sets contains all supports",
                )
            )
    return CheckResult(
        "observation1",
        "trees + unicyclic",
        total,
        total - len(counterexamples),
        _sorted_cx(counterexamples),
    )


def _eval_bipartite_upper(records: tuple[GraphRecord, ...]) -> CheckResult:
    counterexamples = []
    total = 0
    for r in records:
        if not r.bipartite:
            continue
        total += 1
        if r.gamma_o > r.bipartite_upper:
            counterexamples.append(
                Counterexample(
                    r.graph6,
                    "bipartite upper bound",
                    f"gamma_o={r.gamma_o} > (n-l+s)/2={r.bipartite_upper}",
                )
            )
    return CheckResult(
        "bipartite_upper",
        "bipartite corpus members",
        total,
        total - len(counterexamples),
        _sorted_cx(counterexamples),
    )


def _sorted_cx(cx: list[Counterexample]) -> tuple[Counterexample, ...]:
    return tuple(sorted(cx, key=lambda c: (c.graph6, c.claim, c.details)))


# -- public check operations ------------------------------------------------


def check_tree_bound(max_order: int, jobs: int = 1) -> VerificationReport:
    start = time.perf_counter()
    records = _records_for(TREE, max_order, all_min_cap=0, jobs=jobs)
    checks = (_eval_tree_bound(records),)
    return VerificationReport(
        f"trees n=3..{max_order}", checks, records, time.perf_counter() - start
    )


def check_unicyclic_bound(max_order: int, jobs: int = 1) -> VerificationReport:
    start = time.perf_counter()
    records = _records_for(UNICYCLIC, max_order, all_min_cap=0, jobs=jobs)
    checks = (_eval_unicyclic_bound(records),)
    return VerificationReport(
        f"unicyclic n=3..{max_order}", checks, records, time.perf_counter() - start
    )


def check_equality_characterization(max_order: int, jobs: int = 1) -> VerificationReport:
    start = time.perf_counter()
    records = _records_for(UNICYCLIC, max_order, all_min_cap=0, jobs=jobs)
    checks = (_eval_equality_characterization(records),)
    return VerificationReport(
        f"unicyclic n=3..{max_order}", checks, records, time.perf_counter() - start
    )


def check_extremal_structure(max_order: int, jobs: int = 1) -> VerificationReport:
    start = time.perf_counter()
    records = _records_for(UNICYCLIC, max_order, all_min_cap=max_order, jobs=jobs)
    checks = (_eval_extremal_structure(records),)
    return VerificationReport(
        f"unicyclic bound attainers n=3..{max_order}",
        checks,
        records,
        time.perf_counter() - start,
    )


def check_observation1(max_order: int, jobs: int = 1) -> VerificationReport:
    start = time.perf_counter()
    records = _records_for(TREE, max_order, all_min_cap=max_order, jobs=jobs)
    records += _records_for(UNICYCLIC, max_order, all_min_cap=max_order, jobs=jobs)
    checks = (_eval_observation1(records),)
    return VerificationReport(
        f"trees + unicyclic n=3..{max_order}",
        checks,
        records,
        time.perf_counter() - start,
    )


def check_bipartite_upper(max_order: int, jobs: int = 1) -> VerificationReport:
    start = time.perf_counter()
    records = _records_for(TREE, max_order, all_min_cap=0, jobs=jobs)
    records += _records_for(UNICYCLIC, max_order, all_min_cap=0, jobs=jobs)
    checks = (_eval_bipartite_upper(records),)
    return VerificationReport(
        f"trees + unicyclic n=3..{max_order}",
        checks,
        records,
        time.perf_counter() - start,
    )


def run_full(config: VerifyConfig) -> VerificationReport:
    """Run every check over shared per-graph records and write artifacts."""
    start = time.perf_counter()
    tree_records = _records_for(
        TREE, config.max_tree_order, config.all_min_cap, config.jobs
    )
    uni_records = _records_for(
        UNICYCLIC, config.max_unicyclic_order, config.all_min_cap, config.jobs
    )
    records = tree_records + uni_records
    checks = (
        _eval_tree_bound(records),
        _eval_unicyclic_bound(records),
        _eval_equality_characterization(records),
        _eval_extremal_structure(records),
        _eval_observation1(records),
        _eval_bipartite_upper(records),
    )
    report = VerificationReport(
        f"trees n<={config.max_tree_order}, unicyclic n<={config.max_unicyclic_order}, "
        f"all-minimum-set cap {config.all_min_cap}",
        checks,
        records,
        time.perf_counter() - start,
    )
    if config.json_path:
        _write_text(config.json_path, report_json(report, config))
    if config.csv_path:
        _write_text(config.csv_path, records_csv(report.records))
    return report


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report artifact {path}: {exc}") from exc


# -- serialization -----------------------------------------------------------
#
# Artifacts deliberately exclude runtimes so identical configurations produce
# byte-identical files.


def report_json(report: VerificationReport, config: VerifyConfig | None = None) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "generator": "alliance-lab",
        "description": report.description,
        "total_violations": report.violations,
        "checks": [
            {
                "name": c.name,
                "corpus": c.corpus,
                "total": c.total,
                "passed": c.passed,
                "failed": c.failed,
                "counterexamples": [
                    {"graph6": x.graph6, "claim": x.claim, "details": x.details}
                    for x in c.counterexamples
                ],
            }
            for c in report.checks
        ],
    }
    if config is not None:
        payload["config"] = {
            "max_tree_order": config.max_tree_order,
            "max_unicyclic_order": config.max_unicyclic_order,
            "all_min_cap": config.all_min_cap,
        }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


CSV_COLUMNS = [
    "corpus",
    "graph6",
    "n",
    "l",
    "s",
    "cycle_length",
    "gamma_o",
    "lower_bound",
    "equality",
    "in_family",
    "bipartite",
    "all_min_goa_count",
]


def records_csv(records: tuple[GraphRecord, ...]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in sorted(records, key=lambda r: (r.corpus, r.n, r.graph6)):
        writer.writerow(
            [
                r.corpus,
                r.graph6,
                r.n,
                r.l,
                r.s,
                "" if r.cycle_length is None else r.cycle_length,
                r.gamma_o,
                str(r.lower_bound),
                str(r.equality).lower(),
                str(r.in_family).lower(),
                str(r.bipartite).lower(),
                "" if r.all_min_goa_count is None else r.all_min_goa_count,
            ]
        )
    return buf.getvalue()


def summary_lines(report: VerificationReport) -> list[str]:
    lines = []
    for c in report.checks:
        verdict = "PASS" if c.failed == 0 else f"FAIL ({c.failed} counterexamples)"
        lines.append(f"{c.name}: {c.passed}/{c.total} pass [{c.corpus}] {verdict}")
    lines.append(
        "VERDICT: "
        + ("all claims hold" if report.violations == 0 else f"{report.violations} violations")
    )
    return lines


def default_jobs() -> int:
    return os.cpu_count() or 1
