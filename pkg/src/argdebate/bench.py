"""Seeded benchmark harness: random frameworks per (n, p) bucket, engines
against oracles, per-phase timings, CSV and markdown tables."""

import csv
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import framework as fw
from .checker import Budget, VerdictResult, decide
from .errors import ResourceExceeded

ENGINES = ("fixpoint", "sl-grounded", "sl-admissible", "sl-ideal", "oracle")
# semantics decided by each non-oracle engine
ENGINE_SEMANTICS = {
    "fixpoint": "grounded",
    "sl-grounded": "grounded",
    "sl-admissible": "admissible",
    "sl-ideal": "ideal",
}
_ORACLE_KIND = {
    "grounded": fw.SemanticsKind.GROUNDED,
    "admissible": fw.SemanticsKind.ADMISSIBLE,
    "ideal": fw.SemanticsKind.IDEAL,
}


@dataclass(frozen=True)
class Bucket:
    n: int
    p_low: float
    p_high: float
    instances: int = 10

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"bucket needs at least one argument, got n={self.n}")
        if not 0.0 <= self.p_low < self.p_high <= 1.0:
            raise ValueError(f"need 0 <= p_low < p_high <= 1, got [{self.p_low}, {self.p_high})")
        if self.instances < 1:
            raise ValueError(f"instances must be at least 1, got {self.instances}")

    @property
    def label(self):
        return f"{self.p_low:.1f} <= p < {self.p_high:.1f}"


@dataclass(frozen=True)
class BenchConfig:
    buckets: tuple
    seed: int = 0
    timeout: float = 60.0
    engines: tuple = ("fixpoint", "oracle")
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "buckets", tuple(
            b if isinstance(b, Bucket) else Bucket(**b) for b in self.buckets))
        object.__setattr__(self, "engines", tuple(self.engines))
        if not self.buckets:
            raise ValueError("config has no buckets")
        bad = [e for e in self.engines if e not in ENGINES]
        if bad or not self.engines:
            raise ValueError(f"engines must be a nonempty subset of {list(ENGINES)}, got {list(self.engines)}")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        buckets = data.pop("bucket", None) or data.pop("buckets", None) or []
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(buckets=tuple(buckets), **data)

    @classmethod
    def from_toml(cls, path):
        with open(path, "rb") as fh:
            return cls.from_dict(tomllib.load(fh))

    def semantics(self):
        """Semantics the oracle has to answer for, in engine order."""
        wanted = []
        for e in self.engines:
            sem = ENGINE_SEMANTICS.get(e)
            if sem and sem not in wanted:
                wanted.append(sem)
        return wanted or ["grounded"]


@dataclass
class BenchRecord:
    bucket: str
    instance: int
    n: int
    p: float
    seed: int
    root: str
    engine: str
    semantics: str
    result: str
    reach_s: float
    check_s: float
    total_s: float
    status: str

    @property
    def ok(self):
        return self.status == "ok"


RECORD_FIELDS = tuple(f.name for f in fields(BenchRecord))


def instances(cfg):
    """``(bucket, index, p, seed, root, framework)`` for every instance, in
    config order. Only depends on ``cfg.seed`` and the buckets."""
    rng = random.Random(cfg.seed)
    out = []
    for bucket in cfg.buckets:
        for i in range(bucket.instances):
            seed = rng.getrandbits(63)
            p = rng.uniform(bucket.p_low, bucket.p_high)
            af = fw.generate_random(bucket.n, p, seed)
            root = random.Random(seed).choice(af.args)
            out.append((bucket, i, p, seed, root, af))
    return out


def _run_instance(task):
    cfg, bucket, i, p, seed, root, af = task
    base = dict(bucket=bucket.label, instance=i, n=bucket.n, p=round(p, 6), seed=seed, root=root)
    records = []
    for engine in cfg.engines:
        if engine == "oracle":
            for sem in cfg.semantics():
                records.append(_oracle_record(base, af, root, sem))
            continue
        sem = ENGINE_SEMANTICS[engine]
        start = time.perf_counter()
        verdict = decide(af, root, sem, "fixpoint" if engine == "fixpoint" else "sl",
                         Budget(timeout=cfg.timeout))
        total = time.perf_counter() - start
        status = {VerdictResult.TIMEOUT: "timeout", VerdictResult.RESOURCE: "resource"}.get(verdict.result, "ok")
        records.append(BenchRecord(
            **base, engine=engine, semantics=sem,
            result=verdict.result.value if status == "ok" else "",
            reach_s=verdict.reach_seconds, check_s=verdict.check_seconds,
            total_s=max(total, verdict.reach_seconds + verdict.check_seconds), status=status))
    return records


def _oracle_record(base, af, root, sem):
    start = time.perf_counter()
    try:
        value = fw.accepted(af, root, _ORACLE_KIND[sem])
        status, result = "ok", "true" if value else "false"
    except ResourceExceeded:
        status, result = "resource", ""
    elapsed = time.perf_counter() - start
    return BenchRecord(**base, engine="oracle", semantics=sem, result=result,
                       reach_s=0.0, check_s=elapsed, total_s=elapsed, status=status)


def run_bench(cfg):
    """Run every configured engine on every instance; records come back in
    config order whatever the number of workers."""
    tasks = [(cfg,) + inst for inst in instances(cfg)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_run_instance, tasks))
    else:
        chunks = [_run_instance(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def disagreements(records):
    """Instances where two engines both finished with different answers for
    the same semantics."""
    groups = {}
    for r in records:
        if r.ok:
            groups.setdefault((r.bucket, r.n, r.instance, r.semantics), {})[r.engine] = r.result
    return [(key, answers) for key, answers in groups.items() if len(set(answers.values())) > 1]


SUMMARY_COLUMNS = ("n", "p_bucket", "engine", "instances", "avg_exec_s", "avg_reach_s",
                   "avg_check_s", "avg_oracle_s", "timeouts", "resource", "disagreements")


def _mean(values):
    return sum(values) / len(values) if values else None


def summarize(records):
    """One row per (n, p bucket, engine), oracle time as its own column.

    Averages only cover records with status ok; unfinished runs are counted
    in ``timeouts`` and ``resource``.
    """
    if not records:
        raise ValueError("no records to summarize")
    engines = [e for e in ENGINES if e != "oracle" and any(r.engine == e for r in records)]
    engines = engines or ["oracle"]
    bad = {key[:3] for key, _ in disagreements(records)}
    rows = []
    seen = []
    for r in records:
        if (r.n, r.bucket) not in seen:
            seen.append((r.n, r.bucket))
    for n, bucket in seen:
        group = [r for r in records if r.n == n and r.bucket == bucket]
        oracle = [r.total_s for r in group if r.engine == "oracle" and r.ok]
        for engine in engines:
            mine = [r for r in group if r.engine == engine]
            ok = [r for r in mine if r.ok]
            rows.append({
                "n": n,
                "p_bucket": bucket,
                "engine": engine,
                "instances": len({r.instance for r in mine}),
                "avg_exec_s": _mean([r.total_s for r in ok]) if engine != "oracle" else None,
                "avg_reach_s": _mean([r.reach_s for r in ok]) if engine != "oracle" else None,
                "avg_check_s": _mean([r.check_s for r in ok]) if engine != "oracle" else None,
                "avg_oracle_s": _mean(oracle),
                "timeouts": sum(r.status == "timeout" for r in mine),
                "resource": sum(r.status == "resource" for r in mine),
                "disagreements": len({r.instance for r in mine if (r.bucket, r.n, r.instance) in bad}),
            })
    return rows


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def render_markdown(rows):
    header = list(SUMMARY_COLUMNS)
    body = [[_cell(row[c]) for c in header] for row in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(header)]
    numeric = [c not in ("p_bucket", "engine") for c in header]

    def line(cells):
        padded = [c.rjust(w) if num else c.ljust(w) for c, w, num in zip(cells, widths, numeric)]
        return "| " + " | ".join(padded) + " |"

    rule = "|" + "|".join(("-" * (w + 1) + ":") if num else (":" + "-" * (w + 1))
                          for w, num in zip(widths, numeric)) + "|"
    return "\n".join([line(header), rule] + [line(b) for b in body]) + "\n"


def write_records(records, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=RECORD_FIELDS)
        writer.writeheader()
        for r in records:
            writer.writerow(asdict(r))


def read_records(path):
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            for k in ("instance", "n", "seed"):
                row[k] = int(row[k])
            for k in ("p", "reach_s", "check_s", "total_s"):
                row[k] = float(row[k])
            out.append(BenchRecord(**row))
    return out


def write_summary(rows, path_md, path_csv=None):
    Path(path_md).write_text(render_markdown(rows), encoding="utf-8")
    if path_csv is not None:
        with open(path_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _cell(v) for k, v in row.items()})


def run_to_dir(cfg, out_dir):
    """Run the bench and write ``records.csv``, ``summary.md`` and
    ``summary.csv`` into ``out_dir``. Returns ``(records, rows)``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = run_bench(cfg)
    rows = summarize(records)
    write_records(records, out / "records.csv")
    write_summary(rows, out / "summary.md", out / "summary.csv")
    return records, rows


def reference_config(seed=2024, timeout=60.0, instances_per_bucket=10, workers=1):
    """n in {20, 40} with buckets [0, 0.5) and [0.5, 1), fixpoint vs oracle."""
    buckets = [Bucket(n, lo, hi, instances_per_bucket)
               for n in (20, 40) for lo, hi in ((0.0, 0.5), (0.5, 1.0))]
    return BenchConfig(tuple(buckets), seed, timeout, ("fixpoint", "oracle"), workers)

