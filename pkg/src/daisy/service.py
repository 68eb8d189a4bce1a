"""Job lifecycle and pipeline orchestration: submit, run, persist, retrieve.

Single and advanced requests run fetch -> parse -> family scan -> subclass
selection -> repeat detection -> artifact emission. Proteome requests fan the
same pipeline out over every cross-referenced structure of a proteome with a
bounded worker pool and aggregate processing-time statistics.
"""

from __future__ import annotations

import enum
import json
import os
import queue
import secrets
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Callable

from . import classify, clients, reupred
from .align import SearchCounter
from .classify import ClassificationMap, Taxonomy
from .clients import (
    AccessionKind,
    AccessionRef,
    FetchConfig,
    WorkItem,
    fetch_proteome_manifest,
    fetch_structure,
    manifest_work_items,
    resolve_accession,
)
from .reupred import DEFAULT_SCHEDULE, RelaxationSchedule, Srul, emit_region_outputs, identify_repeats
from .structmodel import ProteinStructure, Source, extract_sequence, parse_pdb

DEFAULT_PROBABILITY_THRESHOLD = 0.5
DEFAULT_BIT_THRESHOLD = 5.0


class ServiceError(Exception):
    pass


class InvalidAccession(ServiceError):
    pass


class InvalidSubclass(ServiceError):
    pass


class InvalidRequest(ServiceError):
    pass


class UnknownToken(ServiceError):
    pass


class UnknownRun(ServiceError):
    pass


class EmptyRun(ServiceError):
    pass


class ServiceUnavailable(ServiceError):
    pass


class RequestMode(enum.Enum):
    BASIC = "BASIC"
    ADVANCED = "ADVANCED"
    PROTEOME = "PROTEOME"


class RequestStatus(enum.Enum):
    QUEUED = "QUEUED"
    RUNNING = "RUNNING"
    DONE = "DONE"
    FAILED = "FAILED"


_ALLOWED_TRANSITIONS = {
    (RequestStatus.QUEUED, RequestStatus.RUNNING),
    (RequestStatus.RUNNING, RequestStatus.DONE),
    (RequestStatus.RUNNING, RequestStatus.FAILED),
    (RequestStatus.RUNNING, RequestStatus.QUEUED),  # restart recovery only
}


@dataclass
class ResultBundle:
    """Serialized pipeline outputs for one request."""
    structure_file: str
    chains: dict
    artifact_paths: list[str]
    exec_seconds: float
    download_seconds: float
    total_seconds: float

    def to_dict(self) -> dict:
        return {
            "structure_file": self.structure_file,
            "chains": self.chains,
            "artifact_paths": self.artifact_paths,
            "exec_seconds": self.exec_seconds,
            "download_seconds": self.download_seconds,
            "total_seconds": self.total_seconds,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResultBundle":
        return cls(
            structure_file=data["structure_file"],
            chains=data["chains"],
            artifact_paths=list(data["artifact_paths"]),
            exec_seconds=data["exec_seconds"],
            download_seconds=data["download_seconds"],
            total_seconds=data["total_seconds"],
        )


@dataclass
class CurationRequest:
    id: str
    email: str
    accession: AccessionRef
    mode: RequestMode
    selected_subclasses: tuple[str, ...]
    status: RequestStatus
    submitted_at: float
    finished_at: float | None = None
    error: str | None = None
    bundle: ResultBundle | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "email": self.email,
            "accession": {"kind": self.accession.kind.value, "value": self.accession.value},
            "mode": self.mode.value,
            "selected_subclasses": list(self.selected_subclasses),
            "status": self.status.value,
            "submitted_at": self.submitted_at,
            "finished_at": self.finished_at,
            "error": self.error,
            "bundle": self.bundle.to_dict() if self.bundle else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CurationRequest":
        return cls(
            id=data["id"],
            email=data["email"],
            accession=AccessionRef(AccessionKind(data["accession"]["kind"]),
                                   data["accession"]["value"]),
            mode=RequestMode(data["mode"]),
            selected_subclasses=tuple(data["selected_subclasses"]),
            status=RequestStatus(data["status"]),
            submitted_at=data["submitted_at"],
            finished_at=data["finished_at"],
            error=data["error"],
            bundle=ResultBundle.from_dict(data["bundle"]) if data["bundle"] else None,
        )


@dataclass(frozen=True)
class ProteomeEntry:
    accession: str
    source: Source
    component: str
    has_trr: bool
    region_count: int
    exec_seconds: float
    error: str | None = None
    artifact_dir: str | None = None

    def __post_init__(self):
        if self.error is None and self.has_trr != (self.region_count >= 1):
            raise ValueError("has_trr must mirror region_count >= 1")

    def to_dict(self) -> dict:
        return {
            "accession": self.accession,
            "source": self.source.value,
            "component": self.component,
            "has_trr": self.has_trr,
            "region_count": self.region_count,
            "exec_seconds": self.exec_seconds,
            "error": self.error,
            "artifact_dir": self.artifact_dir,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProteomeEntry":
        return cls(
            accession=data["accession"],
            source=Source(data["source"]),
            component=data["component"],
            has_trr=data["has_trr"],
            region_count=data["region_count"],
            exec_seconds=data["exec_seconds"],
            error=data.get("error"),
            artifact_dir=data.get("artifact_dir"),
        )


@dataclass(frozen=True)
class ProteomeStats:
    processed_total: int
    processed_pdb: int
    processed_alphafold: int
    apt_all: float
    structures_with_trr: int
    apt_with_trr: float
    apt_without_trr: float
    apt_pdb_trr: float
    apt_af_trr: float
    avg_regions_per_trr_structure: float
    apt_per_region: float

    @property
    def pdb_share_pct(self) -> float:
        return 100.0 * self.processed_pdb / self.processed_total if self.processed_total else 0.0

    @property
    def alphafold_share_pct(self) -> float:
        return 100.0 * self.processed_alphafold / self.processed_total if self.processed_total else 0.0

    def to_dict(self) -> dict:
        return {
            "processed_total": self.processed_total,
            "processed_pdb": self.processed_pdb,
            "processed_alphafold": self.processed_alphafold,
            "apt_all": self.apt_all,
            "structures_with_trr": self.structures_with_trr,
            "apt_with_trr": self.apt_with_trr,
            "apt_without_trr": self.apt_without_trr,
            "apt_pdb_trr": self.apt_pdb_trr,
            "apt_af_trr": self.apt_af_trr,
            "avg_regions_per_trr_structure": self.avg_regions_per_trr_structure,
            "apt_per_region": self.apt_per_region,
            "pdb_share_pct": self.pdb_share_pct,
            "alphafold_share_pct": self.alphafold_share_pct,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProteomeStats":
        return cls(**{k: data[k] for k in (
            "processed_total", "processed_pdb", "processed_alphafold", "apt_all",
            "structures_with_trr", "apt_with_trr", "apt_without_trr",
            "apt_pdb_trr", "apt_af_trr", "avg_regions_per_trr_structure",
            "apt_per_region")})


@dataclass
class ProteomeRun:
    run_id: str
    proteome_id: str
    entries: list[ProteomeEntry]
    stats: ProteomeStats | None
    skipped_components: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "proteome_id": self.proteome_id,
            "entries": [e.to_dict() for e in self.entries],
            "stats": self.stats.to_dict() if self.stats else None,
            "skipped_components": [list(s) for s in self.skipped_components],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProteomeRun":
        return cls(
            run_id=data["run_id"],
            proteome_id=data["proteome_id"],
            entries=[ProteomeEntry.from_dict(e) for e in data["entries"]],
            stats=ProteomeStats.from_dict(data["stats"]) if data["stats"] else None,
            skipped_components=[tuple(s) for s in data.get("skipped_components", [])],
        )


def generate_request_id(exists: Callable[[str], bool] | None = None) -> str:
    """URL-safe random token with >= 128 bits of entropy, regenerated on a
    store collision."""
    while True:
        token = secrets.token_urlsafe(16)
        if exists is None or not exists(token):
            return token


class RequestStore:
    """One JSON record file per request/run plus artifact directories.

    Record writes are atomic (temp file + rename); records survive process
    restarts unchanged.
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.requests_dir = self.data_dir / "requests"
        self.runs_dir = self.data_dir / "runs"
        self.artifacts_dir = self.data_dir / "artifacts"
        for d in (self.requests_dir, self.runs_dir, self.artifacts_dir):
            d.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()

    def _write_json(self, path: Path, payload: dict) -> None:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        os.replace(tmp, path)

    def exists(self, token: str) -> bool:
        return (self.requests_dir / f"{token}.json").is_file()

    def save_request(self, request: CurationRequest) -> None:
        with self._lock:
            self._write_json(self.requests_dir / f"{request.id}.json", request.to_dict())

    def load_request(self, token: str) -> CurationRequest:
        path = self.requests_dir / f"{token}.json"
        if not path.is_file():
            raise UnknownToken(token)
        with self._lock:
            return CurationRequest.from_dict(json.loads(path.read_text()))

    def list_request_ids(self) -> list[str]:
        return sorted(p.stem for p in self.requests_dir.glob("*.json"))

    def save_run(self, run: ProteomeRun) -> None:
        with self._lock:
            self._write_json(self.runs_dir / f"{run.run_id}.json", run.to_dict())

    def load_run(self, run_id: str) -> ProteomeRun:
        path = self.runs_dir / f"{run_id}.json"
        if not path.is_file():
            raise UnknownRun(run_id)
        with self._lock:
            return ProteomeRun.from_dict(json.loads(path.read_text()))

    def artifact_dir(self, token: str) -> Path:
        return self.artifacts_dir / token


def _packaged_data(name: str) -> str:
    return importlib_resources.files("daisy").joinpath(f"data/{name}").read_text()


def packaged_srul_dir() -> Path:
    return Path(str(importlib_resources.files("daisy").joinpath("data/srul")))


@dataclass
class EngineConfig:
    data_dir: Path
    cache_dir: Path | None = None
    offline: bool | None = None
    af_version: int | None = None
    probability_threshold: float = DEFAULT_PROBABILITY_THRESHOLD
    bit_threshold: float = DEFAULT_BIT_THRESHOLD
    workers: int = 0  # 0 -> cpu count
    srul_dir: Path | None = None
    schedule: RelaxationSchedule = DEFAULT_SCHEDULE
    transport: object | None = None
    retry_backoff: float = 0.25
    external_scan_path: Path | None = None


EntryTimer = Callable[[WorkItem, Callable[[], ResultBundle]], tuple[ResultBundle, float]]


def wall_clock_entry_timer(item: WorkItem, fn: Callable[[], ResultBundle]) -> tuple[ResultBundle, float]:
    bundle = fn()
    return bundle, bundle.exec_seconds


def deterministic_entry_timer(item: WorkItem, fn: Callable[[], ResultBundle]) -> tuple[ResultBundle, float]:
    """Content-derived fake duration; lets batch runs produce byte-identical
    stats regardless of machine load or parallelism."""
    bundle = fn()
    regions = sum(len(chain["regions"]) for chain in bundle.chains.values())
    digest = sum(ord(c) for c in item.ref.value)
    seconds = round(1.0 + (digest % 977) / 100.0 + 5.0 * regions, 2)
    return bundle, seconds


class Engine:
    """Loads the scan library, classification map, taxonomy and SRUL once and
    runs the curation pipeline against them."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self.store = RequestStore(config.data_dir)
        if config.cache_dir:
            cache_dir = Path(config.cache_dir)
        elif os.environ.get(clients.ENV_CACHE_DIR):
            cache_dir = Path(os.environ[clients.ENV_CACHE_DIR])
        else:
            cache_dir = self.store.data_dir / "cache"
        fetch_kwargs = {"backoff": config.retry_backoff}
        if config.transport is not None:
            fetch_kwargs["transport"] = config.transport
        self.fetch_config = FetchConfig.from_env(
            cache_dir=cache_dir, offline=config.offline,
            af_version=config.af_version, **fetch_kwargs)
        self.library = classify.parse_hmm_library(_packaged_data("hmm_library.txt"))
        self.cmap: ClassificationMap = classify.load_classification_map(
            _packaged_data("classification_map.tsv"))
        self.taxonomy: Taxonomy = classify.load_taxonomy(_packaged_data("taxonomy.tsv"))
        srul_dir = config.srul_dir if config.srul_dir else packaged_srul_dir()
        self.srul: Srul = reupred.load_srul(srul_dir)
        self.workers = config.workers or (os.cpu_count() or 2)

    # -- submission ---------------------------------------------------------

    def submit_request(self, accession: str, email: str, mode: RequestMode,
                       selected_subclasses: list[str] | None = None) -> CurationRequest:
        if not email or not email.strip():
            raise InvalidRequest("email is required")
        try:
            ref = resolve_accession(accession)
        except clients.Unrecognized as exc:
            raise InvalidAccession(str(exc)) from exc

        if mode is RequestMode.PROTEOME:
            if ref.kind is not AccessionKind.PROTEOME_ID:
                raise InvalidAccession(f"{accession!r} is not a proteome id")
        elif ref.kind is AccessionKind.PROTEOME_ID:
            raise InvalidAccession(f"{accession!r} is a proteome id; use a proteome request")

        selection: tuple[str, ...] = ()
        if mode is RequestMode.ADVANCED:
            if not selected_subclasses:
                raise InvalidSubclass("advanced requests need at least one subclass")
            for sid in selected_subclasses:
                if not self.taxonomy.is_valid_subclass(sid):
                    raise InvalidSubclass(f"unknown subclass {sid!r}")
            selection = tuple(dict.fromkeys(selected_subclasses))
        elif selected_subclasses:
            raise InvalidRequest("subclass selection requires an advanced request")

        token = generate_request_id(self.store.exists)
        request = CurationRequest(
            id=token, email=email.strip(), accession=ref, mode=mode,
            selected_subclasses=selection, status=RequestStatus.QUEUED,
            submitted_at=time.time())
        self.store.save_request(request)
        return request

    # -- state transitions --------------------------------------------------

    def _transition(self, request: CurationRequest, status: RequestStatus) -> None:
        if (request.status, status) not in _ALLOWED_TRANSITIONS:
            raise ServiceError(f"illegal transition {request.status} -> {status}")
        request.status = status
        self.store.save_request(request)

    # -- pipeline -----------------------------------------------------------

    def process_request(self, token: str) -> CurationRequest:
        """Worker entry point: runs the pipeline and never raises."""
        request = self.store.load_request(token)
        self._transition(request, RequestStatus.RUNNING)
        try:
            if request.mode is RequestMode.PROTEOME:
                run = self.run_proteome(request.accession.value, run_id=request.id)
                request.bundle = None
                request.error = None
            else:
                artifacts = self.store.artifact_dir(request.id)
                request.bundle = self.run_pipeline_to(
                    request.accession,
                    request.selected_subclasses if request.mode is RequestMode.ADVANCED else None,
                    artifacts)
            request.finished_at = time.time()
            self._transition(request, RequestStatus.DONE)
        except Exception as exc:
            request.error = f"{type(exc).__name__}: {exc}"
            request.finished_at = time.time()
            self._transition(request, RequestStatus.FAILED)
        return request

    def run_pipeline_to(self, ref: AccessionRef,
                        subclass_override: tuple[str, ...] | None,
                        artifacts_dir: Path) -> ResultBundle:
        """Fetch, scan, detect and emit artifacts for one structure.

        Artifact content is a pure function of the inputs (no timestamps), so
        identical requests produce byte-identical trees.
        """
        t_total = time.perf_counter()
        t_fetch = time.perf_counter()
        record = fetch_structure(ref, self.fetch_config)
        download_seconds = 0.0 if record.from_cache else time.perf_counter() - t_fetch

        text = record.path.read_text()
        structure = parse_pdb(text, accession=ref.value, source=record.source)

        artifacts_dir = Path(artifacts_dir)
        artifacts_dir.mkdir(parents=True, exist_ok=True)
        (artifacts_dir / "structure.pdb").write_text(text)

        external_hits = None
        if self.config.external_scan_path:
            external_hits = classify.parse_external_scan(
                Path(self.config.external_scan_path).read_text())

        chains_report: dict = {}
        for chain in structure.chains:
            chain_dir = artifacts_dir / "chains" / chain.id
            chain_dir.mkdir(parents=True, exist_ok=True)
            seq = chain.sequence()
            (chain_dir / "sequence.fasta").write_text(
                extract_sequence(chain, f"{structure.accession}_{chain.id}"))

            if external_hits is not None:
                hits = [h for h in external_hits if h.chain_id == chain.id]
            else:
                hits = classify.scan_sequence(seq, self.library,
                                              self.config.bit_threshold, chain_id=chain.id)
            candidates = classify.predict_chain_subclasses(hits, self.cmap, self.taxonomy)
            if subclass_override:
                selected = list(subclass_override)
            else:
                selected = classify.select_execution_subclasses(
                    candidates, self.config.probability_threshold, self.taxonomy)

            chain_structure = ProteinStructure(
                accession=structure.accession, source=structure.source, chains=(chain,))
            counter = SearchCounter()
            outcome = identify_repeats(chain_structure, set(selected),
                                       self.config.schedule, self.srul, counter=counter)

            region_reports = []
            for k, region in enumerate(outcome.regions, start=1):
                region_dir = chain_dir / f"region_{k}"
                manifest = emit_region_outputs(region, region_dir)
                manifest["directory"] = f"chains/{chain.id}/region_{k}"
                region_reports.append(manifest)

            scan_payload = {
                "chain_id": chain.id,
                "sequence_length": len(seq),
                "hits": [
                    {"family": h.family_accession, "env_start": h.env_start,
                     "env_end": h.env_end, "bit_score": h.bit_score}
                    for h in hits
                ],
                "candidates": [{"subclass": s, "score": v} for s, v in candidates.candidates],
                "used_fallback": candidates.used_fallback,
                "selected_subclasses": selected,
            }
            (chain_dir / "scan.json").write_text(
                json.dumps(scan_payload, sort_keys=True, indent=2) + "\n")

            chains_report[chain.id] = {
                **scan_payload,
                "regions": region_reports,
                "relaxation_level_used": outcome.relaxation_level_used,
                "search_call_count": outcome.search_call_count,
            }

        artifact_paths = sorted(
            str(p.relative_to(artifacts_dir))
            for p in artifacts_dir.rglob("*") if p.is_file())
        total_seconds = time.perf_counter() - t_total
        return ResultBundle(
            structure_file="structure.pdb",
            chains=chains_report,
            artifact_paths=artifact_paths,
            exec_seconds=total_seconds - download_seconds,
            download_seconds=download_seconds,
            total_seconds=total_seconds,
        )

    # -- proteome -----------------------------------------------------------

    def run_proteome(self, proteome_id: str, parallelism: int | None = None,
                     entry_timer: EntryTimer | None = None,
                     run_id: str | None = None) -> ProteomeRun:
        """Process every structure work item of the proteome; per-entry
        failures are recorded and do not stop the run."""
        manifest = fetch_proteome_manifest(proteome_id, self.fetch_config)
        items, skipped = manifest_work_items(manifest)
        run_id = run_id or generate_request_id(lambda t: (self.store.runs_dir / f"{t}.json").is_file())
        timer = entry_timer or wall_clock_entry_timer
        workers = parallelism or self.workers

        def process(item: WorkItem) -> ProteomeEntry:
            artifact_dir = self.store.artifact_dir(run_id) / item.ref.value
            try:
                bundle, seconds = timer(
                    item, lambda: self.run_pipeline_to(item.ref, None, artifact_dir))
                region_count = sum(
                    len(c["regions"]) for c in bundle.chains.values())
                return ProteomeEntry(
                    accession=item.ref.value, source=item.source,
                    component=item.component, has_trr=region_count >= 1,
                    region_count=region_count, exec_seconds=seconds,
                    artifact_dir=str(artifact_dir.relative_to(self.store.data_dir)))
            except Exception as exc:
                return ProteomeEntry(
                    accession=item.ref.value, source=item.source,
                    component=item.component, has_trr=False, region_count=0,
                    exec_seconds=0.0, error=f"{type(exc).__name__}: {exc}")

        if workers <= 1:
            entries = [process(item) for item in items]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                entries = list(pool.map(process, items))

        processed = [e for e in entries if e.error is None]
        stats = compute_proteome_stats(processed) if processed else None
        run = ProteomeRun(run_id=run_id, proteome_id=proteome_id,
                          entries=entries, stats=stats,
                          skipped_components=skipped)
        self.store.save_run(run)
        return run

    # -- retrieval ----------------------------------------------------------

    def get_request(self, token: str) -> tuple[CurationRequest, ResultBundle | None]:
        request = self.store.load_request(token)
        bundle = request.bundle if request.status is RequestStatus.DONE else None
        return request, bundle

    def recover_interrupted(self) -> list[str]:
        """Requeue jobs left QUEUED or RUNNING by a previous process."""
        tokens = []
        for token in self.store.list_request_ids():
            request = self.store.load_request(token)
            if request.status is RequestStatus.RUNNING:
                self._transition(request, RequestStatus.QUEUED)
                tokens.append(token)
            elif request.status is RequestStatus.QUEUED:
                tokens.append(token)
        return tokens


def compute_proteome_stats(entries: list[ProteomeEntry]) -> ProteomeStats:
    """Table-style aggregates over processed entries.

    apt_per_region is total time spent on repeat-containing structures divided
    by the total region count (0 when no regions were found).
    """
    if not entries:
        raise EmptyRun("no processed entries")

    def mean(values: list[float]) -> float:
        return sum(values) / len(values) if values else 0.0

    pdb = [e for e in entries if e.source is Source.PDB]
    af = [e for e in entries if e.source is Source.ALPHAFOLD]
    trr = [e for e in entries if e.has_trr]
    no_trr = [e for e in entries if not e.has_trr]
    total_regions = sum(e.region_count for e in trr)
    trr_time = sum(e.exec_seconds for e in trr)

    return ProteomeStats(
        processed_total=len(entries),
        processed_pdb=len(pdb),
        processed_alphafold=len(af),
        apt_all=mean([e.exec_seconds for e in entries]),
        structures_with_trr=len(trr),
        apt_with_trr=mean([e.exec_seconds for e in trr]),
        apt_without_trr=mean([e.exec_seconds for e in no_trr]),
        apt_pdb_trr=mean([e.exec_seconds for e in trr if e.source is Source.PDB]),
        apt_af_trr=mean([e.exec_seconds for e in trr if e.source is Source.ALPHAFOLD]),
        avg_regions_per_trr_structure=(total_regions / len(trr)) if trr else 0.0,
        apt_per_region=(trr_time / total_regions) if total_regions else 0.0,
    )


def list_proteome_results(run: ProteomeRun,
                          db: Source | None = None,
                          has_trr: bool | None = None,
                          component: str | None = None,
                          order_by: str | None = None,
                          direction: str = "asc") -> list[ProteomeEntry]:
    """Conjunctive filtering plus a stable sort over the run's entries."""
    entries = list(run.entries)
    if db is not None:
        entries = [e for e in entries if e.source is db]
    if has_trr is not None:
        entries = [e for e in entries if e.has_trr == has_trr]
    if component is not None:
        entries = [e for e in entries if e.component == component]
    if order_by is not None:
        keys = {
            "exec_seconds": lambda e: e.exec_seconds,
            "component": lambda e: e.component,
            "db": lambda e: e.source.value,
        }
        if order_by not in keys:
            raise ServiceError(f"unknown order_by {order_by!r}")
        entries.sort(key=keys[order_by], reverse=(direction == "desc"))
    return entries


STATS_ROWS = [
    ("Proteome ID", None),
    ("Processed structures", "processed_total"),
    ("Processed structures (PDB)", "processed_pdb"),
    ("Processed structures (AlphaFold)", "processed_alphafold"),
    ("APT (seconds)", "apt_all"),
    ("Structures with TRR", "structures_with_trr"),
    ("APT for structures with TDRR (seconds)", "apt_with_trr"),
    ("APT for structures without TDRR (seconds)", "apt_without_trr"),
    ("APT for PDB structures with TDRR (seconds)", "apt_pdb_trr"),
    ("APT for AlphaFold structures with TDRR (seconds)", "apt_af_trr"),
    ("Average number of regions for structures with TDRR", "avg_regions_per_trr_structure"),
    ("APT for each TDRR (seconds)", "apt_per_region"),
]


def render_stats_text(stats: ProteomeStats, proteome_id: str) -> str:
    width = max(len(label) for label, _ in STATS_ROWS) + 2
    lines = []
    for label, attr in STATS_ROWS:
        if attr is None:
            value = proteome_id
        else:
            raw = getattr(stats, attr)
            value = str(raw) if isinstance(raw, int) else f"{raw:.2f}"
        lines.append(f"{label.ljust(width)}{value}")
    return "\n".join(lines) + "\n"


class JobService:
    """Queue plus worker threads running Engine.process_request."""

    def __init__(self, engine: Engine, workers: int | None = None):
        self.engine = engine
        self.workers = workers or engine.workers
        self._queue: queue.Queue[str] = queue.Queue()
        self._threads: list[threading.Thread] = []
        self._stop = threading.Event()
        self._running_tokens: set[str] = set()
        self._running_lock = threading.Lock()

    def start(self) -> None:
        for token in self.engine.recover_interrupted():
            self._queue.put(token)
        for i in range(self.workers):
            t = threading.Thread(target=self._worker, name=f"daisy-worker-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def submit(self, token: str) -> None:
        if self._stop.is_set():
            raise ServiceUnavailable("service is shutting down")
        self._queue.put(token)

    def _worker(self) -> None:
        while not self._stop.is_set():
            try:
                token = self._queue.get(timeout=0.1)
            except queue.Empty:
                continue
            with self._running_lock:
                self._running_tokens.add(token)
            try:
                self.engine.process_request(token)
            finally:
                with self._running_lock:
                    self._running_tokens.discard(token)
                self._queue.task_done()

    def shutdown(self, grace: float = 5.0) -> None:
        """Stop accepting work; wait briefly for in-flight jobs, then mark any
        survivors QUEUED so a restart picks them up."""
        self._stop.set()
        deadline = time.time() + grace
        for t in self._threads:
            t.join(timeout=max(0.0, deadline - time.time()))
        with self._running_lock:
            leftovers = set(self._running_tokens)
        for token in leftovers:
            try:
                request = self.engine.store.load_request(token)
                if request.status is RequestStatus.RUNNING:
                    request.status = RequestStatus.QUEUED
                    self.engine.store.save_request(request)
            except UnknownToken:
                pass
