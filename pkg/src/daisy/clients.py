"""Remote database clients: accession resolution, structure fetching with an
atomic cache, proteome manifests, and a fully offline fixture mode.

All network traffic goes through an injectable transport so tests (and the
offline mode) never touch the network.
"""

from __future__ import annotations

import enum
import json
import os
import re
import tempfile
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .structmodel import Source

ENV_CACHE_DIR = "DAISY_CACHE_DIR"
ENV_OFFLINE = "DAISY_OFFLINE"
ENV_AF_VERSION = "DAISY_AF_VERSION"

PDB_URL_TEMPLATE = "https://files.rcsb.org/download/{id}.pdb"
AF_URL_TEMPLATE = "https://alphafold.ebi.ac.uk/files/AF-{acc}-F1-model_v{v}.pdb"
PROTEOME_URL_TEMPLATE = (
    "https://rest.uniprot.org/uniprotkb/search"
    "?query=proteome:{id}&fields=accession,id,xref_pdb,xref_alphafolddb"
    "&format=json&size=500"
)

# Strict PDB ids start with a digit; the trailing alternative admits synthetic
# fixture ids (e.g. SYN1) used by the offline corpus.
PDB_ID_RE = re.compile(r"^[0-9][A-Z0-9]{3}$")
FIXTURE_ID_RE = re.compile(r"^[A-Z0-9]{4}$")
UNIPROT_ACC_RE = re.compile(
    r"^([OPQ][0-9][A-Z0-9]{3}[0-9]|[A-NR-Z][0-9]([A-Z][A-Z0-9]{2}[0-9]){1,2})$")
PROTEOME_ID_RE = re.compile(r"^UP[0-9]{9}$")


class ClientError(Exception):
    pass


class Unrecognized(ClientError):
    pass


class NotFoundUpstream(ClientError):
    pass


class NetworkFailure(ClientError):
    def __init__(self, message: str, retryable: bool = True):
        super().__init__(message)
        self.retryable = retryable


class OfflineMiss(ClientError):
    pass


class AccessionKind(enum.Enum):
    PDB_ID = "PDB_ID"
    UNIPROT_ACC = "UNIPROT_ACC"
    PROTEOME_ID = "PROTEOME_ID"


@dataclass(frozen=True)
class AccessionRef:
    kind: AccessionKind
    value: str


def resolve_accession(text: str) -> AccessionRef:
    """Classify an accession string; PDB and UniProt ids are upper-cased."""
    token = text.strip().upper()
    if not token:
        raise Unrecognized("empty accession")
    if PDB_ID_RE.match(token):
        return AccessionRef(AccessionKind.PDB_ID, token)
    if PROTEOME_ID_RE.match(token):
        return AccessionRef(AccessionKind.PROTEOME_ID, token)
    if UNIPROT_ACC_RE.match(token):
        return AccessionRef(AccessionKind.UNIPROT_ACC, token)
    if FIXTURE_ID_RE.match(token):
        return AccessionRef(AccessionKind.PDB_ID, token)
    raise Unrecognized(f"unrecognized accession {text!r}")


class UrllibTransport:
    """Default HTTP transport."""

    def __init__(self, timeout: float = 30.0):
        self.timeout = timeout

    def get(self, url: str) -> bytes:
        try:
            with urllib.request.urlopen(url, timeout=self.timeout) as resp:
                return resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise NotFoundUpstream(url) from exc
            retryable = exc.code >= 500
            raise NetworkFailure(f"HTTP {exc.code} for {url}", retryable=retryable) from exc
        except urllib.error.URLError as exc:
            raise NetworkFailure(f"{exc.reason} for {url}") from exc


@dataclass
class FetchConfig:
    cache_dir: Path
    offline: bool = False
    af_version: int = 4
    pdb_url: str = PDB_URL_TEMPLATE
    af_url: str = AF_URL_TEMPLATE
    proteome_url: str = PROTEOME_URL_TEMPLATE
    transport: object = field(default_factory=UrllibTransport)
    retries: int = 3
    backoff: float = 0.25

    @classmethod
    def from_env(cls, cache_dir: Path | None = None, offline: bool | None = None,
                 **kwargs) -> "FetchConfig":
        if cache_dir is None:
            cache_dir = Path(os.environ.get(ENV_CACHE_DIR, Path.home() / ".daisy-cache"))
        if offline is None:
            offline = os.environ.get(ENV_OFFLINE, "") == "1"
        af_version = kwargs.pop("af_version", None)
        if af_version is None:
            af_version = int(os.environ.get(ENV_AF_VERSION, "4"))
        return cls(cache_dir=Path(cache_dir), offline=offline,
                   af_version=af_version, **kwargs)


@dataclass(frozen=True)
class FetchRecord:
    ref: AccessionRef
    source: Source
    path: Path
    fetched_at: float
    from_cache: bool


@dataclass(frozen=True)
class ProteomeComponent:
    name: str
    accession: str
    pdb_ids: tuple[str, ...]
    alphafold_available: bool


@dataclass(frozen=True)
class ProteomeManifest:
    proteome_id: str
    components: tuple[ProteomeComponent, ...]


@dataclass(frozen=True)
class WorkItem:
    ref: AccessionRef
    source: Source
    component: str


_flight_lock = threading.Lock()
_ref_locks: dict[str, threading.Lock] = {}


def _lock_for(key: str) -> threading.Lock:
    with _flight_lock:
        if key not in _ref_locks:
            _ref_locks[key] = threading.Lock()
        return _ref_locks[key]


def structure_cache_name(ref: AccessionRef, af_version: int = 4) -> str:
    if ref.kind is AccessionKind.PDB_ID:
        return f"{ref.value}.pdb"
    if ref.kind is AccessionKind.UNIPROT_ACC:
        return f"AF-{ref.value}-F1-model_v{af_version}.pdb"
    raise ValueError(f"no structure file for {ref.kind}")


def structure_url(ref: AccessionRef, config: FetchConfig) -> str:
    if ref.kind is AccessionKind.PDB_ID:
        return config.pdb_url.format(id=ref.value)
    return config.af_url.format(acc=ref.value, v=config.af_version)


def _download_with_retry(url: str, config: FetchConfig) -> bytes:
    last: Exception | None = None
    for attempt in range(config.retries):
        try:
            return config.transport.get(url)
        except NetworkFailure as exc:
            last = exc
            if not exc.retryable or attempt == config.retries - 1:
                raise
            time.sleep(config.backoff * (2 ** attempt))
    raise last  # pragma: no cover


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fetch_structure(ref: AccessionRef, config: FetchConfig) -> FetchRecord:
    """Fetch (or reuse from cache) a structure file.

    Cache writes are atomic; concurrent fetches of the same reference collapse
    to a single download. Offline mode never constructs a transport call.
    """
    if ref.kind not in (AccessionKind.PDB_ID, AccessionKind.UNIPROT_ACC):
        raise ValueError(f"cannot fetch structure for {ref.kind}")
    source = Source.PDB if ref.kind is AccessionKind.PDB_ID else Source.ALPHAFOLD
    path = Path(config.cache_dir) / structure_cache_name(ref, config.af_version)

    if path.is_file():
        return FetchRecord(ref=ref, source=source, path=path,
                           fetched_at=time.time(), from_cache=True)
    if config.offline:
        raise OfflineMiss(f"{ref.value} not in offline cache {config.cache_dir}")

    with _lock_for(str(path)):
        if path.is_file():
            return FetchRecord(ref=ref, source=source, path=path,
                               fetched_at=time.time(), from_cache=True)
        data = _download_with_retry(structure_url(ref, config), config)
        _atomic_write(path, data)
    return FetchRecord(ref=ref, source=source, path=path,
                       fetched_at=time.time(), from_cache=False)


def parse_proteome_payload(proteome_id: str, payload: dict) -> ProteomeManifest:
    """UniProt search payload -> manifest (components in listing order)."""
    components = []
    for entry in payload.get("results", []):
        accession = entry.get("primaryAccession", "")
        name = entry.get("uniProtkbId") or accession
        pdb_ids = []
        alphafold = False
        for xref in entry.get("uniProtKBCrossReferences", []):
            if xref.get("database") == "PDB":
                pdb_ids.append(xref.get("id", "").upper())
            elif xref.get("database") == "AlphaFoldDB":
                alphafold = True
        components.append(ProteomeComponent(
            name=name, accession=accession,
            pdb_ids=tuple(pdb_ids), alphafold_available=alphafold))
    return ProteomeManifest(proteome_id=proteome_id, components=tuple(components))


def fetch_proteome_manifest(proteome_id: str, config: FetchConfig) -> ProteomeManifest:
    if not PROTEOME_ID_RE.match(proteome_id):
        raise Unrecognized(f"bad proteome id {proteome_id!r}")
    path = Path(config.cache_dir) / f"{proteome_id}.json"
    if not path.is_file():
        if config.offline:
            raise OfflineMiss(f"{proteome_id} not in offline cache {config.cache_dir}")
        with _lock_for(str(path)):
            if not path.is_file():
                data = _download_with_retry(config.proteome_url.format(id=proteome_id), config)
                _atomic_write(path, data)
    payload = json.loads(path.read_text())
    return parse_proteome_payload(proteome_id, payload)


def manifest_work_items(manifest: ProteomeManifest) -> tuple[list[WorkItem], list[tuple[str, str]]]:
    """Structure work items for a proteome run.

    Components with PDB cross-references contribute those entries (PDB ids are
    deduplicated across components, first component kept); components without
    any PDB entry fall back to their AlphaFold model; components with neither
    are skipped with a recorded reason.
    """
    items: list[WorkItem] = []
    skipped: list[tuple[str, str]] = []
    seen_pdb: set[str] = set()
    for comp in manifest.components:
        if comp.pdb_ids:
            for pdb_id in comp.pdb_ids:
                if pdb_id in seen_pdb:
                    continue
                seen_pdb.add(pdb_id)
                items.append(WorkItem(
                    ref=AccessionRef(AccessionKind.PDB_ID, pdb_id),
                    source=Source.PDB, component=comp.name))
        elif comp.alphafold_available:
            items.append(WorkItem(
                ref=AccessionRef(AccessionKind.UNIPROT_ACC, comp.accession),
                source=Source.ALPHAFOLD, component=comp.name))
        else:
            skipped.append((comp.name, "no cross-referenced structure"))
    return items, skipped
