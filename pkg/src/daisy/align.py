"""Rigid-body superposition, RMSD, and the seed-window structural search.

All alignment is CA-only. The search slides a template-length window over the
query with stride 1, scores each placement by optimal-superposition RMSD, and
refines placements by trimming up to two residues from either end of the
template. Score = coverage / (1 + rmsd); ties resolve to the smallest query
start, then the longest span.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .structmodel import Chain, ProteinStructure, assign_secondary_structure

END_SHIFT = 2  # max residues trimmed from each template end during refinement
MIN_ALIGNED = 3  # superposition needs >= 3 point pairs


class AlignError(Exception):
    pass


class TooFewPoints(AlignError):
    pass


class LengthMismatch(AlignError):
    pass


class TooFewUnits(AlignError):
    pass


@dataclass(frozen=True)
class Superposition:
    """Rigid transform p -> rotation @ p + translation minimizing RMSD onto the target."""
    rotation: np.ndarray
    translation: np.ndarray
    rmsd: float

    def apply(self, coords: np.ndarray) -> np.ndarray:
        return coords @ self.rotation.T + self.translation


@dataclass(frozen=True)
class SearchLevel:
    rmsd_cutoff: float
    min_coverage: float


@dataclass(frozen=True)
class StructuralAlignment:
    pairs: tuple[tuple[int, int], ...]  # (query residue index, template residue index)
    rmsd: float
    coverage: float
    score: float

    @property
    def query_start(self) -> int:
        return self.pairs[0][0]

    @property
    def query_end(self) -> int:
        return self.pairs[-1][0]


@dataclass(frozen=True)
class SimilarityMatrix:
    labels: tuple[str, ...]
    values: np.ndarray  # pairwise post-superposition RMSD, Angstrom


@dataclass
class SearchCounter:
    """Per-run accumulator of structural_search invocations."""
    count: int = 0

    def bump(self) -> None:
        self.count += 1


@dataclass(frozen=True)
class AlignmentViews:
    labels: tuple[str, ...]
    sequence_rows: tuple[str, ...]
    secondary_structure_rows: tuple[str, ...]
    average_rmsd: float


def compute_rmsd(P: np.ndarray, Q: np.ndarray) -> float:
    """Plain coordinate RMSD, no superposition: sqrt(mean ||P_i - Q_i||^2)."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape:
        raise LengthMismatch(f"coordinate sets differ in shape: {P.shape} vs {Q.shape}")
    if len(P) < 1:
        raise TooFewPoints("need at least one point")
    return float(np.sqrt(((P - Q) ** 2).sum() / len(P)))


def kabsch_superpose(P: np.ndarray, Q: np.ndarray) -> Superposition:
    """Optimal rigid superposition of P onto Q (SVD with reflection correction).

    Always returns a proper rotation (det +1), including for degenerate
    (collinear/planar) point sets.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape:
        raise LengthMismatch(f"coordinate sets differ in shape: {P.shape} vs {Q.shape}")
    if len(P) < MIN_ALIGNED:
        raise TooFewPoints(f"need >= {MIN_ALIGNED} points, got {len(P)}")

    p_mean = P.mean(axis=0)
    q_mean = Q.mean(axis=0)
    Xc = P - p_mean
    Yc = Q - q_mean
    C = Xc.T @ Yc
    U, S, Vt = np.linalg.svd(C)
    d = np.sign(np.linalg.det(Vt.T @ U.T))
    if d == 0:
        d = 1.0
    D = np.diag([1.0, 1.0, d])
    R = Vt.T @ D @ U.T
    t = q_mean - R @ p_mean
    moved = P @ R.T + t
    rmsd = float(np.sqrt(((moved - Q) ** 2).sum() / len(P)))
    return Superposition(rotation=R, translation=t, rmsd=rmsd)


def _batched_min_rmsd(windows: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Optimal-superposition RMSD of each window (W, L, 3) onto Y (L, 3)."""
    L = Y.shape[0]
    Xc = windows - windows.mean(axis=1, keepdims=True)
    Yc = Y - Y.mean(axis=0)
    C = np.einsum("wli,lj->wij", Xc, Yc)
    _, S, _ = np.linalg.svd(C)
    dets = np.linalg.det(C)
    s_sum = S[:, 0] + S[:, 1] + np.where(dets < 0, -S[:, 2], S[:, 2])
    sq = ((Xc ** 2).sum(axis=(1, 2)) + (Yc ** 2).sum() - 2.0 * s_sum) / L
    return np.sqrt(np.clip(sq, 0.0, None))


def _ca_view(obj: Chain | ProteinStructure) -> tuple[Chain, np.ndarray, list[int]]:
    chain = obj if isinstance(obj, Chain) else obj.chains[0]
    return chain, chain.ca_coords(), chain.ca_index_map()


def enumerate_placements(query: Chain | ProteinStructure,
                         template: Chain | ProteinStructure) -> list[tuple[int, int, int]]:
    """All candidate placements as (query CA start, template CA offset, length).

    A placement pairs query[s+i] with template[a+i] for i < L, where
    L = template length minus up to END_SHIFT residues trimmed from each
    template end, and the window must fit inside the query.
    """
    _, qca, _ = _ca_view(query)
    _, tca, _ = _ca_view(template)
    nq, nt = len(qca), len(tca)
    out = []
    for a in range(END_SHIFT + 1):
        for b in range(END_SHIFT + 1):
            L = nt - a - b
            if L < MIN_ALIGNED or L > nq:
                continue
            for s in range(nq - L + 1):
                out.append((s, a, L))
    return out


def _placement_metrics(query, template) -> list[tuple[int, int, int, float, float, float]]:
    """(s, a, L, rmsd, coverage, score) for every placement, batched by (a, L)."""
    _, qca, _ = _ca_view(query)
    _, tca, _ = _ca_view(template)
    nt = len(tca)
    placements = enumerate_placements(query, template)
    groups: dict[tuple[int, int], list[int]] = {}
    for (s, a, L) in placements:
        groups.setdefault((a, L), []).append(s)

    out = []
    for (a, L), starts in groups.items():
        windows = np.stack([qca[s:s + L] for s in starts])
        rmsds = _batched_min_rmsd(windows, tca[a:a + L])
        coverage = L / nt
        for s, rmsd in zip(starts, rmsds):
            rmsd = float(rmsd)
            score = coverage / (1.0 + rmsd)
            out.append((s, a, L, rmsd, coverage, score))
    return out


def qualifying_placements(query, template, level: SearchLevel,
                          min_span: int = MIN_ALIGNED) -> list[tuple[int, int, int]]:
    """Placements passing the level's cutoffs (used by the relaxation-monotonicity checks)."""
    return [
        (s, a, L)
        for (s, a, L, rmsd, cov, _) in _placement_metrics(query, template)
        if rmsd <= level.rmsd_cutoff and cov >= level.min_coverage and L >= min_span
    ]


def structural_search(query: Chain | ProteinStructure,
                      template: Chain | ProteinStructure,
                      level: SearchLevel,
                      counter: SearchCounter | None = None,
                      min_span: int = MIN_ALIGNED) -> StructuralAlignment | None:
    """Best placement of the template unit inside the query, or None.

    A placement qualifies when its superposition RMSD <= level.rmsd_cutoff,
    its template coverage >= level.min_coverage, and it pairs at least
    min_span residues.
    """
    if counter is not None:
        counter.bump()
    _, qca, qmap = _ca_view(query)
    _, tca, tmap = _ca_view(template)
    if len(qca) < MIN_ALIGNED or len(tca) < MIN_ALIGNED:
        return None

    best = None
    best_key = None
    for (s, a, L, rmsd, cov, score) in _placement_metrics(query, template):
        if rmsd > level.rmsd_cutoff or cov < level.min_coverage or L < min_span:
            continue
        key = (-score, s, -L, a)
        if best_key is None or key < best_key:
            best_key = key
            best = (s, a, L, rmsd, cov, score)
    if best is None:
        return None
    s, a, L, rmsd, cov, score = best
    pairs = tuple((qmap[s + i], tmap[a + i]) for i in range(L))
    return StructuralAlignment(pairs=pairs, rmsd=rmsd, coverage=cov, score=score)


def unit_similarity_matrix(units: list[Chain | ProteinStructure],
                           labels: list[str] | None = None) -> SimilarityMatrix:
    """Pairwise post-superposition RMSD over CA sets, paired by order index
    and truncated to the shorter unit."""
    if len(units) < 2:
        raise TooFewUnits(f"need >= 2 units, got {len(units)}")
    if labels is None:
        labels = [f"unit_{i + 1}" for i in range(len(units))]
    coords = [_ca_view(u)[1] for u in units]
    n = len(units)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            L = min(len(coords[i]), len(coords[j]))
            rmsd = kabsch_superpose(coords[i][:L], coords[j][:L]).rmsd
            values[i, j] = values[j, i] = rmsd
    return SimilarityMatrix(labels=tuple(labels), values=values)


def average_upper_triangle(matrix: SimilarityMatrix) -> float:
    n = len(matrix.labels)
    idx = np.triu_indices(n, k=1)
    return float(matrix.values[idx].mean())


PERMISSIVE_LEVEL = SearchLevel(rmsd_cutoff=float("inf"), min_coverage=0.0)


def region_alignment_views(units: list[Chain | ProteinStructure],
                           master_index: int,
                           labels: list[str] | None = None,
                           level: SearchLevel = PERMISSIVE_LEVEL) -> AlignmentViews:
    """Sequence and secondary-structure alignment rows of every unit against the
    master unit, plus the mean of the similarity-matrix upper triangle."""
    if len(units) < 2:
        raise TooFewUnits(f"need >= 2 units, got {len(units)}")
    if not 0 <= master_index < len(units):
        raise ValueError(f"master index {master_index} out of range")
    if labels is None:
        labels = [f"unit_{i + 1}" for i in range(len(units))]

    master_chain = units[master_index] if isinstance(units[master_index], Chain) \
        else units[master_index].chains[0]
    ncols = len(master_chain.residues)

    seq_rows = []
    ss_rows = []
    for i, unit in enumerate(units):
        chain = unit if isinstance(unit, Chain) else unit.chains[0]
        seq = chain.sequence()
        ss = assign_secondary_structure(chain)
        if i == master_index:
            mapping = {j: j for j in range(ncols)}
        else:
            aln = structural_search(unit, units[master_index], level)
            if aln is not None:
                mapping = {t: q for (q, t) in aln.pairs}
            else:
                mapping = {j: j for j in range(min(ncols, len(chain.residues)))}
        seq_rows.append("".join(seq[mapping[c]] if c in mapping else "-" for c in range(ncols)))
        ss_rows.append("".join(ss[mapping[c]] if c in mapping else "-" for c in range(ncols)))

    sim = unit_similarity_matrix(units, labels)
    return AlignmentViews(
        labels=tuple(labels),
        sequence_rows=tuple(seq_rows),
        secondary_structure_rows=tuple(ss_rows),
        average_rmsd=average_upper_triangle(sim),
    )


def matrix_to_tsv(matrix: SimilarityMatrix) -> str:
    """Similarity matrix as TSV: header row of unit ids, values with 3 decimals."""
    lines = ["unit\t" + "\t".join(matrix.labels)]
    for label, row in zip(matrix.labels, matrix.values):
        lines.append(label + "\t" + "\t".join(f"{v:.3f}" for v in row))
    return "\n".join(lines) + "\n"
