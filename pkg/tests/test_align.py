import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from daisy import align
from daisy import structmodel as sm
from daisy import synthetic

# Frozen values from scripts/kabsch_grid_oracle.py (10^6-rotation grid +
# Nelder-Mead polish, no SVD anywhere in the oracle).
GRID_ORACLE_CASES = [
    (
        [[0.0, 0.0, 0.0], [1.5, 0.0, 0.0], [1.5, 1.5, 0.0], [0.0, 1.5, 1.0]],
        [[0.1, 0.0, 0.2], [1.4, 0.3, 0.0], [1.7, 1.6, 0.1], [0.2, 1.4, 0.9]],
        0.218664781,
    ),
    (
        [[0.0, 0.0, 0.0], [3.8, 0.0, 0.0], [7.6, 1.0, 0.0], [11.4, 1.0, 1.0]],
        [[0.0, 0.5, 0.0], [0.2, 4.1, 0.3], [1.0, 7.8, 0.3], [1.3, 11.6, 1.2]],
        0.313211489,
    ),
    (
        [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 2.0], [3.0, 1.0, 5.0], [2.0, 2.0, 2.0]],
        [[1.2, 2.2, 2.7], [3.9, 5.4, 6.1], [7.3, 7.7, 2.4], [2.8, 1.1, 4.6], [2.0, 1.8, 2.3]],
        0.346113967,
    ),
    (
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0],
         [1.0, 1.0, 1.0], [2.0, 0.5, 0.5]],
        [[0.3, 0.1, 0.0], [1.2, 0.2, 0.1], [-0.1, 1.1, 0.2], [0.1, -0.2, 1.1],
         [0.9, 1.2, 0.8], [2.2, 0.4, 0.7]],
        0.241316400,
    ),
    (
        [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [2.0, 2.0, 0.0], [0.0, 2.0, 0.0]],
        [[0.0, 0.0, 0.0], [0.0, 2.0, 0.2], [-2.0, 2.0, 0.0], [-2.0, 0.0, -0.2]],
        0.009950494,
    ),
]


def rigid_transform(rng):
    R = Rotation.random(random_state=rng.integers(0, 2**31)).as_matrix()
    t = rng.uniform(-20, 20, 3)
    return R, t


def test_kabsch_identity():
    P = np.array(GRID_ORACLE_CASES[0][0])
    sup = align.kabsch_superpose(P, P)
    assert sup.rmsd == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(sup.rotation, np.eye(3), atol=1e-9)
    assert np.allclose(sup.translation, 0.0, atol=1e-9)


def test_kabsch_recovers_rigid_motion():
    P = np.array(GRID_ORACLE_CASES[2][0])
    theta = np.pi / 2
    R = np.array([[np.cos(theta), -np.sin(theta), 0],
                  [np.sin(theta), np.cos(theta), 0],
                  [0, 0, 1.0]])
    Q = P @ R.T + np.array([1.0, 2.0, 3.0])
    sup = align.kabsch_superpose(P, Q)
    assert sup.rmsd <= 1e-9
    assert np.allclose(sup.apply(P), Q, atol=1e-9)


@pytest.mark.parametrize("case", range(len(GRID_ORACLE_CASES)))
def test_kabsch_matches_grid_oracle(case):
    P, Q, expected = GRID_ORACLE_CASES[case]
    got = align.kabsch_superpose(np.array(P), np.array(Q)).rmsd
    assert got == pytest.approx(expected, abs=1e-4)


def test_kabsch_collinear_points_still_proper_rotation():
    P = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [3.0, 0.0, 0.0]])
    Q = np.array([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 2.0, 0.0], [0.0, 3.0, 0.0]])
    sup = align.kabsch_superpose(P, Q)
    assert np.linalg.det(sup.rotation) == pytest.approx(1.0, abs=1e-9)
    assert sup.rmsd <= 1e-9


def test_kabsch_errors():
    with pytest.raises(align.TooFewPoints):
        align.kabsch_superpose(np.zeros((2, 3)), np.zeros((2, 3)))
    with pytest.raises(align.LengthMismatch):
        align.kabsch_superpose(np.zeros((4, 3)), np.zeros((5, 3)))


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_kabsch_rotation_orthonormal_property(seed):
    rng = np.random.default_rng(seed)
    n = rng.integers(3, 30)
    P = rng.uniform(-10, 10, (n, 3))
    Q = rng.uniform(-10, 10, (n, 3))
    sup = align.kabsch_superpose(P, Q)
    assert np.allclose(sup.rotation.T @ sup.rotation, np.eye(3), atol=1e-9)
    assert np.linalg.det(sup.rotation) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_kabsch_optimality_over_random_rotations(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 20))
    P = rng.uniform(-5, 5, (n, 3))
    Q = rng.uniform(-5, 5, (n, 3))
    best = align.kabsch_superpose(P, Q).rmsd
    Pc = P - P.mean(axis=0)
    Qc = Q - Q.mean(axis=0)
    rots = Rotation.random(1000, random_state=int(rng.integers(0, 2**31))).as_matrix()
    moved = np.einsum("rij,nj->rni", rots, Pc)
    rmsds = np.sqrt(((moved - Qc) ** 2).sum(axis=(1, 2)) / n)
    assert best <= rmsds.min() + 1e-9


def test_compute_rmsd_basics():
    P = np.zeros((4, 3))
    assert align.compute_rmsd(P, P) == 0.0
    Q = P.copy()
    Q[0, 0] = 2.0
    assert align.compute_rmsd(P, Q) == pytest.approx(1.0)
    with pytest.raises(align.LengthMismatch):
        align.compute_rmsd(np.zeros((3, 3)), np.zeros((4, 3)))


def test_compute_rmsd_matches_direct_recomputation():
    rng = np.random.default_rng(7)
    P = rng.uniform(-8, 8, (10, 3))
    Q = rng.uniform(-8, 8, (10, 3))
    # spreadsheet-style recomputation with plain Python arithmetic
    total = 0.0
    for i in range(10):
        dx = P[i][0] - Q[i][0]
        dy = P[i][1] - Q[i][1]
        dz = P[i][2] - Q[i][2]
        total += dx * dx + dy * dy + dz * dz
    expected = (total / 10) ** 0.5
    assert align.compute_rmsd(P, Q) == pytest.approx(expected, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_rmsd_rigid_invariance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 25))
    P = rng.uniform(-10, 10, (n, 3))
    Q = rng.uniform(-10, 10, (n, 3))
    R, t = rigid_transform(rng)
    assert align.compute_rmsd(P @ R.T + t, Q @ R.T + t) == pytest.approx(
        align.compute_rmsd(P, Q), abs=1e-9)


# -- structural search --------------------------------------------------------

def oracle_min_rmsd(P, Q):
    """Independent optimal-superposition RMSD via scipy's Davenport solver."""
    Pc = P - P.mean(axis=0)
    Qc = Q - Q.mean(axis=0)
    _, rssd = Rotation.align_vectors(Qc, Pc)
    return rssd / np.sqrt(len(P))


def oracle_search(query, template, level, min_span=3):
    """Exhaustive placement enumeration scoring every window independently."""
    qca = query.ca_coords() if isinstance(query, sm.Chain) else query.chains[0].ca_coords()
    tca = template.ca_coords() if isinstance(template, sm.Chain) else template.chains[0].ca_coords()
    nq, nt = len(qca), len(tca)
    best = None
    for a in range(3):
        for b in range(3):
            L = nt - a - b
            if L < max(3, min_span) or L > nq:
                continue
            for s in range(nq - L + 1):
                rmsd = float(oracle_min_rmsd(qca[s:s + L], tca[a:a + L]))
                cov = L / nt
                if rmsd > level.rmsd_cutoff or cov < level.min_coverage:
                    continue
                score = cov / (1.0 + rmsd)
                key = (-score, s, -L, a)
                if best is None or key < best[0]:
                    best = (key, s, a, L, rmsd, cov, score)
    return best


def test_search_exact_containment():
    solenoid = synthetic.make_solenoid_structure(n_copies=3)
    template = synthetic.unit_structure()
    hit = align.structural_search(solenoid.chains[0], template,
                                  align.SearchLevel(2.0, 0.85))
    assert hit is not None
    assert hit.coverage == 1.0
    assert hit.rmsd <= 1e-6
    assert hit.query_end - hit.query_start + 1 == 20
    assert (hit.query_start, hit.query_end) in [(0, 19), (20, 39), (40, 59)]


def test_search_deleted_residue_matches_oracle():
    template = synthetic.unit_structure()
    unit = synthetic.unit_chain()
    query = sm.Chain(id="A", residues=unit.residues[:10] + unit.residues[11:])
    level = align.SearchLevel(4.0, 0.65)
    hit = align.structural_search(query, template, level)
    assert hit is not None
    assert hit.coverage >= 19 / 20 - 1e-12
    assert hit.rmsd <= level.rmsd_cutoff
    expected = oracle_search(query, template, level)
    assert expected is not None
    _, s, a, L, rmsd, cov, score = expected
    assert hit.pairs[0] == (s, a)
    assert len(hit.pairs) == L
    assert hit.rmsd == pytest.approx(rmsd, abs=1e-6)


def test_search_no_hit_for_incompatible_shapes():
    straight = synthetic.make_chain("V" * 30, [(-139.0, 135.0)] * 30)
    template = synthetic.unit_structure()  # helix-turn-helix
    level = align.SearchLevel(2.0, 0.8)
    assert align.structural_search(straight, template, level) is None
    assert oracle_search(straight, template, level) is None


def test_search_counter_increments():
    counter = align.SearchCounter()
    solenoid = synthetic.make_solenoid_structure(n_copies=2)
    template = synthetic.unit_structure()
    align.structural_search(solenoid.chains[0], template,
                            align.SearchLevel(2.0, 0.85), counter=counter)
    align.structural_search(solenoid.chains[0], template,
                            align.SearchLevel(2.0, 0.85), counter=counter)
    assert counter.count == 2


LEVELS = [
    align.SearchLevel(2.0, 0.85),
    align.SearchLevel(3.0, 0.75),
    align.SearchLevel(4.0, 0.65),
    align.SearchLevel(5.0, 0.55),
]


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_search_monotone_under_relaxation(seed):
    rng = np.random.default_rng(seed)
    dihedrals = [(float(rng.uniform(-160, -40)), float(rng.uniform(-60, 160)))
                 for _ in range(40)]
    query = synthetic.make_chain("A" * 40, dihedrals)
    template = synthetic.unit_structure()
    hit_sets = [set(align.qualifying_placements(query, template, lvl)) for lvl in LEVELS]
    for strict, loose in zip(hit_sets, hit_sets[1:]):
        assert strict <= loose


def test_similarity_matrix_identical_units():
    units = [synthetic.unit_chain() for _ in range(3)]
    matrix = align.unit_similarity_matrix(units)
    assert np.allclose(matrix.values, 0.0, atol=1e-9)


def test_similarity_matrix_shape_and_symmetry():
    units = [synthetic.make_unit("3.3", variant=v) for v in range(4)]
    matrix = align.unit_similarity_matrix(units)
    assert matrix.values.shape == (4, 4)
    assert np.allclose(matrix.values, matrix.values.T)
    assert np.allclose(np.diag(matrix.values), 0.0)
    assert (matrix.values >= 0).all()


def test_similarity_matrix_entries_match_pairwise_kabsch():
    units = [synthetic.make_unit("3.3", variant=v) for v in range(3)]
    matrix = align.unit_similarity_matrix(units)
    for i in range(3):
        for j in range(i + 1, 3):
            ci = units[i].ca_coords()
            cj = units[j].ca_coords()
            L = min(len(ci), len(cj))
            expected = align.kabsch_superpose(ci[:L], cj[:L]).rmsd
            assert matrix.values[i, j] == pytest.approx(expected, abs=1e-12)


def test_similarity_matrix_requires_two_units():
    with pytest.raises(align.TooFewUnits):
        align.unit_similarity_matrix([synthetic.unit_chain()])


def test_region_views_identical_units():
    units = [synthetic.unit_chain() for _ in range(3)]
    views = align.region_alignment_views(units, 0)
    assert len(set(views.sequence_rows)) == 1
    assert views.average_rmsd == pytest.approx(0.0, abs=1e-9)
    assert all(len(r) == len(views.sequence_rows[0]) for r in views.secondary_structure_rows)


def test_region_views_average_matches_matrix_mean():
    units = [synthetic.make_unit("3.3", variant=v) for v in range(6)]
    views = align.region_alignment_views(units, 0)
    matrix = align.unit_similarity_matrix(units)
    entries = [matrix.values[i, j] for i in range(6) for j in range(i + 1, 6)]
    assert len(entries) == 15
    assert views.average_rmsd == pytest.approx(sum(entries) / 15, abs=1e-12)


def test_matrix_tsv_format():
    units = [synthetic.unit_chain() for _ in range(3)]
    matrix = align.unit_similarity_matrix(units, labels=["u1", "u2", "u3"])
    text = align.matrix_to_tsv(matrix)
    lines = text.splitlines()
    assert lines[0] == "unit\tu1\tu2\tu3"
    assert lines[1] == "u1\t0.000\t0.000\t0.000"
