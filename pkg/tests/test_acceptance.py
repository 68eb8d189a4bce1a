"""Acceptance suite: one test per release criterion, each printing a PASS line
with its runtime and asserting the stated tolerance and time budget."""

import hashlib
import json
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient
from scipy.spatial.transform import Rotation

from daisy import align, classify, reupred, synthetic
from daisy.service import (
    RequestMode,
    RequestStatus,
    Source,
    compute_proteome_stats,
    deterministic_entry_timer,
    list_proteome_results,
    ProteomeEntry,
)
from daisy.webapi import create_app
from tests.test_align import GRID_ORACLE_CASES
from tests.test_classify import enumerate_paths_best, random_profile, random_sequence


@contextmanager
def criterion(name: str, runtime_limit: float):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < runtime_limit, f"{name}: {elapsed:.2f}s exceeds {runtime_limit}s"
    print(f"\nACCEPTANCE PASS: {name} ({elapsed:.2f}s < {runtime_limit:.0f}s)")


def test_kabsch_correctness():
    with criterion("Kabsch correctness", 10.0):
        rng = np.random.default_rng(20240821)
        for _ in range(300):
            n = int(rng.integers(3, 51))
            P = rng.uniform(-50, 50, (n, 3))
            R = Rotation.random(random_state=int(rng.integers(0, 2**31))).as_matrix()
            t = rng.uniform(-100, 100, 3)
            Q = P @ R.T + t
            sup = align.kabsch_superpose(P, Q)
            assert sup.rmsd <= 1e-6
            assert np.linalg.det(sup.rotation) == pytest.approx(1.0, abs=1e-9)

        for P, Q, expected in GRID_ORACLE_CASES:
            got = align.kabsch_superpose(np.array(P), np.array(Q)).rmsd
            assert abs(got - expected) <= 1e-3


def test_viterbi_oracle_equivalence():
    with criterion("Viterbi-oracle equivalence (200 instances)", 30.0):
        rng = np.random.default_rng(777)
        checked = 0
        while checked < 200:
            profile = random_profile(rng)
            seq = random_sequence(rng)
            got = classify.viterbi_local(profile, seq)
            expected = enumerate_paths_best(profile, seq)
            if expected is None:
                assert got is None
            else:
                assert got is not None
                assert abs(got[0] - expected) <= 1e-9
            checked += 1


def test_validity_rule_boundaries():
    from tests.test_reupred import units_from_layout

    with criterion("Validity-rule boundaries", 5.0):
        rng = np.random.default_rng(4242)
        for _ in range(400):
            n = int(rng.integers(0, 9))
            lengths = [int(rng.integers(13, 41)) for _ in range(n)]
            gaps = [int(rng.integers(0, 80)) for _ in range(max(0, n - 1))]
            units = units_from_layout(lengths, gaps)
            got = reupred.conquer_validate(units)
            rule1 = sum(gaps) < 40
            rule2 = n > 0 and sum(1 for g in gaps if g > 0) / n <= 0.25
            assert got.valid == ((n >= 3) and (rule1 or rule2))

        # exact boundaries
        assert reupred.conquer_validate(units_from_layout([13] * 3, [39, 0])).valid
        assert not reupred.conquer_validate(units_from_layout([13] * 3, [40, 5])).valid
        assert reupred.conquer_validate(units_from_layout([13] * 4, [50, 0, 0])).valid  # 0.25
        gaps_26 = [4] * 13 + [0] * 36
        assert not reupred.conquer_validate(units_from_layout([13] * 50, gaps_26)).valid  # 0.26
        reupred.UnitPrediction(chain_id="A", start=0, end=12, template_id="t",
                               rmsd=0.0, origin=reupred.UnitOrigin.MASTER)
        with pytest.raises(ValueError):
            reupred.UnitPrediction(chain_id="A", start=0, end=11, template_id="t",
                                   rmsd=0.0, origin=reupred.UnitOrigin.MASTER)


def test_synthetic_solenoid_end_to_end(engine):
    with criterion("Synthetic solenoid end-to-end (offline)", 60.0):
        request = engine.submit_request("SYN1", "acceptance@local", RequestMode.BASIC)
        done = engine.process_request(request.id)
        assert done.status is RequestStatus.DONE
        report = done.bundle.chains["A"]
        assert len(report["regions"]) == 1
        region = report["regions"][0]
        assert region["unit_count"] == 6
        assert region["relaxation_level"] == 0
        assert region["average_rmsd"] <= 0.5
        covered = sum(u["end"] - u["start"] + 1 for u in region["units"])
        assert covered >= 0.9 * 120

        two = engine.submit_request("SYN2", "acceptance@local", RequestMode.BASIC)
        done2 = engine.process_request(two.id)
        assert done2.status is RequestStatus.DONE
        assert len(done2.bundle.chains["A"]["regions"]) == 2


SPEEDUP_SUBCLASSES = ["3.3", "3.1", "3.2", "3.4", "4.1", "4.2", "4.4", "5.1"]


def test_subclass_restriction_speedup():
    with criterion("Subclass-restriction speedup", 120.0):
        units_per_subclass = 16
        srul = reupred.srul_from_triples(
            synthetic.uniform_srul_entries(units_per_subclass, SPEEDUP_SUBCLASSES))
        structure = synthetic.make_solenoid_structure(n_copies=6)

        def count_searches(subclass_filter):
            out = reupred.identify_repeats(structure, subclass_filter,
                                           reupred.DEFAULT_SCHEDULE, srul)
            assert out.regions, f"no regions with filter {subclass_filter}"
            return out.search_call_count

        restricted = count_searches({"3.3"})
        unrestricted = count_searches(None)
        assert restricted <= unrestricted / (len(SPEEDUP_SUBCLASSES) / 2), \
            f"restricted={restricted} unrestricted={unrestricted}"

        counts = []
        for k in range(1, len(SPEEDUP_SUBCLASSES) + 1):
            counts.append(count_searches(set(SPEEDUP_SUBCLASSES[:k])))
        assert counts == sorted(counts), f"not monotone: {counts}"
        assert counts[0] == restricted
        assert counts[-1] == unrestricted


def test_table_arithmetic_reproduction():
    with criterion("Table 1 arithmetic reproduction", 5.0):
        # solve the TRR stratum split from the published stratum means
        n_trr, mean_trr = 155, 761.94
        mean_pdb_trr, mean_af_trr = 797.33, 454.46
        n_pdb_trr = round((n_trr * mean_trr - n_trr * mean_af_trr)
                          / (mean_pdb_trr - mean_af_trr))
        n_af_trr = n_trr - n_pdb_trr
        assert (n_pdb_trr, n_af_trr) == (139, 16)

        def entry(acc, source, seconds, regions):
            return ProteomeEntry(accession=acc, source=source, component="c",
                                 has_trr=regions >= 1, region_count=regions,
                                 exec_seconds=seconds)

        # 155 TRR structures holding 293 regions total (avg 1.89)
        region_counts = [2] * 138 + [1] * 17
        entries = (
            [entry(f"P{i}", Source.PDB, mean_pdb_trr, region_counts[i])
             for i in range(n_pdb_trr)]
            + [entry(f"A{i}", Source.ALPHAFOLD, mean_af_trr, region_counts[n_pdb_trr + i])
               for i in range(n_af_trr)]
            + [entry(f"N{i}", Source.PDB, 63.05, 0) for i in range(2090 - n_pdb_trr)]
            + [entry(f"M{i}", Source.ALPHAFOLD, 63.05, 0) for i in range(210 - n_af_trr)]
        )
        assert len(entries) == 2300
        stats = compute_proteome_stats(entries)

        assert stats.apt_all == pytest.approx(110.15, abs=0.01)
        assert stats.pdb_share_pct == pytest.approx(90.87, abs=0.01)
        assert stats.alphafold_share_pct == pytest.approx(9.13, abs=0.01)
        assert stats.apt_with_trr == pytest.approx(761.94, abs=0.5)
        assert stats.avg_regions_per_trr_structure == pytest.approx(1.89, abs=0.01)
        # the published 539.44 s per-region value has no reproducible
        # denominator; our declared definition gives total-TRR-time / regions
        assert stats.apt_per_region == pytest.approx(
            (139 * mean_pdb_trr + 16 * mean_af_trr) / 293, abs=0.01)
        assert abs(stats.apt_per_region - 539.44) > 50.0


def test_proteome_filter_order(engine):
    with criterion("Proteome filter/order", 5.0):
        run = engine.run_proteome(synthetic.FIXTURE_PROTEOME_ID, parallelism=2,
                                  entry_timer=deterministic_entry_timer)
        assert len(run.entries) == 5

        by_db = list_proteome_results(run, db=Source.PDB)
        assert {e.accession for e in by_db} == {"9SA1", "9SB1", "9SC1"}

        by_trr = list_proteome_results(run, has_trr=True)
        assert {e.accession for e in by_trr} == {"9SA1", "9SC1", "P00001"}

        by_component = list_proteome_results(run, component="TWOB_FIX")
        assert [e.accession for e in by_component] == ["9SC1"]

        ordered = list_proteome_results(run, order_by="exec_seconds", direction="desc")
        seconds = [e.exec_seconds for e in ordered]
        assert seconds == sorted(seconds, reverse=True)
        ordered_asc = list_proteome_results(run, order_by="component", direction="asc")
        names = [e.component for e in ordered_asc]
        assert names == sorted(names)


def _tree_digest(root: Path) -> dict[str, str]:
    return {
        str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*")) if p.is_file()
    }


def test_determinism_and_round_trips(engine, tmp_path):
    from daisy import structmodel as sm
    from daisy.clients import resolve_accession
    from tests.test_structmodel import _structure_signature

    with criterion("Determinism & round-trips", 30.0):
        ref = resolve_accession("SYN2")
        engine.run_pipeline_to(ref, None, tmp_path / "one")
        engine.run_pipeline_to(ref, None, tmp_path / "two")
        first = _tree_digest(tmp_path / "one")
        assert first == _tree_digest(tmp_path / "two")
        assert len(first) > 10

        rng = np.random.default_rng(31337)
        names = ["N", "CA", "C", "O", "CB"]
        rnames = list(sm.AMINO3TO1.keys()) + ["XYZ"]
        for _ in range(100):
            chains = []
            serial = 1
            for ci in range(int(rng.integers(1, 4))):
                residues = []
                for ri in range(int(rng.integers(1, 8))):
                    atoms = []
                    for name in rng.choice(names, size=int(rng.integers(1, 5)),
                                           replace=False):
                        pos = tuple(round(float(v), 3)
                                    for v in rng.uniform(-400, 400, 3))
                        atoms.append(sm.Atom(serial=serial, name=str(name),
                                             element=str(name)[0], position=pos))
                        serial += 1
                    residues.append(sm.Residue(
                        seq_num=ri + 1, insertion_code="",
                        name3=str(rng.choice(rnames)), code1="X",
                        atoms=tuple(atoms)))
                chains.append(sm.Chain(id="ABC"[ci], residues=tuple(residues)))
            structure = sm.ProteinStructure(accession="GEN", source=sm.Source.PDB,
                                            chains=tuple(chains))
            reparsed = sm.parse_pdb(sm.write_pdb(structure), accession="GEN")
            assert _structure_signature(structure) == _structure_signature(reparsed)


def test_service_lifecycle(engine_factory, tmp_path):
    with criterion("Service lifecycle over HTTP", 60.0):
        data_dir = tmp_path / "svc-acceptance"
        engine = engine_factory(data_dir=data_dir)
        with TestClient(create_app(engine)) as client:
            token = client.post("/api/requests", json={
                "accession": "SYN1", "email": "x@y.z", "mode": "BASIC"}).json()["id"]
            payload = None
            deadline = time.time() + 50
            while time.time() < deadline:
                payload = client.get(f"/api/requests/{token}").json()
                if payload["status"] in ("DONE", "FAILED"):
                    break
                time.sleep(0.05)
            assert payload["status"] == "DONE"
            assert payload["result"]["chains"]["A"]["regions"]
            manifest = client.get(
                f"/api/requests/{token}/outputs/chains/A/region_1/manifest.json")
            assert manifest.status_code == 200
            assert json.loads(manifest.text)["unit_count"] == 6

        # restart durability: brand-new engine and app over the same data dir
        reopened = engine_factory(data_dir=data_dir)
        with TestClient(create_app(reopened)) as client:
            payload = client.get(f"/api/requests/{token}").json()
            assert payload["status"] == "DONE"
            assert client.get(
                f"/api/requests/{token}/outputs/chains/A/region_1/matrix.tsv"
            ).status_code == 200
