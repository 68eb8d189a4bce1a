// Frozen service API payloads captured from a live offline run of the
// backend (fixture corpus: SYN1 solenoid, DEC1 decoy, UP000000005).
// These are exactly what the documented endpoints return.

import type {
  ProteomeResultsPayload,
  ProteomeStatsPayload,
  RequestPayload,
  TaxonomyPayload,
} from "../src/api.js";

export const REQUEST_DONE: RequestPayload = {
  "accession": "SYN1",
  "accession_kind": "PDB_ID",
  "error": null,
  "finished_at": 1786419140.8558874,
  "id": "Y3cG-TZEArPh6gNTe5CUkg",
  "mode": "BASIC",
  "result": {
    "artifact_paths": [
      "chains/A/region_1/aligned_units.pdb",
      "chains/A/region_1/alignment.txt",
      "chains/A/region_1/manifest.json",
      "chains/A/region_1/matrix.tsv",
      "chains/A/region_1/unit_1.pdb",
      "chains/A/region_1/unit_2.pdb",
      "chains/A/region_1/unit_3.pdb",
      "chains/A/region_1/unit_4.pdb",
      "chains/A/region_1/unit_5.pdb",
      "chains/A/region_1/unit_6.pdb",
      "chains/A/scan.json",
      "chains/A/sequence.fasta",
      "structure.pdb"
    ],
    "chains": {
      "A": {
        "candidates": [
          {
            "score": 1.0,
            "subclass": "3.3"
          },
          {
            "score": 0.13153311678041726,
            "subclass": "4.4"
          }
        ],
        "chain_id": "A",
        "hits": [
          {
            "bit_score": 68.81120300000002,
            "env_end": 19,
            "env_start": 0,
            "family": "SYNF001"
          },
          {
            "bit_score": 9.050952,
            "env_end": 18,
            "env_start": 15,
            "family": "SYNF002"
          }
        ],
        "regions": [
          {
            "average_rmsd": 0.0006655025922628762,
            "chain_id": "A",
            "classification": "3.3",
            "directory": "chains/A/region_1",
            "files": [
              "unit_1.pdb",
              "unit_2.pdb",
              "unit_3.pdb",
              "unit_4.pdb",
              "unit_5.pdb",
              "unit_6.pdb",
              "aligned_units.pdb",
              "alignment.txt",
              "matrix.tsv",
              "manifest.json"
            ],
            "relaxation_level": 0,
            "rule_satisfied": "BOTH",
            "unit_count": 6,
            "units": [
              {
                "end": 19,
                "index": 1,
                "origin": "MASTER",
                "rmsd": 0.0,
                "start": 0,
                "template_id": "u3_3"
              },
              {
                "end": 39,
                "index": 2,
                "origin": "DERIVED",
                "rmsd": 0.0006088562246062304,
                "start": 20,
                "template_id": "unit_2"
              },
              {
                "end": 59,
                "index": 3,
                "origin": "DERIVED",
                "rmsd": 0.0005697770281766194,
                "start": 40,
                "template_id": "unit_2"
              },
              {
                "end": 79,
                "index": 4,
                "origin": "DERIVED",
                "rmsd": 0.0006409894029992825,
                "start": 60,
                "template_id": "unit_3"
              },
              {
                "end": 99,
                "index": 5,
                "origin": "DERIVED",
                "rmsd": 0.0006430014795238539,
                "start": 80,
                "template_id": "unit_2"
              },
              {
                "end": 119,
                "index": 6,
                "origin": "DERIVED",
                "rmsd": 0.0005610181782468107,
                "start": 100,
                "template_id": "master"
              }
            ]
          }
        ],
        "relaxation_level_used": 0,
        "search_call_count": 16,
        "selected_subclasses": [
          "3.3"
        ],
        "sequence_length": 120,
        "used_fallback": false
      }
    },
    "download_seconds": 0.0,
    "exec_seconds": 0.08239344399953552,
    "structure_file": "structure.pdb",
    "total_seconds": 0.08239344399953552
  },
  "selected_subclasses": [],
  "status": "DONE",
  "submitted_at": 1786419140.769432
} as unknown as RequestPayload;

export const REQUEST_NO_REGIONS: RequestPayload = {
  "accession": "DEC1",
  "accession_kind": "PDB_ID",
  "error": null,
  "finished_at": 1786419140.9379156,
  "id": "JnQ3PVulgtdDpmC7Vsk_uw",
  "mode": "BASIC",
  "result": {
    "artifact_paths": [
      "chains/A/scan.json",
      "chains/A/sequence.fasta",
      "structure.pdb"
    ],
    "chains": {
      "A": {
        "candidates": [
          {
            "score": 1.0,
            "subclass": "3.3"
          }
        ],
        "chain_id": "A",
        "hits": [
          {
            "bit_score": 7.017923,
            "env_end": 7,
            "env_start": 6,
            "family": "SYNF001"
          }
        ],
        "regions": [],
        "relaxation_level_used": null,
        "search_call_count": 4,
        "selected_subclasses": [
          "3.3"
        ],
        "sequence_length": 120,
        "used_fallback": false
      }
    },
    "download_seconds": 0.0,
    "exec_seconds": 0.04729587700057891,
    "structure_file": "structure.pdb",
    "total_seconds": 0.04729587700057891
  },
  "selected_subclasses": [],
  "status": "DONE",
  "submitted_at": 1786419140.887307
} as unknown as RequestPayload;

export const TAXONOMY: TaxonomyPayload = {
  "classes": [
    {
      "id": "3",
      "name": "Class III (elongated)",
      "subclasses": [
        {
          "id": "3.1",
          "name": "beta-solenoid"
        },
        {
          "id": "3.2",
          "name": "alpha/beta-solenoid"
        },
        {
          "id": "3.3",
          "name": "alpha-solenoid"
        },
        {
          "id": "3.4",
          "name": "beta-spiral"
        }
      ]
    },
    {
      "id": "4",
      "name": "Class IV (closed)",
      "subclasses": [
        {
          "id": "4.1",
          "name": "TIM-barrel"
        },
        {
          "id": "4.2",
          "name": "beta-barrel"
        },
        {
          "id": "4.3",
          "name": "beta-trefoil"
        },
        {
          "id": "4.4",
          "name": "beta-propeller"
        },
        {
          "id": "4.5",
          "name": "alpha/beta-prism"
        },
        {
          "id": "4.6",
          "name": "alpha-barrel"
        }
      ]
    },
    {
      "id": "5",
      "name": "Class V (beads on a string)",
      "subclasses": [
        {
          "id": "5.1",
          "name": "alpha-beads"
        },
        {
          "id": "5.2",
          "name": "beta-beads"
        },
        {
          "id": "5.3",
          "name": "alpha/beta-beads"
        },
        {
          "id": "5.4",
          "name": "beta-sandwich-beads"
        },
        {
          "id": "5.5",
          "name": "alpha/beta-sandwich-beads"
        }
      ]
    }
  ]
} as unknown as TaxonomyPayload;

export const PROTEOME_RESULTS: ProteomeResultsPayload = {
  "entries": [
    {
      "accession": "9SA1",
      "artifact_dir": "artifacts/fZJmIXET_SpF1GdolYk4Ow/9SA1",
      "component": "SOLA_FIX",
      "error": null,
      "exec_seconds": 8.54,
      "has_trr": true,
      "region_count": 1,
      "source": "PDB"
    },
    {
      "accession": "9SB1",
      "artifact_dir": "artifacts/fZJmIXET_SpF1GdolYk4Ow/9SB1",
      "component": "DECB_FIX",
      "error": null,
      "exec_seconds": 3.55,
      "has_trr": false,
      "region_count": 0,
      "source": "PDB"
    },
    {
      "accession": "9SC1",
      "artifact_dir": "artifacts/fZJmIXET_SpF1GdolYk4Ow/9SC1",
      "component": "TWOB_FIX",
      "error": null,
      "exec_seconds": 13.56,
      "has_trr": true,
      "region_count": 2,
      "source": "PDB"
    },
    {
      "accession": "P00001",
      "artifact_dir": "artifacts/fZJmIXET_SpF1GdolYk4Ow/P00001",
      "component": "SOLC_FIX",
      "error": null,
      "exec_seconds": 9.21,
      "has_trr": true,
      "region_count": 1,
      "source": "ALPHAFOLD"
    },
    {
      "accession": "P00002",
      "artifact_dir": "artifacts/fZJmIXET_SpF1GdolYk4Ow/P00002",
      "component": "DECD_FIX",
      "error": null,
      "exec_seconds": 4.22,
      "has_trr": false,
      "region_count": 0,
      "source": "ALPHAFOLD"
    }
  ],
  "proteome_id": "UP000000005",
  "run_id": "fZJmIXET_SpF1GdolYk4Ow"
} as unknown as ProteomeResultsPayload;

export const PROTEOME_STATS: ProteomeStatsPayload = {
  "proteome_id": "UP000000005",
  "run_id": "fZJmIXET_SpF1GdolYk4Ow",
  "skipped_components": [],
  "stats": {
    "alphafold_share_pct": 40.0,
    "apt_af_trr": 9.21,
    "apt_all": 7.816,
    "apt_pdb_trr": 11.05,
    "apt_per_region": 7.827500000000001,
    "apt_with_trr": 10.436666666666667,
    "apt_without_trr": 3.885,
    "avg_regions_per_trr_structure": 1.3333333333333333,
    "pdb_share_pct": 60.0,
    "processed_alphafold": 2,
    "processed_pdb": 3,
    "processed_total": 5,
    "structures_with_trr": 3
  }
} as unknown as ProteomeStatsPayload;
