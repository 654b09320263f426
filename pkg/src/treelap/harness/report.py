"""Search report object model, JSON/CSV serialization and content digest.

Report schema (JSON object)::

    {
      "schema": "treelap.conjecture-report/1",
      "config":   {kind, trees, family, master_seed, trials, zero_tol,
                   cluster_tol, eig_tol, samples, strict},
      "totals":   {"trials": int, "candidates": int, "candidates_weak_only": int,
                   "inconclusive_multiplicity_fraction": float},
      "status_counts": {"Holds": int, "ViolationCandidate": int,
                        "InconclusiveMultiplicity": int, "InconclusiveNumeric": int},
      "cluster_sizes": {"<d>": int, ...},
      "candidates": [ {index, tree_id, tree (edge list), n, matrix, eigenvalue,
                       vector, residual, zero_tol, classification, weak_ok,
                       refinement, revalidated}, ... ],
      "instances":  [ {index, tree, status, eigenvalue, cluster_size,
                       outcome?, stage?, ...}, ... ],
      "timing":  {"wall_seconds": float, "workers": int},
      "digest":  "sha256 hex"
    }

``tree`` is the Prüfer sequence joined with ``-``. A candidate is "weak only"
when it fails solely because Case I asks for strict increase. The digest is
the SHA-256 of the canonical JSON (sorted keys, no whitespace) of every field
except ``timing`` and ``digest``.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from collections import Counter
from dataclasses import dataclass

from .status import Status

SCHEMA = "treelap.conjecture-report/1"
_EXCLUDED = ("timing", "digest")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def compute_digest(payload: dict) -> str:
    body = {k: v for k, v in payload.items() if k not in _EXCLUDED}
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


@dataclass
class ConjectureReport:
    payload: dict

    @classmethod
    def build(cls, config: dict, records: list, wall: float, workers: int) -> "ConjectureReport":
        counts = Counter(r["status"] for r in records)
        status_counts = {s.value: counts.get(s.value, 0) for s in Status}
        sizes = Counter(r["cluster_size"] for r in records if r.get("cluster_size"))
        candidates = []
        for r in records:
            if r["status"] == Status.VIOLATION_CANDIDATE.value:
                c = dict(r["candidate"])
                c.update(index=r["index"], tree_id=r["tree"], refinement=r.get("refinement"),
                         revalidated=r.get("revalidated"))
                candidates.append(c)
        instances = [{k: v for k, v in r.items() if k != "candidate"} for r in records]
        total = len(records)
        payload = {
            "schema": SCHEMA,
            "config": config,
            "totals": {
                "trials": total,
                "candidates": len(candidates),
                "candidates_weak_only": sum(1 for c in candidates if c.get("weak_ok")),
                "inconclusive_multiplicity_fraction":
                    status_counts[Status.INCONCLUSIVE_MULTIPLICITY.value] / total if total else 0.0,
            },
            "status_counts": status_counts,
            "cluster_sizes": {str(k): sizes[k] for k in sorted(sizes)},
            "candidates": candidates,
            "instances": instances,
            "timing": {"wall_seconds": wall, "workers": workers},
        }
        payload["digest"] = compute_digest(payload)
        return cls(payload)

    @property
    def digest(self) -> str:
        return self.payload["digest"]

    @property
    def status_counts(self) -> dict:
        return self.payload["status_counts"]

    @property
    def candidates(self) -> list:
        return self.payload["candidates"]

    @property
    def total(self) -> int:
        return self.payload["totals"]["trials"]

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.payload, indent=indent, allow_nan=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "tree", "status", "eigenvalue", "cluster_size"])
        for r in self.payload["instances"]:
            w.writerow([r["index"], r["tree"], r["status"],
                        "" if r["eigenvalue"] is None else repr(r["eigenvalue"]),
                        "" if r["cluster_size"] is None else r["cluster_size"]])
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str) -> "ConjectureReport":
        return cls(json.loads(text))

    def verify_digest(self) -> bool:
        return compute_digest(self.payload) == self.payload.get("digest")
